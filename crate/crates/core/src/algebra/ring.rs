//! Finite-dimensional graded-commutative rings given by a basis and
//! structure constants.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::rational::Rational;

/// Largest total rank accepted for a presentation. Load-time axiom checks
/// are quartic in the rank.
pub const MAX_RING_RANK: usize = 48;

/// Coordinate vector over the flat basis of a [`RingPresentation`].
pub type RingElement = Vec<Rational>;

/// Sparse coordinate vector: `(basis index, coefficient)` with nonzero
/// coefficients only.
type Sparse = Vec<(usize, Rational)>;

/// A graded-commutative ring `H = ⊕ H^d`, `0 ≤ d ≤ top_degree`.
///
/// Basis elements are numbered degree by degree; index 0 is always the
/// unit. The integral is a linear functional on `H^top`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingPresentation {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    labels: Vec<String>,
    degree_of: Vec<usize>,
    table: Vec<Sparse>,
    integral: Vec<Rational>,
}

/// A product entry as supplied by a caller: `x · y = value`, basis
/// elements given by their flat index.
#[derive(Clone, Debug)]
pub struct Product {
    pub left: usize,
    pub right: usize,
    pub value: RingElement,
}

impl RingPresentation {
    /// `H*(pt) = ℚ` with `∫ 1 = 1`.
    pub fn point() -> Self {
        RingPresentation {
            dims: vec![1],
            offsets: vec![0],
            labels: vec!["1".into()],
            degree_of: vec![0],
            table: vec![vec![(0, Rational::one())]],
            integral: vec![Rational::one()],
        }
    }

    /// Builds and checks a presentation.
    ///
    /// `dims[d]` is the rank of `H^d`, so `top_degree = dims.len() - 1`.
    /// Products against the unit are implied and may be omitted; any other
    /// omitted product is zero. `integral` lists the values of `∫` on the
    /// basis of `H^top`.
    pub fn new(
        dims: Vec<usize>,
        labels: Option<Vec<String>>,
        products: &[Product],
        integral: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        if dims.is_empty() {
            return Err(AlgebraError::Presentation("empty dimension list".into()));
        }
        if dims[0] != 1 {
            return Err(AlgebraError::Presentation(format!(
                "degree 0 must have dimension 1, found {}",
                dims[0]
            )));
        }
        let top = dims.len() - 1;
        if dims[top] == 0 {
            return Err(AlgebraError::Presentation(format!("top degree {top} has dimension 0")));
        }
        let rank: usize = dims.iter().sum();
        if rank > MAX_RING_RANK {
            return Err(AlgebraError::Presentation(format!(
                "total rank {rank} exceeds the limit of {MAX_RING_RANK}"
            )));
        }
        let mut offsets = Vec::with_capacity(dims.len());
        let mut degree_of = Vec::with_capacity(rank);
        let mut acc = 0;
        for (d, &n) in dims.iter().enumerate() {
            offsets.push(acc);
            acc += n;
            degree_of.extend(std::iter::repeat_n(d, n));
        }
        let labels = match labels {
            Some(l) if l.len() != rank => {
                return Err(AlgebraError::Presentation(format!(
                    "{} labels for {rank} basis elements",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..rank)
                .map(|i| {
                    let d = degree_of[i];
                    if i == 0 {
                        "1".to_owned()
                    } else {
                        format!("e{}_{}", d, i - offsets[d])
                    }
                })
                .collect(),
        };
        if integral.len() != dims[top] {
            return Err(AlgebraError::Presentation(format!(
                "integral has {} values but the top degree has dimension {}",
                integral.len(),
                dims[top]
            )));
        }
        if top > 0 && integral.iter().all(Zero::is_zero) {
            return Err(AlgebraError::Presentation("integral vanishes identically".into()));
        }
        let mut full_integral = vec![Rational::zero(); rank];
        for (i, v) in integral.into_iter().enumerate() {
            full_integral[offsets[top] + i] = v;
        }
        if top == 0 && full_integral[0].is_zero() {
            return Err(AlgebraError::Presentation("integral vanishes identically".into()));
        }

        let mut table: Vec<Option<Sparse>> = vec![None; rank * rank];
        for j in 0..rank {
            table[j] = Some(vec![(j, Rational::one())]);
            table[j * rank] = Some(vec![(j, Rational::one())]);
        }
        for p in products {
            if p.left >= rank || p.right >= rank {
                return Err(AlgebraError::Presentation(format!(
                    "product ({}, {}) references a basis element out of range",
                    p.left, p.right
                )));
            }
            if p.value.len() != rank {
                return Err(AlgebraError::DimensionMismatch {
                    expected: rank,
                    found: p.value.len(),
                });
            }
            let sparse = to_sparse(&p.value);
            let slot = &mut table[p.left * rank + p.right];
            if p.left == 0 || p.right == 0 {
                if slot.as_ref() != Some(&sparse) {
                    return Err(AlgebraError::Axiom(format!(
                        "unit axiom fails for product ({}, {})",
                        p.left, p.right
                    )));
                }
                continue;
            }
            if slot.is_some() {
                return Err(AlgebraError::Presentation(format!(
                    "product ({}, {}) given twice",
                    p.left, p.right
                )));
            }
            *slot = Some(sparse);
        }
        let ring = RingPresentation {
            dims,
            offsets,
            labels,
            degree_of,
            table: table.into_iter().map(Option::unwrap_or_default).collect(),
            integral: full_integral,
        };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<(), AlgebraError> {
        let n = self.rank();
        let top = self.top_degree();
        for i in 0..n {
            for j in 0..n {
                let d = self.degree_of[i] + self.degree_of[j];
                for (k, _) in &self.table[i * n + j] {
                    if d > top {
                        return Err(AlgebraError::Axiom(format!(
                            "{} · {} lands above the top degree but is nonzero",
                            self.labels[i], self.labels[j]
                        )));
                    }
                    if self.degree_of[*k] != d {
                        return Err(AlgebraError::Axiom(format!(
                            "{} · {} is not homogeneous of degree {d}",
                            self.labels[i], self.labels[j]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let sign = koszul_sign(self.degree_of[i], self.degree_of[j]);
                let xy = self.basis_product(i, j);
                let yx = self.basis_product(j, i);
                if xy != yx.into_iter().map(|v| v * &sign).collect::<Vec<_>>() {
                    return Err(AlgebraError::Axiom(format!(
                        "graded commutativity fails for {} and {}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 1..n {
            for j in 1..n {
                let xy = self.basis_product(i, j);
                for k in 1..n {
                    let left = self.mul_unchecked(&xy, &self.basis(k));
                    let yz = self.basis_product(j, k);
                    let right = self.mul_unchecked(&self.basis(i), &yz);
                    if left != right {
                        return Err(AlgebraError::Axiom(format!(
                            "associativity fails for ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.degree_of.len()
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Rank of `H^d` (0 outside the range).
    pub fn dim(&self, d: i64) -> usize {
        usize::try_from(d)
            .ok()
            .and_then(|d| self.dims.get(d).copied())
            .unwrap_or(0)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.degree_of[i]
    }

    /// Flat index of the `i`-th basis element of degree `d`.
    pub fn index(&self, d: usize, i: usize) -> Option<usize> {
        (d < self.dims.len() && i < self.dims[d]).then(|| self.offsets[d] + i)
    }

    /// Inverse of [`index`](Self::index).
    pub fn position(&self, flat: usize) -> (usize, usize) {
        let d = self.degree_of[flat];
        (d, flat - self.offsets[d])
    }

    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        match self.dims.get(d) {
            Some(&n) => self.offsets[d]..self.offsets[d] + n,
            None => 0..0,
        }
    }

    pub fn integral(&self) -> &[Rational] {
        &self.integral
    }

    pub fn zero(&self) -> RingElement {
        vec![Rational::zero(); self.rank()]
    }

    pub fn unit(&self) -> RingElement {
        self.basis(0)
    }

    pub fn basis(&self, i: usize) -> RingElement {
        let mut v = self.zero();
        v[i] = Rational::one();
        v
    }

    pub fn scalar(&self, c: Rational) -> RingElement {
        let mut v = self.zero();
        v[0] = c;
        v
    }

    /// Products of two basis elements as a dense vector.
    pub fn basis_product(&self, i: usize, j: usize) -> RingElement {
        let mut v = self.zero();
        for (k, c) in &self.table[i * self.rank() + j] {
            v[*k] = c.clone();
        }
        v
    }

    /// The nonzero products `x_i · x_j` with `i, j ≥ 1`, for serialization.
    pub fn nontrivial_products(&self) -> impl Iterator<Item = (usize, usize, RingElement)> + '_ {
        let n = self.rank();
        (1..n)
            .flat_map(move |i| (1..n).map(move |j| (i, j)))
            .filter_map(move |(i, j)| {
                let e = &self.table[i * n + j];
                (!e.is_empty()).then(|| (i, j, self.basis_product(i, j)))
            })
    }

    /// `x · y` by bilinear extension of the structure constants.
    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Result<RingElement, AlgebraError> {
        for v in [x, y] {
            if v.len() != self.rank() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: self.rank(),
                    found: v.len(),
                });
            }
        }
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &[Rational], y: &[Rational]) -> RingElement {
        let n = self.rank();
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let entry = &self.table[i * n + j];
                if entry.is_empty() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in entry {
                    out[*k] += &c * s;
                }
            }
        }
        out
    }

    /// Projection onto `H^d`, as a full-length vector.
    pub fn degree_part(&self, x: &[Rational], d: usize) -> RingElement {
        let range = self.degree_range(d);
        x.iter()
            .enumerate()
            .map(|(i, v)| {
                if range.contains(&i) {
                    v.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    /// True when every nonzero coordinate sits in degree `d`.
    pub fn is_homogeneous(&self, x: &[Rational], d: i64) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, v)| v.is_zero() || self.degree_of[i] as i64 == d)
    }

    /// Lowest degree carrying a nonzero coordinate.
    pub fn min_degree(&self, x: &[Rational]) -> Option<usize> {
        x.iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
            .map(|(i, _)| self.degree_of[i])
    }

    /// `∫ x`; only the top-degree part contributes.
    pub fn integrate(&self, x: &[Rational]) -> Rational {
        crate::linalg::dot(&self.integral, x)
    }

    /// Returns `Some(λ)` when `x = λ · 1`.
    pub fn as_scalar(&self, x: &[Rational]) -> Option<Rational> {
        x[1..].iter().all(Zero::is_zero).then(|| x[0].clone())
    }

    pub fn format_element(&self, x: &[Rational]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| {
                let c = crate::rational::Compact(v);
                if i == 0 {
                    c.to_string()
                } else {
                    format!("{c}·{}", self.labels[i])
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingPresentation")
            .field("dims", &self.dims)
            .field("labels", &self.labels)
            .finish()
    }
}

/// `(-1)^{ab}`.
pub fn koszul_sign(a: usize, b: usize) -> Rational {
    if a % 2 == 1 && b % 2 == 1 {
        -Rational::one()
    } else {
        Rational::one()
    }
}

fn to_sparse(v: &[Rational]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// `ℚ[h]/(h^{n+1})` with `h` in degree `gen_degree` and `∫ h^n = 1`:
/// the cohomology of `ℂP^n` (`gen_degree = 2`) or of `S^k` (`n = 1`).
pub fn truncated_polynomial(gen_degree: usize, n: usize) -> RingPresentation {
    assert!(gen_degree >= 1 && (n <= 1 || gen_degree.is_multiple_of(2)));
    let top = gen_degree * n;
    let mut dims = vec![0; top + 1];
    for k in 0..=n {
        dims[k * gen_degree] = 1;
    }
    let labels = (0..=n)
        .map(|k| match k {
            0 => "1".to_owned(),
            1 => "h".to_owned(),
            _ => format!("h^{k}"),
        })
        .collect();
    let rank = n + 1;
    let mut products = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if a + b <= n {
                let mut value = vec![Rational::zero(); rank];
                value[a + b] = Rational::one();
                products.push(Product {
                    left: a,
                    right: b,
                    value,
                });
            }
        }
    }
    RingPresentation::new(dims, Some(labels), &products, vec![Rational::one()])
        .expect("truncated polynomial ring is well formed")
}

/// Cohomology of a closed oriented surface of genus `g`: basis
/// `1, a_1..a_g, b_1..b_g, ω` with `a_i b_i = ω = -b_i a_i` and `∫ ω = 1`.
pub fn surface(genus: usize) -> RingPresentation {
    let g = genus;
    let rank = 2 * g + 2;
    let omega = rank - 1;
    let mut labels = vec!["1".to_owned()];
    labels.extend((1..=g).map(|i| format!("a{i}")));
    labels.extend((1..=g).map(|i| format!("b{i}")));
    labels.push("ω".into());
    let mut products = Vec::new();
    for i in 0..g {
        let a = 1 + i;
        let b = 1 + g + i;
        let mut value = vec![Rational::zero(); rank];
        value[omega] = Rational::one();
        products.push(Product {
            left: a,
            right: b,
            value: value.clone(),
        });
        value[omega] = -Rational::one();
        products.push(Product {
            left: b,
            right: a,
            value,
        });
    }
    RingPresentation::new(vec![1, 2 * g, 1], Some(labels), &products, vec![Rational::one()])
        .expect("surface ring is well formed")
}
