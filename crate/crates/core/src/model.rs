//! Fixed-point data of a Hamiltonian circle action and the validators run
//! before any engine computation.
//!
//! Near a fixed component `F` the moment map has the normal form
//! `Φ(F) + ½ Σ κ_i |z_i|²`, so the normal weights `κ_i` determine both the
//! Morse index of `F` and the leading term `Π κ_i^{n_i} t^{codim/2}` of its
//! equivariant Euler class.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{LaurentElement, RingPresentation};
use crate::error::{AlgebraError, ModelError};
use crate::linalg::Matrix;
use crate::rational::{Compact, Rational};

/// A normal weight `κ` with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    pub k: i64,
    pub mult: u32,
}

impl Weight {
    pub fn new(k: i64, mult: u32) -> Self {
        Weight { k, mult }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Plus,
    Minus,
}

/// How a component lying exactly on the reduction level is assigned.
///
/// [`IndexRule::Standard`] puts `F` in `𝓕⁺` iff
/// `index F ≤ ½ (dim M − dim F)`. The other two exist only as negative
/// controls: [`IndexRule::Flipped`] reverses the inequality
/// (`index F ≥ ½ (dim M − dim F)`), [`IndexRule::Negated`] takes its
/// complement (`index F > ½ (dim M − dim F)`), so ties go to `𝓕⁻`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IndexRule {
    #[default]
    Standard,
    Flipped,
    Negated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedComponent {
    id: String,
    dim: u32,
    moment: Rational,
    weights: Vec<Weight>,
    cohomology: Arc<RingPresentation>,
    euler: LaurentElement,
    euler_inverse: LaurentElement,
}

impl FixedComponent {
    /// An isolated fixed point; the Euler class is built from the weights.
    pub fn isolated(
        id: impl Into<String>,
        moment: Rational,
        weights: Vec<Weight>,
        dim_m: u32,
    ) -> Result<Self, ModelError> {
        Self::new(id, 0, moment, weights, Arc::new(RingPresentation::point()), None, dim_m)
    }

    /// A component of real dimension `dim`. `euler` is mandatory when
    /// `dim > 0`; for isolated points it is optional and checked against
    /// the product of the weights when given.
    pub fn new(
        id: impl Into<String>,
        dim: u32,
        moment: Rational,
        weights: Vec<Weight>,
        cohomology: Arc<RingPresentation>,
        euler: Option<LaurentElement>,
        dim_m: u32,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let err = |field: &str, msg: String| ModelError::new(format!("component {id:?}.{field}"), msg);
        if !dim.is_multiple_of(2) {
            return Err(err("dim", format!("dimension {dim} is odd")));
        }
        if dim >= dim_m {
            return Err(err("dim", format!("dimension {dim} is not below dim M = {dim_m}")));
        }
        if cohomology.top_degree() != dim as usize {
            return Err(err(
                "cohomology",
                format!("top degree {} differs from dimension {dim}", cohomology.top_degree()),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut codim: u64 = 0;
        for w in &weights {
            if w.k == 0 {
                return Err(err("weights", "weight 0 in the normal representation".into()));
            }
            if w.mult == 0 {
                return Err(err("weights", format!("weight {} has multiplicity 0", w.k)));
            }
            if !seen.insert(w.k) {
                return Err(err(
                    "weights",
                    format!("weight {} listed twice; weights must be distinct", w.k),
                ));
            }
            codim += 2 * u64::from(w.mult);
        }
        if codim != u64::from(dim_m - dim) {
            return Err(err(
                "weights",
                format!(
                    "weights span real codimension {codim}, expected dim M − dim F = {}",
                    dim_m - dim
                ),
            ));
        }
        let n = i64::from((dim_m - dim) / 2);
        let leading = weight_product(&weights);
        let euler = match euler {
            Some(e) => {
                if !Arc::ptr_eq(e.ring(), &cohomology) && **e.ring() != *cohomology {
                    return Err(err("eulerClass", "Euler class is over a different ring".into()));
                }
                if !e.is_homogeneous(2 * n) || e.is_zero() {
                    return Err(err(
                        "eulerClass",
                        format!("Euler class is not homogeneous of degree {}", 2 * n),
                    ));
                }
                if e.max_power().is_some_and(|p| p > n)
                    || cohomology.as_scalar(&e.coefficient(n)) != Some(leading.clone())
                {
                    return Err(err(
                        "eulerClass",
                        format!("Euler leading term mismatch: expected {}·t^{n}", Compact(&leading)),
                    ));
                }
                e
            }
            None if dim == 0 => LaurentElement::scalar_power(cohomology.clone(), leading, n),
            None => {
                return Err(err(
                    "eulerClass",
                    "non-isolated component needs an explicit Euler class".into(),
                ))
            }
        };
        let euler_inverse = euler.invert_euler().map_err(|e| err("eulerClass", e.to_string()))?;
        Ok(FixedComponent {
            id,
            dim,
            moment,
            weights,
            cohomology,
            euler,
            euler_inverse,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn moment(&self) -> &Rational {
        &self.moment
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn cohomology(&self) -> &Arc<RingPresentation> {
        &self.cohomology
    }

    pub fn euler(&self) -> &LaurentElement {
        &self.euler
    }

    pub fn euler_inverse(&self) -> &LaurentElement {
        &self.euler_inverse
    }

    pub fn is_isolated(&self) -> bool {
        self.dim == 0
    }

    /// Real dimension of the normal space.
    pub fn codim(&self) -> u32 {
        self.weights.iter().map(|w| 2 * w.mult).sum()
    }

    /// Real dimension of the positive normal space `V⁺`.
    pub fn coindex(&self) -> u32 {
        self.weights.iter().filter(|w| w.k > 0).map(|w| 2 * w.mult).sum()
    }

    fn with_moment(&self, moment: Rational) -> Self {
        FixedComponent { moment, ..self.clone() }
    }
}

fn weight_product(weights: &[Weight]) -> Rational {
    let p = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc * BigInt::from(w.k).pow(w.mult));
    Rational::from_integer(p)
}

/// Morse index: `2 Σ_{κ_i < 0} n_i`, the real dimension of `V⁻`.
pub fn index_of(f: &FixedComponent) -> u32 {
    f.weights.iter().filter(|w| w.k < 0).map(|w| 2 * w.mult).sum()
}

/// Side of `f` for reduction at `level`.
pub fn classify(f: &FixedComponent, level: &Rational, dim_m: u32) -> Side {
    classify_with(f, level, dim_m, IndexRule::Standard)
}

pub fn classify_with(f: &FixedComponent, level: &Rational, dim_m: u32, rule: IndexRule) -> Side {
    if f.moment > *level {
        return Side::Plus;
    }
    if f.moment < *level {
        return Side::Minus;
    }
    // index ≤ ½(dim M − dim F), kept in integers.
    let twice_index = 2 * index_of(f);
    let codim = dim_m - f.dim;
    let plus = match rule {
        IndexRule::Standard => twice_index <= codim,
        IndexRule::Flipped => twice_index >= codim,
        IndexRule::Negated => twice_index > codim,
    };
    if plus {
        Side::Plus
    } else {
        Side::Minus
    }
}

/// `(Π κ_i^{n_i}) t^{dim M / 2}` over the point ring.
pub fn euler_class_isolated(f: &FixedComponent, dim_m: u32) -> Result<LaurentElement, ModelError> {
    if !f.is_isolated() {
        return Err(ModelError::new(
            format!("component {:?}", f.id),
            "Euler class can only be built for isolated fixed points",
        ));
    }
    Ok(LaurentElement::scalar_power(
        Arc::new(RingPresentation::point()),
        weight_product(&f.weights),
        i64::from(dim_m / 2),
    ))
}

/// An equivariant class, recorded by its restrictions to the fixed
/// components (in the instance's component order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    pub name: String,
    pub degree: u32,
    pub restrictions: Vec<LaurentElement>,
}

impl EquivariantClass {
    pub fn product(&self, other: &Self) -> Result<Self, AlgebraError> {
        let restrictions = self
            .restrictions
            .iter()
            .zip(&other.restrictions)
            .map(|(a, b)| a.multiply(b))
            .collect::<Result<_, _>>()?;
        Ok(EquivariantClass {
            name: format!("({})·({})", self.name, other.name),
            degree: self.degree + other.degree,
            restrictions,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.restrictions.iter().all(LaurentElement::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    name: String,
    dim_m: u32,
    degree_bound: u32,
    components: Vec<FixedComponent>,
    classes: Vec<EquivariantClass>,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        dim_m: u32,
        degree_bound: u32,
        components: Vec<FixedComponent>,
        classes: Vec<EquivariantClass>,
    ) -> Result<Self, ModelError> {
        if dim_m == 0 || !dim_m.is_multiple_of(2) {
            return Err(ModelError::new(
                "dimM",
                format!("dim M = {dim_m} must be even and positive"),
            ));
        }
        if degree_bound + 2 < dim_m {
            return Err(ModelError::new(
                "degreeBound",
                format!("degree bound {degree_bound} is below dim M − 2 = {}", dim_m - 2),
            ));
        }
        if components.is_empty() {
            return Err(ModelError::new("components", "no fixed components"));
        }
        let mut ids = BTreeSet::new();
        for (i, c) in components.iter().enumerate() {
            if !ids.insert(c.id.as_str()) {
                return Err(ModelError::new(
                    format!("components[{i}].id"),
                    format!("duplicate id {:?}", c.id),
                ));
            }
            if c.codim() + c.dim != dim_m {
                return Err(ModelError::new(
                    format!("components[{i}]"),
                    "component was built for a different dim M",
                ));
            }
        }
        if !components.iter().any(|c| c.moment.is_positive()) || !components.iter().any(|c| c.moment.is_negative()) {
            return Err(ModelError::new(
                "components",
                "0 must lie in the interior of the moment image (need Φ(F) > 0 and Φ(F) < 0)",
            ));
        }
        let max = components.iter().map(|c| &c.moment).max().unwrap();
        let min = components.iter().map(|c| &c.moment).min().unwrap();
        for (i, c) in components.iter().enumerate() {
            if &c.moment == max && c.weights.iter().any(|w| w.k > 0) {
                return Err(ModelError::new(
                    format!("components[{i}].weights"),
                    "a component of maximal Φ must have only negative weights",
                ));
            }
            if &c.moment == min && c.weights.iter().any(|w| w.k < 0) {
                return Err(ModelError::new(
                    format!("components[{i}].weights"),
                    "a component of minimal Φ must have only positive weights",
                ));
            }
        }

        let mut names = BTreeSet::new();
        for (i, class) in classes.iter().enumerate() {
            let at = |f: &str| format!("classes[{i}]{f}");
            if !names.insert(class.name.as_str()) {
                return Err(ModelError::new(
                    at(".name"),
                    format!("duplicate class name {:?}", class.name),
                ));
            }
            if class.degree > degree_bound {
                return Err(ModelError::new(
                    at(".degree"),
                    format!("degree {} exceeds the degree bound {degree_bound}", class.degree),
                ));
            }
            if class.restrictions.len() != components.len() {
                return Err(ModelError::new(
                    at(".restrictions"),
                    format!(
                        "{} restrictions for {} components",
                        class.restrictions.len(),
                        components.len()
                    ),
                ));
            }
            for (r, c) in class.restrictions.iter().zip(&components) {
                let at = at(&format!(".restrictions.{}", c.id));
                if !r.same_ring(&LaurentElement::zero(c.cohomology.clone())) {
                    return Err(ModelError::new(at, "restriction is over the wrong ring"));
                }
                if !r.is_homogeneous(i64::from(class.degree)) {
                    return Err(ModelError::new(
                        at,
                        format!("not homogeneous of degree {}", class.degree),
                    ));
                }
                if r.min_power().is_some_and(|p| p < 0) {
                    return Err(ModelError::new(at, "restriction has a negative power of t"));
                }
            }
        }

        let inst = Instance {
            name: name.into(),
            dim_m,
            degree_bound,
            components,
            classes,
        };
        for d in 0..=degree_bound {
            let m = inst.class_matrix(d);
            if m.rank() != m.rows() {
                return Err(ModelError::new(
                    "classes",
                    format!("classes of degree {d} are linearly dependent"),
                ));
            }
        }
        Ok(inst)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_m(&self) -> u32 {
        self.dim_m
    }

    /// Real dimension of the reduced space, `dim M − 2`.
    pub fn reduced_dim(&self) -> u32 {
        self.dim_m - 2
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn components(&self) -> &[FixedComponent] {
        &self.components
    }

    pub fn classes(&self) -> &[EquivariantClass] {
        &self.classes
    }

    pub fn class(&self, name: &str) -> Option<&EquivariantClass> {
        self.classes.iter().find(|c| c.name == name)
    }

    /// Declared classes of degree `d`, in declaration order.
    pub fn classes_of_degree(&self, d: u32) -> Vec<&EquivariantClass> {
        self.classes.iter().filter(|c| c.degree == d).collect()
    }

    /// Lowers the degree bound, dropping classes above it. The bound never
    /// goes below `dim M − 2`.
    pub fn capped(&self, cap: u32) -> Instance {
        let bound = self.degree_bound.min(cap.max(self.dim_m - 2));
        Instance {
            degree_bound: bound,
            classes: self.classes.iter().filter(|c| c.degree <= bound).cloned().collect(),
            ..self.clone()
        }
    }

    /// The same instance with every moment value shifted by `-by`.
    pub fn translated(&self, by: &Rational) -> Instance {
        Instance {
            components: self.components.iter().map(|c| c.with_moment(&c.moment - by)).collect(),
            ..self.clone()
        }
    }

    /// Distinct moment values in increasing order.
    pub fn critical_values(&self) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self.components.iter().map(|c| c.moment.clone()).collect();
        set.into_iter().collect()
    }

    /// Length of the coordinate vector of a degree-`d` restriction to `f`.
    pub fn coordinate_len(f: &FixedComponent, d: u32) -> usize {
        (0..=d / 2)
            .map(|j| f.cohomology.dim(i64::from(d) - 2 * i64::from(j)))
            .sum()
    }

    /// Coordinates of a degree-`d` restriction: for `j = 0, 1, …` the
    /// coefficients of `t^j` in ring degree `d − 2j`.
    pub fn restriction_coordinates(f: &FixedComponent, r: &LaurentElement, d: u32) -> Vec<Rational> {
        let mut out = Vec::with_capacity(Self::coordinate_len(f, d));
        for j in 0..=d / 2 {
            let c = r.coefficient(i64::from(j));
            let deg = (d - 2 * j) as usize;
            out.extend(f.cohomology.degree_range(deg).map(|i| c[i].clone()));
        }
        out
    }

    /// Concatenated coordinates of a class at the components selected by
    /// `mask`.
    pub fn tuple_coordinates(&self, class: &EquivariantClass, mask: &[bool]) -> Vec<Rational> {
        self.components
            .iter()
            .zip(&class.restrictions)
            .zip(mask)
            .filter(|(_, &m)| m)
            .flat_map(|((f, r), _)| Self::restriction_coordinates(f, r, class.degree))
            .collect()
    }

    /// Rows are the full restriction coordinates of the degree-`d` classes.
    pub fn class_matrix(&self, d: u32) -> Matrix {
        let mask = vec![true; self.components.len()];
        let cols: usize = self.components.iter().map(|f| Self::coordinate_len(f, d)).sum();
        let rows = self
            .classes_of_degree(d)
            .into_iter()
            .map(|c| self.tuple_coordinates(c, &mask))
            .collect();
        Matrix::from_rows(cols, rows)
    }

    /// `Σ_i coeffs[i] · (i-th class of degree d)`.
    pub fn combination(&self, d: u32, coeffs: &[Rational]) -> EquivariantClass {
        let basis = self.classes_of_degree(d);
        assert_eq!(basis.len(), coeffs.len(), "coefficient count");
        let restrictions = self
            .components
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                basis
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| !c.is_zero())
                    .fold(LaurentElement::zero(f.cohomology.clone()), |acc, (b, c)| {
                        acc.add(&b.restrictions[fi].scale(c)).expect("same ring")
                    })
            })
            .collect();
        EquivariantClass {
            name: format!("combination in degree {d}"),
            degree: d,
            restrictions,
        }
    }

    /// Solves for the coordinates of a class in the declared degree basis.
    pub fn coordinates_in_basis(&self, class: &EquivariantClass) -> Option<Vec<Rational>> {
        let m = self.class_matrix(class.degree);
        let mask = vec![true; self.components.len()];
        let v = self.tuple_coordinates(class, &mask);
        m.transpose().solve(&v)
    }

    /// Non-blocking remarks about the data (currently: ineffective action).
    pub fn warnings(&self) -> Vec<String> {
        let g = self
            .components
            .iter()
            .flat_map(|c| c.weights.iter())
            .fold(0i64, |acc, w| acc.gcd(&w.k));
        if g > 1 {
            vec![format!("all weights are divisible by {g}; the action is not effective")]
        } else {
            Vec::new()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbbvFailure {
    pub class: String,
    /// `(exponent, coefficient)` for each offending negative power of `t`.
    pub exponents: Vec<(i64, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AbbvReport {
    pub checked: usize,
    pub failures: Vec<AbbvFailure>,
}

impl AbbvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Σ_F ∫_F α|_F / e_F` as a Laurent polynomial over ℚ.
pub fn localization_sum(inst: &Instance, class: &EquivariantClass) -> BTreeMap<i64, Rational> {
    let mut total: BTreeMap<i64, Rational> = BTreeMap::new();
    for (f, r) in inst.components.iter().zip(&class.restrictions) {
        let q = r
            .multiply(f.euler_inverse())
            .expect("restriction and Euler class share a ring");
        for (p, v) in q.integrate_coefficients() {
            *total.entry(p).or_insert_with(Rational::zero) += v;
        }
    }
    total.retain(|_, v| !v.is_zero());
    total
}

/// Localization check: for a compact manifold the full fixed-point sum is
/// a polynomial in `t`, so no negative power may survive.
pub fn validate_abbv(inst: &Instance) -> AbbvReport {
    let failures = inst
        .classes
        .iter()
        .filter_map(|class| {
            let exponents: Vec<(i64, String)> = localization_sum(inst, class)
                .into_iter()
                .filter(|(p, _)| *p < 0)
                .map(|(p, v)| (p, crate::rational::format_rational(&v)))
                .collect();
            (!exponents.is_empty()).then(|| AbbvFailure {
                class: class.name.clone(),
                exponents,
            })
        })
        .collect();
    AbbvReport {
        checked: inst.classes.len(),
        failures,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseDegree {
    pub degree: u32,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub degrees: Vec<MorseDegree>,
}

impl MorseReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.expected == d.found)
    }

    pub fn mismatches(&self) -> Vec<u32> {
        self.degrees
            .iter()
            .filter(|d| d.expected != d.found)
            .map(|d| d.degree)
            .collect()
    }
}

/// `Σ_F Σ_{j≥0} dim H^{d − index F − 2j}(F)`: the rank of `H^d_{S¹}(M)`
/// when the moment map is equivariantly perfect.
pub fn morse_count(inst: &Instance, d: u32) -> usize {
    inst.components
        .iter()
        .map(|f| {
            let shifted = i64::from(d) - i64::from(index_of(f));
            (0..)
                .map(|j| shifted - 2 * j)
                .take_while(|&e| e >= 0)
                .map(|e| f.cohomology.dim(e))
                .sum::<usize>()
        })
        .sum()
}

/// Compares the declared class count in each degree against the Morse
/// count.
pub fn validate_morse(inst: &Instance) -> MorseReport {
    MorseReport {
        degrees: (0..=inst.degree_bound)
            .map(|d| MorseDegree {
                degree: d,
                expected: morse_count(inst, d),
                found: inst.classes_of_degree(d).len(),
            })
            .collect(),
    }
}
