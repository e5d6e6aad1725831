//! Intersection cohomology of the reduced space `Φ⁻¹(c)/S¹` from the
//! restriction data of an instance.
//!
//! Two routes are implemented and cross-checked:
//!
//! * the residue pairing `⟨κα, κβ⟩ = Res₀ Σ_{F ∈ 𝓕⁺} ∫_F α|_F β|_F / e_F`;
//! * the quotient `H*_{S¹}(M) / (K₊ ⊕ K₋)`, where `K±` is the set of classes
//!   vanishing on every component of `𝓕±`.
//!
//! At a regular level both reduce to the classical description of the
//! ordinary cohomology of the orbifold quotient via the Kirwan map.

use num_traits::Zero;
use serde::Serialize;

use crate::error::EngineError;
use crate::linalg::{same_row_space, Matrix};
use crate::model::{classify_with, validate_morse, EquivariantClass, IndexRule, Instance, Side};
use crate::rational::{Compact, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Singular,
    Regular,
}

/// A reduction of `inst` at a fixed level, with every component assigned
/// to `𝓕⁺` or `𝓕⁻`.
#[derive(Clone, Debug)]
pub struct Reduction<'a> {
    inst: &'a Instance,
    level: Rational,
    sides: Vec<Side>,
    mode: Mode,
}

impl<'a> Reduction<'a> {
    pub fn new(inst: &'a Instance, level: Rational) -> Result<Self, EngineError> {
        Self::with_rule(inst, level, IndexRule::Standard)
    }

    /// As [`new`](Self::new) with an explicit tie rule for components on
    /// the level.
    pub fn with_rule(inst: &'a Instance, level: Rational, rule: IndexRule) -> Result<Self, EngineError> {
        Self::check(inst, &level)?;
        let sides = inst
            .components()
            .iter()
            .map(|f| classify_with(f, &level, inst.dim_m(), rule))
            .collect();
        Ok(Self::assemble(inst, level, sides))
    }

    /// Reduction at a regular value: sides come from the sign of
    /// `Φ(F) − c` alone.
    pub fn regular(inst: &'a Instance, level: Rational) -> Result<Self, EngineError> {
        Self::check(inst, &level)?;
        if inst.components().iter().any(|f| *f.moment() == level) {
            return Err(EngineError::CriticalLevel(Compact(&level).to_string()));
        }
        let sides = inst
            .components()
            .iter()
            .map(|f| if *f.moment() > level { Side::Plus } else { Side::Minus })
            .collect();
        Ok(Self::assemble(inst, level, sides))
    }

    fn check(inst: &Instance, level: &Rational) -> Result<(), EngineError> {
        let above = inst.components().iter().any(|f| f.moment() > level);
        let below = inst.components().iter().any(|f| f.moment() < level);
        if !(above && below) {
            return Err(EngineError::NotInterior(Compact(level).to_string()));
        }
        let morse = validate_morse(inst);
        if !morse.passed() {
            return Err(EngineError::MorseMismatch(morse.mismatches()));
        }
        Ok(())
    }

    fn assemble(inst: &'a Instance, level: Rational, sides: Vec<Side>) -> Self {
        let mode = if inst.components().iter().any(|f| *f.moment() == level) {
            Mode::Singular
        } else {
            Mode::Regular
        };
        Reduction {
            inst,
            level,
            sides,
            mode,
        }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    pub fn level(&self) -> &Rational {
        &self.level
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    fn mask(&self, side: Side) -> Vec<bool> {
        self.sides.iter().map(|s| *s == side).collect()
    }

    /// Basis (as rows over the degree-`d` class basis) of the classes that
    /// vanish on every component of the given side.
    pub fn kernel_side(&self, side: Side, d: u32) -> Matrix {
        let mask = self.mask(side);
        let classes = self.inst.classes_of_degree(d);
        let len: usize = self
            .inst
            .components()
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(f, _)| Instance::coordinate_len(f, d))
            .sum();
        // Columns are classes, rows are restriction coordinates.
        let eval = Matrix::from_rows(
            len,
            classes.iter().map(|c| self.inst.tuple_coordinates(c, &mask)).collect(),
        )
        .transpose();
        eval.nullspace()
    }

    fn degree_kernel(&self, d: u32) -> DegreeKernel {
        let dim_h = self.inst.classes_of_degree(d).len();
        let k_plus = self.kernel_side(Side::Plus, d);
        let k_minus = self.kernel_side(Side::Minus, d);
        let sum = k_plus.vstack(&k_minus);
        let dim_k = sum.rank();
        DegreeKernel {
            degree: d,
            dim_h,
            dim_k_plus: k_plus.rows(),
            dim_k_minus: k_minus.rows(),
            dim_k,
            dim_ih: dim_h - dim_k,
            k_plus,
            k_minus,
        }
    }

    /// Kernel dimensions in every degree up to the degree bound, without
    /// raising on inconsistencies.
    pub fn kernel_report_unchecked(&self) -> KernelReport {
        let per_degree: Vec<DegreeKernel> = (0..=self.inst.degree_bound()).map(|d| self.degree_kernel(d)).collect();
        let direct = per_degree.iter().all(|k| k.dim_k == k.dim_k_plus + k.dim_k_minus);
        KernelReport {
            level: self.level.clone(),
            per_degree,
            direct,
        }
    }

    /// `dim IH^d = dim H^d_{S¹}(M) − dim (K₊ + K₋)_d`.
    pub fn kernel_report(&self) -> Result<KernelReport, EngineError> {
        let report = self.kernel_report_unchecked();
        if let Some(k) = report
            .per_degree
            .iter()
            .find(|k| k.dim_k != k.dim_k_plus + k.dim_k_minus)
        {
            return Err(EngineError::NotDirect(k.degree));
        }
        let top = self.inst.reduced_dim();
        if let Some(k) = report.per_degree.iter().find(|k| k.degree > top && k.dim_ih != 0) {
            return Err(EngineError::Inconsistent(format!(
                "quotient has dimension {} in degree {} above dim M_red = {top}",
                k.dim_ih, k.degree
            )));
        }
        Ok(report)
    }

    /// Residue pairing without the degree shortcut.
    pub fn residue_pairing(&self, a: &EquivariantClass, b: &EquivariantClass) -> Result<Rational, EngineError> {
        let mut total = Rational::zero();
        for (fi, f) in self.inst.components().iter().enumerate() {
            if self.sides[fi] != Side::Plus {
                continue;
            }
            let ab = a.restrictions[fi].multiply(&b.restrictions[fi])?;
            if ab.is_zero() {
                continue;
            }
            total += ab.multiply(f.euler_inverse())?.residue_integral();
        }
        Ok(total)
    }

    /// `⟨κα, κβ⟩`; zero unless `deg α + deg β = dim M − 2`.
    pub fn pairing(&self, a: &EquivariantClass, b: &EquivariantClass) -> Result<Rational, EngineError> {
        if a.degree + b.degree != self.inst.reduced_dim() {
            return Ok(Rational::zero());
        }
        self.residue_pairing(a, b)
    }

    /// `∫ κγ` for `γ` of degree `dim M − 2`.
    pub fn integrate_top(&self, g: &EquivariantClass) -> Result<Rational, EngineError> {
        let top = self.inst.reduced_dim();
        if g.degree != top {
            return Err(EngineError::DegreeMismatch {
                expected: top,
                found: g.degree,
            });
        }
        let one = self.unit_class();
        self.residue_pairing(g, &one)
    }

    fn unit_class(&self) -> EquivariantClass {
        EquivariantClass {
            name: "1".into(),
            degree: 0,
            restrictions: self
                .inst
                .components()
                .iter()
                .map(|f| crate::algebra::LaurentElement::one(f.cohomology().clone()))
                .collect(),
        }
    }

    /// Ring structure, integration and pairing matrices of the quotient.
    pub fn presentation(&self) -> Result<IHPresentation, EngineError> {
        let report = self.kernel_report()?;
        let top = self.inst.reduced_dim();
        let quotients: Vec<QuotientDegree> = (0..=top)
            .map(|d| QuotientDegree::new(&report.per_degree[d as usize]))
            .collect();

        self.check_ideal(&report)?;

        let rep_class =
            |d: u32, i: usize| -> &EquivariantClass { self.inst.classes_of_degree(d)[quotients[d as usize].reps[i]] };

        let mut products = Vec::new();
        for p in 0..=top {
            for q in 0..=top - p {
                for i in 0..quotients[p as usize].reps.len() {
                    for j in 0..quotients[q as usize].reps.len() {
                        let prod = rep_class(p, i).product(rep_class(q, j))?;
                        let coords = self.inst.coordinates_in_basis(&prod).ok_or_else(|| {
                            EngineError::Inconsistent(format!(
                                "product {} is not in the span of the declared degree-{} classes",
                                prod.name,
                                p + q
                            ))
                        })?;
                        let value = quotients[(p + q) as usize].reduce(&coords);
                        if value.iter().any(|v| !v.is_zero()) {
                            products.push(StructureConstant {
                                left: (p, i),
                                right: (q, j),
                                value,
                            });
                        }
                    }
                }
            }
        }

        let integration = (0..quotients[top as usize].reps.len())
            .map(|i| self.integrate_top(rep_class(top, i)))
            .collect::<Result<Vec<_>, _>>()?;
        let k_top = &quotients[top as usize].kernel;
        for r in 0..k_top.rows() {
            let k = self.inst.combination(top, k_top.row(r));
            if !self.integrate_top(&k)?.is_zero() {
                return Err(EngineError::Inconsistent(
                    "integration does not vanish on the kernel".into(),
                ));
            }
        }

        let mut pairing_matrices = Vec::new();
        for p in 0..=top {
            let rows = quotients[p as usize].reps.len();
            let cols = quotients[(top - p) as usize].reps.len();
            let mut m = Matrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, self.pairing(rep_class(p, i), rep_class(top - p, j))?);
                }
            }
            pairing_matrices.push(m);
        }

        Ok(IHPresentation {
            level: self.level.clone(),
            mode: self.mode,
            reduced_dim: top,
            betti: quotients.iter().map(|q| q.reps.len()).collect(),
            representatives: (0..=top)
                .map(|d| {
                    quotients[d as usize]
                        .reps
                        .iter()
                        .map(|&i| self.inst.classes_of_degree(d)[i].name.clone())
                        .collect()
                })
                .collect(),
            products,
            integration,
            pairing_matrices,
        })
    }

    /// `κα` in coordinates over the representatives that
    /// [`presentation`](Self::presentation) picks in degree `deg α`.
    pub fn kirwan_image(&self, class: &EquivariantClass) -> Result<Vec<Rational>, EngineError> {
        let top = self.inst.reduced_dim();
        if class.degree > top {
            return Ok(Vec::new());
        }
        let coords = self
            .inst
            .coordinates_in_basis(class)
            .ok_or_else(|| EngineError::UnknownClass(class.name.clone()))?;
        Ok(QuotientDegree::new(&self.degree_kernel(class.degree)).reduce(&coords))
    }

    /// Products of kernel elements with declared classes stay in the
    /// kernel, in every degree the class basis covers.
    fn check_ideal(&self, report: &KernelReport) -> Result<(), EngineError> {
        let bound = self.inst.degree_bound();
        let kernels: Vec<Matrix> = report.per_degree.iter().map(|k| k.k_plus.vstack(&k.k_minus)).collect();
        for (p, kp) in kernels.iter().enumerate() {
            let p = p as u32;
            for r in 0..kp.rows() {
                let k = self.inst.combination(p, kp.row(r));
                for q in 0..=bound - p {
                    let kq = &kernels[(p + q) as usize];
                    for b in self.inst.classes_of_degree(q) {
                        let prod = k.product(b)?;
                        let coords = self.inst.coordinates_in_basis(&prod).ok_or_else(|| {
                            EngineError::Inconsistent(format!(
                                "product of a kernel class with {} is not in the span of the declared classes",
                                b.name
                            ))
                        })?;
                        let with = kq.vstack(&Matrix::from_rows(coords.len(), vec![coords]));
                        if with.rank() != kq.rank() {
                            return Err(EngineError::NotIdeal(format!(
                                "kernel class of degree {p} times {} leaves the kernel",
                                b.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Per-degree quotient data: representative classes (indices into the
/// degree's class list) and the kernel basis.
struct QuotientDegree {
    reps: Vec<usize>,
    kernel: Matrix,
    /// Transpose of `[reps; kernel]`, for reducing coordinates mod K.
    solve: Matrix,
}

impl QuotientDegree {
    fn new(k: &DegreeKernel) -> Self {
        let n = k.dim_h;
        let kernel = k.k_plus.vstack(&k.k_minus).row_basis();
        let mut span = kernel.clone();
        let mut reps = Vec::new();
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::from_integer(1.into());
            let grown = span.vstack(&Matrix::from_rows(n, vec![e]));
            if grown.rank() > span.rank() {
                reps.push(i);
                span = grown;
            }
        }
        debug_assert_eq!(reps.len(), k.dim_ih);
        let mut rows = Vec::new();
        for &i in &reps {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::from_integer(1.into());
            rows.push(e);
        }
        rows.extend(kernel.row_vecs());
        let solve = Matrix::from_rows(n, rows).transpose();
        QuotientDegree { reps, kernel, solve }
    }

    /// Coordinates over the representatives of a class given in the
    /// declared basis.
    fn reduce(&self, coords: &[Rational]) -> Vec<Rational> {
        let x = self
            .solve
            .solve(coords)
            .expect("representatives and kernel span the degree");
        x[..self.reps.len()].to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DegreeKernel {
    pub degree: u32,
    pub dim_h: usize,
    pub dim_k_plus: usize,
    pub dim_k_minus: usize,
    pub dim_k: usize,
    pub dim_ih: usize,
    #[serde(rename = "basisKPlus")]
    pub k_plus: Matrix,
    #[serde(rename = "basisKMinus")]
    pub k_minus: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelReport {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub level: Rational,
    pub per_degree: Vec<DegreeKernel>,
    pub direct: bool,
}

impl KernelReport {
    /// `dim IH^d` for `d = 0..=top`.
    pub fn betti(&self, top: u32) -> Vec<usize> {
        self.per_degree
            .iter()
            .take(top as usize + 1)
            .map(|k| k.dim_ih)
            .collect()
    }
}

/// `x_{left} · x_{right} = Σ value_k x_k` over the representatives of
/// degree `left.0 + right.0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstant {
    pub left: (u32, usize),
    pub right: (u32, usize),
    #[serde(serialize_with = "crate::rational::serialize_vec")]
    pub value: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IHPresentation {
    #[serde(serialize_with = "crate::rational::serialize")]
    pub level: Rational,
    pub mode: Mode,
    pub reduced_dim: u32,
    pub betti: Vec<usize>,
    /// Per degree, the declared classes chosen as a basis of `H^d / K_d`.
    pub representatives: Vec<Vec<String>>,
    pub products: Vec<StructureConstant>,
    /// `∫` on the degree-`dim M_red` representatives.
    #[serde(serialize_with = "crate::rational::serialize_vec")]
    pub integration: Vec<Rational>,
    /// For each `p`, the pairing between degrees `p` and `dim M_red − p`.
    pub pairing_matrices: Vec<Matrix>,
}

impl IHPresentation {
    /// Product of two representatives, in coordinates over the
    /// representatives of the sum degree (empty above the top degree).
    pub fn multiply(&self, left: (u32, usize), right: (u32, usize)) -> Vec<Rational> {
        let d = left.0 + right.0;
        if d > self.reduced_dim {
            return Vec::new();
        }
        self.products
            .iter()
            .find(|s| s.left == left && s.right == right)
            .map(|s| s.value.clone())
            .unwrap_or_else(|| vec![Rational::zero(); self.betti[d as usize]])
    }

    /// `∫ x·y` using the quotient ring and the integration functional.
    pub fn integral_of_product(&self, left: (u32, usize), right: (u32, usize)) -> Rational {
        if left.0 + right.0 != self.reduced_dim {
            return Rational::zero();
        }
        crate::linalg::dot(&self.multiply(left, right), &self.integration)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub violations: Vec<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Poincaré duality: symmetric Betti numbers and nonsingular pairings.
pub fn duality_check(p: &IHPresentation, dim_m: u32) -> DualityReport {
    let top = dim_m.saturating_sub(2) as usize;
    let mut violations = Vec::new();
    let dim = |d: usize| p.betti.get(d).copied().unwrap_or(0);
    for d in 0..=top {
        if dim(d) != dim(top - d) {
            violations.push(format!(
                "dim IH^{d} = {} but dim IH^{} = {}",
                dim(d),
                top - d,
                dim(top - d)
            ));
        }
    }
    for (d, m) in p.pairing_matrices.iter().enumerate() {
        if m.rows() != m.cols() {
            violations.push(format!("pairing matrix in degree {d} is {}×{}", m.rows(), m.cols()));
        } else if m.rank() != m.rows() {
            violations.push(format!(
                "pairing matrix in degree {d} has rank {} < {}",
                m.rank(),
                m.rows()
            ));
        }
    }
    if p.pairing_matrices.len() != top + 1 {
        violations.push(format!(
            "{} pairing matrices for reduced dimension {top}",
            p.pairing_matrices.len()
        ));
    }
    DualityReport { violations }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrosscheckDegree {
    pub degree: u32,
    /// Rank of the residue form between declared classes of degrees `p`
    /// and `dim M_red − p`.
    pub form_rank: usize,
    pub quotient_dim: usize,
    pub radical_dim: usize,
    pub kernel_dim: usize,
    pub radical_equals_kernel: bool,
}

impl CrosscheckDegree {
    pub fn agrees(&self) -> bool {
        self.form_rank == self.quotient_dim && self.radical_equals_kernel
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CrosscheckReport {
    pub degrees: Vec<CrosscheckDegree>,
    /// At regular levels: whether the tie-rule pipeline and the
    /// regular-value pipeline produced identical presentations.
    pub regular_agreement: Option<bool>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(CrosscheckDegree::agrees) && self.regular_agreement != Some(false)
    }
}

/// The residue form on raw class bases versus the kernel description:
/// rank must equal `dim H^p/K_p` and the radical must equal `K_p`.
pub fn crosscheck(red: &Reduction<'_>) -> Result<CrosscheckReport, EngineError> {
    let inst = red.instance();
    let top = inst.reduced_dim();
    let mut degrees = Vec::new();
    for p in 0..=top {
        let left = inst.classes_of_degree(p);
        let right = inst.classes_of_degree(top - p);
        let mut form = Matrix::zeros(left.len(), right.len());
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                form.set(i, j, red.residue_pairing(a, b)?);
            }
        }
        let radical = form.transpose().nullspace();
        let k = red.kernel_side(Side::Plus, p).vstack(&red.kernel_side(Side::Minus, p));
        let kernel_dim = k.rank();
        degrees.push(CrosscheckDegree {
            degree: p,
            form_rank: form.rank(),
            quotient_dim: left.len() - kernel_dim,
            radical_dim: radical.rows(),
            kernel_dim,
            radical_equals_kernel: same_row_space(&radical, &k),
        });
    }
    let regular_agreement = match red.mode() {
        Mode::Regular => {
            let a = red.presentation();
            let b = Reduction::regular(inst, red.level().clone()).and_then(|r| r.presentation());
            Some(match (a, b) {
                (Ok(a), Ok(b)) => a == b,
                (Err(a), Err(b)) => a == b,
                _ => false,
            })
        }
        Mode::Singular => None,
    };
    Ok(CrosscheckReport {
        degrees,
        regular_agreement,
    })
}

pub fn kernel_side(inst: &Instance, level: Rational, side: Side, d: u32) -> Result<Matrix, EngineError> {
    Ok(Reduction::new(inst, level)?.kernel_side(side, d))
}

pub fn ih_betti(inst: &Instance, level: Rational) -> Result<KernelReport, EngineError> {
    Reduction::new(inst, level)?.kernel_report()
}

pub fn pairing(
    inst: &Instance,
    level: Rational,
    a: &EquivariantClass,
    b: &EquivariantClass,
) -> Result<Rational, EngineError> {
    Reduction::new(inst, level)?.pairing(a, b)
}

pub fn integrate_top(inst: &Instance, level: Rational, g: &EquivariantClass) -> Result<Rational, EngineError> {
    Reduction::new(inst, level)?.integrate_top(g)
}

pub fn ih_ring(inst: &Instance, level: Rational) -> Result<IHPresentation, EngineError> {
    Reduction::new(inst, level)?.presentation()
}

/// Ordinary cohomology of the orbifold quotient at a regular value.
pub fn reduced_cohomology_regular(inst: &Instance, level: Rational) -> Result<IHPresentation, EngineError> {
    Reduction::regular(inst, level)?.presentation()
}

pub fn crosscheck_theorems(inst: &Instance, level: Rational) -> Result<CrosscheckReport, EngineError> {
    crosscheck(&Reduction::new(inst, level)?)
}
