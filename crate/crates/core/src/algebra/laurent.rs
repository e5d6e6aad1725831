//! Laurent polynomials in the degree-2 equivariant parameter `t` with
//! coefficients in a graded ring.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::ring::{RingElement, RingPresentation};
use crate::error::AlgebraError;
use crate::rational::Rational;

/// `Σ_j c_j t^j` with `c_j ∈ H`, finitely many nonzero terms.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of elements.
#[derive(Clone)]
pub struct LaurentElement {
    ring: Arc<RingPresentation>,
    terms: BTreeMap<i64, RingElement>,
}

impl LaurentElement {
    pub fn zero(ring: Arc<RingPresentation>) -> Self {
        LaurentElement {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Arc<RingPresentation>) -> Self {
        let u = ring.unit();
        Self::monomial(ring, 0, u)
    }

    /// `c · t^power`.
    pub fn monomial(ring: Arc<RingPresentation>, power: i64, c: RingElement) -> Self {
        let mut e = Self::zero(ring);
        e.add_term(power, c);
        e
    }

    /// `λ · t^power` with `λ` a scalar multiple of the unit.
    pub fn scalar_power(ring: Arc<RingPresentation>, lambda: Rational, power: i64) -> Self {
        let c = ring.scalar(lambda);
        Self::monomial(ring, power, c)
    }

    /// Builds an element from `(power, coefficient)` pairs; repeated powers
    /// are summed.
    pub fn from_terms(
        ring: Arc<RingPresentation>,
        terms: impl IntoIterator<Item = (i64, RingElement)>,
    ) -> Result<Self, AlgebraError> {
        let mut e = Self::zero(ring);
        for (p, c) in terms {
            if c.len() != e.ring.rank() {
                return Err(AlgebraError::DimensionMismatch {
                    expected: e.ring.rank(),
                    found: c.len(),
                });
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, power: i64, c: RingElement) {
        if c.iter().all(Zero::is_zero) {
            return;
        }
        match self.terms.entry(power) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                for (a, b) in o.get_mut().iter_mut().zip(c) {
                    *a += b;
                }
                if o.get().iter().all(Zero::is_zero) {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &RingElement)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn coefficient(&self, power: i64) -> RingElement {
        self.terms.get(&power).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    /// Every coefficient of `t^j` lies in ring degree `d - 2j`. The zero
    /// element is homogeneous of every degree.
    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms.iter().all(|(p, c)| self.ring.is_homogeneous(c, d - 2 * p))
    }

    /// The common degree of all terms, if the element is nonzero and
    /// homogeneous.
    pub fn degree(&self) -> Option<i64> {
        let (p, c) = self.terms.iter().next()?;
        let d = self.ring.min_degree(c)? as i64 + 2 * p;
        self.is_homogeneous(d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.ring.clone());
        }
        LaurentElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (*p, c.iter().map(|v| v * s).collect()))
                .collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentElement {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(p, c)| (p + k, c.clone())).collect(),
        }
    }

    /// Cauchy product; ring products use the structure constants.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.ring.clone());
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                out.add_term(p + q, self.ring.mul_unchecked(a, b));
            }
        }
        Ok(out)
    }

    /// Inverse of an equivariant Euler class in the localized ring.
    ///
    /// `self` must be homogeneous of degree `2n`, `n ≥ 1`, with `t^n`
    /// coefficient `λ · 1`, `λ ≠ 0`. Writing `e = λ t^n (1 + ν)`, the inverse
    /// is `λ⁻¹ t^{-n} Σ_m (-ν)^m`; `ν` raises ring degree, so the series stops
    /// once its terms pass the top degree of the ring.
    pub fn invert_euler(&self) -> Result<Self, AlgebraError> {
        let d = self
            .degree()
            .ok_or_else(|| AlgebraError::NonInvertibleEuler("zero or inhomogeneous element".into()))?;
        if d < 2 || d % 2 != 0 {
            return Err(AlgebraError::NonInvertibleEuler(format!(
                "degree {d} is not a positive even number"
            )));
        }
        let n = d / 2;
        let lead = self.coefficient(n);
        let lambda = self.ring.as_scalar(&lead).filter(|l| !l.is_zero()).ok_or_else(|| {
            AlgebraError::NonInvertibleEuler(format!(
                "t^{n} coefficient {} is not a nonzero scalar",
                self.ring.format_element(&lead)
            ))
        })?;
        let lambda_inv = lambda.recip();
        let mut nu = self.clone();
        nu.terms.remove(&n);
        let nu = nu.scale(&lambda_inv).shift(-n);
        let minus_nu = nu.neg();

        let mut sum = Self::one(self.ring.clone());
        let mut power = Self::one(self.ring.clone());
        for _ in 0..self.ring.top_degree() {
            power = power.multiply(&minus_nu)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&lambda_inv).shift(-n))
    }

    /// `Res₀ ∫`: the ring integral of the `t^{-1}` coefficient.
    pub fn residue_integral(&self) -> Rational {
        match self.terms.get(&-1) {
            Some(c) => self.ring.integrate(c),
            None => Rational::zero(),
        }
    }

    /// Integrates each coefficient, giving a Laurent polynomial over ℚ.
    pub fn integrate_coefficients(&self) -> BTreeMap<i64, Rational> {
        self.terms
            .iter()
            .map(|(p, c)| (*p, self.ring.integrate(c)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

impl PartialEq for LaurentElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for LaurentElement {}

impl fmt::Debug for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(p, c)| {
                let c = self.ring.format_element(c);
                match p {
                    0 => format!("({c})"),
                    1 => format!("({c})t"),
                    _ => format!("({c})t^{p}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
