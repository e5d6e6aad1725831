//! Generators for instances with isolated fixed points.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Pow;

use crate::algebra::{LaurentElement, RingPresentation};
use crate::error::BuildError;
use crate::model::{validate_abbv, validate_morse, EquivariantClass, FixedComponent, Instance, Weight};
use crate::rational::{Compact, Rational};

/// Linear circle action on `ℂP^n` with weights `a_0, …, a_n`.
///
/// The fixed point `p_i` sits at `Φ = a_i − shift` with normal weights
/// `a_j − a_i`. Classes in degree `2k` are `u^j t^{k−j}`,
/// `0 ≤ j ≤ min(k, n)`, where `u|_{p_i} = a_i t`.
pub fn build_projective_space(weights: &[i64], shift: &Rational) -> Result<Instance, BuildError> {
    if weights.len() < 2 {
        return Err(BuildError::TooFewWeights(2));
    }
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != weights.len() {
        return Err(BuildError::RepeatedWeights);
    }
    let n = weights.len() - 1;
    let dim_m = 2 * n as u32;
    let point = Arc::new(RingPresentation::point());

    let components = weights
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut normal: Vec<Weight> = weights
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &b)| Weight::new(b - a, 1))
                .collect();
            normal.sort_by_key(|w| w.k);
            FixedComponent::new(
                format!("p{i}"),
                0,
                Rational::from_integer(a.into()) - shift,
                normal,
                point.clone(),
                None,
                dim_m,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut classes = Vec::new();
    for k in 0..=n {
        for j in 0..=k {
            let restrictions = weights
                .iter()
                .map(|&a| {
                    let c = Rational::from_integer(Pow::pow(BigInt::from(a), j as u32));
                    LaurentElement::scalar_power(point.clone(), c, k as i64)
                })
                .collect();
            classes.push(EquivariantClass {
                name: monomial_name(&[("u", j)], k - j),
                degree: 2 * k as u32,
                restrictions,
            });
        }
    }

    let name = format!("cp{n}-weights-{}-shift-{}", join(weights), Compact(shift));
    self_checked(Instance::new(name, dim_m, dim_m, components, classes)?)
}

/// Product of `m` two-spheres, the `i`-th rotated with weight `λ_i`.
///
/// Fixed points are pole choices `σ ∈ {±1}^m` with `Φ = Σ σ_i λ_i − shift`
/// and normal weights `−σ_i λ_i`. Classes in degree `2k` are
/// `u_S t^{k−|S|}` for subsets `|S| ≤ k`, where `u_i|_σ = σ_i λ_i t`.
pub fn build_sphere_product(factor_weights: &[i64], shift: &Rational) -> Result<Instance, BuildError> {
    if factor_weights.is_empty() {
        return Err(BuildError::TooFewWeights(1));
    }
    if factor_weights.contains(&0) {
        return Err(BuildError::ZeroWeight);
    }
    let m = factor_weights.len();
    let dim_m = 2 * m as u32;
    let point = Arc::new(RingPresentation::point());
    // σ_i = +1 when bit i of the index is clear.
    let poles: Vec<Vec<i64>> = (0..1usize << m)
        .map(|bits| (0..m).map(|i| if bits >> i & 1 == 0 { 1 } else { -1 }).collect())
        .collect();

    let components = poles
        .iter()
        .map(|sigma| {
            let mut agg: BTreeMap<i64, u32> = BTreeMap::new();
            for (s, l) in sigma.iter().zip(factor_weights) {
                *agg.entry(-s * l).or_default() += 1;
            }
            let weights = agg.into_iter().map(|(k, mult)| Weight::new(k, mult)).collect();
            let phi: i64 = sigma.iter().zip(factor_weights).map(|(s, l)| s * l).sum();
            let id: String = std::iter::once('p')
                .chain(sigma.iter().map(|&s| if s > 0 { '+' } else { '-' }))
                .collect();
            FixedComponent::new(
                id,
                0,
                Rational::from_integer(phi.into()) - shift,
                weights,
                point.clone(),
                None,
                dim_m,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut classes = Vec::new();
    for k in 0..=m {
        for size in 0..=k {
            for subset in subsets(m, size) {
                let restrictions = poles
                    .iter()
                    .map(|sigma| {
                        let c: i64 = subset.iter().map(|&i| sigma[i] * factor_weights[i]).product();
                        LaurentElement::scalar_power(point.clone(), Rational::from_integer(c.into()), k as i64)
                    })
                    .collect();
                let names: Vec<String> = subset.iter().map(|i| format!("u{}", i + 1)).collect();
                let factors: Vec<(&str, usize)> = names.iter().map(|s| (s.as_str(), 1)).collect();
                classes.push(EquivariantClass {
                    name: monomial_name(&factors, k - size),
                    degree: 2 * k as u32,
                    restrictions,
                });
            }
        }
    }

    let name = format!("spheres-weights-{}-shift-{}", join(factor_weights), Compact(shift));
    self_checked(Instance::new(name, dim_m, dim_m, components, classes)?)
}

fn self_checked(inst: Instance) -> Result<Instance, BuildError> {
    let abbv = validate_abbv(&inst);
    if !abbv.passed() {
        return Err(BuildError::SelfCheck(format!(
            "localization fails for {:?}",
            abbv.failures
        )));
    }
    let morse = validate_morse(&inst);
    if !morse.passed() {
        return Err(BuildError::SelfCheck(format!(
            "Morse count fails in degrees {:?}",
            morse.mismatches()
        )));
    }
    Ok(inst)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

fn monomial_name(factors: &[(&str, usize)], t_power: usize) -> String {
    let mut parts: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") })
        .collect();
    match t_power {
        0 => {}
        1 => parts.push("t".into()),
        p => parts.push(format!("t^{p}")),
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}
