mod common;

use std::sync::Arc;

use ihq_core::algebra::{surface, truncated_polynomial};
use ihq_core::engine::Reduction;
use ihq_core::instances::{build_projective_space, build_sphere_product, corpus, load_instance, save_instance};
use ihq_core::model::{classify, index_of};
use ihq_core::rational::{frac, int};
use ihq_core::{FixedComponent, LaurentElement, Rational, RingPresentation, Weight};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| frac(n, d))
}

fn ring_strategy() -> impl Strategy<Value = Arc<RingPresentation>> {
    prop_oneof![
        (1usize..=4).prop_map(|n| Arc::new(truncated_polynomial(2, n))),
        (0usize..=2).prop_map(|g| Arc::new(surface(g))),
    ]
}

/// A homogeneous `Σ_j c_j t^{n−j}` of degree `2n` with scalar leading
/// coefficient and arbitrary lower coefficients in even ring degrees.
fn euler_strategy() -> impl Strategy<Value = LaurentElement> {
    (ring_strategy(), 1i64..=4)
        .prop_flat_map(|(ring, n)| {
            let rank = ring.rank();
            let lead = small_rational().prop_filter("nonzero", |q| !q.is_zero());
            let lower = proptest::collection::vec(small_rational(), rank);
            (Just(ring), Just(n), lead, lower)
        })
        .prop_map(|(ring, n, lead, lower)| {
            let mut terms = vec![(n, ring.scalar(lead))];
            for (i, c) in lower.into_iter().enumerate() {
                let deg = ring.degree_of(i) as i64;
                if deg == 0 || deg % 2 != 0 {
                    continue;
                }
                let coeff = ring.basis(i).into_iter().map(|b| b * &c).collect();
                terms.push((n - deg / 2, coeff));
            }
            LaurentElement::from_terms(ring, terms).unwrap()
        })
}

fn laurent_strategy(ring: Arc<RingPresentation>) -> impl Strategy<Value = LaurentElement> {
    let rank = ring.rank();
    proptest::collection::vec((-4i64..=4, proptest::collection::vec(small_rational(), rank)), 0..5)
        .prop_map(move |terms| LaurentElement::from_terms(ring.clone(), terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_inverse_is_two_sided(e in euler_strategy()) {
        let inv = e.invert_euler().unwrap();
        let one = LaurentElement::one(e.ring().clone());
        prop_assert_eq!(e.multiply(&inv).unwrap(), one.clone());
        prop_assert_eq!(inv.multiply(&e).unwrap(), one);
        prop_assert_eq!(inv.degree(), Some(-e.degree().unwrap()));
        prop_assert!(inv.is_homogeneous(-e.degree().unwrap()));
    }

    #[test]
    fn residue_is_linear(
        (x, y) in ring_strategy().prop_flat_map(|r| (laurent_strategy(r.clone()), laurent_strategy(r))),
        a in small_rational(),
        b in small_rational(),
    ) {
        let lhs = x.scale(&a).add(&y.scale(&b)).unwrap().residue_integral();
        let rhs = a * x.residue_integral() + b * y.residue_integral();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn index_and_coindex_fill_the_normal_space(
        ks in proptest::collection::btree_map(-6i64..=6, 1u32..=3, 1..5)
    ) {
        let weights: Vec<Weight> = ks.into_iter().filter(|(k, _)| *k != 0).map(|(k, m)| Weight::new(k, m)).collect();
        prop_assume!(!weights.is_empty());
        let dim_m = 2 * weights.iter().map(|w| w.mult).sum::<u32>();
        let f = FixedComponent::isolated("p", int(0), weights, dim_m).unwrap();
        prop_assert_eq!(index_of(&f) + f.coindex(), f.codim());
        prop_assert_eq!(f.codim(), dim_m);
    }

    #[test]
    fn classification_commutes_with_translation(
        which in 0usize..5,
        shift in small_rational(),
        pick in 0usize..16,
    ) {
        let inst = &corpus()[which];
        let levels = common::test_levels(inst);
        let level = &levels[pick % levels.len()];
        let moved = inst.translated(&shift);
        let moved_level = level - &shift;
        for (f, g) in inst.components().iter().zip(moved.components()) {
            prop_assert_eq!(classify(f, level, inst.dim_m()), classify(g, &moved_level, inst.dim_m()));
        }
        let a = Reduction::new(inst, level.clone()).unwrap().kernel_report().unwrap();
        let b = Reduction::new(&moved, moved_level).unwrap().kernel_report().unwrap();
        prop_assert_eq!(a.betti(inst.reduced_dim()), b.betti(inst.reduced_dim()));
    }

    #[test]
    fn projective_spaces_round_trip(
        weights in proptest::collection::btree_set(-5i64..=5, 2..=4),
        t in 1i64..=5,
    ) {
        let weights: Vec<i64> = weights.into_iter().collect();
        let (lo, hi) = (weights[0], *weights.last().unwrap());
        let shift = int(lo) + (int(hi) - int(lo)) * frac(t, 6);
        let inst = build_projective_space(&weights, &shift).unwrap();
        let text = save_instance(&inst);
        let again = load_instance(&text).unwrap();
        prop_assert_eq!(&inst, &again);
        prop_assert_eq!(text, save_instance(&again));
    }

    #[test]
    fn sphere_products_round_trip(
        weights in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 1..=3),
        t in 1i64..=5,
    ) {
        let span: i64 = weights.iter().map(|w| w.abs()).sum();
        let shift = int(-span) + int(2 * span) * frac(t, 6);
        let inst = build_sphere_product(&weights, &shift).unwrap();
        let again = load_instance(&save_instance(&inst)).unwrap();
        prop_assert_eq!(inst, again);
    }

    #[test]
    fn pairing_is_bilinear_and_graded_symmetric(
        which in 0usize..6,
        pick in 0usize..16,
        coeffs in proptest::collection::vec(small_rational(), 8),
    ) {
        let inst = if which == 5 { common::fixture("torus_times_sphere.json") } else { corpus()[which].clone() };
        let levels = common::test_levels(&inst);
        let red = Reduction::new(&inst, levels[pick % levels.len()].clone()).unwrap();
        let top = inst.reduced_dim();
        for p in 0..=top {
            let left = inst.classes_of_degree(p);
            let right = inst.classes_of_degree(top - p);
            let x: Vec<Rational> = coeffs.iter().cycle().take(left.len()).cloned().collect();
            let y: Vec<Rational> = coeffs.iter().rev().cycle().take(right.len()).cloned().collect();
            let a = inst.combination(p, &x);
            let b = inst.combination(top - p, &y);
            let mut expanded = Rational::zero();
            for (xi, l) in x.iter().zip(&left) {
                for (yj, r) in y.iter().zip(&right) {
                    expanded += xi * yj * red.pairing(l, r).unwrap();
                }
            }
            prop_assert_eq!(red.pairing(&a, &b).unwrap(), expanded);
            let sign = if (p * (top - p)) % 2 == 1 { -Rational::one() } else { Rational::one() };
            prop_assert_eq!(red.pairing(&a, &b).unwrap(), sign * red.pairing(&b, &a).unwrap());
        }
    }

    #[test]
    fn degree_shortcut_matches_full_residue(
        which in 0usize..6,
        pick in 0usize..16,
        i in 0usize..64,
        j in 0usize..64,
    ) {
        let inst = if which == 5 { common::fixture("cp2_fixed_line.json") } else { corpus()[which].clone() };
        let levels = common::test_levels(&inst);
        let red = Reduction::new(&inst, levels[pick % levels.len()].clone()).unwrap();
        let n = inst.classes().len();
        let (a, b) = (&inst.classes()[i % n], &inst.classes()[j % n]);
        prop_assert_eq!(red.pairing(a, b).unwrap(), red.residue_pairing(a, b).unwrap());
    }
}
