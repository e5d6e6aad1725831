mod common;

use ihq_core::engine::{crosscheck, duality_check, reduced_cohomology_regular, Reduction};
use ihq_core::instances::{build_projective_space, corpus, load_instance, save_instance};
use ihq_core::linalg::{same_row_space, Matrix};
use ihq_core::model::{validate_abbv, validate_morse};
use ihq_core::rational::{frac, int};
use ihq_core::{
    EngineError, EquivariantClass, FixedComponent, Instance, LaurentElement, Mode, Rational, RingPresentation, Side,
    Weight,
};
use num_traits::Zero;
use std::sync::Arc;

/// S² rotated with weight 1, with degree-2 basis {t, x}, x|_N = 0, x|_S = t.
fn sphere_with_x() -> Instance {
    let point = Arc::new(RingPresentation::point());
    let sc = |c: i64, k: i64| LaurentElement::scalar_power(point.clone(), int(c), k);
    let north = FixedComponent::isolated("N", int(1), vec![Weight::new(-1, 1)], 2).unwrap();
    let south = FixedComponent::isolated("S", int(-1), vec![Weight::new(1, 1)], 2).unwrap();
    let class = |name: &str, degree, n: LaurentElement, s: LaurentElement| EquivariantClass {
        name: name.into(),
        degree,
        restrictions: vec![n, s],
    };
    let classes = vec![
        class("1", 0, sc(1, 0), sc(1, 0)),
        class("t", 2, sc(1, 1), sc(1, 1)),
        class("x", 2, sc(0, 1), sc(1, 1)),
    ];
    Instance::new("sphere-x", 2, 2, vec![north, south], classes).unwrap()
}

fn row(v: &[i64]) -> Matrix {
    Matrix::from_rows(v.len(), vec![v.iter().map(|&x| int(x)).collect()])
}

#[test]
fn sphere_kernels_by_hand() {
    let inst = sphere_with_x();
    assert!(validate_abbv(&inst).passed());
    let red = Reduction::new(&inst, int(0)).unwrap();
    assert_eq!(red.mode(), Mode::Regular);
    // K₊ = span{x}, K₋ = span{t − x}.
    assert!(same_row_space(&red.kernel_side(Side::Plus, 2), &row(&[0, 1])));
    assert!(same_row_space(&red.kernel_side(Side::Minus, 2), &row(&[1, -1])));
    assert_eq!(red.kernel_side(Side::Plus, 0).rows(), 0);
    let report = red.kernel_report().unwrap();
    assert_eq!(report.betti(0), [1]);
    assert_eq!(report.per_degree[2].dim_ih, 0);
    assert!(report.direct);

    // κ(t) = κ(x) = 0 on the point; ∫ κ(1) is the residue of 1/(−t).
    let one = inst.class("1").unwrap();
    assert_eq!(red.integrate_top(one).unwrap(), int(-1));
    assert_eq!(
        red.integrate_top(inst.class("t").unwrap()),
        Err(EngineError::DegreeMismatch { expected: 0, found: 2 })
    );
    let p = red.presentation().unwrap();
    assert_eq!(p.integration, [int(-1)]);
    assert!(duality_check(&p, 2).passed());
}

#[test]
fn sphere_square_ring() {
    let s2s2 = &corpus()[2];
    let red = Reduction::new(s2s2, int(0)).unwrap();
    assert_eq!(red.mode(), Mode::Singular);
    let p = red.presentation().unwrap();
    assert_eq!(p.betti, [1, 0, 1]);
    // y = the degree-2 representative: ∫ y ≠ 0, y·y lands above the top.
    assert_eq!(p.representatives[2].len(), 1);
    assert!(!p.integration[0].is_zero());
    assert!(p.multiply((2, 0), (2, 0)).is_empty());
    assert!(duality_check(&p, 4).passed());
    assert!(crosscheck(&red).unwrap().passed());
}

#[test]
fn out_of_range_levels_rejected() {
    let inst = &corpus()[3];
    for l in [int(-1), int(2), int(5)] {
        assert!(matches!(Reduction::new(inst, l), Err(EngineError::NotInterior(_))));
    }
    assert!(matches!(
        reduced_cohomology_regular(inst, int(0)),
        Err(EngineError::CriticalLevel(_))
    ));
    let msg = Reduction::new(inst, int(7)).unwrap_err().to_string();
    assert!(msg.contains("level not in the interior of the moment image"));
}

#[test]
fn fixed_line_in_projective_plane() {
    let inst = common::fixture("cp2_fixed_line.json");
    assert!(!inst.components()[0].is_isolated());
    assert!(validate_abbv(&inst).passed());
    assert!(validate_morse(&inst).passed());
    for level in common::test_levels(&inst) {
        let red = Reduction::new(&inst, level.clone()).unwrap();
        let p = red.presentation().unwrap();
        assert_eq!(p.betti, [1, 0, 1], "level {level}");
        assert!(duality_check(&p, 4).passed());
        assert!(crosscheck(&red).unwrap().passed());
    }
    // Only p2 is above the level: ⟨1, u⟩ = Res t/t² = 1.
    let red = Reduction::new(&inst, int(0)).unwrap();
    assert_eq!(
        red.pairing(inst.class("1").unwrap(), inst.class("u").unwrap()).unwrap(),
        int(1)
    );
}

#[test]
fn torus_times_sphere_odd_classes() {
    let inst = common::fixture("torus_times_sphere.json");
    assert!(validate_abbv(&inst).passed());
    assert!(validate_morse(&inst).passed());
    let red = Reduction::new(&inst, int(0)).unwrap();
    let p = red.presentation().unwrap();
    assert_eq!(p.betti, [1, 2, 1]);
    assert_eq!(p.representatives[1], ["a", "b"]);
    let want = Matrix::from_rows(2, vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
    assert_eq!(p.pairing_matrices[1], want);
    assert!(duality_check(&p, 4).passed());
    assert!(crosscheck(&red).unwrap().passed());
    // a·b = w in the quotient as well, and b·a = −w.
    let ab = p.multiply((1, 0), (1, 1));
    let ba = p.multiply((1, 1), (1, 0));
    assert_eq!(ab.len(), 1);
    assert_eq!(ba, vec![-ab[0].clone()]);
    assert_eq!(p.integral_of_product((1, 0), (1, 1)), int(-1));
}

#[test]
fn fixtures_round_trip() {
    for name in ["cp2_fixed_line.json", "torus_times_sphere.json"] {
        let inst = common::fixture(name);
        let again = load_instance(&save_instance(&inst)).unwrap();
        assert_eq!(inst, again);
        assert_eq!(save_instance(&inst), save_instance(&again));
    }
}

/// Replaces the restriction of `class` at component `comp` by `c·t^{deg/2}`.
fn corrupt(inst: &Instance, class: &str, comp: usize, c: i64) -> Instance {
    let mut classes = inst.classes().to_vec();
    let target = classes.iter_mut().find(|k| k.name == class).unwrap();
    let ring = inst.components()[comp].cohomology().clone();
    target.restrictions[comp] = LaurentElement::scalar_power(ring, int(c), target.degree as i64 / 2);
    Instance::new(
        inst.name(),
        inst.dim_m(),
        inst.degree_bound(),
        inst.components().to_vec(),
        classes,
    )
    .unwrap()
}

#[test]
fn fault_injection_is_detected() {
    let base = build_projective_space(&[0, 1, 3], &int(1)).unwrap();
    // u|_{p1} = t becomes 2t.
    let bad = corrupt(&base, "u", 1, 2);
    let abbv = validate_abbv(&bad);
    assert!(!abbv.passed());
    assert!(abbv.failures.iter().any(|f| f.class == "u"));

    // A degree-2 class of S²×S². Tuples of degree ≥ dim M are always
    // genuine classes, so corrupting those is invisible by design.
    let s2s2 = &corpus()[2];
    let bad = corrupt(s2s2, "u1", 0, 5);
    let abbv_fails = !validate_abbv(&bad).passed();
    let cross_fails = Reduction::new(&bad, int(0))
        .map(|r| crosscheck(&r).map(|c| !c.passed()).unwrap_or(true))
        .unwrap_or(true);
    assert!(abbv_fails || cross_fails);
}

#[test]
fn wall_invariance_within_chambers() {
    for inst in corpus() {
        let cv = inst.critical_values();
        let mut previous: Option<Vec<usize>> = None;
        let mut changed = false;
        for w in cv.windows(2) {
            let tables: Vec<Vec<usize>> = (1..6)
                .map(|i| {
                    let l = &w[0] + (&w[1] - &w[0]) * frac(i, 6);
                    reduced_cohomology_regular(&inst, l).unwrap().betti
                })
                .collect();
            assert!(tables.windows(2).all(|t| t[0] == t[1]), "{}: {tables:?}", inst.name());
            if let Some(p) = &previous {
                changed |= *p != tables[0];
            }
            previous = Some(tables[0].clone());
        }
        if inst.name().starts_with("cp3") {
            assert!(changed, "Betti numbers of {} should change across a wall", inst.name());
        }
    }
}

#[test]
fn regular_pipelines_agree() {
    for inst in corpus() {
        for level in common::regular_levels(&inst) {
            let a = Reduction::new(&inst, level.clone()).unwrap().presentation().unwrap();
            let b = reduced_cohomology_regular(&inst, level).unwrap();
            assert_eq!(a, b);
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }
}

fn reversed_basis(inst: &Instance) -> Instance {
    let mut classes = Vec::new();
    for d in 0..=inst.degree_bound() {
        classes.extend(inst.classes_of_degree(d).into_iter().rev().cloned());
    }
    Instance::new(
        inst.name(),
        inst.dim_m(),
        inst.degree_bound(),
        inst.components().to_vec(),
        classes,
    )
    .unwrap()
}

/// `κ(α)κ(β)` through the structure constants.
fn quotient_product(p: &ihq_core::IHPresentation, da: u32, x: &[Rational], db: u32, y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.betti[(da + db) as usize]];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(p.multiply((da, i), (db, j))) {
                *o += xi * yj * v;
            }
        }
    }
    out
}

#[test]
fn kirwan_map_is_multiplicative_in_any_basis() {
    for inst in corpus().into_iter().take(5) {
        for variant in [inst.clone(), reversed_basis(&inst)] {
            for level in common::test_levels(&variant) {
                let red = Reduction::new(&variant, level.clone()).unwrap();
                let p = red.presentation().unwrap();
                let top = variant.reduced_dim();
                for a in variant.classes().iter().filter(|c| c.degree <= top) {
                    for b in variant.classes().iter().filter(|c| c.degree + a.degree <= top) {
                        let x = red.kirwan_image(a).unwrap();
                        let y = red.kirwan_image(b).unwrap();
                        let ab = red.kirwan_image(&a.product(b).unwrap()).unwrap();
                        assert_eq!(quotient_product(&p, a.degree, &x, b.degree, &y), ab);
                        if a.degree + b.degree == top {
                            let integral = ihq_core::linalg::dot(&ab, &p.integration);
                            assert_eq!(
                                integral,
                                red.pairing(a, b).unwrap(),
                                "{} ∫{}·{}",
                                inst.name(),
                                a.name,
                                b.name
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Every tie rule yields some perturbed quotient; the shipped one must give
/// the smallest cohomology, as intersection cohomology is a summand of the
/// cohomology of any resolution.
#[test]
fn shipped_tie_rule_is_minimal() {
    use ihq_core::model::IndexRule;
    for inst in corpus() {
        for level in inst
            .critical_values()
            .iter()
            .filter(|v| common::test_levels(&inst).contains(v))
        {
            let shipped = Reduction::new(&inst, level.clone()).unwrap().kernel_report().unwrap();
            for rule in [IndexRule::Flipped, IndexRule::Negated] {
                let other = Reduction::with_rule(&inst, level.clone(), rule)
                    .unwrap()
                    .kernel_report()
                    .unwrap();
                let top = inst.reduced_dim();
                for (s, o) in shipped.betti(top).iter().zip(other.betti(top)) {
                    assert!(*s <= o, "{} at {level} {rule:?}", inst.name());
                }
            }
        }
    }
}
