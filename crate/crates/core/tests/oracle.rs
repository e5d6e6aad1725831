//! The engine against a from-scratch recomputation for instances whose
//! fixed points are all isolated: every restriction is `c·t^k`, every
//! Euler class `λ·t^n`, so kernels and residues reduce to arithmetic on
//! the scalars `c` and `λ`.

mod common;

use ihq_core::engine::Reduction;
use ihq_core::instances::corpus;
use ihq_core::model::index_of;
use ihq_core::{Instance, Rational, Side};
use num_traits::{One, Signed, Zero};

fn scalar_restriction(inst: &Instance, class: usize, comp: usize) -> Rational {
    let c = &inst.classes()[class];
    let r = &c.restrictions[comp];
    assert!(inst.components()[comp].is_isolated());
    let coeff = r.coefficient(c.degree as i64 / 2);
    coeff.first().cloned().unwrap_or_else(Rational::zero)
}

fn euler_scalar(inst: &Instance, comp: usize) -> Rational {
    inst.components()[comp]
        .weights()
        .iter()
        .fold(Rational::one(), |acc, w| {
            acc * Rational::from_integer(w.k.into()).pow(w.mult as i32)
        })
}

fn plus_side(inst: &Instance, level: &Rational) -> Vec<bool> {
    inst.components()
        .iter()
        .map(|f| match f.moment().cmp(level) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => {
                let negative: u32 = f.weights().iter().filter(|w| w.k < 0).map(|w| w.mult).sum();
                // index = 2·negative ≤ (dim M − 0)/2
                4 * negative <= inst.dim_m()
            }
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn rank(mut m: Vec<Vec<Rational>>, cols: usize) -> usize {
    rref(&mut m, cols).len()
}

fn nullspace(mut m: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    let pivots = rref(&mut m, cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

fn degree_indices(inst: &Instance, d: u32) -> Vec<usize> {
    (0..inst.classes().len())
        .filter(|&i| inst.classes()[i].degree == d)
        .collect()
}

fn oracle_kernel(inst: &Instance, level: &Rational, d: u32, side: bool) -> Vec<Vec<Rational>> {
    let plus = plus_side(inst, level);
    let idx = degree_indices(inst, d);
    let rows: Vec<Vec<Rational>> = (0..inst.components().len())
        .filter(|&f| plus[f] == side)
        .map(|f| idx.iter().map(|&c| scalar_restriction(inst, c, f)).collect())
        .collect();
    nullspace(rows, idx.len())
}

fn oracle_betti(inst: &Instance, level: &Rational) -> Vec<usize> {
    (0..=inst.reduced_dim())
        .map(|d| {
            let n = degree_indices(inst, d).len();
            let mut k = oracle_kernel(inst, level, d, true);
            k.extend(oracle_kernel(inst, level, d, false));
            n - rank(k, n)
        })
        .collect()
}

fn oracle_pairing(inst: &Instance, level: &Rational, a: usize, b: usize) -> Rational {
    let (da, db) = (inst.classes()[a].degree, inst.classes()[b].degree);
    if da + db != inst.reduced_dim() {
        return Rational::zero();
    }
    let plus = plus_side(inst, level);
    (0..inst.components().len())
        .filter(|&f| plus[f])
        .map(|f| scalar_restriction(inst, a, f) * scalar_restriction(inst, b, f) / euler_scalar(inst, f))
        .sum()
}

#[test]
fn tie_rule_matches_index_definition() {
    for inst in corpus() {
        for level in common::test_levels(&inst) {
            let red = Reduction::new(&inst, level.clone()).unwrap();
            let expected = plus_side(&inst, &level);
            for ((f, side), plus) in inst.components().iter().zip(red.sides()).zip(expected) {
                assert_eq!(*side == Side::Plus, plus, "{} {} at {level}", inst.name(), f.id());
                assert_eq!(index_of(f) + f.coindex(), f.codim());
            }
        }
    }
}

#[test]
fn kernels_match_oracle() {
    for inst in corpus() {
        for level in common::test_levels(&inst) {
            let red = Reduction::new(&inst, level.clone()).unwrap();
            for d in 0..=inst.degree_bound() {
                for (side, flag) in [(Side::Plus, true), (Side::Minus, false)] {
                    let got = red.kernel_side(side, d);
                    let want = oracle_kernel(&inst, &level, d, flag);
                    assert_eq!(got.rows(), want.len());
                    let n = degree_indices(&inst, d).len();
                    let mut both = got.row_vecs();
                    both.extend(want.iter().cloned());
                    assert_eq!(rank(both, n), want.len(), "{} d={d} {side:?} at {level}", inst.name());
                }
            }
        }
    }
}

#[test]
fn betti_numbers_match_oracle() {
    for inst in corpus() {
        for level in common::test_levels(&inst) {
            let report = Reduction::new(&inst, level.clone()).unwrap().kernel_report().unwrap();
            assert_eq!(
                report.betti(inst.reduced_dim()),
                oracle_betti(&inst, &level),
                "{} at {level}",
                inst.name()
            );
        }
    }
}

#[test]
fn pairings_match_oracle() {
    for inst in corpus().into_iter().take(5) {
        for level in common::test_levels(&inst) {
            let red = Reduction::new(&inst, level.clone()).unwrap();
            let n = inst.classes().len();
            for a in 0..n {
                for b in 0..n {
                    let (ca, cb) = (&inst.classes()[a], &inst.classes()[b]);
                    let want = oracle_pairing(&inst, &level, a, b);
                    assert_eq!(
                        red.pairing(ca, cb).unwrap(),
                        want,
                        "{} ⟨{}, {}⟩",
                        inst.name(),
                        ca.name,
                        cb.name
                    );
                    if ca.degree + cb.degree == inst.reduced_dim() {
                        assert_eq!(red.residue_pairing(ca, cb).unwrap(), want);
                    }
                }
            }
        }
    }
}

#[test]
fn hand_values_small_instances() {
    let c = corpus();
    let zero = Rational::zero();
    let betti = |inst: &Instance, l: &Rational| {
        Reduction::new(inst, l.clone())
            .unwrap()
            .kernel_report()
            .unwrap()
            .betti(inst.reduced_dim())
    };
    assert_eq!(betti(&c[0], &zero), [1]);
    assert_eq!(betti(&c[2], &zero), [1, 0, 1]);
    for l in common::test_levels(&c[3]) {
        assert_eq!(betti(&c[3], &l), [1, 0, 1]);
    }
    assert!(c[3].critical_values().iter().any(|v| v.is_zero()));

    // S²×S²: ⟨1, t⟩ = 1/t − 1/t − 1/t at the three 𝓕⁺ points, so −1;
    // ⟨1, u1⟩ = 1/t − 1/t + 1/t = 1.
    let s2s2 = &c[2];
    let red = Reduction::new(s2s2, zero.clone()).unwrap();
    let one = s2s2.class("1").unwrap();
    assert_eq!(
        red.pairing(one, s2s2.class("t").unwrap()).unwrap(),
        Rational::from_integer((-1).into())
    );
    assert_eq!(red.pairing(one, s2s2.class("u1").unwrap()).unwrap(), Rational::one());
    assert_eq!(red.pairing(one, one).unwrap(), zero);
    let plus: Vec<_> = red.sides().iter().filter(|s| **s == Side::Plus).collect();
    assert_eq!(plus.len(), 3);
}

#[test]
fn oracle_sanity() {
    // The oracle's own elimination on a fixed example.
    let r = |n: i64| Rational::from_integer(n.into());
    let m = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)], vec![r(0), r(1), r(1)]];
    assert_eq!(rank(m.clone(), 3), 2);
    let ns = nullspace(m, 3);
    assert_eq!(ns, vec![vec![r(-1), r(-1), r(1)]]);
    assert!(ns[0].iter().any(|x| x.is_negative()));
}
