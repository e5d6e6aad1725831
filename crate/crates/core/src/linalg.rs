//! Exact linear algebra over the rationals.
//!
//! Elimination is done fraction-free (Bareiss) on integer rows obtained by
//! clearing each row's denominators; rationals only reappear during back
//! substitution. There is no rank tolerance anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::rational::{format_rational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        Echelon::of(self).pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per row of the result.
    ///
    /// Each basis vector has a 1 in exactly one free column and 0 in the other
    /// free columns, so the result is canonical for a given matrix.
    pub fn nullspace(&self) -> Matrix {
        let ech = Echelon::of(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let rows = free
            .iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                ech.back_substitute(&mut x);
                x
            })
            .collect();
        Matrix::from_rows(self.cols, rows)
    }

    /// One solution of `A x = b` (free variables set to 0), or `None` when
    /// the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (r, br) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, br.clone());
        }
        let ech = Echelon::of(&aug);
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols + 1];
        x[self.cols] = -Rational::one();
        ech.back_substitute(&mut x);
        x.truncate(self.cols);
        Some(x)
    }

    /// Row-space basis in echelon form (rows of the fraction-free echelon
    /// form, rescaled to primitive integer vectors).
    pub fn row_basis(&self) -> Matrix {
        let ech = Echelon::of(self);
        let rows = ech.rows[..ech.pivots.len()]
            .iter()
            .map(|r| r.iter().map(|v| Rational::from_integer(v.clone())).collect())
            .collect();
        Matrix::from_rows(self.cols, rows)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// True when the row spaces of `a` and `b` coincide.
pub fn same_row_space(a: &Matrix, b: &Matrix) -> bool {
    let ra = a.rank();
    ra == b.rank() && a.vstack(b).rank() == ra
}

/// Fraction-free row echelon form of an integer-scaled copy of a matrix.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn of(m: &Matrix) -> Echelon {
        let mut rows: Vec<Vec<BigInt>> = (0..m.rows).map(|r| integer_row(m.row(r))).collect();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let pivot = &pivot_row[c];
            for row in tail.iter_mut() {
                let lead = std::mem::take(&mut row[c]);
                for j in c + 1..cols {
                    let v = pivot * &row[j] - &lead * &pivot_row[j];
                    let (q, rem) = v.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division not exact");
                    row[j] = q;
                }
            }
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        for row in rows.iter_mut().take(pivots.len()) {
            make_primitive(row);
        }
        Echelon { rows, pivots }
    }

    /// Fills the pivot coordinates of `x` so that every echelon row
    /// annihilates it. Non-pivot coordinates are taken as given.
    fn back_substitute(&self, x: &mut [Rational]) {
        for (i, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut s = Rational::zero();
            for (j, v) in row.iter().enumerate().skip(pc + 1) {
                if !v.is_zero() && !x[j].is_zero() {
                    s += Rational::from_integer(v.clone()) * &x[j];
                }
            }
            x[pc] = -s / Rational::from_integer(row[pc].clone());
        }
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|q| q.to_string()).collect())
            .collect();
        write!(f, "Matrix{:?}", rows)
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[0, 1, 2], &[1, 0, 3], &[1, 1, 5]]).rank(), 2);
        assert_eq!(Matrix::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn nullspace_annihilates() {
        let a = m(&[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1]]);
        assert_eq!(a.nullspace().rows(), 0);
        let b = m(&[&[1, -1, -1]]);
        let n = b.nullspace();
        assert_eq!(n.rows(), 2);
        for r in 0..n.rows() {
            assert!(b.mul_vec(n.row(r)).iter().all(Zero::is_zero));
        }
        // x = (1, 1, 0), (1, 0, 1)
        assert_eq!(n.row(0), &[int(1), int(1), int(0)]);
        assert_eq!(n.row(1), &[int(1), int(0), int(1)]);
    }

    #[test]
    fn nullspace_with_skipped_columns() {
        let a = m(&[&[0, 2, 4, 0], &[0, 1, 2, 3]]);
        let n = a.nullspace();
        assert_eq!(n.rows(), 2);
        for r in 0..n.rows() {
            assert!(a.mul_vec(n.row(r)).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = Matrix::from_rows(2, vec![vec![int(2), int(1)], vec![int(1), frac(1, 3)]]);
        let x = a.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(3), int(1)]);
        let singular = m(&[&[1, 1], &[2, 2]]);
        assert!(singular.solve(&[int(1), int(3)]).is_none());
        assert!(singular.solve(&[int(1), int(2)]).is_some());
    }

    #[test]
    fn row_spaces() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[1, 0], &[3, 3]]);
        assert!(same_row_space(&a, &b));
        assert!(!same_row_space(&a, &m(&[&[1, 2]])));
        assert_eq!(a.row_basis().rows(), 2);
    }
}
