//! Dense Gaussian elimination over exact fields.
//!
//! Used for rationals (lattice determinants, centre computations, cyclotomic
//! inverses) and for cyclotomic fields (rank of the splitting image).

use num_traits::{One, Zero};

use crate::scalar::{CyclotomicElement, Rational};

/// The operations elimination needs. Elements carry enough context to build
/// their own zero and one, which is what cyclotomic elements require.
pub trait LinearField: Clone + PartialEq {
    fn zero_of(&self) -> Self;
    fn one_of(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn sub_elem(&self, rhs: &Self) -> Self;
    fn mul_elem(&self, rhs: &Self) -> Self;
    /// Only called on nonzero elements.
    fn inv_elem(&self) -> Self;
}

impl LinearField for Rational {
    fn zero_of(&self) -> Self {
        Rational::zero()
    }
    fn one_of(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn sub_elem(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_elem(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv_elem(&self) -> Self {
        self.recip()
    }
}

impl LinearField for CyclotomicElement {
    fn zero_of(&self) -> Self {
        self.field().zero()
    }
    fn one_of(&self) -> Self {
        self.field().one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn sub_elem(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_elem(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv_elem(&self) -> Self {
        self.inverse().expect("pivot is nonzero")
    }
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn row_reduce<F: LinearField>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv_elem();
        for x in m[r].iter_mut() {
            *x = x.mul_elem(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero_elem() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = factor.mul_elem(&m[r][j]);
                m[i][j] = m[i][j].sub_elem(&delta);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: LinearField>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    row_reduce(&mut work).len()
}

/// Determinant of a square matrix; the empty matrix has determinant one.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = &a[i][c] / &pivot;
            for j in c..n {
                let delta = &factor * &a[c][j];
                a[i][j] -= delta;
            }
        }
    }
    det
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<F: LinearField>(m: &[Vec<F>], one: &F) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let zero = one.zero_of();
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `m x = b` for square nonsingular `m`.
pub fn solve<F: LinearField>(m: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = m.len();
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.last() != Some(&(n - 1)) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}
