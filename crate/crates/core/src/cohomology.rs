//! 2-cocycles on the cyclic group `G = <sigma>` of order `s`.
//!
//! Entry `(i, j)` of the table is `alpha(sigma^i, sigma^j)`. The cocycle
//! condition, written with the Galois action on values, is
//!
//! ```text
//! f(alpha(g, h)) * alpha(gh, f) = alpha(g, hf) * alpha(h, f)
//! ```
//!
//! and is exactly what associativity of the crossed product `(K, G, alpha)`
//! requires.

use crate::error::{AlgebraError, Result};
use crate::scalar::{Galois, Scalar};

/// An `s x s` table of units together with the generator `sigma` acting on
/// its values.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle2<S: Scalar> {
    order: usize,
    table: Vec<Vec<S>>,
    galois: S::Galois,
    rational: bool,
}

/// Outcome of an exhaustive cocycle check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CocycleCheck {
    pub triples_checked: usize,
    /// First violating `(g, h, f)` as exponents of `sigma`, in lexicographic
    /// order.
    pub witness: Option<[usize; 3]>,
}

impl CocycleCheck {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

impl<S: Scalar> Cocycle2<S> {
    /// Wraps a table. Entries must be units and the order of `sigma` must
    /// divide `s`; the cocycle condition itself is *not* enforced here (use
    /// [`Cocycle2::check`]), so corrupted tables can be represented.
    pub fn new(table: Vec<Vec<S>>, galois: S::Galois) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(AlgebraError::InvalidArgument(
                "cocycle table must be nonempty".into(),
            ));
        }
        if let Some(row) = table.iter().find(|r| r.len() != order) {
            return Err(AlgebraError::DimensionMismatch {
                expected: order,
                found: row.len(),
            });
        }
        if table.iter().flatten().any(Scalar::is_zero) {
            return Err(AlgebraError::InvalidArgument(
                "cocycle values must be units".into(),
            ));
        }
        if !order.is_multiple_of(galois.order()) {
            return Err(AlgebraError::InvalidArgument(format!(
                "sigma has order {} which does not divide {order}",
                galois.order()
            )));
        }
        let rational = table
            .iter()
            .flatten()
            .all(|x| x.is_sigma_fixed(&galois));
        Ok(Self {
            order,
            table,
            galois,
            rational,
        })
    }

    /// The cyclic-algebra cocycle: `1` when `i + j < s`, `gamma` otherwise.
    pub fn standard_cyclic(s: usize, gamma: &S, galois: &S::Galois) -> Result<Self> {
        if gamma.is_zero() {
            return Err(AlgebraError::InvalidArgument(
                "gamma must be a unit".into(),
            ));
        }
        let one = S::one(galois);
        let table = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| if i + j < s { one.clone() } else { gamma.clone() })
                    .collect()
            })
            .collect();
        Self::new(table, galois.clone())
    }

    pub fn trivial(s: usize, galois: &S::Galois) -> Result<Self> {
        let one = S::one(galois);
        Self::new(vec![vec![one; s]; s], galois.clone())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn galois(&self) -> &S::Galois {
        &self.galois
    }

    pub fn table(&self) -> &[Vec<S>] {
        &self.table
    }

    /// `alpha(sigma^i, sigma^j)`, indices taken modulo `s`.
    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.table[i % self.order][j % self.order]
    }

    /// True iff every value is fixed by `sigma`, i.e. lies in `F`.
    pub fn is_rational(&self) -> bool {
        self.rational
    }

    fn holds_at(&self, a: usize, b: usize, c: usize) -> bool {
        let s = self.order;
        let lhs = self
            .entry(a, b)
            .conjugate(&self.galois, c as i64)
            .mul(self.entry((a + b) % s, c));
        let rhs = self.entry(a, (b + c) % s).mul(self.entry(b, c));
        lhs == rhs
    }

    /// Evaluates the cocycle condition on all `s^3` triples.
    pub fn check(&self) -> CocycleCheck {
        let s = self.order;
        let witness = (0..s)
            .flat_map(|a| (0..s).flat_map(move |b| (0..s).map(move |c| [a, b, c])))
            .find(|&[a, b, c]| !self.holds_at(a, b, c));
        CocycleCheck {
            triples_checked: s * s * s,
            witness,
        }
    }

    /// Every violating triple, lexicographically ordered.
    pub fn violations(&self) -> Vec<[usize; 3]> {
        let s = self.order;
        let mut out = Vec::new();
        for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    if !self.holds_at(a, b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Entrywise `l`-th power.
    pub fn power(&self, l: i64) -> Result<Self> {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|x| x.pow(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(table, self.galois.clone())
    }

    /// Entrywise product of two tables of the same order.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if other.order != self.order {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x.mul(y)).collect())
            .collect();
        Self::new(table, self.galois.clone())
    }

    /// `alpha(1, g) = alpha(g, 1) = 1` for all `g`.
    pub fn is_normalized(&self) -> bool {
        (0..self.order).all(|g| self.entry(0, g).is_one() && self.entry(g, 0).is_one())
    }

    /// Returns `gamma` when the table has the standard cyclic shape. For
    /// `s = 1` the table is `(1)` and `gamma` is reported as `1`.
    pub fn standard_gamma(&self) -> Option<S> {
        let s = self.order;
        let gamma = if s == 1 {
            self.entry(0, 0).clone()
        } else {
            self.entry(1, s - 1).clone()
        };
        let standard = (0..s).all(|i| {
            (0..s).all(|j| {
                let e = self.entry(i, j);
                if i + j < s {
                    e.is_one()
                } else {
                    *e == gamma
                }
            })
        });
        standard.then_some(gamma)
    }

    /// Replaces one entry; used to build corrupted tables for negative tests.
    pub fn with_entry(&self, i: usize, j: usize, value: S) -> Result<Self> {
        let mut table = self.table.clone();
        table[i][j] = value;
        Self::new(table, self.galois.clone())
    }
}

/// The coboundary-twisted cocycle `alpha(g,h) * h(c_g) * c_h / c_{gh}`,
/// which describes the same algebra in the basis `u'_g = u_g c_g`.
pub fn twist_by_coboundary<S: Scalar>(alpha: &Cocycle2<S>, c: &[S]) -> Result<Cocycle2<S>> {
    let s = alpha.order();
    if c.len() != s {
        return Err(AlgebraError::DimensionMismatch {
            expected: s,
            found: c.len(),
        });
    }
    let galois = alpha.galois();
    let mut table = Vec::with_capacity(s);
    for g in 0..s {
        let mut row = Vec::with_capacity(s);
        for h in 0..s {
            let v = alpha
                .entry(g, h)
                .mul(&c[g].conjugate(galois, h as i64))
                .mul(&c[h])
                .div(&c[(g + h) % s])?;
            row.push(v);
        }
        table.push(row);
    }
    Cocycle2::new(table, galois.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CyclotomicField, SymbolicScalar, SymbolicShift};

    fn gamma() -> SymbolicScalar {
        SymbolicScalar::rational("gamma")
    }

    fn shift(s: usize) -> SymbolicShift {
        SymbolicShift::new(s).unwrap()
    }

    fn render(c: &Cocycle2<SymbolicScalar>) -> Vec<Vec<String>> {
        c.table()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    #[test]
    fn standard_s3_table() {
        let a = Cocycle2::standard_cyclic(3, &gamma(), &shift(3)).unwrap();
        assert_eq!(
            render(&a),
            vec![
                vec!["1", "1", "1"],
                vec!["1", "1", "gamma"],
                vec!["1", "gamma", "gamma"]
            ]
        );
        assert!(a.is_rational());
        assert!(a.check().holds());
        assert_eq!(a.check().triples_checked, 27);
    }

    #[test]
    fn standard_s1_is_trivial() {
        let a = Cocycle2::standard_cyclic(1, &gamma(), &shift(1)).unwrap();
        assert_eq!(render(&a), vec![vec!["1"]]);
        assert!(a.check().holds());
        assert!(a.is_normalized());
    }

    #[test]
    fn quaternion_case_over_q() {
        let q = CyclotomicField::new(1).unwrap();
        let sigma = crate::scalar::GaloisAutomorphism::identity(&q);
        let a = Cocycle2::standard_cyclic(2, &q.from_int(-1), &sigma).unwrap();
        assert_eq!(a.table()[1][1], q.from_int(-1));
        assert!(a.table()[0].iter().chain([&a.table()[1][0]]).all(Scalar::is_one));
        assert!(a.check().holds());
        let squared = a.power(2).unwrap();
        assert!(squared.table().iter().flatten().all(Scalar::is_one));
    }

    #[test]
    fn zero_gamma_is_rejected() {
        let q = CyclotomicField::new(1).unwrap();
        let sigma = crate::scalar::GaloisAutomorphism::identity(&q);
        assert!(Cocycle2::standard_cyclic(2, &q.zero(), &sigma).is_err());
    }

    #[test]
    fn standard_cocycles_pass_up_to_12() {
        for s in 1..=12 {
            let a = Cocycle2::standard_cyclic(s, &gamma(), &shift(s)).unwrap();
            assert!(a.check().holds(), "s = {s}");
            assert!(a.is_normalized());
            assert_eq!(a.standard_gamma(), Some(if s == 1 { SymbolicScalar::one() } else { gamma() }));
        }
    }

    #[test]
    fn corrupted_s2_table() {
        let a = Cocycle2::trivial(2, &shift(2))
            .unwrap()
            .with_entry(1, 0, gamma())
            .unwrap();
        let report = a.check();
        assert!(!report.holds());
        // Direct evaluation at (sigma, 1, sigma):
        // lhs = sigma(alpha(sigma,1)) * alpha(sigma,sigma) = gamma,
        // rhs = alpha(sigma,sigma) * alpha(1,sigma) = 1.
        assert!(a.violations().contains(&[1, 0, 1]));
        // Lexicographically (sigma, 1, 1) comes first: gamma^2 != gamma.
        assert_eq!(report.witness, Some([1, 0, 0]));
    }

    #[test]
    fn single_entry_table_is_a_cocycle() {
        let a = Cocycle2::new(vec![vec![gamma()]], shift(1)).unwrap();
        assert!(a.check().holds());
        assert!(!a.is_normalized());
    }

    #[test]
    fn power_examples() {
        let a = Cocycle2::standard_cyclic(3, &gamma(), &shift(3)).unwrap();
        assert_eq!(a.power(1).unwrap(), a);
        assert_eq!(
            render(&a.power(2).unwrap()),
            vec![
                vec!["1", "1", "1"],
                vec!["1", "1", "gamma^2"],
                vec!["1", "gamma^2", "gamma^2"]
            ]
        );
        assert!(a.power(2).unwrap().check().holds());
    }

    #[test]
    fn power_is_additive() {
        let a = Cocycle2::standard_cyclic(5, &gamma(), &shift(5)).unwrap();
        for l in -3..4 {
            for m in -3..4 {
                let lhs = a.power(l).unwrap().product(&a.power(m).unwrap()).unwrap();
                assert_eq!(lhs, a.power(l + m).unwrap());
            }
        }
    }

    #[test]
    fn product_of_cocycles_is_a_cocycle() {
        let a = Cocycle2::standard_cyclic(4, &gamma(), &shift(4)).unwrap();
        let b = Cocycle2::standard_cyclic(4, &SymbolicScalar::rational("delta"), &shift(4)).unwrap();
        assert!(a.product(&b).unwrap().check().holds());
    }

    #[test]
    fn non_normalized_table() {
        let a = Cocycle2::trivial(3, &shift(3))
            .unwrap()
            .with_entry(0, 0, gamma())
            .unwrap();
        assert!(!a.is_normalized());
        assert!(Cocycle2::<SymbolicScalar>::trivial(1, &shift(1)).unwrap().is_normalized());
    }

    #[test]
    fn coboundary_twist_stays_a_cocycle_with_k_values() {
        let s = 4;
        let a = Cocycle2::standard_cyclic(s, &gamma(), &shift(s)).unwrap();
        let c: Vec<SymbolicScalar> = (0..s).map(|g| SymbolicScalar::twisted(&format!("c{g}"))).collect();
        let twisted = twist_by_coboundary(&a, &c).unwrap();
        assert!(!twisted.is_rational());
        assert!(twisted.check().holds());
    }

    #[test]
    fn order_must_be_divisible_by_sigma_order() {
        assert!(Cocycle2::<SymbolicScalar>::trivial(3, &shift(2)).is_err());
    }
}
