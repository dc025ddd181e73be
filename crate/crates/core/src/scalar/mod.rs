//! Coefficient fields.
//!
//! Every structure above this layer is generic over [`Scalar`], a field (or,
//! for the symbolic backend, a multiplicative group) equipped with the action
//! of a distinguished generator `sigma` of a cyclic Galois group.

mod cyclotomic;
pub(crate) mod rational;
mod symbolic;

use std::fmt;

pub use cyclotomic::{
    euler_phi, has_cyclic_unit_group, primitive_root, CyclotomicElement, CyclotomicField,
    GaloisAutomorphism,
};
pub use rational::{parse_rational, Rational};
pub use symbolic::{Symbol, SymbolicScalar, SymbolicShift};

use crate::error::Result;

/// A generator `sigma` of a finite cyclic group acting on a [`Scalar`] type.
pub trait Galois: Clone + fmt::Debug + Send + Sync {
    /// Order of `sigma`.
    fn order(&self) -> usize;

    /// Short human-readable description, e.g. `cyclotomic(n=5, g=2)`.
    fn describe(&self) -> String;
}

/// Field elements (or formal units) with a `sigma`-action.
///
/// The symbolic backend is multiplicative only: it never produces zero and
/// has no addition. Everything in the descent construction is monomial, so
/// that is all the generic code needs.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Galois: Galois;

    fn one(galois: &Self::Galois) -> Self;

    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool;

    fn mul(&self, rhs: &Self) -> Self;

    fn inv(&self) -> Result<Self>;

    /// Applies `sigma^power`; negative powers are reduced modulo the order.
    fn conjugate(&self, galois: &Self::Galois, power: i64) -> Self;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Integer power. `0^e` is zero for `e > 0`, one for `e = 0` and an
    /// error for `e < 0`.
    fn pow(&self, exponent: i64) -> Result<Self> {
        if exponent == 0 {
            return Ok(self.one_like());
        }
        let mut sq = if exponent < 0 {
            self.inv()?
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("exponent is nonzero"))
    }

    /// The unit of the field this element lives in.
    fn one_like(&self) -> Self;

    /// True iff `sigma` fixes this element.
    fn is_sigma_fixed(&self, galois: &Self::Galois) -> bool {
        self.conjugate(galois, 1) == *self
    }
}
