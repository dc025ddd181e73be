//! Exact arithmetic for cyclic algebras and the Severi-Brauer varieties attached
//! to them.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] provides the coefficient fields: arbitrary-precision rationals,
//!   cyclotomic fields `Q(zeta_n)` with their Galois automorphisms, and a
//!   symbolic Laurent-monomial group used to verify identities generically.
//! * [`cohomology`] holds 2-cocycles on a cyclic group of order `s`.
//! * [`crossed_product`] builds the crossed-product algebra `(K, G, alpha)`,
//!   checks associativity and centrality, and realises the splitting
//!   `A (x) K = M_s(K)`.
//! * [`monomial`] models semilinear monomial maps on projective space: the
//!   Galois descent data, composition, projective equality and the exponent
//!   lattice criterion for birationality.
//! * [`roquette`] assembles the explicit birational map between `SB(A)` and
//!   `SB(A^l)` and emits machine-readable certificates.

pub mod cohomology;
pub mod crossed_product;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod roquette;
pub mod scalar;

pub use cohomology::{Cocycle2, CocycleCheck};
pub use crossed_product::{CrossedElement, CrossedProduct, SplitMatrix};
pub use monomial::{LatticeCertificate, ProjectiveMode, SemilinearMonomialMap};
pub use error::{AlgebraError, Result};

pub use scalar::{
    CyclotomicElement, CyclotomicField, Galois, GaloisAutomorphism, Rational, Scalar,
    SymbolicScalar, SymbolicShift, Symbol,
};
