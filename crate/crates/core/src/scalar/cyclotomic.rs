//! Cyclotomic fields `Q(zeta_n)`.
//!
//! Elements are residues modulo the cyclotomic polynomial `Phi_n`, stored as
//! coefficient vectors of length `phi(n)` in the power basis
//! `1, zeta, ..., zeta^{phi(n)-1}`. Reducing modulo `Phi_n` (rather than
//! `x^n - 1`) makes the representation canonical, so equality is plain
//! vector equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};
use super::{Galois, Scalar};
use crate::error::{AlgebraError, Result};
use crate::linalg;

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn odd_prime_power(mut n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 2;
    }
    if p * p > n {
        return true;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// `(Z/n)^x` is cyclic exactly for `n` in `{1, 2, 4, p^k, 2p^k}`, `p` an odd
/// prime.
pub fn has_cyclic_unit_group(n: u64) -> bool {
    match n {
        0 => false,
        1 | 2 | 4 => true,
        _ if n.is_multiple_of(2) => odd_prime_power(n / 2),
        _ => odd_prime_power(n),
    }
}

fn multiplicative_order(g: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = g % n;
    let mut k = 1;
    while x != 1 {
        x = x * g % n;
        k += 1;
    }
    k
}

/// Smallest generator of `(Z/n)^x`, or `None` when the group is not cyclic.
pub fn primitive_root(n: u64) -> Option<u64> {
    if !has_cyclic_unit_group(n) {
        return None;
    }
    if n <= 2 {
        return Some(1);
    }
    let phi = euler_phi(n);
    (1..n).find(|&g| g.gcd(&n) == 1 && multiplicative_order(g, n) == phi)
}

fn divide_monic(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// `Phi_n` as ascending coefficients.
fn cyclotomic_polynomial(n: u64) -> Vec<Rational> {
    let mut poly = vec![Rational::zero(); n as usize + 1];
    poly[0] = rat(-1);
    poly[n as usize] = rat(1);
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

/// The field `Q(zeta_n)` together with precomputed reductions of `zeta^k`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    degree: usize,
    modulus: Vec<Rational>,
    zeta_powers: Vec<Vec<Rational>>,
}

impl CyclotomicField {
    pub fn new(conductor: u64) -> Result<Arc<Self>> {
        if conductor == 0 {
            return Err(AlgebraError::InvalidArgument(
                "conductor must be positive".into(),
            ));
        }
        let modulus = cyclotomic_polynomial(conductor);
        let degree = modulus.len() - 1;
        let mut field = CyclotomicField {
            conductor,
            degree,
            modulus,
            zeta_powers: Vec::new(),
        };
        let mut powers = Vec::with_capacity(conductor as usize);
        let mut current = vec![Rational::zero(); degree];
        current[0] = Rational::one();
        for _ in 0..conductor {
            powers.push(current.clone());
            let mut shifted = vec![Rational::zero()];
            shifted.extend(current.iter().cloned());
            current = field.reduce(shifted);
        }
        field.zeta_powers = powers;
        Ok(Arc::new(field))
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `[K : Q] = phi(n)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The monic `Phi_n`, ascending coefficients.
    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    fn reduce(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree;
        for k in (d..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                coeffs[k - d + i] -= &c * &self.modulus[i];
            }
        }
        coeffs.resize(d, Rational::zero());
        coeffs
    }

    pub fn zero(self: &Arc<Self>) -> CyclotomicElement {
        CyclotomicElement {
            field: Arc::clone(self),
            coeffs: vec![Rational::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CyclotomicElement {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> CyclotomicElement {
        let mut e = self.zero();
        e.coeffs[0] = q;
        e
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CyclotomicElement {
        self.from_rational(rat(n))
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CyclotomicElement {
        let idx = k.rem_euclid(self.conductor as i64) as usize;
        CyclotomicElement {
            field: Arc::clone(self),
            coeffs: self.zeta_powers[idx].clone(),
        }
    }

    pub fn zeta(self: &Arc<Self>) -> CyclotomicElement {
        self.zeta_pow(1)
    }

    /// Reduces an arbitrary polynomial in `zeta` (ascending coefficients).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<Rational>) -> CyclotomicElement {
        let coeffs = if coeffs.len() < self.degree {
            let mut c = coeffs;
            c.resize(self.degree, Rational::zero());
            c
        } else {
            self.reduce(coeffs)
        };
        CyclotomicElement {
            field: Arc::clone(self),
            coeffs,
        }
    }

    pub fn from_int_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> CyclotomicElement {
        self.from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// The canonical generator `zeta -> zeta^g` of `Gal(K|Q)`, `g` the
    /// smallest primitive root. `None` when the Galois group is not cyclic.
    pub fn canonical_generator(self: &Arc<Self>) -> Option<GaloisAutomorphism> {
        let g = primitive_root(self.conductor)?;
        GaloisAutomorphism::new(self, g as i64).ok()
    }
}

/// An element of `Q(zeta_n)`.
#[derive(Clone)]
pub struct CyclotomicElement {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl CyclotomicElement {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(AlgebraError::ConductorMismatch {
                left: self.field.conductor,
                right: other.field.conductor,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let d = self.field.degree;
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self {
            field: Arc::clone(&self.field),
            coeffs: self.field.reduce(prod),
        })
    }

    /// Multiplicative inverse, found by solving `(mult. by self) x = 1` over `Q`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let d = self.field.degree;
        // Column j of the multiplication matrix is self * zeta^j.
        let columns: Vec<Vec<Rational>> = (0..d)
            .map(|j| (self * &self.field.zeta_pow(j as i64)).coeffs)
            .collect();
        let matrix: Vec<Vec<Rational>> = (0..d)
            .map(|i| (0..d).map(|j| columns[j][i].clone()).collect())
            .collect();
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let x = linalg::solve(&matrix, &rhs).ok_or(AlgebraError::DivisionByZero)?;
        Ok(Self {
            field: Arc::clone(&self.field),
            coeffs: x,
        })
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CyclotomicElement {}

impl fmt::Debug for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})[{}]", self.field.conductor, self)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CyclotomicElement> for &CyclotomicElement {
            type Output = CyclotomicElement;
            /// Panics when the conductors differ; use the `checked_` variant
            /// to get an error instead.
            fn $method(self, rhs: &CyclotomicElement) -> CyclotomicElement {
                self.$checked(rhs).expect("cyclotomic operands from different fields")
            }
        }
        impl $trait for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $method(self, rhs: CyclotomicElement) -> CyclotomicElement {
                <&CyclotomicElement as $trait<&CyclotomicElement>>::$method(&self, &rhs)
            }
        }
    };
}

impl CyclotomicElement {
    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

/// The automorphism `zeta -> zeta^g` of `Q(zeta_n)`, `gcd(g, n) = 1`.
#[derive(Clone)]
pub struct GaloisAutomorphism {
    field: Arc<CyclotomicField>,
    exponent: u64,
}

impl GaloisAutomorphism {
    pub fn new(field: &Arc<CyclotomicField>, exponent: i64) -> Result<Self> {
        let n = field.conductor;
        let g = exponent.rem_euclid(n as i64) as u64;
        if g.gcd(&n) != 1 && n > 1 {
            return Err(AlgebraError::InvalidArgument(format!(
                "exponent {exponent} is not a unit modulo {n}"
            )));
        }
        Ok(Self {
            field: Arc::clone(field),
            exponent: if n == 1 { 0 } else { g },
        })
    }

    pub fn identity(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: Arc::clone(field),
            exponent: 1 % field.conductor,
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `self` after `other` (exponents multiply).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.conductor() != other.conductor() {
            return Err(AlgebraError::ConductorMismatch {
                left: self.conductor(),
                right: other.conductor(),
            });
        }
        Ok(Self {
            field: Arc::clone(&self.field),
            exponent: self.exponent * other.exponent % self.conductor(),
        })
    }

    /// `self^k` for any integer `k`.
    pub fn power(&self, k: i64) -> Self {
        let n = self.conductor();
        let order = self.order() as i64;
        let mut e = k.rem_euclid(order.max(1));
        let mut g = 1 % n;
        while e > 0 {
            g = g * self.exponent % n;
            e -= 1;
        }
        Self {
            field: Arc::clone(&self.field),
            exponent: g,
        }
    }

    /// Substitutes `zeta -> zeta^g` and reduces.
    pub fn apply(&self, a: &CyclotomicElement) -> Result<CyclotomicElement> {
        if a.conductor() != self.conductor() {
            return Err(AlgebraError::ConductorMismatch {
                left: self.conductor(),
                right: a.conductor(),
            });
        }
        Ok(self.apply_unchecked(a))
    }

    fn apply_unchecked(&self, a: &CyclotomicElement) -> CyclotomicElement {
        let n = self.conductor();
        let d = self.field.degree;
        let mut out = vec![Rational::zero(); d];
        for (j, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (j as u64 * self.exponent % n) as usize;
            for (o, z) in out.iter_mut().zip(&self.field.zeta_powers[idx]) {
                if !z.is_zero() {
                    *o += c * z;
                }
            }
        }
        CyclotomicElement {
            field: Arc::clone(&self.field),
            coeffs: out,
        }
    }

    /// True iff the automorphism fixes `a`.
    pub fn fixes(&self, a: &CyclotomicElement) -> Result<bool> {
        Ok(self.apply(a)? == *a)
    }

    /// True iff this automorphism generates `Gal(K|Q)`.
    pub fn generates(&self) -> bool {
        self.order() as u64 == self.field.degree as u64
    }
}

impl PartialEq for GaloisAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.exponent == other.exponent
    }
}

impl Eq for GaloisAutomorphism {}

impl fmt::Debug for GaloisAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta_{0} -> zeta_{0}^{1}", self.conductor(), self.exponent)
    }
}

impl Galois for GaloisAutomorphism {
    fn order(&self) -> usize {
        multiplicative_order(self.exponent, self.conductor()) as usize
    }

    fn describe(&self) -> String {
        format!("cyclotomic(n={}, g={})", self.conductor(), self.exponent)
    }
}

impl Scalar for CyclotomicElement {
    type Galois = GaloisAutomorphism;

    fn one(galois: &GaloisAutomorphism) -> Self {
        galois.field.one()
    }

    fn is_zero(&self) -> bool {
        CyclotomicElement::is_zero(self)
    }

    fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn mul(&self, rhs: &Self) -> Self {
        <&Self as Mul<&Self>>::mul(self, rhs)
    }

    fn inv(&self) -> Result<Self> {
        self.inverse()
    }

    fn conjugate(&self, galois: &GaloisAutomorphism, power: i64) -> Self {
        galois
            .power(power)
            .apply(self)
            .expect("conjugation by an automorphism of another field")
    }

    fn one_like(&self) -> Self {
        self.field.one()
    }
}
