//! Signed Laurent monomials over named symbols.
//!
//! A symbol is either *rational* (an element of the base field `F`, fixed by
//! `sigma`: `gamma`, `beta_i`, `k`) or *twisted* (an element of `K` carrying the
//! power of `sigma` that has been applied to it, taken modulo the group order).
//! The resulting group is free abelian on the symbols times `{+1, -1}`, which
//! is enough to verify every monomial identity in the descent construction
//! with all parameters left generic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{Galois, Scalar};
use crate::error::{AlgebraError, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: String,
    /// `None` for `sigma`-fixed symbols, otherwise the applied power of `sigma`.
    tag: Option<u32>,
}

impl Symbol {
    pub fn rational(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            tag: None,
        }
    }

    pub fn twisted(name: impl Into<String>, tag: u32) -> Self {
        Self {
            name: name.into(),
            tag: Some(tag),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tag(&self) -> Option<u32> {
        self.tag
    }

    pub fn is_rational(&self) -> bool {
        self.tag.is_none()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            None => write!(f, "{}", self.name),
            Some(t) => write!(f, "{}@{}", self.name, t),
        }
    }
}

/// `sigma` acting on symbolic scalars: shifts every twisted tag modulo `order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolicShift {
    order: usize,
}

impl SymbolicShift {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(AlgebraError::InvalidArgument(
                "group order must be positive".into(),
            ));
        }
        Ok(Self { order })
    }
}

impl Galois for SymbolicShift {
    fn order(&self) -> usize {
        self.order
    }

    fn describe(&self) -> String {
        "symbolic".into()
    }
}

/// `+-` a product of symbol powers. Zero exponents are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicScalar {
    negative: bool,
    exponents: BTreeMap<Symbol, i64>,
}

impl SymbolicScalar {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn minus_one() -> Self {
        Self {
            negative: true,
            exponents: BTreeMap::new(),
        }
    }

    pub fn symbol(sym: Symbol) -> Self {
        Self::symbol_pow(sym, 1)
    }

    pub fn symbol_pow(sym: Symbol, e: i64) -> Self {
        let mut exponents = BTreeMap::new();
        if e != 0 {
            exponents.insert(sym, e);
        }
        Self {
            negative: false,
            exponents,
        }
    }

    /// A `sigma`-fixed symbol such as `gamma`.
    pub fn rational(name: &str) -> Self {
        Self::symbol(Symbol::rational(name))
    }

    /// A `K`-valued symbol with no `sigma` applied yet.
    pub fn twisted(name: &str) -> Self {
        Self::symbol(Symbol::twisted(name, 0))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponent_of(&self, sym: &Symbol) -> i64 {
        self.exponents.get(sym).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&Symbol, i64)> {
        self.exponents.iter().map(|(s, &e)| (s, e))
    }

    /// True iff every symbol occurring is rational.
    pub fn is_rational(&self) -> bool {
        self.exponents.keys().all(Symbol::is_rational)
    }

    fn multiply(&self, rhs: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (sym, &e) in &rhs.exponents {
            let entry = exponents.entry(sym.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                exponents.remove(sym);
            }
        }
        Self {
            negative: self.negative ^ rhs.negative,
            exponents,
        }
    }

    fn inverse(&self) -> Self {
        Self {
            negative: self.negative,
            exponents: self.exponents.iter().map(|(s, &e)| (s.clone(), -e)).collect(),
        }
    }

    /// Applies `sigma^power`: twisted tags move, rational symbols stay.
    pub fn shift(&self, order: usize, power: i64) -> Self {
        let step = power.rem_euclid(order as i64) as u32;
        let mut exponents = BTreeMap::new();
        for (sym, &e) in &self.exponents {
            let moved = match sym.tag {
                None => sym.clone(),
                Some(t) => Symbol {
                    name: sym.name.clone(),
                    tag: Some((t + step) % order as u32),
                },
            };
            let entry = exponents.entry(moved).or_insert(0);
            *entry += e;
        }
        exponents.retain(|_, e| *e != 0);
        Self {
            negative: self.negative,
            exponents,
        }
    }
}

impl Scalar for SymbolicScalar {
    type Galois = SymbolicShift;

    fn one(_: &SymbolicShift) -> Self {
        Self::one()
    }

    fn is_zero(&self) -> bool {
        false
    }

    fn is_one(&self) -> bool {
        !self.negative && self.exponents.is_empty()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn inv(&self) -> Result<Self> {
        Ok(self.inverse())
    }

    fn pow(&self, exponent: i64) -> Result<Self> {
        Ok(Self {
            negative: self.negative && exponent % 2 != 0,
            exponents: if exponent == 0 {
                BTreeMap::new()
            } else {
                self.exponents
                    .iter()
                    .map(|(s, &e)| (s.clone(), e * exponent))
                    .collect()
            },
        })
    }

    fn conjugate(&self, galois: &SymbolicShift, power: i64) -> Self {
        self.shift(galois.order, power)
    }

    fn one_like(&self) -> Self {
        Self::one()
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        for (i, (sym, &e)) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SymbolicScalar {
    type Err = AlgebraError;

    /// Parses the `Display` form: `1`, `-1`, `gamma^2*a@1^-1`, `-gamma`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| AlgebraError::Parse(format!("{why} in {text:?}"));
        let mut rest = text.trim();
        let mut out = Self::one();
        if let Some(r) = rest.strip_prefix('-') {
            out.negative = true;
            rest = r.trim_start();
        }
        if rest == "1" {
            return Ok(out);
        }
        for factor in rest.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.trim().parse::<i64>().map_err(|_| bad("bad exponent"))?,
                ),
                None => (factor, 1),
            };
            let (name, tag) = match base.split_once('@') {
                Some((n, t)) => (
                    n,
                    Some(t.trim().parse::<u32>().map_err(|_| bad("bad tag"))?),
                ),
                None => (base, None),
            };
            let name = name.trim();
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(bad("bad symbol name"));
            }
            let sym = Symbol {
                name: name.to_string(),
                tag,
            };
            out = out.multiply(&Self::symbol_pow(sym, exp));
        }
        Ok(out)
    }
}
