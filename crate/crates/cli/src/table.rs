//! Stored cocycle tables.
//!
//! ```json
//! { "backend": "symbolic", "entries": [["1", "1"], ["gamma", "gamma"]] }
//! { "backend": "cyclotomic", "conductor": 5, "entries": [["1", ["0", "1/2"]], ...] }
//! ```
//!
//! Symbolic entries use the monomial syntax `-gamma^2*d@1`. Cyclotomic
//! entries are a rational literal or a list of coefficients of `1, zeta, ...`.

use std::path::Path;

use brauer_core::scalar::parse_rational;
use brauer_core::{AlgebraError, Cocycle2, CyclotomicElement, CyclotomicField, GaloisAutomorphism, Result, SymbolicScalar, SymbolicShift};
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug, Deserialize)]
struct TableFile {
    #[serde(default)]
    backend: Option<String>,
    #[serde(default)]
    conductor: Option<u64>,
    #[serde(default)]
    generator: Option<i64>,
    entries: Vec<Vec<Value>>,
}

pub enum LoadedTable {
    Symbolic(Cocycle2<SymbolicScalar>),
    Cyclotomic(Cocycle2<CyclotomicElement>),
}

pub fn load(path: &Path) -> Result<LoadedTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AlgebraError::InvalidArgument(format!("{}: {e}", path.display())))?;
    let file: TableFile = serde_json::from_str(&text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
    let s = file.entries.len();
    let backend = file
        .backend
        .clone()
        .unwrap_or_else(|| if file.conductor.is_some() { "cyclotomic" } else { "symbolic" }.into());
    match backend.as_str() {
        "symbolic" => {
            let table = file
                .entries
                .iter()
                .map(|row| row.iter().map(symbolic_entry).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(LoadedTable::Symbolic(Cocycle2::new(table, SymbolicShift::new(s)?)?))
        }
        "cyclotomic" => {
            let n = file.conductor.ok_or_else(|| {
                AlgebraError::InvalidArgument("cyclotomic tables need a conductor".into())
            })?;
            let field = CyclotomicField::new(n)?;
            let sigma = match file.generator {
                Some(g) => GaloisAutomorphism::new(&field, g)?,
                None => field.canonical_generator().ok_or_else(|| {
                    AlgebraError::InvalidArgument(format!("(Z/{n})^x is not cyclic"))
                })?,
            };
            let table = file
                .entries
                .iter()
                .map(|row| row.iter().map(|v| cyclotomic_entry(&field, v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(LoadedTable::Cyclotomic(Cocycle2::new(table, sigma)?))
        }
        other => Err(AlgebraError::InvalidArgument(format!("unknown backend {other:?}"))),
    }
}

fn symbolic_entry(v: &Value) -> Result<SymbolicScalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) if n.as_i64() == Some(1) => Ok(SymbolicScalar::one()),
        Value::Number(n) if n.as_i64() == Some(-1) => Ok(SymbolicScalar::minus_one()),
        other => Err(AlgebraError::Parse(format!("bad symbolic entry {other}"))),
    }
}

fn rational_value(v: &Value) -> Result<brauer_core::Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| brauer_core::Rational::from_integer(i.into()))
            .ok_or_else(|| AlgebraError::Parse(format!("bad rational {n}"))),
        other => Err(AlgebraError::Parse(format!("bad rational {other}"))),
    }
}

fn cyclotomic_entry(field: &std::sync::Arc<CyclotomicField>, v: &Value) -> Result<CyclotomicElement> {
    match v {
        Value::Array(coeffs) => Ok(field.from_coeffs(
            coeffs.iter().map(rational_value).collect::<Result<Vec<_>>>()?,
        )),
        other => Ok(field.from_rational(rational_value(other)?)),
    }
}
