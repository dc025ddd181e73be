//! JSON certificates for pipeline runs.

use serde::{Deserialize, Serialize};

use super::{run_pipeline, PipelineReport, ThetaSpec};
use crate::error::{AlgebraError, Result};
use crate::scalar::{
    parse_rational, CyclotomicField, GaloisAutomorphism, Scalar, SymbolicScalar,
};

const PROBE_COUNT: usize = 8;

/// The request half of a certificate: enough to rerun the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub s: usize,
    pub ell: usize,
    /// `"symbolic"` or `"cyclotomic"`.
    pub backend: String,
    /// `"symbolic"` or a rational literal.
    pub gamma: String,
    pub conductor: Option<u64>,
    pub generator: Option<i64>,
}

impl SpecDoc {
    pub fn symbolic(s: usize, ell: usize) -> Self {
        Self {
            s,
            ell,
            backend: "symbolic".into(),
            gamma: "symbolic".into(),
            conductor: None,
            generator: None,
        }
    }

    pub fn cyclotomic(s: usize, ell: usize, gamma: &str, conductor: u64, generator: Option<i64>) -> Self {
        Self {
            s,
            ell,
            backend: "cyclotomic".into(),
            gamma: gamma.into(),
            conductor: Some(conductor),
            generator,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub pass: bool,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub verdict: bool,
    pub lambda: Option<String>,
    pub ratios: Vec<String>,
    pub first_mismatch: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub det: String,
    pub verdict: bool,
    pub reduced: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub spec: SpecDoc,
    /// Exponent of `gamma` in each `beta_i`.
    pub beta: Option<Vec<i64>>,
    pub k: Option<String>,
    pub m: Option<usize>,
    pub residual: Option<String>,
    pub phi_scalar: Option<String>,
    pub psi_scalar: Option<String>,
    pub diagram: Option<DiagramDoc>,
    pub lattice: Option<LatticeDoc>,
    pub inverse_cross_check: Option<bool>,
    pub stages: Vec<StageRecord>,
    /// `"pass"` or `"fail"`.
    pub status: String,
    pub failure: Option<StageFailure>,
}

impl CertificateDoc {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))
    }

    /// The same document with every stage timing zeroed.
    pub fn without_timings(&self) -> Self {
        let mut doc = self.clone();
        for stage in &mut doc.stages {
            stage.millis = 0;
        }
        doc
    }

    fn from_report<S: Scalar>(report: &PipelineReport<S>, spec: SpecDoc) -> Self {
        let diagram = report.diagram.as_ref().map(|d| DiagramDoc {
            verdict: d.holds(),
            lambda: d.lambda().map(ToString::to_string),
            ratios: d.comparison.ratios.iter().map(ToString::to_string).collect(),
            first_mismatch: d.first_mismatch(),
        });
        let lattice = report.lattice.as_ref().map(|l| LatticeDoc {
            det: l.determinant.to_string(),
            verdict: l.birational,
            reduced: l.reduced.clone(),
        });
        Self {
            spec,
            beta: report.beta_exponents(),
            k: report.beta.as_ref().map(|b| b.k.to_string()),
            m: report.beta.as_ref().map(|b| b.m),
            residual: report.beta.as_ref().map(|b| b.residual.to_string()),
            phi_scalar: report.phi_scalar.as_ref().map(ToString::to_string),
            psi_scalar: report.psi_scalar.as_ref().map(ToString::to_string),
            diagram,
            lattice,
            inverse_cross_check: report.inverse_cross_check,
            stages: report.stages.clone(),
            status: if report.passed() { "pass" } else { "fail" }.into(),
            failure: report.failure.clone(),
        }
    }
}

/// Smallest `e` in `0..=bound`, then `-1..=-bound`, with `gamma^e = x`.
pub fn gamma_exponent<S: Scalar>(gamma: &S, x: &S, bound: usize) -> Option<i64> {
    let bound = bound as i64;
    (0..=bound)
        .chain((1..=bound).map(|e| -e))
        .find(|&e| gamma.pow(e).is_ok_and(|p| p == *x))
}

/// Runs the pipeline described by `spec`. Malformed requests are errors;
/// failing stages are reported inside the document.
pub fn run_request(spec: &SpecDoc) -> Result<CertificateDoc> {
    match spec.backend.as_str() {
        "symbolic" => {
            if spec.gamma != "symbolic" {
                return Err(AlgebraError::InvalidArgument(
                    "the symbolic backend takes gamma = symbolic".into(),
                ));
            }
            if spec.conductor.is_some() || spec.generator.is_some() {
                return Err(AlgebraError::InvalidArgument(
                    "conductor and generator need the cyclotomic backend".into(),
                ));
            }
            let theta = ThetaSpec::<SymbolicScalar>::symbolic(spec.s, spec.ell)?;
            Ok(CertificateDoc::from_report(&run_pipeline(&theta), spec.clone()))
        }
        "cyclotomic" => {
            let n = spec.conductor.ok_or_else(|| {
                AlgebraError::InvalidArgument("the cyclotomic backend needs a conductor".into())
            })?;
            let gamma = parse_rational(&spec.gamma)?;
            let field = CyclotomicField::new(n)?;
            let sigma = match spec.generator {
                Some(g) => GaloisAutomorphism::new(&field, g)?,
                None => field.canonical_generator().ok_or_else(|| {
                    AlgebraError::InvalidArgument(format!("(Z/{n})^x is not cyclic"))
                })?,
            };
            let order = crate::scalar::Galois::order(&sigma);
            if spec.s == 0 || !spec.s.is_multiple_of(order) {
                return Err(AlgebraError::InvalidArgument(format!(
                    "sigma has order {order}, which does not divide s = {}",
                    spec.s
                )));
            }
            let mut resolved = spec.clone();
            resolved.generator = Some(sigma.exponent() as i64);
            let seed = ((spec.s as u64) << 32) | spec.ell as u64;
            let theta = ThetaSpec::cyclotomic(spec.s, spec.ell, &gamma, sigma, PROBE_COUNT, seed)?;
            Ok(CertificateDoc::from_report(&run_pipeline(&theta), resolved))
        }
        other => Err(AlgebraError::InvalidArgument(format!("unknown backend {other:?}"))),
    }
}

/// Reruns the certificate's request and reports whether every recorded
/// verdict is reproduced.
pub fn revalidate(doc: &CertificateDoc) -> Result<bool> {
    let fresh = run_request(&doc.spec)?;
    Ok(fresh.without_timings() == doc.without_timings())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CyclotomicField;

    #[test]
    fn gamma_exponent_search() {
        let k = CyclotomicField::new(5).unwrap();
        let two = k.from_int(2);
        assert_eq!(gamma_exponent(&two, &k.from_int(8), 4), Some(3));
        assert_eq!(gamma_exponent(&two, &k.one(), 4), Some(0));
        assert_eq!(gamma_exponent(&two, &two.inv().unwrap(), 4), Some(-1));
        assert_eq!(gamma_exponent(&two, &k.from_int(3), 4), None);
    }

    #[test]
    fn symbolic_round_trip() {
        let doc = run_request(&SpecDoc::symbolic(5, 3)).unwrap();
        assert!(doc.passed());
        assert_eq!(doc.beta, Some(vec![0, 0, 0, 1, 2]));
        let back = CertificateDoc::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert!(revalidate(&back).unwrap());
    }

    #[test]
    fn tampered_certificate_does_not_revalidate() {
        let mut doc = run_request(&SpecDoc::symbolic(4, 2)).unwrap();
        assert!(!doc.passed());
        assert_eq!(doc.lattice.as_ref().unwrap().det, "0");
        doc.status = "pass".into();
        assert!(!revalidate(&doc).unwrap());
    }

    #[test]
    fn cyclotomic_request() {
        let doc = run_request(&SpecDoc::cyclotomic(4, 3, "2", 5, None)).unwrap();
        assert!(doc.passed(), "{:?}", doc.failure);
        assert_eq!(doc.spec.generator, Some(2));
        assert_eq!(doc.psi_scalar.as_deref(), Some("8"));
    }

    #[test]
    fn malformed_requests() {
        let mut spec = SpecDoc::symbolic(3, 2);
        spec.gamma = "2".into();
        assert!(run_request(&spec).is_err());
        assert!(run_request(&SpecDoc::cyclotomic(3, 2, "2", 5, None)).is_err());
        assert!(run_request(&SpecDoc::cyclotomic(2, 1, "2", 8, None)).is_err());
        assert!(run_request(&SpecDoc::cyclotomic(2, 1, "x", 3, None)).is_err());
        assert!(run_request(&SpecDoc::symbolic(3, 3)).is_err());
    }
}
