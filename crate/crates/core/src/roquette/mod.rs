//! The birational map `Theta : SB(A) --> SB(A^l)` for a cyclic algebra
//! `A = (K/F, sigma, gamma)` of degree `s` and `gcd(l, s) = 1`.
//!
//! With the standard cocycle `alpha`, the descent data of `SB(A)` is the
//! semilinear map `phi_1` built from `alpha`, and that of `SB(A^l)` is `psi_1`
//! built from `alpha^l`. The map
//!
//! ```text
//! Theta(a) = [beta_0 a_0 ... a_{l-1}, beta_1 a_1 ... a_l, ..., beta_{s-1} a_{s-1} ... a_{l-2}]
//! ```
//!
//! factors as `Theta_2 o Theta_1`, a diagonal scaling after the circulant
//! monomial map. The scalars `beta_i` are chosen so that
//! `Theta o phi_1 = psi_1 o Theta` projectively; `Theta_1` is birational
//! because its exponent lattice map is unimodular.

mod certificate;

use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::Cocycle2;
use crate::error::{AlgebraError, Result};
use crate::monomial::{
    descent_cocycle_check, galois_generator_map, projectively_equal, points_projectively_equal,
    LatticeCertificate, Mismatch, ProjectiveComparison, ProjectiveMode, SemilinearMonomialMap,
};
use crate::scalar::{
    CyclotomicElement, GaloisAutomorphism, Rational, Scalar, SymbolicScalar, SymbolicShift,
};

pub use certificate::{
    gamma_exponent, revalidate, run_request, CertificateDoc, DiagramDoc, LatticeDoc, SpecDoc,
    StageFailure, StageRecord,
};

/// Parameters of one instance of the construction.
#[derive(Clone, Debug)]
pub struct ThetaSpec<S: Scalar> {
    pub s: usize,
    pub ell: usize,
    pub gamma: S,
    pub galois: S::Galois,
    /// Points at which the commuting square is also evaluated.
    pub probes: Vec<Vec<S>>,
}

impl<S: Scalar> ThetaSpec<S> {
    pub fn new(s: usize, ell: usize, gamma: S, galois: S::Galois) -> Result<Self> {
        check_ell(s, ell)?;
        Ok(Self {
            s,
            ell,
            gamma,
            galois,
            probes: Vec::new(),
        })
    }

    pub fn with_probes(mut self, probes: Vec<Vec<S>>) -> Self {
        self.probes = probes;
        self
    }

    pub fn is_coprime(&self) -> bool {
        self.s.gcd(&self.ell) == 1
    }

    pub fn cocycle(&self) -> Result<Cocycle2<S>> {
        Cocycle2::standard_cyclic(self.s, &self.gamma, &self.galois)
    }
}

impl ThetaSpec<SymbolicScalar> {
    /// Symbolic `gamma`, with the generic point `(a0@0, ..., a{s-1}@0)` as probe.
    pub fn symbolic(s: usize, ell: usize) -> Result<Self> {
        let galois = SymbolicShift::new(s)?;
        let point = (0..s)
            .map(|j| SymbolicScalar::twisted(&format!("a{j}")))
            .collect();
        Ok(Self::new(s, ell, SymbolicScalar::rational("gamma"), galois)?.with_probes(vec![point]))
    }
}

impl ThetaSpec<CyclotomicElement> {
    /// Rational `gamma` over `Q(zeta_n)` with `probe_count` seeded random
    /// points whose coordinates are all nonzero.
    pub fn cyclotomic(
        s: usize,
        ell: usize,
        gamma: &Rational,
        sigma: GaloisAutomorphism,
        probe_count: usize,
        seed: u64,
    ) -> Result<Self> {
        let field = sigma.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probes = (0..probe_count)
            .map(|_| {
                (0..s)
                    .map(|_| loop {
                        let x = field.from_coeffs(
                            (0..field.degree())
                                .map(|_| Rational::from_integer(rng.random_range(-6i64..=6).into()))
                                .collect(),
                        );
                        if !x.is_zero() {
                            break x;
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self::new(s, ell, field.from_rational(gamma.clone()), sigma)?.with_probes(probes))
    }
}

fn check_ell(s: usize, ell: usize) -> Result<()> {
    if ell == 0 || ell >= s {
        return Err(AlgebraError::InvalidArgument(format!(
            "need 1 <= l < s, got s = {s}, l = {ell}"
        )));
    }
    Ok(())
}

/// The scalars of `Theta_2` and the data of the consistency condition.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSolution<S: Scalar> {
    pub beta: Vec<S>,
    pub k: S,
    /// `beta_s / beta_0` after running the chain once around; must be 1.
    pub residual: S,
    /// Occurrences of `alpha_{1,s-1}` among the chain numerators.
    pub m: usize,
}

/// `Theta_1`: row `i` has ones in columns `i, ..., i+l-1` (mod `s`).
pub fn build_theta1<S: Scalar>(s: usize, ell: usize, galois: &S::Galois) -> Result<SemilinearMonomialMap<S>> {
    check_ell(s, ell)?;
    let exponents = (0..s)
        .map(|i| (0..s).map(|j| i64::from((j + s - i) % s < ell)).collect())
        .collect();
    SemilinearMonomialMap::new(exponents, vec![S::one(galois); s], 0, galois.clone())
}

/// `Theta_2 = diag(beta)`.
pub fn build_theta2<S: Scalar>(beta: &BetaSolution<S>, galois: &S::Galois) -> Result<SemilinearMonomialMap<S>> {
    SemilinearMonomialMap::diagonal(beta.beta.clone(), galois)
}

pub fn build_theta<S: Scalar>(spec: &ThetaSpec<S>, beta: &BetaSolution<S>) -> Result<SemilinearMonomialMap<S>> {
    build_theta2(beta, &spec.galois)?.compose(&build_theta1(spec.s, spec.ell, &spec.galois)?)
}

pub fn solve_beta<S: Scalar>(spec: &ThetaSpec<S>) -> Result<BetaSolution<S>> {
    solve_beta_for(&spec.cocycle()?, spec.ell)
}

/// Solves `beta_i prod_{t<l} alpha_{1,i+t} = k alpha_{1,i}^l beta_{i+1}` with
/// `beta_0 = 1` and `k = 1` for any table with values in the base field.
pub fn solve_beta_for<S: Scalar>(alpha: &Cocycle2<S>, ell: usize) -> Result<BetaSolution<S>> {
    let s = alpha.order();
    check_ell(s, ell)?;
    if !alpha.is_rational() {
        return Err(AlgebraError::Unsupported(
            "the scalar system needs a cocycle with values in the base field".into(),
        ));
    }
    let galois = alpha.galois();
    let one = S::one(galois);
    let a = |j: usize| alpha.entry(1, j % s);
    let mut beta = vec![one.clone()];
    let mut m = 0;
    let mut current = one.clone();
    for i in 0..s {
        let mut num = current.clone();
        for t in 1..ell {
            num = num.mul(a(i + t));
            if (i + t) % s == s - 1 {
                m += 1;
            }
        }
        current = num.div(&a(i).pow(ell as i64 - 1)?)?;
        if i + 1 < s {
            beta.push(current.clone());
        }
    }
    let residual = current;
    if !residual.is_one() {
        return Err(AlgebraError::Inconsistent(format!(
            "wrap-around residual {residual} != 1"
        )));
    }
    if m != ell - 1 {
        return Err(AlgebraError::Inconsistent(format!(
            "alpha_(1,s-1) occurs {m} times, expected {}",
            ell - 1
        )));
    }
    Ok(BetaSolution {
        beta,
        k: one,
        residual,
        m,
    })
}

/// Result of comparing `Theta o phi_1` with `psi_1 o Theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramCheck<S: Scalar> {
    pub comparison: ProjectiveComparison<S>,
    /// Pointwise ratio at each probe, `None` where the images disagree.
    pub probes: Vec<Option<S>>,
}

impl<S: Scalar> DiagramCheck<S> {
    pub fn holds(&self) -> bool {
        self.comparison.equal()
            && self
                .probes
                .iter()
                .all(|p| p.is_some() && *p == self.comparison.lambda)
    }

    pub fn lambda(&self) -> Option<&S> {
        self.comparison.lambda.as_ref()
    }

    /// First coordinate whose ratio differs, or the probe index on a pointwise failure.
    pub fn first_mismatch(&self) -> Option<usize> {
        match &self.comparison.mismatch {
            Some(Mismatch::Coefficient(i)) | Some(Mismatch::Exponents(i)) => Some(*i),
            Some(_) => Some(0),
            None => self.probes.iter().position(|p| *p != self.comparison.lambda),
        }
    }
}

pub fn verify_diagram<S: Scalar>(spec: &ThetaSpec<S>, beta: &BetaSolution<S>) -> Result<DiagramCheck<S>> {
    let alpha = spec.cocycle()?;
    let phi = galois_generator_map(&alpha)?;
    let psi = galois_generator_map(&alpha.power(spec.ell as i64)?)?;
    let theta = build_theta(spec, beta)?;
    let left = theta.compose(&phi)?;
    let right = psi.compose(&theta)?;
    let comparison = projectively_equal(&left, &right, ProjectiveMode::Strict);
    let probes = spec
        .probes
        .iter()
        .map(|p| Ok(points_projectively_equal(&right.evaluate(p)?, &left.evaluate(p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagramCheck { comparison, probes })
}

/// `Theta o phi_1^i` against `psi_1^i o Theta` for `i = 1, ..., s-1`.
pub fn verify_all_powers<S: Scalar>(
    spec: &ThetaSpec<S>,
    beta: &BetaSolution<S>,
) -> Result<Vec<ProjectiveComparison<S>>> {
    let alpha = spec.cocycle()?;
    let phi = galois_generator_map(&alpha)?;
    let psi = galois_generator_map(&alpha.power(spec.ell as i64)?)?;
    let theta = build_theta(spec, beta)?;
    (1..spec.s)
        .map(|i| {
            let left = theta.compose(&phi.iterate(i)?)?;
            let right = psi.iterate(i)?.compose(&theta)?;
            Ok(projectively_equal(&left, &right, ProjectiveMode::Strict))
        })
        .collect()
}

/// The inverse of `Theta_1` on `a_0 != 0` by telescoping: from
/// `z_i = a_i ... a_{i+l-1}` one gets `a_{i+l} = a_i z_{i+1} / z_i`, and
/// stepping by `l` from `a_0 = 1` reaches every index.
pub fn invert_theta1_explicit<S: Scalar>(
    s: usize,
    ell: usize,
    galois: &S::Galois,
) -> Result<SemilinearMonomialMap<S>> {
    check_ell(s, ell)?;
    if s.gcd(&ell) != 1 {
        return Err(AlgebraError::InvalidArgument(format!(
            "gcd(l, s) = {} != 1, Theta_1 is not birational",
            s.gcd(&ell)
        )));
    }
    let mut rows: Vec<Option<Vec<i64>>> = vec![None; s];
    let mut current = vec![0i64; s];
    let mut i = 0;
    rows[0] = Some(current.clone());
    for _ in 1..s {
        current[(i + 1) % s] += 1;
        current[i] -= 1;
        i = (i + ell) % s;
        rows[i] = Some(current.clone());
    }
    let exponents = rows
        .into_iter()
        .map(|r| {
            let mut r = r.expect("l generates Z/s");
            r[0] += 1;
            r
        })
        .collect();
    SemilinearMonomialMap::new(exponents, vec![S::one(galois); s], 0, galois.clone())
}

/// Outcome of [`run_pipeline`]. Every field reached before a failure is
/// filled in; `failure` names the first stage that did not pass.
#[derive(Clone, Debug)]
pub struct PipelineReport<S: Scalar> {
    pub spec: ThetaSpec<S>,
    pub phi_scalar: Option<S>,
    pub psi_scalar: Option<S>,
    pub beta: Option<BetaSolution<S>>,
    pub diagram: Option<DiagramCheck<S>>,
    pub lattice: Option<LatticeCertificate>,
    pub theta1_inverse: Option<SemilinearMonomialMap<S>>,
    pub inverse_cross_check: Option<bool>,
    pub stages: Vec<StageRecord>,
    pub failure: Option<StageFailure>,
}

impl<S: Scalar> PipelineReport<S> {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Exponents of `beta_i` in base `gamma`.
    pub fn beta_exponents(&self) -> Option<Vec<i64>> {
        let beta = self.beta.as_ref()?;
        beta.beta
            .iter()
            .map(|b| gamma_exponent(&self.spec.gamma, b, self.spec.s))
            .collect()
    }
}

struct Runner {
    stages: Vec<StageRecord>,
}

impl Runner {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> std::result::Result<T, String>) -> std::result::Result<T, StageFailure> {
        let start = Instant::now();
        let out = f();
        self.stages.push(StageRecord {
            name: name.to_string(),
            pass: out.is_ok(),
            millis: start.elapsed().as_millis() as u64,
        });
        out.map_err(|witness| StageFailure {
            stage: name.to_string(),
            witness,
        })
    }
}

/// Runs every check of the construction in order and stops at the first
/// failing stage.
pub fn run_pipeline<S: Scalar>(spec: &ThetaSpec<S>) -> PipelineReport<S> {
    let mut report = PipelineReport {
        spec: spec.clone(),
        phi_scalar: None,
        psi_scalar: None,
        beta: None,
        diagram: None,
        lattice: None,
        theta1_inverse: None,
        inverse_cross_check: None,
        stages: Vec::new(),
        failure: None,
    };
    let mut runner = Runner { stages: Vec::new() };
    let outcome = pipeline_stages(spec, &mut runner, &mut report);
    report.stages = runner.stages;
    report.failure = outcome.err();
    report
}

fn pipeline_stages<S: Scalar>(
    spec: &ThetaSpec<S>,
    runner: &mut Runner,
    report: &mut PipelineReport<S>,
) -> std::result::Result<(), StageFailure> {
    let alpha = runner.stage("cocycle", || {
        let alpha = spec.cocycle().map_err(|e| e.to_string())?;
        match alpha.check().witness {
            None => Ok(alpha),
            Some([i, j, k]) => Err(format!("cocycle condition fails at ({i}, {j}, {k})")),
        }
    })?;
    let descent = |name: &str, table: &Cocycle2<S>| -> std::result::Result<S, String> {
        let map = galois_generator_map(table).map_err(|e| e.to_string())?;
        let check = descent_cocycle_check(&map).map_err(|e| e.to_string())?;
        check
            .lambda
            .ok_or_else(|| format!("{name}^s is not a scalar: {:?}", check.comparison.mismatch))
    };
    report.phi_scalar = Some(runner.stage("descent_phi", || descent("phi_1", &alpha))?);
    let alpha_l = alpha.power(spec.ell as i64).map_err(|e| StageFailure {
        stage: "descent_psi".into(),
        witness: e.to_string(),
    })?;
    report.psi_scalar = Some(runner.stage("descent_psi", || descent("psi_1", &alpha_l))?);

    let beta = runner.stage("solve_beta", || {
        let beta = solve_beta_for(&alpha, spec.ell).map_err(|e| e.to_string())?;
        if let Some(i) = beta
            .beta
            .iter()
            .position(|b| gamma_exponent(&spec.gamma, b, spec.s).is_none())
        {
            return Err(format!("beta_{i} = {} is not a power of gamma", beta.beta[i]));
        }
        Ok(beta)
    })?;
    report.beta = Some(beta.clone());

    let diagram = verify_diagram(spec, &beta);
    let diagram = runner.stage("diagram", || {
        let d = diagram.map_err(|e| e.to_string())?;
        if d.holds() {
            Ok(d)
        } else {
            let at = d.first_mismatch().unwrap_or(0);
            let ratio = d
                .comparison
                .ratios
                .get(at)
                .map(ToString::to_string)
                .unwrap_or_default();
            report.diagram = Some(d);
            Err(format!("coordinate {at}: ratio {ratio} differs"))
        }
    })?;
    report.diagram = Some(diagram);

    let theta1 = build_theta1::<S>(spec.s, spec.ell, &spec.galois).map_err(|e| StageFailure {
        stage: "lattice".into(),
        witness: e.to_string(),
    })?;
    let cert = theta1.lattice_certificate();
    report.lattice = Some(cert.clone());
    runner.stage("lattice", || {
        if cert.birational {
            Ok(())
        } else {
            Err(format!("det = {}", cert.determinant))
        }
    })?;

    let explicit = runner.stage("explicit_inverse", || {
        invert_theta1_explicit(spec.s, spec.ell, &spec.galois).map_err(|e| e.to_string())
    })?;
    report.theta1_inverse = Some(explicit.clone());

    let cross = runner.stage("inverse_cross_check", || {
        let lattice_inverse = theta1.invert_on_torus(&cert).map_err(|e| e.to_string())?;
        let agree = projectively_equal(&explicit, &lattice_inverse, ProjectiveMode::Torus);
        if !agree.equal() {
            return Err(format!("inverses differ: {:?}", agree.mismatch));
        }
        let id = SemilinearMonomialMap::identity(spec.s, &spec.galois);
        let round = explicit.compose(&theta1).map_err(|e| e.to_string())?;
        if !projectively_equal(&round, &id, ProjectiveMode::Torus).equal() {
            return Err("inverse o Theta_1 is not the identity".into());
        }
        Ok(true)
    });
    report.inverse_cross_check = Some(cross.is_ok());
    cross.map(|_| ())
}
