use std::fmt::Write as _;

use brauer_core::crossed_product::AssociativityScope;
use brauer_core::roquette::{run_request, CertificateDoc, SpecDoc};
use brauer_core::scalar::parse_rational;
use brauer_core::{
    Cocycle2, CrossedProduct, CyclotomicField, Galois, GaloisAutomorphism, Scalar, SymbolicScalar,
    SymbolicShift,
};
use num_integer::Integer;
use rayon::prelude::*;

use crate::table::{self, LoadedTable};
use crate::{
    Backend, Cli, Command, CrossedArgs, FieldArgs, RoquetteArgs, SweepArgs, VerifyCocycleArgs,
};

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(stdout: String, pass: bool) -> Self {
        Self {
            code: if pass { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::VerifyCocycle(args) => verify_cocycle(&args),
        Command::Roquette(args) => roquette(&args),
        Command::Sweep(args) => sweep(&args),
        Command::Crossed(args) => crossed(&args),
    }
}

fn resolve_backend(field: &FieldArgs) -> Result<Backend, String> {
    match (field.backend, field.conductor) {
        (Some(Backend::Symbolic), Some(_)) => Err("--conductor needs --backend cyclotomic".into()),
        (Some(Backend::Symbolic), None) if field.generator.is_some() => {
            Err("--generator needs --backend cyclotomic".into())
        }
        (Some(Backend::Cyclotomic), None) => Err("--backend cyclotomic needs --conductor".into()),
        (Some(b), _) => Ok(b),
        (None, Some(_)) => Ok(Backend::Cyclotomic),
        (None, None) if field.generator.is_some() => Err("--generator needs --conductor".into()),
        (None, None) => Ok(Backend::Symbolic),
    }
}

fn sigma_for(n: u64, generator: Option<i64>) -> Result<GaloisAutomorphism, String> {
    let field = CyclotomicField::new(n).map_err(|e| e.to_string())?;
    match generator {
        Some(g) => GaloisAutomorphism::new(&field, g).map_err(|e| e.to_string()),
        None => field
            .canonical_generator()
            .ok_or_else(|| format!("(Z/{n})^x is not cyclic")),
    }
}

fn cocycle_report<S: Scalar>(alpha: &Cocycle2<S>, backend: &str) -> Outcome {
    let check = alpha.check();
    let mut out = String::new();
    writeln!(out, "backend: {backend}").unwrap();
    writeln!(out, "s: {}", alpha.order()).unwrap();
    writeln!(out, "triples checked: {}", check.triples_checked).unwrap();
    match check.witness {
        None => writeln!(out, "verdict: pass").unwrap(),
        Some([a, b, c]) => {
            writeln!(out, "verdict: fail").unwrap();
            writeln!(out, "witness: (sigma^{a}, sigma^{b}, sigma^{c})").unwrap();
            writeln!(out, "violations: {}", alpha.violations().len()).unwrap();
        }
    }
    Outcome::report(out, check.holds())
}

fn verify_cocycle(args: &VerifyCocycleArgs) -> Outcome {
    if let Some(path) = &args.table {
        return match table::load(path) {
            Ok(LoadedTable::Symbolic(alpha)) => cocycle_report(&alpha, "symbolic"),
            Ok(LoadedTable::Cyclotomic(alpha)) => {
                let backend = alpha.galois().describe();
                cocycle_report(&alpha, &backend)
            }
            Err(e) => Outcome::usage(e),
        };
    }
    let s = match args.s {
        Some(s) if s > 0 => s,
        Some(_) => return Outcome::usage("--s must be at least 1"),
        None => return Outcome::usage("either --s or --table is required"),
    };
    let gamma = args.gamma.as_deref().unwrap_or("symbolic");
    let backend = match resolve_backend(&args.field) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e),
    };
    match backend {
        Backend::Symbolic => {
            if gamma != "symbolic" {
                return Outcome::usage("the symbolic backend takes --gamma symbolic");
            }
            let alpha = SymbolicShift::new(s).and_then(|shift| {
                Cocycle2::standard_cyclic(s, &SymbolicScalar::rational("gamma"), &shift)
            });
            match alpha {
                Ok(alpha) => cocycle_report(&alpha, "symbolic"),
                Err(e) => Outcome::usage(e),
            }
        }
        Backend::Cyclotomic => {
            let built = (|| {
                let n = args.field.conductor.expect("resolved backend has a conductor");
                let sigma = sigma_for(n, args.field.generator)?;
                let q = parse_rational(gamma).map_err(|e| e.to_string())?;
                let g = sigma.field().from_rational(q);
                Cocycle2::standard_cyclic(s, &g, &sigma).map_err(|e| e.to_string())
            })();
            match built {
                Ok(alpha) => {
                    let backend = alpha.galois().describe();
                    cocycle_report(&alpha, &backend)
                }
                Err(e) => Outcome::usage(e),
            }
        }
    }
}

fn spec_from(s: usize, ell: usize, gamma: Option<&str>, field: &FieldArgs) -> Result<SpecDoc, String> {
    match resolve_backend(field)? {
        Backend::Symbolic => {
            if gamma.is_some_and(|g| g != "symbolic") {
                return Err("the symbolic backend takes --gamma symbolic".into());
            }
            Ok(SpecDoc::symbolic(s, ell))
        }
        Backend::Cyclotomic => {
            let gamma = gamma.ok_or("the cyclotomic backend needs a rational --gamma")?;
            Ok(SpecDoc::cyclotomic(
                s,
                ell,
                gamma,
                field.conductor.expect("resolved backend has a conductor"),
                field.generator,
            ))
        }
    }
}

fn render_certificate(doc: &CertificateDoc) -> String {
    let mut out = String::new();
    let spec = &doc.spec;
    write!(out, "s: {}  ell: {}  backend: {}", spec.s, spec.ell, spec.backend).unwrap();
    if let Some(n) = spec.conductor {
        write!(out, " (n = {n}, g = {})", spec.generator.unwrap_or_default()).unwrap();
    }
    writeln!(out, "  gamma: {}", spec.gamma).unwrap();
    for stage in &doc.stages {
        writeln!(out, "stage {:<20} {}", stage.name, if stage.pass { "pass" } else { "FAIL" }).unwrap();
    }
    if let Some(beta) = &doc.beta {
        writeln!(out, "beta exponents: {beta:?}").unwrap();
    }
    if let (Some(k), Some(m), Some(r)) = (&doc.k, doc.m, &doc.residual) {
        writeln!(out, "k: {k}  m: {m}  residual: {r}").unwrap();
    }
    if let Some(d) = &doc.diagram {
        match (&d.lambda, d.verdict) {
            (Some(l), true) => writeln!(out, "diagram: pass (lambda = {l})").unwrap(),
            _ => writeln!(
                out,
                "diagram: fail (first mismatch at coordinate {})",
                d.first_mismatch.unwrap_or_default()
            )
            .unwrap(),
        }
    }
    if let Some(l) = &doc.lattice {
        let verdict = if l.verdict { "birational" } else { "not birational" };
        writeln!(out, "lattice det: {} ({verdict})", l.det).unwrap();
    }
    if let Some(c) = doc.inverse_cross_check {
        writeln!(out, "inverse cross-check: {}", if c { "pass" } else { "fail" }).unwrap();
    }
    if let Some(f) = &doc.failure {
        writeln!(out, "failure: stage {}: {}", f.stage, f.witness).unwrap();
    }
    writeln!(out, "status: {}", doc.status).unwrap();
    out
}

fn roquette(args: &RoquetteArgs) -> Outcome {
    let spec = match spec_from(args.s, args.ell, args.gamma.as_deref(), &args.field) {
        Ok(spec) => spec,
        Err(e) => return Outcome::usage(e),
    };
    let doc = match run_request(&spec) {
        Ok(doc) => doc,
        Err(e) => return Outcome::usage(e),
    };
    let mut out = render_certificate(&doc);
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, doc.to_json()) {
            return Outcome::usage(format!("{}: {e}", path.display()));
        }
        writeln!(out, "certificate: {}", path.display()).unwrap();
    }
    Outcome::report(out, doc.passed())
}

struct SweepRow {
    s: usize,
    ell: usize,
    beta: String,
    verdict: String,
    expected: bool,
}

fn sweep_row(s: usize, ell: usize) -> SweepRow {
    let coprime = s.gcd(&ell) == 1;
    let doc = run_request(&SpecDoc::symbolic(s, ell)).expect("sweep pairs are in range");
    let beta = doc
        .beta
        .as_ref()
        .map(|b| format!("{b:?}"))
        .unwrap_or_else(|| "-".into());
    let failed_stage = doc.failure.as_ref().map(|f| f.stage.as_str());
    let (verdict, expected) = match (coprime, failed_stage) {
        (true, None) => ("pass".to_string(), true),
        (true, Some(stage)) => (format!("FAIL at {stage}"), false),
        (false, Some("lattice")) => {
            let det = doc.lattice.as_ref().map(|l| l.det.as_str()).unwrap_or("?");
            (format!("not-birational (det {det})"), true)
        }
        (false, Some(stage)) => (format!("UNEXPECTED failure at {stage}"), false),
        (false, None) => ("UNEXPECTED pass".to_string(), false),
    };
    SweepRow {
        s,
        ell,
        beta,
        verdict,
        expected,
    }
}

fn sweep(args: &SweepArgs) -> Outcome {
    if args.max_s < 2 {
        return Outcome::usage("--max-s must be at least 2");
    }
    let pairs: Vec<(usize, usize)> = (2..=args.max_s)
        .flat_map(|s| (1..s).map(move |ell| (s, ell)))
        .filter(|&(s, ell)| args.include_noncoprime || s.gcd(&ell) == 1)
        .collect();
    let rows: Vec<SweepRow> = pairs.par_iter().map(|&(s, ell)| sweep_row(s, ell)).collect();
    let width = rows.iter().map(|r| r.beta.len()).max().unwrap_or(0).max(4);
    let mut out = String::new();
    writeln!(out, "{:>3} {:>3}  {:<width$}  verdict", "s", "l", "beta").unwrap();
    for r in &rows {
        writeln!(out, "{:>3} {:>3}  {:<width$}  {}", r.s, r.ell, r.beta, r.verdict).unwrap();
    }
    let ok = rows.iter().filter(|r| r.expected).count();
    let pass = ok == rows.len();
    writeln!(out, "rows: {}  as expected: {ok}", rows.len()).unwrap();
    writeln!(out, "verdict: {}", if pass { "pass" } else { "fail" }).unwrap();
    Outcome::report(out, pass)
}

fn crossed(args: &CrossedArgs) -> Outcome {
    let built = (|| {
        let sigma = sigma_for(args.conductor, args.generator)?;
        if !sigma.generates() {
            return Err(format!(
                "zeta -> zeta^{} does not generate Gal(Q(zeta_{})/Q)",
                sigma.exponent(),
                args.conductor
            ));
        }
        let s = sigma.order();
        if args.s.is_some_and(|given| given != s) {
            return Err(format!("--s must equal phi({}) = {s}", args.conductor));
        }
        let q = parse_rational(&args.gamma).map_err(|e| e.to_string())?;
        let gamma = sigma.field().from_rational(q);
        let alpha = Cocycle2::standard_cyclic(s, &gamma, &sigma).map_err(|e| e.to_string())?;
        CrossedProduct::new(alpha).map_err(|e| e.to_string())
    })();
    let algebra = match built {
        Ok(a) => a,
        Err(e) => return Outcome::usage(e),
    };
    let s = algebra.order();
    let degree = algebra.field().degree();
    let scope = if s * degree <= 16 {
        AssociativityScope::Basis
    } else {
        AssociativityScope::Random { count: 256, seed: 0 }
    };
    let assoc = algebra.associativity_check(scope);
    let centre = algebra.center_dimension();
    let split = match algebra.splitting_check() {
        Ok(report) => report,
        Err(e) => return Outcome::usage(e),
    };
    let mut out = String::new();
    writeln!(
        out,
        "K: Q(zeta_{})  sigma: zeta -> zeta^{}  gamma: {}",
        args.conductor,
        algebra.sigma().exponent(),
        args.gamma
    )
    .unwrap();
    writeln!(out, "s: {s}  dim over F: {}  dim over Q: {}", s * s, algebra.rational_dimension()).unwrap();
    let scope_text = match scope {
        AssociativityScope::Basis => "basis".to_string(),
        AssociativityScope::Random { count, seed } => format!("{count} random, seed {seed}"),
    };
    match assoc.witness {
        None => writeln!(out, "associativity: pass ({} triples, {scope_text})", assoc.triples_checked).unwrap(),
        Some(w) => writeln!(out, "associativity: fail at {w:?}").unwrap(),
    }
    writeln!(out, "center dimension: {centre}").unwrap();
    writeln!(
        out,
        "split rank: {} of {} ({})",
        split.rank,
        split.expected_rank,
        if split.multiplicative { "multiplicative" } else { "not multiplicative" }
    )
    .unwrap();
    let pass = assoc.holds() && centre == 1 && split.holds();
    writeln!(out, "verdict: {}", if pass { "pass" } else { "fail" }).unwrap();
    Outcome::report(out, pass)
}
