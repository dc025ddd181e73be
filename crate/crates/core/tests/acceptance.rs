//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use brauer_core::cohomology::twist_by_coboundary;
use brauer_core::crossed_product::AssociativityScope;
use brauer_core::monomial::{
    descent_cocycle_check, galois_generator_map, points_projectively_equal, projectively_equal,
    ProjectiveMode,
};
use brauer_core::roquette::{
    build_theta, build_theta1, invert_theta1_explicit, run_pipeline, solve_beta, ThetaSpec,
};
use brauer_core::{
    Cocycle2, CrossedProduct, CyclotomicElement, CyclotomicField, Rational, Scalar, Symbol,
    SymbolicScalar, SymbolicShift,
};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gamma_pow(e: i64) -> SymbolicScalar {
    SymbolicScalar::symbol_pow(Symbol::rational("gamma"), e)
}

fn coprime_pairs(max_s: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=max_s).flat_map(|s| (1..s).filter(move |l| s.gcd(l) == 1).map(move |l| (s, l)))
}

fn ac1_cocycle_suite() -> Outcome {
    let start = Instant::now();
    let mut triples = 0;
    for s in 2..=12 {
        let shift = SymbolicShift::new(s).unwrap();
        let alpha = Cocycle2::standard_cyclic(s, &gamma_pow(1), &shift).unwrap();
        let check = alpha.check();
        ensure(check.holds(), || format!("s = {s}: witness {:?}", check.witness))?;
        ensure(check.triples_checked == s * s * s, || format!("s = {s}: not exhaustive"))?;
        triples += check.triples_checked;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("s = 2..12, {triples} triples, {elapsed:.2?}"))
}

struct StoredTable {
    name: &'static str,
    alpha: Cocycle2<CyclotomicElement>,
    valid: bool,
}

fn stored_tables() -> Vec<StoredTable> {
    let mut out = Vec::new();
    for n in [3u64, 4, 5, 6] {
        let k = CyclotomicField::new(n).unwrap();
        let sigma = k.canonical_generator().unwrap();
        let s = k.degree();
        let q = |num: i64, den: i64| k.from_rational(Rational::new(num.into(), den.into()));
        let std = |g: CyclotomicElement| Cocycle2::standard_cyclic(s, &g, &sigma).unwrap();
        let z = k.zeta();
        let mut add = |name: &'static str, alpha: Cocycle2<CyclotomicElement>, valid: bool| {
            out.push(StoredTable { name, alpha, valid })
        };
        let twist: Vec<CyclotomicElement> = (0..s)
            .map(|i| &k.from_int(i as i64 + 1) + &k.zeta_pow(i as i64))
            .collect();
        match n {
            3 => {
                add("n3 standard 2", std(q(2, 1)), true);
                add("n3 standard -3", std(q(-3, 1)), true);
                add("n3 coboundary twist", twist_by_coboundary(&std(q(2, 1)), &twist).unwrap(), true);
                add("n3 alpha(1,0) = gamma", std(q(2, 1)).with_entry(1, 0, q(2, 1)).unwrap(), false);
                add("n3 alpha(1,1) = zeta", std(q(2, 1)).with_entry(1, 1, z.clone()).unwrap(), false);
            }
            4 => {
                add("n4 standard -1", std(q(-1, 1)), true);
                add("n4 standard 3", std(q(3, 1)), true);
                add("n4 coboundary twist", twist_by_coboundary(&std(q(-1, 1)), &twist).unwrap(), true);
                add("n4 trivial", Cocycle2::trivial(s, &sigma).unwrap(), true);
                add("n4 alpha(0,1) = 2", std(q(-1, 1)).with_entry(0, 1, q(2, 1)).unwrap(), false);
            }
            5 => {
                add("n5 standard 2", std(q(2, 1)), true);
                add("n5 standard -1/2", std(q(-1, 2)), true);
                add("n5 coboundary twist", twist_by_coboundary(&std(q(2, 1)), &twist).unwrap(), true);
                let corrupt = &q(2, 1) * &z;
                add("n5 alpha(2,3) = 2 zeta", std(q(2, 1)).with_entry(2, 3, corrupt).unwrap(), false);
                add("n5 alpha(3,3) = 1", std(q(2, 1)).with_entry(3, 3, k.one()).unwrap(), false);
            }
            _ => {
                add("n6 standard 5", std(q(5, 1)), true);
                add("n6 standard -1", std(q(-1, 1)), true);
                add("n6 coboundary twist", twist_by_coboundary(&std(q(5, 1)), &twist).unwrap(), true);
                add("n6 alpha(1,1) = zeta", std(q(5, 1)).with_entry(1, 1, z.clone()).unwrap(), false);
                add("n6 alpha(0,0) = 2", std(q(5, 1)).with_entry(0, 0, q(2, 1)).unwrap(), false);
            }
        }
    }
    out
}

fn ac2_associativity_matches_cocycle() -> Outcome {
    let tables = stored_tables();
    ensure(tables.len() == 20, || format!("{} tables", tables.len()))?;
    let mut corrupted = 0;
    for t in &tables {
        let check = t.alpha.check();
        ensure(check.holds() == t.valid, || format!("{}: cocycle verdict {}", t.name, check.holds()))?;
        let algebra = CrossedProduct::new(t.alpha.clone()).map_err(|e| format!("{}: {e}", t.name))?;
        let assoc = algebra.associativity_check(AssociativityScope::Basis);
        ensure(assoc.holds() == check.holds(), || {
            format!("{}: associativity {} vs cocycle {}", t.name, assoc.holds(), check.holds())
        })?;
        let witness = assoc.witness.and_then(|w| w.group_triple());
        ensure(witness == check.witness, || {
            format!("{}: witness {witness:?} vs {:?}", t.name, check.witness)
        })?;
        corrupted += usize::from(!t.valid);
    }
    Ok(format!("20 tables ({corrupted} corrupted), verdicts and witnesses agree"))
}

fn ac3_quaternion_instance() -> Outcome {
    let k = CyclotomicField::new(4).unwrap();
    let sigma = k.canonical_generator().unwrap();
    let alpha = Cocycle2::standard_cyclic(2, &k.from_int(-1), &sigma).unwrap();
    let h = CrossedProduct::new(alpha).unwrap();
    let u = h.u_sigma();
    let zeta = h.scalar(k.zeta());
    let uu = h.multiply(&u, &u).unwrap();
    ensure(uu == h.scalar(k.from_int(-1)), || format!("u^2 = {uu:?}"))?;
    let uz = h.multiply(&u, &zeta).unwrap();
    let zu = h.multiply(&zeta, &u).unwrap();
    ensure(uz == zu.neg(), || "u zeta != -zeta u".into())?;
    let zz = h.multiply(&zeta, &zeta).unwrap();
    ensure(zz == h.scalar(k.from_int(-1)), || "zeta^2 != -1".into())?;
    let centre = h.center_dimension();
    ensure(centre == 1, || format!("center dimension {centre}"))?;
    let split = h.splitting_check().unwrap();
    ensure(split.rank == 4 && split.holds(), || format!("{split:?}"))?;
    Ok("u^2 = -1, u zeta = -zeta u, center 1, split rank 4".into())
}

fn ac4_descent_order() -> Outcome {
    let mut pairs = 0;
    for (s, l) in coprime_pairs(12) {
        let shift = SymbolicShift::new(s).unwrap();
        let alpha = Cocycle2::standard_cyclic(s, &gamma_pow(1), &shift).unwrap();
        let phi = descent_cocycle_check(&galois_generator_map(&alpha).unwrap()).unwrap();
        ensure(phi.lambda == Some(gamma_pow(1)), || format!("s = {s}: phi scalar {:?}", phi.lambda))?;
        let psi_map = galois_generator_map(&alpha.power(l as i64).unwrap()).unwrap();
        let psi = descent_cocycle_check(&psi_map).unwrap();
        ensure(psi.lambda == Some(gamma_pow(l as i64)), || {
            format!("s = {s}, l = {l}: psi scalar {:?}", psi.lambda)
        })?;
        pairs += 1;
    }
    Ok(format!("{pairs} coprime pairs with s <= 12"))
}

fn ac5_theorem_sweep() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (s, l) in coprime_pairs(20) {
        let report = run_pipeline(&ThetaSpec::symbolic(s, l).unwrap());
        let tag = format!("s = {s}, l = {l}");
        ensure(report.passed(), || format!("{tag}: {:?}", report.failure))?;
        let beta = report.beta.as_ref().unwrap();
        ensure(beta.beta[0].is_one(), || format!("{tag}: beta_0 = {}", beta.beta[0]))?;
        ensure(beta.k.is_one(), || format!("{tag}: k = {}", beta.k))?;
        ensure(beta.m == l - 1, || format!("{tag}: m = {}", beta.m))?;
        ensure(beta.residual.is_one(), || format!("{tag}: residual {}", beta.residual))?;
        let diagram = report.diagram.as_ref().unwrap();
        ensure(diagram.holds() && diagram.lambda().is_some(), || format!("{tag}: diagram"))?;
        ensure(diagram.comparison.ratios.iter().all(|r| Some(r) == diagram.lambda()), || {
            format!("{tag}: ratios not a single scalar")
        })?;
        if (s, l) == (3, 2) {
            let anchor = vec![gamma_pow(0), gamma_pow(0), gamma_pow(1)];
            ensure(beta.beta == anchor, || format!("anchor beta {:?}", beta.beta))?;
        }
        pairs += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{pairs} coprime pairs with s <= 20, anchor (1, 1, gamma), {elapsed:.2?}"))
}

/// A Laurent monomial in named symbols.
type Mono = BTreeMap<String, i64>;

fn mono_mul(a: &mut Mono, name: &str, e: i64) {
    let slot = a.entry(name.to_string()).or_insert(0);
    *slot += e;
    if *slot == 0 {
        a.remove(name);
    }
}

/// `gamma^{e_i}` with `e_i` solving `g_i + e_i - e_{i+1} = kappa`, `e_0 = 0`,
/// where `gamma^{g_i}` is the `gamma`-part of the `i`-th coordinate ratio of
/// `Theta o phi_1` over `psi_1 o Theta` with unknown `beta_i = b_i`.
fn oracle_beta(s: usize, l: usize) -> Result<(Vec<i64>, i64), String> {
    let alpha1 = |j: usize| if 1 + j % s < s { 0 } else { 1 };
    let mut g = Vec::with_capacity(s);
    for i in 0..s {
        // Theta(phi_1(p))_i = b_i prod_t phi_1(p)_{i+t}, phi_1(p)_j = alpha_{1,j} sigma(p_{j+1}).
        let mut left = Mono::new();
        mono_mul(&mut left, &format!("b{i}"), 1);
        for t in 0..l {
            let j = (i + t) % s;
            mono_mul(&mut left, "gamma", alpha1(j));
            mono_mul(&mut left, &format!("sp{}", (j + 1) % s), 1);
        }
        // psi_1(Theta(p))_i = alpha_{1,i}^l sigma(Theta(p)_{i+1}), beta in F.
        let mut right = Mono::new();
        mono_mul(&mut right, "gamma", l as i64 * alpha1(i));
        mono_mul(&mut right, &format!("b{}", (i + 1) % s), 1);
        for t in 0..l {
            mono_mul(&mut right, &format!("sp{}", (i + 1 + t) % s), 1);
        }
        let mut ratio = left.clone();
        for (name, e) in &right {
            mono_mul(&mut ratio, name, -e);
        }
        ensure(ratio.keys().all(|k| !k.starts_with("sp")), || {
            format!("point symbols do not cancel at coordinate {i}")
        })?;
        g.push(ratio.get("gamma").copied().unwrap_or(0));
    }
    // Unknowns x = (e_1, ..., e_{s-1}, kappa).
    let zero = Rational::zero();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(s);
    for i in 0..s {
        let mut row = vec![zero.clone(); s + 1];
        if i > 0 {
            row[i - 1] += Rational::one();
        }
        let next = (i + 1) % s;
        if next > 0 {
            row[next - 1] -= Rational::one();
        }
        row[s - 1] -= Rational::one();
        row[s] = Rational::from_integer((-g[i]).into());
        rows.push(row);
    }
    let x = gauss(rows).ok_or("oracle system is singular")?;
    let to_int = |q: &Rational| {
        if q.is_integer() {
            Ok(q.to_integer().try_into().unwrap())
        } else {
            Err(format!("non-integral exponent {q}"))
        }
    };
    let mut e = vec![0i64];
    for q in &x[..s - 1] {
        e.push(to_int(q)?);
    }
    Ok((e, to_int(&x[s - 1])?))
}

fn gauss(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in &mut m[col] {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn ac6_oracle_agreement() -> Outcome {
    let mut pairs = 0;
    for (s, l) in coprime_pairs(12) {
        let (exps, kappa) = oracle_beta(s, l).map_err(|e| format!("s = {s}, l = {l}: {e}"))?;
        ensure(kappa == 0, || format!("s = {s}, l = {l}: oracle k = gamma^{kappa}"))?;
        let beta = solve_beta(&ThetaSpec::symbolic(s, l).unwrap()).unwrap();
        let oracle: Vec<SymbolicScalar> = exps.iter().map(|&e| gamma_pow(e)).collect();
        ensure(beta.beta == oracle, || format!("s = {s}, l = {l}: chain {:?} vs oracle {exps:?}", beta.beta))?;
        ensure(beta.k.is_one(), || format!("s = {s}, l = {l}: k"))?;
        pairs += 1;
    }
    Ok(format!("{pairs} coprime pairs with s <= 12"))
}

fn ac7_birationality() -> Outcome {
    let mut checked = 0;
    let mut inverses = 0;
    for s in 2..=20usize {
        let shift = SymbolicShift::new(s).unwrap();
        for l in 1..s {
            let theta1 = build_theta1::<SymbolicScalar>(s, l, &shift).unwrap();
            let cert = theta1.lattice_certificate();
            let unimodular = cert.determinant == 1.into() || cert.determinant == (-1).into();
            let coprime = s.gcd(&l) == 1;
            ensure(unimodular == coprime, || format!("s = {s}, l = {l}: det {}", cert.determinant))?;
            checked += 1;
            if coprime {
                let explicit = invert_theta1_explicit::<SymbolicScalar>(s, l, &shift).unwrap();
                let lattice = theta1.invert_on_torus(&cert).unwrap();
                ensure(projectively_equal(&explicit, &lattice, ProjectiveMode::Torus).equal(), || {
                    format!("s = {s}, l = {l}: inverses differ")
                })?;
                inverses += 1;
            }
        }
    }
    Ok(format!("{checked} pairs, {inverses} inverse cross-checks"))
}

fn random_point(k: &Arc<CyclotomicField>, s: usize, rng: &mut ChaCha8Rng) -> Vec<CyclotomicElement> {
    (0..s)
        .map(|_| loop {
            let x = k.from_coeffs(
                (0..k.degree())
                    .map(|_| Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=4).into()))
                    .collect(),
            );
            if !x.is_zero() {
                break x;
            }
        })
        .collect()
}

fn ac8_cyclotomic_spot_check() -> Outcome {
    let k = CyclotomicField::new(5).unwrap();
    let sigma = k.canonical_generator().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_905);
    let mut points = 0;
    for l in [1usize, 3] {
        let spec = ThetaSpec::new(4, l, k.from_int(2), sigma.clone()).unwrap();
        let alpha = spec.cocycle().unwrap();
        let phi = galois_generator_map(&alpha).unwrap();
        let psi = galois_generator_map(&alpha.power(l as i64).unwrap()).unwrap();
        let beta = solve_beta(&spec).unwrap();
        let theta = build_theta(&spec, &beta).unwrap();
        for trial in 0..50 {
            let p = random_point(&k, 4, &mut rng);
            let left = theta.evaluate(&phi.evaluate(&p).unwrap()).unwrap();
            let right = psi.evaluate(&theta.evaluate(&p).unwrap()).unwrap();
            let lambda = points_projectively_equal(&right, &left);
            ensure(lambda.as_ref().is_some_and(Scalar::is_one), || {
                format!("l = {l}, point {trial}: ratio {lambda:?}")
            })?;
            points += 1;
        }
    }
    Ok(format!("s = 4, K = Q(zeta_5), gamma = 2, l in {{1, 3}}, {points} points"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1 cocycle suite", ac1_cocycle_suite),
        ("AC2 associativity <=> cocycle", ac2_associativity_matches_cocycle),
        ("AC3 quaternion instance", ac3_quaternion_instance),
        ("AC4 descent order", ac4_descent_order),
        ("AC5 theorem sweep", ac5_theorem_sweep),
        ("AC6 independent oracle", ac6_oracle_agreement),
        ("AC7 birationality criterion", ac7_birationality),
        ("AC8 cyclotomic spot check", ac8_cyclotomic_spot_check),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
