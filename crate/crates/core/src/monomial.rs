//! Semilinear monomial maps on projective space `P^{s-1}_K`.
//!
//! A map is given by an integer exponent matrix `E` with constant row sums,
//! nonzero coefficients `c_i` and a twist `t`. It sends a point `p` to
//!
//! ```text
//! T(p)_i = c_i * prod_j sigma^t(p_j)^{E_ij}
//! ```
//!
//! This covers the Galois descent data `phi_i`, `psi_i` (permutation matrices,
//! twist `i`) as well as the birational map `Theta` and its factors (twist 0).
//! Birationality on the torus is decided by the exponent lattice: in the chart
//! `y_j = x_j / x_0` the map acts on exponents by an `(s-1) x (s-1)` integer
//! matrix, and the map is invertible there iff that matrix is unimodular.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cohomology::Cocycle2;
use crate::error::{AlgebraError, Result};
use crate::linalg;
use crate::scalar::{Galois, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct SemilinearMonomialMap<S: Scalar> {
    exponents: Vec<Vec<i64>>,
    coefficients: Vec<S>,
    twist: usize,
    galois: S::Galois,
}

impl<S: Scalar> SemilinearMonomialMap<S> {
    pub fn new(
        exponents: Vec<Vec<i64>>,
        coefficients: Vec<S>,
        twist: i64,
        galois: S::Galois,
    ) -> Result<Self> {
        let dim = exponents.len();
        if dim == 0 {
            return Err(AlgebraError::InvalidArgument(
                "projective maps need at least one coordinate".into(),
            ));
        }
        if let Some(row) = exponents.iter().find(|r| r.len() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        if coefficients.len() != dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: coefficients.len(),
            });
        }
        if coefficients.iter().any(Scalar::is_zero) {
            return Err(AlgebraError::InvalidArgument(
                "coefficients must be nonzero".into(),
            ));
        }
        let degree: i64 = exponents[0].iter().sum();
        if exponents.iter().any(|r| r.iter().sum::<i64>() != degree) {
            return Err(AlgebraError::InvalidArgument(
                "exponent rows must share one degree".into(),
            ));
        }
        if degree < 1 {
            return Err(AlgebraError::InvalidArgument(format!(
                "degree must be at least 1, found {degree}"
            )));
        }
        let twist = twist.rem_euclid(galois.order() as i64) as usize;
        Ok(Self {
            exponents,
            coefficients,
            twist,
            galois,
        })
    }

    pub fn identity(dim: usize, galois: &S::Galois) -> Self {
        Self::diagonal(vec![S::one(galois); dim], galois).expect("ones are nonzero")
    }

    /// `[a_0, ..., a_{s-1}] -> [c_0 a_0, ..., c_{s-1} a_{s-1}]`.
    pub fn diagonal(coefficients: Vec<S>, galois: &S::Galois) -> Result<Self> {
        let dim = coefficients.len();
        let exponents = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(exponents, coefficients, 0, galois.clone())
    }

    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[Vec<i64>] {
        &self.exponents
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coefficients
    }

    pub fn twist(&self) -> usize {
        self.twist
    }

    pub fn galois(&self) -> &S::Galois {
        &self.galois
    }

    pub fn degree(&self) -> i64 {
        self.exponents[0].iter().sum()
    }

    /// `T(p)`. A zero coordinate raised to a negative power is reported as
    /// [`AlgebraError::OutsideTorus`].
    pub fn evaluate(&self, point: &[S]) -> Result<Vec<S>> {
        if point.len() != self.dimension() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dimension(),
                found: point.len(),
            });
        }
        let twisted: Vec<S> = point
            .iter()
            .map(|p| p.conjugate(&self.galois, self.twist as i64))
            .collect();
        self.exponents
            .iter()
            .zip(&self.coefficients)
            .map(|(row, c)| {
                let mut acc = c.clone();
                for (j, (&e, p)) in row.iter().zip(&twisted).enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let factor = p.pow(e).map_err(|err| match err {
                        AlgebraError::DivisionByZero => AlgebraError::OutsideTorus(j),
                        other => other,
                    })?;
                    acc = acc.mul(&factor);
                }
                Ok(acc)
            })
            .collect()
    }

    /// `self o other`, i.e. `p -> self(other(p))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let n = self.dimension();
        if other.dimension() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: other.dimension(),
            });
        }
        let exponents: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| (0..n).map(|j| self.exponents[i][j] * other.exponents[j][k]).sum())
                    .collect()
            })
            .collect();
        let inner: Vec<S> = other
            .coefficients
            .iter()
            .map(|c| c.conjugate(&self.galois, self.twist as i64))
            .collect();
        let mut coefficients = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.coefficients[i].clone();
            for (j, c) in inner.iter().enumerate() {
                let e = self.exponents[i][j];
                if e != 0 {
                    acc = acc.mul(&c.pow(e)?);
                }
            }
            coefficients.push(acc);
        }
        Self::new(
            exponents,
            coefficients,
            (self.twist + other.twist) as i64,
            self.galois.clone(),
        )
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn iterate(&self, k: usize) -> Result<Self> {
        let mut acc = Self::identity(self.dimension(), &self.galois);
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// The induced map on the exponent lattice of the chart `x_0 != 0`.
    pub fn lattice_certificate(&self) -> LatticeCertificate {
        let n = self.dimension();
        let reduced: Vec<Vec<i64>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| self.exponents[i][j] - self.exponents[0][j])
                    .collect()
            })
            .collect();
        let as_rational: Vec<Vec<Rational>> = reduced
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let det = linalg::determinant(&as_rational).to_integer();
        let birational = det.abs().is_one();
        let inverse = if birational {
            linalg::inverse(&as_rational, &Rational::one()).map(|inv| {
                inv.iter()
                    .map(|r| {
                        r.iter()
                            .map(|x| {
                                debug_assert!(x.is_integer());
                                x.to_integer().to_i64().expect("unimodular inverse fits i64")
                            })
                            .collect()
                    })
                    .collect()
            })
        } else {
            None
        };
        LatticeCertificate {
            reduced,
            determinant: det,
            birational,
            inverse,
        }
    }

    /// The inverse on the torus, built from the certificate's integer inverse.
    ///
    /// In the chart, `y'_i = lambda_i prod_j sigma^t(y_j)^{M_ij}` with
    /// `lambda_i = c_i / c_0`; solving gives
    /// `y_k = sigma^{-t}(prod_i lambda_i^{-N_ki}) prod_i sigma^{-t}(y'_i)^{N_ki}`
    /// where `N = M^{-1}`.
    pub fn invert_on_torus(&self, cert: &LatticeCertificate) -> Result<Self> {
        let inverse = match (&cert.inverse, cert.birational) {
            (Some(inv), true) => inv,
            _ => {
                return Err(AlgebraError::NotBirational {
                    det: cert.determinant.to_string(),
                })
            }
        };
        let n = self.dimension();
        let c0 = &self.coefficients[0];
        let lambdas = self.coefficients[1..]
            .iter()
            .map(|c| c.div(c0))
            .collect::<Result<Vec<_>>>()?;
        let back = -(self.twist as i64);
        let mut chart_coeffs = Vec::with_capacity(n - 1);
        for row in inverse {
            let mut acc = S::one(&self.galois);
            for (lambda, &e) in lambdas.iter().zip(row) {
                if e != 0 {
                    acc = acc.mul(&lambda.pow(-e)?);
                }
            }
            chart_coeffs.push(acc.conjugate(&self.galois, back));
        }
        Self::from_chart(inverse, chart_coeffs, back, &self.galois)
    }

    /// Homogenises a chart map `y_i -> mu_i prod_j sigma^t(y_j)^{N_ij}`
    /// (`i, j >= 1`) to a degree-one map with `x_0 -> x_0`.
    pub fn from_chart(
        reduced: &[Vec<i64>],
        chart_coeffs: Vec<S>,
        twist: i64,
        galois: &S::Galois,
    ) -> Result<Self> {
        let n = reduced.len() + 1;
        let mut exponents = Vec::with_capacity(n);
        let mut head = vec![0; n];
        head[0] = 1;
        exponents.push(head);
        for row in reduced {
            let mut full = Vec::with_capacity(n);
            full.push(1 - row.iter().sum::<i64>());
            full.extend_from_slice(row);
            exponents.push(full);
        }
        let mut coefficients = vec![S::one(galois)];
        coefficients.extend(chart_coeffs);
        Self::new(exponents, coefficients, twist, galois.clone())
    }
}

/// How [`projectively_equal`] compares two maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveMode {
    /// Same exponents, coefficients proportional by one scalar.
    Strict,
    /// Additionally allows a common monomial factor: every row of
    /// `E_T - E_U` equal to one shared vector.
    Torus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Dimension,
    Twist,
    /// First row whose exponents disagree.
    Exponents(usize),
    /// First coordinate whose coefficient ratio differs from coordinate 0's.
    Coefficient(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveComparison<S: Scalar> {
    /// The common ratio `c^T_i / c^U_i` when the maps agree.
    pub lambda: Option<S>,
    /// The shared monomial factor (torus mode; all zeros in strict mode).
    pub shift: Option<Vec<i64>>,
    /// Every coefficient ratio, for diagnostics.
    pub ratios: Vec<S>,
    pub mismatch: Option<Mismatch>,
}

impl<S: Scalar> ProjectiveComparison<S> {
    pub fn equal(&self) -> bool {
        self.mismatch.is_none()
    }

    fn fail(mismatch: Mismatch, ratios: Vec<S>) -> Self {
        Self {
            lambda: None,
            shift: None,
            ratios,
            mismatch: Some(mismatch),
        }
    }
}

pub fn projectively_equal<S: Scalar>(
    t: &SemilinearMonomialMap<S>,
    u: &SemilinearMonomialMap<S>,
    mode: ProjectiveMode,
) -> ProjectiveComparison<S> {
    let n = t.dimension();
    if u.dimension() != n {
        return ProjectiveComparison::fail(Mismatch::Dimension, Vec::new());
    }
    if t.twist != u.twist {
        return ProjectiveComparison::fail(Mismatch::Twist, Vec::new());
    }
    let diffs: Vec<Vec<i64>> = t
        .exponents
        .iter()
        .zip(&u.exponents)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();
    let shift = diffs[0].clone();
    let shared = match mode {
        ProjectiveMode::Strict => shift.iter().all(|&x| x == 0),
        ProjectiveMode::Torus => true,
    };
    let bad_row = if shared {
        diffs.iter().position(|d| *d != shift)
    } else {
        Some(0)
    };
    let ratios: Vec<S> = t
        .coefficients
        .iter()
        .zip(&u.coefficients)
        .map(|(a, b)| a.div(b).expect("coefficients are nonzero"))
        .collect();
    if let Some(row) = bad_row {
        return ProjectiveComparison::fail(Mismatch::Exponents(row), ratios);
    }
    if let Some(i) = ratios.iter().position(|r| *r != ratios[0]) {
        return ProjectiveComparison::fail(Mismatch::Coefficient(i), ratios);
    }
    ProjectiveComparison {
        lambda: Some(ratios[0].clone()),
        shift: Some(shift),
        ratios,
        mismatch: None,
    }
}

/// Returns `lambda` with `q = lambda p` when the two points agree
/// projectively (zero coordinates must match).
pub fn points_projectively_equal<S: Scalar>(p: &[S], q: &[S]) -> Option<S> {
    if p.len() != q.len() {
        return None;
    }
    let mut lambda: Option<S> = None;
    for (a, b) in p.iter().zip(q) {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (false, false) => {
                let r = b.div(a).ok()?;
                match &lambda {
                    None => lambda = Some(r),
                    Some(l) if *l == r => {}
                    Some(_) => return None,
                }
            }
            _ => return None,
        }
    }
    lambda
}

/// `phi_i`: the point map `p_j -> alpha(sigma^i, sigma^j) sigma^i(p_{j+i})`.
pub fn descent_map<S: Scalar>(alpha: &Cocycle2<S>, i: usize) -> Result<SemilinearMonomialMap<S>> {
    if !alpha.is_rational() {
        return Err(AlgebraError::Unsupported(
            "descent maps need a cocycle with values in the base field".into(),
        ));
    }
    let s = alpha.order();
    let exponents = (0..s)
        .map(|j| (0..s).map(|k| i64::from(k == (j + i) % s)).collect())
        .collect();
    let coefficients = (0..s).map(|j| alpha.entry(i, j).clone()).collect();
    SemilinearMonomialMap::new(exponents, coefficients, i as i64, alpha.galois().clone())
}

/// `phi_1` for `alpha` (pass `alpha^l` to get `psi_1`).
pub fn galois_generator_map<S: Scalar>(alpha: &Cocycle2<S>) -> Result<SemilinearMonomialMap<S>> {
    descent_map(alpha, 1 % alpha.order())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DescentCheck<S: Scalar> {
    /// Common scalar of the `s`-fold composite when it is projectively the
    /// identity.
    pub lambda: Option<S>,
    pub comparison: ProjectiveComparison<S>,
}

impl<S: Scalar> DescentCheck<S> {
    pub fn holds(&self) -> bool {
        self.lambda.is_some()
    }
}

/// The `s`-fold composite of the generator's descent map must be
/// projectively the identity.
pub fn descent_cocycle_check<S: Scalar>(t: &SemilinearMonomialMap<S>) -> Result<DescentCheck<S>> {
    if t.twist() != 1 % t.galois().order() {
        return Err(AlgebraError::InvalidArgument(format!(
            "descent generator must have twist 1, found {}",
            t.twist()
        )));
    }
    let power = t.iterate(t.dimension())?;
    let comparison = projectively_equal(
        &power,
        &SemilinearMonomialMap::identity(t.dimension(), t.galois()),
        ProjectiveMode::Strict,
    );
    Ok(DescentCheck {
        lambda: comparison.lambda.clone(),
        comparison,
    })
}

/// Exponent-lattice data of a monomial map in the chart `x_0 != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCertificate {
    /// Rows `row_i(E) - row_0(E)` restricted to `y_1, ..., y_{s-1}`.
    pub reduced: Vec<Vec<i64>>,
    pub determinant: BigInt,
    /// `determinant = +-1`.
    pub birational: bool,
    /// Integer inverse of `reduced`, present iff birational.
    pub inverse: Option<Vec<Vec<i64>>>,
}

impl LatticeCertificate {
    pub fn determinant_i64(&self) -> Option<i64> {
        self.determinant.to_i64()
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CyclotomicField, SymbolicScalar, SymbolicShift};
    use proptest::prelude::*;

    type Sym = SymbolicScalar;

    fn gamma() -> Sym {
        Sym::rational("gamma")
    }

    fn shift(s: usize) -> SymbolicShift {
        SymbolicShift::new(s).unwrap()
    }

    fn circulant(s: usize, l: usize) -> Vec<Vec<i64>> {
        (0..s)
            .map(|i| (0..s).map(|j| i64::from((j + s - i) % s < l)).collect())
            .collect()
    }

    fn theta1(s: usize, l: usize) -> SemilinearMonomialMap<Sym> {
        SemilinearMonomialMap::new(circulant(s, l), vec![Sym::one(); s], 0, shift(s)).unwrap()
    }

    fn generic_point(s: usize) -> Vec<Sym> {
        (0..s).map(|j| Sym::twisted(&format!("a{j}"))).collect()
    }

    fn phi(s: usize) -> SemilinearMonomialMap<Sym> {
        let alpha = Cocycle2::standard_cyclic(s, &gamma(), &shift(s)).unwrap();
        galois_generator_map(&alpha).unwrap()
    }

    #[test]
    fn phi1_for_s3() {
        let p = generic_point(3);
        let image = phi(3).evaluate(&p).unwrap();
        let sigma = shift(3);
        assert_eq!(image[0], p[1].conjugate(&sigma, 1));
        assert_eq!(image[1], p[2].conjugate(&sigma, 1));
        assert_eq!(image[2], gamma().mul(&p[0].conjugate(&sigma, 1)));
    }

    #[test]
    fn phi1_trivial_cocycle_is_a_pure_shift() {
        let alpha = Cocycle2::<Sym>::trivial(4, &shift(4)).unwrap();
        let t = galois_generator_map(&alpha).unwrap();
        assert!(t.coefficients().iter().all(Scalar::is_one));
        assert_eq!(t.twist(), 1);
        assert_eq!(t.exponents()[3], vec![1, 0, 0, 0]);
    }

    #[test]
    fn psi1_for_s3_l2() {
        let alpha = Cocycle2::standard_cyclic(3, &gamma(), &shift(3)).unwrap();
        let psi = galois_generator_map(&alpha.power(2).unwrap()).unwrap();
        let rendered: Vec<String> = psi.coefficients().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["1", "1", "gamma^2"]);
    }

    #[test]
    fn non_rational_cocycle_is_unsupported() {
        let alpha = Cocycle2::trivial(2, &shift(2))
            .unwrap()
            .with_entry(1, 1, Sym::twisted("d"))
            .unwrap();
        assert!(matches!(
            galois_generator_map(&alpha),
            Err(AlgebraError::Unsupported(_))
        ));
    }

    #[test]
    fn compose_with_identity() {
        let t = phi(3);
        let id = SemilinearMonomialMap::identity(3, &shift(3));
        assert_eq!(t.compose(&id).unwrap(), t);
        assert_eq!(id.compose(&t).unwrap(), t);
    }

    #[test]
    fn s_fold_phi_is_gamma_times_identity() {
        let cube = phi(3).iterate(3).unwrap();
        assert_eq!(cube.twist(), 0);
        assert_eq!(cube.exponents(), SemilinearMonomialMap::<Sym>::identity(3, &shift(3)).exponents());
        assert!(cube.coefficients().iter().all(|c| *c == gamma()));
    }

    #[test]
    fn phi2_matches_direct_formula() {
        let alpha = Cocycle2::standard_cyclic(3, &gamma(), &shift(3)).unwrap();
        let direct = descent_map(&alpha, 2).unwrap();
        // alpha_{2,j} = (1, gamma, gamma), shift by two.
        let rendered: Vec<String> = direct.coefficients().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["1", "gamma", "gamma"]);
        assert_eq!(phi(3).compose(&phi(3)).unwrap(), direct);
    }

    #[test]
    fn projective_equality_examples() {
        let t = phi(3);
        let same = projectively_equal(&t, &t, ProjectiveMode::Strict);
        assert!(same.equal());
        assert!(same.lambda.unwrap().is_one());

        let scaled = SemilinearMonomialMap::new(
            t.exponents().to_vec(),
            t.coefficients().iter().map(|c| c.mul(&gamma())).collect(),
            1,
            shift(3),
        )
        .unwrap();
        let cmp = projectively_equal(&scaled, &t, ProjectiveMode::Strict);
        assert_eq!(cmp.lambda, Some(gamma()));

        let mut coeffs = t.coefficients().to_vec();
        coeffs[0] = coeffs[0].mul(&gamma());
        let one_off = SemilinearMonomialMap::new(t.exponents().to_vec(), coeffs, 1, shift(3)).unwrap();
        let cmp = projectively_equal(&one_off, &t, ProjectiveMode::Strict);
        assert!(!cmp.equal());
        assert_eq!(cmp.mismatch, Some(Mismatch::Coefficient(1)));
    }

    #[test]
    fn torus_mode_allows_common_monomial() {
        let s = 3;
        let id = SemilinearMonomialMap::<Sym>::identity(s, &shift(s));
        // Multiply every coordinate by x_1.
        let exps = (0..s)
            .map(|i| (0..s).map(|j| i64::from(i == j) + i64::from(j == 1)).collect())
            .collect();
        let t = SemilinearMonomialMap::new(exps, vec![Sym::one(); s], 0, shift(s)).unwrap();
        assert!(!projectively_equal(&t, &id, ProjectiveMode::Strict).equal());
        let cmp = projectively_equal(&t, &id, ProjectiveMode::Torus);
        assert!(cmp.equal());
        assert_eq!(cmp.shift, Some(vec![0, 1, 0]));
    }

    #[test]
    fn descent_examples() {
        for s in 2..=12 {
            let check = descent_cocycle_check(&phi(s)).unwrap();
            assert_eq!(check.lambda, Some(gamma()), "s = {s}");
        }
        assert!(descent_cocycle_check(&theta1(3, 2)).is_err());
    }

    #[test]
    fn descent_with_extra_scaling() {
        // Shift scaled on coordinate 0 by a base-field symbol delta: every
        // coordinate of the s-fold composite collects delta exactly once.
        for s in [2usize, 3] {
            let mut coeffs = vec![Sym::one(); s];
            coeffs[0] = Sym::rational("delta");
            let alpha = Cocycle2::<Sym>::trivial(s, &shift(s)).unwrap();
            let base = galois_generator_map(&alpha).unwrap();
            let t = SemilinearMonomialMap::new(base.exponents().to_vec(), coeffs, 1, shift(s)).unwrap();
            let check = descent_cocycle_check(&t).unwrap();
            assert_eq!(check.lambda, Some(Sym::rational("delta")), "s = {s}");
        }
        // With a K-valued delta the composite picks up different conjugates.
        let s = 3;
        let mut coeffs = vec![Sym::one(); s];
        coeffs[0] = Sym::twisted("delta");
        let alpha = Cocycle2::<Sym>::trivial(s, &shift(s)).unwrap();
        let base = galois_generator_map(&alpha).unwrap();
        let t = SemilinearMonomialMap::new(base.exponents().to_vec(), coeffs, 1, shift(s)).unwrap();
        let cube = t.iterate(3).unwrap();
        let rendered: Vec<String> = cube.coefficients().iter().map(ToString::to_string).collect();
        assert_eq!(rendered, vec!["delta@0", "delta@2", "delta@1"]);
        assert!(!descent_cocycle_check(&t).unwrap().holds());
    }

    #[test]
    fn lattice_examples() {
        let cert = theta1(3, 2).lattice_certificate();
        assert_eq!(cert.reduced, vec![vec![0, 1], vec![-1, 1]]);
        assert_eq!(cert.determinant_i64(), Some(1));
        assert!(cert.birational);

        let cert = theta1(4, 2).lattice_certificate();
        assert_eq!(cert.determinant_i64(), Some(0));
        assert!(!cert.birational);
        assert!(cert.inverse.is_none());

        let cert = SemilinearMonomialMap::<Sym>::identity(4, &shift(4)).lattice_certificate();
        assert_eq!(cert.reduced, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(cert.determinant_i64(), Some(1));
    }

    #[test]
    fn invert_identity_and_scaling() {
        let id = SemilinearMonomialMap::<Sym>::identity(3, &shift(3));
        assert_eq!(id.invert_on_torus(&id.lattice_certificate()).unwrap(), id);

        let betas: Vec<Sym> = (0..3).map(|i| Sym::rational(&format!("b{i}"))).collect();
        let scale = SemilinearMonomialMap::diagonal(betas.clone(), &shift(3)).unwrap();
        let inv = scale.invert_on_torus(&scale.lattice_certificate()).unwrap();
        let expected = SemilinearMonomialMap::diagonal(
            betas.iter().map(|b| b.inv().unwrap()).collect(),
            &shift(3),
        )
        .unwrap();
        assert!(projectively_equal(&inv, &expected, ProjectiveMode::Strict).equal());
    }

    #[test]
    fn invert_theta1_round_trip() {
        let t = theta1(3, 2);
        let inv = t.invert_on_torus(&t.lattice_certificate()).unwrap();
        let id = SemilinearMonomialMap::identity(3, &shift(3));
        assert!(projectively_equal(&inv.compose(&t).unwrap(), &id, ProjectiveMode::Torus).equal());
        assert!(projectively_equal(&t.compose(&inv).unwrap(), &id, ProjectiveMode::Torus).equal());
    }

    #[test]
    fn invert_rejects_degenerate() {
        let t = theta1(4, 2);
        assert!(matches!(
            t.invert_on_torus(&t.lattice_certificate()),
            Err(AlgebraError::NotBirational { .. })
        ));
    }

    #[test]
    fn invert_twisted_map_with_coefficients() {
        let s = 5;
        let alpha = Cocycle2::standard_cyclic(s, &gamma(), &shift(s)).unwrap();
        let t = galois_generator_map(&alpha).unwrap();
        let inv = t.invert_on_torus(&t.lattice_certificate()).unwrap();
        let id = SemilinearMonomialMap::identity(s, &shift(s));
        assert_eq!(inv.twist(), s - 1);
        assert!(projectively_equal(&inv.compose(&t).unwrap(), &id, ProjectiveMode::Torus).equal());
        assert!(projectively_equal(&t.compose(&inv).unwrap(), &id, ProjectiveMode::Torus).equal());
    }

    #[test]
    fn lattice_criterion_matches_gcd() {
        for s in 2..=20usize {
            for l in 1..s {
                let cert = theta1(s, l).lattice_certificate();
                let coprime = num_integer::Integer::gcd(&s, &l) == 1;
                assert_eq!(cert.birational, coprime, "s = {s}, l = {l}");
            }
        }
    }

    #[test]
    fn evaluation_outside_torus() {
        let k = CyclotomicField::new(5).unwrap();
        let sigma = k.canonical_generator().unwrap();
        let t = SemilinearMonomialMap::new(
            vec![vec![1, 0], vec![2, -1]],
            vec![k.one(), k.one()],
            0,
            sigma,
        );
        // sigma has order 4, the map has two coordinates: fine for evaluation.
        let t = t.unwrap();
        assert_eq!(
            t.evaluate(&[k.one(), k.zero()]),
            Err(AlgebraError::OutsideTorus(1))
        );
        assert_eq!(t.evaluate(&[k.zero(), k.one()]).unwrap()[0], k.zero());
    }

    #[test]
    fn constructor_validation() {
        let g = shift(2);
        assert!(SemilinearMonomialMap::new(vec![vec![1, 0], vec![1, 1]], vec![Sym::one(); 2], 0, g).is_err());
        assert!(SemilinearMonomialMap::new(vec![vec![1, -1], vec![0, 0]], vec![Sym::one(); 2], 0, g).is_err());
        assert!(SemilinearMonomialMap::new(vec![vec![1, 0], vec![0, 1]], vec![Sym::one(); 3], 0, g).is_err());
        let k = CyclotomicField::new(3).unwrap();
        let sigma = k.canonical_generator().unwrap();
        assert!(SemilinearMonomialMap::new(vec![vec![1, 0], vec![0, 1]], vec![k.one(), k.zero()], 0, sigma).is_err());
    }

    fn random_map(s: usize) -> impl Strategy<Value = SemilinearMonomialMap<Sym>> {
        let names = ["gamma", "b", "c"];
        (
            proptest::collection::vec(proptest::collection::vec(0i64..3, s), s),
            proptest::collection::vec((0usize..3, -2i64..=2, proptest::option::of(0u32..s as u32)), s),
            0i64..s as i64,
        )
            .prop_map(move |(mut exps, coeffs, twist)| {
                // Pad each row so all row sums agree.
                let target = exps.iter().map(|r| r.iter().sum::<i64>()).max().unwrap() + 1;
                for r in &mut exps {
                    let sum: i64 = r.iter().sum();
                    r[0] += target - sum;
                }
                let coeffs = coeffs
                    .into_iter()
                    .map(|(n, e, tag)| match tag {
                        None => Sym::symbol_pow(crate::scalar::Symbol::rational(names[n]), e),
                        Some(t) => Sym::symbol_pow(crate::scalar::Symbol::twisted(names[n], t), e),
                    })
                    .collect();
                SemilinearMonomialMap::new(exps, coeffs, twist, shift(s)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compose_is_associative(a in random_map(3), b in random_map(3), c in random_map(3)) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn compose_matches_evaluation(a in random_map(3), b in random_map(3)) {
            let p = generic_point(3);
            let direct = a.evaluate(&b.evaluate(&p).unwrap()).unwrap();
            let composed = a.compose(&b).unwrap().evaluate(&p).unwrap();
            prop_assert_eq!(direct, composed);
        }

        #[test]
        fn torus_inverse_round_trips(a in random_map(4)) {
            let cert = a.lattice_certificate();
            prop_assume!(cert.birational);
            let inv = a.invert_on_torus(&cert).unwrap();
            let id = SemilinearMonomialMap::identity(4, &shift(4));
            prop_assert!(projectively_equal(&inv.compose(&a).unwrap(), &id, ProjectiveMode::Torus).equal());
            prop_assert!(projectively_equal(&a.compose(&inv).unwrap(), &id, ProjectiveMode::Torus).equal());
        }
    }
}
