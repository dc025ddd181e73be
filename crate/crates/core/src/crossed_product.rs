//! The crossed product `(K, G, alpha) = (+)_{g in G} u_g K` for
//! `K = Q(zeta_n)` and `G = <sigma>` cyclic of order `s`.
//!
//! Coefficients sit on the right of the basis symbols. Multiplication is
//! governed by `a u_g = u_g g(a)` and `u_g u_h = u_{gh} alpha(g, h)`, i.e.
//!
//! ```text
//! (u_{sigma^i} a)(u_{sigma^j} b) = u_{sigma^{i+j}} alpha(sigma^i, sigma^j) sigma^j(a) b
//! ```

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::Cocycle2;
use crate::error::{AlgebraError, Result};
use crate::linalg;
use crate::scalar::{CyclotomicElement, CyclotomicField, Galois, GaloisAutomorphism, Rational};

/// `sum_i u_{sigma^i} a_i`, stored as the right coefficients `a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedElement {
    coeffs: Vec<CyclotomicElement>,
}

impl CrossedElement {
    pub fn from_coeffs(coeffs: Vec<CyclotomicElement>) -> Self {
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CyclotomicElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CyclotomicElement::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_order(self.order(), other.order())?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

fn check_order(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(AlgebraError::DimensionMismatch { expected, found })
    }
}

/// An `s x s` matrix over `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMatrix {
    rows: Vec<Vec<CyclotomicElement>>,
}

impl SplitMatrix {
    pub fn identity(field: &Arc<CyclotomicField>, size: usize) -> Self {
        Self::diagonal(&vec![field.one(); size])
    }

    pub fn zero(field: &Arc<CyclotomicField>, size: usize) -> Self {
        Self {
            rows: vec![vec![field.zero(); size]; size],
        }
    }

    pub fn diagonal(entries: &[CyclotomicElement]) -> Self {
        let zero = entries[0].field().zero();
        let rows = (0..entries.len())
            .map(|i| {
                (0..entries.len())
                    .map(|j| if i == j { entries[i].clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn from_rows(rows: Vec<Vec<CyclotomicElement>>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<CyclotomicElement>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        let zero = self.rows[0][0].field().zero();
        let mut out = vec![vec![zero; n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out[i][j] = &out[i][j] + &(a * b);
                    }
                }
            }
        }
        Self { rows: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &CyclotomicElement) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|a| c * a).collect())
                .collect(),
        }
    }

    fn flatten(&self) -> Vec<CyclotomicElement> {
        self.rows.iter().flatten().cloned().collect()
    }
}

/// Which triples [`CrossedProduct::associativity_check`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssociativityScope {
    /// Every triple of monomials `u_{sigma^a} zeta^p`.
    Basis,
    /// Random triples with small rational coefficients, from a fixed seed.
    Random { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssociativityWitness {
    /// `(u_a zeta^p)(u_b zeta^q)(u_c zeta^r)`; `group` is `[a, b, c]` and
    /// `zeta` is `[p, q, r]`.
    Basis { group: [usize; 3], zeta: [usize; 3] },
    Random { trial: usize },
}

impl AssociativityWitness {
    pub fn group_triple(&self) -> Option<[usize; 3]> {
        match self {
            Self::Basis { group, .. } => Some(*group),
            Self::Random { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub triples_checked: usize,
    pub witness: Option<AssociativityWitness>,
}

impl AssociativityReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub multiplicative: bool,
    pub rank: usize,
    pub expected_rank: usize,
}

impl SplittingReport {
    pub fn holds(&self) -> bool {
        self.multiplicative && self.rank == self.expected_rank
    }
}

/// `(K, G, alpha)` with `K = Q(zeta_n)` and `G` generated by `sigma`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    cocycle: Cocycle2<CyclotomicElement>,
    /// `sigma^j` for `0 <= j < s`.
    sigma_powers: Vec<GaloisAutomorphism>,
}

impl CrossedProduct {
    /// Requires `sigma` to have order exactly `s`.
    pub fn new(cocycle: Cocycle2<CyclotomicElement>) -> Result<Self> {
        let s = cocycle.order();
        if cocycle.galois().order() != s {
            return Err(AlgebraError::InvalidArgument(format!(
                "sigma has order {} but the cocycle has order {s}",
                cocycle.galois().order()
            )));
        }
        let sigma_powers = (0..s as i64).map(|j| cocycle.galois().power(j)).collect();
        Ok(Self {
            cocycle,
            sigma_powers,
        })
    }

    pub fn cocycle(&self) -> &Cocycle2<CyclotomicElement> {
        &self.cocycle
    }

    pub fn sigma(&self) -> &GaloisAutomorphism {
        self.cocycle.galois()
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.sigma().field()
    }

    pub fn order(&self) -> usize {
        self.cocycle.order()
    }

    /// `dim_Q = s * phi(n)`.
    pub fn rational_dimension(&self) -> usize {
        self.order() * self.field().degree()
    }

    pub fn zero(&self) -> CrossedElement {
        CrossedElement::from_coeffs(vec![self.field().zero(); self.order()])
    }

    /// `u_{sigma^a} x`.
    pub fn basis(&self, a: usize, x: CyclotomicElement) -> CrossedElement {
        let mut e = self.zero();
        e.coeffs[a % self.order()] = x;
        e
    }

    /// `u_{sigma^a} zeta^p`.
    pub fn monomial(&self, a: usize, p: usize) -> CrossedElement {
        self.basis(a, self.field().zeta_pow(p as i64))
    }

    /// The element `u_1 x` for `x` in `K`.
    pub fn scalar(&self, x: CyclotomicElement) -> CrossedElement {
        self.basis(0, x)
    }

    pub fn one(&self) -> CrossedElement {
        self.scalar(self.field().one())
    }

    pub fn u_sigma(&self) -> CrossedElement {
        self.basis(1 % self.order(), self.field().one())
    }

    pub fn multiply(&self, x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
        let s = self.order();
        check_order(s, x.order())?;
        check_order(s, y.order())?;
        let mut out = self.zero();
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let twisted = self.sigma_powers[j].apply(a)?;
                let term = &(self.cocycle.entry(i, j) * &twisted) * b;
                let k = (i + j) % s;
                out.coeffs[k] = &out.coeffs[k] + &term;
            }
        }
        Ok(out)
    }

    fn basis_elements(&self) -> Vec<(usize, usize, CrossedElement)> {
        let d = self.field().degree();
        (0..self.order())
            .flat_map(|a| (0..d).map(move |p| (a, p)))
            .map(|(a, p)| (a, p, self.monomial(a, p)))
            .collect()
    }

    fn associates(&self, x: &CrossedElement, y: &CrossedElement, z: &CrossedElement) -> bool {
        let left = self.multiply(&self.multiply(x, y).unwrap(), z).unwrap();
        let right = self.multiply(x, &self.multiply(y, z).unwrap()).unwrap();
        left == right
    }

    /// Checks `(xy)z = x(yz)`. Triples are visited with the group exponents
    /// outermost, so on failure the group part of the witness is the first
    /// triple violating the cocycle condition.
    pub fn associativity_check(&self, scope: AssociativityScope) -> AssociativityReport {
        match scope {
            AssociativityScope::Basis => {
                let s = self.order();
                let d = self.field().degree();
                let mut checked = 0;
                for a in 0..s {
                    for b in 0..s {
                        for c in 0..s {
                            for p in 0..d {
                                for q in 0..d {
                                    for r in 0..d {
                                        checked += 1;
                                        let ok = self.associates(
                                            &self.monomial(a, p),
                                            &self.monomial(b, q),
                                            &self.monomial(c, r),
                                        );
                                        if !ok {
                                            return AssociativityReport {
                                                triples_checked: checked,
                                                witness: Some(AssociativityWitness::Basis {
                                                    group: [a, b, c],
                                                    zeta: [p, q, r],
                                                }),
                                            };
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                AssociativityReport {
                    triples_checked: checked,
                    witness: None,
                }
            }
            AssociativityScope::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for trial in 0..count {
                    let x = self.random_element(&mut rng);
                    let y = self.random_element(&mut rng);
                    let z = self.random_element(&mut rng);
                    if !self.associates(&x, &y, &z) {
                        return AssociativityReport {
                            triples_checked: trial + 1,
                            witness: Some(AssociativityWitness::Random { trial }),
                        };
                    }
                }
                AssociativityReport {
                    triples_checked: count,
                    witness: None,
                }
            }
        }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> CrossedElement {
        let field = self.field();
        let coeffs = (0..self.order())
            .map(|_| {
                field.from_coeffs(
                    (0..field.degree())
                        .map(|_| {
                            Rational::new(
                                rng.random_range(-5i64..=5).into(),
                                rng.random_range(1i64..=3).into(),
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        CrossedElement::from_coeffs(coeffs)
    }

    fn rational_coordinates(&self, x: &CrossedElement) -> Vec<Rational> {
        x.coeffs
            .iter()
            .flat_map(|c| c.coeffs().iter().cloned())
            .collect()
    }

    /// `dim_Q` of the centre, from the linear system `z b = b z` for the
    /// generators `b` in `{u_sigma, zeta}`.
    pub fn center_dimension(&self) -> usize {
        let basis = self.basis_elements();
        let n = basis.len();
        let generators = [self.u_sigma(), self.scalar(self.field().zeta())];
        // Column j holds the coordinates of [e_j, b] for each generator b.
        let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(n);
        for (_, _, e) in &basis {
            let mut col = Vec::with_capacity(2 * n);
            for b in &generators {
                let zb = self.multiply(e, b).unwrap();
                let bz = self.multiply(b, e).unwrap();
                col.extend(self.rational_coordinates(&zb.add(&bz.neg()).unwrap()));
            }
            columns.push(col);
        }
        let rows = columns[0].len();
        let matrix: Vec<Vec<Rational>> = (0..rows)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        n - linalg::rank(&matrix)
    }

    fn standard_gamma(&self) -> Result<CyclotomicElement> {
        self.cocycle.standard_gamma().ok_or_else(|| {
            AlgebraError::Unsupported(
                "splitting representation needs a cocycle in standard cyclic form".into(),
            )
        })
    }

    /// The matrix of `u_sigma`: `gamma` at `(0, s-1)` and ones on the
    /// subdiagonal.
    fn u_sigma_matrix(&self, gamma: &CyclotomicElement) -> SplitMatrix {
        let s = self.order();
        let field = self.field();
        if s == 1 {
            return SplitMatrix::identity(field, 1);
        }
        let mut m = SplitMatrix::zero(field, s);
        m.rows[0][s - 1] = gamma.clone();
        for t in 1..s {
            m.rows[t][t - 1] = field.one();
        }
        m
    }

    /// `rho(a) = diag(a, sigma(a), ..., sigma^{s-1}(a))`.
    fn diagonal_of(&self, a: &CyclotomicElement) -> Result<SplitMatrix> {
        let entries = self
            .sigma_powers
            .iter()
            .map(|t| t.apply(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitMatrix::diagonal(&entries))
    }

    /// The splitting `rho: A (x) K -> M_s(K)`, `rho(u_{sigma^a} x) = U^a rho(x)`.
    pub fn splitting_representation(&self, x: &CrossedElement) -> Result<SplitMatrix> {
        check_order(self.order(), x.order())?;
        let gamma = self.standard_gamma()?;
        let u = self.u_sigma_matrix(&gamma);
        let field = self.field();
        let mut acc = SplitMatrix::zero(field, self.order());
        let mut u_power = SplitMatrix::identity(field, self.order());
        for a in &x.coeffs {
            if !a.is_zero() {
                acc = acc.add(&u_power.mul(&self.diagonal_of(a)?));
            }
            u_power = u_power.mul(&u);
        }
        Ok(acc)
    }

    /// `rho` is multiplicative on all basis pairs and its image spans
    /// `M_s(K)` over `K`.
    pub fn splitting_check(&self) -> Result<SplittingReport> {
        let basis = self.basis_elements();
        let images = basis
            .iter()
            .map(|(_, _, e)| self.splitting_representation(e))
            .collect::<Result<Vec<_>>>()?;
        let mut multiplicative = true;
        'outer: for (i, (_, _, x)) in basis.iter().enumerate() {
            for (j, (_, _, y)) in basis.iter().enumerate() {
                let product = self.splitting_representation(&self.multiply(x, y)?)?;
                if product != images[i].mul(&images[j]) {
                    multiplicative = false;
                    break 'outer;
                }
            }
        }
        let vectors: Vec<Vec<CyclotomicElement>> = images.iter().map(SplitMatrix::flatten).collect();
        let s = self.order();
        Ok(SplittingReport {
            multiplicative,
            rank: linalg::rank(&vectors),
            expected_rank: s * s,
        })
    }
}
