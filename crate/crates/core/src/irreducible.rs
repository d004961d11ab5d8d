//! Absolute irreducibility over Q and F_p, exhaustive point counts modulo a
//! prime, and the bad-prime estimator built on both.
//!
//! Bivariate inputs are decided exactly: when gcd(f, f_x) = 1 and the
//! characteristic is 0 or exceeds (2m-1)n, the number of absolutely
//! irreducible factors equals the dimension of the space of pairs (g, h),
//! deg g ≤ (m-1, n), deg h ≤ (m, n-1), with
//!
//! ```text
//! f g_y - g f_y - f h_x + h f_x = 0
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::linalg::{self, pow_mod, IntMatrix};
use crate::poly::{homogenize, IntPolynomial, Monomial, PolyError, WeightVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrreducibilityError {
    #[error("characteristic {p} too small: the differential criterion needs p > {needed}")]
    CharacteristicTooSmall { p: u64, needed: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is constant (after reduction)")]
    Constant,
    #[error("could not find a restriction preserving the degree")]
    NoGoodRestriction,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityVerdict {
    pub irreducible: bool,
    /// Set when the answer rests on random plane restrictions.
    pub randomized: bool,
    /// Number of absolutely irreducible factors, when the bivariate system
    /// was solved directly and its preconditions held.
    pub factor_count: Option<usize>,
    /// Outcome of each random trial (empty for exact answers).
    pub trials: Vec<bool>,
}

impl IrreducibilityVerdict {
    fn exact(irreducible: bool, factor_count: Option<usize>) -> Self {
        IrreducibilityVerdict {
            irreducible,
            randomized: false,
            factor_count,
            trials: Vec::new(),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// Primes in `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (lo.max(2)..=hi).filter(|&k| sieve[k as usize]).collect()
}

// ---------------------------------------------------------------------------
// coefficient fields

trait Fld: Sync {
    type E: Clone + PartialEq + fmt::Debug;
    fn of(&self, v: &BigInt) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn rank(&self, m: &IntMatrix, cols: usize) -> usize;
    fn characteristic(&self) -> u64;
}

struct Rationals;

impl Fld for Rationals {
    type E = BigRational;
    fn of(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn rank(&self, m: &IntMatrix, cols: usize) -> usize {
        linalg::rank(m, cols)
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

struct PrimeField(u64);

impl Fld for PrimeField {
    type E = u64;
    fn of(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.0)).to_u64().unwrap()
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        pow_mod(*a, self.0 - 2, self.0)
    }
    fn rank(&self, m: &IntMatrix, cols: usize) -> usize {
        linalg::rank_mod_p(m, cols, self.0)
    }
    fn characteristic(&self) -> u64 {
        self.0
    }
}

fn trim<K: Fld>(k: &K, mut a: Vec<K::E>) -> Vec<K::E> {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
    a
}

// Monic-free Euclid on dense ascending coefficient vectors; the result is
// only used for its degree.
fn univariate_gcd<K: Fld>(k: &K, a: Vec<K::E>, b: Vec<K::E>) -> Vec<K::E> {
    let (mut a, mut b) = (trim(k, a), trim(k, b));
    while !b.is_empty() {
        // a mod b
        let lead_inv = k.inv(b.last().unwrap());
        while a.len() >= b.len() {
            let q = k.mul(a.last().unwrap(), &lead_inv);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                a[shift + i] = k.sub(&a[shift + i], &k.mul(&q, bi));
            }
            a = trim(k, a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn sylvester(a: &[BigInt], b: &[BigInt]) -> IntMatrix {
    // a, b ascending with formal degrees a.len()-1 and b.len()-1
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    rows
}

// ---------------------------------------------------------------------------
// bivariate criterion

enum Bivariate {
    /// gcd(f, f_x) is nontrivial, so f is not absolutely irreducible.
    SharedFactor,
    Factors(usize),
}

// `f` has arity 2 and depends on both variables.
fn bivariate_factors<K: Fld>(k: &K, f: &IntPolynomial) -> Result<Bivariate, IrreducibilityError> {
    let deg = |v: usize| f.degree_in(v).unwrap_or(0) as u64;
    let cost = |x: usize| (2 * deg(x) - 1) * deg(1 - x);
    let x = if cost(1) < cost(0) { 1 } else { 0 };
    let y = 1 - x;
    let (m, n) = (deg(x) as usize, deg(y) as usize);
    let needed = cost(x);
    let p = k.characteristic();
    if p != 0 && p <= needed {
        return Err(IrreducibilityError::CharacteristicTooSmall { p, needed });
    }

    // content with respect to x
    let coeffs = f.coefficients_in(x);
    let mut g: Vec<K::E> = Vec::new();
    for c in &coeffs {
        let dense: Vec<K::E> = c
            .to_dense_univariate(y)
            .expect("bivariate")
            .iter()
            .map(|v| k.of(v))
            .collect();
        g = univariate_gcd(k, g, dense);
    }
    if g.len() > 1 {
        return Ok(Bivariate::SharedFactor);
    }

    // Res_x(f, f_x) has y-degree at most (2m-1)n; test enough specializations.
    let fx = f.partial_derivative(x);
    let fx_coeffs = fx.coefficients_in(x);
    let res_nonzero = (0..=needed).any(|y0| {
        let y0 = BigInt::from(y0);
        let at = |cs: &[IntPolynomial], len: usize| -> Vec<BigInt> {
            let mut v: Vec<BigInt> = cs.iter().map(|c| c.specialize(y, &y0).terms().map(|(_, c)| c.clone()).sum()).collect();
            v.resize(len, BigInt::zero());
            v
        };
        let a = at(&coeffs, m + 1);
        let b = at(&fx_coeffs, m);
        let s = sylvester(&a, &b);
        k.rank(&s, s.len()) == s.len()
    });
    if !res_nonzero {
        return Ok(Bivariate::SharedFactor);
    }

    let fy = f.partial_derivative(y);
    let mono = |i: usize, j: usize| {
        let mut e = vec![0u32; 2];
        e[x] = i as u32;
        e[y] = j as u32;
        IntPolynomial::term(2, Monomial::new(e), 1)
    };
    let mut images = Vec::new();
    for i in 0..m {
        for j in 0..=n {
            let mu = mono(i, j);
            images.push(&(f * &mu.partial_derivative(y)) - &(&mu * &fy));
        }
    }
    for i in 0..=m {
        for j in 0..n {
            let mu = mono(i, j);
            images.push(&(&mu * &fx) - &(f * &mu.partial_derivative(x)));
        }
    }
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in &images {
        for (mo, _) in img.terms() {
            let next = row_of.len();
            row_of.entry(mo.clone()).or_insert(next);
        }
    }
    let cols = images.len();
    let mut mat = vec![vec![BigInt::zero(); cols]; row_of.len()];
    for (col, img) in images.iter().enumerate() {
        for (mo, c) in img.terms() {
            mat[row_of[mo]][col] = c.clone();
        }
    }
    Ok(Bivariate::Factors(cols - k.rank(&mat, cols)))
}

// ---------------------------------------------------------------------------

fn reduce_mod(f: &IntPolynomial, p: u64) -> IntPolynomial {
    let pb = BigInt::from(p);
    f.map_coeffs(|c| c.mod_floor(&pb))
}

// Drops variables that do not occur.
fn compact(f: &IntPolynomial) -> IntPolynomial {
    let mut g = f.clone();
    for v in (0..f.arity()).rev() {
        if !g.depends_on(v) {
            g = g.remove_var(v);
        }
    }
    g
}

// Sets a weight-one variable to 1 when f is homogeneous for standard
// weights or for weights with a single entry above one. Factors of such an
// f are homogeneous too, so this preserves absolute irreducibility as long
// as the variable does not divide f.
fn dehomogenize(f: &IntPolynomial) -> Option<IntPolynomial> {
    let a = f.arity();
    let deg = f.total_degree()?;
    let mut candidates = vec![WeightVector::standard(a)];
    for heavy in 0..a {
        for e in 2..=deg.max(2) {
            let mut w = vec![1; a];
            w[heavy] = e;
            candidates.push(WeightVector::new(w).expect("contains a one"));
        }
    }
    let w = candidates.into_iter().find(|w| f.is_weighted_homogeneous(w))?;
    let v = (0..a).find(|&v| w.weights()[v] == 1 && !f.divisible_by_var(v))?;
    Some(compact(&f.specialize(v, &BigInt::one())))
}

const TRIALS: usize = 3;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Absolute irreducibility of `f` over the algebraic closure of `field`.
pub fn absolutely_irreducible(f: &IntPolynomial, field: Field) -> Result<IrreducibilityVerdict, IrreducibilityError> {
    absolutely_irreducible_seeded(f, field, DEFAULT_SEED)
}

pub fn absolutely_irreducible_seeded(
    f: &IntPolynomial,
    field: Field,
    seed: u64,
) -> Result<IrreducibilityVerdict, IrreducibilityError> {
    match field {
        Field::Rationals => decide(&Rationals, f.clone(), seed),
        Field::Prime(p) => {
            if !is_prime(p) {
                return Err(IrreducibilityError::NotPrime(p));
            }
            decide(&PrimeField(p), reduce_mod(f, p), seed)
        }
    }
}

fn decide<K: Fld>(k: &K, f: IntPolynomial, seed: u64) -> Result<IrreducibilityVerdict, IrreducibilityError> {
    let mut g = compact(&f);
    if g.is_constant() {
        return Err(IrreducibilityError::Constant);
    }
    if g.arity() >= 2 {
        if let Some(h) = dehomogenize(&g) {
            g = h;
        }
    }
    match g.arity() {
        1 => Ok(IrreducibilityVerdict::exact(g.total_degree() == Some(1), None)),
        2 => Ok(match bivariate_factors(k, &g)? {
            Bivariate::SharedFactor => IrreducibilityVerdict::exact(false, None),
            Bivariate::Factors(c) => IrreducibilityVerdict::exact(c == 1, Some(c)),
        }),
        _ => random_planes(k, &g, seed),
    }
}

fn random_planes<K: Fld>(k: &K, f: &IntPolynomial, seed: u64) -> Result<IrreducibilityVerdict, IrreducibilityError> {
    let deg = f.total_degree().unwrap();
    let p = k.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 2 * deg.pow(3) as i64; // range of size 4 deg^3 + 1
    let draw = |rng: &mut ChaCha8Rng| -> BigInt {
        if p == 0 {
            BigInt::from(rng.gen_range(-half..=half))
        } else {
            BigInt::from(rng.gen_range(0..p))
        }
    };
    let mut trials = Vec::with_capacity(TRIALS);
    for _ in 0..TRIALS {
        let mut restricted = None;
        for _ in 0..100 {
            let subs: Vec<IntPolynomial> = (0..f.arity())
                .map(|_| {
                    let c = IntPolynomial::constant(2, draw(&mut rng));
                    let a = IntPolynomial::var(2, 0).scale(&draw(&mut rng));
                    let b = IntPolynomial::var(2, 1).scale(&draw(&mut rng));
                    &(&c + &a) + &b
                })
                .collect();
            let mut g = f.substitute(&subs);
            if p != 0 {
                g = reduce_mod(&g, p);
            }
            if g.total_degree() == Some(deg) && g.depends_on(0) && g.depends_on(1) {
                restricted = Some(g);
                break;
            }
        }
        let g = restricted.ok_or(IrreducibilityError::NoGoodRestriction)?;
        let ok = matches!(bivariate_factors(k, &g)?, Bivariate::Factors(1));
        trials.push(ok);
    }
    Ok(IrreducibilityVerdict {
        irreducible: trials.iter().all(|&t| t),
        randomized: true,
        factor_count: None,
        trials,
    })
}

// ---------------------------------------------------------------------------
// point counts modulo p

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountMode {
    /// All variables of the homogenization (f itself if already homogeneous).
    AffineCone,
    Affine,
    /// Orbits of nonzero solutions under `x -> λ^w x`.
    ProjectiveWeighted(Vec<u64>),
}

/// Solutions of `f ≡ 0 mod p`, counted without multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPCount {
    pub p: u64,
    pub count: u64,
    pub mode: CountMode,
    /// Number of variables enumerated.
    pub variables: usize,
}

type Terms = Vec<(Vec<u32>, u64)>;

fn mod_terms(f: &IntPolynomial, p: u64) -> Terms {
    let pb = BigInt::from(p);
    f.terms()
        .map(|(m, c)| (m.exps().to_vec(), c.mod_floor(&pb).to_u64().unwrap()))
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn specialize_mod(terms: &Terms, var: usize, a: u64, p: u64) -> Terms {
    let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (e, c) in terms {
        let v = ((*c as u128 * pow_mod(a, e[var] as u64, p) as u128) % p as u128) as u64;
        if v == 0 {
            continue;
        }
        let mut e = e.clone();
        e[var] = 0;
        let slot = acc.entry(e).or_insert(0);
        *slot = (*slot + v) % p;
    }
    acc.into_iter().filter(|(_, c)| *c != 0).collect()
}

fn count_rec(terms: &Terms, var: usize, arity: usize, p: u64) -> u64 {
    if terms.is_empty() {
        return p.pow((arity - var) as u32);
    }
    if terms.iter().all(|(e, _)| e.iter().all(|&k| k == 0)) {
        return 0;
    }
    (0..p)
        .map(|a| count_rec(&specialize_mod(terms, var, a, p), var + 1, arity, p))
        .sum()
}

fn eval_mod(terms: &Terms, x: &[u64], p: u64) -> u64 {
    terms.iter().fold(0, |acc, (e, c)| {
        let t = e
            .iter()
            .zip(x)
            .fold(*c, |t, (&k, &xi)| ((t as u128 * pow_mod(xi, k as u64, p) as u128) % p as u128) as u64);
        (acc + t) % p
    })
}

pub fn count_points_mod_p(
    f: &IntPolynomial,
    p: u64,
    mode: CountMode,
    budget: &Budget,
) -> Result<ModPCount, IrreducibilityError> {
    if !is_prime(p) {
        return Err(IrreducibilityError::NotPrime(p));
    }
    let poly = match &mode {
        CountMode::AffineCone if !f.is_weighted_homogeneous(&WeightVector::standard(f.arity())) => {
            homogenize(f, &WeightVector::standard(f.arity()))?.0
        }
        _ => f.clone(),
    };
    let arity = poly.arity();
    let total = (p as u128).checked_pow(arity as u32).filter(|&t| t <= u64::MAX as u128);
    let nodes = match &mode {
        CountMode::ProjectiveWeighted(_) => total.map(|t| t * p as u128),
        _ => total,
    };
    budget.check_nodes(nodes.unwrap_or(u128::MAX))?;
    budget.check_time()?;
    let terms = mod_terms(&poly, p);

    let count = match &mode {
        CountMode::ProjectiveWeighted(w) => {
            let w = WeightVector::new(w.clone())?;
            if w.len() != arity {
                return Err(PolyError::ArityMismatch { expected: w.len(), found: arity }.into());
            }
            if !poly.is_weighted_homogeneous(&w) {
                return Err(PolyError::NotHomogeneous.into());
            }
            count_orbits(&terms, &w, p, budget)?
        }
        _ if arity == 0 => u64::from(terms.is_empty()),
        _ => {
            let parts: Vec<Result<u64, BudgetExceeded>> = (0..p)
                .into_par_iter()
                .map(|a| {
                    budget.check_time()?;
                    Ok(count_rec(&specialize_mod(&terms, 0, a, p), 1, arity, p))
                })
                .collect();
            parts.into_iter().sum::<Result<u64, _>>()?
        }
    };
    Ok(ModPCount {
        p,
        count,
        mode,
        variables: arity,
    })
}

fn count_orbits(terms: &Terms, w: &WeightVector, p: u64, budget: &Budget) -> Result<u64, IrreducibilityError> {
    let arity = w.len();
    let parts: Vec<Result<u64, BudgetExceeded>> = (0..p)
        .into_par_iter()
        .map(|x0| {
            budget.check_time()?;
            let mut x = vec![0u64; arity];
            x[0] = x0;
            let mut count = 0;
            loop {
                if x.iter().any(|&c| c != 0) && eval_mod(terms, &x, p) == 0 {
                    // count x only if it is the smallest point of its orbit
                    let minimal = (2..p).all(|lam| {
                        let y: Vec<u64> = x
                            .iter()
                            .zip(w.weights())
                            .map(|(&c, &wi)| ((c as u128 * pow_mod(lam, wi, p) as u128) % p as u128) as u64)
                            .collect();
                        y >= x
                    });
                    count += u64::from(minimal);
                }
                let mut i = arity;
                loop {
                    if i == 1 {
                        return Ok(count);
                    }
                    i -= 1;
                    x[i] += 1;
                    if x[i] < p {
                        break;
                    }
                    x[i] = 0;
                }
            }
        })
        .collect();
    Ok(parts.into_iter().sum::<Result<u64, _>>()?)
}

/// `|count - p^dim| / (d^2 p^{dim - 1/2})`: the constant a count needs in
/// the square-root error band around `p^dim`.
pub fn lang_weil_constant(count: u64, p: u64, d: u64, dim: u32) -> f64 {
    let p = p as f64;
    let main = p.powi(dim as i32);
    (count as f64 - main).abs() / ((d * d) as f64 * p.powf(dim as f64 - 0.5))
}

// ---------------------------------------------------------------------------
// bad primes

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BfEstimate {
    pub threshold: u64,
    pub tested_primes: Vec<u64>,
    pub failing_primes: Vec<u64>,
    /// Primes whose test could not run, with the reason.
    pub skipped_primes: Vec<(u64, String)>,
    pub log_b: f64,
    pub upper_bound: f64,
    /// Always set: only finitely many primes are examined.
    pub partial: bool,
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap().abs().ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = v.abs() >> shift;
        top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// The default threshold `27 d^4` below which primes are not examined.
pub fn default_threshold(d: u64) -> u64 {
    27 * d.pow(4)
}

/// Partial bad-prime sum over the primes of `[lo, hi]` above the threshold.
pub fn b_f_estimate(
    f: &IntPolynomial,
    d: u64,
    lo: u64,
    hi: u64,
    threshold: Option<u64>,
) -> Result<BfEstimate, IrreducibilityError> {
    if !f.is_primitive() {
        return Err(PolyError::InvalidArgument("polynomial must be primitive".into()).into());
    }
    if d == 0 {
        return Err(PolyError::InvalidArgument("degree must be positive".into()).into());
    }
    let threshold = threshold.unwrap_or_else(|| default_threshold(d));
    let mut est = BfEstimate {
        threshold,
        tested_primes: Vec::new(),
        failing_primes: Vec::new(),
        skipped_primes: Vec::new(),
        log_b: 0.0,
        upper_bound: (ln_big(&f.norm()) / (d * d) as f64).max(1.0),
        partial: true,
    };
    for p in primes_in(lo.max(threshold + 1), hi) {
        match absolutely_irreducible(f, Field::Prime(p)) {
            Ok(v) => {
                est.tested_primes.push(p);
                if !v.irreducible {
                    est.failing_primes.push(p);
                    est.log_b += (p as f64).ln() / p as f64;
                }
            }
            Err(e) => est.skipped_primes.push((p, e.to_string())),
        }
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn q(text: &str, arity: usize) -> IrreducibilityVerdict {
        absolutely_irreducible(&parse_poly(text, arity).unwrap(), Field::Rationals).unwrap()
    }

    #[test]
    fn spec_examples() {
        let v = q("Y^2 - X1*X2", 3);
        assert!(v.irreducible && !v.randomized);
        assert!(!q("Y^2 - X1^2", 2).irreducible);
        assert!(!q("Y^2 + X1^2", 2).irreducible);
        let v = q("Y^2 + X1^2 + 2*X1 + 1", 2);
        assert!(!v.irreducible);
        assert_eq!(v.factor_count, Some(2));
    }

    #[test]
    fn univariate_cases() {
        assert!(q("Y - 3", 1).irreducible);
        assert!(!q("Y^2 + 1", 2).irreducible);
        assert!(absolutely_irreducible(&parse_poly("7", 1).unwrap(), Field::Rationals).is_err());
    }

    #[test]
    fn content_in_one_variable() {
        // (X1 + 1)(Y + X1)
        assert!(!q("X1*Y + Y + X1^2 + X1", 2).irreducible);
    }

    #[test]
    fn square_factor() {
        assert!(!q("Y^2 + 2*X1*Y + X1^2", 2).irreducible);
    }

    #[test]
    fn multivariate_random_planes() {
        let v = q("Y^2 - X1*X2 - 1", 3);
        assert!(v.irreducible && v.randomized);
        assert_eq!(v.trials.len(), 3);
        let v = q("Y^2 - X1*X2 + X1*Y - X2*Y + X1 + X2", 3);
        assert_eq!(v.trials.len(), 3);
        // (Y - X1)(Y + X2 + 1)
        let v = q("Y^2 + X2*Y + Y - X1*Y - X1*X2 - X1", 3);
        assert!(!v.irreducible && v.randomized);
    }

    #[test]
    fn prime_field() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        assert!(absolutely_irreducible(&f, Field::Prime(5)).unwrap().irreducible);
        // Y^2 + X1^2 = (Y + 2 X1)(Y - 2 X1) mod 5, still reducible mod 7 over F_49
        let g = parse_poly("Y^2 + X1^2", 2).unwrap();
        assert!(!absolutely_irreducible(&g, Field::Prime(5)).unwrap().irreducible);
        assert!(!absolutely_irreducible(&g, Field::Prime(7)).unwrap().irreducible);
        // Y^2 - X1^3 - 2 X1 is irreducible; with x = Y the criterion needs p > 3 * 3
        let h = parse_poly("Y^2 - X1^3 - 2*X1", 2).unwrap();
        assert!(matches!(
            absolutely_irreducible(&h, Field::Prime(7)),
            Err(IrreducibilityError::CharacteristicTooSmall { p: 7, needed: 9 })
        ));
        assert!(absolutely_irreducible(&h, Field::Prime(11)).unwrap().irreducible);
        assert!(matches!(absolutely_irreducible(&h, Field::Prime(9)), Err(IrreducibilityError::NotPrime(9))));
    }

    #[test]
    fn reduction_changes_status() {
        let f = parse_poly("Y^2 - X1^2 - 5", 2).unwrap();
        assert!(absolutely_irreducible(&f, Field::Rationals).unwrap().irreducible);
        assert!(!absolutely_irreducible(&f, Field::Prime(5)).unwrap().irreducible);
    }

    #[test]
    fn mod_p_examples() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let c = count_points_mod_p(&f, 5, CountMode::AffineCone, &Budget::unlimited()).unwrap();
        assert_eq!(c.count, 25);
        assert_eq!(c.variables, 3);
        let g = parse_poly("Y", 3).unwrap();
        assert_eq!(count_points_mod_p(&g, 3, CountMode::Affine, &Budget::unlimited()).unwrap().count, 9);
        let c7 = count_points_mod_p(&f, 7, CountMode::AffineCone, &Budget::unlimited()).unwrap();
        assert_eq!(c7.count, 49);
        assert!(lang_weil_constant(c7.count, 7, 2, 2) <= 1.0);
    }

    #[test]
    fn cone_homogenizes() {
        // Y - X1^2 has p^1 affine zeros; its homogenization Y X0 - X1^2 has p^2
        let f = parse_poly("Y - X1^2", 2).unwrap();
        assert_eq!(count_points_mod_p(&f, 7, CountMode::Affine, &Budget::unlimited()).unwrap().count, 7);
        let c = count_points_mod_p(&f, 7, CountMode::AffineCone, &Budget::unlimited()).unwrap();
        assert_eq!((c.count, c.variables), (49, 3));
    }

    #[test]
    fn weighted_projective_orbits() {
        // conic in P^2 over F_p has p + 1 points
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let c = count_points_mod_p(&f, 7, CountMode::ProjectiveWeighted(vec![1, 1, 1]), &Budget::unlimited()).unwrap();
        assert_eq!(c.count, 8);
        // Y = X1 X2 in P(2,1,1): every (x1 : x2) in P^1 gives one point
        let g = parse_poly("Y - X1*X2", 3).unwrap();
        let c = count_points_mod_p(&g, 5, CountMode::ProjectiveWeighted(vec![2, 1, 1]), &Budget::unlimited()).unwrap();
        assert_eq!(c.count, 6);
    }

    #[test]
    fn mod_p_budget() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        assert!(matches!(
            count_points_mod_p(&f, 31, CountMode::Affine, &Budget::nodes(1000)),
            Err(IrreducibilityError::Budget(_))
        ));
    }

    #[test]
    fn bad_prime_examples() {
        let f = parse_poly("Y^2 - 2*X1*X2", 3).unwrap();
        let est = b_f_estimate(&f, 2, 2, 500, None).unwrap();
        assert_eq!(est.threshold, 432);
        assert!(est.tested_primes.iter().all(|&p| p > 432));
        assert_eq!(est.log_b, 0.0);
        assert!(est.partial);

        // below the default threshold 2 is bad: Y^2 mod 2 is a square
        let est = b_f_estimate(&f, 2, 2, 30, Some(1)).unwrap();
        assert_eq!(est.failing_primes, vec![2]);
        assert!(est.skipped_primes.is_empty());

        // Y^2 - X1^2 - 5*X2^2 is bad at 5; 2 and 3 are too small to test
        let g = parse_poly("Y^2 - X1^2 - 5*X2^2", 3).unwrap();
        let est = b_f_estimate(&g, 2, 2, 40, Some(1)).unwrap();
        assert_eq!(est.failing_primes, vec![5]);
        let skipped: Vec<u64> = est.skipped_primes.iter().map(|s| s.0).collect();
        assert_eq!(skipped, vec![2, 3]);
        assert!((est.log_b - 5f64.ln() / 5.0).abs() < 1e-12);
        assert!(est.failing_primes.iter().all(|p| est.tested_primes.contains(p)));
    }

    #[test]
    fn primes_sieve() {
        assert_eq!(primes_in(10, 30), vec![11, 13, 17, 19, 23, 29]);
        assert!(primes_in(30, 10).is_empty());
    }

    #[test]
    fn ln_of_big_values() {
        let v = num_traits::pow(BigInt::from(10), 400);
        assert!((ln_big(&v) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln_big(&BigInt::from(8)) - 8f64.ln()).abs() < 1e-12);
    }

    // brute force over F_p^k, test-only
    fn naive_count(f: &IntPolynomial, p: u64) -> u64 {
        let k = f.arity();
        let pb = BigInt::from(p);
        let mut x = vec![0i64; k];
        let mut count = 0;
        loop {
            if f.eval_i64(&x).mod_floor(&pb).is_zero() {
                count += 1;
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return count;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < p as i64 {
                    break;
                }
                x[i] = 0;
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mod_p_count_is_exact_and_order_free(
            a in -3i64..4, b in -3i64..4, c in -3i64..4,
            pi in 0usize..3, perm in 0usize..6,
        ) {
            let p = [3u64, 5, 7][pi];
            let f = parse_poly(&format!("Y^2 + {a}*X1*Y - X1*X2^2 + {b}*X2 + {c}"), 3).unwrap();
            let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            let g = f.permute_vars(&perms[perm]);
            let cf = count_points_mod_p(&f, p, CountMode::Affine, &Budget::unlimited()).unwrap();
            let cg = count_points_mod_p(&g, p, CountMode::Affine, &Budget::unlimited()).unwrap();
            prop_assert_eq!(cf.count, cg.count);
            prop_assert_eq!(cf.count, naive_count(&f, p));
            prop_assert!(cf.count <= p.pow(3));
        }

        #[test]
        fn binomial_family_has_no_bad_primes(d in 2u64..5, lo in 0u64..3000, width in 1u64..400) {
            let f = parse_poly(&format!("Y^{d} - X1*X2^{}", d - 1), 3).unwrap();
            let est = b_f_estimate(&f, d, lo, lo + width, None).unwrap();
            prop_assert_eq!(est.log_b, 0.0);
            prop_assert!(est.failing_primes.is_empty());
            let low = b_f_estimate(&f, d, 2, 60, Some(1)).unwrap();
            prop_assert_eq!(low.log_b, 0.0);
        }
    }
}
