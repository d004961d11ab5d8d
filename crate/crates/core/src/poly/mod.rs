//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients, weighted gradings and the structural transformations used by
//! the counting machinery.
//!
//! Exponents are small machine integers; only coefficients are big. Terms are
//! kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! lexicographic with variable 0 (conventionally `Y`) most significant. This
//! order is global: emission, leading terms and kernel tie-breaks all use it.

mod text;
mod transform;

pub use text::{parse_poly, parse_poly_with, VarNames};
pub use transform::{
    analyze_grading, coord_shift_search, ev_lift, homogenize, slice_hyperplane, split_cover_form,
    CoverPolynomial, GradedDecomposition, GradingAnalysis,
};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at byte {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent at byte {pos} does not fit in a machine word")]
    ExponentOverflow { pos: usize },
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("not a cover polynomial: {0}")]
    NotCoverForm(String),
    #[error("polynomial is not weighted homogeneous")]
    NotHomogeneous,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no shift vector in {{0..{d}}}^{n} reaches the coefficient lower bound")]
    NoShiftFound { d: u64, n: usize },
}

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn weighted_degree(&self, w: &WeightVector) -> u64 {
        self.0
            .iter()
            .zip(w.weights())
            .map(|(&e, &wi)| e as u64 * wi)
            .sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::one();
        for (x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coprime positive weights `w_0, …, w_n`, with `|w|` and `lcm(w)` cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<u64>,
    product: u64,
    lcm: u64,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self, PolyError> {
        if weights.is_empty() {
            return Err(PolyError::InvalidWeights("empty".into()));
        }
        if weights.contains(&0) {
            return Err(PolyError::InvalidWeights("weights must be >= 1".into()));
        }
        let g = weights.iter().fold(0u64, |g, &w| g.gcd(&w));
        if g != 1 {
            return Err(PolyError::InvalidWeights(format!(
                "weights {weights:?} have common divisor {g}"
            )));
        }
        let product = weights
            .iter()
            .try_fold(1u64, |p, &w| p.checked_mul(w))
            .ok_or_else(|| PolyError::InvalidWeights("product overflows".into()))?;
        let lcm = weights.iter().fold(1u64, |l, &w| l.lcm(&w));
        Ok(WeightVector {
            weights,
            product,
            lcm,
        })
    }

    /// All weights one.
    pub fn standard(len: usize) -> Self {
        WeightVector::new(vec![1; len]).expect("standard weights are valid")
    }

    /// `(e, 1, …, 1)` with `n` trailing ones: the grading of `Y, X1, …, Xn`.
    pub fn cover(e: u64, n: usize) -> Result<Self, PolyError> {
        let mut w = vec![e];
        w.extend(std::iter::repeat_n(1, n));
        WeightVector::new(w)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `|w| = ∏ w_i`.
    pub fn product(&self) -> u64 {
        self.product
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// `(1, w_0, …, w_n)`.
    pub fn prepend_one(&self) -> Self {
        let mut w = vec![1];
        w.extend_from_slice(&self.weights);
        WeightVector::new(w).expect("a unit weight keeps the vector coprime")
    }
}

/// Sparse polynomial in `arity` variables over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    arity: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(arity: usize) -> Self {
        IntPolynomial {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        Self::term(arity, Monomial::one(arity), c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, 1)
    }

    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index {i} out of range for arity {arity}");
        Self::term(arity, Monomial::var(arity, i), 1)
    }

    pub fn term(arity: usize, m: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(m.arity(), arity);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        IntPolynomial { arity, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// duplicates and dropping zeros.
    pub fn from_terms<I, C>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = IntPolynomial::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length must equal arity");
            p.add_term(Monomial(e), c.into());
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending global order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn weighted_degree(&self, w: &WeightVector) -> Option<u64> {
        self.terms.keys().map(|m| m.weighted_degree(w)).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Whether some term involves `var`.
    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Whether `var` divides every term.
    pub fn divisible_by_var(&self, var: usize) -> bool {
        !self.is_zero() && self.terms.keys().all(|m| m.0[var] > 0)
    }

    /// Maximum absolute value of the coefficients, `||f||`.
    pub fn norm(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading_term().map(|(_, c)| c.is_negative()) == Some(true) {
            g = -g;
        }
        self.map_coeffs(|c| c / &g)
    }

    /// Sign normalization only: leading coefficient positive.
    pub fn sign_normalized(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&BigInt) -> BigInt) -> Self {
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.map_coeffs(|c| c * k)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let mut out = IntPolynomial::zero(self.arity);
        for (t, c) in &self.terms {
            out.terms.insert(t.mul(m), c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = IntPolynomial::one(self.arity);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.arity);
        self.terms
            .iter()
            .map(|(m, c)| c * m.eval(point))
            .sum()
    }

    pub fn eval_i64(&self, point: &[i64]) -> BigInt {
        let p: Vec<BigInt> = point.iter().map(|&x| BigInt::from(x)).collect();
        self.eval(&p)
    }

    /// Replaces variable `i` by `subs[i]`; all substitutes share one arity.
    pub fn substitute(&self, subs: &[IntPolynomial]) -> IntPolynomial {
        assert_eq!(subs.len(), self.arity);
        let new_arity = subs.first().map(|s| s.arity).unwrap_or(0);
        let mut cache: Vec<Vec<IntPolynomial>> = subs
            .iter()
            .map(|s| vec![IntPolynomial::one(s.arity), s.clone()])
            .collect();
        let mut out = IntPolynomial::zero(new_arity);
        for (m, c) in &self.terms {
            let mut t = IntPolynomial::constant(new_arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let powers = &mut cache[i];
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &subs[i];
                    powers.push(next);
                }
                t = &t * &powers[e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Sets variable `var` to the integer `value`, keeping the arity.
    pub fn specialize(&self, var: usize, value: &BigInt) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut exps = m.0.clone();
            exps[var] = 0;
            out.add_term(Monomial(exps), c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    pub fn partial_derivative(&self, var: usize) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * BigInt::from(e));
        }
        out
    }

    /// Inserts a fresh variable at position `at` (exponent zero everywhere).
    pub fn insert_var(&self, at: usize) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.arity + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(at, 0);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Drops variable `var`, which must not occur.
    pub fn remove_var(&self, var: usize) -> IntPolynomial {
        assert!(!self.depends_on(var), "cannot drop a variable that occurs");
        let mut out = IntPolynomial::zero(self.arity - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(var);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> IntPolynomial {
        assert_eq!(perm.len(), self.arity);
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.arity];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `var^k`, a polynomial in which `var` does not occur.
    pub fn coefficients_in(&self, var: usize) -> Vec<IntPolynomial> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![IntPolynomial::zero(self.arity); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.clone();
            e[var] = 0;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Dense ascending coefficients of a polynomial in a single variable.
    pub fn to_dense_univariate(&self, var: usize) -> Option<Vec<BigInt>> {
        if (0..self.arity).any(|v| v != var && self.depends_on(v)) {
            return None;
        }
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize] = c.clone();
        }
        Some(out)
    }

    /// Sum of the terms whose weighted degree equals `k`.
    pub fn weighted_part(&self, w: &WeightVector, k: u64) -> IntPolynomial {
        let mut out = IntPolynomial::zero(self.arity);
        for (m, c) in &self.terms {
            if m.weighted_degree(w) == k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_weighted_homogeneous(&self, w: &WeightVector) -> bool {
        let mut degs = self.terms.keys().map(|m| m.weighted_degree(w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Leading monomial under the order "weighted degree, then global order".
    pub fn weighted_leading_monomial(&self, w: &WeightVector) -> Option<&Monomial> {
        self.terms
            .keys()
            .max_by(|a, b| {
                a.weighted_degree(w)
                    .cmp(&b.weighted_degree(w))
                    .then_with(|| a.cmp(b))
            })
    }

    /// Remainder of `self` on division by `f` under the weighted-degree
    /// compatible order, up to a nonzero integer factor. Zero iff `f`
    /// divides `self` over the rationals.
    pub fn reduce_by(&self, f: &IntPolynomial, w: &WeightVector) -> IntPolynomial {
        assert_eq!(self.arity, f.arity);
        assert!(!f.is_zero(), "division by the zero polynomial");
        let lm = f.weighted_leading_monomial(w).unwrap().clone();
        let lc = f.coeff(&lm);
        let key = |m: &Monomial| (m.weighted_degree(w), m.clone());
        let mut work = self.clone();
        let mut rem = IntPolynomial::zero(self.arity);
        loop {
            let top = work.terms.keys().max_by_key(|m| key(m)).cloned();
            let Some(top) = top else { break };
            let c = work.coeff(&top);
            if lm.divides(&top) {
                let q = lm.quotient(&top);
                let g = c.gcd(&lc);
                let scale_work = &lc / &g;
                let scale_f = &c / &g;
                // work <- (lc/g) * work - (c/g) * q * f
                work = &work.scale(&scale_work) - &f.mul_monomial(&q).scale(&scale_f);
                rem = rem.scale(&scale_work);
            } else {
                work.terms.remove(&top);
                rem.add_term(top, c);
            }
        }
        rem
    }

    /// Whether `f` divides `self` (over the rationals; over the integers
    /// too when `f` is primitive).
    pub fn divisible_by(&self, f: &IntPolynomial) -> bool {
        let w = WeightVector::standard(self.arity);
        self.reduce_by(f, &w).is_zero()
    }

    /// Default textual form using `Y, X1, …` names.
    pub fn to_text(&self, names: &VarNames) -> String {
        text::emit(self, names)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::emit(self, &VarNames::cover(self.arity.saturating_sub(1))))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial[{}]({})", self.arity, self)
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in addition");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in subtraction");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in multiplication");
        let mut out = IntPolynomial::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.map_coeffs(|c| -c)
    }
}

impl Add for IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: IntPolynomial) -> IntPolynomial {
        &self + &rhs
    }
}

impl Sub for IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: IntPolynomial) -> IntPolynomial {
        &self - &rhs
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: IntPolynomial) -> IntPolynomial {
        &self * &rhs
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}
