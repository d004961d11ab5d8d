//! Brute-force bounded-height enumeration.
//!
//! Everything here is exhaustive and exact; these routines are the oracles
//! the rest of the crate is checked against.

use std::collections::BTreeSet;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::poly::{CoverPolynomial, IntPolynomial, PolyError, WeightVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

// Coordinates are machine integers; keep well clear of i64 overflow when
// forming products of a few of them.
const COORD_LIMIT: i64 = 1 << 40;

/// Box `|y| ≤ B^e`, `|x_i| ≤ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WBox {
    pub e: u32,
    pub b: u64,
    pub n: usize,
}

impl WBox {
    pub fn new(e: u32, b: u64, n: usize) -> Result<Self, PolyError> {
        if b == 0 {
            return Err(PolyError::InvalidArgument("height bound must be at least 1".into()));
        }
        if e == 0 {
            return Err(PolyError::InvalidArgument("weight of Y must be at least 1".into()));
        }
        let y = (b as u128).checked_pow(e);
        if y.is_none_or(|y| y > COORD_LIMIT as u128) {
            return Err(PolyError::InvalidArgument(format!("B^e = {b}^{e} is too large")));
        }
        Ok(WBox { e, b, n })
    }

    pub fn y_bound(&self) -> i64 {
        (self.b as i64).pow(self.e)
    }

    pub fn x_bound(&self) -> i64 {
        self.b as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult {
    pub n_aff: u64,
    pub n_cover: u64,
    /// Sorted solution tuples `(y, x1, …, xn)` when requested.
    pub points: Option<Vec<Vec<i64>>>,
    pub wbox: WBox,
}

// ---------------------------------------------------------------------------
// integer roots of monic univariates

trait Coef: Clone + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn nil() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul_small(&self, k: i128) -> Option<Self>;
    fn signum(&self) -> i8;
}

impl Coef for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn nil() -> Self {
        0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul_small(&self, k: i128) -> Option<Self> {
        self.checked_mul(k)
    }
    fn signum(&self) -> i8 {
        i128::signum(*self) as i8
    }
}

impl Coef for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn nil() -> Self {
        Zero::zero()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul_small(&self, k: i128) -> Option<Self> {
        Some(self * k)
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

fn horner<T: Coef>(c: &[T], y: i64) -> Option<T> {
    let mut acc = T::nil();
    for a in c.iter().rev() {
        acc = acc.mul_small(y as i128)?.add(a)?;
    }
    Some(acc)
}

// Coefficients of q(y+1) - q(y).
fn forward_difference<T: Coef>(c: &[T]) -> Option<Vec<T>> {
    let deg = c.len() - 1;
    let mut out = vec![T::nil(); deg];
    let mut binom = vec![1i128];
    for (i, ci) in c.iter().enumerate().skip(1) {
        // binom holds row i-1; advance to row i
        let mut next = vec![1i128; i + 1];
        for j in 1..i {
            next[j] = binom[j - 1].checked_add(binom[j])?;
        }
        binom = next;
        for (j, slot) in out.iter_mut().enumerate().take(i) {
            *slot = slot.add(&ci.mul_small(binom[j])?)?;
        }
    }
    Some(out)
}

// Smallest y in [lo, hi] with pred(y), or hi + 1; pred must be monotone
// (false then true).
fn first_true(lo: i64, hi: i64, mut pred: impl FnMut(i64) -> Option<bool>) -> Option<i64> {
    let (mut a, mut b) = (lo, hi + 1);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid)? {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    Some(a)
}

// Maximal integer intervals on which q is monotone, as (start, end,
// nondecreasing). Adjacent pieces share endpoints.
fn monotone_pieces<T: Coef>(c: &[T], lo: i64, hi: i64) -> Option<Vec<(i64, i64, bool)>> {
    let deg = c.len() - 1;
    if deg == 0 || lo == hi {
        return Some(vec![(lo, hi, true)]);
    }
    if deg == 1 {
        return Some(vec![(lo, hi, c[1].signum() > 0)]);
    }
    let dc = forward_difference(c)?;
    let mut out: Vec<(i64, i64, bool)> = Vec::new();
    let mut push = |s: i64, t: i64, inc: bool| {
        if s > t {
            return;
        }
        if let Some(last) = out.last_mut() {
            if last.2 == inc && last.1 == s {
                last.1 = t;
                return;
            }
        }
        out.push((s, t, inc));
    };
    for (s, t, inc) in monotone_pieces(&dc, lo, hi - 1)? {
        // On [s, t] the difference is monotone, so its sign changes once.
        let k = if inc {
            first_true(s, t, |y| Some(horner(&dc, y)?.signum() > 0))?
        } else {
            first_true(s, t, |y| Some(horner(&dc, y)?.signum() < 0))?
        };
        push(s, k, !inc);
        push(k, t + 1, inc);
    }
    Some(out)
}

fn roots_in<T: Coef>(c: &[T], lo: i64, hi: i64) -> Option<Vec<i64>> {
    if lo > hi {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    for (a, b, inc) in monotone_pieces(c, lo, hi)? {
        let start = if inc {
            first_true(a, b, |y| Some(horner(c, y)?.signum() >= 0))?
        } else {
            first_true(a, b, |y| Some(horner(c, y)?.signum() <= 0))?
        };
        let mut y = start;
        while y <= b && horner(c, y)?.signum() == 0 {
            roots.push(y);
            y += 1;
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Some(roots)
}

/// Integer roots in `[-bound, bound]` of the polynomial with ascending
/// coefficients `coeffs`, whose leading coefficient must be positive.
/// Machine arithmetic is tried first, with an exact fallback on overflow.
pub fn integer_roots_dense(coeffs: &[BigInt], bound: i64) -> Vec<i64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.len() == 1 {
        // constant: either everything or nothing, never asked for here
        return if c[0].is_zero() { (-bound..=bound).collect() } else { Vec::new() };
    }
    let small: Option<Vec<i128>> = c.iter().map(i128::from_big).collect();
    if let Some(r) = small.and_then(|s| roots_in(&s, -bound, bound)) {
        return r;
    }
    roots_in(&c, -bound, bound).expect("exact arithmetic cannot overflow")
}

/// All integers `y` with `p(y) = 0` and `|y| ≤ bound`, ascending, for a
/// monic univariate `p` of degree at least 1.
pub fn integer_roots_monic(p: &IntPolynomial, bound: &BigInt) -> Result<Vec<BigInt>, PolyError> {
    let vars: Vec<usize> = (0..p.arity()).filter(|&v| p.depends_on(v)).collect();
    if vars.len() != 1 {
        return Err(PolyError::InvalidArgument(
            "expected a univariate polynomial of degree at least 1".into(),
        ));
    }
    let coeffs = p.to_dense_univariate(vars[0]).expect("single variable");
    if !coeffs.last().is_some_and(One::is_one) {
        return Err(PolyError::InvalidArgument("polynomial is not monic".into()));
    }
    if bound.is_negative() {
        return Err(PolyError::InvalidArgument("negative bound".into()));
    }
    // Cauchy: every root has |y| ≤ 1 + max |c_i|.
    let cauchy = coeffs.iter().map(|c| c.abs()).max().unwrap() + 1;
    let eff = bound.min(&cauchy);
    let eff = eff
        .to_i64()
        .filter(|&b| b <= COORD_LIMIT)
        .ok_or_else(|| PolyError::InvalidArgument("root bound too large".into()))?;
    Ok(integer_roots_dense(&coeffs, eff)
        .into_iter()
        .map(BigInt::from)
        .collect())
}

// ---------------------------------------------------------------------------
// fast evaluation of fixed polynomials at machine-integer points

/// A polynomial compiled for repeated evaluation at `i64` points.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Vec<u32>, BigInt, Option<i128>)>,
}

impl CompiledPoly {
    pub fn new(f: &IntPolynomial) -> Self {
        CompiledPoly {
            terms: f
                .terms()
                .map(|(m, c)| (m.exps().to_vec(), c.clone(), c.to_i128()))
                .collect(),
        }
    }

    fn eval_small(&self, x: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (e, _, c) in &self.terms {
            let mut t = (*c)?;
            for (&xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.checked_mul((xi as i128).checked_pow(k)?)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    pub fn eval(&self, x: &[i64]) -> BigInt {
        if let Some(v) = self.eval_small(x) {
            return BigInt::from(v);
        }
        let mut acc = BigInt::zero();
        for (e, c, _) in &self.terms {
            let mut t = c.clone();
            for (&xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(BigInt::from(xi), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn is_zero_at(&self, x: &[i64]) -> bool {
        match self.eval_small(x) {
            Some(v) => v == 0,
            None => self.eval(x).is_zero(),
        }
    }
}

// Advances `x` through [-b, b]^len in lexicographic order.
fn odometer(x: &mut [i64], bounds: &[i64]) -> bool {
    for i in (0..x.len()).rev() {
        if x[i] < bounds[i] {
            x[i] += 1;
            return true;
        }
        x[i] = -bounds[i];
    }
    false
}

fn box_size(bounds: &[i64]) -> u128 {
    bounds
        .iter()
        .fold(1u128, |acc, &b| acc.saturating_mul(2 * b as u128 + 1))
}

/// `N_aff` and `N_cover` for a cover polynomial over a weighted box.
pub fn count_affine(
    f: &CoverPolynomial,
    wbox: &WBox,
    retain: bool,
    budget: &Budget,
) -> Result<CountResult, EnumerationError> {
    if wbox.n != f.n() || wbox.e != f.e() {
        return Err(PolyError::InvalidArgument(format!(
            "box (e={}, n={}) does not match the polynomial (e={}, n={})",
            wbox.e,
            wbox.n,
            f.e(),
            f.n()
        ))
        .into());
    }
    let n = f.n();
    let xb = vec![wbox.x_bound(); n];
    budget.check_nodes(box_size(&xb))?;
    budget.check_time()?;

    let fiber: Vec<CompiledPoly> = f
        .poly()
        .coefficients_in(0)
        .iter()
        .map(|c| CompiledPoly::new(&c.remove_var(0)))
        .collect();
    let yb = wbox.y_bound();
    let b = wbox.x_bound();

    let slices: Vec<Result<(u64, u64, Vec<Vec<i64>>), BudgetExceeded>> = (-b..=b)
        .into_par_iter()
        .map(|x1| {
            budget.check_time()?;
            let mut x = vec![-b; n];
            x[0] = x1;
            let (mut aff, mut cov, mut pts) = (0u64, 0u64, Vec::new());
            loop {
                let coeffs: Vec<BigInt> = fiber.iter().map(|c| c.eval(&x)).collect();
                let roots = integer_roots_dense(&coeffs, yb);
                if !roots.is_empty() {
                    cov += 1;
                    aff += roots.len() as u64;
                    if retain {
                        for y in roots {
                            let mut p = Vec::with_capacity(n + 1);
                            p.push(y);
                            p.extend_from_slice(&x);
                            pts.push(p);
                        }
                    }
                }
                if !odometer(&mut x[1..], &xb[1..]) {
                    break;
                }
            }
            Ok((aff, cov, pts))
        })
        .collect();

    let (mut n_aff, mut n_cover, mut points) = (0, 0, Vec::new());
    for s in slices {
        let (a, c, p) = s?;
        n_aff += a;
        n_cover += c;
        points.extend(p);
    }
    points.sort_unstable();
    Ok(CountResult {
        n_aff,
        n_cover,
        points: retain.then_some(points),
        wbox: *wbox,
    })
}

/// Writes solution tuples one per line, tab separated.
pub fn write_points<W: Write>(out: &mut W, points: &[Vec<i64>]) -> io::Result<()> {
    for p in points {
        let line: Vec<String> = p.iter().map(i64::to_string).collect();
        writeln!(out, "{}", line.join("\t"))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// weighted projective points

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WProjPoint {
    pub coords: Vec<i64>,
    pub weights: WeightVector,
    /// Every nonzero coordinate has even weight, so no sign rule applies.
    pub sign_ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WProjEnumeration {
    /// Canonical points in ascending coordinate order.
    pub points: Vec<WProjPoint>,
    /// Number of integral zeros in the box, before identification.
    pub raw_representatives: u64,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_factors(mut g: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= g {
        if g.is_multiple_of(q) {
            out.push(q);
            while g.is_multiple_of(q) {
                g /= q;
            }
        }
        q += 1;
    }
    if g > 1 {
        out.push(g);
    }
    out
}

/// Reduced, sign-normalized representative of a nonzero point.
pub fn canonicalize(coords: &[i64], w: &WeightVector) -> Result<WProjPoint, PolyError> {
    if coords.len() != w.len() {
        return Err(PolyError::ArityMismatch {
            expected: w.len(),
            found: coords.len(),
        });
    }
    if coords.iter().all(|&c| c == 0) {
        return Err(PolyError::InvalidArgument("the zero vector is not a point".into()));
    }
    let ws = w.weights();
    let mut x = coords.to_vec();
    let g = x.iter().fold(0u64, |g, &c| gcd_u64(g, c.unsigned_abs()));
    for q in prime_factors(g) {
        loop {
            let divisible = x.iter().zip(ws).all(|(&c, &wi)| {
                q.checked_pow(wi as u32)
                    .is_some_and(|qw| c.unsigned_abs() % qw == 0)
            });
            if !divisible {
                break;
            }
            for (c, &wi) in x.iter_mut().zip(ws) {
                *c /= q.pow(wi as u32) as i64;
            }
        }
    }
    let first_odd = x.iter().zip(ws).position(|(&c, &wi)| c != 0 && wi % 2 == 1);
    let sign_ambiguous = match first_odd {
        Some(i) => {
            if x[i] < 0 {
                for (c, &wi) in x.iter_mut().zip(ws) {
                    if wi % 2 == 1 {
                        *c = -*c;
                    }
                }
            }
            false
        }
        None => {
            let neg: Vec<i64> = x.iter().map(|c| -c).collect();
            if neg > x {
                x = neg;
            }
            true
        }
    };
    Ok(WProjPoint {
        coords: x,
        weights: w.clone(),
        sign_ambiguous,
    })
}

fn is_cover_weights(w: &WeightVector) -> bool {
    w.weights()[1..].iter().all(|&v| v == 1)
}

/// Canonical zeros of a weighted homogeneous `f` with `|x_i| ≤ B^{w_i}`.
pub fn enumerate_wproj_points(
    f: &IntPolynomial,
    w: &WeightVector,
    b: u64,
    exclude_sigma: bool,
    budget: &Budget,
) -> Result<WProjEnumeration, EnumerationError> {
    if f.arity() != w.len() {
        return Err(PolyError::ArityMismatch {
            expected: w.len(),
            found: f.arity(),
        }
        .into());
    }
    if !f.is_weighted_homogeneous(w) {
        return Err(PolyError::NotHomogeneous.into());
    }
    if exclude_sigma && !is_cover_weights(w) {
        return Err(PolyError::InvalidArgument(
            "singular-locus exclusion is only available for weights (e, 1, ..., 1)".into(),
        )
        .into());
    }
    if b == 0 {
        return Err(PolyError::InvalidArgument("height bound must be at least 1".into()).into());
    }
    let bounds: Vec<i64> = w
        .weights()
        .iter()
        .map(|&wi| {
            (b as u128)
                .checked_pow(wi as u32)
                .filter(|&v| v <= COORD_LIMIT as u128)
                .map(|v| v as i64)
                .ok_or_else(|| PolyError::InvalidArgument(format!("B^{wi} is too large")))
        })
        .collect::<Result<_, _>>()?;
    budget.check_nodes(box_size(&bounds))?;
    budget.check_time()?;

    let cf = CompiledPoly::new(f);
    let slices: Vec<Result<(u64, Vec<WProjPoint>), EnumerationError>> = (-bounds[0]..=bounds[0])
        .into_par_iter()
        .map(|x0| {
            budget.check_time()?;
            let mut x: Vec<i64> = bounds.iter().map(|&v| -v).collect();
            x[0] = x0;
            let (mut raw, mut pts) = (0u64, Vec::new());
            loop {
                let nonzero = x.iter().any(|&c| c != 0);
                let sigma = exclude_sigma && x[1..].iter().all(|&c| c == 0);
                if nonzero && !sigma && cf.is_zero_at(&x) {
                    raw += 1;
                    pts.push(canonicalize(&x, w)?);
                }
                if !odometer(&mut x[1..], &bounds[1..]) {
                    break;
                }
            }
            Ok((raw, pts))
        })
        .collect();

    let mut raw_representatives = 0;
    let mut seen = BTreeSet::new();
    let mut points = Vec::new();
    for s in slices {
        let (r, pts) = s?;
        raw_representatives += r;
        for p in pts {
            if seen.insert(p.coords.clone()) {
                points.push(p);
            }
        }
    }
    points.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(WProjEnumeration {
        points,
        raw_representatives,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchwarzZippel {
    pub ok: bool,
    pub bound: BigInt,
    pub margin: BigInt,
}

/// Compares an observed count against `d (2B+1)^m`.
pub fn schwarz_zippel_check(d: u64, m: u32, b: u64, observed: u64) -> Result<SchwarzZippel, PolyError> {
    if d == 0 || m == 0 || b == 0 {
        return Err(PolyError::InvalidArgument("d, m and B must be at least 1".into()));
    }
    let bound = BigInt::from(d) * num_traits::pow(BigInt::from(2 * b + 1), m as usize);
    let margin = &bound - BigInt::from(observed);
    Ok(SchwarzZippel {
        ok: !margin.is_negative(),
        bound,
        margin,
    })
}
