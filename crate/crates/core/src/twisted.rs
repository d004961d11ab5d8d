//! Twisted lines on surfaces `F(Y, X1, X2) = 0` with weights `(e, 1, 1)`.
//!
//! A twisted line is a curve `t ↦ (y(t), a1 + v1·t, a2 + v2·t)` with
//! `deg y ≤ e` on which `F` vanishes identically. Its direction is
//! `(w_e : v1 : v2)`, where `w_e` is the coefficient of `t^e` in `y`.
//!
//! Lines are stored in a canonical parametrization: `(v1, v2)` is
//! lexicographically positive and `t` is shifted so the first nonzero
//! component of `v` has offset zero. Two lines are the same curve exactly
//! when their canonical forms agree.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::enumerate::{count_affine, integer_roots_monic, EnumerationError, WBox};
use crate::poly::{CoverPolynomial, IntPolynomial, Monomial, PolyError, WeightVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistedError {
    #[error("the surface must have two X variables, found {0}")]
    NotASurface(usize),
    #[error("direction ({0}, {1}) is not a pair of coprime integers")]
    BadDirection(i64, i64),
    #[error("parametrization has {found} coefficients for y, at most {max} allowed")]
    DegreeTooHigh { found: usize, max: usize },
    #[error("the curve does not lie on the surface")]
    NotOnSurface,
    #[error("line was built for e = {line}, asked for e = {asked}")]
    WeightMismatch { line: u32, asked: u32 },
    #[error("count {exact} exceeds the per-line bound {bound}")]
    BoundViolated { exact: u64, bound: f64 },
    #[error("direction {direction} carries {count} lines, more than {cap}")]
    TooManyLines { direction: String, count: usize, cap: u128 },
    #[error("need {needed} samples, got {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("repeated sample parameter {0}")]
    DuplicateParameter(i64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

fn q(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over Q, lowest degree first

type QPoly = Vec<BigRational>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qadd_assign(acc: &mut QPoly, p: &QPoly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigRational::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

fn qmul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qeval(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

/// `p(s·t + c)`.
fn qcompose_affine(p: &[BigRational], s: &BigRational, c: &BigRational) -> QPoly {
    let lin = vec![c.clone(), s.clone()];
    let mut out: QPoly = Vec::new();
    for coef in p.iter().rev() {
        out = qmul(&out, &lin);
        qadd_assign(&mut out, &vec![coef.clone()]);
    }
    out
}

fn powers(base: &QPoly, max: u32) -> Vec<QPoly> {
    let mut v = vec![vec![BigRational::one()]];
    for k in 1..=max as usize {
        let next = qmul(&v[k - 1], base);
        v.push(next);
    }
    v
}

/// `F(y(t), x1(t), x2(t))` as a polynomial in `t`.
fn substitute_curve(f: &IntPolynomial, y: &QPoly, x1: &QPoly, x2: &QPoly) -> QPoly {
    let py = powers(y, f.degree_in(0).unwrap_or(0));
    let p1 = powers(x1, f.degree_in(1).unwrap_or(0));
    let p2 = powers(x2, f.degree_in(2).unwrap_or(0));
    let mut acc = Vec::new();
    for (m, c) in f.terms() {
        let e = m.exps();
        let term = qmul(&qmul(&py[e[0] as usize], &p1[e[1] as usize]), &p2[e[2] as usize]);
        let cq = q(c.clone());
        qadd_assign(&mut acc, &term.into_iter().map(|x| x * &cq).collect());
    }
    trim(acc)
}

// ---------------------------------------------------------------------------

fn lex_positive(v: [i64; 2]) -> bool {
    v[0] > 0 || (v[0] == 0 && v[1] > 0)
}

fn check_direction(v: [i64; 2]) -> Result<(), TwistedError> {
    if v == [0, 0] || v[0].gcd(&v[1]) != 1 {
        return Err(TwistedError::BadDirection(v[0], v[1]));
    }
    Ok(())
}

fn check_surface(f: &CoverPolynomial) -> Result<(), TwistedError> {
    if f.n() != 2 {
        return Err(TwistedError::NotASurface(f.n()));
    }
    Ok(())
}

/// Point `(w_e : v1 : v2)` of the weighted projective line at infinity,
/// canonical under `λ = -1`: `(v1, v2)` lexicographically positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub we: BigInt,
    pub v: [i64; 2],
}

impl Direction {
    pub fn canonical(we: BigInt, v: [i64; 2], e: u32) -> Self {
        if lex_positive(v) || v == [0, 0] {
            Direction { we, v }
        } else {
            let we = if e % 2 == 1 { -we } else { we };
            Direction { we, v: [-v[0], -v[1]] }
        }
    }

    /// `max{|w_e|^{1/e}, |v1|, |v2|}`.
    pub fn height(&self, e: u32) -> f64 {
        let w = self.we.abs().to_f64().unwrap_or(f64::INFINITY).powf(1.0 / e as f64);
        w.max(self.v[0].abs() as f64).max(self.v[1].abs() as f64)
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}:{}:{})", self.we, self.v[0], self.v[1])
    }
}

/// A twisted line on a fixed surface, in canonical parametrization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistedLine {
    e: u32,
    /// `a0, w1, …, we`
    y: Vec<BigRational>,
    a: [BigRational; 2],
    v: [i64; 2],
}

impl TwistedLine {
    /// Validates the parametrization against `f` by exact resubstitution
    /// and returns it in canonical form.
    pub fn new(
        f: &CoverPolynomial,
        y: Vec<BigRational>,
        a: [BigRational; 2],
        v: [i64; 2],
    ) -> Result<Self, TwistedError> {
        check_surface(f)?;
        check_direction(v)?;
        let e = f.e();
        if y.len() > e as usize + 1 {
            return Err(TwistedError::DegreeTooHigh {
                found: y.len(),
                max: e as usize + 1,
            });
        }
        let (mut y, mut a, mut v) = (y, a, v);
        if !lex_positive(v) {
            y = qcompose_affine(&y, &q(-1), &BigRational::zero());
            v = [-v[0], -v[1]];
        }
        let k = if v[0] != 0 { 0 } else { 1 };
        let shift = -&a[k] / q(v[k]);
        if !shift.is_zero() {
            y = qcompose_affine(&y, &BigRational::one(), &shift);
            a = [&a[0] + &shift * q(v[0]), &a[1] + &shift * q(v[1])];
        }
        y.resize(e as usize + 1, BigRational::zero());
        let line = TwistedLine { e, y, a, v };
        if !line.lies_on(f) {
            return Err(TwistedError::NotOnSurface);
        }
        debug_assert!(line.y[e as usize].is_integer());
        Ok(line)
    }

    pub fn lies_on(&self, f: &CoverPolynomial) -> bool {
        if f.n() != 2 || f.e() != self.e {
            return false;
        }
        let x1 = vec![self.a[0].clone(), q(self.v[0])];
        let x2 = vec![self.a[1].clone(), q(self.v[1])];
        substitute_curve(f.poly(), &self.y, &x1, &x2).is_empty()
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn y_coeffs(&self) -> &[BigRational] {
        &self.y
    }

    pub fn offset(&self) -> &[BigRational; 2] {
        &self.a
    }

    pub fn v(&self) -> [i64; 2] {
        self.v
    }

    pub fn direction(&self) -> Direction {
        let we = self.y[self.e as usize].to_integer();
        Direction::canonical(we, self.v, self.e)
    }

    pub fn point_at(&self, t: &BigRational) -> [BigRational; 3] {
        [
            qeval(&self.y, t),
            &self.a[0] + t * q(self.v[0]),
            &self.a[1] + t * q(self.v[1]),
        ]
    }

    /// Integral points `(y, x1, x2)` with `|y| ≤ B^e` and `|x_i| ≤ B`, sorted.
    pub fn box_points(&self, wbox: &WBox) -> Vec<[i64; 3]> {
        let (a, v) = (&self.a, self.v);
        // x integral forces t into one coset of Z, nonempty iff v2·a1 − v1·a2 ∈ Z
        let c = &a[0] * q(v[1]) - &a[1] * q(v[0]);
        if !c.is_integer() {
            return Vec::new();
        }
        let g = BigInt::from(v[0]).extended_gcd(&BigInt::from(v[1]));
        let (u1, u2) = (q(g.x), q(g.y));
        let t0 = -(&u1 * &a[0] + &u2 * &a[1]);
        let p0: Vec<BigInt> = (0..2)
            .map(|k| (&a[k] + &t0 * q(v[k])).to_integer())
            .collect();
        let b = BigInt::from(wbox.x_bound());
        let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
        for k in 0..2 {
            if v[k] == 0 {
                if p0[k].abs() > b {
                    return Vec::new();
                }
                continue;
            }
            let vk = BigInt::from(v[k]);
            let (mut l, mut h) = ((-&b - &p0[k]).div_ceil(&vk), (&b - &p0[k]).div_floor(&vk));
            if vk.is_negative() {
                l = (&b - &p0[k]).div_ceil(&vk);
                h = (-&b - &p0[k]).div_floor(&vk);
            }
            lo = Some(lo.map_or(l.clone(), |x| x.max(l)));
            hi = Some(hi.map_or(h.clone(), |x| x.min(h)));
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Vec::new();
        };
        let ybound = q(wbox.y_bound());
        let mut out = Vec::new();
        let mut s = lo;
        while s <= hi {
            let t = &t0 + q(s.clone());
            let [y, x1, x2] = self.point_at(&t);
            if y.is_integer() && y.abs() <= ybound {
                let conv = |r: &BigRational| r.to_integer().to_i64().expect("box coordinate fits");
                out.push([conv(&y), conv(&x1), conv(&x2)]);
            }
            s += 1;
        }
        out.sort();
        out
    }
}

// ---------------------------------------------------------------------------
// fitting

fn fujiwara_bound(monic: &[BigInt]) -> BigInt {
    // coefficients lowest first, monic of degree d = len - 1
    let d = monic.len() - 1;
    let mut m = BigInt::zero();
    for (i, c) in monic[..d].iter().enumerate() {
        let k = (d - i) as u32;
        let r = c.abs().nth_root(k) + 1;
        m = m.max(r);
    }
    2 * m
}

/// Rational roots of the fiber `F(Y, x1, x2)` at a rational point.
fn fiber_roots(f: &IntPolynomial, d: u32, x1: &BigRational, x2: &BigRational) -> Result<Vec<BigRational>, PolyError> {
    let mut coef = vec![BigRational::zero(); d as usize + 1];
    for (m, c) in f.terms() {
        let e = m.exps();
        coef[e[0] as usize] += q(c.clone()) * x1.pow(e[1] as i32) * x2.pow(e[2] as i32);
    }
    let den = coef.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    // Y = Z / den turns the monic fiber into an integral monic polynomial
    let ints: Vec<BigInt> = coef
        .iter()
        .enumerate()
        .map(|(i, c)| (c * q(den.pow(d - i as u32))).to_integer())
        .collect();
    let bound = fujiwara_bound(&ints);
    let p = IntPolynomial::from_terms(1, ints.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())));
    if d == 0 {
        return Ok(Vec::new());
    }
    Ok(integer_roots_monic(&p, &bound)?
        .into_iter()
        .map(|z| BigRational::new(z, den.clone()))
        .collect())
}

/// Interpolating polynomial through `(t_i, y_i)`, lowest degree first.
fn interpolate(ts: &[BigRational], ys: &[BigRational]) -> QPoly {
    let mut out: QPoly = Vec::new();
    for (i, (ti, yi)) in ts.iter().zip(ys).enumerate() {
        let mut basis: QPoly = vec![BigRational::one()];
        let mut den = BigRational::one();
        for (j, tj) in ts.iter().enumerate() {
            if i != j {
                basis = qmul(&basis, &vec![-tj.clone(), BigRational::one()]);
                den *= ti - tj;
            }
        }
        let scale = yi / den;
        qadd_assign(&mut out, &basis.into_iter().map(|c| c * &scale).collect());
    }
    out
}

/// All twisted lines lying over the plane line `a + t·v`.
pub fn fit_twisted_lines(
    f: &CoverPolynomial,
    a: [BigRational; 2],
    v: [i64; 2],
) -> Result<Vec<TwistedLine>, TwistedError> {
    check_surface(f)?;
    check_direction(v)?;
    let (d, e) = (f.d(), f.e() as usize);
    let samples: Vec<BigRational> = (0..=e as i64 + 1).map(q).collect();
    let mut fibers = Vec::with_capacity(samples.len());
    for t in &samples {
        let x1 = &a[0] + t * q(v[0]);
        let x2 = &a[1] + t * q(v[1]);
        let r = fiber_roots(f.poly(), d, &x1, &x2)?;
        if r.is_empty() {
            return Ok(Vec::new());
        }
        fibers.push(r);
    }
    let (fit, check) = fibers.split_at(e + 1);
    let mut found = BTreeSet::new();
    let mut choice = vec![0usize; e + 1];
    loop {
        let ys: Vec<BigRational> = choice.iter().zip(fit).map(|(&c, r)| r[c].clone()).collect();
        let mut y = interpolate(&samples[..=e], &ys);
        y.resize(e + 1, BigRational::zero());
        if check[0].contains(&qeval(&y, &samples[e + 1])) {
            if let Ok(line) = TwistedLine::new(f, y, a.clone(), v) {
                found.insert(line);
            }
        }
        // odometer over root choices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(found.into_iter().collect());
            }
            choice[k] += 1;
            if choice[k] < fit[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// directions

fn check_top(top: &IntPolynomial, e: u32) -> Result<u32, TwistedError> {
    if top.arity() != 3 {
        return Err(TwistedError::NotASurface(top.arity().saturating_sub(1)));
    }
    let w = WeightVector::cover(e as u64, 2)?;
    if !top.is_weighted_homogeneous(&w) {
        return Err(PolyError::NotHomogeneous.into());
    }
    let deg = top.weighted_degree(&w).ok_or(PolyError::ZeroPolynomial)?;
    let d = (deg / e as u64) as u32;
    if deg % e as u64 != 0 || !top.coeff(&Monomial::new(vec![d, 0, 0])).is_one() {
        return Err(PolyError::NotCoverForm("top part is not monic in Y".into()).into());
    }
    Ok(d)
}

/// Canonical directions `(w : v1 : v2)` on `F_top = 0` with
/// `|w| ≤ B^e`, `|v_i| ≤ B` and `gcd(v1, v2) = 1`, sorted.
pub fn enumerate_directions(top: &IntPolynomial, e: u32, b: u64) -> Result<Vec<Direction>, TwistedError> {
    let d = check_top(top, e)?;
    let wbox = WBox::new(e, b, 2)?;
    let bound = BigInt::from(wbox.y_bound());
    let bi = b as i64;
    let mut out: Vec<Direction> = (0..=bi)
        .into_par_iter()
        .map(|v1| -> Result<Vec<Direction>, TwistedError> {
            let mut local = Vec::new();
            let lo = if v1 == 0 { 1 } else { -bi };
            for v2 in lo..=bi {
                if v1.gcd(&v2) != 1 {
                    continue;
                }
                let fiber = top
                    .specialize(1, &BigInt::from(v1))
                    .specialize(2, &BigInt::from(v2));
                if d == 0 {
                    continue;
                }
                for we in integer_roots_monic(&fiber, &bound)? {
                    local.push(Direction { we, v: [v1, v2] });
                }
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    // the locus v = 0: F_top(1, 0, 0) = 1 by monicity, so nothing to add
    out.sort();
    Ok(out)
}

/// `C·e²·d³·B^{2/d}`.
pub fn direction_envelope(c: f64, e: u32, d: u32, b: u64) -> f64 {
    c * (e as f64).powi(2) * (d as f64).powi(3) * (b as f64).powf(2.0 / d as f64)
}

// ---------------------------------------------------------------------------
// counting

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineCount {
    pub exact: u64,
    pub bound: f64,
}

/// `2eB / max{|w_e|^{1/e}, |v1|, |v2|} + e`.
pub fn line_bound(dir: &Direction, e: u32, b: u64) -> f64 {
    2.0 * e as f64 * b as f64 / dir.height(e) + e as f64
}

pub fn count_on_twisted_line(line: &TwistedLine, e: u32, b: u64) -> Result<LineCount, TwistedError> {
    if line.e != e {
        return Err(TwistedError::WeightMismatch { line: line.e, asked: e });
    }
    let wbox = WBox::new(e, b, 2)?;
    let exact = line.box_points(&wbox).len() as u64;
    let bound = line_bound(&line.direction(), e, b);
    if exact as f64 > bound + 1e-9 {
        return Err(TwistedError::BoundViolated { exact, bound });
    }
    Ok(LineCount { exact, bound })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionBucket {
    pub direction: String,
    pub lines: usize,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistedAggregate {
    pub total: u64,
    pub bound: f64,
    pub lines: usize,
    pub histogram: Vec<DirectionBucket>,
    pub points: Vec<[i64; 3]>,
}

/// `(ed)^{e+4}·B + e·#I`, with an extra `log B` factor when `d = 2`.
/// The logarithm is clamped below by one so the bound stays meaningful at
/// `B < 3`.
pub fn aggregate_bound(e: u32, d: u32, b: u64, lines: usize) -> f64 {
    let base = ((e * d) as f64).powi(e as i32 + 4) * b as f64;
    let main = if d == 2 { base * (b as f64).ln().max(1.0) } else { base };
    main + e as f64 * lines as f64
}

/// `(de)^{e+1}`.
pub fn lines_per_direction_cap(d: u32, e: u32) -> u128 {
    ((d * e) as u128).pow(e + 1)
}

/// Box points on the union of `lines`, grouped by direction.
pub fn aggregate_twisted(f: &CoverPolynomial, b: u64, lines: &[TwistedLine]) -> Result<TwistedAggregate, TwistedError> {
    check_surface(f)?;
    let e = f.e();
    let wbox = WBox::new(e, b, 2)?;
    for l in lines {
        if !l.lies_on(f) {
            return Err(TwistedError::NotOnSurface);
        }
    }
    let distinct: BTreeSet<&TwistedLine> = lines.iter().collect();
    let mut union = BTreeSet::new();
    let mut buckets: BTreeMap<Direction, (usize, u64)> = BTreeMap::new();
    for l in &distinct {
        let pts = l.box_points(&wbox);
        let entry = buckets.entry(l.direction()).or_default();
        entry.0 += 1;
        entry.1 += pts.len() as u64;
        union.extend(pts);
    }
    let cap = lines_per_direction_cap(f.d(), e);
    let mut histogram = Vec::with_capacity(buckets.len());
    for (dir, (n, pts)) in buckets {
        if n as u128 > cap {
            return Err(TwistedError::TooManyLines {
                direction: dir.to_string(),
                count: n,
                cap,
            });
        }
        histogram.push(DirectionBucket {
            direction: dir.to_string(),
            lines: n,
            points: pts,
        });
    }
    Ok(TwistedAggregate {
        total: union.len() as u64,
        bound: aggregate_bound(e, f.d(), b, distinct.len()),
        lines: distinct.len(),
        histogram,
        points: union.into_iter().collect(),
    })
}

// ---------------------------------------------------------------------------
// discovery

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PlaneLine {
    v: [i64; 2],
    // v2·a1 − v1·a2, constant along the line
    c: i64,
    anchor: [i64; 2],
}

fn plane_line(p: [i64; 2], v: [i64; 2]) -> PlaneLine {
    let v = if lex_positive(v) { v } else { [-v[0], -v[1]] };
    PlaneLine {
        v,
        c: v[1] * p[0] - v[0] * p[1],
        anchor: p,
    }
}

/// Twisted lines meeting the box, found by fitting over plane lines through
/// pairs of projected box solutions and over lines with an enumerated
/// direction through each projected solution.
pub fn discover_twisted_lines(f: &CoverPolynomial, b: u64, budget: &Budget) -> Result<Vec<TwistedLine>, TwistedError> {
    check_surface(f)?;
    let wbox = WBox::new(f.e(), b, 2)?;
    let sols = count_affine(f, &wbox, true, budget)?.points.unwrap_or_default();
    let plane: Vec<[i64; 2]> = sols
        .iter()
        .map(|p| [p[1], p[2]])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dirs = enumerate_directions(f.top(), f.e(), b)?;
    let pairs = (plane.len() as u128).pow(2) / 2 + plane.len() as u128 * dirs.len() as u128;
    budget.check_nodes(pairs)?;
    // keyed by (v, c) so each plane line is fitted once
    let mut candidates: BTreeMap<([i64; 2], i64), [i64; 2]> = BTreeMap::new();
    for (i, p) in plane.iter().enumerate() {
        for r in &plane[i + 1..] {
            let (dx, dy) = (r[0] - p[0], r[1] - p[1]);
            let g = dx.gcd(&dy);
            let l = plane_line(*p, [dx / g, dy / g]);
            candidates.entry((l.v, l.c)).or_insert(l.anchor);
        }
        for dir in &dirs {
            let l = plane_line(*p, dir.v);
            candidates.entry((l.v, l.c)).or_insert(l.anchor);
        }
        budget.check_time()?;
    }
    let found: Vec<Vec<TwistedLine>> = candidates
        .into_par_iter()
        .map(|((v, _), p)| fit_twisted_lines(f, [q(p[0]), q(p[1])], v))
        .collect::<Result<_, _>>()?;
    let all: BTreeSet<TwistedLine> = found.into_iter().flatten().collect();
    Ok(all.into_iter().collect())
}

// ---------------------------------------------------------------------------

/// Leading coefficient of the degree-`e` interpolant through the first
/// `e + 1` samples.
pub fn lagrange_leading_coeff(samples: &[(i64, i64)], e: u32) -> Result<BigRational, TwistedError> {
    let k = e as usize + 1;
    if samples.len() < k {
        return Err(TwistedError::TooFewSamples {
            needed: k,
            found: samples.len(),
        });
    }
    let pts = &samples[..k];
    let mut seen = BTreeSet::new();
    for &(t, _) in pts {
        if !seen.insert(t) {
            return Err(TwistedError::DuplicateParameter(t));
        }
    }
    let mut acc = BigRational::zero();
    for (i, &(ti, yi)) in pts.iter().enumerate() {
        let den = pts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(BigInt::one(), |p, (_, &(tj, _))| p * (ti - tj));
        acc += BigRational::new(BigInt::from(yi), den);
    }
    Ok(acc)
}

/// `2(e+1)B^e / e`.
pub fn lagrange_bound(e: u32, b: u64) -> f64 {
    2.0 * (e as f64 + 1.0) * (b as f64).powi(e as i32) / e as f64
}
