//! Weighted monomial bases, exact auxiliary polynomials, bound expressions
//! and p-adic determinant valuations.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::linalg::{self, IntMatrix};
use crate::poly::{IntPolynomial, Monomial, PolyError, WeightVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetMethodError {
    #[error("no auxiliary polynomial up to weighted degree {m_max}")]
    Exhausted { m_max: u64 },
    #[error("point {index} does not lie on the hypersurface")]
    PointNotOnHypersurface { index: usize },
    #[error("points are not congruent modulo {p}")]
    NotCongruent { p: u64 },
    #[error("common reduction is singular modulo {p}")]
    SingularReduction { p: u64 },
    #[error("{points} points but {basis} basis monomials")]
    SizeMismatch { points: usize, basis: usize },
    #[error("unsupported bound parameters: {0}")]
    UnsupportedBound(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

// ---------------------------------------------------------------------------
// monomial bases

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub weights: WeightVector,
    /// Weighted degree (the maximum degree for cumulative bases).
    pub degree: u64,
    /// Whether every monomial up to `degree` is included.
    pub cumulative: bool,
    /// Descending in the global term order.
    pub monomials: Vec<Monomial>,
}

// Emits exponent vectors in descending lex order, bucketed by total degree.
fn push_exponents(w: &[u64], i: usize, left: u64, cur: &mut Vec<u32>, exact: bool, out: &mut [Vec<Monomial>]) {
    let emit = |cur: &Vec<u32>, out: &mut [Vec<Monomial>]| {
        let t: u32 = cur.iter().sum();
        out[t as usize].push(Monomial::new(cur.clone()));
    };
    if i == w.len() {
        if !exact || left == 0 {
            emit(cur, out);
        }
        return;
    }
    if exact && i + 1 == w.len() {
        // the last exponent is forced
        if left.is_multiple_of(w[i]) {
            cur.push((left / w[i]) as u32);
            emit(cur, out);
            cur.pop();
        }
        return;
    }
    for k in (0..=left / w[i]).rev() {
        cur.push(k as u32);
        push_exponents(w, i + 1, left - k * w[i], cur, exact, out);
        cur.pop();
    }
}

impl MonomialBasis {
    /// Monomials of weighted degree exactly `m`.
    pub fn homogeneous(w: &WeightVector, m: u64) -> Self {
        Self::build(w, m, false)
    }

    /// Monomials of weighted degree at most `m`.
    pub fn up_to(w: &WeightVector, m: u64) -> Self {
        Self::build(w, m, true)
    }

    fn build(w: &WeightVector, m: u64, cumulative: bool) -> Self {
        // total degree is at most m since every weight is at least 1
        let mut buckets = vec![Vec::new(); m as usize + 1];
        push_exponents(w.weights(), 0, m, &mut Vec::with_capacity(w.len()), !cumulative, &mut buckets);
        let mut monomials = Vec::with_capacity(buckets.iter().map(Vec::len).sum());
        for b in buckets.into_iter().rev() {
            monomials.extend(b);
        }
        MonomialBasis {
            weights: w.clone(),
            degree: m,
            cumulative,
            monomials,
        }
    }

    /// An explicit list, reordered into the global order.
    pub fn from_monomials(w: &WeightVector, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_by(|a, b| b.cmp(a));
        monomials.dedup();
        let degree = monomials.iter().map(|m| m.weighted_degree(w)).max().unwrap_or(0);
        MonomialBasis {
            weights: w.clone(),
            degree,
            cumulative: false,
            monomials,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Evaluation matrix: one row per point.
    pub fn evaluation_matrix(&self, points: &[Vec<BigInt>]) -> IntMatrix {
        points
            .par_iter()
            .map(|x| self.monomials.iter().map(|m| m.eval(x)).collect())
            .collect()
    }

    pub fn polynomial(&self, coeffs: &[BigInt]) -> IntPolynomial {
        IntPolynomial::from_terms(
            self.weights.len(),
            self.monomials
                .iter()
                .zip(coeffs)
                .map(|(m, c)| (m.exps().to_vec(), c.clone())),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonomialCount {
    pub exact: BigUint,
    /// `C(M+n, n) / |w|` with `n + 1` variables.
    pub leading_term: BigRational,
    /// `exact - leading_term`.
    pub deviation: BigRational,
    /// `exact |w| / C(M+n, n) - 1`.
    pub relative_deviation: f64,
    /// `|deviation| / C(M+n-1, n-1)`, the constant of the second-order term.
    pub second_order_ratio: f64,
    pub basis: Option<MonomialBasis>,
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Number of weighted monomials of degree `m`, by coin counting.
pub fn count_monomials(w: &WeightVector, m: u64, with_basis: bool) -> MonomialCount {
    let mut ways = vec![BigUint::zero(); m as usize + 1];
    ways[0] = BigUint::one();
    for &wi in w.weights() {
        for k in wi as usize..=m as usize {
            let prev = ways[k - wi as usize].clone();
            ways[k] += prev;
        }
    }
    let exact = ways[m as usize].clone();
    let n = w.len() as u64 - 1;
    let c = binomial(m + n, n);
    let leading_term = BigRational::new(BigInt::from(c.clone()), BigInt::from(w.product()));
    let exact_q = BigRational::from_integer(BigInt::from(exact.clone()));
    let deviation = &exact_q - &leading_term;
    let relative = BigRational::new(BigInt::from(exact.clone()) * BigInt::from(w.product()), BigInt::from(c)) - BigRational::one();
    let second = if n >= 1 {
        let c1 = binomial(m + n - 1, n - 1);
        big_to_f64(&deviation).abs() / c1.to_f64().unwrap_or(f64::INFINITY)
    } else {
        0.0
    };
    MonomialCount {
        exact,
        leading_term,
        deviation,
        relative_deviation: big_to_f64(&relative),
        second_order_ratio: second,
        basis: with_basis.then(|| MonomialBasis::homogeneous(w, m)),
    }
}

// ---------------------------------------------------------------------------
// vanishing spaces and auxiliary polynomials

#[derive(Clone, Debug)]
pub struct VanishingSpace {
    pub rank: usize,
    /// Kernel basis in free-column order, as polynomials.
    pub kernel: Vec<IntPolynomial>,
}

/// Exact space of polynomials spanned by `basis` vanishing at `points`.
pub fn vanishing_space(points: &[Vec<BigInt>], basis: &MonomialBasis) -> VanishingSpace {
    let a = basis.evaluation_matrix(points);
    let e = linalg::bareiss_echelon(a, basis.len());
    let kernel = linalg::kernel_from_echelon(&e)
        .iter()
        .map(|v| basis.polynomial(v))
        .collect();
    VanishingSpace { rank: e.rank(), kernel }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AuxMode {
    /// Weighted homogeneous bases of degree exactly M; M steps by lcm(w).
    Projective,
    /// All monomials of weighted degree at most M; M steps by 1.
    Affine,
}

#[derive(Clone, Debug)]
pub struct AuxSearchConfig {
    pub mode: AuxMode,
    pub m_start: Option<u64>,
    pub m_step: Option<u64>,
    pub m_max: u64,
    pub budget: Budget,
    /// Bound expression to report next to the result.
    pub theoretical_m: Option<f64>,
}

impl AuxSearchConfig {
    pub fn new(mode: AuxMode, m_max: u64) -> Self {
        AuxSearchConfig {
            mode,
            m_start: None,
            m_step: None,
            m_max,
            budget: Budget::unlimited(),
            theoretical_m: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStep {
    pub m: u64,
    pub columns: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Dimension of the multiples of f inside the space.
    pub multiples_of_f: usize,
    /// False when the step was settled by a rank computation modulo a
    /// large prime (which can only overestimate the kernel).
    pub exact: bool,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxSearchResult {
    pub g: IntPolynomial,
    pub m_found: u64,
    pub points_caught: usize,
    pub theoretical_m: Option<f64>,
    pub kernel_dim: usize,
    pub divisibility_checked: bool,
    pub trace: Vec<SearchStep>,
}

fn basis_for(mode: AuxMode, w: &WeightVector, m: u64) -> MonomialBasis {
    match mode {
        AuxMode::Projective => MonomialBasis::homogeneous(w, m),
        AuxMode::Affine => MonomialBasis::up_to(w, m),
    }
}

/// Smallest-degree polynomial vanishing at `points` and not divisible by
/// `f`, searching `M = start, start + step, …` up to `m_max`.
pub fn find_aux_poly(
    f: &IntPolynomial,
    w: &WeightVector,
    points: &[Vec<BigInt>],
    cfg: &AuxSearchConfig,
) -> Result<AuxSearchResult, DetMethodError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    if f.arity() != w.len() {
        return Err(PolyError::ArityMismatch { expected: w.len(), found: f.arity() }.into());
    }
    if cfg.mode == AuxMode::Projective && !f.is_weighted_homogeneous(w) {
        return Err(PolyError::NotHomogeneous.into());
    }
    for (index, x) in points.iter().enumerate() {
        if x.len() != w.len() {
            return Err(PolyError::ArityMismatch { expected: w.len(), found: x.len() }.into());
        }
        if !f.eval(x).is_zero() {
            return Err(DetMethodError::PointNotOnHypersurface { index });
        }
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    if pts.is_empty() {
        return Ok(AuxSearchResult {
            g: IntPolynomial::one(w.len()),
            m_found: 0,
            points_caught: 0,
            theoretical_m: cfg.theoretical_m,
            kernel_dim: 1,
            divisibility_checked: !f.is_constant(),
            trace: Vec::new(),
        });
    }

    let df = f.weighted_degree(w).unwrap();
    let (start, step) = match cfg.mode {
        AuxMode::Projective => (cfg.m_start.unwrap_or(w.lcm()), cfg.m_step.unwrap_or(w.lcm())),
        AuxMode::Affine => (cfg.m_start.unwrap_or(0), cfg.m_step.unwrap_or(1)),
    };
    if step == 0 {
        return Err(PolyError::InvalidArgument("degree step must be positive".into()).into());
    }
    let mut trace = Vec::new();
    let mut m = start;
    while m <= cfg.m_max {
        cfg.budget.check_time()?;
        let t0 = Instant::now();
        let basis = basis_for(cfg.mode, w, m);
        let cols = basis.len();
        let multiples = if m >= df { basis_for(cfg.mode, w, m - df).len() } else { 0 };
        if cols == 0 {
            m += step;
            continue;
        }
        cfg.budget.check_nodes((cols as u128) * (pts.len() as u128))?;
        let a = basis.evaluation_matrix(&pts);

        let screen_rank = linalg::rank_mod_p(&a, cols, linalg::SCREEN_PRIME);
        if cols - screen_rank <= multiples {
            // the exact kernel is at most this large and already contains
            // every multiple of f
            trace.push(SearchStep {
                m,
                columns: cols,
                rank: screen_rank,
                kernel_dim: cols - screen_rank,
                multiples_of_f: multiples,
                exact: false,
                elapsed_ms: t0.elapsed().as_millis() as u64,
            });
            m += step;
            continue;
        }

        let e = linalg::bareiss_echelon(a.clone(), cols);
        let kernel_dim = cols - e.rank();
        trace.push(SearchStep {
            m,
            columns: cols,
            rank: e.rank(),
            kernel_dim,
            multiples_of_f: multiples,
            exact: true,
            elapsed_ms: t0.elapsed().as_millis() as u64,
        });
        for j in e.free_columns() {
            let v = linalg::kernel_from_echelon_column(&e, j);
            let g = basis.polynomial(&v);
            if g.divisible_by(f) {
                continue;
            }
            let g = g.primitive_part();
            let coeffs: Vec<BigInt> = basis.monomials.iter().map(|mo| g.coeff(mo)).collect();
            assert!(
                linalg::mat_vec(&a, &coeffs).iter().all(Zero::is_zero),
                "kernel vector fails to vanish"
            );
            return Ok(AuxSearchResult {
                g,
                m_found: m,
                points_caught: pts.len(),
                theoretical_m: cfg.theoretical_m,
                kernel_dim,
                divisibility_checked: true,
                trace,
            });
        }
        m += step;
    }
    Err(DetMethodError::Exhausted { m_max: cfg.m_max })
}

// ---------------------------------------------------------------------------
// bound expressions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Integral points on a weighted affine curve: `d^4 B^{1/d} log B`.
    Curve,
    /// Auxiliary degree for surfaces in `Y, X1, X2`: `d^{7/2} B^{1/√d} log B`.
    Surface,
    /// Weighted projective hypersurface with weights `(e, 1, …, 1)` on
    /// `n + 1` variables.
    GeneralProjective,
    /// Affine hypersurface in `n` variables with weights `(e, 1, …, 1)`.
    GeneralAffine,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub d: u64,
    pub e: u64,
    pub n: u64,
    pub b: u64,
    /// Coefficient norm (of the top part for the affine kind); at least 1.
    pub norm_f: f64,
    pub b_f: f64,
}

impl BoundParams {
    pub fn simple(d: u64, b: u64) -> Self {
        BoundParams { d, e: 1, n: 2, b, norm_f: 1.0, b_f: 1.0 }
    }

    fn dimension(&self, kind: BoundKind) -> Result<f64, DetMethodError> {
        if self.n < 2 {
            return Err(DetMethodError::UnsupportedBound(format!("{kind:?} needs n >= 2")));
        }
        Ok((self.n - 1) as f64)
    }
}

/// Exponent of `B` in the main term of the bound.
pub fn bound_exponent(kind: BoundKind, p: &BoundParams) -> Result<f64, DetMethodError> {
    let d = p.d as f64;
    Ok(match kind {
        BoundKind::Curve => 1.0 / d,
        BoundKind::Surface => 1.0 / d.sqrt(),
        BoundKind::GeneralProjective => {
            let m = p.dimension(kind)?;
            (m + 1.0) / m * (p.e as f64).powf(1.0 / m) / d.powf(1.0 / m)
        }
        BoundKind::GeneralAffine => {
            let m = p.dimension(kind)?;
            (p.e as f64).powf(1.0 / m) / d.powf(1.0 / m)
        }
    })
}

/// The bound expression with every implicit constant set to 1.
pub fn theoretical_bound(kind: BoundKind, p: &BoundParams) -> Result<f64, DetMethodError> {
    if p.b < 2 {
        return Err(DetMethodError::UnsupportedBound("B must be at least 2".into()));
    }
    if p.d == 0 || p.e == 0 {
        return Err(DetMethodError::UnsupportedBound("d and e must be positive".into()));
    }
    if p.norm_f < 1.0 || p.b_f < 0.0 {
        return Err(DetMethodError::UnsupportedBound("norm must be at least 1".into()));
    }
    let d = p.d as f64;
    let b = p.b as f64;
    let lb = b.ln();
    let x = bound_exponent(kind, p)?;
    Ok(match kind {
        BoundKind::Curve => d.powi(4) * b.powf(x) * lb,
        BoundKind::Surface => d.powf(3.5) * b.powf(x) * lb,
        BoundKind::GeneralProjective => {
            let m = p.dimension(kind)?;
            let wm = (p.e as f64).powf(1.0 / m);
            let damp = p.norm_f.powf(wm / (m * d.powf(1.0 + 1.0 / m)));
            d.powf(4.0 - 1.0 / m) * b.powf(x) * p.b_f / damp + d * d * lb + d.powf(4.0 - 1.0 / m)
        }
        BoundKind::GeneralAffine => {
            let m = p.dimension(kind)?;
            let wm = (p.e as f64).powf(1.0 / m);
            let damp = p.norm_f.powf(wm / (m * d.powf(1.0 + 1.0 / m)));
            let num = (p.norm_f.ln() + d * lb + d * d).min(d * d * p.b_f);
            d.powf(2.0 - 1.0 / m) * b.powf(x) * num / damp + d.powf(4.0 - 1.0 / m) * lb
        }
    })
}

// ---------------------------------------------------------------------------
// p-adic determinant check

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PadicCheckResult {
    pub p: u64,
    pub s: usize,
    /// Dimension used in the lower bound.
    pub dimension: u32,
    pub determinant: String,
    /// `None` when the determinant vanishes.
    pub observed_valuation: Option<u32>,
    /// `(m!)^{1/m} (m/(m+1)) s^{1+1/m}` with multiplicity one.
    pub lower_bound: f64,
    /// Allowance for the lower-order term, pinned to `s`.
    pub slack: f64,
    /// `max(0, lower_bound - observed)`.
    pub deficit: f64,
    pub vacuous: bool,
    /// Vacuous, or observed ≥ floor(lower_bound) - slack.
    pub consistent: bool,
}

pub fn padic_lower_bound(m: u32, s: usize) -> f64 {
    let m = m as f64;
    let fact: f64 = (1..=m as u64).map(|k| k as f64).product();
    fact.powf(1.0 / m) * (m / (m + 1.0)) * (s as f64).powf(1.0 + 1.0 / m)
}

/// Valuation at `p` of the determinant of basis monomials evaluated at
/// points sharing one smooth reduction modulo `p`.
pub fn p_adic_det_check(
    f: &IntPolynomial,
    w: &WeightVector,
    p: u64,
    points: &[Vec<BigInt>],
    basis: &MonomialBasis,
) -> Result<PadicCheckResult, DetMethodError> {
    if points.len() != basis.len() || points.is_empty() {
        return Err(DetMethodError::SizeMismatch { points: points.len(), basis: basis.len() });
    }
    if p < 2 {
        return Err(PolyError::InvalidArgument("p must be prime".into()).into());
    }
    let pb = BigInt::from(p);
    for (index, x) in points.iter().enumerate() {
        if x.len() != f.arity() {
            return Err(PolyError::ArityMismatch { expected: f.arity(), found: x.len() }.into());
        }
        if !f.eval(x).is_zero() {
            return Err(DetMethodError::PointNotOnHypersurface { index });
        }
    }
    let base: Vec<BigInt> = points[0].iter().map(|c| c.mod_floor(&pb)).collect();
    if points
        .iter()
        .any(|x| x.iter().zip(&base).any(|(c, r)| &c.mod_floor(&pb) != r))
    {
        return Err(DetMethodError::NotCongruent { p });
    }
    let smooth = (0..f.arity()).any(|v| !f.partial_derivative(v).eval(&base).mod_floor(&pb).is_zero());
    if !smooth {
        return Err(DetMethodError::SingularReduction { p });
    }

    let projective = f.is_weighted_homogeneous(w)
        && basis
            .monomials
            .iter()
            .all(|m| m.weighted_degree(w) == basis.monomials[0].weighted_degree(w));
    let dimension = if projective && f.arity() >= 3 { f.arity() - 2 } else { f.arity() - 1 } as u32;

    let det = linalg::determinant(&basis.evaluation_matrix(points));
    let s = points.len();
    let lower_bound = padic_lower_bound(dimension.max(1), s);
    let slack = s as f64;
    let observed = linalg::valuation(&det, p);
    let (deficit, consistent) = match observed {
        None => (0.0, true),
        Some(v) => ((lower_bound - v as f64).max(0.0), v as f64 >= lower_bound.floor() - slack),
    };
    Ok(PadicCheckResult {
        p,
        s,
        dimension,
        determinant: det.to_string(),
        observed_valuation: observed,
        lower_bound,
        slack,
        deficit,
        vacuous: observed.is_none(),
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|x| x.iter().map(|&c| BigInt::from(c)).collect()).collect()
    }

    #[test]
    fn bases_come_out_in_global_order() {
        for w in [vec![1, 1, 1], vec![3, 2, 1], vec![2, 1, 1, 5]] {
            let w = WeightVector::new(w).unwrap();
            for m in [0, 1, 7, 12] {
                for b in [MonomialBasis::homogeneous(&w, m), MonomialBasis::up_to(&w, m)] {
                    let mut sorted = b.monomials.clone();
                    sorted.sort_by(|x, y| y.cmp(x));
                    sorted.dedup();
                    assert_eq!(b.monomials, sorted);
                }
            }
        }
    }

    #[test]
    fn monomial_count_examples() {
        let w111 = WeightVector::standard(3);
        assert_eq!(count_monomials(&w111, 2, false).exact, BigUint::from(6u32));
        let w211 = WeightVector::new(vec![2, 1, 1]).unwrap();
        let c = count_monomials(&w211, 2, true);
        assert_eq!(c.exact, BigUint::from(4u32));
        let b: Vec<Vec<u32>> = c.basis.unwrap().monomials.iter().map(|m| m.exps().to_vec()).collect();
        // global order ranks by total degree first, so Y comes last
        assert_eq!(b, vec![vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2], vec![1, 0, 0]]);
        let w21 = WeightVector::new(vec![2, 1]).unwrap();
        let c = count_monomials(&w21, 100, false);
        assert_eq!(c.exact, BigUint::from(51u32));
        assert_eq!(c.leading_term, BigRational::new(BigInt::from(101), BigInt::from(2)));
        assert_eq!(c.deviation, BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn cumulative_basis() {
        let w = WeightVector::standard(3);
        let b = MonomialBasis::up_to(&w, 2);
        assert_eq!(b.len(), 10);
        assert_eq!(b.monomials[0].exps(), &[2, 0, 0]);
        assert_eq!(b.monomials[9].exps(), &[0, 0, 0]);
    }

    #[test]
    fn aux_empty_points() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let w = WeightVector::standard(3);
        let r = find_aux_poly(&f, &w, &[], &AuxSearchConfig::new(AuxMode::Affine, 10)).unwrap();
        assert_eq!((r.m_found, r.g.clone()), (0, IntPolynomial::one(3)));
    }

    #[test]
    fn aux_origin_gives_y() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let w = WeightVector::standard(3);
        let origin = pts(&[&[0, 0, 0]]);
        for mode in [AuxMode::Projective, AuxMode::Affine] {
            let mut cfg = AuxSearchConfig::new(mode, 10);
            cfg.m_start = Some(1);
            let r = find_aux_poly(&f, &w, &origin, &cfg).unwrap();
            assert_eq!(r.m_found, 1);
            assert_eq!(r.g, IntPolynomial::var(3, 0));
        }
    }

    #[test]
    fn aux_box_points() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let w = WeightVector::standard(3);
        let mut box_pts = Vec::new();
        for y in -1..=1i64 {
            for a in -1..=1i64 {
                for b in -1..=1i64 {
                    if y * y == a * b {
                        box_pts.push(vec![y, a, b]);
                    }
                }
            }
        }
        assert_eq!(box_pts.len(), 9);
        let points: Vec<Vec<BigInt>> = box_pts.iter().map(|x| x.iter().map(|&c| BigInt::from(c)).collect()).collect();
        let r = find_aux_poly(&f, &w, &points, &AuxSearchConfig::new(AuxMode::Affine, 10)).unwrap();
        for x in &points {
            assert!(r.g.eval(x).is_zero());
        }
        assert!(!r.g.divisible_by(&f));
        assert!(r.g.is_primitive());
        assert!(r.g.leading_term().unwrap().1 > &BigInt::zero());
        assert!(r.divisibility_checked);
    }

    #[test]
    fn aux_rejects_points_off_the_surface() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let w = WeightVector::standard(3);
        let bad = pts(&[&[1, 1, 2]]);
        assert!(matches!(
            find_aux_poly(&f, &w, &bad, &AuxSearchConfig::new(AuxMode::Affine, 4)),
            Err(DetMethodError::PointNotOnHypersurface { index: 0 })
        ));
    }

    #[test]
    fn bound_examples() {
        let v = theoretical_bound(BoundKind::Curve, &BoundParams::simple(2, 16)).unwrap();
        assert!((v - 16.0 * 4.0 * 16f64.ln()).abs() < 1e-9);
        assert!((v - 177.4).abs() < 0.1);
        assert!(theoretical_bound(BoundKind::Surface, &BoundParams::simple(4, 1)).is_err());
        let p = BoundParams { d: 3, e: 1, n: 2, b: 10, norm_f: 1.0, b_f: 1.0 };
        assert!((bound_exponent(BoundKind::GeneralProjective, &p).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let s = theoretical_bound(BoundKind::Surface, &BoundParams::simple(2, 4)).unwrap();
        assert!((s - 2f64.powf(3.5) * 4f64.powf(0.5f64.sqrt()) * 4f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn padic_examples() {
        let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
        let w = WeightVector::standard(3);
        let basis = MonomialBasis::from_monomials(&w, vec![Monomial::one(3), Monomial::var(3, 0)]);
        let r = p_adic_det_check(&f, &w, 5, &pts(&[&[1, 1, 1], &[6, 6, 6]]), &basis).unwrap();
        assert_eq!(r.determinant.trim_start_matches('-'), "5");
        assert_eq!(r.observed_valuation, Some(1));
        assert!(r.consistent && !r.vacuous);
        let swapped = p_adic_det_check(&f, &w, 5, &pts(&[&[6, 6, 6], &[1, 1, 1]]), &basis).unwrap();
        assert_eq!(swapped.observed_valuation, Some(1));
        assert_eq!(
            swapped.determinant.parse::<BigInt>().unwrap(),
            -r.determinant.parse::<BigInt>().unwrap()
        );

        let one = MonomialBasis::from_monomials(&w, vec![Monomial::one(3)]);
        let r = p_adic_det_check(&f, &w, 5, &pts(&[&[1, 1, 1]]), &one).unwrap();
        assert_eq!(r.observed_valuation, Some(0));
        assert!(r.lower_bound - r.slack <= 1.0);

        assert!(matches!(
            p_adic_det_check(&f, &w, 5, &pts(&[&[1, 1, 1], &[2, 2, 2]]), &basis),
            Err(DetMethodError::NotCongruent { p: 5 })
        ));
        assert!(matches!(
            p_adic_det_check(&f, &w, 5, &pts(&[&[0, 0, 0], &[0, 5, 0]]), &basis),
            Err(DetMethodError::SingularReduction { p: 5 })
        ));
    }

    use proptest::prelude::*;

    fn surface_points(raw: &[(i64, i64, i64)]) -> Vec<Vec<BigInt>> {
        // (k a b, k a^2, k b^2) lies on Y^2 = X1 X2
        raw.iter()
            .map(|&(k, a, b)| vec![BigInt::from(k * a * b), BigInt::from(k * a * a), BigInt::from(k * b * b)])
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn exact_count_matches_enumeration(ws in proptest::collection::vec(1u64..5, 2..4), m in 0u64..25) {
            let Ok(w) = WeightVector::new(ws) else { return Ok(()); };
            let c = count_monomials(&w, m, true);
            prop_assert_eq!(c.exact.to_usize().unwrap(), c.basis.unwrap().len());
        }

        #[test]
        fn aux_poly_invariants(raw in proptest::collection::vec((-2i64..3, -2i64..3, -2i64..3), 1..7)) {
            let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
            let w = WeightVector::standard(3);
            let points = surface_points(&raw);
            let r = find_aux_poly(&f, &w, &points, &AuxSearchConfig::new(AuxMode::Affine, 12)).unwrap();
            for x in &points {
                prop_assert!(r.g.eval(x).is_zero());
            }
            prop_assert!(r.g.is_primitive());
            prop_assert!(!r.g.reduce_by(&f, &w).is_zero());
            // enlarging the point set never lowers the degree
            let fewer = &points[..points.len() / 2];
            let r2 = find_aux_poly(&f, &w, fewer, &AuxSearchConfig::new(AuxMode::Affine, 12)).unwrap();
            prop_assert!(r2.m_found <= r.m_found);
        }

        #[test]
        fn kernel_dimension_at_saturation(raw in proptest::collection::vec((-3i64..4, -3i64..4, -3i64..4), 1..6), m in 2u64..4) {
            let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
            let w = WeightVector::standard(3);
            let mut points = surface_points(&raw);
            points.sort();
            points.dedup();
            let basis = MonomialBasis::homogeneous(&w, m);
            let vs = vanishing_space(&points, &basis);
            if vs.rank == points.len() {
                prop_assert_eq!(vs.kernel.len(), basis.len() - points.len());
            }
            // f times each monomial of degree m - 2 is in the kernel
            let a = basis.evaluation_matrix(&points);
            for mo in &MonomialBasis::homogeneous(&w, m - 2).monomials {
                let g = f.mul_monomial(mo);
                let v: Vec<BigInt> = basis.monomials.iter().map(|b| g.coeff(b)).collect();
                prop_assert!(linalg::mat_vec(&a, &v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn padic_families_are_consistent(
            pi in 0usize..3, k0 in 1i64..4, a0 in 0i64..4, b0 in 1i64..4,
            shifts in proptest::collection::vec((0i64..3, 0i64..3, 0i64..3), 3),
        ) {
            let p = [5i64, 7, 11][pi];
            let f = parse_poly("Y^2 - X1*X2", 3).unwrap();
            let w = WeightVector::standard(3);
            let raw: Vec<(i64, i64, i64)> = shifts
                .iter()
                .enumerate()
                .map(|(i, &(u, v, t))| (k0 + p * u, a0 + p * (v + i as i64), b0 + p * t))
                .collect();
            let points = surface_points(&raw);
            let basis3 = MonomialBasis::up_to(&w, 1);
            let basis3 = MonomialBasis::from_monomials(&w, basis3.monomials[1..].to_vec());
            let r = p_adic_det_check(&f, &w, p as u64, &points, &basis3).unwrap();
            prop_assert!(r.consistent);
            let basis2 = MonomialBasis::from_monomials(&w, vec![Monomial::one(3), Monomial::var(3, 0)]);
            let r2 = p_adic_det_check(&f, &w, p as u64, &points[..2], &basis2).unwrap();
            prop_assert!(r2.vacuous || r2.observed_valuation.unwrap() >= 1);
        }
    }
}
