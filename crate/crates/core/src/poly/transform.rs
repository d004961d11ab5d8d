use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{IntPolynomial, Monomial, PolyError, WeightVector};

/// The weighted-homogeneous pieces `f_i` of a polynomial, keyed by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedDecomposition {
    pub parts: BTreeMap<u64, IntPolynomial>,
    pub weights: WeightVector,
}

impl GradedDecomposition {
    pub fn part(&self, i: u64) -> Option<&IntPolynomial> {
        self.parts.get(&i)
    }

    /// Sum of all parts; reconstructs the decomposed polynomial.
    pub fn sum(&self, arity: usize) -> IntPolynomial {
        self.parts
            .values()
            .fold(IntPolynomial::zero(arity), |acc, p| &acc + p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradingAnalysis {
    pub weighted_degree: u64,
    pub is_homogeneous: bool,
    /// `lcm(w)` divides the weighted degree.
    pub is_full: bool,
    pub parts: GradedDecomposition,
}

pub fn analyze_grading(f: &IntPolynomial, w: &WeightVector) -> Result<GradingAnalysis, PolyError> {
    check_arity(f, w)?;
    let weighted_degree = f.weighted_degree(w).ok_or(PolyError::ZeroPolynomial)?;
    let mut parts: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for (m, c) in f.terms() {
        parts
            .entry(m.weighted_degree(w))
            .or_insert_with(|| IntPolynomial::zero(f.arity()))
            .add_term(m.clone(), c.clone());
    }
    Ok(GradingAnalysis {
        weighted_degree,
        is_homogeneous: parts.len() == 1,
        is_full: weighted_degree % w.lcm() == 0,
        parts: GradedDecomposition {
            parts,
            weights: w.clone(),
        },
    })
}

fn check_arity(f: &IntPolynomial, w: &WeightVector) -> Result<(), PolyError> {
    if f.arity() != w.len() {
        return Err(PolyError::ArityMismatch {
            expected: w.len(),
            found: f.arity(),
        });
    }
    Ok(())
}

/// A polynomial `F = F_top + F_0` in `Y, X1, …, Xn` where
/// `F_top = Y^d + Σ Y^{d-i} f_i(X)` has each `f_i` homogeneous of degree
/// `e·i` and `F_0` has weighted degree below `d·e` for weights `(e, 1, …, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPolynomial {
    n: usize,
    d: u32,
    e: u32,
    full: IntPolynomial,
    top: IntPolynomial,
    low: IntPolynomial,
}

impl CoverPolynomial {
    /// Number of `X` variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree in `Y`.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Weight of `Y`.
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.full
    }

    pub fn top(&self) -> &IntPolynomial {
        &self.top
    }

    pub fn low(&self) -> &IntPolynomial {
        &self.low
    }

    pub fn weights(&self) -> WeightVector {
        WeightVector::cover(self.e as u64, self.n).expect("cover weights are coprime")
    }

    /// `f_i`, the coefficient of `Y^{d-i}` in `F_top`, as a polynomial in
    /// the same variables (with `Y` absent).
    pub fn top_coefficient(&self, i: u32) -> IntPolynomial {
        let coeffs = self.top.coefficients_in(0);
        coeffs
            .get((self.d - i) as usize)
            .cloned()
            .unwrap_or_else(|| IntPolynomial::zero(self.n + 1))
    }
}

/// Splits `f` into its top weighted part and remainder for weights
/// `(e, 1, …, 1)` and validates the cover-form invariants. With
/// `cover_semantics`, `d < 2` is rejected; the counting routines accept
/// `d = 1`.
pub fn split_cover_form(
    f: &IntPolynomial,
    n: usize,
    e: u32,
    cover_semantics: bool,
) -> Result<CoverPolynomial, PolyError> {
    if f.arity() != n + 1 {
        return Err(PolyError::ArityMismatch {
            expected: n + 1,
            found: f.arity(),
        });
    }
    if e == 0 {
        return Err(PolyError::InvalidArgument("the Y-weight e must be >= 1".into()));
    }
    let w = WeightVector::cover(e as u64, n)?;
    let total = f.weighted_degree(&w).ok_or(PolyError::ZeroPolynomial)?;
    if total % e as u64 != 0 {
        return Err(PolyError::NotCoverForm(format!(
            "weighted degree {total} is not a multiple of e = {e}, so no monic Y^d term can lead"
        )));
    }
    let d = (total / e as u64) as u32;
    if d == 0 {
        return Err(PolyError::NotCoverForm("constant polynomial".into()));
    }
    if cover_semantics && d < 2 {
        return Err(PolyError::NotCoverForm(format!("Y-degree d = {d} < 2")));
    }
    let top = f.weighted_part(&w, total);
    let low = f - &top;
    let mut ymono = vec![0u32; n + 1];
    ymono[0] = d;
    let lead = top.coeff(&Monomial::new(ymono));
    if !lead.is_one() {
        return Err(PolyError::NotCoverForm(format!(
            "F_top is not monic in Y: coefficient of Y^{d} is {lead}"
        )));
    }
    for (m, _) in top.terms() {
        let k = m.exps()[0];
        let xdeg: u64 = m.exps()[1..].iter().map(|&x| x as u64).sum();
        if k > d || xdeg != e as u64 * (d - k) as u64 {
            return Err(PolyError::NotCoverForm(format!(
                "term with Y^{k} has X-degree {xdeg}, expected {}",
                e as u64 * (d.saturating_sub(k)) as u64
            )));
        }
    }
    if low.weighted_degree(&w).is_some_and(|dl| dl >= total) {
        return Err(PolyError::NotCoverForm("F_0 reaches the top degree".into()));
    }
    Ok(CoverPolynomial {
        n,
        d,
        e,
        full: f.clone(),
        top,
        low,
    })
}

/// Weighted homogenization with a new variable prepended at index 0 of
/// weight one.
pub fn homogenize(
    f: &IntPolynomial,
    w: &WeightVector,
) -> Result<(IntPolynomial, WeightVector), PolyError> {
    check_arity(f, w)?;
    let d = f.weighted_degree(w).ok_or(PolyError::ZeroPolynomial)?;
    let mut out = IntPolynomial::zero(f.arity() + 1);
    for (m, c) in f.terms() {
        let gap = d - m.weighted_degree(w);
        let mut e = vec![gap as u32];
        e.extend_from_slice(m.exps());
        out.add_term(Monomial::new(e), c.clone());
    }
    Ok((out, w.prepend_one()))
}

/// Finds the lexicographically first `a ∈ {0..d}^n` with
/// `|f(a, 1)| · 3^{nd} ≥ ||f||` and returns it with
/// `g(x) = f(x_0 + a_0 x_n^{w_0}, …, x_{n-1} + a_{n-1} x_n^{w_{n-1}}, x_n)`.
pub fn coord_shift_search(
    f: &IntPolynomial,
    w: &WeightVector,
    d: u64,
) -> Result<(Vec<u64>, IntPolynomial), PolyError> {
    check_arity(f, w)?;
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let arity = f.arity();
    if arity < 2 {
        return Err(PolyError::InvalidArgument("need at least two variables".into()));
    }
    if *w.weights().last().unwrap() != 1 {
        return Err(PolyError::InvalidArgument("the last weight must be 1".into()));
    }
    if !f.is_weighted_homogeneous(w) || f.weighted_degree(w) != Some(d) {
        return Err(PolyError::NotHomogeneous);
    }
    let n = arity - 1;
    let norm = f.norm();
    let scale = num_traits::pow(BigInt::from(3), (n as u64 * d) as usize);
    let mut a = vec![0u64; n];
    loop {
        let mut point: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        point.push(BigInt::one());
        let v = f.eval(&point);
        if v.abs() * &scale >= norm {
            break;
        }
        // next vector in lexicographic order, a_0 most significant
        let mut i = n;
        loop {
            if i == 0 {
                return Err(PolyError::NoShiftFound { d, n });
            }
            i -= 1;
            if a[i] < d {
                a[i] += 1;
                for x in a.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
    let last = IntPolynomial::var(arity, n);
    let subs: Vec<IntPolynomial> = (0..arity)
        .map(|i| {
            if i == n {
                last.clone()
            } else {
                let shift = last
                    .pow(w.weights()[i] as u32)
                    .scale(&BigInt::from(a[i]));
                &IntPolynomial::var(arity, i) + &shift
            }
        })
        .collect();
    Ok((a, f.substitute(&subs)))
}

/// Substitutes `Xn = a_1 X1 + … + a_{n-1} X_{n-1} + k` and re-validates the
/// cover form in `n - 1` X-variables.
pub fn slice_hyperplane(
    f: &CoverPolynomial,
    a: &[BigInt],
    k: &BigInt,
) -> Result<CoverPolynomial, PolyError> {
    let n = f.n();
    if n < 3 {
        return Err(PolyError::InvalidArgument(format!(
            "hyperplane slicing needs n >= 3, got n = {n}"
        )));
    }
    if a.len() != n - 1 {
        return Err(PolyError::ArityMismatch {
            expected: n - 1,
            found: a.len(),
        });
    }
    let new_arity = n; // Y, X1..X_{n-1}
    let mut subs: Vec<IntPolynomial> = (0..n).map(|i| IntPolynomial::var(new_arity, i)).collect();
    let mut last = IntPolynomial::constant(new_arity, k.clone());
    for (i, ai) in a.iter().enumerate() {
        last = &last + &IntPolynomial::var(new_arity, i + 1).scale(ai);
    }
    subs.push(last);
    let g = f.poly().substitute(&subs);
    split_cover_form(&g, n - 1, f.e(), f.d() >= 2).map_err(|err| match err {
        PolyError::NotCoverForm(msg) => {
            PolyError::NotCoverForm(format!("after slicing: {msg}"))
        }
        other => other,
    })
}

/// `F_H = Σ_i H^i f_i X_0^{d-i}` with `X_0` prepended; weights `(1, w)`.
pub fn ev_lift(f: &IntPolynomial, w: &WeightVector, h: &BigInt) -> Result<IntPolynomial, PolyError> {
    if h < &BigInt::one() {
        return Err(PolyError::InvalidArgument(format!("H must be >= 1, got {h}")));
    }
    let grading = analyze_grading(f, w)?;
    let d = grading.weighted_degree;
    let mut out = IntPolynomial::zero(f.arity() + 1);
    for (i, part) in &grading.parts.parts {
        let hi = num_traits::pow(h.clone(), *i as usize);
        for (m, c) in part.terms() {
            let mut e = vec![(d - i) as u32];
            e.extend_from_slice(m.exps());
            out.add_term(Monomial::new(e), c * &hi);
        }
    }
    Ok(out)
}
