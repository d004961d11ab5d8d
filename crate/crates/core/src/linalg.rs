//! Fraction-free integer linear algebra.
//!
//! Elimination follows Bareiss: after the pivot in row `r`, every entry below
//! is replaced by `(a_rc * a_ij - a_ic * a_rj) / prev`, where `prev` is the
//! previous pivot. The division is exact because every intermediate entry is a
//! minor of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: IntMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    pub cols: usize,
    /// Parity of the row swaps performed.
    pub swaps_odd: bool,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }
}

pub fn bareiss_echelon(mut a: IntMatrix, cols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps_odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if piv != r {
            a.swap(piv, r);
            swaps_odd = !swaps_odd;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let p = &pivot_row[c];
        for row in bottom.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = p * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        cols,
        swaps_odd,
    }
}

pub fn rank(a: &IntMatrix, cols: usize) -> usize {
    bareiss_echelon(a.clone(), cols).rank()
}

/// Exact determinant of a square matrix.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(a.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    let e = bareiss_echelon(a.clone(), n);
    if e.rank() < n {
        return BigInt::zero();
    }
    let d = e.rows[n - 1][n - 1].clone();
    if e.swaps_odd {
        -d
    } else {
        d
    }
}

/// Basis of the right kernel, one vector per free column in increasing
/// column order: the vector for free column `j` is the reduced-echelon
/// kernel vector with a one at `j` and zeros at the other free columns,
/// scaled to a primitive integer vector with a positive entry at `j`.
pub fn kernel_basis(a: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let e = bareiss_echelon(a.clone(), cols);
    kernel_from_echelon(&e)
}

pub fn kernel_from_echelon(e: &Echelon) -> Vec<Vec<BigInt>> {
    e.free_columns()
        .into_iter()
        .map(|j| kernel_from_echelon_column(e, j))
        .collect()
}

pub fn kernel_from_echelon_column(e: &Echelon, free: usize) -> Vec<BigInt> {
    let mut x: Vec<BigRational> = vec![BigRational::zero(); e.cols];
    x[free] = BigRational::one();
    for (i, &pc) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[i];
        let mut s = BigRational::zero();
        for k in pc + 1..e.cols {
            if !row[k].is_zero() && !x[k].is_zero() {
                s += BigRational::from_integer(row[k].clone()) * &x[k];
            }
        }
        x[pc] = -s / BigRational::from_integer(row[pc].clone());
    }
    primitive_integer_vector(&x)
}

/// Clears denominators and divides out the content; the sign is unchanged.
pub fn primitive_integer_vector(x: &[BigRational]) -> Vec<BigInt> {
    let den = x
        .iter()
        .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = x
        .iter()
        .map(|q| q.numer() * (&den / q.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

pub fn mat_vec(a: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

/// Multiplicity of the prime `p` in a nonzero integer.
pub fn valuation(v: &BigInt, p: u64) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = v.abs();
    let mut k = 0;
    loop {
        let (q, r) = v.div_rem(&p);
        if !r.is_zero() {
            return Some(k);
        }
        v = q;
        k += 1;
    }
}

/// Large prime used for rank screening.
pub const SCREEN_PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

/// Rank of an integer matrix reduced modulo the prime `p`.
pub fn rank_mod_p(a: &IntMatrix, cols: usize, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let r = v.mod_floor(&pb);
                    u64::try_from(r).expect("residue fits")
                })
                .collect()
        })
        .collect();
    rank_mod_p_u64(&mut m, cols, p)
}

pub fn rank_mod_p_u64(m: &mut [Vec<u64>], cols: usize, p: u64) -> usize {
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % p as u128) as u64;
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(piv, r);
        let inv = pow_mod(m[r][c], p - 2, p);
        for j in c..cols {
            m[r][j] = mulmod(m[r][j], inv);
        }
        let (top, bottom) = m.split_at_mut(r + 1);
        let pr = &top[r];
        for row in bottom.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mulmod(f, pr[j]);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + p - sub };
            }
        }
        r += 1;
    }
    r
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    // cofactor expansion, test-only oracle
    fn det_oracle(a: &[Vec<i64>]) -> i64 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * det_oracle(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[1, 1], &[1, 6]])), BigInt::from(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn kernel_of_rank_one_row() {
        let a = m(&[&[0, 0, 0]]);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0], vec![BigInt::one(), BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 7, 9], &[3, 6, 10, 13]]);
        let k = kernel_basis(&a, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
        // free column 1 comes first: x = (-2, 1, 0, 0)
        assert_eq!(k[0], vec![BigInt::from(-2), BigInt::one(), BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn valuation_counts_prime_powers() {
        assert_eq!(valuation(&BigInt::from(250), 5), Some(3));
        assert_eq!(valuation(&BigInt::from(-7), 5), Some(0));
        assert_eq!(valuation(&BigInt::zero(), 5), None);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bareiss_determinant_matches_cofactors(entries in proptest::collection::vec(-9i64..10, 16)) {
            let a: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let big: IntMatrix = a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
            prop_assert_eq!(determinant(&big), BigInt::from(det_oracle(&a)));
        }

        #[test]
        fn rank_mod_large_prime_matches_exact(entries in proptest::collection::vec(-3i64..4, 15)) {
            let a: IntMatrix = entries.chunks(5).map(|c| c.iter().map(|&v| BigInt::from(v)).collect()).collect();
            let r = rank(&a, 5);
            prop_assert_eq!(rank_mod_p(&a, 5, SCREEN_PRIME), r);
            prop_assert_eq!(kernel_basis(&a, 5).len(), 5 - r);
        }
    }
}
