//! C interface to `thinset`.
//!
//! Objects are opaque handles created by `*_parse`/`*_split` and released by
//! the matching `*_free`. Every fallible call returns a [`TsStatus`]; on
//! failure a message is available from [`ts_last_error_message`] on the same
//! thread. Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use thinset::enumerate::{count_affine, schwarz_zippel_check, EnumerationError, WBox};
use thinset::irreducible::{
    absolutely_irreducible_seeded, count_points_mod_p, CountMode, Field, IrreducibilityError,
};
use thinset::poly::{parse_poly, split_cover_form};
use thinset::{Budget, CoverPolynomial, IntPolynomial, VarNames, WeightVector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Budget = 5,
    /// A result does not fit the output type.
    Overflow = 6,
    Panic = 7,
}

/// Polynomial with integer coefficients.
pub struct TsPolynomial(IntPolynomial);

/// Polynomial split into top and lower weighted parts.
pub struct TsCover(CoverPolynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).expect("interior nuls removed")));
}

fn fail(status: TsStatus, msg: impl Into<String>) -> TsStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TsStatus) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TsStatus::Panic, "internal panic"),
    }
}

/// Message describing the last failure on this thread, or NULL. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Parses `text` as a polynomial in `arity` variables named
/// `Y, X1, …` (or `X0, …` / `X1, …` when those names are used).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_poly_parse(text: *const c_char, arity: usize, out: *mut *mut TsPolynomial) -> TsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(TsStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(TsStatus::InvalidUtf8, "text is not UTF-8");
        };
        match parse_poly(s, arity) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(TsPolynomial(p)));
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must come from `ts_poly_parse` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_poly_free(p: *mut TsPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_poly_arity(p: *const TsPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.arity())
}

/// Canonical text of `p`; release it with `ts_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_poly_to_string(p: *const TsPolynomial, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let names = VarNames::cover(p.0.arity().saturating_sub(1));
        let text = p.0.to_text(&names);
        *out = CString::new(text).expect("no interior nul").into_raw();
        TsStatus::Ok
    })
}

/// # Safety
/// `s` must come from this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Splits `p` (variables `Y, X1, …, Xn`) for weights `(e, 1, …, 1)`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_cover_split(p: *const TsPolynomial, n: usize, e: u32, out: *mut *mut TsCover) -> TsStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        match split_cover_form(&p.0, n, e, false) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(TsCover(c)));
                TsStatus::Ok
            }
            Err(err) => fail(TsStatus::InvalidArgument, err.to_string()),
        }
    })
}

/// # Safety
/// `c` must come from `ts_cover_split` and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ts_cover_free(c: *mut TsCover) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Degree in `Y`, or 0 for NULL.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ts_cover_degree(c: *const TsCover) -> u32 {
    c.as_ref().map_or(0, |c| c.0.d())
}

/// Integral solutions with `|y| ≤ B^e`, `|x_i| ≤ B`. `max_nodes = 0` means
/// no limit.
///
/// # Safety
/// `c` must be a live handle; `n_aff` and `n_cover` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ts_count_affine(
    c: *const TsCover,
    b: u64,
    max_nodes: u64,
    n_aff: *mut u64,
    n_cover: *mut u64,
) -> TsStatus {
    guard(|| {
        let (Some(c), false, false) = (c.as_ref(), n_aff.is_null(), n_cover.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let budget = if max_nodes == 0 { Budget::unlimited() } else { Budget::nodes(max_nodes) };
        let wbox = match WBox::new(c.0.e(), b, c.0.n()) {
            Ok(w) => w,
            Err(e) => return fail(TsStatus::InvalidArgument, e.to_string()),
        };
        match count_affine(&c.0, &wbox, false, &budget) {
            Ok(r) => {
                *n_aff = r.n_aff;
                *n_cover = r.n_cover;
                TsStatus::Ok
            }
            Err(EnumerationError::Budget(e)) => fail(TsStatus::Budget, e.to_string()),
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Number of monomials of weighted degree `m` for `weights[0..len]`.
///
/// # Safety
/// `weights` must point to `len` integers and `out` be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_count_monomials(weights: *const u64, len: usize, m: u64, out: *mut u64) -> TsStatus {
    guard(|| {
        if weights.is_null() || out.is_null() {
            return fail(TsStatus::NullPointer, "null argument");
        }
        let w = match WeightVector::new(std::slice::from_raw_parts(weights, len).to_vec()) {
            Ok(w) => w,
            Err(e) => return fail(TsStatus::InvalidArgument, e.to_string()),
        };
        let c = thinset::detmethod::count_monomials(&w, m, false);
        match u64::try_from(&c.exact) {
            Ok(v) => {
                *out = v;
                TsStatus::Ok
            }
            Err(_) => fail(TsStatus::Overflow, format!("{} does not fit in 64 bits", c.exact)),
        }
    })
}

/// Solutions mod `p` on the affine cone (the homogenization when `f` is
/// not homogeneous).
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_count_points_mod_p(f: *const TsPolynomial, p: u64, max_nodes: u64, out: *mut u64) -> TsStatus {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let budget = if max_nodes == 0 { Budget::unlimited() } else { Budget::nodes(max_nodes) };
        match count_points_mod_p(&f.0, p, CountMode::AffineCone, &budget) {
            Ok(c) => {
                *out = c.count;
                TsStatus::Ok
            }
            Err(IrreducibilityError::Budget(e)) => fail(TsStatus::Budget, e.to_string()),
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Writes 1 when `f` is absolutely irreducible over the rationals
/// (`p = 0`) or over the prime field `F_p`, else 0.
///
/// # Safety
/// `f` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ts_absolutely_irreducible(
    f: *const TsPolynomial,
    p: u64,
    seed: u64,
    out: *mut c_int,
) -> TsStatus {
    guard(|| {
        let (Some(f), false) = (f.as_ref(), out.is_null()) else {
            return fail(TsStatus::NullPointer, "null argument");
        };
        let field = if p == 0 { Field::Rationals } else { Field::Prime(p) };
        match absolutely_irreducible_seeded(&f.0, field, seed) {
            Ok(v) => {
                *out = v.irreducible as c_int;
                TsStatus::Ok
            }
            Err(IrreducibilityError::Budget(e)) => fail(TsStatus::Budget, e.to_string()),
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Writes 1 when `observed ≤ d (2B+1)^m`, else 0.
///
/// # Safety
/// `ok` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_schwarz_zippel_check(d: u64, m: u32, b: u64, observed: u64, ok: *mut c_int) -> TsStatus {
    guard(|| {
        if ok.is_null() {
            return fail(TsStatus::NullPointer, "null argument");
        }
        match schwarz_zippel_check(d, m, b, observed) {
            Ok(r) => {
                *ok = r.ok as c_int;
                TsStatus::Ok
            }
            Err(e) => fail(TsStatus::InvalidArgument, e.to_string()),
        }
    })
}
