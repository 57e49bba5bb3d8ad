//! C ABI over the hopfchain library: opaque handles, integer status codes,
//! and rational values passed as "p/q" strings (exactness survives the
//! boundary). Every returned string is owned by the caller and must be
//! released with `hopfchain_string_free`.
//!
//! Instance specs are strings: `"rock"`, `"quotient-sym"`, `"graph"`,
//! `"labeled-graph"`, `"complex"` (block degree given separately), or
//! `"deck:2,1,1"` carrying the deck composition.

#![allow(non_camel_case_types)]

use hopfchain::chain::{self, TransitionMatrix};
use hopfchain::error::HopfError;
use hopfchain::hopf::HopfInstance;
use hopfchain::instances::deck::DeckInstance;
use hopfchain::instances::graphs::{LabeledGraphInstance, UnlabeledGraphInstance};
use hopfchain::instances::simplicial::SimplicialInstance;
use hopfchain::instances::symfn::{QuotientSymFnInstance, SymFnInstance};
use hopfchain::ratio::format_rat;
use hopfchain::spectral::{self, EigenSystem};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum hopfchain_status {
    HOPFCHAIN_OK = 0,
    HOPFCHAIN_INVALID_INPUT = 2,
    HOPFCHAIN_NO_MARKOV_RESCALING = 3,
    HOPFCHAIN_UNSUPPORTED_SIZE = 4,
    HOPFCHAIN_INTERNAL_ERROR = 5,
}

use hopfchain_status::*;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(err: &HopfError) -> hopfchain_status {
    let msg = CString::new(err.to_string()).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    match err {
        HopfError::NoMarkovRescaling { .. } => HOPFCHAIN_NO_MARKOV_RESCALING,
        HopfError::UnsupportedSize(_) => HOPFCHAIN_UNSUPPORTED_SIZE,
        HopfError::InternalInconsistency(_) => HOPFCHAIN_INTERNAL_ERROR,
        _ => HOPFCHAIN_INVALID_INPUT,
    }
}

/// The message of the most recent error on this thread. Borrowed; valid
/// until the next failing call.
#[no_mangle]
pub extern "C" fn hopfchain_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn hopfchain_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Frees a string returned by any hopfchain function.
///
/// # Safety
/// `s` must be a pointer previously returned by this library and not yet
/// freed; NULL is accepted.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn build_instance(spec: &str, n: u32) -> Result<Box<dyn HopfInstance>, HopfError> {
    let (name, params) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    match name {
        "rock" | "sym" => Ok(Box::new(SymFnInstance::new(n))),
        "quotient-sym" => Ok(Box::new(QuotientSymFnInstance::new(n))),
        "graph" => Ok(Box::new(UnlabeledGraphInstance::new(n)?)),
        "labeled-graph" => Ok(Box::new(LabeledGraphInstance::new(n)?)),
        "complex" => Ok(Box::new(SimplicialInstance::new(n)?)),
        "deck" => {
            let nu: Vec<u32> = match params {
                Some(p) => p
                    .split(',')
                    .map(|t| {
                        t.trim().parse().map_err(|_| {
                            HopfError::InvalidInput(format!("bad deck composition {p}"))
                        })
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![1; n as usize],
            };
            Ok(Box::new(DeckInstance::new(nu)?))
        }
        other => Err(HopfError::InvalidInput(format!("unknown instance {other}"))),
    }
}

fn parse_spec(spec: *const c_char) -> Result<String, HopfError> {
    if spec.is_null() {
        return Err(HopfError::InvalidInput("null instance spec".into()));
    }
    let s = unsafe { CStr::from_ptr(spec) };
    s.to_str()
        .map(|s| s.to_string())
        .map_err(|_| HopfError::InvalidInput("instance spec is not UTF-8".into()))
}

/// Opaque transition-matrix handle.
pub struct hopfchain_matrix {
    inner: TransitionMatrix,
}

/// Builds the exact degree-n transition matrix K_a for the named instance.
/// On success writes a handle to `out` and returns OK.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_matrix_new(
    spec: *const c_char,
    n: u32,
    a: u32,
    out: *mut *mut hopfchain_matrix,
) -> hopfchain_status {
    if out.is_null() {
        return HOPFCHAIN_INVALID_INPUT;
    }
    let result = (|| -> Result<TransitionMatrix, HopfError> {
        let spec = parse_spec(spec)?;
        let inst = build_instance(&spec, n)?;
        let resc = chain::markov_instance(inst.as_ref(), n)?;
        chain::transition_matrix(&resc, n, a)
    })();
    match result {
        Ok(k) => {
            *out = Box::into_raw(Box::new(hopfchain_matrix { inner: k }));
            HOPFCHAIN_OK
        }
        Err(e) => {
            *out = ptr::null_mut();
            set_error(&e)
        }
    }
}

/// Number of states in the block.
///
/// # Safety
/// `m` must be a live handle from `hopfchain_matrix_new`.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_matrix_dim(m: *const hopfchain_matrix) -> usize {
    if m.is_null() {
        return 0;
    }
    (*m).inner.dim()
}

/// The entry K(row, col) as a "p/q" string; NULL when out of range.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_matrix_entry(
    m: *const hopfchain_matrix,
    row: usize,
    col: usize,
) -> *mut c_char {
    if m.is_null() {
        return ptr::null_mut();
    }
    let k = &(*m).inner;
    if row >= k.dim() || col >= k.dim() {
        return ptr::null_mut();
    }
    to_c_string(format_rat(&k.entry(row, col)))
}

/// The label of basis state `idx`; NULL when out of range.
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_matrix_label(
    m: *const hopfchain_matrix,
    idx: usize,
) -> *mut c_char {
    if m.is_null() {
        return ptr::null_mut();
    }
    let k = &(*m).inner;
    if idx >= k.dim() {
        return ptr::null_mut();
    }
    to_c_string(k.labels[idx].clone())
}

/// # Safety
/// `m` must be a handle from `hopfchain_matrix_new`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_matrix_free(m: *mut hopfchain_matrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Opaque eigensystem handle (left and right bases with exponents).
pub struct hopfchain_eigen {
    inner: EigenSystem,
    duality: bool,
}

/// Builds the full left/right eigenbasis of the degree-n block and runs the
/// duality certificate.
///
/// # Safety
/// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_new(
    spec: *const c_char,
    n: u32,
    out: *mut *mut hopfchain_eigen,
) -> hopfchain_status {
    if out.is_null() {
        return HOPFCHAIN_INVALID_INPUT;
    }
    let result = (|| -> Result<(EigenSystem, bool), HopfError> {
        let spec = parse_spec(spec)?;
        let inst = build_instance(&spec, n)?;
        let resc = chain::markov_instance(inst.as_ref(), n)?;
        let sys = spectral::eigensystem(&resc, n)?;
        let duality = spectral::duality_certificate(&sys);
        Ok((sys, duality))
    })();
    match result {
        Ok((sys, duality)) => {
            *out = Box::into_raw(Box::new(hopfchain_eigen { inner: sys, duality }));
            HOPFCHAIN_OK
        }
        Err(e) => {
            *out = ptr::null_mut();
            set_error(&e)
        }
    }
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_dim(h: *const hopfchain_eigen) -> usize {
    if h.is_null() {
        return 0;
    }
    (*h).inner.basis.len()
}

/// The eigenvalue exponent of the i-th eigenvector pair: the chain
/// eigenvalue is a^{exponent - n}. Returns u32::MAX when out of range.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_exponent(h: *const hopfchain_eigen, idx: usize) -> u32 {
    if h.is_null() {
        return u32::MAX;
    }
    let sys = &(*h).inner;
    if idx >= sys.left.len() {
        return u32::MAX;
    }
    sys.left[idx].exponent
}

/// Left eigenvector matrix entry (row i is g_{b_i}), as "p/q".
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_left_entry(
    h: *const hopfchain_eigen,
    i: usize,
    j: usize,
) -> *mut c_char {
    if h.is_null() {
        return ptr::null_mut();
    }
    let sys = &(*h).inner;
    if i >= sys.basis.len() || j >= sys.basis.len() {
        return ptr::null_mut();
    }
    to_c_string(format_rat(&sys.left[i].coeffs.coeff(&sys.basis[j])))
}

/// Right eigenvector matrix entry (column j is f_{b_j}), as "p/q".
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_right_entry(
    h: *const hopfchain_eigen,
    i: usize,
    j: usize,
) -> *mut c_char {
    if h.is_null() {
        return ptr::null_mut();
    }
    let sys = &(*h).inner;
    if i >= sys.basis.len() || j >= sys.basis.len() {
        return ptr::null_mut();
    }
    to_c_string(format_rat(&sys.right[j].coeffs.coeff(&sys.basis[i])))
}

/// 1 when the exact duality certificate (f-columns inverse to g-rows) holds.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_duality(h: *const hopfchain_eigen) -> i32 {
    if h.is_null() {
        return 0;
    }
    (*h).duality as i32
}

/// # Safety
/// `h` must be a handle from `hopfchain_eigen_new`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_eigen_free(h: *mut hopfchain_eigen) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Q_a(w) of the GSR law (descent form) for a permutation given as
/// one-line values 1..n; "p/q" string, NULL on invalid input.
///
/// # Safety
/// `word` must point to `len` readable u32 values.
#[no_mangle]
pub unsafe extern "C" fn hopfchain_gsr_probability(
    n: u32,
    a: u32,
    word: *const u32,
    len: usize,
) -> *mut c_char {
    if word.is_null() || len != n as usize || a == 0 {
        return ptr::null_mut();
    }
    let w = std::slice::from_raw_parts(word, len);
    let mut sorted: Vec<u32> = w.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<u32>>() {
        return ptr::null_mut();
    }
    to_c_string(format_rat(&hopfchain::shuffle::gsr_probability(n, a, w)))
}

/// Exact absorption probability of the rock-breaking chain from (n) after k
/// binary breaks, as "p/q".
#[no_mangle]
pub extern "C" fn hopfchain_rock_absorption(n: u32, k: u32) -> *mut c_char {
    to_c_string(format_rat(&chain::rock_absorption_closed_form(n, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn matrix_round_trip_through_the_abi() {
        let spec = CString::new("rock").unwrap();
        let mut handle: *mut hopfchain_matrix = ptr::null_mut();
        let status = unsafe { hopfchain_matrix_new(spec.as_ptr(), 3, 2, &mut handle) };
        assert_eq!(status, HOPFCHAIN_OK);
        unsafe {
            assert_eq!(hopfchain_matrix_dim(handle), 3);
            let e = hopfchain_matrix_entry(handle, 2, 1);
            assert_eq!(CStr::from_ptr(e).to_str().unwrap(), "3/4");
            hopfchain_string_free(e);
            let l = hopfchain_matrix_label(handle, 0);
            assert_eq!(CStr::from_ptr(l).to_str().unwrap(), "1+1+1");
            hopfchain_string_free(l);
            assert!(hopfchain_matrix_entry(handle, 9, 0).is_null());
            hopfchain_matrix_free(handle);
        }
    }

    #[test]
    fn eigen_and_errors_through_the_abi() {
        let spec = CString::new("deck:1,1,1").unwrap();
        let mut handle: *mut hopfchain_eigen = ptr::null_mut();
        let status = unsafe { hopfchain_eigen_new(spec.as_ptr(), 3, &mut handle) };
        assert_eq!(status, HOPFCHAIN_OK);
        unsafe {
            assert_eq!(hopfchain_eigen_dim(handle), 6);
            assert_eq!(hopfchain_eigen_duality(handle), 1);
            hopfchain_eigen_free(handle);
        }
        // the quotient failure surfaces as status 3 with a useful message
        let spec = CString::new("quotient-sym").unwrap();
        let mut handle: *mut hopfchain_eigen = ptr::null_mut();
        let status = unsafe { hopfchain_eigen_new(spec.as_ptr(), 3, &mut handle) };
        assert_eq!(status, HOPFCHAIN_NO_MARKOV_RESCALING);
        assert!(handle.is_null());
        let msg = unsafe { CStr::from_ptr(hopfchain_last_error()) };
        assert!(msg.to_str().unwrap().contains("e2"));
    }

    #[test]
    fn gsr_and_rock_helpers() {
        let w = [1u32, 3, 2];
        let p = unsafe { hopfchain_gsr_probability(3, 2, w.as_ptr(), 3) };
        assert_eq!(unsafe { CStr::from_ptr(p) }.to_str().unwrap(), "1/8");
        unsafe { hopfchain_string_free(p) };
        let bad = [1u32, 1, 2];
        assert!(unsafe { hopfchain_gsr_probability(3, 2, bad.as_ptr(), 3) }.is_null());
        let r = hopfchain_rock_absorption(4, 2);
        assert_eq!(unsafe { CStr::from_ptr(r) }.to_str().unwrap(), "3/32");
        unsafe { hopfchain_string_free(r) };
    }
}
