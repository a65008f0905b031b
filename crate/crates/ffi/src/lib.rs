//! C interface to the `backflow` crate.
//!
//! Every function returns a [`BfStatus`]. On failure the message is kept in a
//! thread-local slot readable with [`bf_last_error`]. Strings handed out by
//! the library must be released with [`bf_string_free`]; handles with their
//! matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use backflow::ansatz::{AnsatzConfig, AnsatzSpec};
use backflow::combinat::{pbar, qbar, DegreeProfile};
use backflow::dimension::{min_degree, source_dim_exact, target_dim_exact};
use backflow::polyalg::{Polynomial, Scalar};
use backflow::rankprobe::{self, ProbeOptions, ProfileSelection, VerdictOptions};
use backflow::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Domain = 5,
    DimensionMismatch = 6,
    ParticleCountMismatch = 7,
    FieldMismatch = 8,
    NotTailSymmetric = 9,
    EnumerationGuard = 10,
    ResourceGuard = 11,
    Overflow = 12,
    Panic = 13,
}

impl From<&Error> for BfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::ParticleCountMismatch { .. } => BfStatus::ParticleCountMismatch,
            Error::FieldMismatch { .. } => BfStatus::FieldMismatch,
            Error::DimensionMismatch(_) => BfStatus::DimensionMismatch,
            Error::Domain(_) => BfStatus::Domain,
            Error::InvalidArgument(_) => BfStatus::InvalidArgument,
            Error::GuardExceeded { .. } => BfStatus::EnumerationGuard,
            Error::ResourceGuard(_) => BfStatus::ResourceGuard,
            Error::NotTailSymmetric { .. } => BfStatus::NotTailSymmetric,
            Error::Parse(_) => BfStatus::Parse,
            Error::Overflow(_) => BfStatus::Overflow,
        }
    }
}

/// Opaque ansatz configuration (profile plus per-column bases).
pub struct BfAnsatz(AnsatzConfig);

/// Opaque polynomial.
pub struct BfPolynomial(Polynomial);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(BfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(BfStatus::from(&e), e.to_string())
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> BfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            BfStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BfStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(BfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(BfStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| Failure(BfStatus::InvalidArgument, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

unsafe fn profile_from(degrees: *const u32, len: usize) -> Result<DegreeProfile, Failure> {
    if degrees.is_null() && len > 0 {
        return Err(null());
    }
    let slice = if len == 0 { &[][..] } else { std::slice::from_raw_parts(degrees, len) };
    Ok(DegreeProfile::new(slice.to_vec())?)
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn bf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next library call on the same thread. Do not free.
#[no_mangle]
pub extern "C" fn bf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned through an output
/// parameter of this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Partitions of `m` into at most `k` parts, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_pbar(k: usize, m: usize, out: *mut *mut c_char) -> BfStatus {
    guard(|| write_string(out, pbar(k, m)?.to_string()))
}

/// Strict partitions of `m` with `k` or `k - 1` parts, as a decimal string.
///
/// # Safety
/// As for [`bf_pbar`].
#[no_mangle]
pub unsafe extern "C" fn bf_qbar(k: usize, m: usize, out: *mut *mut c_char) -> BfStatus {
    guard(|| write_string(out, qbar(k, m)?.to_string()))
}

/// Exact dimension of the degree-`degree` antisymmetric space for `n`
/// particles, as a decimal string.
///
/// # Safety
/// As for [`bf_pbar`].
#[no_mangle]
pub unsafe extern "C" fn bf_target_dim(n: usize, degree: u32, out: *mut *mut c_char) -> BfStatus {
    guard(|| write_string(out, target_dim_exact(n, degree).to_string()))
}

/// Exact parameter count of a degree profile, as a decimal string.
///
/// # Safety
/// `degrees` must point to `len` readable values; `out` as for [`bf_pbar`].
#[no_mangle]
pub unsafe extern "C" fn bf_source_dim(degrees: *const u32, len: usize, out: *mut *mut c_char) -> BfStatus {
    guard(|| {
        let p = profile_from(degrees, len)?;
        write_string(out, source_dim_exact(&p).to_string())
    })
}

/// Smallest total degree with a nonzero antisymmetric space.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bf_min_degree(n: usize, out: *mut u64) -> BfStatus {
    guard(|| {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()).into());
        }
        write(out, min_degree(n))
    })
}

/// Build the ansatz configuration for a nondecreasing degree profile.
///
/// # Safety
/// `degrees` must point to `len` readable values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_ansatz_new(degrees: *const u32, len: usize, out: *mut *mut BfAnsatz) -> BfStatus {
    guard(|| {
        let config = AnsatzConfig::new(profile_from(degrees, len)?)?;
        write(out, Box::into_raw(Box::new(BfAnsatz(config))))
    })
}

/// Release an ansatz handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a live handle from [`bf_ansatz_new`].
#[no_mangle]
pub unsafe extern "C" fn bf_ansatz_free(h: *mut BfAnsatz) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of coefficients the configuration takes.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_ansatz_param_count(h: *const BfAnsatz, out: *mut usize) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        write(out, h.0.param_count())
    })
}

/// Evaluate the backflow determinant at rational coefficients given as
/// strings such as `"3"` or `"-2/5"`, in canonical basis order.
///
/// # Safety
/// `h` must be a live handle; `coeffs` must point to `len` NUL-terminated
/// strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_ansatz_eval(
    h: *const BfAnsatz,
    coeffs: *const *const c_char,
    len: usize,
    out: *mut *mut BfPolynomial,
) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        if coeffs.is_null() && len > 0 {
            return Err(null());
        }
        let raw = if len == 0 { &[][..] } else { std::slice::from_raw_parts(coeffs, len) };
        let scalars = raw
            .iter()
            .map(|&s| Ok(Scalar::parse(read_str(s)?)?))
            .collect::<Result<Vec<_>, Failure>>()?;
        let det = backflow::ansatz::backflow_det(&h.0.orbitals(&scalars)?)?;
        write(out, Box::into_raw(Box::new(BfPolynomial(det))))
    })
}

/// Evaluate an ansatz description in the JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_ansatz_spec_eval(json: *const c_char, out: *mut *mut BfPolynomial) -> BfStatus {
    guard(|| {
        let spec = AnsatzSpec::from_json_str(read_str(json)?)?;
        write(out, Box::into_raw(Box::new(BfPolynomial(spec.evaluate()?))))
    })
}

/// Release a polynomial handle. NULL is ignored.
///
/// # Safety
/// `h` must be NULL or a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn bf_polynomial_free(h: *mut BfPolynomial) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of nonzero terms.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_polynomial_term_count(h: *const BfPolynomial, out: *mut usize) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        write(out, h.0.len())
    })
}

/// Whether the polynomial changes sign under every transposition of particles.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_polynomial_is_antisymmetric(h: *const BfPolynomial, out: *mut bool) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        write(out, h.0.is_antisymmetric())
    })
}

/// Polynomial in the JSON exchange format.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_polynomial_json(h: *const BfPolynomial, out: *mut *mut c_char) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let s = serde_json::to_string(&h.0.to_json()).expect("polynomial serializes");
        write_string(out, s)
    })
}

/// Polynomial as plain text, `c * x[i][a]^e * ...` joined by ` + `.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_polynomial_text(h: *const BfPolynomial, out: *mut *mut c_char) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        write_string(out, h.0.to_string())
    })
}

/// Maximum Jacobian rank of the ansatz map over `trials` random points mod `prime`.
///
/// # Safety
/// `h` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_generic_rank(
    h: *const BfAnsatz,
    trials: usize,
    prime: u64,
    seed: u64,
    out: *mut usize,
) -> BfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        let rank = rankprobe::generic_rank(&h.0, &ProbeOptions { trials, prime, seed })?;
        write(out, rank)
    })
}

/// Rank report for sums of `r` determinants at `(n, degree)` as JSON.
/// `all_profiles` probes every profile; otherwise only the largest one.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_rank_report_json(
    n: usize,
    degree: u32,
    r: usize,
    trials: usize,
    prime: u64,
    seed: u64,
    all_profiles: bool,
    out: *mut *mut c_char,
) -> BfStatus {
    guard(|| {
        let opts = VerdictOptions {
            probe: ProbeOptions { trials, prime, seed },
            profiles: if all_profiles {
                ProfileSelection::All
            } else {
                ProfileSelection::Best
            },
            row_limit: rankprobe::row_limit_from_env(),
            timings: false,
        };
        let report = rankprobe::surjectivity_verdict(n, degree, r, &opts)?;
        write_string(out, serde_json::to_string(&report).expect("report serializes"))
    })
}

/// Run one command-line invocation. `argv` excludes the program name.
/// Writes the JSON document to `out_json` and the exit code to `out_code`.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn bf_cli_run(
    argv: *const *const c_char,
    argc: usize,
    out_json: *mut *mut c_char,
    out_code: *mut i32,
) -> BfStatus {
    guard(|| {
        if argv.is_null() && argc > 0 {
            return Err(null());
        }
        let raw = if argc == 0 { &[][..] } else { std::slice::from_raw_parts(argv, argc) };
        let args = raw.iter().map(|&s| read_str(s)).collect::<Result<Vec<_>, _>>()?;
        let result = backflow::cli::run(&args);
        write(out_code, result.code)?;
        write_string(out_json, result.stdout)
    })
}
