//! C ABI over `frobcurve`.
//!
//! Curves are opaque [`FcCurve`] handles. Every fallible call returns an [`FcStatus`];
//! on failure a message is available from [`fc_last_error`] on the same thread. Strings
//! returned to the caller must be released with [`fc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use frobcurve::cartier::{cartier_manin, enumerate_p_torsion, TorsionMethod};
use frobcurve::cli::{verify_report, CliError};
use frobcurve::funcfield::Curve;
use frobcurve::verify::RigidityMode;
use frobcurve::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotOddPrime = 3,
    EvenCharacteristic = 4,
    NotSquarefree = 5,
    DegreeNotFive = 6,
    /// A brute-force scan or degree cap would be exceeded.
    ResourceGuard = 7,
    /// The curve has no nonzero torsion form over its field.
    NoTorsion = 8,
    Unsupported = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcTorsionMethod {
    Brute = 0,
    Semilinear = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcRigidityMode {
    Brute = 0,
    Linear = 1,
}

/// Closed-form counts, see the `formulas` command.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FcCounts {
    pub base_locus_length: u64,
    pub verschiebung_degree: u64,
    pub hbar_degree: u64,
    pub preimage_degree: u64,
    pub tau_invariant_count: u64,
    pub max_destab_degree: u64,
    pub consistent: bool,
}

/// Opaque curve handle.
pub struct FcCurve {
    curve: Curve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FcStatus {
    match e {
        Error::NotOddPrime(_) => FcStatus::NotOddPrime,
        Error::EvenCharacteristic => FcStatus::EvenCharacteristic,
        Error::NotSquarefree => FcStatus::NotSquarefree,
        Error::DegreeNotFive(_) => FcStatus::DegreeNotFive,
        Error::FieldTooLargeForBrute { .. } | Error::DegreeOverflow { .. } => {
            FcStatus::ResourceGuard
        }
        Error::NotTorsion => FcStatus::NoTorsion,
        Error::UnsupportedRing(_) => FcStatus::Unsupported,
        Error::Range(_) | Error::Mismatch | Error::NotIrreducible(_) | Error::BadModulus => {
            FcStatus::InvalidArgument
        }
        _ => FcStatus::Internal,
    }
}

fn fail(e: Error) -> FcStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, recording errors and converting panics into [`FcStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), FcStatus>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

unsafe fn curve_ref<'a>(curve: *const FcCurve) -> Result<&'a Curve, FcStatus> {
    if curve.is_null() {
        set_error("null curve handle".into());
        return Err(FcStatus::NullPointer);
    }
    Ok(&(*curve).curve)
}

fn non_null<T>(p: *mut T) -> Result<(), FcStatus> {
    if p.is_null() {
        set_error("null output pointer".into());
        return Err(FcStatus::NullPointer);
    }
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the next failing
/// call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds y² = f(x) over F_p from `len` (= 6) coefficients c0..c5.
///
/// # Safety
/// `coeffs` must point to `len` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_curve_new(
    p: u64,
    coeffs: *const i64,
    len: usize,
    out: *mut *mut FcCurve,
) -> FcStatus {
    guard(|| {
        non_null(out)?;
        if coeffs.is_null() {
            set_error("null coefficient array".into());
            return Err(FcStatus::NullPointer);
        }
        if len != 6 {
            set_error(format!("expected 6 coefficients, got {len}"));
            return Err(FcStatus::InvalidArgument);
        }
        let f = std::slice::from_raw_parts(coeffs, len);
        let curve = Curve::over_prime(p, f).map_err(fail)?;
        *out = Box::into_raw(Box::new(FcCurve { curve }));
        Ok(())
    })
}

/// # Safety
/// `curve` must be NULL or a handle from [`fc_curve_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_curve_free(curve: *mut FcCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Canonical curve id (hex); release with [`fc_string_free`].
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_curve_id(curve: *const FcCurve, out: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        non_null(out)?;
        *out = CString::new(c.canonical_id()).expect("hex").into_raw();
        Ok(())
    })
}

/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_curve_is_ordinary(curve: *const FcCurve, out: *mut bool) -> FcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        non_null(out)?;
        *out = !cartier_manin(c).det().is_zero();
        Ok(())
    })
}

/// Cartier–Manin matrix, row-major, as residues mod p.
///
/// # Safety
/// `curve` must be a live handle; `out` must point to 4 writable values.
#[no_mangle]
pub unsafe extern "C" fn fc_curve_cartier_manin(curve: *const FcCurve, out: *mut u64) -> FcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        non_null(out)?;
        let a = cartier_manin(c);
        let out = std::slice::from_raw_parts_mut(out, 4);
        for (slot, v) in out.iter_mut().zip(a.entries.iter().flatten()) {
            *slot = v
                .as_prime()
                .ok_or_else(|| fail(Error::UnsupportedRing("prime field only")))?;
        }
        Ok(())
    })
}

/// Number of F_p-rational torsion forms and their F_p-dimension.
///
/// # Safety
/// `curve` must be a live handle; `count` and `dimension` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_torsion_count(
    curve: *const FcCurve,
    method: FcTorsionMethod,
    count: *mut u64,
    dimension: *mut u32,
) -> FcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        non_null(count)?;
        non_null(dimension)?;
        let method = match method {
            FcTorsionMethod::Brute => TorsionMethod::Brute,
            FcTorsionMethod::Semilinear => TorsionMethod::Semilinear,
        };
        let set = enumerate_p_torsion(c, method).map_err(fail)?;
        *count = set.len() as u64;
        *dimension = set.dimension().unwrap_or(0) as u32;
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_formulas_counts(p: u64, g: u64, out: *mut FcCounts) -> FcStatus {
    guard(|| {
        non_null(out)?;
        let c = frobcurve::formulas::counts(p, g).map_err(fail)?;
        let narrow = |v: u128| {
            u64::try_from(v)
                .map_err(|_| fail(Error::Range(format!("count {v} does not fit in 64 bits"))))
        };
        *out = FcCounts {
            base_locus_length: narrow(c.base_locus_length)?,
            verschiebung_degree: narrow(c.verschiebung_degree)?,
            hbar_degree: narrow(c.hbar_degree)?,
            preimage_degree: narrow(c.preimage_degree)?,
            tau_invariant_count: narrow(c.tau_invariant_count)?,
            max_destab_degree: narrow(c.max_destab_degree)?,
            consistent: c.consistent,
        };
        Ok(())
    })
}

/// Full lemma verification report as JSON; release with [`fc_string_free`].
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_verify_json(
    curve: *const FcCurve,
    mode: FcRigidityMode,
    out: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let c = curve_ref(curve)?;
        non_null(out)?;
        let mode = match mode {
            FcRigidityMode::Brute => RigidityMode::Brute,
            FcRigidityMode::Linear => RigidityMode::Linear,
        };
        let report = verify_report(c, mode).map_err(|e| {
            set_error(e.to_string());
            match e {
                CliError::Resource(_) => FcStatus::ResourceGuard,
                CliError::Input(_) => FcStatus::NoTorsion,
                CliError::Io(_) => FcStatus::Internal,
            }
        })?;
        let text = serde_json::to_string(&report).expect("json");
        *out = CString::new(text).expect("json has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version; static, do not free.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    static V: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version"),
        };
    V.as_ptr()
}
