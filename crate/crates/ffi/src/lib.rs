//! C ABI over `sepfaces`.
//!
//! Operators live behind the opaque `SfOperator` handle; families, subspaces
//! and results cross the boundary as JSON strings in the same formats the
//! command-line tool reads and writes. Every function returns an
//! `SfStatus`; on failure `sf_last_error_message` describes what went wrong
//! on the calling thread. Strings handed out by the library must be released
//! with `sf_string_free`, handles with `sf_operator_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sepfaces::gallery::{self, GalleryParams};
use sepfaces::locator::LocatorConfig;
use sepfaces::report::{self, Input, SpaceChoice};
use sepfaces::{ppt, BipartiteOperator, Error, Tolerance};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Domain = 5,
    Degenerate = 6,
    Unsupported = 7,
    Numerical = 8,
    Panic = 9,
    Other = 10,
}

/// Opaque handle to a Hermitian operator on `C^m (x) C^n`.
pub struct SfOperator {
    inner: BipartiteOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(SfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch(_) | Error::Index(_) => SfStatus::Dimension,
            Error::UnsupportedDimensions { .. } | Error::FamilyTooLarge { .. } => {
                SfStatus::Unsupported
            }
            Error::NotHermitian(_)
            | Error::MalformedState(_)
            | Error::InvalidTolerance(_)
            | Error::Domain(_)
            | Error::ZeroVector
            | Error::Empty
            | Error::FamilyTooSmall { .. }
            | Error::NotGeneralPosition => SfStatus::Domain,
            Error::DegeneratePencil(_)
            | Error::DegreeGuard { .. }
            | Error::DegenerateExtension(_)
            | Error::NoFeasibleDrop => SfStatus::Degenerate,
            Error::Numerical(_) => SfStatus::Numerical,
            Error::Parse(_) | Error::Json(_) => SfStatus::Parse,
            _ => SfStatus::Other,
        };
        Fail(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside sepfaces".into());
            SfStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SfStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(SfStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a>(p: *const SfOperator) -> Result<&'a BipartiteOperator, Fail> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Fail(SfStatus::NullPointer, "null operator handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(SfStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail(SfStatus::Other, e.to_string()))?;
    put(out, c.into_raw())
}

unsafe fn put_operator(out: *mut *mut SfOperator, op: BipartiteOperator) -> Result<(), Fail> {
    put(out, Box::into_raw(Box::new(SfOperator { inner: op })))
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Fail> {
    serde_json::to_string(v).map_err(|e| Fail(SfStatus::Other, e.to_string()))
}

fn tolerance(rank_rel_tol: f64) -> Tolerance {
    let mut tol = Tolerance::default();
    if rank_rel_tol > 0.0 {
        tol.rank_rel_tol = rank_rel_tol;
    }
    tol
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"m":..,"n":..,"entries":[[re,im],..]}`; the matrix must be
/// Hermitian.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_from_json(
    json: *const c_char,
    out: *mut *mut SfOperator,
) -> SfStatus {
    guard(|| {
        let op = report::parse_operator(text(json)?)?;
        put_operator(out, op)
    })
}

/// # Safety
/// `op` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_free(op: *mut SfOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `op` must be a live handle; `m` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_dims(
    op: *const SfOperator,
    m: *mut usize,
    n: *mut usize,
) -> SfStatus {
    guard(|| {
        let (a, b) = handle(op)?.dims();
        put(m, a)?;
        put(n, b)
    })
}

/// # Safety
/// `op` must be a live handle; `out` must be writable. Free the result with
/// `sf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_to_json(
    op: *const SfOperator,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| put_string(out, json(handle(op)?)?))
}

/// Numerical rank; `rank_rel_tol <= 0` selects the default cutoff.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_rank(
    op: *const SfOperator,
    rank_rel_tol: f64,
    out: *mut usize,
) -> SfStatus {
    guard(|| put(out, handle(op)?.rank(&tolerance(rank_rel_tol))))
}

/// `(rank rho, rank rho^Gamma)`.
///
/// # Safety
/// `op` must be a live handle; `p` and `q` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_state_type(
    op: *const SfOperator,
    p: *mut usize,
    q: *mut usize,
) -> SfStatus {
    guard(|| {
        let t = ppt::state_type(handle(op)?, &Tolerance::default());
        put(p, t.p)?;
        put(q, t.q)
    })
}

/// # Safety
/// `op` must be a live handle; `out` must be writable. The new handle is
/// owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_partial_transpose(
    op: *const SfOperator,
    out: *mut *mut SfOperator,
) -> SfStatus {
    guard(|| put_operator(out, handle(op)?.partial_transpose()))
}

/// Fails with `Domain` if the operator is not a density matrix.
///
/// # Safety
/// `op` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_operator_is_ppt(op: *const SfOperator, out: *mut bool) -> SfStatus {
    guard(|| put(out, ppt::is_ppt(handle(op)?, &Tolerance::default())?))
}

/// Largest `eps` with `sigma - eps rho0` still PPT.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_max_epsilon_ppt(
    sigma: *const SfOperator,
    rho0: *const SfOperator,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let b = ppt::max_epsilon_ppt(handle(sigma)?, handle(rho0)?, &Tolerance::default())?;
        put(out, b.epsilon_star)
    })
}

/// Full edge extraction report as JSON.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_extract_edge_json(
    sigma: *const SfOperator,
    rho0: *const SfOperator,
    seed: u64,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let cfg = LocatorConfig {
            rng_seed: seed,
            ..LocatorConfig::default()
        };
        let ext = ppt::extract_edge_state(handle(sigma)?, handle(rho0)?, &cfg)?;
        put_string(out, json(&ext)?)
    })
}

/// Face certificate for a JSON list of product vectors
/// `[{"x":[[re,im],..],"y":[..]},..]`.
///
/// # Safety
/// `family_json` must be a valid NUL-terminated string; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sf_certify_json(
    family_json: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let cfg = LocatorConfig {
            rng_seed: seed,
            ..LocatorConfig::default()
        };
        let family = match report::parse_input(text(family_json)?)? {
            Input::Family(f) => f,
            _ => {
                return Err(Fail(
                    SfStatus::Parse,
                    "expected a list of product vectors".into(),
                ))
            }
        };
        let cert = sepfaces::face::certify_simplicial_face(&family, &cfg)?;
        put_string(out, json(&cert)?)
    })
}

/// Product vectors in a subspace, in the span of a family, or in the kernel
/// (`use_range = false`) or range of an operator; returns the report line.
///
/// # Safety
/// `input_json` must be a valid NUL-terminated string; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sf_find_products_json(
    input_json: *const c_char,
    use_range: bool,
    seed: u64,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let cfg = LocatorConfig {
            rng_seed: seed,
            ..LocatorConfig::default()
        };
        let input = report::parse_input(text(input_json)?)?;
        let space = if use_range {
            SpaceChoice::Range
        } else {
            SpaceChoice::Kernel
        };
        let env = report::find_products(&input, space, &cfg)?;
        put_string(out, env.to_json_line()?)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_gallery_rho_b(b: f64, out: *mut *mut SfOperator) -> SfStatus {
    guard(|| put_operator(out, gallery::rho_b(b)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_gallery_rho_theta(
    b: f64,
    theta: f64,
    out: *mut *mut SfOperator,
) -> SfStatus {
    guard(|| put_operator(out, gallery::rho_theta(b, theta)?))
}

/// Uniform mixture of the six kernel product vectors of `rho_b(b)`,
/// optionally leaving out member `skip` (0-based; pass a negative value to
/// keep all six).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_gallery_choi_face_state(
    b: f64,
    skip: i32,
    out: *mut *mut SfOperator,
) -> SfStatus {
    guard(|| {
        let fam = gallery::six_products_b(b)?;
        let op = if skip < 0 {
            gallery::uniform_mixture(&fam)?
        } else {
            gallery::drop_one_mixture(&fam, skip as usize)?
        };
        put_operator(out, op)
    })
}

/// Any named gallery object as JSON (see the command-line `gallery` command
/// for the names).
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_gallery_json(
    name: *const c_char,
    b: f64,
    theta: f64,
    s: f64,
    out: *mut *mut c_char,
) -> SfStatus {
    guard(|| {
        let params = GalleryParams::new(b, theta, s)?;
        let env = report::gallery_object(text(name)?, &params, &LocatorConfig::default())?;
        put_string(out, json(&env.result)?)
    })
}
