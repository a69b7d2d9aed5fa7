//! C ABI over `bellkit`.
//!
//! Inequalities live behind an opaque [`BellInequality`] handle. Every entry
//! point returns a [`BellStatus`]; on failure a message is kept per thread and
//! read back with [`bell_last_error_message`]. Strings handed out by the
//! library must be released with [`bell_string_free`], handles with
//! [`bell_inequality_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bellkit::families::{catalog, gen_as, gen_d};
use bellkit::format::{inequality_from_str, inequality_to_json};
use bellkit::local::{
    facet_check, local_bound_correlation, local_bound_probability, PolytopeSpace,
};
use bellkit::optimizer::{
    detection_threshold, seesaw_value, visibility_threshold, EfficiencyShape, OptimizerConfig,
};
use bellkit::shb::{shb_local_oracle, shb_quantum_score};
use bellkit::{AnyInequality, BellError, CorrelationInequality, LocalBound};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    TooLarge = 4,
    MissingBound = 5,
    UnknownName = 6,
    NoViolation = 7,
    Parse = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSpace {
    Full = 0,
    Correlation = 1,
}

/// Opaque inequality handle.
pub struct BellInequality {
    inner: AnyInequality,
}

/// Facet certification summary.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BellFacetReport {
    pub is_facet: bool,
    pub polytope_dim: usize,
    pub affine_rank: usize,
    pub saturating_vertices: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &BellError) -> BellStatus {
    match e {
        BellError::Dimension(_) => BellStatus::Dimension,
        BellError::Invalid(_) => BellStatus::InvalidArgument,
        BellError::TooLarge(_) => BellStatus::TooLarge,
        BellError::MissingBound(_) => BellStatus::MissingBound,
        BellError::UnknownName(_) => BellStatus::UnknownName,
        BellError::NoViolation(_) => BellStatus::NoViolation,
        BellError::Parse(_) | BellError::Json(_) => BellStatus::Parse,
        BellError::Io(_) => BellStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Bell(BellError),
}

impl From<BellError> for Failure {
    fn from(e: BellError) -> Self {
        Failure::Bell(e)
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BellStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BellStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            BellStatus::NullPointer
        }
        Ok(Err(Failure::Bell(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            BellStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Bell(BellError::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn handle<'a>(h: *const BellInequality) -> Result<&'a BellInequality, Failure> {
    h.as_ref().ok_or(Failure::Null("inequality handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_handle(out: *mut *mut BellInequality, inner: AnyInequality) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("output handle"));
    }
    out.write(Box::into_raw(Box::new(BellInequality { inner })));
    Ok(())
}

/// The correlation form with a bound, enumerating one if none is attached.
fn bounded_correlation(h: &BellInequality) -> Result<CorrelationInequality, BellError> {
    let c = h.inner.as_correlation()?.clone();
    if c.bound().is_some() {
        return Ok(c);
    }
    let b = local_bound_correlation(&c)?;
    Ok(c.with_bound(LocalBound::exact(b)))
}

fn optimizer(c: &CorrelationInequality, restarts: usize, seed: u64) -> OptimizerConfig {
    let base = OptimizerConfig::for_inequality(c).with_seed(seed);
    OptimizerConfig {
        restarts: if restarts == 0 {
            base.restarts
        } else {
            restarts
        },
        ..base
    }
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn bell_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn bell_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `h` must be null or a handle returned by this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn bell_inequality_free(h: *mut BellInequality) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Look up a built-in inequality (case-insensitive).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_catalog(
    name: *const c_char,
    out: *mut *mut BellInequality,
) -> BellStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        emit_handle(out, catalog(name)?.into())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_gen_as(n: usize, out: *mut *mut BellInequality) -> BellStatus {
    guard(|| emit_handle(out, gen_as(n)?.into()))
}

/// # Safety
/// `row` must point to `len` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_gen_d(
    row: *const i64,
    len: usize,
    out: *mut *mut BellInequality,
) -> BellStatus {
    guard(|| {
        if row.is_null() {
            return Err(Failure::Null("row"));
        }
        let row = std::slice::from_raw_parts(row, len);
        emit_handle(out, gen_d(row)?.into())
    })
}

/// Parse the JSON inequality format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_from_json(
    json: *const c_char,
    out: *mut *mut BellInequality,
) -> BellStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        emit_handle(out, inequality_from_str(text)?)
    })
}

/// Serialize to JSON; release the result with [`bell_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_to_json(
    h: *const BellInequality,
    out: *mut *mut c_char,
) -> BellStatus {
    guard(|| {
        let text = inequality_to_json(&handle(h)?.inner).to_string();
        let c = CString::new(text).expect("JSON contains no NUL");
        write_out(out, c.into_raw(), "output string")
    })
}

/// Inputs per party.
///
/// # Safety
/// `h` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_inequality_inputs(
    h: *const BellInequality,
    m_a: *mut usize,
    m_b: *mut usize,
) -> BellStatus {
    guard(|| {
        let (a, b) = match &handle(h)?.inner {
            AnyInequality::Correlation(c) => (c.m_a(), c.m_b()),
            AnyInequality::Probability(p) => (p.n_a(), p.n_b()),
        };
        write_out(m_a, a, "m_a")?;
        write_out(m_b, b, "m_b")
    })
}

/// Exact local bound by enumeration, as a reduced fraction.
///
/// # Safety
/// `h` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_local_bound(
    h: *const BellInequality,
    numer: *mut i64,
    denom: *mut i64,
) -> BellStatus {
    guard(|| {
        let bound = match &handle(h)?.inner {
            AnyInequality::Correlation(c) => local_bound_correlation(c)?,
            AnyInequality::Probability(p) => local_bound_probability(p)?,
        };
        write_out(numer, *bound.numer(), "numer")?;
        write_out(denom, *bound.denom(), "denom")
    })
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_facet_check(
    h: *const BellInequality,
    space: BellSpace,
    out: *mut BellFacetReport,
) -> BellStatus {
    guard(|| {
        let h = handle(h)?;
        let ineq = match &h.inner {
            AnyInequality::Correlation(_) => bounded_correlation(h)?.into(),
            AnyInequality::Probability(p) if p.bound().is_none() => {
                let b = local_bound_probability(p)?;
                p.clone().with_bound(LocalBound::exact(b)).into()
            }
            other => other.clone(),
        };
        let space = match space {
            BellSpace::Full => PolytopeSpace::Full,
            BellSpace::Correlation => PolytopeSpace::Correlation,
        };
        let r = facet_check(&ineq, space)?;
        write_out(
            out,
            BellFacetReport {
                is_facet: r.is_facet,
                polytope_dim: r.polytope_dim,
                affine_rank: r.affine_rank,
                saturating_vertices: r.saturating_vertex_count,
            },
            "report",
        )
    })
}

/// Best see-saw value over unit vectors in `dim` dimensions. `restarts = 0`
/// picks the default for the inequality size.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_seesaw_value(
    h: *const BellInequality,
    dim: usize,
    restarts: usize,
    seed: u64,
    out: *mut f64,
) -> BellStatus {
    guard(|| {
        let c = bounded_correlation(handle(h)?)?;
        let r = seesaw_value(&c, dim, &optimizer(&c, restarts, seed))?;
        write_out(out, r.value, "value")
    })
}

/// Critical white-noise visibility.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_visibility_threshold(
    h: *const BellInequality,
    dim: usize,
    restarts: usize,
    seed: u64,
    out: *mut f64,
) -> BellStatus {
    guard(|| {
        let c = bounded_correlation(handle(h)?)?;
        let r = visibility_threshold(&c, dim, &optimizer(&c, restarts, seed))?;
        write_out(out, r.visibility, "visibility")
    })
}

/// Detection-efficiency threshold for `cos θ|00> + sin θ|11>`. With
/// `symmetric` both efficiencies are equal; otherwise Bob's is `eta_b`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_detection_threshold(
    h: *const BellInequality,
    theta: f64,
    symmetric: bool,
    eta_b: f64,
    seed: u64,
    out: *mut f64,
) -> BellStatus {
    guard(|| {
        let c = bounded_correlation(handle(h)?)?;
        let shape = if symmetric {
            EfficiencyShape::Symmetric
        } else {
            EfficiencyShape::FixedBob(eta_b)
        };
        let r = detection_threshold(&c, theta, shape, &optimizer(&c, 0, seed))?;
        write_out(out, r.eta_star, "eta_star")
    })
}

/// Exhaustive local optimum of the guessing game.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_shb_local_oracle(n: usize, m: usize, out: *mut i64) -> BellStatus {
    guard(|| write_out(out, shb_local_oracle(n, m)?, "value"))
}

/// Score of the two-input quantum strategy with alphabet size `m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bell_shb_quantum_score(m: usize, out: *mut f64) -> BellStatus {
    guard(|| write_out(out, shb_quantum_score(m)?.score, "score"))
}
