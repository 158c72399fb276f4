//! C interface to `twobridge`.
//!
//! Every function returns a [`TbStatus`]. On failure a message is stored per
//! thread and can be fetched with [`tb_last_error_message`]. Strings handed
//! out by this library must be released with [`tb_string_free`], and
//! triangulation handles with [`tb_triangulation_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twobridge::bounds::bounds_report;
use twobridge::report::{build_report, construct, CaseInput, ReportError};
use twobridge::verify::{homology, triangulation_complex, validate_triangulation};
use twobridge::{classify, minimized_expansion, SlopePair, Triangulation};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    InvalidInput = 1,
    Internal = 2,
    NullPointer = 3,
    Panic = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Fail(TbStatus, String);

impl From<ReportError> for Fail {
    fn from(e: ReportError) -> Fail {
        let code = if e.is_input_error() {
            TbStatus::InvalidInput
        } else {
            TbStatus::Internal
        };
        Fail(code, e.to_string())
    }
}

fn invalid(e: impl ToString) -> Fail {
    Fail(TbStatus::InvalidInput, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TbStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside twobridge".into());
            TbStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    // SAFETY: non-null pointers are required to be valid for writes by the
    // function contracts.
    unsafe { p.as_mut() }.ok_or_else(|| Fail(TbStatus::NullPointer, "null output pointer".into()))
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(TbStatus::Internal, "string contains a NUL byte".into()))
}

/// Copies the calling thread's last error message, or returns null if the
/// last call succeeded. Free the result with [`tb_string_free`].
#[no_mangle]
pub extern "C" fn tb_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(m) => CString::new(m.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TbClassification {
    pub canonical_q: u64,
    pub is_knot: bool,
    pub is_torus: bool,
    pub ell: u64,
    /// Zero when the class has no `k + 1/m` form.
    pub km_k: u64,
    pub km_m: u64,
    pub expansion_len: u64,
}

/// Classifies `K(p, q)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_classify(p: u64, q: u64, out: *mut TbClassification) -> TbStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s = SlopePair::new(p, q).map_err(invalid)?;
        let c = classify(s);
        *out = TbClassification {
            canonical_q: c.canonical.q(),
            is_knot: c.is_knot,
            is_torus: c.is_torus,
            ell: c.ell,
            km_k: c.km_form.map_or(0, |k| k.k),
            km_m: c.km_form.map_or(0, |k| k.m),
            expansion_len: minimized_expansion(s).len() as u64,
        };
        Ok(())
    })
}

/// Writes up to `cap` coefficients of the minimized expansion into `buf` and
/// the full length into `len`.
///
/// # Safety
/// `buf` must be valid for `cap` writes (or null when `cap` is 0); `len` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_expansion(p: u64, q: u64, buf: *mut u64, cap: usize, len: *mut usize) -> TbStatus {
    guard(|| {
        let len = out_ref(len)?;
        let s = SlopePair::new(p, q).map_err(invalid)?;
        let e = minimized_expansion(s);
        let c = e.coefficients();
        *len = c.len();
        if cap > 0 {
            if buf.is_null() {
                return Err(Fail(TbStatus::NullPointer, "null buffer".into()));
            }
            let k = cap.min(c.len());
            ptr::copy_nonoverlapping(c.as_ptr(), buf, k);
        }
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TbLowerEstimate {
    /// 4.0 or 2√2.
    pub c: f64,
    pub min_n: u64,
    pub valid: bool,
    /// NaN when undefined.
    pub value: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TbBounds {
    pub upper: u64,
    pub has_improved_upper: bool,
    pub improved_upper: u64,
    pub is_hyperbolic: bool,
    pub excluded_pair: bool,
    /// The `c = 2√2` and `c = 4` estimates; NaN values for torus links.
    pub lower: [TbLowerEstimate; 2],
    /// NaN for torus links.
    pub vol_lower: f64,
    pub vol_upper: f64,
    /// NaN unless a volume was supplied.
    pub vol_based_lower: f64,
}

/// Complexity and volume bounds. Pass NaN as `vol` when no volume is known.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_bounds(p: u64, q: u64, n: u64, vol: f64, out: *mut TbBounds) -> TbStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s = SlopePair::new(p, q).map_err(invalid)?;
        let vol = (!vol.is_nan()).then_some(vol);
        let b = bounds_report(s, n, vol).map_err(invalid)?;
        let missing = TbLowerEstimate {
            c: f64::NAN,
            min_n: 0,
            valid: false,
            value: f64::NAN,
        };
        let lower = b.lower.as_ref().map_or([missing; 2], |l| {
            l.candidates.map(|c| TbLowerEstimate {
                c: c.c.value(),
                min_n: c.min_n,
                valid: c.valid,
                value: c.value.unwrap_or(f64::NAN),
            })
        });
        *out = TbBounds {
            upper: b.upper,
            has_improved_upper: b.improved_upper.is_some(),
            improved_upper: b.improved_upper.unwrap_or(0),
            is_hyperbolic: b.is_hyperbolic,
            excluded_pair: b.excluded_pair,
            lower,
            vol_lower: b.vol_lower.unwrap_or(f64::NAN),
            vol_upper: b.vol_upper.unwrap_or(f64::NAN),
            vol_based_lower: b
                .vol_based_cover_lower
                .and_then(|e| e.value)
                .unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

/// Opaque triangulation of `M_{n,m}(p, q)`.
pub struct TbTriangulation {
    tri: Triangulation,
}

/// Builds the triangulation of `M_{n,m}(p, q)`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// to be released with [`tb_triangulation_free`].
#[no_mangle]
pub unsafe extern "C" fn tb_triangulation_new(
    p: u64,
    q: u64,
    n: u64,
    m: u64,
    out: *mut *mut TbTriangulation,
) -> TbStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let (_, tri) = construct(CaseInput { p, q, n, m })?;
        *out = Box::into_raw(Box::new(TbTriangulation { tri }));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must be null or a live handle from [`tb_triangulation_new`].
#[no_mangle]
pub unsafe extern "C" fn tb_triangulation_free(h: *mut TbTriangulation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

fn handle<'a>(h: *const TbTriangulation) -> Result<&'a TbTriangulation, Fail> {
    // SAFETY: callers pass null or a live handle.
    unsafe { h.as_ref() }.ok_or_else(|| Fail(TbStatus::NullPointer, "null handle".into()))
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TbValidation {
    pub tet_count: u64,
    pub vertex_count: u64,
    pub edge_count: u64,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub all_faces_glued: bool,
    pub closed_manifold: bool,
}

/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_triangulation_validate(h: *const TbTriangulation, out: *mut TbValidation) -> TbStatus {
    guard(|| {
        let h = handle(h)?;
        let out = out_ref(out)?;
        let r = validate_triangulation(&h.tri);
        *out = TbValidation {
            tet_count: r.tet_count as u64,
            vertex_count: r.vertex_count as u64,
            edge_count: r.edge_count as u64,
            euler_characteristic: r.chi,
            orientable: r.orientable,
            all_faces_glued: r.all_faces_glued,
            closed_manifold: r.closed_manifold,
        };
        Ok(())
    })
}

/// Gluing table in the text format. Free the result with [`tb_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_triangulation_to_text(h: *const TbTriangulation, out: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let h = handle(h)?;
        let out = out_ref(out)?;
        *out = to_c_string(h.tri.to_text())?;
        Ok(())
    })
}

/// First homology: free rank in `free_rank`, and a description such as
/// `Z/4 + Z/4` in `text` (free with [`tb_string_free`]).
///
/// # Safety
/// `h` must be a live handle; the output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_triangulation_h1(
    h: *const TbTriangulation,
    free_rank: *mut u64,
    text: *mut *mut c_char,
) -> TbStatus {
    guard(|| {
        let h = handle(h)?;
        let free_rank = out_ref(free_rank)?;
        let text = out_ref(text)?;
        let hom = homology(&triangulation_complex(&h.tri), 1).map_err(|e| Fail(TbStatus::Internal, e.to_string()))?;
        *free_rank = hom.free_rank as u64;
        *text = to_c_string(hom.to_string())?;
        Ok(())
    })
}

/// Full report as JSON. Free the result with [`tb_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tb_report_json(p: u64, q: u64, n: u64, m: u64, out: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let r = build_report(CaseInput { p, q, n, m })?;
        let s = serde_json::to_string(&r).map_err(|e| Fail(TbStatus::Internal, e.to_string()))?;
        *out = to_c_string(s)?;
        Ok(())
    })
}
