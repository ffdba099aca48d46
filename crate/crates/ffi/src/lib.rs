//! C ABI for the spectral counting library.
//!
//! Conventions, uniform across the interface:
//!
//! - Objects cross the boundary as opaque pointers allocated on this side;
//!   every constructor has a matching `sc_*_free`, and passing `NULL` to a
//!   free function is a no-op.
//! - Fallible calls return [`ScStatus`]; `SC_STATUS_OK` is zero. After any
//!   non-OK status, [`sc_last_error_message`] returns a human-readable
//!   description (per thread).
//! - Returned `char*` strings are NUL-terminated, allocated here, and must
//!   be released with [`sc_string_free`].
//! - Panics never unwind across the boundary; they surface as
//!   `SC_STATUS_PANICKED` (or `NULL` from pointer-returning calls).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_complex::Complex64;
use spectral_count::matrix::{ComplexMatrix, HermitianMatrix};
use spectral_count::models::{self, ModelSpec};
use spectral_count::rng::SampleSeed;
use spectral_count::{eigen, reduction, wegner, witness, Error};

/// Opaque handle to a Hermitian matrix.
pub struct ScMatrix {
    inner: HermitianMatrix,
}

/// Opaque handle to a random-model description.
pub struct ScModel {
    inner: ModelSpec,
}

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was out of the call's documented range.
    InvalidArgument = 3,
    /// A JSON document failed to parse or validate.
    BadDocument = 4,
    /// A numerical precondition failed (singular matrix, norm bound, ...).
    Numeric = 5,
    /// The search completed but found nothing to certify.
    NotFound = 6,
    /// An output buffer was too small; the error message names the needed size.
    BufferTooSmall = 7,
    /// An internal panic was caught at the boundary.
    Panicked = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn fail(status: ScStatus, msg: impl Into<String>) -> ScStatus {
    set_error(msg);
    status
}

fn error_status(e: &Error) -> ScStatus {
    match e {
        Error::InvalidArgument { .. } => ScStatus::InvalidArgument,
        Error::Config { .. } | Error::Json { .. } | Error::Io { .. } => ScStatus::BadDocument,
        _ => ScStatus::Numeric,
    }
}

fn lib_fail(e: &Error) -> ScStatus {
    fail(error_status(e), e.to_string())
}

fn guard_status(f: impl FnOnce() -> ScStatus) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ScStatus::Panicked, "internal panic caught at the C boundary"),
    }
}

fn guard_ptr<T>(f: impl FnOnce() -> *mut T) -> *mut T {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(p) => p,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            ptr::null_mut()
        }
    }
}

fn into_string_ptr(text: String) -> *mut c_char {
    // the library never emits interior NULs; replace defensively anyway
    match CString::new(text) {
        Ok(s) => s.into_raw(),
        Err(e) => {
            let bytes: Vec<u8> = e
                .into_vec()
                .into_iter()
                .map(|b| if b == 0 { b' ' } else { b })
                .collect();
            CString::new(bytes).expect("NULs replaced").into_raw()
        }
    }
}

// ---------------------------------------------------------------------------
// Versioning, errors, strings
// ---------------------------------------------------------------------------

/// Library version as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf`.
///
/// Returns the full length of the message including the trailing NUL. When
/// `buf` is NULL or `cap` is 0 nothing is written, so calling once with
/// `buf = NULL` sizes the buffer. Longer messages are truncated to
/// `cap - 1` bytes plus a NUL.
///
/// # Safety
/// `buf`, when non-NULL, must point to at least `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sc_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let needed = msg.len() + 1;
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        needed
    })
}

/// Release a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned by a `*_json` or other
/// string-returning function of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Build a `dim x dim` Hermitian matrix from row-major entry arrays.
///
/// `im` may be NULL for a real matrix. Slightly non-Hermitian input is
/// symmetrized (each off-diagonal pair is averaged, diagonals keep their
/// real part), matching the JSON loader. Returns NULL on error.
///
/// # Safety
/// `re` must point to `dim * dim` readable doubles; `im`, when non-NULL,
/// must too.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
) -> *mut ScMatrix {
    guard_ptr(|| {
        if re.is_null() {
            set_error("re must not be NULL");
            return ptr::null_mut();
        }
        let Some(len) = dim.checked_mul(dim) else {
            set_error(format!("dim {dim} overflows dim * dim"));
            return ptr::null_mut();
        };
        let re = slice::from_raw_parts(re, len);
        let im = if im.is_null() {
            None
        } else {
            Some(slice::from_raw_parts(im, len))
        };
        let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(re[i * dim + j], im.map_or(0.0, |im| im[i * dim + j]))
        });
        match HermitianMatrix::from_complex(&m) {
            Ok(inner) => Box::into_raw(Box::new(ScMatrix { inner })),
            Err(e) => {
                lib_fail(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Parse a matrix from its JSON document form
/// (`{"dim": N, "re": [[...]], "im": [[...]]}`; `im` optional).
/// Returns NULL on error.
///
/// # Safety
/// `text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_from_json(text: *const c_char) -> *mut ScMatrix {
    guard_ptr(|| {
        if text.is_null() {
            set_error("text must not be NULL");
            return ptr::null_mut();
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("text is not valid UTF-8");
            return ptr::null_mut();
        };
        match HermitianMatrix::from_json(text) {
            Ok(inner) => Box::into_raw(Box::new(ScMatrix { inner })),
            Err(e) => {
                lib_fail(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Serialize a matrix to its JSON document form. Returns NULL on error;
/// release the result with [`sc_string_free`].
///
/// # Safety
/// `m` must be a live matrix handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_to_json(m: *const ScMatrix) -> *mut c_char {
    guard_ptr(|| {
        let Some(m) = m.as_ref() else {
            set_error("matrix handle is NULL");
            return ptr::null_mut();
        };
        into_string_ptr(m.inner.to_json())
    })
}

/// Release a matrix handle. NULL is a no-op.
///
/// # Safety
/// `m` must be NULL or a live matrix handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_free(m: *mut ScMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Dimension of the matrix; 0 when the handle is NULL.
///
/// # Safety
/// `m` must be NULL or a live matrix handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_dim(m: *const ScMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.dim())
}

/// Write all eigenvalues, ascending, into `out`.
///
/// `cap` must be at least the matrix dimension; on `BUFFER_TOO_SMALL` the
/// error message names the required count.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must point to `cap` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_matrix_eigenvalues(
    m: *const ScMatrix,
    out: *mut f64,
    cap: usize,
) -> ScStatus {
    guard_status(|| {
        let Some(m) = m.as_ref() else {
            return fail(ScStatus::NullPointer, "matrix handle is NULL");
        };
        if out.is_null() {
            return fail(ScStatus::NullPointer, "out must not be NULL");
        }
        let n = m.inner.dim();
        if cap < n {
            return fail(
                ScStatus::BufferTooSmall,
                format!("eigenvalue buffer holds {cap}, need {n}"),
            );
        }
        let eigs = eigen::eigenvalues(&m.inner);
        ptr::copy_nonoverlapping(eigs.as_ptr(), out, n);
        ScStatus::Ok
    })
}

/// Count eigenvalues in the open window `(center - eps, center + eps)`.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must point to a writable `size_t`.
#[no_mangle]
pub unsafe extern "C" fn sc_count_in_window(
    m: *const ScMatrix,
    center: f64,
    eps: f64,
    out: *mut usize,
) -> ScStatus {
    guard_status(|| {
        let Some(m) = m.as_ref() else {
            return fail(ScStatus::NullPointer, "matrix handle is NULL");
        };
        if out.is_null() {
            return fail(ScStatus::NullPointer, "out must not be NULL");
        }
        if !center.is_finite() || !eps.is_finite() {
            return fail(ScStatus::InvalidArgument, "center and eps must be finite");
        }
        *out = eigen::count_in_interval(&m.inner, center, eps);
        ScStatus::Ok
    })
}

// ---------------------------------------------------------------------------
// Witness search
// ---------------------------------------------------------------------------

/// The guaranteed search strength for witness size `m` on an `n`-dimensional
/// matrix: writes `c_m = 1/(m! 2^(m-1))` and `k = c_m / n`.
///
/// # Safety
/// `out_c_m` and `out_k` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sc_counting_constant(
    m: usize,
    n: usize,
    out_c_m: *mut f64,
    out_k: *mut f64,
) -> ScStatus {
    guard_status(|| {
        if out_c_m.is_null() || out_k.is_null() {
            return fail(ScStatus::NullPointer, "out_c_m and out_k must not be NULL");
        }
        match witness::counting_constant(m, n) {
            Ok(c) => {
                *out_c_m = c.c_m;
                *out_k = c.k;
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}

/// Search for a witness pair certifying at least `m` eigenvalues in
/// `(-eps, eps)`, at strength `strength` (pass 0 or a negative value to use
/// the guaranteed strength for `(m, dim)`).
///
/// On `OK`, `*out_json` receives the certificate as JSON (release with
/// [`sc_string_free`]). `NOT_FOUND` means the search completed without a
/// certificate; `*out_json` is set to NULL.
///
/// # Safety
/// `matrix` must be a live matrix handle; `out_json` must point to a
/// writable `char*`.
#[no_mangle]
pub unsafe extern "C" fn sc_witness_json(
    matrix: *const ScMatrix,
    eps: f64,
    m: usize,
    strength: f64,
    out_json: *mut *mut c_char,
) -> ScStatus {
    guard_status(|| {
        let Some(mat) = matrix.as_ref() else {
            return fail(ScStatus::NullPointer, "matrix handle is NULL");
        };
        if out_json.is_null() {
            return fail(ScStatus::NullPointer, "out_json must not be NULL");
        }
        *out_json = ptr::null_mut();
        let k = if strength > 0.0 {
            strength
        } else {
            match witness::counting_constant(m, mat.inner.dim()) {
                Ok(c) => c.k,
                Err(e) => return lib_fail(&e),
            }
        };
        match witness::find_witness_pair(&mat.inner, eps, m, k) {
            Ok(Some(cert)) => {
                *out_json = into_string_ptr(cert.to_json());
                ScStatus::Ok
            }
            Ok(None) => fail(
                ScStatus::NotFound,
                format!("no witness pair at strength {k} for m = {m}, eps = {eps}"),
            ),
            Err(e) => lib_fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Shift reduction
// ---------------------------------------------------------------------------

/// Parameters of a norm reduction, see [`sc_reduce`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScReduction {
    /// Integer shift with `3 <= |a| <= L + 3`, at distance >= 2 from the
    /// second matrix's spectrum.
    pub a: i64,
    /// Dimension of the pair.
    pub l: usize,
    /// `|(B1 - a)^{-1}|`; always within `[1/(L+4), 1/2]`.
    pub nu: f64,
    /// Window shrink factor `225 L^4` of the lower count comparison.
    pub lower_scale: f64,
    /// Window dilation factor `7 L^2` of the upper count comparison.
    pub upper_scale: f64,
}

/// Window counts bracketing a sum's count, see [`sc_count_sandwich`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScSandwich {
    /// Count of the transformed pair at the shrunk window.
    pub low: usize,
    /// Count of `B1 + B2` at the requested window.
    pub mid: usize,
    /// Count of the transformed pair at the dilated window.
    pub high: usize,
    /// Whether `low <= mid <= high` held.
    pub holds: bool,
}

/// Compute the shift reduction of a Hermitian pair (`|B1|, |B2| <= 1`, both
/// of dimension L with `L >= 2`): an integer shift, the resolvent norm, and
/// the two window scale factors.
///
/// # Safety
/// `b1` and `b2` must be live matrix handles; `out` must point to a
/// writable [`ScReduction`].
#[no_mangle]
pub unsafe extern "C" fn sc_reduce(
    b1: *const ScMatrix,
    b2: *const ScMatrix,
    out: *mut ScReduction,
) -> ScStatus {
    guard_status(|| {
        let (Some(b1), Some(b2)) = (b1.as_ref(), b2.as_ref()) else {
            return fail(ScStatus::NullPointer, "matrix handles must not be NULL");
        };
        if out.is_null() {
            return fail(ScStatus::NullPointer, "out must not be NULL");
        }
        match reduction::reduce(&b1.inner, &b2.inner) {
            Ok(red) => {
                *out = ScReduction {
                    a: red.a,
                    l: red.l,
                    nu: red.nu,
                    lower_scale: red.lower_scale,
                    upper_scale: red.upper_scale,
                };
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}

/// Evaluate the three-way window-count comparison for a Hermitian pair at
/// `eps` (`0 < eps < 1/2`): counts at the shrunk and dilated windows of the
/// transformed pair bracket the count of `B1 + B2`.
///
/// # Safety
/// `b1` and `b2` must be live matrix handles; `out` must point to a
/// writable [`ScSandwich`].
#[no_mangle]
pub unsafe extern "C" fn sc_count_sandwich(
    b1: *const ScMatrix,
    b2: *const ScMatrix,
    eps: f64,
    out: *mut ScSandwich,
) -> ScStatus {
    guard_status(|| {
        let (Some(b1), Some(b2)) = (b1.as_ref(), b2.as_ref()) else {
            return fail(ScStatus::NullPointer, "matrix handles must not be NULL");
        };
        if out.is_null() {
            return fail(ScStatus::NullPointer, "out must not be NULL");
        }
        match reduction::count_sandwich_check(&b1.inner, &b2.inner, eps) {
            Ok(chk) => {
                *out = ScSandwich {
                    low: chk.low,
                    mid: chk.mid,
                    high: chk.high,
                    holds: chk.holds(),
                };
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}

// ---------------------------------------------------------------------------
// Random models and Monte Carlo sweeps
// ---------------------------------------------------------------------------

/// Parse and validate a random-model description from its JSON form.
/// Returns NULL on error.
///
/// # Safety
/// `text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_model_from_json(text: *const c_char) -> *mut ScModel {
    guard_ptr(|| {
        if text.is_null() {
            set_error("text must not be NULL");
            return ptr::null_mut();
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            set_error("text is not valid UTF-8");
            return ptr::null_mut();
        };
        match ModelSpec::from_json(text) {
            Ok(inner) => Box::into_raw(Box::new(ScModel { inner })),
            Err(e) => {
                lib_fail(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Release a model handle. NULL is a no-op.
///
/// # Safety
/// `model` must be NULL or a live model handle from this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn sc_model_free(model: *mut ScModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Hamiltonian dimension of the model (sites times block size); 0 when the
/// handle is NULL.
///
/// # Safety
/// `model` must be NULL or a live model handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sc_model_dim(model: *const ScModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.dim())
}

/// Draw one Hamiltonian from the model at counter position
/// `(master, trial)`. The same position always yields the same matrix.
/// Returns NULL on error.
///
/// # Safety
/// `model` must be a live model handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sc_sample_hamiltonian(
    model: *const ScModel,
    master: u64,
    trial: u64,
) -> *mut ScMatrix {
    guard_ptr(|| {
        let Some(model) = model.as_ref() else {
            set_error("model handle is NULL");
            return ptr::null_mut();
        };
        match models::sample_hamiltonian(&model.inner, SampleSeed { master, trial }) {
            Ok(inner) => Box::into_raw(Box::new(ScMatrix { inner })),
            Err(e) => {
                lib_fail(&e);
                ptr::null_mut()
            }
        }
    })
}

/// Monte Carlo sweep of window-count event rates: for each level in `ms`
/// and each half-width in `eps`, estimate `P(count >= m)` over `trials`
/// samples (all cells share the same per-trial draws). On `OK`,
/// `*out_json` receives the report rows as a JSON array, ordered level-major
/// then grid order; release it with [`sc_string_free`].
///
/// # Safety
/// `model` must be a live model handle; `eps` must point to `n_eps` readable
/// doubles; `ms` must point to `n_ms` readable `uint32_t`; `out_json` must
/// point to a writable `char*`.
#[no_mangle]
pub unsafe extern "C" fn sc_wegner_sweep_json(
    model: *const ScModel,
    eps: *const f64,
    n_eps: usize,
    ms: *const u32,
    n_ms: usize,
    trials: u64,
    master: u64,
    out_json: *mut *mut c_char,
) -> ScStatus {
    guard_status(|| {
        let Some(model) = model.as_ref() else {
            return fail(ScStatus::NullPointer, "model handle is NULL");
        };
        if eps.is_null() || ms.is_null() || out_json.is_null() {
            return fail(ScStatus::NullPointer, "eps, ms, out_json must not be NULL");
        }
        *out_json = ptr::null_mut();
        let eps = slice::from_raw_parts(eps, n_eps);
        let ms: Vec<usize> = slice::from_raw_parts(ms, n_ms)
            .iter()
            .map(|&m| m as usize)
            .collect();
        let seed = SampleSeed { master, trial: 0 };
        match wegner::sweep_count_probability(&model.inner, eps, &ms, trials, seed) {
            Ok(reports) => {
                let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
                *out_json = into_string_ptr(json);
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}

/// Monte Carlo sweep of small-determinant event rates for the reduced model
/// at integer shift `a` (`|a| >= 3`): for each cutoff in `deltas`, estimate
/// `P(|det| <= delta)` over `trials` samples. On `OK`, `*out_json` receives
/// the report rows as a JSON array; release it with [`sc_string_free`].
///
/// # Safety
/// `model` must be a live model handle; `deltas` must point to `n_deltas`
/// readable doubles; `out_json` must point to a writable `char*`.
#[no_mangle]
pub unsafe extern "C" fn sc_det_event_sweep_json(
    model: *const ScModel,
    a: i64,
    deltas: *const f64,
    n_deltas: usize,
    trials: u64,
    master: u64,
    out_json: *mut *mut c_char,
) -> ScStatus {
    guard_status(|| {
        let Some(model) = model.as_ref() else {
            return fail(ScStatus::NullPointer, "model handle is NULL");
        };
        if deltas.is_null() || out_json.is_null() {
            return fail(ScStatus::NullPointer, "deltas and out_json must not be NULL");
        }
        *out_json = ptr::null_mut();
        let deltas = slice::from_raw_parts(deltas, n_deltas);
        let seed = SampleSeed { master, trial: 0 };
        match wegner::sweep_det_event(&model.inner, a, deltas, trials, seed) {
            Ok(reports) => {
                let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
                *out_json = into_string_ptr(json);
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}

/// Exact probability that `|h + 1/(v - a)| <= delta` for `v` uniform on
/// `[-b, b]` — the closed form the determinant-event sweeps are compared
/// against for single-site models.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn sc_single_site_event_measure(
    h: f64,
    a: f64,
    delta: f64,
    b: f64,
    out: *mut f64,
) -> ScStatus {
    guard_status(|| {
        if out.is_null() {
            return fail(ScStatus::NullPointer, "out must not be NULL");
        }
        match models::single_site_event_measure(h, a, delta, b) {
            Ok(p) => {
                *out = p;
                ScStatus::Ok
            }
            Err(e) => lib_fail(&e),
        }
    })
}
