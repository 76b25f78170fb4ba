//! C ABI for `dehnfill`.
//!
//! Every entry point returns a [`DhfStatus`] and writes results through
//! out-pointers. On failure the out-pointers are left untouched and
//! [`dhf_last_error`] describes the problem. Panics never cross the
//! boundary; they surface as `DHF_STATUS_PANIC`.
//!
//! Handles (`DhfEnvelope`, `DhfSlopeList`) are opaque and owned by the
//! caller once created; release them with the matching `_free` function.
//!
//! Pointer contract: every pointer argument is either null (reported as
//! `DHF_STATUS_NULL_POINTER`) or valid for the reads and writes its type
//! implies, and an array pointer covers the length passed with it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::ptr;

use dehnfill::certificates::certify_with_bounds;
use dehnfill::envelope::{Branch, Envelope};
use dehnfill::lattice::{enumerate_short_slopes, CuspShape, ShortSlope};
use dehnfill::num_complex::Complex64;
use dehnfill::torus::{ComplexLength, TubularTorus};
use dehnfill::weitzenboeck::{boundary_form_b, BoundaryCurvature, FourierMode1Form};
use dehnfill::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DhfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Orientation = 3,
    InfiniteCoefficient = 4,
    Degenerate = 5,
    Uncertifiable = 6,
    Quadrature = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DhfBranch {
    /// `f`: gives the upper bounds.
    Upper = 0,
    /// `f̃`: gives the lower bounds.
    Lower = 1,
}

/// Flattened certificate. Bound fields are NaN unless `has_bounds`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhfCertificate {
    pub combined_lhat: f64,
    pub certified: bool,
    pub margin: f64,
    pub tube_radius_floor: f64,
    pub has_bounds: bool,
    pub volume_drop_lo: f64,
    pub volume_drop_hi: f64,
    pub visual_area_lo: f64,
    pub visual_area_hi: f64,
    pub core_length_hi: f64,
    pub z_hat: f64,
    pub z_tilde: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhfSlope {
    pub p: i64,
    pub q: i64,
    pub lhat: f64,
}

/// One Fourier coefficient `(c₁, c₂)` of a 1-form at frequency `(m, n)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DhfMode {
    pub m: i32,
    pub n: i32,
    pub c1_re: f64,
    pub c1_im: f64,
    pub c2_re: f64,
    pub c2_im: f64,
}

/// Opaque envelope evaluator.
pub struct DhfEnvelope(Envelope);

/// Opaque list of short slopes.
pub struct DhfSlopeList(Vec<ShortSlope>);

enum Failure {
    Null(&'static str),
    Index(usize, usize),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F>(f: F) -> DhfStatus
where
    F: FnOnce() -> Result<(), Failure> + UnwindSafe,
{
    let (status, msg) = match catch_unwind(f) {
        Ok(Ok(())) => (DhfStatus::Ok, None),
        Ok(Err(Failure::Null(what))) => (DhfStatus::NullPointer, Some(format!("{what} is null"))),
        Ok(Err(Failure::Index(i, len))) => (
            DhfStatus::IndexOutOfRange,
            Some(format!("index {i} out of range for length {len}")),
        ),
        Ok(Err(Failure::Lib(e))) => {
            let status = match e {
                Error::Domain(_) => DhfStatus::Domain,
                Error::Orientation(_) => DhfStatus::Orientation,
                Error::InfiniteCoefficient => DhfStatus::InfiniteCoefficient,
                Error::Degenerate(_) => DhfStatus::Degenerate,
                Error::Uncertifiable(_) => DhfStatus::Uncertifiable,
                Error::Quadrature(_) => DhfStatus::Quadrature,
            };
            (status, Some(e.to_string()))
        }
        Err(_) => (DhfStatus::Panic, Some("internal panic".to_string())),
    };
    match msg {
        Some(m) => set_last_error(m),
        None => LAST_ERROR.with(|e| *e.borrow_mut() = None),
    }
    status
}

fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: callers promise a valid, aligned, writable pointer or null.
    unsafe { p.as_mut() }.ok_or(Failure::Null(what))
}

fn input<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: callers promise a valid, aligned pointer or null.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null, and callers promise `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

fn branch(b: DhfBranch) -> Branch {
    match b {
        DhfBranch::Upper => Branch::Upper,
        DhfBranch::Lower => Branch::Lower,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dhf_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version contains NUL"),
        };
    VERSION.as_ptr()
}

/// Message for the last failed call on this thread, or NULL after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn dhf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds the default envelope (domain `[0.45, 1]`, 129-point table).
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_envelope_new(out_env: *mut *mut DhfEnvelope) -> DhfStatus {
    guard(|| {
        let slot = out(out_env, "out_env")?;
        *slot = Box::into_raw(Box::new(DhfEnvelope(Envelope::standard()?)));
        Ok(())
    })
}

/// Releases an envelope. NULL is ignored.
///
/// # Safety
/// `env` must come from [`dhf_envelope_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dhf_envelope_free(env: *mut DhfEnvelope) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// `f(z)` or `f̃(z)` for `z` in `[0.45, 1]`.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_envelope_profile(
    env: *const DhfEnvelope,
    which: DhfBranch,
    z: f64,
    out_value: *mut f64,
) -> DhfStatus {
    guard(|| {
        let env = input(env, "env")?;
        let v = env.0.profile(branch(which), z)?;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// Solves `profile(z) = x` on the decreasing part of the envelope.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_envelope_invert(
    env: *const DhfEnvelope,
    which: DhfBranch,
    x: f64,
    out_z: *mut f64,
) -> DhfStatus {
    guard(|| {
        let env = input(env, "env")?;
        let z = env.0.invert(branch(which), x)?;
        *out(out_z, "out_z")? = z;
        Ok(())
    })
}

/// Certifies a filling from its per-cusp normalized lengths and, when
/// certified, fills in the geometric bounds.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_certify(
    env: *const DhfEnvelope,
    lhats: *const f64,
    n: usize,
    out_cert: *mut DhfCertificate,
) -> DhfStatus {
    guard(|| {
        let env = input(env, "env")?;
        let lhats = slice(lhats, n, "lhats")?;
        let c = certify_with_bounds(&env.0, lhats)?;
        let nan = f64::NAN;
        *out(out_cert, "out_cert")? = DhfCertificate {
            combined_lhat: c.combined_lhat,
            certified: c.certified,
            margin: c.margin,
            tube_radius_floor: c.tube_radius_floor.unwrap_or(nan),
            has_bounds: c.volume_drop.is_some(),
            volume_drop_lo: c.volume_drop.map_or(nan, |i| i.lo),
            volume_drop_hi: c.volume_drop.map_or(nan, |i| i.hi),
            visual_area_lo: c.visual_area.map_or(nan, |i| i.lo),
            visual_area_hi: c.visual_area.map_or(nan, |i| i.hi),
            core_length_hi: c.core_length_hi.unwrap_or(nan),
            z_hat: c.z_hat.unwrap_or(nan),
            z_tilde: c.z_tilde.unwrap_or(nan),
        };
        Ok(())
    })
}

/// `area_floor(r) = 3.3957 tanh r / cosh 2r`.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_area_floor(r: f64, out_value: *mut f64) -> DhfStatus {
    guard(|| {
        let v = dehnfill::packing::area_floor(r)?;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// Normalized length of the slope `(p, q)` on the cusp with shape `re + i·im`.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_slope_normalized_length(
    re: f64,
    im: f64,
    p: i64,
    q: i64,
    out_value: *mut f64,
) -> DhfStatus {
    guard(|| {
        let v = CuspShape::new(re, im)?.slope_length(p, q)?;
        *out(out_value, "out_value")? = v;
        Ok(())
    })
}

/// All primitive slopes of normalized length at most `cutoff`.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_enumerate_short_slopes(
    re: f64,
    im: f64,
    cutoff: f64,
    out_list: *mut *mut DhfSlopeList,
) -> DhfStatus {
    guard(|| {
        let slot = out(out_list, "out_list")?;
        let slopes = enumerate_short_slopes(CuspShape::new(re, im)?, cutoff)?;
        *slot = Box::into_raw(Box::new(DhfSlopeList(slopes)));
        Ok(())
    })
}

/// Number of slopes in the list; 0 for NULL.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_slope_list_len(list: *const DhfSlopeList) -> usize {
    // SAFETY: callers pass a live list or null.
    unsafe { list.as_ref() }.map_or(0, |l| l.0.len())
}

/// Copies entry `index` of the list.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_slope_list_get(
    list: *const DhfSlopeList,
    index: usize,
    out_slope: *mut DhfSlope,
) -> DhfStatus {
    guard(|| {
        let list = input(list, "list")?;
        let s = list
            .0
            .get(index)
            .ok_or(Failure::Index(index, list.0.len()))?;
        *out(out_slope, "out_slope")? = DhfSlope {
            p: s.p,
            q: s.q,
            lhat: s.lhat,
        };
        Ok(())
    })
}

/// Releases a slope list. NULL is ignored.
///
/// # Safety
/// `list` must come from [`dhf_enumerate_short_slopes`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dhf_slope_list_free(list: *mut DhfSlopeList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

/// Boundary quadratic form `b(σ, σ)` for a 1-form given by all of its
/// Fourier coefficients, conjugate partners included.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_boundary_form_b(
    k1: f64,
    k2: f64,
    epsilon: f64,
    modes: *const DhfMode,
    n_modes: usize,
    out_value: *mut f64,
) -> DhfStatus {
    guard(|| {
        let curv = BoundaryCurvature::new(k1, k2, epsilon)?;
        let mut map = std::collections::BTreeMap::new();
        for m in slice(modes, n_modes, "modes")? {
            let c = [
                Complex64::new(m.c1_re, m.c1_im),
                Complex64::new(m.c2_re, m.c2_im),
            ];
            if map.insert((m.m, m.n), c).is_some() {
                return Err(
                    Error::Domain(format!("frequency ({}, {}) given twice", m.m, m.n)).into(),
                );
            }
        }
        let sigma = FourierMode1Form::from_modes(map)?;
        let b = boundary_form_b(&curv, &sigma)?;
        *out(out_value, "out_value")? = b;
        Ok(())
    })
}

/// Surgery coefficient `(p, q)` of the torus at radius `r` whose basis
/// curves have complex lengths `a_trans + i·a_rot` and `b_trans + i·b_rot`.
///
/// # Safety
/// See the pointer contract in the crate documentation.
#[no_mangle]
pub unsafe extern "C" fn dhf_surgery_coefficient(
    r: f64,
    a_trans: f64,
    a_rot: f64,
    b_trans: f64,
    b_rot: f64,
    out_p: *mut f64,
    out_q: *mut f64,
) -> DhfStatus {
    guard(|| {
        let torus = TubularTorus::from_complex_lengths(
            r,
            ComplexLength::new(a_trans, a_rot),
            ComplexLength::new(b_trans, b_rot),
        )?;
        let c = torus.surgery_coefficient()?;
        let (p, q) = (out(out_p, "out_p")?, out(out_q, "out_q")?);
        *p = c.p;
        *q = c.q;
        Ok(())
    })
}
