#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! C ABI for dlfold. Objects are opaque handles released with their
//! `*_free` function; every fallible call returns a [`DlfStatus`] and
//! leaves a message for [`dlf_last_error`] on failure. Angles are in
//! radians.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dlfold::crease_pattern::{load_fold, save_fold, save_svg, CreasePattern, SvgStyle};
use dlfold::double_line::{
    build_dl, canonical_star, classify_theta, fit_radii, DLMode, DoubleLineError, DoubleLineParams, ThetaRegime,
};
use dlfold::fold3d::{log_grid, propagate_fold, sweep_motion};
use dlfold::kinematics::{angles_from_multipliers, NetworkModes};
use dlfold::patterns::{gen_dl_miura, gen_dl_yoshimura, gen_miura, gen_single_deg4, gen_yoshimura, motion_of};
use dlfold::symmetric::count_modes;
use dlfold::thickening::{
    clearance_check, closing_fold_max, max_thickness, thicken, thickness_bound, Side, ThickPanelParams,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Domain = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlfMode {
    AI = 0,
    AII = 1,
    BI = 2,
    BII = 3,
    SymPlus = 4,
    SymMinus = 5,
}

impl From<DlfMode> for DLMode {
    fn from(m: DlfMode) -> Self {
        match m {
            DlfMode::AI => DLMode::AI,
            DlfMode::AII => DLMode::AII,
            DlfMode::BI => DLMode::BI,
            DlfMode::BII => DLMode::BII,
            DlfMode::SymPlus => DLMode::SymPlus,
            DlfMode::SymMinus => DLMode::SymMinus,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlfRegime {
    FullRange = 0,
    Finite = 1,
    Critical = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DlfSide {
    Above = 0,
    Below = 1,
}

/// A crease pattern.
pub struct DlfPattern(CreasePattern);

/// A one-parameter rigid folding motion of a pattern.
pub struct DlfMotion {
    pattern: CreasePattern,
    modes: NetworkModes,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Fail(DlfStatus, String);

impl Fail {
    fn null(what: &str) -> Self {
        Fail(DlfStatus::NullPointer, format!("{what} is null"))
    }
    fn arg(msg: impl Into<String>) -> Self {
        Fail(DlfStatus::InvalidArgument, msg.into())
    }
}

impl<E: Into<dlfold::Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        let e: dlfold::Error = e.into();
        let status = match e {
            dlfold::Error::Pattern(dlfold::crease_pattern::PatternError::Parse(_)) => DlfStatus::Parse,
            _ => DlfStatus::Domain,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DlfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DlfStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DlfStatus::Panic
        }
    }
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail::null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::null(what))
}

fn boxed_pattern(out: &mut *mut DlfPattern, p: CreasePattern) {
    *out = Box::into_raw(Box::new(DlfPattern(p)));
}

/// Copies `bytes` into `buf` when it fits; `len` always receives the size.
unsafe fn write_buffer(bytes: &[u8], buf: *mut u8, cap: usize, len: *mut usize) -> Result<(), Fail> {
    *out_ptr(len, "len")? = bytes.len();
    if bytes.len() > cap {
        return Err(Fail(DlfStatus::BufferTooSmall, format!("need {} bytes, buffer holds {cap}", bytes.len())));
    }
    if !bytes.is_empty() {
        if buf.is_null() {
            return Err(Fail::null("buf"));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
    }
    Ok(())
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn dlf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dlf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a FOLD document of `len` bytes.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_load_fold(bytes: *const u8, len: usize, out: *mut *mut DlfPattern) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if bytes.is_null() && len > 0 {
            return Err(Fail::null("bytes"));
        }
        let data = if len == 0 { &[][..] } else { std::slice::from_raw_parts(bytes, len) };
        boxed_pattern(out, load_fold(data)?);
        Ok(())
    })
}

/// # Safety
/// `pattern` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_free(pattern: *mut DlfPattern) {
    if !pattern.is_null() {
        drop(Box::from_raw(pattern));
    }
}

/// Vertex, crease and face counts; any output may be null.
///
/// # Safety
/// `pattern` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_counts(
    pattern: *const DlfPattern,
    vertices: *mut usize,
    creases: *mut usize,
    faces: *mut usize,
) -> DlfStatus {
    guard(|| {
        let p = &handle(pattern, "pattern")?.0;
        for (ptr, n) in [(vertices, p.vertices().len()), (creases, p.creases().len()), (faces, p.faces().len())] {
            if let Some(slot) = ptr.as_mut() {
                *slot = n;
            }
        }
        Ok(())
    })
}

/// Coordinates of vertex `index`.
///
/// # Safety
/// `pattern` must be a live handle; `x` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_vertex(pattern: *const DlfPattern, index: usize, x: *mut f64, y: *mut f64) -> DlfStatus {
    guard(|| {
        let p = &handle(pattern, "pattern")?.0;
        let v = p.vertices().get(index).ok_or_else(|| Fail::arg(format!("vertex {index} of {}", p.vertices().len())))?;
        *out_ptr(x, "x")? = v.x;
        *out_ptr(y, "y")? = v.y;
        Ok(())
    })
}

/// Serializes to FOLD. `len` receives the size in bytes; when `cap` is too
/// small nothing is copied and the call returns `BufferTooSmall`.
///
/// # Safety
/// `pattern` must be a live handle; `buf` must hold `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_save_fold(pattern: *const DlfPattern, buf: *mut u8, cap: usize, len: *mut usize) -> DlfStatus {
    guard(|| write_buffer(&save_fold(&handle(pattern, "pattern")?.0), buf, cap, len))
}

/// SVG drawing, with the buffer protocol of [`dlf_pattern_save_fold`].
///
/// # Safety
/// As for [`dlf_pattern_save_fold`].
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_save_svg(pattern: *const DlfPattern, buf: *mut u8, cap: usize, len: *mut usize) -> DlfStatus {
    guard(|| write_buffer(&save_svg(&handle(pattern, "pattern")?.0, &SvgStyle::default()), buf, cap, len))
}

/// Largest closure residual of the pattern folded by `angles`.
///
/// # Safety
/// `angles` must hold one value per crease; `residual` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_pattern_fold_residual(
    pattern: *const DlfPattern,
    angles: *const f64,
    count: usize,
    residual: *mut f64,
) -> DlfStatus {
    guard(|| {
        let p = &handle(pattern, "pattern")?.0;
        if count != p.creases().len() {
            return Err(Fail::arg(format!("{count} angles for {} creases", p.creases().len())));
        }
        let angles = handle(angles, "angles").map(|a| std::slice::from_raw_parts(a, count))?;
        let state = propagate_fold(p, &dlfold::crease_pattern::FoldAngleVector(angles.to_vec()))?;
        *out_ptr(residual, "residual")? = state.max_residual();
        Ok(())
    })
}

/// Miura-ori with `rows × cols` cells and sector angle `alpha`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_gen_miura(rows: usize, cols: usize, alpha: f64, out: *mut *mut DlfPattern) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        boxed_pattern(out, gen_miura(rows, cols, alpha)?.pattern);
        Ok(())
    })
}

/// Elongated Yoshimura; `elongation > 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_gen_yoshimura(rows: usize, cols: usize, elongation: f64, out: *mut *mut DlfPattern) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        boxed_pattern(out, gen_yoshimura(rows, cols, elongation)?.pattern);
        Ok(())
    })
}

/// Double-lined Miura-ori with the same `theta` at every vertex.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_gen_dl_miura(
    rows: usize,
    cols: usize,
    alpha: f64,
    theta: f64,
    out: *mut *mut DlfPattern,
) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        boxed_pattern(out, gen_dl_miura(rows, cols, alpha, theta)?.pattern);
        Ok(())
    })
}

/// Double-lined elongated Yoshimura.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_gen_dl_yoshimura(
    rows: usize,
    cols: usize,
    elongation: f64,
    theta: f64,
    out: *mut *mut DlfPattern,
) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        boxed_pattern(out, gen_dl_yoshimura(rows, cols, elongation, theta)?.pattern);
        Ok(())
    })
}

/// Flat-foldable degree-4 vertex with sectors `α, β, π−α, π−β`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_gen_single(alpha: f64, beta: f64, out: *mut *mut DlfPattern) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        boxed_pattern(out, gen_single_deg4(alpha, beta)?.pattern);
        Ok(())
    })
}

/// Double-lined degree-4 vertex in a named mode. Radii are 1 unless that
/// pushes a corner out of its sector, in which case they are fitted.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_double_line(
    alpha: f64,
    beta: f64,
    theta: f64,
    mode: DlfMode,
    out: *mut *mut DlfPattern,
) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let star = canonical_star(alpha, beta)?;
        let mut params = DoubleLineParams::new(theta, 4).with_mode(mode.into());
        let dl = match build_dl(&star, &params) {
            Err(DoubleLineError::CornerInversion(_)) => {
                params.radii = fit_radii(&star, theta)?;
                build_dl(&star, &params)?
            }
            r => r?,
        };
        boxed_pattern(out, dl.pattern);
        Ok(())
    })
}

/// Regime of the pair sums at `theta`; `m` receives the extreme fold of a
/// finite regime and 0 otherwise.
///
/// # Safety
/// `regime` must be writable; `m` may be null.
#[no_mangle]
pub unsafe extern "C" fn dlf_classify_theta(
    mode: DlfMode,
    alpha: f64,
    beta: f64,
    theta: f64,
    regime: *mut DlfRegime,
    m: *mut f64,
) -> DlfStatus {
    guard(|| {
        let regime = out_ptr(regime, "regime")?;
        let (r, extreme) = match classify_theta(mode.into(), alpha, beta, theta)? {
            ThetaRegime::FullRange => (DlfRegime::FullRange, 0.0),
            ThetaRegime::Finite { m, .. } => (DlfRegime::Finite, m),
            ThetaRegime::Critical => (DlfRegime::Critical, 0.0),
        };
        *regime = r;
        if let Some(slot) = m.as_mut() {
            *slot = extreme;
        }
        Ok(())
    })
}

/// Number of folding modes of the symmetric degree-2n double-line vertex.
///
/// # Safety
/// `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_count_modes(n: usize, count: *mut u64) -> DlfStatus {
    guard(|| {
        let count = out_ptr(count, "count")?;
        let c = count_modes(n)?;
        *count = u64::try_from(c).map_err(|_| Fail(DlfStatus::Domain, format!("count for n = {n} exceeds 64 bits")))?;
        Ok(())
    })
}

/// `c · tan((π − ρ_max)/2)`.
#[no_mangle]
pub extern "C" fn dlf_max_thickness(half_width: f64, rho_max: f64) -> f64 {
    max_thickness(half_width, rho_max)
}

/// Finds a rigid-folding motion of the pattern.
///
/// # Safety
/// `pattern` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_motion_new(pattern: *const DlfPattern, out: *mut *mut DlfMotion) -> DlfStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let p = &handle(pattern, "pattern")?.0;
        let modes = motion_of(p)?;
        *out = Box::into_raw(Box::new(DlfMotion { pattern: p.clone(), modes }));
        Ok(())
    })
}

/// # Safety
/// `motion` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dlf_motion_free(motion: *mut DlfMotion) {
    if !motion.is_null() {
        drop(Box::from_raw(motion));
    }
}

/// Fold angles `2 atan(m_e t)` of every crease at parameter `t`.
///
/// # Safety
/// `angles` must hold `count` writable values, one per crease.
#[no_mangle]
pub unsafe extern "C" fn dlf_motion_angles(motion: *const DlfMotion, t: f64, angles: *mut f64, count: usize) -> DlfStatus {
    guard(|| {
        let m = handle(motion, "motion")?;
        let n = m.modes.multipliers.len();
        if count != n {
            return Err(Fail::arg(format!("buffer of {count} for {n} creases")));
        }
        if angles.is_null() {
            return Err(Fail::null("angles"));
        }
        let a = angles_from_multipliers(&m.modes.multipliers, t);
        ptr::copy_nonoverlapping(a.0.as_ptr(), angles, n);
        Ok(())
    })
}

/// Thickness bound and smallest panel clearance for panels of thickness
/// `fraction` times the bound, over `samples` log-spaced motion steps up
/// to `t_max`.
///
/// # Safety
/// `motion` must be a live handle; `bound` and `clearance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dlf_motion_thick_clearance(
    motion: *const DlfMotion,
    side: DlfSide,
    fraction: f64,
    t_max: f64,
    samples: usize,
    bound: *mut f64,
    clearance: *mut f64,
) -> DlfStatus {
    guard(|| {
        let m = handle(motion, "motion")?;
        let bound = out_ptr(bound, "bound")?;
        let clearance = out_ptr(clearance, "clearance")?;
        if !(t_max > 1e-3 && t_max.is_finite()) || samples == 0 || !(fraction > 0.0) {
            return Err(Fail::arg("need t_max > 1e-3, samples > 0 and fraction > 0"));
        }
        let side = match side {
            DlfSide::Above => Side::Above,
            DlfSide::Below => Side::Below,
        };
        let motion = sweep_motion(&m.pattern, &m.modes, &log_grid(1e-3, t_max, samples))?;
        let rho = closing_fold_max(&m.pattern, &motion, side);
        let (_, b) = thickness_bound(&m.pattern, &rho)
            .ok_or_else(|| Fail(DlfStatus::Domain, "no crease folds toward the panels".into()))?;
        let solids = thicken(&m.pattern, &motion, &ThickPanelParams::new(fraction * b, side))?;
        *bound = b;
        *clearance = clearance_check(&m.pattern, &solids, &motion)?;
        Ok(())
    })
}
