//! C interface. Every fallible call returns a [`DiamondStatus`]; on failure
//! the message is kept per thread and read with [`diamond_last_error`].
//! Handles are opaque, created by `*_new`-style calls and released by the
//! matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use diamond_core::adder::{adder_capacity, adder_cutset, adder_upper_cor2, adder_upper_mgl, adder_upper_thm3, AdderNet, AlphaStrategy};
use diamond_core::dmc::{cutset_bound, lower_bound_optimize, upper_bound_thm2, BitPipes, LowerConfig, MacChannel, UpperConfig};
use diamond_core::gaussian::{gauss_cutset, gauss_lower_best, gauss_upper_cor1, gauss_upper_thm3, GaussianNet, LowerModes, MixtureConfig};
use diamond_core::optim::SimplexConfig;
use diamond_core::sim::{run_trials, SimConfig};
use diamond_core::{BoundReport, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Singular = 3,
    Budget = 4,
    VerificationFailed = 5,
    Io = 6,
    Panic = 7,
}

/// Channel handle.
pub struct DiamondMac(MacChannel);

/// Result of a bound evaluation.
pub struct DiamondReport(BoundReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DiamondStatus {
    match e {
        Error::Singular(_) => DiamondStatus::Singular,
        Error::Budget(_) => DiamondStatus::Budget,
        Error::Verification(_) => DiamondStatus::VerificationFailed,
        Error::Io(_) => DiamondStatus::Io,
        _ => DiamondStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (DiamondStatus, String)>) -> DiamondStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DiamondStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            DiamondStatus::Panic
        }
    }
}

fn core<T>(r: diamond_core::Result<T>) -> Result<T, (DiamondStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (DiamondStatus, String) {
    (DiamondStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (DiamondStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (DiamondStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (DiamondStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn diamond_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn diamond_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Channel from a row-major table `p[(x1 * x2_size + x2) * y_size + y]`.
///
/// # Safety
/// `p` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_mac_new(
    x1_size: usize,
    x2_size: usize,
    y_size: usize,
    p: *const f64,
    len: usize,
    out: *mut *mut DiamondMac,
) -> DiamondStatus {
    guard(|| {
        if p.is_null() {
            return Err(null("transition table"));
        }
        let table = std::slice::from_raw_parts(p, len).to_vec();
        let mac = core(MacChannel::new(x1_size, x2_size, y_size, table))?;
        write_out(out, Box::into_raw(Box::new(DiamondMac(mac))))
    })
}

/// Channel from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_mac_from_json(json: *const c_char, out: *mut *mut DiamondMac) -> DiamondStatus {
    guard(|| {
        let mac = core(MacChannel::from_json(read_str(json, "json")?))?;
        write_out(out, Box::into_raw(Box::new(DiamondMac(mac))))
    })
}

#[no_mangle]
pub extern "C" fn diamond_mac_binary_adder() -> *mut DiamondMac {
    Box::into_raw(Box::new(DiamondMac(MacChannel::binary_adder())))
}

/// # Safety
/// `mac` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn diamond_mac_free(mac: *mut DiamondMac) {
    if !mac.is_null() {
        drop(Box::from_raw(mac));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondDmcBound {
    Lower = 0,
    Cutset = 1,
    /// Max-min over auxiliary channels.
    UpperAux = 2,
}

/// Evaluates a bound on a channel handle. `quick` trades accuracy for time.
///
/// # Safety
/// `mac` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_dmc_bound(
    mac: *const DiamondMac,
    c1: f64,
    c2: f64,
    which: DiamondDmcBound,
    quick: c_int,
    out: *mut *mut DiamondReport,
) -> DiamondStatus {
    guard(|| {
        let mac = &mac.as_ref().ok_or_else(|| null("channel"))?.0;
        let pipes = core(BitPipes::new(c1, c2))?;
        let simplex = if quick != 0 { SimplexConfig::quick() } else { SimplexConfig::default() };
        let report = core(match which {
            DiamondDmcBound::Lower => lower_bound_optimize(mac, &pipes, &LowerConfig { u_size: None, simplex }),
            DiamondDmcBound::Cutset => cutset_bound(mac, &pipes, &simplex),
            DiamondDmcBound::UpperAux => {
                upper_bound_thm2(mac, &pipes, &if quick != 0 { UpperConfig::quick() } else { UpperConfig::default() })
            }
        })?;
        write_out(out, Box::into_raw(Box::new(DiamondReport(report))))
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondAdderBound {
    Capacity = 0,
    Cutset = 1,
    /// Markov-choice auxiliary.
    Markov = 2,
    /// Time-sharing converse.
    TimeSharing = 3,
    /// Single-letter relaxation through the entropy-convexity bound.
    Mgl = 4,
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_adder_bound(c1: f64, c2: f64, which: DiamondAdderBound, out: *mut *mut DiamondReport) -> DiamondStatus {
    guard(|| {
        let net = core(AdderNet::new(c1, c2))?;
        let r = match which {
            DiamondAdderBound::Capacity => adder_capacity(&net),
            DiamondAdderBound::Cutset => adder_cutset(&net),
            DiamondAdderBound::Markov => adder_upper_cor2(&net),
            DiamondAdderBound::TimeSharing => adder_upper_thm3(&net, AlphaStrategy::default()),
            DiamondAdderBound::Mgl => adder_upper_mgl(&net, 1e-3),
        };
        write_out(out, Box::into_raw(Box::new(DiamondReport(r))))
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondGaussBound {
    /// Best lower bound; jointly Gaussian and full cooperation inputs.
    Lower = 0,
    /// Lower bound that also searches two-component mixtures.
    LowerMixture = 1,
    Cutset = 2,
    Markov = 3,
    TimeSharing = 4,
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_gauss_bound(
    p1: f64,
    p2: f64,
    c1: f64,
    c2: f64,
    which: DiamondGaussBound,
    out: *mut *mut DiamondReport,
) -> DiamondStatus {
    guard(|| {
        let net = core(GaussianNet::new(p1, p2, c1, c2))?;
        let r = match which {
            DiamondGaussBound::Lower => gauss_lower_best(&net, LowerModes::default(), &MixtureConfig::default()),
            DiamondGaussBound::LowerMixture => gauss_lower_best(&net, LowerModes::all(), &MixtureConfig::default()),
            DiamondGaussBound::Cutset => gauss_cutset(&net),
            DiamondGaussBound::Markov => gauss_upper_cor1(&net),
            DiamondGaussBound::TimeSharing => gauss_upper_thm3(&net),
        };
        write_out(out, Box::into_raw(Box::new(DiamondReport(r))))
    })
}

/// Bound value in bits, or NaN for a null handle.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn diamond_report_value(report: *const DiamondReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.value)
}

/// Full report as JSON; release with [`diamond_string_free`]. NULL for a
/// null handle.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn diamond_report_json(report: *const DiamondReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => into_c_string(serde_json::to_string(&r.0).unwrap_or_default()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn diamond_report_free(report: *mut DiamondReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Runs a named property suite. `passed` receives 0 or 1; a failing suite
/// still returns `DIAMOND_STATUS_OK`. `json_out` may be NULL.
///
/// # Safety
/// `suite` must be NUL-terminated; `passed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_verify(suite: *const c_char, passed: *mut c_int, json_out: *mut *mut c_char) -> DiamondStatus {
    guard(|| {
        let rep = core(diamond_core::verify::run_suite(read_str(suite, "suite")?))?;
        write_out(passed, rep.passed as c_int)?;
        if !json_out.is_null() {
            json_out.write(into_c_string(serde_json::to_string(&rep).unwrap_or_default()));
        }
        Ok(())
    })
}

/// Runs the simulator on a JSON configuration and returns the outcome as JSON.
///
/// # Safety
/// `config` must be NUL-terminated; `json_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn diamond_simulate(config: *const c_char, json_out: *mut *mut c_char) -> DiamondStatus {
    guard(|| {
        let cfg: SimConfig = core(serde_json::from_str(read_str(config, "config")?).map_err(Error::from))?;
        let outcome = core(run_trials(&cfg))?;
        write_out(json_out, into_c_string(serde_json::to_string(&outcome).unwrap_or_default()))
    })
}
