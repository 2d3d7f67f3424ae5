//! C ABI over `dmirs-core`.
//!
//! Scenarios and sweep results cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Fallible calls return
//! a [`DmirsStatus`] and write results through out-pointers; the message of
//! the most recent failure on the calling thread is available from
//! [`dmirs_last_error`]. Panics are caught at the boundary and reported as
//! [`DmirsStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dmirs_core::arrays::ArraySpec;
use dmirs_core::csv::write_csv;
use dmirs_core::secrecy::{benchmark_no_irs_with_mode, ber_from_snr, cascaded_gain_closed, secrecy_metrics};
use dmirs_core::sweep::{run_heatmap, run_sweep_dab, run_sweep_nr, HeatmapGrid};
use dmirs_core::{numerics, parse_config, AnMode, Error, Position, Scenario, SecrecyMetrics, SweepResult};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmirsStatus {
    Ok = 0,
    /// A required pointer was null or a string was not valid UTF-8.
    InvalidArgument = 1,
    Parse = 2,
    Validation = 3,
    Geometry = 4,
    Domain = 5,
    Dimension = 6,
    Contract = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DmirsAnMode {
    Expected = 0,
    Instantaneous = 1,
}

impl From<DmirsAnMode> for AnMode {
    fn from(mode: DmirsAnMode) -> Self {
        match mode {
            DmirsAnMode::Expected => AnMode::Expected,
            DmirsAnMode::Instantaneous => AnMode::Instantaneous,
        }
    }
}

/// Linear SNR/SINR, rates in bits per channel use, QPSK BERs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DmirsMetrics {
    pub gamma_b: f64,
    pub gamma_e: f64,
    pub rate_b: f64,
    pub rate_e: f64,
    pub rate_s: f64,
    pub ber_b: f64,
    pub ber_probe: f64,
}

impl From<SecrecyMetrics> for DmirsMetrics {
    fn from(m: SecrecyMetrics) -> Self {
        DmirsMetrics {
            gamma_b: m.gamma_b,
            gamma_e: m.gamma_e,
            rate_b: m.rate_b,
            rate_e: m.rate_e,
            rate_s: m.rate_s,
            ber_b: m.ber_b,
            ber_probe: m.ber_probe,
        }
    }
}

/// Opaque scenario handle.
pub struct DmirsScenario(Scenario);

/// Opaque table produced by a sweep or heatmap.
pub struct DmirsSweep(SweepResult);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(DmirsStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Domain(_) => DmirsStatus::Domain,
            Error::DegenerateGeometry(_) => DmirsStatus::Geometry,
            Error::Dimension { .. } => DmirsStatus::Dimension,
            Error::Validation { .. } => DmirsStatus::Validation,
            Error::Parse { .. } => DmirsStatus::Parse,
            Error::Contract(_) => DmirsStatus::Contract,
            Error::Io(_) => DmirsStatus::Io,
        };
        Failure(status, err.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err).into()
    }
}

fn invalid(message: &str) -> Failure {
    Failure(DmirsStatus::InvalidArgument, message.to_owned())
}

/// Runs `body`, converting errors and panics into a status code and the
/// thread's last-error message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DmirsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DmirsStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {message}"));
            DmirsStatus::Panic
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not valid UTF-8")))
}

unsafe fn c_slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| invalid("string contains an interior NUL"))
}

/// Copies the last error message of the calling thread into `buf` as a
/// NUL-terminated string, truncating to `len - 1` bytes. Returns the length
/// needed to hold the full message including its terminator, or 0 if no
/// error has been recorded.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dmirs_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if msg.is_empty() {
            return 0;
        }
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len() + 1
    })
}

/// The built-in reference scenario. Never returns null.
#[no_mangle]
pub extern "C" fn dmirs_scenario_default() -> *mut DmirsScenario {
    Box::into_raw(Box::new(DmirsScenario(Scenario::default())))
}

/// Parses and validates a JSON scenario. Missing keys take their defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_scenario_from_json(
    json: *const c_char,
    out: *mut *mut DmirsScenario,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let scenario = parse_config(c_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(DmirsScenario(scenario)));
        Ok(())
    })
}

/// Serialises the scenario as pretty-printed JSON. Release the string with
/// [`dmirs_string_free`].
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_scenario_to_json(
    scenario: *const DmirsScenario,
    out: *mut *mut c_char,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        *out = into_c_string(handle(scenario, "scenario")?.0.to_json())?;
        Ok(())
    })
}

/// Moves the eavesdropper. The scenario is left unchanged if the new
/// position fails validation.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmirs_scenario_set_eve(scenario: *mut DmirsScenario, x: f64, y: f64) -> DmirsStatus {
    guard(|| {
        let target = out_ref(scenario, "scenario")?;
        let updated = Scenario {
            eve: Position::new(x, y),
            ..target.0.clone()
        };
        updated.validate()?;
        target.0 = updated;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmirs_scenario_free(scenario: *mut DmirsScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmirs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Metrics of the IRS-aided scheme with the eavesdropper at the scenario's
/// `eve` position.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_secrecy_metrics(
    scenario: *const DmirsScenario,
    mode: DmirsAnMode,
    out: *mut DmirsMetrics,
) -> DmirsStatus {
    guard(|| {
        let s = &handle(scenario, "scenario")?.0;
        let out = out_ref(out, "out")?;
        *out = secrecy_metrics(s, s.eve, mode.into())?.into();
        Ok(())
    })
}

/// Metrics of the direct-path-only benchmark.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_benchmark_metrics(
    scenario: *const DmirsScenario,
    mode: DmirsAnMode,
    out: *mut DmirsMetrics,
) -> DmirsStatus {
    guard(|| {
        let s = &handle(scenario, "scenario")?.0;
        let out = out_ref(out, "out")?;
        *out = benchmark_no_irs_with_mode(s, s.eve, mode.into())?.into();
        Ok(())
    })
}

/// Gaussian tail probability `Q(u)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_q_function(u: f64, out: *mut f64) -> DmirsStatus {
    guard(|| {
        *out_ref(out, "out")? = numerics::q_function(u)?;
        Ok(())
    })
}

/// M-PSK bit error rate at linear SNR `gamma`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_ber_from_snr(gamma: f64, m: u32, out: *mut f64) -> DmirsStatus {
    guard(|| {
        *out_ref(out, "out")? = ber_from_snr(gamma, m)?;
        Ok(())
    })
}

/// Real array gain of an `n_elements` IRS focused on `theta_b`, seen from
/// `theta_e` (radians).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_cascaded_gain(
    theta_e: f64,
    theta_b: f64,
    n_elements: usize,
    spacing_wavelengths: f64,
    out: *mut f64,
) -> DmirsStatus {
    guard(|| {
        let irs = ArraySpec::new(n_elements, spacing_wavelengths)?;
        *out_ref(out, "out")? = cascaded_gain_closed(theta_e, theta_b, &irs);
        Ok(())
    })
}

/// Secrecy rate against IRS size for each transmit power.
///
/// # Safety
/// `scenario` must be a live handle; the arrays must hold the stated number
/// of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_nr(
    scenario: *const DmirsScenario,
    nr: *const usize,
    nr_len: usize,
    pt_dbm: *const f64,
    pt_len: usize,
    out: *mut *mut DmirsSweep,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = &handle(scenario, "scenario")?.0;
        let result = run_sweep_nr(s, c_slice(nr, nr_len, "nr")?, c_slice(pt_dbm, pt_len, "pt_dbm")?)?;
        *out = Box::into_raw(Box::new(DmirsSweep(result)));
        Ok(())
    })
}

/// Secrecy rate against the Alice–Bob distance for each transmit power.
///
/// # Safety
/// As for [`dmirs_sweep_nr`].
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_dab(
    scenario: *const DmirsScenario,
    dab_m: *const f64,
    dab_len: usize,
    pt_dbm: *const f64,
    pt_len: usize,
    out: *mut *mut DmirsSweep,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = &handle(scenario, "scenario")?.0;
        let result = run_sweep_dab(
            s,
            c_slice(dab_m, dab_len, "dab_m")?,
            c_slice(pt_dbm, pt_len, "pt_dbm")?,
        )?;
        *out = Box::into_raw(Box::new(DmirsSweep(result)));
        Ok(())
    })
}

/// Probe SINR and BER over a departure-angle × IRS-angle grid, in the
/// scenario's AN mode.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_heatmap(
    scenario: *const DmirsScenario,
    phi_points: usize,
    theta_points: usize,
    out: *mut *mut DmirsSweep,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = &handle(scenario, "scenario")?.0;
        let result = run_heatmap(s, HeatmapGrid::new(phi_points, theta_points))?;
        *out = Box::into_raw(Box::new(DmirsSweep(result)));
        Ok(())
    })
}

/// Row count, or 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_rows(sweep: *const DmirsSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.rows.len())
}

/// Column count, or 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_cols(sweep: *const DmirsSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.columns.len())
}

/// Name of column `col`. Release the string with [`dmirs_string_free`].
///
/// # Safety
/// `sweep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_column_name(
    sweep: *const DmirsSweep,
    col: usize,
    out: *mut *mut c_char,
) -> DmirsStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let s = &handle(sweep, "sweep")?.0;
        let name = s.columns.get(col).ok_or(Error::Dimension {
            expected: s.columns.len(),
            got: col,
        })?;
        *out = into_c_string(name.clone())?;
        Ok(())
    })
}

/// Cell at (`row`, `col`).
///
/// # Safety
/// `sweep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_value(
    sweep: *const DmirsSweep,
    row: usize,
    col: usize,
    out: *mut f64,
) -> DmirsStatus {
    guard(|| {
        let s = &handle(sweep, "sweep")?.0;
        let out = out_ref(out, "out")?;
        let r = s.rows.get(row).ok_or(Error::Dimension {
            expected: s.rows.len(),
            got: row,
        })?;
        *out = *r.get(col).ok_or(Error::Dimension {
            expected: r.len(),
            got: col,
        })?;
        Ok(())
    })
}

/// Writes the table as CSV (metadata comments, header, rows) to `path`.
///
/// # Safety
/// `sweep` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_write_csv(sweep: *const DmirsSweep, path: *const c_char) -> DmirsStatus {
    guard(|| {
        let s = &handle(sweep, "sweep")?.0;
        let file = File::create(c_str(path, "path")?)?;
        write_csv(s, BufWriter::new(file))?;
        Ok(())
    })
}

/// # Safety
/// `sweep` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dmirs_sweep_free(sweep: *mut DmirsSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
