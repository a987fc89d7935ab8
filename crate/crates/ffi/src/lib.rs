//! C ABI over densitylab.
//!
//! Every fallible function returns a [`DlStatus`]. On failure the message
//! is available from [`dl_last_error`] on the same thread. Strings handed
//! out through `char **out` are owned by the caller and must be released
//! with [`dl_string_free`]. Handles are released with their `_free`
//! function; passing NULL to any `_free` is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map};

use densitylab::bergman::{bergman_classification, FuchsianGroup, UHPoint};
use densitylab::cli::commands::run_command;
use densitylab::cli::{invoke, Failure, Overrides, Tolerances};
use densitylab::density::SymplecticLattice;
use densitylab::finite_wh::{report, FiniteLattice, FiniteWHRep};
use densitylab::gabor::{zz_frame_bounds, Window};
use densitylab::Error;

/// Status codes. The nonzero values match the exit codes of the
/// `densitylab` binary where both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    InvalidInput = 2,
    ComputeFailed = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Symplectic lattice basis.
pub struct DlLattice(SymplecticLattice);

/// Finite Weyl–Heisenberg representation of `ℤ_N` with the lattice
/// `aℤ_N × bℤ_N`.
pub struct DlFiniteWh {
    rep: FiniteWHRep,
    lattice: FiniteLattice,
}

/// Fuchsian group given by generators.
pub struct DlGroup(FuchsianGroup);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

struct Fail(DlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if e.is_numerical() { DlStatus::ComputeFailed } else { DlStatus::InvalidInput };
        Fail(status, e.to_string())
    }
}

impl From<Failure> for Fail {
    fn from(f: Failure) -> Self {
        match f {
            Failure::Invalid(errs) => {
                let msg = errs.iter().map(|e| format!("{}: {}", e.field, e.message)).collect::<Vec<_>>().join("; ");
                Fail(DlStatus::InvalidInput, msg)
            }
            Failure::Compute(e) => Fail(DlStatus::ComputeFailed, e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(DlStatus::InvalidInput, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(DlStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{name} is not valid UTF-8")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(DlStatus::NullPointer, format!("{name} is NULL")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(DlStatus::NullPointer, format!("{name} is NULL")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn write_json(out: &mut *mut c_char, v: &impl Serialize) -> Result<(), Fail> {
    let s = serde_json::to_string(v).map_err(|e| Fail(DlStatus::ComputeFailed, e.to_string()))?;
    *out = to_c_string(s);
    Ok(())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn dl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a JSON configuration, as with `densitylab run --config`. On
/// success `*out` receives the report (JSON or CSV per the configured
/// format); `output.path` is ignored. On failure `*out` is NULL and
/// [`dl_last_error`] holds the JSON error document.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_run_config(config_json: *const c_char, out: *mut *mut c_char) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cfg = text(config_json, "config_json")?;
        let inv = invoke(Some(cfg), Overrides::default(), false);
        match (inv.exit_code, inv.output, inv.error) {
            (0, Some(text), _) => {
                *out = to_c_string(text);
                Ok(())
            }
            (code, _, err) => {
                let status = if code == 3 { DlStatus::ComputeFailed } else { DlStatus::InvalidInput };
                Err(Fail(status, err.unwrap_or_default().trim_end().to_owned()))
            }
        }
    })
}

/// Verdict for an invariant such as `"1/2"` or `"1+sqrt(2)"` under a
/// Kleppner status `"holds"`, `"fails"` or `"unknown"`, as JSON.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_classify(
    invariant: *const c_char,
    kleppner: *const c_char,
    meets_center: bool,
    out: *mut *mut c_char,
) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let mut params = Map::new();
        params.insert("invariant".into(), json!(text(invariant, "invariant")?));
        params.insert("kleppner".into(), json!(text(kleppner, "kleppner")?));
        params.insert("meets_center".into(), json!(meets_center));
        let o = run_command("classify", &params, &Tolerances::default(), 0)?;
        write_json(out, &o.results["verdict"])
    })
}

/// Parses a basis such as `"1,0;0,1/2"` or `"sqrt(2),0;0,1"`.
///
/// # Safety
/// `basis` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_parse(basis: *const c_char, out: *mut *mut DlLattice) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let l = SymplecticLattice::parse(text(basis, "basis")?)?;
        *out = Box::into_raw(Box::new(DlLattice(l)));
        Ok(())
    })
}

/// # Safety
/// `l` must be NULL or a handle from [`dl_lattice_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_free(l: *mut DlLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_covolume(l: *const DlLattice, out: *mut f64) -> DlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        *out_ptr(out, "out")? = l.0.covolume()?.to_f64();
        Ok(())
    })
}

/// Exact covolume as text, e.g. `"sqrt(2)"`, or the decimal value for
/// float bases.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_covolume_text(l: *const DlLattice, out: *mut *mut c_char) -> DlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let out = out_ptr(out, "out")?;
        let c = l.0.covolume()?;
        *out = to_c_string(c.exact().map_or_else(|| c.to_f64().to_string(), |x| x.to_string()));
        Ok(())
    })
}

/// Exact Kleppner check, as JSON `{status, witness}`.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_kleppner(l: *const DlLattice, out: *mut *mut c_char) -> DlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let out = out_ptr(out, "out")?;
        write_json(out, &l.0.kleppner_check()?)
    })
}

/// Exhaustive witness search up to `radius`, as JSON.
///
/// # Safety
/// `l` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_lattice_kleppner_brute(l: *const DlLattice, radius: u32, out: *mut *mut c_char) -> DlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let out = out_ptr(out, "out")?;
        write_json(out, &l.0.kleppner_brute(radius)?)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_finite_wh_new(n: usize, a: usize, b: usize, out: *mut *mut DlFiniteWh) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let rep = FiniteWHRep::new(n)?;
        let lattice = FiniteLattice::new(&rep, a, b)?;
        *out = Box::into_raw(Box::new(DlFiniteWh { rep, lattice }));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle from [`dl_finite_wh_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_finite_wh_free(h: *mut DlFiniteWh) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Frame and Riesz report for the window `re[k] + i·im[k]`, `k < len`,
/// as JSON. `im` may be NULL for a real window.
///
/// # Safety
/// `h` must be a live handle, `re` (and `im` unless NULL) must point to
/// `len` doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_finite_wh_report(
    h: *const DlFiniteWh,
    re: *const f64,
    im: *const f64,
    len: usize,
    tol: f64,
    out: *mut *mut c_char,
) -> DlStatus {
    guard(|| {
        let h = handle(h, "handle")?;
        let out = out_ptr(out, "out")?;
        if re.is_null() {
            return Err(Fail(DlStatus::NullPointer, "re is NULL".into()));
        }
        let re = std::slice::from_raw_parts(re, len);
        let g: Vec<Complex64> = if im.is_null() {
            re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&x, &y)| Complex64::new(x, y)).collect()
        };
        if !(tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        write_json(out, &report(&h.rep, &h.lattice, &g, tol)?)
    })
}

/// Bundled group by name, `"psl2z"` or `"sl2z"`.
///
/// # Safety
/// `name` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_group_bundled(name: *const c_char, out: *mut *mut DlGroup) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = FuchsianGroup::bundled(text(name, "name")?)?;
        *out = Box::into_raw(Box::new(DlGroup(g)));
        Ok(())
    })
}

/// Group from the JSON generator format accepted by `--group-file`.
///
/// # Safety
/// `json` must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_group_from_json(json: *const c_char, out: *mut *mut DlGroup) -> DlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let g = FuchsianGroup::from_json(text(json, "json")?)?;
        *out = Box::into_raw(Box::new(DlGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a group handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_group_free(g: *mut DlGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Weighted Bergman classification at base point `base` (e.g. `"2i"`),
/// as JSON.
///
/// # Safety
/// `g` must be a live handle, `base` NUL-terminated and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_bergman_classify(
    g: *const DlGroup,
    alpha: f64,
    base: *const c_char,
    stabilizer_radius: usize,
    out: *mut *mut c_char,
) -> DlStatus {
    guard(|| {
        let g = handle(g, "group")?;
        let out = out_ptr(out, "out")?;
        let w = UHPoint::parse(text(base, "base")?)?;
        write_json(out, &bergman_classification(alpha, &g.0, &w, stabilizer_radius)?)
    })
}

/// Zibulski–Zeevi frame bounds of the Gaussian on `ℤ × (p/q)ℤ`.
///
/// # Safety
/// `a` and `b` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn dl_gabor_zz_bounds(p: i64, q: i64, grid: usize, trunc: usize, a: *mut f64, b: *mut f64) -> DlStatus {
    guard(|| {
        let a = out_ptr(a, "a")?;
        let b = out_ptr(b, "b")?;
        let r = zz_frame_bounds(&Window::Gaussian, p, q, grid, trunc)?;
        *a = r.a;
        *b = r.b;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, DlStatus::Panic);
        let msg = unsafe { CStr::from_ptr(dl_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn json_value_is_written() {
        let mut out = ptr::null_mut();
        write_json(&mut out, &Value::Bool(true)).ok().unwrap();
        assert_eq!(unsafe { CStr::from_ptr(out) }.to_str().unwrap(), "true");
        unsafe { dl_string_free(out) };
    }
}
