//! Typed parameters and the executors behind each command.

use num::ToPrimitive;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, Tolerances, ValidationError};
use super::output::Table;
use crate::bergman::{bergman_classification, kernel_orbit_gram, FuchsianGroup, GramEntries, UHPoint};
use crate::density::{classify, ContextFlags, ExactScalar, Invariant, KleppnerStatus, SymplecticLattice};
use crate::error::Error;
use crate::finite_wh::{self, FiniteLattice, FiniteWHRep};
use crate::gabor::{sandwich_check, truncated_gram_bounds, zz_frame_bounds, zz_frame_bounds_separable, PlaneLattice, Window};
use crate::quadrature::QuadOptions;

/// Why a command did not produce results.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input; exit code 2.
    Invalid(Vec<ValidationError>),
    /// Numerical failure; exit code 3.
    Compute(Error),
}

impl Failure {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        Failure::Invalid(vec![ValidationError::new(field, message)])
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Compute(_) => 3,
        }
    }
}

/// Library errors raised while handling `field`.
fn at(field: &'static str) -> impl Fn(Error) -> Failure {
    move |e| {
        if e.is_numerical() {
            Failure::Compute(e)
        } else {
            Failure::invalid(field, e.to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Value,
    pub table: Table,
}

/// A number or a string such as `"1/2+1/3*sqrt(2)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl Scalar {
    pub fn text(&self) -> String {
        match self {
            Scalar::Num(v) => v.to_string(),
            Scalar::Text(s) => s.trim().to_owned(),
        }
    }
}

fn typed<T: DeserializeOwned>(params: &Map<String, Value>) -> Result<T, Failure> {
    serde_json::from_value(Value::Object(params.clone())).map_err(|e| Failure::invalid("params", e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, Failure> {
    run_command(&cfg.command, &cfg.params, &cfg.tolerances, cfg.seed)
}

pub fn run_command(command: &str, params: &Map<String, Value>, tol: &Tolerances, seed: u64) -> Result<Outcome, Failure> {
    match command {
        "classify" => classify_cmd(typed(params)?),
        "kleppner" => kleppner_cmd(typed(params)?),
        "gabor" => gabor_cmd(typed(params)?, tol),
        "finite-wh" => finite_wh_cmd(typed(params)?, tol),
        "bergman" => bergman_cmd(typed(params)?, tol),
        "sweep" => super::sweep::sweep_cmd(typed(params)?, tol, seed),
        "suite" => {
            let _: SuiteParams = typed(params)?;
            let report = super::suite::run_suite(seed, tol).map_err(at("suite"))?;
            Ok(Outcome {
                table: report.table(),
                results: to_value(&report),
            })
        }
        other => Err(Failure::invalid("command", format!("unknown command '{other}'"))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteParams {}

// ---------------------------------------------------------------- classify

fn default_auto() -> String {
    "auto".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyParams {
    #[serde(default)]
    pub invariant: Option<Scalar>,
    /// Error bar for a floating-point invariant.
    #[serde(default)]
    pub invariant_error: Option<f64>,
    #[serde(default = "default_auto")]
    pub kleppner: String,
    /// Lattice `"a,b;c,d"` for `kleppner = auto` and as default invariant.
    #[serde(default)]
    pub basis: Option<String>,
    #[serde(default)]
    pub meets_center: bool,
}

/// Exact when the text parses as an exact scalar, else a float with the
/// given error bar.
pub fn parse_invariant(s: &Scalar, error: Option<f64>) -> Result<Invariant, Failure> {
    let text = s.text();
    let field = "params.invariant";
    if error.is_none() {
        if let Ok(x) = text.parse::<ExactScalar>() {
            return Invariant::exact(x).map_err(at(field));
        }
    }
    let v: f64 = match s {
        Scalar::Num(v) => *v,
        Scalar::Text(t) => t
            .trim()
            .parse()
            .map_err(|_| Failure::invalid(field, format!("cannot parse '{t}' as an exact scalar or number")))?,
    };
    Invariant::float(v, error.unwrap_or(0.0)).map_err(at(field))
}

fn classify_cmd(p: ClassifyParams) -> Result<Outcome, Failure> {
    let lattice = p
        .basis
        .as_deref()
        .map(SymplecticLattice::parse)
        .transpose()
        .map_err(at("params.basis"))?;
    let mut errors = Vec::new();
    let check = match (p.kleppner.as_str(), &lattice) {
        ("auto", Some(l)) => Some(l.kleppner_check().map_err(at("params.basis"))?),
        ("auto", None) => {
            errors.push(ValidationError::new("params.basis", "kleppner = auto needs a basis"));
            None
        }
        _ => None,
    };
    let status = match &check {
        Some(c) => c.status,
        None => p.kleppner.parse::<KleppnerStatus>().unwrap_or_else(|e| {
            if p.kleppner != "auto" {
                errors.push(ValidationError::new("params.kleppner", e.to_string()));
            }
            KleppnerStatus::Unknown
        }),
    };
    let invariant = match (&p.invariant, &lattice) {
        (Some(s), _) => Some(parse_invariant(s, p.invariant_error)?),
        // Heisenberg formal dimension 1: the invariant is the co-volume.
        (None, Some(l)) => Some(match l.covolume().map_err(at("params.basis"))? {
            crate::density::Covolume::Exact(x) => Invariant::exact(x).map_err(at("params.basis"))?,
            crate::density::Covolume::Float(v) => Invariant::float(v, 8.0 * f64::EPSILON * v).map_err(at("params.basis"))?,
        }),
        (None, None) => {
            errors.push(ValidationError::new("params.invariant", "missing required field (or give a basis)"));
            None
        }
    };
    if !errors.is_empty() {
        return Err(Failure::Invalid(errors));
    }
    let invariant = invariant.expect("checked above");
    let verdict = classify(
        &invariant,
        status,
        ContextFlags {
            meets_center: p.meets_center,
        },
    );
    let mut table = Table::new(&["invariant", "value", "kleppner", "claims", "caveats"]);
    table.rows.push(vec![
        invariant.display().into(),
        invariant.value.into(),
        status.to_string().into(),
        verdict.claims.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(";").into(),
        verdict.caveats.join(";").into(),
    ]);
    let mut results = json!({ "verdict": to_value(&verdict) });
    if let Some(c) = check {
        results["kleppner_check"] = to_value(&c);
    }
    Ok(Outcome { results, table })
}

// ---------------------------------------------------------------- kleppner

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KleppnerParams {
    pub basis: String,
    /// Also run the exhaustive search to this radius.
    #[serde(default)]
    pub brute_radius: Option<u32>,
}

fn witness_text(w: &Option<Vec<i64>>) -> String {
    w.as_ref()
        .map(|v| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn kleppner_cmd(p: KleppnerParams) -> Result<Outcome, Failure> {
    let field = "params.basis";
    let l = SymplecticLattice::parse(&p.basis).map_err(at(field))?;
    let check = l.kleppner_check().map_err(at(field))?;
    let brute = p.brute_radius.map(|r| l.kleppner_brute(r)).transpose().map_err(at(field))?;
    let cov = l.covolume().map_err(at(field))?;
    let mut table = Table::new(&["method", "status", "witness"]);
    table.rows.push(vec!["exact".into(), check.status.to_string().into(), witness_text(&check.witness).into()]);
    if let Some(b) = &brute {
        table.rows.push(vec!["brute".into(), b.status.to_string().into(), witness_text(&b.witness).into()]);
    }
    let mut results = json!({
        "dim": l.dim(),
        "covolume": to_value(&cov),
        "kleppner": to_value(&check),
    });
    if let Some(b) = brute {
        results["brute"] = to_value(&b);
    }
    Ok(Outcome { results, table })
}

// ---------------------------------------------------------------- gabor

fn default_window() -> String {
    "gaussian".into()
}

fn default_method() -> String {
    "zz".into()
}

fn default_radius() -> usize {
    4
}

fn default_grid() -> usize {
    crate::gabor::zak::DEFAULT_GRID
}

fn default_trunc() -> usize {
    crate::gabor::zak::DEFAULT_TRUNC
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaborParams {
    #[serde(default = "default_window")]
    pub window: String,
    pub lattice: String,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_radius")]
    pub radius: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_trunc")]
    pub trunc: usize,
}

fn quad_options(tol: &Tolerances) -> QuadOptions {
    QuadOptions {
        abs_tol: tol.quad_abs,
        rel_tol: tol.quad_rel,
        ..QuadOptions::default()
    }
}

/// `(p, q)` for a rational positive co-volume `p/q`.
fn rational_covolume(lat: &PlaneLattice) -> Option<(i64, i64)> {
    let cov = lat.exact_covolume()?;
    let r = cov.exact()?.as_rational()?.clone();
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

fn gabor_cmd(p: GaborParams, tol: &Tolerances) -> Result<Outcome, Failure> {
    let window = Window::parse(&p.window).map_err(at("params.window"))?;
    let lat = PlaneLattice::parse(&p.lattice).map_err(at("params.lattice"))?;
    let bounds = match p.method.as_str() {
        "zz" => {
            let (alpha, _) = lat
                .separable_params()
                .ok_or_else(|| Failure::invalid("params.lattice", "the zz method needs a diagonal basis diag(alpha, beta)"))?;
            let (num, den) = rational_covolume(&lat)
                .ok_or_else(|| Failure::invalid("params.lattice", "the zz method needs a rational co-volume p/q"))?;
            match window {
                Window::Gaussian => zz_frame_bounds_separable(alpha, num, den, p.grid, p.trunc),
                Window::Box if alpha == 1.0 => zz_frame_bounds(&window, num, den, p.grid, p.trunc),
                _ => return Err(Failure::invalid("params.lattice", "zz with the box window needs alpha = 1")),
            }
            .map_err(at("params"))?
        }
        "gram" => truncated_gram_bounds(&window, &lat, p.radius, &quad_options(tol)).map_err(at("params"))?,
        m => return Err(Failure::invalid("params.method", format!("unknown method '{m}' (expected zz or gram)"))),
    };
    let covolume = lat.covolume();
    let invariant = match lat.exact_covolume().as_ref().and_then(|c| c.exact()) {
        Some(x) => Invariant::exact(x.clone()),
        None => Invariant::float(covolume, 8.0 * f64::EPSILON * covolume),
    }
    .map_err(at("params.lattice"))?;
    let kleppner = match lat.exact() {
        Some(l) => l.kleppner_check().map_err(at("params.lattice"))?.status,
        None => KleppnerStatus::Unknown,
    };
    let verdict = classify(&invariant, kleppner, ContextFlags::default());
    let mut results = json!({
        "window": window.name(),
        "basis": lat.basis(),
        "covolume": covolume,
        "bounds": to_value(&bounds),
        "density": to_value(&verdict),
    });
    if p.method == "zz" {
        results["sandwich"] = to_value(&sandwich_check(&bounds, covolume, &window));
    }
    let mut table = Table::new(&["covolume", "A", "B"]);
    table.rows.push(vec![covolume.into(), bounds.a.into(), bounds.b.into()]);
    Ok(Outcome { results, table })
}

// ---------------------------------------------------------------- finite-wh

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum VectorField {
    Text(String),
    List(Vec<Scalar>),
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteWhParams {
    #[serde(alias = "N")]
    pub n: usize,
    pub a: usize,
    pub b: usize,
    /// Comma-separated entries; complex values as `x+yi`.
    pub window: VectorField,
    #[serde(default = "default_true")]
    pub normalize: bool,
}

fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<f64>()
        .map(|v| Complex64::new(v, 0.0))
        .ok()
        .or_else(|| t.parse::<Complex64>().ok())
        .filter(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn parse_window(field: &VectorField) -> Result<Vec<Complex64>, Failure> {
    let items: Vec<String> = match field {
        VectorField::Text(s) => s.split(',').map(str::to_owned).collect(),
        VectorField::List(v) => v.iter().map(Scalar::text).collect(),
    };
    items
        .iter()
        .map(|s| parse_complex(s).ok_or_else(|| Failure::invalid("params.window", format!("cannot parse entry '{s}'"))))
        .collect()
}

fn finite_wh_cmd(p: FiniteWhParams, tol: &Tolerances) -> Result<Outcome, Failure> {
    let rep = FiniteWHRep::new(p.n).map_err(at("params.n"))?;
    let lat = FiniteLattice::new(&rep, p.a, p.b).map_err(at("params"))?;
    let mut g = parse_window(&p.window)?;
    if g.len() != p.n {
        return Err(Failure::invalid("params.window", format!("expected {} entries, got {}", p.n, g.len())));
    }
    if p.normalize {
        let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Failure::invalid("params.window", "window is zero"));
        }
        g.iter_mut().for_each(|z| *z /= norm);
    }
    let report = finite_wh::report(&rep, &lat, &g, tol.spectral).map_err(at("params"))?;
    let mut table = Table::new(&["operator", "index", "eigenvalue"]);
    for (name, spec) in [("frame", &report.frame_bounds), ("gram", &report.riesz_bounds)] {
        for (i, v) in spec.eigenvalues.iter().enumerate() {
            table.rows.push(vec![name.into(), i.into(), (*v).into()]);
        }
    }
    Ok(Outcome {
        results: to_value(&report),
        table,
    })
}

// ---------------------------------------------------------------- bergman

fn default_group() -> String {
    "psl2z".into()
}

fn default_base() -> String {
    "2i".into()
}

fn default_bergman_radius() -> usize {
    2
}

fn default_stabilizer_radius() -> usize {
    crate::bergman::DEFAULT_STABILIZER_RADIUS
}

fn default_entries() -> String {
    "closed".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BergmanParams {
    pub alpha: f64,
    /// Bundled group name.
    #[serde(default = "default_group")]
    pub group: String,
    /// JSON group file; takes precedence over `group`.
    #[serde(default)]
    pub group_file: Option<String>,
    #[serde(default = "default_base")]
    pub base: String,
    /// Word radius of the orbit ball for the Gram spectrum.
    #[serde(default = "default_bergman_radius")]
    pub radius: usize,
    #[serde(default = "default_stabilizer_radius")]
    pub stabilizer_radius: usize,
    /// `closed` (reproducing property) or `quadrature`.
    #[serde(default = "default_entries")]
    pub entries: String,
}

fn bergman_cmd(p: BergmanParams, tol: &Tolerances) -> Result<Outcome, Failure> {
    let group = match &p.group_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::invalid("params.group_file", format!("{path}: {e}")))?;
            FuchsianGroup::from_json(&text).map_err(at("params.group_file"))?
        }
        None => FuchsianGroup::bundled(&p.group).map_err(at("params.group"))?,
    };
    let w = UHPoint::parse(&p.base).map_err(at("params.base"))?;
    let entries = match p.entries.as_str() {
        "closed" => GramEntries::ClosedForm,
        "quadrature" => GramEntries::Quadrature(quad_options(tol)),
        e => return Err(Failure::invalid("params.entries", format!("unknown entries '{e}' (expected closed or quadrature)"))),
    };
    let verdict = bergman_classification(p.alpha, &group, &w, p.stabilizer_radius).map_err(at("params.alpha"))?;
    let gram = kernel_orbit_gram(p.alpha, &group, &w, p.radius, entries).map_err(at("params"))?;
    let mut table = Table::new(&["index", "eigenvalue"]);
    for (i, v) in gram.spectrum.eigenvalues.iter().enumerate() {
        table.rows.push(vec![i.into(), (*v).into()]);
    }
    let results = json!({
        "verdict": to_value(&verdict),
        "gram": {
            "radius": p.radius,
            "points": gram.points.len(),
            "spectrum": to_value(&gram.spectrum),
        },
    });
    Ok(Outcome { results, table })
}
