//! Experiment configuration: a JSON document, optionally overridden by
//! command-line flags, resolved into one typed command.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One problem found while validating a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationError {
    /// Dotted path of the offending field, e.g. `params.alpha`.
    pub field: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub const COMMANDS: [&str; 7] = ["classify", "kleppner", "gabor", "finite-wh", "bergman", "sweep", "suite"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Destination file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_quad")]
    pub quad_abs: f64,
    #[serde(default = "default_quad")]
    pub quad_rel: f64,
    /// Eigenvalue cut-off for ranks and Riesz decisions.
    #[serde(default = "default_spectral")]
    pub spectral: f64,
}

fn default_quad() -> f64 {
    1e-10
}

fn default_spectral() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_abs: default_quad(),
            quad_rel: default_quad(),
            spectral: default_spectral(),
        }
    }
}

pub const DEFAULT_SEED: u64 = 20240611;

/// Configuration after validation. `params` still holds the raw
/// per-command parameters; the command layer types them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: Map<String, Value>,
    pub output: OutputSpec,
    pub seed: u64,
    pub tolerances: Tolerances,
}

/// Overrides collected from flags. Every field wins over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<String>,
    pub params: Map<String, Value>,
    pub output_path: Option<String>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub tolerances: Map<String, Value>,
}

/// Merges `file` (a JSON document, possibly absent) with `over` and
/// validates the envelope.
pub fn resolve(file: Option<&str>, over: Overrides) -> Result<ExperimentConfig, Vec<ValidationError>> {
    let mut errors = Vec::new();
    let mut root = match file {
        None => Map::new(),
        Some(text) => match serde_json::from_str::<Value>(text) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(vec![ValidationError::new("", "configuration must be a JSON object")]),
            Err(e) => return Err(vec![ValidationError::new("", format!("invalid JSON: {e}"))]),
        },
    };
    for key in root.keys() {
        if !["command", "params", "output", "seed", "tolerances"].contains(&key.as_str()) {
            errors.push(ValidationError::new(key.clone(), "unknown field"));
        }
    }

    let command = match over.command.or_else(|| root.get("command").and_then(Value::as_str).map(str::to_owned)) {
        Some(c) if COMMANDS.contains(&c.as_str()) => c,
        Some(c) => {
            errors.push(ValidationError::new("command", format!("unknown command '{c}' (expected one of {})", COMMANDS.join(", "))));
            String::new()
        }
        None => {
            let msg = if root.contains_key("command") { "must be a string" } else { "missing required field" };
            errors.push(ValidationError::new("command", msg));
            String::new()
        }
    };

    let mut params = match root.remove("params") {
        None | Some(Value::Null) => Map::new(),
        Some(Value::Object(m)) => m,
        Some(_) => {
            errors.push(ValidationError::new("params", "must be an object"));
            Map::new()
        }
    };
    params.extend(over.params);

    let mut output = match root.remove("output") {
        None | Some(Value::Null) => OutputSpec::default(),
        Some(v) => serde_json::from_value(v).unwrap_or_else(|e| {
            errors.push(ValidationError::new("output", e.to_string()));
            OutputSpec::default()
        }),
    };
    if over.output_path.is_some() {
        output.path = over.output_path;
    }
    if let Some(f) = over.format {
        output.format = f;
    }

    let seed = match over.seed {
        Some(s) => s,
        None => match root.get("seed") {
            None | Some(Value::Null) => DEFAULT_SEED,
            Some(v) => v.as_u64().unwrap_or_else(|| {
                errors.push(ValidationError::new("seed", "must be a non-negative integer"));
                DEFAULT_SEED
            }),
        },
    };

    let mut tol_map = match root.remove("tolerances") {
        None | Some(Value::Null) => Map::new(),
        Some(Value::Object(m)) => m,
        Some(_) => {
            errors.push(ValidationError::new("tolerances", "must be an object"));
            Map::new()
        }
    };
    tol_map.extend(over.tolerances);
    let tolerances: Tolerances = serde_json::from_value(Value::Object(tol_map)).unwrap_or_else(|e| {
        errors.push(ValidationError::new("tolerances", e.to_string()));
        Tolerances::default()
    });
    for (name, v) in [
        ("quad_abs", tolerances.quad_abs),
        ("quad_rel", tolerances.quad_rel),
        ("spectral", tolerances.spectral),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            errors.push(ValidationError::new(format!("tolerances.{name}"), "must be positive"));
        }
    }

    if errors.is_empty() {
        Ok(ExperimentConfig {
            command,
            params,
            output,
            seed,
            tolerances,
        })
    } else {
        Err(errors)
    }
}
