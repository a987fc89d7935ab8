//! Command-line front end.
//!
//! Every invocation resolves to an [`ExperimentConfig`]: an optional JSON
//! file given by `--config`, overridden by flags. Exit codes: 0 on
//! success, 2 on invalid input, 3 on numerical failure. Errors are written
//! to standard error as a JSON document `{"status", "errors": [...]}`.

pub mod commands;
pub mod config;
pub mod output;
pub mod suite;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

pub use commands::{execute, Failure, Outcome};
pub use config::{resolve, ExperimentConfig, Format, Overrides, Tolerances, ValidationError};
pub use output::{RunReport, Table};
pub use suite::{run_suite, SuiteReport};

#[derive(Debug, Parser)]
#[command(name = "densitylab", version, about = "Density trichotomy classifier and frame checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// JSON experiment configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (written atomically); standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_parser = ["json", "csv"])]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Add the wall time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Extra parameter `KEY=VALUE`; the value is read as JSON when it
    /// parses, else as a string.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub quad_abs: Option<f64>,
    #[arg(long, global = true)]
    pub quad_rel: Option<f64>,
    #[arg(long, global = true)]
    pub spectral_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Trichotomy verdict for an invariant vol·d.
    Classify {
        #[arg(long)]
        invariant: Option<String>,
        #[arg(long)]
        invariant_error: Option<f64>,
        /// auto | holds | fails | unknown
        #[arg(long)]
        kleppner: Option<String>,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        meets_center: bool,
    },
    /// Kleppner's condition for a lattice basis.
    Kleppner {
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        brute_radius: Option<u32>,
    },
    /// Frame bounds of a Gabor system.
    Gabor {
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        lattice: Option<String>,
        /// zz | gram
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Frame and Riesz spectra of a finite Weyl–Heisenberg system.
    #[command(name = "finite-wh")]
    FiniteWh {
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        window: Option<String>,
        /// Keep the window as given instead of normalizing it.
        #[arg(long)]
        raw: bool,
    },
    /// Discrete series orbits of a Fuchsian group.
    Bergman {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        group_file: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        stabilizer_radius: Option<usize>,
        /// closed | quadrature
        #[arg(long)]
        entries: Option<String>,
    },
    /// One-parameter sweep; fixed parameters go through `--set`.
    Sweep {
        /// gabor-zz | finite-wh | bergman
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated values.
        #[arg(long)]
        values: Option<String>,
    },
    /// Seeded property suite.
    Suite,
    /// Runs the configuration file as is.
    Run,
}

fn put<T: Into<Value>>(m: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        m.insert(key.into(), v.into());
    }
}

fn parse_set(items: &[String]) -> Result<Map<String, Value>, Vec<ValidationError>> {
    let mut m = Map::new();
    let mut errors = Vec::new();
    for item in items {
        match item.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => {
                let v = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_owned()));
                m.insert(k.trim().to_owned(), v);
            }
            _ => errors.push(ValidationError::new("--set", format!("expected KEY=VALUE, got '{item}'"))),
        }
    }
    if errors.is_empty() {
        Ok(m)
    } else {
        Err(errors)
    }
}

/// Flag overrides for one parsed command line.
pub fn overrides(cmd: Cmd, common: &Common) -> Result<Overrides, Vec<ValidationError>> {
    let mut p = Map::new();
    let command = match cmd {
        Cmd::Classify {
            invariant,
            invariant_error,
            kleppner,
            basis,
            meets_center,
        } => {
            put(&mut p, "invariant", invariant);
            put(&mut p, "invariant_error", invariant_error);
            put(&mut p, "kleppner", kleppner);
            put(&mut p, "basis", basis);
            put(&mut p, "meets_center", meets_center.then_some(true));
            Some("classify")
        }
        Cmd::Kleppner { basis, brute_radius } => {
            put(&mut p, "basis", basis);
            put(&mut p, "brute_radius", brute_radius);
            Some("kleppner")
        }
        Cmd::Gabor {
            window,
            lattice,
            method,
            radius,
            grid,
            trunc,
        } => {
            put(&mut p, "window", window);
            put(&mut p, "lattice", lattice);
            put(&mut p, "method", method);
            put(&mut p, "radius", radius);
            put(&mut p, "grid", grid);
            put(&mut p, "trunc", trunc);
            Some("gabor")
        }
        Cmd::FiniteWh { n, a, b, window, raw } => {
            put(&mut p, "n", n);
            put(&mut p, "a", a);
            put(&mut p, "b", b);
            put(&mut p, "window", window);
            put(&mut p, "normalize", raw.then_some(false));
            Some("finite-wh")
        }
        Cmd::Bergman {
            alpha,
            group,
            group_file,
            base,
            radius,
            stabilizer_radius,
            entries,
        } => {
            put(&mut p, "alpha", alpha);
            put(&mut p, "group", group);
            put(&mut p, "group_file", group_file);
            put(&mut p, "base", base);
            put(&mut p, "radius", radius);
            put(&mut p, "stabilizer_radius", stabilizer_radius);
            put(&mut p, "entries", entries);
            Some("bergman")
        }
        Cmd::Sweep { target, param, values } => {
            put(&mut p, "target", target);
            put(&mut p, "param", param);
            put(&mut p, "values", values);
            Some("sweep")
        }
        Cmd::Suite => Some("suite"),
        Cmd::Run => None,
    };
    let extra = parse_set(&common.set)?;
    if command == Some("sweep") {
        if !extra.is_empty() {
            p.insert("base".into(), Value::Object(extra));
        }
    } else {
        p.extend(extra);
    }
    let mut tolerances = Map::new();
    put(&mut tolerances, "quad_abs", common.quad_abs);
    put(&mut tolerances, "quad_rel", common.quad_rel);
    put(&mut tolerances, "spectral", common.spectral_tol);
    Ok(Overrides {
        command: command.map(str::to_owned),
        params: p,
        output_path: common.output.clone(),
        format: common.format.as_deref().map(|f| if f == "csv" { Format::Csv } else { Format::Json }),
        seed: common.seed,
        tolerances,
    })
}

/// Result of one invocation, before anything is printed.
#[derive(Debug)]
pub struct Invocation {
    pub exit_code: i32,
    /// Report or CSV text for the output destination.
    pub output: Option<String>,
    pub output_path: Option<String>,
    /// JSON error document.
    pub error: Option<String>,
}

fn error_doc(f: &Failure) -> String {
    let (status, errors) = match f {
        Failure::Invalid(e) => ("config_invalid", serde_json::to_value(e).expect("errors serialize")),
        Failure::Compute(e) => ("compute_failed", json!([{ "field": "", "message": e.to_string() }])),
    };
    let mut s = serde_json::to_string_pretty(&json!({ "status": status, "errors": errors })).expect("serializes");
    s.push('\n');
    s
}

/// Resolves and executes a configuration, producing the text to emit.
pub fn invoke(file: Option<&str>, over: Overrides, timing: bool) -> Invocation {
    let start = Instant::now();
    let fail = |f: Failure| Invocation {
        exit_code: f.exit_code(),
        output: None,
        output_path: None,
        error: Some(error_doc(&f)),
    };
    let cfg = match resolve(file, over) {
        Ok(c) => c,
        Err(e) => return fail(Failure::Invalid(e)),
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(f) => return fail(f),
    };
    let text = match cfg.output.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            let wall = timing.then(|| start.elapsed().as_secs_f64());
            RunReport::new(cfg.clone(), outcome.results, wall).to_json()
        }
    };
    Invocation {
        exit_code: 0,
        output: Some(text),
        output_path: cfg.output.path,
        error: None,
    }
}

/// Caps the global rayon pool at `DENSITYLAB_THREADS` when set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("DENSITYLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    emit(run_parsed(cli.command, &cli.common))
}

fn run_parsed(command: Cmd, common: &Common) -> Invocation {
    let file = match &common.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                return Invocation {
                    exit_code: 2,
                    output: None,
                    output_path: None,
                    error: Some(error_doc(&Failure::invalid("--config", format!("{}: {e}", path.display())))),
                }
            }
        },
        None => None,
    };
    if matches!(command, Cmd::Run) && file.is_none() {
        return Invocation {
            exit_code: 2,
            output: None,
            output_path: None,
            error: Some(error_doc(&Failure::invalid("--config", "run needs a configuration file"))),
        };
    }
    match overrides(command, common) {
        Ok(over) => invoke(file.as_deref(), over, common.timing),
        Err(e) => Invocation {
            exit_code: 2,
            output: None,
            output_path: None,
            error: Some(error_doc(&Failure::Invalid(e))),
        },
    }
}

fn emit(inv: Invocation) -> i32 {
    use std::io::Write;
    if let Some(e) = &inv.error {
        let _ = std::io::stderr().write_all(e.as_bytes());
    }
    if let Some(text) = &inv.output {
        match &inv.output_path {
            Some(p) => {
                if let Err(e) = output::write_atomic(std::path::Path::new(p), text.as_bytes()) {
                    let doc = error_doc(&Failure::invalid("output.path", format!("{p}: {e}")));
                    let _ = std::io::stderr().write_all(doc.as_bytes());
                    return 2;
                }
            }
            None => {
                let _ = std::io::stdout().write_all(text.as_bytes());
            }
        }
    }
    inv.exit_code
}
