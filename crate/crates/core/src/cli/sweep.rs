//! One-parameter sweeps over the gabor, finite-wh and bergman commands.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::commands::{run_command, Failure, Outcome, Scalar};
use super::config::Tolerances;
use super::output::{Cell, Table};

pub const TARGETS: [&str; 3] = ["gabor-zz", "finite-wh", "bergman"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Values {
    List(Vec<Scalar>),
    /// Comma-separated.
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub target: String,
    /// The ranged parameter. For `gabor-zz`, `density` sets the lattice
    /// to `ℤ × (density)ℤ`.
    pub param: String,
    pub values: Values,
    /// Fixed parameters of the target command.
    #[serde(default)]
    pub base: Map<String, Value>,
}

/// Numbers stay numbers; anything else is passed on as text.
fn param_value(s: &Scalar) -> Value {
    match s {
        Scalar::Num(v) => json!(v),
        Scalar::Text(t) => match serde_json::from_str::<Value>(t.trim()) {
            Ok(v @ Value::Number(_)) => v,
            _ => Value::String(t.trim().to_owned()),
        },
    }
}

fn columns(target: &str) -> &'static [&'static str] {
    match target {
        "gabor-zz" => &["covolume", "A", "B"],
        "finite-wh" => &["invariant", "A", "B", "parseval", "onb"],
        _ => &["invariant", "complete", "frame", "riesz", "lambda_min", "lambda_max"],
    }
}

fn text(v: &Value) -> Cell {
    match v {
        Value::String(s) => Cell::Text(s.clone()),
        other => Cell::Text(other.to_string()),
    }
}

fn num(v: &Value) -> Cell {
    Cell::Num(v.as_f64().unwrap_or(f64::NAN))
}

/// Exact form when known, else the float value.
fn invariant_cell(inv: &Value) -> Cell {
    match &inv["exact"] {
        Value::String(s) => Cell::Text(s.clone()),
        _ => num(&inv["value"]),
    }
}

fn summary(target: &str, o: &Outcome) -> Vec<Cell> {
    let r = &o.results;
    match target {
        "gabor-zz" => vec![num(&r["covolume"]), num(&r["bounds"]["A"]), num(&r["bounds"]["B"])],
        "finite-wh" => {
            let fb = &r["frame_bounds"];
            let is_frame = fb["rank"].as_u64() == r["n"].as_u64();
            let a = if is_frame { num(&fb["min_nonzero"]) } else { Cell::Num(0.0) };
            vec![
                text(&r["invariant"]),
                a,
                num(&fb["max"]),
                Cell::Bool(r["parseval"].as_bool().unwrap_or(false)),
                Cell::Bool(r["onb"].as_bool().unwrap_or(false)),
            ]
        }
        _ => {
            let v = &r["verdict"];
            let spec = &r["gram"]["spectrum"];
            let eig = spec["eigenvalues"].as_array();
            vec![
                invariant_cell(&v["generic"]["invariant"]),
                text(&v["kernel"]["complete"]),
                text(&v["kernel"]["frame"]),
                text(&v["kernel"]["riesz"]),
                eig.and_then(|e| e.first()).map_or(Cell::Num(f64::NAN), num),
                num(&spec["max"]),
            ]
        }
    }
}

pub fn sweep_cmd(p: SweepParams, tol: &Tolerances, seed: u64) -> Result<Outcome, Failure> {
    let command = match p.target.as_str() {
        "gabor-zz" => "gabor",
        "finite-wh" => "finite-wh",
        "bergman" => "bergman",
        t => {
            return Err(Failure::invalid(
                "params.target",
                format!("unknown target '{t}' (expected one of {})", TARGETS.join(", ")),
            ))
        }
    };
    let values: Vec<Scalar> = match &p.values {
        Values::List(v) => v.clone(),
        Values::Text(s) => s.split(',').map(|t| Scalar::Text(t.trim().to_owned())).collect(),
    };
    if values.is_empty() {
        return Err(Failure::invalid("params.values", "no values to sweep"));
    }
    let ranged_key = if p.target == "gabor-zz" && p.param == "density" { "lattice" } else { p.param.as_str() };
    if p.base.contains_key(ranged_key) {
        return Err(Failure::invalid("params.base", format!("'{}' is both fixed and ranged", p.param)));
    }
    let mut table = Table::new(&[p.param.as_str()]);
    table.columns.extend(columns(&p.target).iter().map(|c| c.to_string()));
    for v in &values {
        let mut params = p.base.clone();
        if p.target == "gabor-zz" {
            params.entry("method").or_insert_with(|| json!("zz"));
        }
        if p.target == "gabor-zz" && p.param == "density" {
            params.insert("lattice".into(), json!(format!("1,0;0,{}", v.text())));
        } else {
            params.insert(p.param.clone(), param_value(v));
        }
        let o = run_command(command, &params, tol, seed)?;
        let mut row = vec![Cell::Text(v.text())];
        row.extend(summary(&p.target, &o));
        table.rows.push(row);
    }
    let results = json!({
        "target": p.target,
        "param": p.param,
        "table": serde_json::to_value(&table).expect("table serializes"),
    });
    Ok(Outcome { results, table })
}
