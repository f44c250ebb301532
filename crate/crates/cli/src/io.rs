use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context};
use jacobi_core::{Complex64, RadialFunction, SpectralFunction};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// A finite number, or `{"pole": true}` in place of an infinity or NaN.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!({ "pole": true })
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub value: Value,
    pub tolerance: f64,
    pub pass: bool,
    pub line: String,
}

impl Check {
    pub fn new(check: impl Into<String>, value: f64, tolerance: f64, pass: bool) -> Self {
        let check = check.into();
        let shown = if value == 0.0 || (1e-3..1e4).contains(&value.abs()) {
            format!("{value:.4}")
        } else {
            format!("{value:.3e}")
        };
        let line = format!(
            "{check}={shown}\u{b1}{tolerance:e}: {}",
            if pass { "pass" } else { "fail" }
        );
        Self {
            check,
            value: num(value),
            tolerance,
            pass: pass && value.is_finite(),
            line,
        }
    }

    /// Passes when `value <= tolerance`.
    pub fn at_most(check: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(check, value, tolerance, value <= tolerance)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub enum Output {
    Radial(RadialFunction),
    Spectral(SpectralFunction),
    Record(Map<String, Value>),
    Report(Report),
}

impl Output {
    pub fn succeeded(&self) -> bool {
        match self {
            Output::Report(r) => r.pass,
            _ => true,
        }
    }
}

fn table(xs: &[f64], vs: &[Complex64]) -> Vec<[f64; 3]> {
    xs.iter().zip(vs).map(|(&x, v)| [x, v.re, v.im]).collect()
}

fn render_json(out: &Output, cfg: &RunConfig) -> anyhow::Result<String> {
    let config = serde_json::to_value(cfg)?;
    let doc = match out {
        Output::Radial(f) => json!({
            "config": config,
            "columns": ["x", "re", "im"],
            "rows": table(f.nodes(), f.values()),
        }),
        Output::Spectral(g) => json!({
            "config": config,
            "columns": ["lambda", "re", "im"],
            "rows": table(g.lambda_nodes(), g.values()),
        }),
        Output::Record(m) => {
            let mut m = m.clone();
            m.insert("config".into(), config);
            Value::Object(m)
        }
        Output::Report(r) => {
            let mut v = serde_json::to_value(r)?;
            v.as_object_mut().expect("report is an object").insert("config".into(), config);
            v
        }
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render_csv(out: &Output) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match out {
        Output::Radial(f) => {
            w.write_record(["x", "re", "im"])?;
            for row in table(f.nodes(), f.values()) {
                w.write_record(row.iter().map(|v| v.to_string()))?;
            }
        }
        Output::Spectral(g) => {
            w.write_record(["lambda", "re", "im"])?;
            for row in table(g.lambda_nodes(), g.values()) {
                w.write_record(row.iter().map(|v| v.to_string()))?;
            }
        }
        Output::Record(m) => {
            w.write_record(m.keys())?;
            w.write_record(m.values().map(csv_cell))?;
        }
        Output::Report(r) => {
            w.write_record(["check", "value", "tolerance", "pass"])?;
            for c in &r.checks {
                w.write_record([
                    c.check.clone(),
                    csv_cell(&c.value),
                    c.tolerance.to_string(),
                    c.pass.to_string(),
                ])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Renders the whole artifact first, then writes it in one go.
pub fn emit(out: &Output, cfg: &RunConfig) -> anyhow::Result<()> {
    let text = match cfg.output.format {
        Format::Json => render_json(out, cfg)?,
        Format::Csv => render_csv(out)?,
    };
    match &cfg.output.path {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            f.write_all(text.as_bytes())?;
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Three-column CSV `(key, re, im)` with a header row naming the first column.
fn read_columns(path: &Path, key: &str) -> anyhow::Result<(Vec<f64>, Vec<Complex64>)> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let headers = r.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(k), Some(re)) = (col(key), col("re")) else {
        bail!("{}: expected columns {key},re,im", path.display());
    };
    let im = col("im");
    let mut keys = Vec::new();
    let mut vals = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let get = |j: usize| -> anyhow::Result<f64> {
            rec.get(j)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .with_context(|| format!("{}: bad number in row {}", path.display(), i + 1))
        };
        keys.push(get(k)?);
        let imag = match im {
            Some(j) => get(j)?,
            None => 0.0,
        };
        vals.push(Complex64::new(get(re)?, imag));
    }
    Ok((keys, vals))
}

pub fn read_radial(path: &Path) -> anyhow::Result<RadialFunction> {
    let (xs, vs) = read_columns(path, "x")?;
    Ok(RadialFunction::new(xs, vs)?)
}

pub fn read_spectral(path: &Path) -> anyhow::Result<SpectralFunction> {
    let (ls, vs) = read_columns(path, "lambda")?;
    Ok(SpectralFunction::new(ls, vs)?)
}
