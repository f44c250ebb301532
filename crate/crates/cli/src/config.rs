use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use jacobi_core::{GridSpec, JacobiParams, QuadratureConfig, Spacing};
use serde::{Deserialize, Serialize};

/// Smallest grid the CLI accepts.
pub const MIN_NODES: usize = 16;
/// Upper limit for the automatic spectral cut-off.
pub const AUTO_LAMBDA_CAP: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Auto {
    #[serde(rename = "auto")]
    Auto,
}

/// `lambda_max`: a number, or `"auto"` to size it from the data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaMax {
    Value(f64),
    Auto(Auto),
}

impl std::str::FromStr for LambdaMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(LambdaMax::Auto(Auto::Auto));
        }
        s.parse::<f64>()
            .map(LambdaMax::Value)
            .map_err(|_| format!("expected a number or \"auto\", got {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSettings {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl Default for GridSettings {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            x_min: g.x_min,
            x_max: g.x_max,
            n: g.n,
            spacing: g.spacing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSettings {
    pub lambda_max: LambdaMax,
    /// `null`: chosen from `lambda_max` and the grid extent.
    pub panels: Option<usize>,
    pub points_per_panel: usize,
    pub tol: f64,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            lambda_max: LambdaMax::Auto(Auto::Auto),
            panels: None,
            points_per_panel: 16,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSettings {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self {
            format: Format::Json,
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub grid: GridSettings,
    pub quad: QuadSettings,
    pub output: OutputSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: -0.5,
            grid: GridSettings::default(),
            quad: QuadSettings::default(),
            output: OutputSettings::default(),
        }
    }
}

/// Flags shared by every subcommand; each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration; flags given on the command line take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Order alpha (> -1/2) [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Order beta (-1/2 <= beta <= alpha) [default: -0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// First grid node [default: 0.001]
    #[arg(long)]
    pub x_min: Option<f64>,
    /// Last grid node [default: 20]
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Number of grid nodes, at least 16 [default: 512]
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid spacing [default: geometric]
    #[arg(long, value_parser = parse_spacing)]
    pub spacing: Option<Spacing>,
    /// Spectral cut-off, a number or "auto" [default: auto]
    #[arg(long)]
    pub lambda_max: Option<LambdaMax>,
    /// Spectral panels [default: ceil(lambda_max (x_max + 1) / 8)]
    #[arg(long)]
    pub panels: Option<usize>,
    /// Gauss points per spectral panel [default: 16]
    #[arg(long)]
    pub points_per_panel: Option<usize>,
    /// Absolute tolerance for truncated tails [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output format [default: json]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long, short = 'o', value_name = "PATH")]
    pub output: Option<PathBuf>,
}

fn parse_spacing(s: &str) -> Result<Spacing, String> {
    match s {
        "geometric" => Ok(Spacing::Geometric),
        "uniform" => Ok(Spacing::Uniform),
        _ => Err(format!("expected geometric or uniform, got {s:?}")),
    }
}

impl CommonArgs {
    /// Config file (if any) with the flags applied on top, validated.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("config error in {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($flag:expr, $field:expr) => {
                if let Some(v) = $flag.clone() {
                    $field = v;
                }
            };
        }
        set!(self.alpha, cfg.alpha);
        set!(self.beta, cfg.beta);
        set!(self.x_min, cfg.grid.x_min);
        set!(self.x_max, cfg.grid.x_max);
        set!(self.n, cfg.grid.n);
        set!(self.spacing, cfg.grid.spacing);
        set!(self.lambda_max, cfg.quad.lambda_max);
        set!(self.points_per_panel, cfg.quad.points_per_panel);
        set!(self.tol, cfg.quad.tol);
        set!(self.format, cfg.output.format);
        if self.panels.is_some() {
            cfg.quad.panels = self.panels;
        }
        if self.output.is_some() {
            cfg.output.path = self.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        self.params()?;
        if self.grid.n < MIN_NODES {
            bail!("config error: grid.n must be >= {MIN_NODES}, got {}", self.grid.n);
        }
        self.grid_spec().validate().context("config error")?;
        let q = &self.quad;
        if let LambdaMax::Value(l) = q.lambda_max {
            if !(l > 0.0 && l.is_finite()) {
                bail!("config error: quad.lambda_max must be > 0, got {l}");
            }
        }
        if q.panels == Some(0) {
            bail!("config error: quad.panels must be >= 1");
        }
        if q.points_per_panel < 2 {
            bail!("config error: quad.points_per_panel must be >= 2, got {}", q.points_per_panel);
        }
        if !(q.tol > 0.0 && q.tol.is_finite()) {
            bail!("config error: quad.tol must be > 0, got {}", q.tol);
        }
        Ok(())
    }

    pub fn params(&self) -> jacobi_core::Result<JacobiParams> {
        JacobiParams::new(self.alpha, self.beta)
    }

    pub fn grid_spec(&self) -> GridSpec {
        GridSpec {
            x_min: self.grid.x_min,
            x_max: self.grid.x_max,
            n: self.grid.n,
            spacing: self.grid.spacing,
        }
    }

    pub fn nodes(&self) -> jacobi_core::Result<Vec<f64>> {
        self.grid_spec().nodes()
    }

    /// The spectral rule for a given cut-off; records the choice so the
    /// emitted config reproduces it.
    pub fn fix_quadrature(&mut self, lambda_max: f64) -> jacobi_core::Result<QuadratureConfig> {
        let q = &mut self.quad;
        let panels = q
            .panels
            .unwrap_or_else(|| QuadratureConfig::for_grid(lambda_max, self.grid.x_max, q.tol).panels);
        q.lambda_max = LambdaMax::Value(lambda_max);
        q.panels = Some(panels);
        QuadratureConfig::new(lambda_max, panels, q.points_per_panel, q.tol)
    }

    pub fn explicit_lambda_max(&self) -> Option<f64> {
        match self.quad.lambda_max {
            LambdaMax::Value(l) => Some(l),
            LambdaMax::Auto(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_max_parses_and_round_trips() {
        assert_eq!("auto".parse::<LambdaMax>().unwrap(), LambdaMax::Auto(Auto::Auto));
        assert_eq!("12.5".parse::<LambdaMax>().unwrap(), LambdaMax::Value(12.5));
        assert!("big".parse::<LambdaMax>().is_err());
        let cfg = RunConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""lambda_max":"auto""#));
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"quad": {"lambda_max": 30}}"#).unwrap();
        assert_eq!(cfg.quad.lambda_max, LambdaMax::Value(30.0));
        assert_eq!(cfg.grid, GridSettings::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"alpah": 1}"#).is_err());
    }

    #[test]
    fn fixing_the_rule_records_it() {
        let mut cfg = RunConfig::default();
        let q = cfg.fix_quadrature(16.0).unwrap();
        assert_eq!(q, QuadratureConfig::for_grid(16.0, 20.0, 1e-10));
        assert_eq!(cfg.quad.panels, Some(q.panels));
        assert_eq!(cfg.explicit_lambda_max(), Some(16.0));
    }

    #[test]
    fn validation() {
        let d = RunConfig::default();
        let tiny = RunConfig { grid: GridSettings { n: 15, ..d.grid.clone() }, ..d.clone() };
        assert!(tiny.validate().is_err());
        assert!(RunConfig { beta: 1.0, ..d.clone() }.validate().is_err());
        let loose = RunConfig { quad: QuadSettings { tol: 0.0, ..d.quad.clone() }, ..d };
        assert!(loose.validate().is_err());
    }
}
