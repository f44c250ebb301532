mod config;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use jacobi_core::dynamics::{classify, periodic_eigenvalues, principal_root};
use jacobi_core::heat::{evolve_with, heat_kernel, HeatQuery};
use jacobi_core::lorentz::{lorentz_norm, LorentzIndex};
use jacobi_core::special::{c_function_eval, jacobi_phi_sorted, jacobi_phi_with_report, plancherel_density};
use jacobi_core::transform::{auto_lambda_max, forward_transform};
use jacobi_core::{Complex64, JacobiTransform, RadialFunction, SpectralFunction};
use serde_json::{json, Map, Value};

use config::{CommonArgs, RunConfig, AUTO_LAMBDA_CAP};
use io::{complex, num, Output};
use verify::Suite;

/// Environment variable capping the worker threads.
const THREADS_VAR: &str = "JACOBI_HEAT_THREADS";

#[derive(Parser)]
#[command(
    name = "jacobi",
    version,
    about = "Jacobi functions, transforms, heat kernels, Lorentz norms and heat-semigroup dynamics",
    after_help = "Environment: JACOBI_HEAT_THREADS caps the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate phi_lambda at one point, or on the configured grid
    Phi(PhiArgs),
    /// Harish-Chandra c-function and Plancherel density
    Cfun(CfunArgs),
    /// Forward Jacobi transform of a function
    Transform(TransformArgs),
    /// Inverse Jacobi transform of a spectral table
    Invert(InvertArgs),
    /// Heat kernel h_t on the configured grid
    HeatKernel(HeatKernelArgs),
    /// Apply e^{-t(Delta - theta)} to a function
    Evolve(EvolveArgs),
    /// Lorentz norm ||f||_{p,q}
    LorentzNorm(LorentzArgs),
    /// Classify the shifted heat semigroup on L^p
    Classify(ClassifyArgs),
    /// Periodic-point eigenvalues 2 pi i k / T of the generator
    Periodic(PeriodicArgs),
    /// Run a verification suite and report each check
    Verify(VerifyArgs),
}

/// Spectral parameter `lambda = re + i im`.
#[derive(Args, Clone)]
struct LambdaArgs {
    /// Real part of lambda
    #[arg(long = "lambda", allow_negative_numbers = true)]
    re: Option<f64>,
    /// Imaginary part of lambda [default: 0]
    #[arg(long = "lambda-im", allow_negative_numbers = true, default_value_t = 0.0)]
    im: f64,
}

impl LambdaArgs {
    fn value(&self) -> Option<Complex64> {
        self.re.map(|re| Complex64::new(re, self.im))
    }
}

/// Where a space-side function comes from.
#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// CSV file with columns x,re,im
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Built-in function on the configured grid: gauss (e^{-x^2}), bump ((1-x^2/9)^10 e^{-x^2/2} on [0,3]), indicator:R
    #[arg(long, value_name = "NAME")]
    function: Option<String>,
}

impl SourceArgs {
    fn load(&self, cfg: &RunConfig) -> anyhow::Result<RadialFunction> {
        if let Some(p) = &self.input {
            return io::read_radial(p);
        }
        let name = self.function.as_deref().unwrap_or_default();
        let nodes = cfg.nodes()?;
        let f: Box<dyn Fn(f64) -> f64> = match name.split_once(':') {
            None if name == "gauss" => Box::new(|x: f64| (-x * x).exp()),
            None if name == "bump" => Box::new(|x: f64| {
                if x < 3.0 {
                    (1.0 - x * x / 9.0).powi(10) * (-0.5 * x * x).exp()
                } else {
                    0.0
                }
            }),
            Some(("indicator", r)) => {
                let r: f64 = r.parse().with_context(|| format!("bad indicator radius {r:?}"))?;
                Box::new(move |x: f64| if x <= r { 1.0 } else { 0.0 })
            }
            _ => bail!("unknown function {name:?} (expected gauss, bump or indicator:R)"),
        };
        Ok(RadialFunction::from_real_fn(nodes, f)?)
    }
}

#[derive(Args)]
struct PhiArgs {
    #[command(flatten)]
    lambda: LambdaArgs,
    /// Evaluation point; without it phi is tabulated on the grid
    #[arg(long)]
    x: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CfunArgs {
    #[command(flatten)]
    lambda: LambdaArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Evaluate at this single lambda instead of on the spectral rule
    #[command(flatten)]
    lambda: LambdaArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct InvertArgs {
    /// CSV file with columns lambda,re,im
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HeatKernelArgs {
    /// Time t > 0
    #[arg(long)]
    t: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Time t > 0
    #[arg(long)]
    t: f64,
    /// Shift theta [default: 0]
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct LorentzArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// First index p >= 1
    #[arg(long)]
    p: f64,
    /// Second index q >= 1, or "inf" for the weak space
    #[arg(long, value_parser = parse_q)]
    q: f64,
    #[command(flatten)]
    common: CommonArgs,
}

fn parse_q(s: &str) -> Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|_| format!("expected a number or inf, got {s:?}")),
    }
}

#[derive(Args)]
struct ClassifyArgs {
    /// Exponent p of L^p
    #[arg(long)]
    p: f64,
    /// Shift theta
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PeriodicArgs {
    /// Exponent p of L^p
    #[arg(long)]
    p: f64,
    /// Shift theta
    #[arg(long, allow_negative_numbers = true)]
    theta: f64,
    /// Period T > 0
    #[arg(long)]
    period: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Heat time used by the heat suite [default: 1]
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[command(flatten)]
    common: CommonArgs,
}

fn record(pairs: Vec<(&str, Value)>) -> Output {
    Output::Record(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

/// Cut-off from the config, or sized from `f` when it is `auto`.
fn lambda_max_for(cfg: &RunConfig, f: &RadialFunction) -> anyhow::Result<f64> {
    Ok(match cfg.explicit_lambda_max() {
        Some(l) => l,
        None => auto_lambda_max(&cfg.params()?, f, cfg.quad.tol, AUTO_LAMBDA_CAP)?,
    })
}

fn run(command: Command) -> anyhow::Result<(Output, RunConfig)> {
    match command {
        Command::Phi(a) => {
            let cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let Some(lambda) = a.lambda.value() else {
                bail!("phi needs --lambda");
            };
            match a.x {
                Some(x) => {
                    let (v, rep) = jacobi_phi_with_report(&p, lambda, x)?;
                    let out = record(vec![
                        ("value_re", num(v.re)),
                        ("value_im", num(v.im)),
                        ("regime", json!(rep.regime.as_str())),
                        ("terms_used", json!(rep.terms_used)),
                        ("est_error", num(rep.est_error)),
                    ]);
                    Ok((out, cfg))
                }
                None => {
                    let xs = cfg.nodes()?;
                    let vs = jacobi_phi_sorted(&p, lambda, &xs)?;
                    Ok((Output::Radial(RadialFunction::new(xs, vs)?), cfg))
                }
            }
        }
        Command::Cfun(a) => {
            let cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let Some(lambda) = a.lambda.value() else {
                bail!("cfun needs --lambda");
            };
            let value = match c_function_eval(&p, lambda) {
                Ok(c) => complex(c.value),
                Err(jacobi_core::Error::Pole { .. }) => json!({ "pole": true }),
                Err(e) => return Err(e.into()),
            };
            let density = if lambda.im == 0.0 {
                num(plancherel_density(&p, lambda.re.abs())?)
            } else {
                Value::Null
            };
            let out = record(vec![
                ("lambda", complex(lambda)),
                ("c", value),
                ("plancherel_density", density),
            ]);
            Ok((out, cfg))
        }
        Command::Transform(a) => {
            let mut cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let f = a.source.load(&cfg)?;
            if let Some(lambda) = a.lambda.value() {
                let v = forward_transform(&p, &f, lambda)?;
                let out = record(vec![
                    ("lambda", complex(lambda)),
                    ("value", complex(v.value)),
                    ("tail_estimate", num(v.tail_estimate)),
                ]);
                return Ok((out, cfg));
            }
            let l = lambda_max_for(&cfg, &f)?;
            let quad = cfg.fix_quadrature(l)?;
            let g = JacobiTransform::new(&p, f.nodes(), &quad)?.forward(&f)?;
            Ok((Output::Spectral(g), cfg))
        }
        Command::Invert(a) => {
            let mut cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let g: SpectralFunction = io::read_spectral(&a.input)?;
            let l = cfg.explicit_lambda_max().unwrap_or(g.lambda_max());
            let quad = cfg.fix_quadrature(l)?;
            let xs = cfg.nodes()?;
            let f = JacobiTransform::new(&p, &xs, &quad)?.inverse(&g)?;
            Ok((Output::Radial(f), cfg))
        }
        Command::HeatKernel(a) => {
            let mut cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let q = HeatQuery::new(p, a.t, 0.0)?;
            let l = cfg.explicit_lambda_max().unwrap_or(40.0);
            let quad = cfg.fix_quadrature(l)?;
            let k = heat_kernel(&q, &cfg.nodes()?, &quad)?;
            Ok((Output::Radial(k), cfg))
        }
        Command::Evolve(a) => {
            let mut cfg = a.common.resolve()?;
            let p = cfg.params()?;
            HeatQuery::new(p, a.t, a.theta)?;
            let f = a.source.load(&cfg)?;
            let l = lambda_max_for(&cfg, &f)?;
            let quad = cfg.fix_quadrature(l)?;
            let tr = JacobiTransform::new(&p, f.nodes(), &quad)?;
            let u = evolve_with(&tr, &f, &[a.t], a.theta)?.remove(0);
            Ok((Output::Radial(u), cfg))
        }
        Command::LorentzNorm(a) => {
            let cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let f = a.source.load(&cfg)?;
            let n = lorentz_norm(&p, &f, LorentzIndex::new(a.p, a.q)?)?;
            let q = if a.q.is_finite() { json!(a.q) } else { json!("inf") };
            let out = record(vec![
                ("p", json!(a.p)),
                ("q", q),
                ("value", num(n.value)),
                ("truncated", json!(n.truncated)),
            ]);
            Ok((out, cfg))
        }
        Command::Classify(a) => {
            let cfg = a.common.resolve()?;
            let v = classify(&cfg.params()?, a.p, a.theta);
            let out = record(vec![
                ("verdict", json!(v.verdict.as_str())),
                ("theta_p", v.theta_p.map_or(Value::Null, num)),
                ("margin", v.margin.map_or(Value::Null, num)),
                ("reason", json!(v.reason)),
            ]);
            Ok((out, cfg))
        }
        Command::Periodic(a) => {
            let cfg = a.common.resolve()?;
            let p = cfg.params()?;
            let zs = periodic_eigenvalues(&p, a.p, a.theta, a.period)?;
            let rho2 = p.rho() * p.rho();
            let items: Vec<Value> = zs
                .iter()
                .map(|&z| json!({ "z": complex(z), "lambda": complex(principal_root(z + a.theta - rho2)) }))
                .collect();
            let out = record(vec![
                ("verdict", json!(classify(&p, a.p, a.theta).verdict.as_str())),
                ("count", json!(zs.len())),
                ("eigenvalues", Value::Array(items)),
            ]);
            Ok((out, cfg))
        }
        Command::Verify(a) => {
            let cfg = a.common.resolve()?;
            let report = verify::run(a.suite, &cfg, a.t);
            Ok((Output::Report(report), cfg))
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let result = init_threads()
        .and_then(|_| run(cli.command))
        .and_then(|(out, cfg)| io::emit(&out, &cfg).map(|_| out.succeeded()));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
