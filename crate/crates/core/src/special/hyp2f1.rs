//! Gauss hypergeometric function on the negative real axis.
//!
//! `₂F₁(a, b; c; z)` for `z <= 0` is computed along the path `z = -sinh²x`.
//! Near the origin the defining series is summed directly. Further out the
//! solution of the hypergeometric equation is continued by re-centred Taylor
//! expansions whose coefficients come from the three-term recursion the
//! equation forces; each expansion is kept inside half its convergence radius
//! and inside a bounded number of oscillations so cancellation stays small.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::near_pole;
use crate::error::{Error, Result};

/// Which evaluation strategy produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Defining power series around `z = 0`.
    Series,
    /// Re-centred series continuation along the negative axis.
    TransformedSeries,
    /// Expansion at infinity (Harish-Chandra series).
    Asymptotic,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Series => "series",
            Regime::TransformedSeries => "transformed-series",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

/// Diagnostics attached to a hypergeometric / Jacobi function value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRegimeReport {
    pub regime: Regime,
    pub terms_used: usize,
    pub est_error: f64,
}

pub(crate) const MAX_TERMS: usize = 4000;
/// Maximum phase (in units of the local frequency) covered by one expansion.
const PHASE_PER_STEP: f64 = 2.0;
/// Fraction of the distance to the nearest singular point used per step.
const RADIUS_FRACTION: f64 = 0.5;
const EPS: f64 = f64::EPSILON;

/// `|z|` up to which the defining series is used.
pub const SERIES_LIMIT: f64 = 0.5;

/// Nonpositive integer `m` with `w = -m`, if `w` is one (within the pole tolerance).
pub(crate) fn nonpositive_integer(w: Complex64) -> Option<usize> {
    near_pole(w).map(|n| (-n) as usize)
}

/// `₂F₁(a,b;c;z)` for real `z <= 0`.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    hyp2f1_with_report(a, b, c, z).map(|(v, _)| v)
}

/// As [`hyp2f1`], also returning the regime diagnostics.
pub fn hyp2f1_with_report(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: f64,
) -> Result<(Complex64, EvalRegimeReport)> {
    if !(z <= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("hyp2f1 requires finite z <= 0, got {z}")));
    }
    let x = (-z).sqrt().asinh();
    let mut path = NegativeAxisPath::new(a, b, c)?;
    let mut out = [Complex64::new(0.0, 0.0)];
    let mut reports = [None];
    path.evaluate_at(&[x], &mut out, Some(&mut reports))?;
    Ok((out[0], reports[0].expect("report filled")))
}

/// Taylor coefficients of the hypergeometric solution around `z0`, scaled by `h^n`.
struct Expansion {
    z0: f64,
    h: f64,
    coeffs: Vec<Complex64>,
    abs_sum: f64,
}

impl Expansion {
    fn eval(&self, s: f64) -> (Complex64, Complex64, f64) {
        let t = s / self.h;
        let mut val = Complex64::new(0.0, 0.0);
        let mut der = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (n, &v) in self.coeffs.iter().enumerate().rev() {
            der = der * t + v * n as f64;
            val = val * t + v;
            mag = mag * t.abs() + v.norm();
        }
        // der currently holds sum n v_n t^n; drop one power of t
        let der = if s != 0.0 {
            der / s
        } else if self.coeffs.len() > 1 {
            self.coeffs[1] / self.h
        } else {
            Complex64::new(0.0, 0.0)
        };
        (val, der, mag)
    }
}

/// Stepper for the solution of the hypergeometric equation normalised by `u(0) = 1`.
pub(crate) struct NegativeAxisPath {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    /// Local frequency in the `x` variable; bounds the step length.
    kappa: f64,
    polynomial_degree: Option<usize>,
}

impl NegativeAxisPath {
    pub(crate) fn new(a: Complex64, b: Complex64, c: Complex64) -> Result<Self> {
        if let Some(m) = nonpositive_integer(c) {
            return Err(Error::Parameter(format!(
                "c = {c} is the nonpositive integer -{m}; 2F1 is undefined"
            )));
        }
        let polynomial_degree = match (nonpositive_integer(a), nonpositive_integer(b)) {
            (Some(m), Some(k)) => Some(m.min(k)),
            (Some(m), None) | (None, Some(m)) => Some(m),
            (None, None) => None,
        };
        let kappa = 2.0 * a.norm().max(b.norm()).max(0.5);
        Ok(Self {
            a,
            b,
            c,
            kappa,
            polynomial_degree,
        })
    }

    fn series_coeffs(&self, h: f64) -> Result<Expansion> {
        // v_n = (a)_n (b)_n / ((c)_n n!) h^n
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        let mut abs_sum = 1.0;
        let mut n = 0usize;
        loop {
            let nf = n as f64;
            let prev = coeffs[n];
            let next = prev * (self.a + nf) * (self.b + nf) / ((self.c + nf) * (nf + 1.0)) * h;
            coeffs.push(next);
            abs_sum += next.norm();
            n += 1;
            if let Some(deg) = self.polynomial_degree {
                if n > deg {
                    break;
                }
                continue;
            }
            if n >= 4 && coeffs[n].norm() + coeffs[n - 1].norm() <= 1e-18 * abs_sum {
                break;
            }
            if n >= MAX_TERMS {
                return Err(Error::Accuracy {
                    message: "hypergeometric series did not converge".into(),
                    partial: coeffs.iter().sum(),
                    estimate: coeffs[n].norm(),
                });
            }
        }
        Ok(Expansion {
            z0: 0.0,
            h,
            coeffs,
            abs_sum,
        })
    }

    fn taylor_coeffs(&self, z0: f64, u0: Complex64, du0: Complex64, h: f64) -> Result<Expansion> {
        // z(1-z)u'' + (c - (a+b+1) z) u' - ab u = 0 expanded at z0, scaled by h^n
        let p0 = z0 * (1.0 - z0);
        let p1 = 1.0 - 2.0 * z0;
        let q0 = self.c - (self.a + self.b + 1.0) * z0;
        let mut coeffs = vec![u0, du0 * h];
        let mut abs_sum = u0.norm() + coeffs[1].norm();
        let mut n = 0usize;
        loop {
            let nf = n as f64;
            let t1 = -(nf + 1.0) * (q0 + p1 * nf) * h * coeffs[n + 1];
            let t2 = (self.a + nf) * (self.b + nf) * (h * h) * coeffs[n];
            let next = (t1 + t2) / (p0 * (nf + 2.0) * (nf + 1.0));
            coeffs.push(next);
            abs_sum += next.norm();
            n += 1;
            let k = n + 1;
            if k >= 6 && coeffs[k].norm() + coeffs[k - 1].norm() <= 1e-18 * abs_sum {
                break;
            }
            if k >= MAX_TERMS {
                return Err(Error::Accuracy {
                    message: "re-centred hypergeometric expansion did not converge".into(),
                    partial: u0,
                    estimate: coeffs[k].norm(),
                });
            }
        }
        Ok(Expansion {
            z0,
            h,
            coeffs,
            abs_sum,
        })
    }

    /// End of the directly-summed region, in the `x` variable.
    fn series_end(&self) -> f64 {
        let by_radius = SERIES_LIMIT.sqrt().asinh();
        by_radius.min(PHASE_PER_STEP / self.kappa)
    }

    /// Evaluate at ascending `xs` (`z = -sinh² x`), writing values into `out`.
    pub(crate) fn evaluate_at(
        &mut self,
        xs: &[f64],
        out: &mut [Complex64],
        mut reports: Option<&mut [Option<EvalRegimeReport>]>,
    ) -> Result<()> {
        debug_assert_eq!(xs.len(), out.len());
        if xs.is_empty() {
            return Ok(());
        }
        if xs.windows(2).any(|w| w[1] < w[0]) || xs[0] < 0.0 {
            return Err(Error::Input("evaluation points must be ascending and >= 0".into()));
        }

        if self.polynomial_degree.is_some() {
            for (i, &x) in xs.iter().enumerate() {
                if x == 0.0 {
                    out[i] = Complex64::new(1.0, 0.0);
                    if let Some(r) = reports.as_deref_mut() {
                        r[i] = Some(EvalRegimeReport {
                            regime: Regime::Series,
                            terms_used: 1,
                            est_error: 0.0,
                        });
                    }
                    continue;
                }
                let z = -x.sinh().powi(2);
                let exp = self.series_coeffs(z)?;
                let (v, _, mag) = exp.eval(z);
                out[i] = v;
                if let Some(r) = reports.as_deref_mut() {
                    r[i] = Some(EvalRegimeReport {
                        regime: Regime::Series,
                        terms_used: exp.coeffs.len(),
                        est_error: EPS * mag / v.norm().max(f64::MIN_POSITIVE),
                    });
                }
            }
            return Ok(());
        }

        let x_series = self.series_end();
        let mut idx = 0;
        // direct series on [0, x_series]
        while idx < xs.len() && xs[idx] <= x_series {
            let x = xs[idx];
            if x == 0.0 {
                out[idx] = Complex64::new(1.0, 0.0);
                if let Some(r) = reports.as_deref_mut() {
                    r[idx] = Some(EvalRegimeReport {
                        regime: Regime::Series,
                        terms_used: 1,
                        est_error: 0.0,
                    });
                }
            } else {
                let z = -x.sinh().powi(2);
                let exp = self.series_coeffs(z)?;
                let (v, _, mag) = exp.eval(z);
                out[idx] = v;
                if let Some(r) = reports.as_deref_mut() {
                    r[idx] = Some(EvalRegimeReport {
                        regime: Regime::Series,
                        terms_used: exp.coeffs.len(),
                        est_error: EPS * mag / v.norm().max(f64::MIN_POSITIVE),
                    });
                }
            }
            idx += 1;
        }
        if idx == xs.len() {
            return Ok(());
        }

        // continuation
        let z_start = -x_series.sinh().powi(2);
        let start = self.series_coeffs(z_start)?;
        let (mut u, mut du, mag) = start.eval(z_start);
        let mut x0 = x_series;
        let mut err = EPS * mag / u.norm().max(f64::MIN_POSITIVE);
        let mut terms = start.coeffs.len();
        let x_last = xs[xs.len() - 1];

        while idx < xs.len() {
            let sinh0 = x0.sinh();
            let by_radius = ((1.0 + RADIUS_FRACTION).sqrt() * sinh0).asinh();
            let by_phase = x0 + PHASE_PER_STEP / self.kappa;
            let x1 = by_radius.min(by_phase).min(x_last);
            let z0 = -sinh0 * sinh0;
            let h = -(x1 - x0).sinh() * (x1 + x0).sinh();
            if h == 0.0 {
                // remaining targets coincide with x0
                while idx < xs.len() {
                    out[idx] = u;
                    idx += 1;
                }
                break;
            }
            let exp = self.taylor_coeffs(z0, u, du, h)?;
            terms += exp.coeffs.len();
            let step_err = EPS * exp.abs_sum / u.norm().max(f64::MIN_POSITIVE);
            while idx < xs.len() && xs[idx] <= x1 {
                let x = xs[idx];
                let s = -(x - x0).sinh() * (x + x0).sinh();
                let (v, _, m) = exp.eval(s);
                out[idx] = v;
                if let Some(r) = reports.as_deref_mut() {
                    r[idx] = Some(EvalRegimeReport {
                        regime: Regime::TransformedSeries,
                        terms_used: terms,
                        est_error: err + EPS * m / v.norm().max(f64::MIN_POSITIVE),
                    });
                }
                idx += 1;
            }
            let (u1, du1, m1) = exp.eval(h);
            debug_assert!(exp.z0 == z0);
            err += step_err.max(EPS * m1 / u1.norm().max(f64::MIN_POSITIVE));
            if !u1.re.is_finite() || !u1.im.is_finite() {
                return Err(Error::Range {
                    exponent: u.norm().ln(),
                });
            }
            u = u1;
            du = du1;
            x0 = x1;
        }
        Ok(())
    }
}
