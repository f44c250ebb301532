//! Spectral regions of `Δ_p`, the threshold `θ_p` and the classification of
//! the shifted heat semigroup `e^{-t(Δ_p - θ)}` on `L^p(μ)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RadialFunction;
use crate::special::jacobi::jacobi_phi_many;
use crate::special::{apply_jacobi_operator, JacobiParams};
use crate::transform::forward_transform;

/// Tolerance of the strip boundary test.
pub const STRIP_TOL: f64 = 1e-12;

/// `θ_p = 4ρ²/(p p')`, the vertex of the parabolic region `P_p`.
///
/// Written as `4ρ² s (1-s)` with `s = 1/p`, which is symmetric under `p ↔ p'`
/// in floating point as well.
pub fn theta_threshold(params: &JacobiParams, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("theta_p needs 1 < p < inf, got p={p}")));
    }
    let rho = params.rho();
    let s = 1.0 / p;
    Ok(4.0 * rho * rho * (s * (1.0 - s)))
}

/// `S_p = {|Im λ| <= |1 - 2/p| ρ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripRegion {
    pub p: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StripPosition {
    Interior,
    Boundary,
    Outside,
}

impl StripRegion {
    pub fn new(p: f64, rho: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::Domain(format!("strip needs 1 <= p < inf, got p={p}")));
        }
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("strip needs rho > 0, got {rho}")));
        }
        Ok(Self { p, rho })
    }

    pub fn half_width(&self) -> f64 {
        (1.0 - 2.0 / self.p).abs() * self.rho
    }

    pub fn position(&self, lambda: Complex64) -> StripPosition {
        let d = lambda.im.abs() - self.half_width();
        if d.abs() <= STRIP_TOL {
            StripPosition::Boundary
        } else if d < 0.0 {
            StripPosition::Interior
        } else {
            StripPosition::Outside
        }
    }
}

pub fn in_strip(region: &StripRegion, lambda: Complex64) -> StripPosition {
    region.position(lambda)
}

/// `P_p = {λ² + ρ² : λ in the open strip}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParabolicRegion {
    pub strip: StripRegion,
}

impl ParabolicRegion {
    pub fn new(p: f64, rho: f64) -> Result<Self> {
        Ok(Self {
            strip: StripRegion::new(p, rho)?,
        })
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let hw = self.strip.half_width();
        let w = principal_root(z - self.strip.rho * self.strip.rho);
        // ±w have the same |Im|, so testing the principal root covers both
        w.im.abs() < hw
    }
}

pub fn in_parabolic_region(region: &ParabolicRegion, z: Complex64) -> bool {
    region.contains(z)
}

/// Square root with `Re >= 0`; on the negative axis the root with `Im > 0`.
pub fn principal_root(w: Complex64) -> Complex64 {
    if w.im == 0.0 && w.re < 0.0 {
        return Complex64::new(0.0, (-w.re).sqrt());
    }
    let r = w.sqrt();
    if r.re < 0.0 {
        -r
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Chaotic,
    NoPeriodicPoints,
    NoPeriodicPointsNotHypercyclic,
    Unclassified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Chaotic => "chaotic",
            Verdict::NoPeriodicPoints => "no-periodic-points",
            Verdict::NoPeriodicPointsNotHypercyclic => "no-periodic-points-not-hypercyclic",
            Verdict::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsVerdict {
    pub verdict: Verdict,
    /// `None` when `p` lies outside `(1, ∞)`.
    pub theta_p: Option<f64>,
    /// `θ - θ_p`
    pub margin: Option<f64>,
    pub reason: String,
}

/// Which of the known results covers `e^{-t(Δ_p - θ)}` on `L^p(μ)`.
pub fn classify(params: &JacobiParams, p: f64, theta: f64) -> DynamicsVerdict {
    let theta_p = match theta_threshold(params, p) {
        Ok(v) => v,
        Err(_) => {
            return DynamicsVerdict {
                verdict: Verdict::Unclassified,
                theta_p: None,
                margin: None,
                reason: "outside theorem hypotheses (needs 1 < p < inf)".into(),
            }
        }
    };
    let margin = theta - theta_p;
    let (verdict, reason) = if p > 2.0 {
        if margin > 0.0 {
            (Verdict::Chaotic, "p > 2 and theta > theta_p".to_string())
        } else {
            (
                Verdict::Unclassified,
                "p > 2 with theta <= theta_p is not covered".to_string(),
            )
        }
    } else if p == 2.0 {
        (
            Verdict::NoPeriodicPoints,
            "p = 2: no periodic points; hypercyclicity is not decided".to_string(),
        )
    } else {
        (
            Verdict::NoPeriodicPointsNotHypercyclic,
            "1 < p < 2: no periodic points and not hypercyclic".to_string(),
        )
    };
    DynamicsVerdict {
        verdict,
        theta_p: Some(theta_p),
        margin: Some(margin),
        reason,
    }
}

/// `λ = sqrt(z + θ - ρ²)` with `Re λ > 0`, checked against `Ω_θ`.
pub fn omega_root(params: &JacobiParams, p: f64, theta: f64, z: Complex64) -> Result<Complex64> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::Domain(format!("eigenfunctions phi_z need 2 < p < inf, got p={p}")));
    }
    let rho = params.rho();
    let w = z + theta - rho * rho;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::Slit {
            z,
            bound: rho * rho - theta,
        });
    }
    let lambda = principal_root(w);
    let strip = StripRegion::new(p, rho)?;
    if strip.position(lambda) != StripPosition::Interior {
        return Err(Error::Region {
            z,
            im_lambda: lambda.im.abs(),
            half_width: strip.half_width(),
        });
    }
    Ok(lambda)
}

/// `φ_z = φ_λ` with `z = λ² + ρ² - θ`, sampled on `nodes`.
pub fn eigenfunction_phi_z(
    params: &JacobiParams,
    p: f64,
    theta: f64,
    z: Complex64,
    nodes: &[f64],
) -> Result<(Complex64, RadialFunction)> {
    let lambda = omega_root(params, p, theta, z)?;
    let values = jacobi_phi_many(params, lambda, nodes)?;
    Ok((lambda, RadialFunction::new(nodes.to_vec(), values)?))
}

/// `z = 2πik/T`, `k ≠ 0`, lying in `Ω_θ`; empty when the chaotic regime does not apply.
pub fn periodic_eigenvalues(params: &JacobiParams, p: f64, theta: f64, period: f64) -> Result<Vec<Complex64>> {
    if !(period > 0.0) || !period.is_finite() {
        return Err(Error::Domain(format!("period must be finite and > 0, got {period}")));
    }
    let v = classify(params, p, theta);
    if v.verdict != Verdict::Chaotic {
        return Ok(Vec::new());
    }
    let step = 2.0 * PI / period;
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let mut k = 1u64;
        loop {
            let z = Complex64::new(0.0, sign * step * k as f64);
            if omega_root(params, p, theta, z).is_err() {
                break;
            }
            out.push(z);
            k += 1;
        }
    }
    out.sort_by(|a, b| a.im.total_cmp(&b.im));
    Ok(out)
}

/// `F_f(z) = f̂(sqrt(z + θ - ρ²))`.
pub fn dsw_pairing(
    params: &JacobiParams,
    p: f64,
    theta: f64,
    f: &RadialFunction,
    z: Complex64,
) -> Result<Complex64> {
    let lambda = omega_root(params, p, theta, z)?;
    Ok(forward_transform(params, f, lambda)?.value)
}

/// `sup |(Δ-θ)φ - zφ| / (max(1, |z|) sup |φ|)` over the interior nodes of `phi`.
pub fn verify_eigen_residual(
    params: &JacobiParams,
    theta: f64,
    z: Complex64,
    phi: &RadialFunction,
) -> Result<f64> {
    let d = apply_jacobi_operator(params, phi)?;
    let offset = phi.nodes().partition_point(|&x| x < d.nodes()[0]);
    let mut num: f64 = 0.0;
    let mut sup: f64 = 0.0;
    for (k, dv) in d.values().iter().enumerate() {
        let v = phi.values()[offset + k];
        num = num.max((dv - theta * v - z * v).norm());
        sup = sup.max(v.norm());
    }
    if sup == 0.0 {
        return Ok(num);
    }
    Ok(num / (z.norm().max(1.0) * sup))
}
