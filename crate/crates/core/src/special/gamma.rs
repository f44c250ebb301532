//! Complex gamma function.
//!
//! Lanczos approximation (g = 7, nine terms) on `Re z >= 1/2`, reflection
//! `Γ(z)Γ(1-z) = π / sin(πz)` on the left half-plane. Everything is carried in
//! log form so that c-function ratios at large `|Im z|` do not overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance to a nonpositive integer below which an argument counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Returns the nonpositive integer `z` sits on, if any (within [`POLE_TOLERANCE`]).
pub fn near_pole(z: Complex64) -> Option<f64> {
    if z.re > POLE_TOLERANCE {
        return None;
    }
    let n = z.re.round();
    if n <= 0.0 && ((z.re - n).powi(2) + z.im * z.im).sqrt() <= POLE_TOLERANCE {
        Some(n)
    } else {
        None
    }
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln sin(πz)` without forming `sin(πz)` when `|Im z|` is large.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = PI * z;
    if w.im.abs() < 30.0 {
        return w.sin().ln();
    }
    let i = Complex64::i();
    if w.im > 0.0 {
        // sin w = (i/2) e^{-iw} (1 - e^{2iw})
        -i * w + (1.0 - (2.0 * i * w).exp()).ln() + Complex64::new(0.0, 0.5).ln()
    } else {
        // sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() + Complex64::new(0.0, -0.5).ln()
    }
}

/// Principal-ish `ln Γ(z)`; only `exp` of the result is meaningful (branch is not tracked).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if let Some(n) = near_pole(z) {
        return Err(Error::Pole {
            location: Complex64::new(n, 0.0),
        });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(PI.ln() - ln_sin_pi(z) - ln_gamma_right(1.0 - z))
    }
}

/// `Γ(z)`. Poles at `0, -1, -2, ...` are reported as [`Error::Pole`].
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    let lg = ln_gamma(z)?;
    if lg.re > 709.0 {
        return Err(Error::Range { exponent: lg.re });
    }
    Ok(lg.exp())
}

/// `1/Γ(z)`, entire; zero at the poles of `Γ`.
pub fn recip_gamma(z: Complex64) -> Result<Complex64> {
    if near_pole(z).is_some() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((-ln_gamma(z)?).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route: Stirling series after shifting `Re z` above 15.
    fn ln_gamma_stirling(mut z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        while z.re < 15.0 {
            shift += z.ln();
            z += 1.0;
        }
        let z2 = z * z;
        let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
            - 1.0 / (1680.0 * z * z2 * z2 * z2)
            + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
        (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn factorial_and_half_integer_values() {
        let g5 = complex_gamma(Complex64::new(5.0, 0.0)).unwrap();
        assert!((g5.re - 24.0).abs() < 1e-12 && g5.im.abs() < 1e-12);
        let gh = complex_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!((gh.re - PI.sqrt()).abs() < 1e-13);
        assert!((gh.re - 1.772_453_850_9).abs() < 1e-10);
    }

    #[test]
    fn gamma_of_i_matches_reflection_modulus() {
        let g = complex_gamma(Complex64::i()).unwrap();
        let expected = (PI / PI.sinh()).sqrt();
        assert!((g.norm() - expected).abs() < 1e-13);
        assert!((g.norm() - 0.521_564).abs() < 1e-6);
    }

    #[test]
    fn poles_are_reported_with_location() {
        for n in 0..5 {
            let z = Complex64::new(-(n as f64), 0.0);
            match complex_gamma(z) {
                Err(Error::Pole { location }) => assert_eq!(location.re, -(n as f64)),
                other => panic!("expected pole, got {other:?}"),
            }
        }
        assert!(complex_gamma(Complex64::new(-2.0 + 1e-13, 0.0)).is_err());
        assert!(complex_gamma(Complex64::new(-2.0 + 1e-9, 0.0)).is_ok());
    }

    #[test]
    fn agrees_with_stirling_on_disc_of_radius_50() {
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                let z = Complex64::new(-49.3 + 2.5 * i as f64, -49.1 + 2.5 * j as f64);
                if z.norm() > 50.0 || near_pole(z).is_some() {
                    continue;
                }
                let a = complex_gamma(z);
                let a = match a {
                    Ok(v) => v,
                    Err(Error::Range { .. }) => continue,
                    Err(e) => panic!("{e}"),
                };
                let b = ln_gamma_stirling(z).exp();
                if b.norm() == 0.0 || !b.norm().is_finite() {
                    continue;
                }
                worst = worst.max(rel(a, b));
            }
        }
        assert!(worst < 1e-12, "worst relative error {worst:e}");
    }

    #[test]
    fn recip_gamma_vanishes_at_poles() {
        assert_eq!(recip_gamma(Complex64::new(-3.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let r = recip_gamma(Complex64::new(4.0, 0.0)).unwrap();
        assert!((r.re - 1.0 / 6.0).abs() < 1e-14);
    }
}
