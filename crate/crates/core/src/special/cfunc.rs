//! Harish-Chandra c-function and the Plancherel density `|c(λ)|^{-2}`.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use super::gamma::{ln_gamma, near_pole};
use super::params::JacobiParams;
use crate::error::{Error, Result};

/// A c-function value; `denominator_pole` marks the exact zeros coming from
/// poles of the gamma factors in the denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CValue {
    pub value: Complex64,
    pub denominator_pole: bool,
}

/// `ln c(λ)`, or `None` where `c` vanishes exactly.
pub(crate) fn ln_c_function(params: &JacobiParams, lambda: Complex64) -> Result<Option<Complex64>> {
    let i = Complex64::i();
    let il = i * lambda;
    if let Some(n) = near_pole(il) {
        return Err(Error::Pole {
            location: Complex64::new(n, 0.0),
        });
    }
    let half = 0.5 * (params.rho() + il);
    let half_shift = half - params.beta();
    if near_pole(half).is_some() || near_pole(half_shift).is_some() {
        return Ok(None);
    }
    let alpha1 = Complex64::new(params.alpha() + 1.0, 0.0);
    let ln_c = (params.rho() - il) * LN_2 + ln_gamma(alpha1)? + ln_gamma(il)?
        - ln_gamma(half)?
        - ln_gamma(half_shift)?;
    Ok(Some(ln_c))
}

/// `c(λ) = 2^{ρ-iλ} Γ(α+1) Γ(iλ) / (Γ(½(ρ+iλ)) Γ(½(ρ+iλ)-β))` with its zero flag.
pub fn c_function_eval(params: &JacobiParams, lambda: Complex64) -> Result<CValue> {
    match ln_c_function(params, lambda)? {
        None => Ok(CValue {
            value: Complex64::new(0.0, 0.0),
            denominator_pole: true,
        }),
        Some(l) => {
            if l.re > 709.0 {
                return Err(Error::Range { exponent: l.re });
            }
            Ok(CValue {
                value: l.exp(),
                denominator_pole: false,
            })
        }
    }
}

/// The c-function; exactly zero at denominator poles, error at the poles of `Γ(iλ)`.
pub fn c_function(params: &JacobiParams, lambda: Complex64) -> Result<Complex64> {
    c_function_eval(params, lambda).map(|c| c.value)
}

/// Plancherel density `|c(λ)|^{-2}` for real `λ`; set to `0` at `λ = 0`.
pub fn plancherel_density(params: &JacobiParams, lambda: f64) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("density at non-finite lambda {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    match ln_c_function(params, Complex64::new(lambda.abs(), 0.0)) {
        Ok(Some(l)) => Ok((-2.0 * l.re).exp()),
        // |Γ(iλ)| is finite for real λ ≠ 0 and the denominators have no real poles,
        // so these arms only trigger within the pole tolerance of 0
        Ok(None) => Err(Error::Domain(format!("c({lambda}) vanishes"))),
        Err(Error::Pole { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one() -> JacobiParams {
        JacobiParams::new(0.5, -0.5).unwrap()
    }

    #[test]
    fn closed_form_order_collapses_to_one_over_i_lambda() {
        let p = rank_one();
        let c = c_function(&p, Complex64::new(2.0, 0.0)).unwrap();
        assert!((c - Complex64::new(0.0, -0.5)).norm() < 1e-13, "{c}");
        for &l in &[0.1, 0.7, 3.0, 11.0, 40.0] {
            let c = c_function(&p, Complex64::new(l, 0.0)).unwrap();
            let exact = 1.0 / Complex64::new(0.0, l);
            assert!((c - exact).norm() <= 1e-12 * exact.norm());
        }
    }

    #[test]
    fn pole_at_zero() {
        assert!(matches!(
            c_function(&rank_one(), Complex64::new(0.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn conjugate_symmetry_on_real_axis() {
        for p in [
            rank_one(),
            JacobiParams::new(0.0, 0.0).unwrap(),
            JacobiParams::new(2.0, 1.0).unwrap(),
        ] {
            let a = c_function(&p, Complex64::new(1.3, 0.0)).unwrap();
            let b = c_function(&p, Complex64::new(-1.3, 0.0)).unwrap();
            assert!((a.conj() - b).norm() <= 1e-13 * a.norm());
        }
    }

    #[test]
    fn denominator_pole_gives_flagged_zero() {
        // ½(ρ+iλ) = 0 at λ = iρ
        let p = JacobiParams::new(0.25, 0.0).unwrap();
        let c = c_function_eval(&p, Complex64::new(0.0, p.rho())).unwrap();
        assert!(c.denominator_pole);
        assert_eq!(c.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn density_values() {
        let p = rank_one();
        assert!((plancherel_density(&p, 3.0).unwrap() - 9.0).abs() < 1e-11);
        assert_eq!(plancherel_density(&p, 0.0).unwrap(), 0.0);
        let q = JacobiParams::new(2.0, 1.0).unwrap();
        for &l in &[0.3, 2.0, 9.0] {
            assert_eq!(
                plancherel_density(&q, l).unwrap(),
                plancherel_density(&q, -l).unwrap()
            );
            assert!(plancherel_density(&q, l).unwrap() > 0.0);
        }
    }
}
