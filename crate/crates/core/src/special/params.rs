use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The order `(alpha, beta)` of the Jacobi analysis, with `rho = alpha + beta + 1`.
///
/// Admissible orders satisfy `alpha >= beta >= -1/2` and `alpha > -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Parameter(format!(
                "order must be finite, got alpha={alpha}, beta={beta}"
            )));
        }
        if alpha <= -0.5 {
            return Err(Error::Parameter(format!(
                "alpha > -1/2 required, got alpha={alpha}"
            )));
        }
        if beta < -0.5 {
            return Err(Error::Parameter(format!(
                "beta >= -1/2 required, got beta={beta}"
            )));
        }
        if alpha < beta {
            return Err(Error::Parameter(format!(
                "alpha >= beta required, got alpha={alpha}, beta={beta}"
            )));
        }
        let rho = alpha + beta + 1.0;
        if rho <= 0.0 {
            return Err(Error::Parameter(format!("rho = {rho} <= 0 is unsupported")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    /// Logarithmic derivative `A'(x)/A(x) = (2a+1) coth x + (2b+1) tanh x`.
    pub fn drift(&self, x: f64) -> f64 {
        (2.0 * self.alpha + 1.0) / x.tanh() + (2.0 * self.beta + 1.0) * x.tanh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inadmissible_orders() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(-0.5, -0.5).is_err());
        assert!(JacobiParams::new(0.0, 0.5).is_err());
        assert!(JacobiParams::new(1.0, -0.7).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn rho_is_alpha_plus_beta_plus_one() {
        let p = JacobiParams::new(2.0, 1.0).unwrap();
        assert_eq!(p.rho(), 4.0);
        let p = JacobiParams::new(0.5, -0.5).unwrap();
        assert_eq!(p.rho(), 1.0);
    }

    #[test]
    fn drift_for_rank_one_closed_form_order() {
        let p = JacobiParams::new(0.5, -0.5).unwrap();
        let expected = 2.0 / 1f64.tanh();
        assert!((p.drift(1.0) - expected).abs() < 1e-14);
        assert!((p.drift(1.0) - 2.626_07).abs() < 1e-5);
    }
}
