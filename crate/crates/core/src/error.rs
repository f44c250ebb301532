use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("pole at z = {location}")]
    Pole { location: Complex64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("accuracy target missed: {message} (partial value {partial}, estimated error {estimate:.3e})")]
    Accuracy {
        message: String,
        partial: Complex64,
        estimate: f64,
    },

    #[error("result out of floating-point range (dominating exponent {exponent:.1})")]
    Range { exponent: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("z = {z} lies on the excluded slit {{z real, z <= {bound}}}")]
    Slit { z: Complex64, bound: f64 },

    #[error("z = {z} is outside Omega_theta: |Im lambda| = {im_lambda:.6} >= strip half-width {half_width:.6}")]
    Region {
        z: Complex64,
        im_lambda: f64,
        half_width: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
