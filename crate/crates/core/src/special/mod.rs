//! Special functions: complex gamma, ₂F₁ on the negative axis, Jacobi
//! functions, the c-function and the Jacobi operator.

pub mod cfunc;
pub mod gamma;
pub mod hyp2f1;
pub mod jacobi;
pub mod operator;
pub mod params;

pub use cfunc::{c_function, c_function_eval, plancherel_density, CValue};
pub use gamma::{complex_gamma, ln_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_with_report, EvalRegimeReport, Regime};
pub use jacobi::{jacobi_phi, jacobi_phi_many, jacobi_phi_sorted, jacobi_phi_with_report};
pub use operator::apply_jacobi_operator;
pub use params::JacobiParams;
