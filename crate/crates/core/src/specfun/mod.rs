//! Special functions: signed log-Gamma, Gamma ratios, Gauss hypergeometric
//! series and the Υ family bound to the exponent `p`.

mod gamma;
mod hyper;
mod upsilon;

pub use gamma::{gamma_ratio, log_gamma, log_gamma_signed, sin_pi};
pub use hyper::{gauss_at_one, hyp2f1, X_SWITCH};
pub use upsilon::{hyper_params, HyperParams, Upsilon, UpsilonPoint};
