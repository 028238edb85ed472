//! Generic numerical kernels: adaptive quadrature, adaptive Runge-Kutta
//! integration with dense output, and bracketed root finding.

mod ode;
mod quad;
mod roots;

pub use ode::{solve_ivp, solve_ivp_with, OdeOptions, OdePath};
pub use quad::{gauss_kronrod_21, integrate_adaptive, integrate_with, IntegrationResult, QuadOptions, SingularEnd};
pub use roots::{find_root_bracketed, find_root_with, RootOptions};

/// Default relative tolerance for quadrature.
pub const QUAD_REL_TOL: f64 = 1e-10;
/// Default relative tolerance for ODE integration.
pub const ODE_REL_TOL: f64 = 1e-9;
/// Absolute floor shared by the kernels.
pub const ABS_FLOOR: f64 = 1e-14;
