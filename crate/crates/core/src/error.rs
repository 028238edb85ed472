use thiserror::Error;

/// Errors raised by the numerical kernels and the mass pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge on [{a:e}, {b:e}] (worst subinterval [{worst_a:e}, {worst_b:e}], error estimate {error:e})")]
    Quadrature {
        a: f64,
        b: f64,
        worst_a: f64,
        worst_b: f64,
        error: f64,
    },

    #[error("ODE step size underflow at t = {t:e}")]
    StepUnderflow { t: f64 },

    #[error("root not bracketed: f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("pole of the Gamma function at {0}")]
    Pole(f64),

    #[error("series did not converge within {terms} terms")]
    SeriesBudget { terms: usize },

    #[error("divergent Gauss sum: c - a - b = {0:e} <= 0")]
    Divergence(f64),

    #[error("Riccati solution left the corridor at t = {t:e}; try a smaller t_start")]
    Corridor { t: f64 },

    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
