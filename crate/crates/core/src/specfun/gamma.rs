use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma as lanczos_ln_gamma;

use crate::error::{Error, Result};

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(pi x)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(if is_pole(x) { Error::Pole(x) } else { Error::Domain(format!("log_gamma needs x > 0, got {x}")) });
    }
    if x < 0.5 {
        // shift up once: the Lanczos sum is most accurate for x >= 1/2
        return Ok(lanczos_ln_gamma(x + 1.0) - x.ln());
    }
    Ok(lanczos_ln_gamma(x))
}

/// `(ln |Γ(x)|, sign Γ(x))` for any real `x` that is not a pole.
pub fn log_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x > 0.0 {
        return Ok((log_gamma(x)?, 1.0));
    }
    // reflection: Γ(x) Γ(1 - x) = π / sin(π x)
    let s = sin_pi(x);
    let lg = PI.ln() - s.abs().ln() - log_gamma(1.0 - x)?;
    Ok((lg, s.signum()))
}

/// `Π Γ(num) / Π Γ(den)` evaluated in the log domain with sign tracking.
///
/// A pole in the denominator yields 0; a pole in the numerator is an error.
pub fn gamma_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    if den.iter().any(|&d| is_pole(d)) {
        return Ok(0.0);
    }
    let mut log = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (l, s) = log_gamma_signed(x)?;
        log += l;
        sign *= s;
    }
    for &x in den {
        let (l, s) = log_gamma_signed(x)?;
        log -= l;
        sign *= s;
    }
    Ok(sign * log.exp())
}
