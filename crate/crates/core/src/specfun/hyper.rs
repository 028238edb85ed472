use crate::error::{Error, Result};

use super::gamma::gamma_ratio;

/// Above this argument the `x -> 1 - x` connection formula replaces the raw series.
pub const X_SWITCH: f64 = 0.75;

const SERIES_EPS: f64 = 1e-17;
const SERIES_BUDGET: usize = 5_000_000;
/// Largest acceptable ratio between the sizes of the two connection terms and their sum.
const CONNECTION_COND_MAX: f64 = 1e4;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-9
}

/// Power series of ₂F₁ around the origin.
pub(crate) fn series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    let ax = x.abs();
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        term *= ratio * x;
        sum += term;
        k += 1;
        if term == 0.0 {
            return Ok(sum);
        }
        let rho = (ratio.abs() * ax).max(ax);
        if rho < 1.0 && kf > (a.abs() + b.abs()).min(1e7) {
            let tail = term.abs() * rho / (1.0 - rho);
            if tail <= SERIES_EPS * sum.abs() {
                return Ok(sum);
            }
        }
        if k >= SERIES_BUDGET {
            return Err(Error::SeriesBudget { terms: k });
        }
    }
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for real `x < 1`.
///
/// Negative arguments go through the Pfaff transformation (the analytic
/// continuation beyond the unit disc for `x <= -1`); arguments above
/// [`X_SWITCH`] through the connection formula around `x = 1` whenever
/// `c - a - b` is not an integer and the two branches do not cancel badly.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole(c));
    }
    if !(x < 1.0 && x.is_finite()) {
        return Err(Error::Domain(format!("hyp2f1 argument must be finite and below 1, got {x}")));
    }
    if x < 0.0 {
        let z = x / (x - 1.0);
        // pick the Pfaff form with the smaller growth parameter
        return if (c - a).abs() <= (c - b).abs() {
            Ok((1.0 - x).powf(-b) * hyp2f1(c - a, b, c, z)?)
        } else {
            Ok((1.0 - x).powf(-a) * hyp2f1(a, c - b, c, z)?)
        };
    }
    if x <= X_SWITCH || near_integer(c - a - b) {
        return series(a, b, c, x);
    }
    match connection(a, b, c, 1.0 - x)? {
        Some(v) => Ok(v),
        None => series(a, b, c, x),
    }
}

/// Connection formula in `y = 1 - x`; `None` when the two branches cancel.
fn connection(a: f64, b: f64, c: f64, y: f64) -> Result<Option<f64>> {
    let s = c - a - b;
    let g1 = gamma_ratio(&[c, s], &[c - a, c - b])?;
    let g2 = gamma_ratio(&[c, -s], &[a, b])?;
    let t1 = if g1 == 0.0 { 0.0 } else { g1 * series(a, b, 1.0 - s, y)? };
    let t2 = if g2 == 0.0 { 0.0 } else { g2 * y.powf(s) * series(c - a, c - b, s + 1.0, y)? };
    let v = t1 + t2;
    if (t1.abs() + t2.abs()) > CONNECTION_COND_MAX * v.abs() {
        return Ok(None);
    }
    Ok(Some(v))
}

/// Gauss summation ₂F₁(a, b; c; 1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b)).
pub fn gauss_at_one(a: f64, b: f64, c: f64) -> Result<f64> {
    let s = c - a - b;
    if !(s > 0.0) {
        return Err(Error::Divergence(s));
    }
    gamma_ratio(&[c, s], &[c - a, c - b])
}
