//! Structural coefficients α, μ, λ for a pair (Λ, p).
//!
//! α is always taken from the model Green's function of `1 - Λr²/3`.
//! μ and λ come from the Φ/Ψ hypergeometric closed form (Λ > 0), exact
//! formulas (Λ = 0) or integration of the Riccati system (any Λ).

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelParams, RadialProfile};
use crate::numerics::{solve_ivp_with, OdeOptions, OdePath};
use crate::pgreen::{LevelPoint, RadialGreen};
use crate::specfun::Upsilon;

/// Default ODE start; see [`default_t_start`].
pub const T_START: f64 = -20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Ode,
    LambdaZeroExact,
}

/// Coefficients at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientSample {
    pub t: f64,
    pub alpha: f64,
    pub mu: f64,
    pub lambda: f64,
    /// log α + t/(p-1); the shift cancels against log |∇w| in products.
    #[serde(skip)]
    pub ln_alpha_tq: f64,
    /// log μ + t/(p-1)
    #[serde(skip)]
    pub ln_mu_tq: f64,
    /// λ + t/(p-1)
    #[serde(skip)]
    pub lambda_tq: f64,
}

impl CoefficientSample {
    pub fn exp_lambda(&self) -> f64 {
        self.lambda.exp()
    }

    pub fn ln_alpha(&self) -> f64 {
        self.ln_alpha_tq - self.tq()
    }

    pub fn ln_mu(&self) -> f64 {
        self.ln_mu_tq - self.tq()
    }

    fn tq(&self) -> f64 {
        self.lambda_tq - self.lambda
    }
}

/// κ = ((p-1)/(3-p)) log((p-1)/(3-p)) - log(8π(3-p)).
pub fn kappa(p: f64) -> f64 {
    let s = (p - 1.0) / (3.0 - p);
    s * s.ln() - (8.0 * PI * (3.0 - p)).ln()
}

/// ODE start deep enough that the e^{t/(p-1)} and e^{2t/(3-p)} corrections
/// to the initial data stay below 1e-10.
pub fn default_t_start(p: f64) -> f64 {
    T_START.min(-24.0 * (p - 1.0)).min(-11.0 * (3.0 - p))
}

/// Zeros μ₋ ≤ μ₊ of the Riccati right-hand side at fixed α.
pub fn riccati_equilibria(p: f64, alpha: f64) -> Result<(f64, f64)> {
    let disc = 1.0 + 2.0 * (5.0 - p) * alpha - (7.0 - 3.0 * p) * (5.0 - p) * alpha * alpha;
    if disc < 0.0 {
        return Err(Error::Domain(format!("complex Riccati equilibria at α = {alpha} (discriminant {disc:e})")));
    }
    let s = disc.sqrt();
    let base = 1.0 + (5.0 - p) * alpha;
    let den = 2.0 * (3.0 - p);
    Ok(((base - s) / den, (base + s) / den))
}

/// (μ̇, λ̇) of the structural system.
pub fn structural_rhs(p: f64, alpha: f64, mu: f64) -> (f64, f64) {
    let q = 1.0 / (p - 1.0);
    let k5 = (5.0 - p) * q;
    let k3 = (3.0 - p) * q;
    let dmu = k5 * alpha * alpha - (k5 * alpha + q) * mu + k3 * mu * mu;
    let dlam = k5 * alpha - q - k3 * mu;
    (dmu, dlam)
}

/// The model profile 1 - Λr²/3.
pub fn model_profile(lambda: f64) -> Result<RadialProfile> {
    if lambda > 0.0 {
        RadialProfile::de_sitter(lambda)
    } else {
        RadialProfile::constant_curvature(lambda / 3.0)
    }
}

/// Model p-Green's function used for α.
#[derive(Debug, Clone)]
pub struct ModelGreen {
    params: ModelParams,
    green: RadialGreen,
}

impl ModelGreen {
    pub fn new(params: ModelParams) -> Result<Self> {
        Ok(Self { params, green: RadialGreen::new(model_profile(params.lambda)?, params.p)? })
    }

    pub fn green(&self) -> &RadialGreen {
        &self.green
    }

    pub fn level(&self, t: f64) -> Result<LevelPoint> {
        self.green.level(t)
    }

    /// log α + t/(p-1) at a model level point.
    fn ln_alpha_tq(&self, pt: &LevelPoint) -> f64 {
        let p = self.params.p;
        let q = 1.0 / (p - 1.0);
        -(p - 1.0).ln() + 0.5 * pt.phi.ln() + (2.0 * q - 1.0) * self.green.ln_radius(pt)
    }

    /// α(t) = (u/(p-1)) √(1-Λr²/3) r^{(3-p)/(p-1)} at r = r(t).
    pub fn alpha(&self, t: f64) -> Result<f64> {
        if self.params.lambda == 0.0 {
            return Ok(1.0 / (3.0 - self.params.p));
        }
        let pt = self.level(t)?;
        Ok((self.ln_alpha_tq(&pt) - t / (self.params.p - 1.0)).exp())
    }
}

/// α(t) for the model of `params` (builds the model Green's function).
pub fn alpha_model(params: ModelParams, t: f64) -> Result<f64> {
    ModelGreen::new(params)?.alpha(t)
}

/// Υ-based closed form of (Φ, Ψ) for Λ ≥ 0, or Λ < 0 while Λr²/3 > -1.
fn phi_psi_closed(ups: &Upsilon, lambda: f64, r: f64) -> Result<(f64, f64)> {
    let x = lambda * r * r / 3.0;
    let y = if lambda > 0.0 {
        let k = (lambda / 3.0).sqrt();
        (1.0 - k * r) * (1.0 + k * r)
    } else {
        1.0 - x
    };
    let pt = ups.point(x, y)?;
    let pre = r / (8.0 * PI);
    Ok((pre * pt.ups / y, pre * pt.bracket_scaled / y.sqrt()))
}

/// Right-hand side of the linear Φ/Ψ system in r.
pub fn phi_psi_rhs(lambda: f64, p: f64, r: f64, phi: f64, psi: f64) -> (f64, f64) {
    let x = lambda * r * r / 3.0;
    let g = x / (1.0 - x);
    let q = 1.0 / (p - 1.0);
    let d_phi = (2.0 * (g - (3.0 - p) * q) * phi + (5.0 - p) * q * psi) / r;
    let d_psi = (-(3.0 - p) * q * phi + (g + 2.0 * q) * psi) / r;
    (d_phi, d_psi)
}

/// Fraction of √(3/|Λ|) up to which the Υ series seeds Φ, Ψ for Λ < 0.
pub const NEGATIVE_SEED_FRACTION: f64 = 0.9;

/// (Φ(r), Ψ(r)).
pub fn phi_psi(params: ModelParams, r: f64) -> Result<(f64, f64)> {
    let ModelParams { lambda, p, .. } = params;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    if lambda == 0.0 {
        return Ok((r / (8.0 * PI), r / (8.0 * PI)));
    }
    let ups = Upsilon::new(p)?;
    if lambda > 0.0 {
        let r_l = (3.0 / lambda).sqrt();
        if r >= r_l {
            return Err(Error::Domain(format!("Φ diverges at r = R_Λ = {r_l}; got r = {r}")));
        }
        return phi_psi_closed(&ups, lambda, r);
    }
    let r_seed = NEGATIVE_SEED_FRACTION * (3.0 / -lambda).sqrt();
    if r <= r_seed {
        return phi_psi_closed(&ups, lambda, r);
    }
    let (phi0, psi0) = phi_psi_closed(&ups, lambda, r_seed)?;
    // linear system in log r keeps the step count moderate for large r
    let path = solve_ivp_with(
        |s, y| {
            let rr = s.exp();
            let (a, b) = phi_psi_rhs(lambda, p, rr, y[0], y[1]);
            vec![a * rr, b * rr]
        },
        r_seed.ln(),
        &[phi0, psi0],
        r.ln(),
        &OdeOptions { rel_tol: 1e-11, abs_tol: 0.0, ..OdeOptions::default() },
    )?;
    let y = path.final_state();
    Ok((y[0], y[1]))
}

#[derive(Debug, Clone)]
enum Engine {
    Closed(Upsilon),
    Exact,
    Ode(OdePath),
}

/// Evaluators for α, μ, λ at fixed (Λ, p).
#[derive(Debug, Clone)]
pub struct StructuralCoefficients {
    params: ModelParams,
    model: ModelGreen,
    engine: Engine,
}

/// Closed-form coefficients: Υ-based for Λ > 0, exact for Λ = 0.
pub fn coefficients_closed_form(params: ModelParams) -> Result<StructuralCoefficients> {
    let engine = if params.lambda > 0.0 {
        Engine::Closed(Upsilon::new(params.p)?)
    } else if params.lambda == 0.0 {
        Engine::Exact
    } else {
        return Err(Error::Domain("no closed form for Λ < 0; use the ODE route".into()));
    };
    Ok(StructuralCoefficients { params, model: ModelGreen::new(params)?, engine })
}

/// Integrate (μ, λ) from `t_start` to `t_end` starting on the selected asymptotics.
pub fn coefficients_ode(params: ModelParams, t_start: f64, t_end: f64) -> Result<StructuralCoefficients> {
    if t_start > -15.0 {
        return Err(Error::Domain(format!("t_start must be ≤ -15, got {t_start}")));
    }
    if !(t_end > t_start) {
        return Err(Error::Domain("t_end must exceed t_start".into()));
    }
    let model = ModelGreen::new(params)?;
    let p = params.p;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let rhs = |t: f64, y: &[f64]| -> Vec<f64> {
        match model.alpha(t) {
            Ok(alpha) => {
                let (dmu, dlam) = structural_rhs(p, alpha, y[0]);
                vec![dmu, dlam]
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                vec![f64::NAN, f64::NAN]
            }
        }
    };
    let y0 = [1.0 / (3.0 - p), t_start / (3.0 - p) + kappa(p)];
    let opts = OdeOptions { rel_tol: 1e-11, abs_tol: 1e-13, ..OdeOptions::default() };
    let path = match solve_ivp_with(rhs, t_start, &y0, t_end, &opts) {
        Ok(path) => path,
        Err(e) => {
            if let Some(inner) = failure.into_inner() {
                return Err(inner);
            }
            return Err(match e {
                Error::StepUnderflow { t } => Error::Corridor { t },
                other => other,
            });
        }
    };
    if params.lambda < 0.0 {
        let cap = 1.0 / (3.0 - p);
        for (t, y) in path.nodes() {
            if !(y[0] > 0.0 && y[0] <= cap * (1.0 + 1e-14)) {
                return Err(Error::Corridor { t });
            }
        }
    }
    Ok(StructuralCoefficients { params, model, engine: Engine::Ode(path) })
}

impl StructuralCoefficients {
    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn route(&self) -> Route {
        match self.engine {
            Engine::Closed(_) => Route::ClosedForm,
            Engine::Exact => Route::LambdaZeroExact,
            Engine::Ode(_) => Route::Ode,
        }
    }

    pub fn model(&self) -> &ModelGreen {
        &self.model
    }

    /// Valid t-range (unbounded for the closed forms).
    pub fn t_range(&self) -> (f64, f64) {
        match &self.engine {
            Engine::Ode(path) => (path.t_start(), path.t_end()),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn sample(&self, t: f64) -> Result<CoefficientSample> {
        let p = self.params.p;
        let q = 1.0 / (p - 1.0);
        match &self.engine {
            Engine::Exact => {
                let c = 1.0 / (3.0 - p);
                let lambda = t / (3.0 - p) + kappa(p);
                Ok(CoefficientSample {
                    t,
                    alpha: c,
                    mu: c,
                    lambda,
                    ln_alpha_tq: c.ln() + t * q,
                    ln_mu_tq: c.ln() + t * q,
                    lambda_tq: 2.0 * t / ((3.0 - p) * (p - 1.0)) + kappa(p),
                })
            }
            Engine::Closed(ups) => {
                let pt = self.model.level(t)?;
                let ln_alpha_tq = self.model.ln_alpha_tq(&pt);
                let x = self.params.lambda * pt.r * pt.r / 3.0;
                let up = ups.point(x, pt.phi)?;
                let ln_r = self.model.green.ln_radius(&pt);
                let lambda_tq = 2.0 * q * ln_r - (8.0 * PI * (p - 1.0)).ln() + up.bracket_scaled.ln();
                let ln_mu_tq = (2.0 * q - 1.0) * ln_r + (q * up.ups / up.bracket_scaled).ln();
                Ok(CoefficientSample {
                    t,
                    alpha: (ln_alpha_tq - t * q).exp(),
                    mu: (ln_mu_tq - t * q).exp(),
                    lambda: lambda_tq - t * q,
                    ln_alpha_tq,
                    ln_mu_tq,
                    lambda_tq,
                })
            }
            Engine::Ode(path) => {
                let y = path.eval(t)?;
                let alpha = self.model.alpha(t)?;
                Ok(CoefficientSample {
                    t,
                    alpha,
                    mu: y[0],
                    lambda: y[1],
                    ln_alpha_tq: alpha.ln() + t * q,
                    ln_mu_tq: y[0].ln() + t * q,
                    lambda_tq: y[1] + t * q,
                })
            }
        }
    }

    pub fn alpha(&self, t: f64) -> Result<f64> {
        self.model.alpha(t)
    }

    pub fn mu(&self, t: f64) -> Result<f64> {
        Ok(self.sample(t)?.mu)
    }

    /// λ(t); e^λ is obtained by exponentiating on demand.
    pub fn log_lambda_exp(&self, t: f64) -> Result<f64> {
        Ok(self.sample(t)?.lambda)
    }

    /// (Φ(r), Ψ(r)) for these parameters.
    pub fn phi_psi(&self, r: f64) -> Result<(f64, f64)> {
        phi_psi(self.params, r)
    }
}

/// Limit constants of e^{t/(p-1)} e^{λ(t)} and e^{t/(p-1)} μ(t) as t → +∞ (Λ > 0).
pub fn asymptotic_constants(params: ModelParams) -> Result<(f64, f64)> {
    let r_l = params.r_lambda.ok_or_else(|| Error::Domain("asymptotic constants need Λ > 0".into()))?;
    let p = params.p;
    let q = 1.0 / (p - 1.0);
    let ups = Upsilon::new(p)?;
    let hp = ups.hp;
    let c_lambda = r_l.powf(2.0 * q) / (8.0 * PI * (p - 1.0)) * ups.gamma_half_ratio();
    let ratio = crate::specfun::gamma_ratio(&[hp.a + 1.0, hp.b + 1.0], &[hp.a + 1.5, hp.b + 1.5])?;
    let c_mu = r_l.powf((3.0 - p) * q) / (2.0 * (p - 1.0)) * ratio;
    Ok((c_lambda, c_mu))
}

/// One row of the p → 1 sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PLimitRow {
    pub p: f64,
    pub r: f64,
    pub exp_lambda: f64,
    pub mu_exp_lambda: f64,
    pub r_limit: f64,
    pub exp_lambda_limit: f64,
    pub mu_exp_lambda_limit: f64,
}

/// Closed-form coefficients at fixed t along a sequence of p → 1⁺, with the limit profiles.
pub fn p_limit_profiles(lambda: f64, t: f64, p_list: &[f64]) -> Result<Vec<PLimitRow>> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("p-limit profiles need Λ > 0".into()));
    }
    let t_l = (3.0 / lambda).ln();
    if t == t_l {
        return Err(Error::Domain("t must differ from T_Λ".into()));
    }
    let below = t < t_l;
    let half = (t / 2.0).exp();
    p_list
        .iter()
        .map(|&p| {
            let params = ModelParams::new(lambda, p)?;
            let sc = coefficients_closed_form(params)?;
            let s = sc.sample(t)?;
            let r = sc.model.level(t)?.r;
            Ok(PLimitRow {
                p,
                r,
                exp_lambda: s.exp_lambda(),
                mu_exp_lambda: s.mu * s.exp_lambda(),
                r_limit: half.min((3.0 / lambda).sqrt()),
                exp_lambda_limit: if below { half / (16.0 * PI) } else { 0.0 },
                mu_exp_lambda_limit: if below { half / (32.0 * PI) } else { 0.0 },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
