//! Mass functionals on rotationally symmetric profiles with pole at r = 0:
//! Hawking mass, the monotone quantity m(t) and its derivative identity,
//! the Polarized p-harmonic Mass and the 1-harmonic mass.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelParams, RadialProfile};
use crate::numerics::{integrate_with, QuadOptions};
use crate::pgreen::RadialGreen;
use crate::specfun::Upsilon;
use crate::structural::{coefficients_closed_form, coefficients_ode, default_t_start, StructuralCoefficients};

const BULK_TOL: f64 = 1e-11;
/// Lower-tail size below which the analytic tail is accepted.
pub const LOWER_TAIL_MAX: f64 = 1e-10;
/// Upper-tail size below which the analytic tail is accepted.
pub const UPPER_TAIL_MAX: f64 = 1e-9;
/// Number of doublings tried by [`MassContext::mass_derivative_stepped`].
const STEP_LADDER: usize = 8;
/// Range of the ODE route used for Λ < 0.
const NEGATIVE_LAMBDA_RANGE: (f64, f64) = (-60.0, 60.0);

/// √(|Σ|/16π) (1 - Λ|Σ|/12π - ∫H²/16π).
pub fn hawking_mass(area: f64, willmore: f64, lambda: f64) -> f64 {
    (area / (16.0 * PI)).sqrt() * (1.0 - lambda * area / (12.0 * PI) - willmore / (16.0 * PI))
}

/// Hawking mass of the centered sphere of radius r: (r/2)(1 - Λr²/3 - φ(r)).
pub fn sphere_hawking_mass(profile: &RadialProfile, r: f64, lambda: f64) -> f64 {
    0.5 * r * (1.0 - lambda * r * r / 3.0 - profile.phi(r))
}

/// Geroch derivative of the sphere Hawking mass along r = e^{t/2}: r³(R - 2Λ)/8.
pub fn geroch_radial_rhs(profile: &RadialProfile, r: f64, lambda: f64) -> f64 {
    r.powi(3) * (profile.scalar_curvature(r) - 2.0 * lambda) / 8.0
}

/// Geometric and structural data on one level set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelData {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    /// Mean curvature 2√φ/r.
    pub h: f64,
    /// log |∇w| - t/(p-1) = log(p-1) - (2/(p-1)) log r
    pub ln_grad_w_tq: f64,
    pub alpha: f64,
    pub mu: f64,
    pub lambda: f64,
    /// Structural logs shifted by t/(p-1), see [`crate::structural::CoefficientSample`].
    pub ln_alpha_tq: f64,
    pub ln_mu_tq: f64,
    pub lambda_tq: f64,
}

impl LevelData {
    pub fn area(&self) -> f64 {
        4.0 * PI * self.r * self.r
    }

    pub fn grad_w(&self, p: f64) -> f64 {
        (self.ln_grad_w_tq + self.t / (p - 1.0)).exp()
    }
}

/// Green's function and structural coefficients for one profile and (Λ, p).
#[derive(Debug, Clone)]
pub struct MassContext {
    params: ModelParams,
    green: RadialGreen,
    coeffs: StructuralCoefficients,
}

impl MassContext {
    /// Uses the closed form for Λ ≥ 0 and the ODE route for Λ < 0.
    pub fn new(profile: RadialProfile, params: ModelParams) -> Result<Self> {
        let coeffs = if params.lambda >= 0.0 {
            coefficients_closed_form(params)?
        } else {
            let (lo, hi) = NEGATIVE_LAMBDA_RANGE;
            coefficients_ode(params, lo.min(default_t_start(params.p)), hi)?
        };
        Self::with_coefficients(profile, params, coeffs)
    }

    pub fn with_coefficients(profile: RadialProfile, params: ModelParams, coeffs: StructuralCoefficients) -> Result<Self> {
        let cp = coeffs.params();
        if cp.lambda != params.lambda || cp.p != params.p {
            return Err(Error::Contract(format!(
                "structural coefficients were built for (Λ, p) = ({}, {}) but the request is ({}, {})",
                cp.lambda, cp.p, params.lambda, params.p
            )));
        }
        let green = RadialGreen::new(profile, params.p)?;
        Ok(Self { params, green, coeffs })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn profile(&self) -> &RadialProfile {
        self.green.profile()
    }

    pub fn green(&self) -> &RadialGreen {
        &self.green
    }

    pub fn coefficients(&self) -> &StructuralCoefficients {
        &self.coeffs
    }

    pub fn level(&self, t: f64) -> Result<LevelData> {
        let (lo, hi) = self.coeffs.t_range();
        if t < lo || t > hi {
            return Err(Error::Domain(format!("t = {t} outside the coefficient range [{lo}, {hi}]")));
        }
        let p = self.params.p;
        let q = 1.0 / (p - 1.0);
        let pt = self.green.level(t)?;
        let s = self.coeffs.sample(t)?;
        let h = if pt.phi > 0.0 { 2.0 * pt.phi.sqrt() / pt.r } else { 0.0 };
        Ok(LevelData {
            t,
            r: pt.r,
            phi: pt.phi,
            h,
            ln_grad_w_tq: (p - 1.0).ln() - 2.0 * q * self.green.ln_radius(&pt),
            alpha: s.alpha,
            mu: s.mu,
            lambda: s.lambda,
            ln_alpha_tq: s.ln_alpha_tq,
            ln_mu_tq: s.ln_mu_tq,
            lambda_tq: s.lambda_tq,
        })
    }

    /// e^λ (4π - Λ|Σ_t|)
    pub fn bulk_integrand(&self, d: &LevelData) -> f64 {
        d.lambda.exp() * (4.0 * PI - self.params.lambda * d.area())
    }

    /// e^λ ∫_Σ |∇w| (H - μ|∇w|) dσ
    pub fn boundary_term(&self, d: &LevelData) -> f64 {
        let a = (d.lambda_tq + d.ln_grad_w_tq).exp() * d.h;
        let b = (d.lambda_tq + d.ln_mu_tq + 2.0 * d.ln_grad_w_tq).exp();
        d.area() * (a - b)
    }

    /// Radial right-hand side of the derivative identity for m(t).
    pub fn rhs_at(&self, d: &LevelData) -> f64 {
        let p = self.params.p;
        let rs = self.profile().scalar_curvature(d.r);
        let diff = 0.5 * d.h - (d.ln_alpha_tq + d.ln_grad_w_tq).exp();
        d.area() * d.lambda.exp() * (0.5 * (rs - 2.0 * self.params.lambda) + (5.0 - p) / (p - 1.0) * diff * diff)
    }

    pub fn mass_derivative_rhs(&self, t: f64) -> Result<f64> {
        Ok(self.rhs_at(&self.level(t)?))
    }

    fn integrate_levels<F>(&self, f: F, a: f64, b: f64) -> Result<f64>
    where
        F: Fn(&LevelData) -> f64,
    {
        if a == b {
            return Ok(0.0);
        }
        let failure = std::cell::RefCell::new(None);
        let g = |t: f64| match self.level(t) {
            Ok(d) => f(&d),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let opts = QuadOptions { rel_tol: BULK_TOL, abs_tol: 1e-16, ..QuadOptions::default() };
        let res = if a < b { integrate_with(g, a, b, &opts)?.value } else { -integrate_with(g, b, a, &opts)?.value };
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(res),
        }
    }

    /// ∫_a^b e^λ (4π - Λ|Σ_τ|) dτ
    pub fn bulk(&self, a: f64, b: f64) -> Result<f64> {
        self.integrate_levels(|d| self.bulk_integrand(d), a, b)
    }

    /// Analytic ∫_{-∞}^{t} of the bulk integrand using e^λ ∝ e^{τ/(3-p)} and r² ∝ e^{2τ/(3-p)}.
    pub fn lower_tail(&self, t: f64) -> Result<f64> {
        let d = self.level(t)?;
        let p = self.params.p;
        let e = d.lambda.exp();
        Ok(4.0 * PI * (3.0 - p) * e - self.params.lambda * d.area() * e * (3.0 - p) / 3.0)
    }

    /// Lower cut-off at or below `t` with analytic tail ≤ [`LOWER_TAIL_MAX`].
    pub fn lower_cutoff(&self, t: f64) -> Result<(f64, f64)> {
        let (lo, _) = self.coeffs.t_range();
        let mut t_min = t;
        loop {
            let tail = self.lower_tail(t_min)?;
            if tail.abs() <= LOWER_TAIL_MAX || t_min - 5.0 < lo {
                return Ok((t_min, tail));
            }
            t_min -= 5.0;
        }
    }

    /// m(t) given the bulk integral up to t.
    pub fn mass_from_bulk(&self, bulk: f64, d: &LevelData) -> f64 {
        bulk - self.boundary_term(d)
    }

    /// m(t) at a single level, with its own lower cut-off.
    pub fn mass_at(&self, t: f64) -> Result<f64> {
        let (t_min, tail) = self.lower_cutoff(t - 10.0)?;
        let bulk = tail + self.bulk(t_min, t)?;
        Ok(self.mass_from_bulk(bulk, &self.level(t)?))
    }

    /// Five-point central difference of m at t with step h.
    pub fn mass_derivative_numeric(&self, t: f64, h: f64) -> Result<f64> {
        let shifted = |s: f64| -> Result<f64> { Ok(self.bulk(t, t + s)? - self.boundary_term(&self.level(t + s)?)) };
        let (p2, p1, m1, m2) = (shifted(2.0 * h)?, shifted(h)?, shifted(-h)?, shifted(-2.0 * h)?);
        Ok((-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h))
    }

    /// Five-point difference on the step ladder h0·2^k, k = 0..8, keeping the
    /// step whose value changes least against the next one. Small steps lose
    /// to rounding in B when m is large, large steps to truncation.
    pub fn mass_derivative_stepped(&self, t: f64, h0: f64) -> Result<f64> {
        let ds = (0..=STEP_LADDER).map(|k| self.mass_derivative_numeric(t, h0 * 2f64.powi(k as i32))).collect::<Result<Vec<_>>>()?;
        let best = (0..STEP_LADDER)
            .min_by(|&i, &j| (ds[i] - ds[i + 1]).abs().total_cmp(&(ds[j] - ds[j + 1]).abs()))
            .unwrap_or(0);
        Ok(ds[best])
    }
}

/// One row of a [`MassProfile`]; field names follow the CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassRow {
    pub t: f64,
    pub r: f64,
    pub area: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub grad_w: f64,
    pub mass: f64,
    pub dmdt_num: f64,
    pub dmdt_formula: f64,
}

/// m(t) sampled on a grid, with the derivative identity at every node.
#[derive(Debug, Clone, Serialize)]
pub struct MassProfile {
    pub lambda: f64,
    pub p: f64,
    pub t_min: f64,
    pub lower_tail: f64,
    pub rows: Vec<MassRow>,
}

impl MassProfile {
    /// Largest decrease m(t_i) - m(t_{i+1}) over consecutive nodes (≤ 0 when monotone).
    pub fn worst_decrease(&self) -> f64 {
        self.rows.windows(2).map(|w| w[0].mass - w[1].mass).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest |dmdt_num - dmdt_formula| / max(1e-6, 1e-4 |formula|).
    pub fn worst_identity_ratio(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.dmdt_num - r.dmdt_formula).abs() / (1e-6f64).max(1e-4 * r.dmdt_formula.abs()))
            .fold(0.0, f64::max)
    }
}

/// Sample m(t) on an increasing grid.
pub fn mass_profile(ctx: &MassContext, t_grid: &[f64]) -> Result<MassProfile> {
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("t grid must be nonempty and strictly increasing".into()));
    }
    let (t_min, tail) = ctx.lower_cutoff(t_grid[0] - 10.0)?;
    let mut edges = Vec::with_capacity(t_grid.len() + 1);
    edges.push(t_min);
    edges.extend_from_slice(t_grid);
    let increments: Vec<f64> =
        edges.par_windows(2).map(|w| ctx.bulk(w[0], w[1])).collect::<Result<Vec<_>>>()?;
    let spacing = if t_grid.len() > 1 { (t_grid[t_grid.len() - 1] - t_grid[0]) / (t_grid.len() - 1) as f64 } else { 1.0 };
    let h = 1e-3 * spacing.min(1.0);
    let rows: Vec<MassRow> = t_grid
        .par_iter()
        .map(|&t| -> Result<MassRow> {
            let d = ctx.level(t)?;
            Ok(MassRow {
                t,
                r: d.r,
                area: d.area(),
                h: d.h,
                grad_w: d.grad_w(ctx.params().p),
                mass: 0.0,
                dmdt_num: ctx.mass_derivative_stepped(t, h)?,
                dmdt_formula: ctx.rhs_at(&d),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut bulk = tail;
    let mut out = Vec::with_capacity(rows.len());
    for (row, inc) in rows.into_iter().zip(increments) {
        bulk += inc;
        let d = ctx.level(row.t)?;
        out.push(MassRow { mass: ctx.mass_from_bulk(bulk, &d), ..row });
    }
    let params = ctx.params();
    Ok(MassProfile { lambda: params.lambda, p: params.p, t_min, lower_tail: tail, rows: out })
}

/// Derivative identity right-hand side at t (convenience wrapper).
pub fn mass_derivative_rhs(profile: &RadialProfile, params: ModelParams, t: f64) -> Result<f64> {
    MassContext::new(profile.clone(), params)?.mass_derivative_rhs(t)
}

/// Truncation data of the bulk integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub t_min: f64,
    pub t_max: f64,
    pub lower_tail: f64,
    pub upper_tail: f64,
}

/// Finiteness bound for ∫ e^λ |Σ_τ| dτ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinitenessBound {
    /// ∫ e^{λ(τ)} |Σ_τ| dτ = ∫_M |∇w| e^{λ(w)} dμ.
    pub weighted_area: f64,
    /// Λ times `weighted_area`, the second summand of the bulk.
    pub second_summand: f64,
    pub volume: f64,
    /// ∫ e^{pλ(τ) + τ} dτ
    pub exp_integral: f64,
    /// [4π (p-1)^{p-1} |M|^{p-1} ∫ e^{pλ+τ} dτ]^{1/p}
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizedMassBreakdown {
    pub lambda: f64,
    pub p: f64,
    pub bulk: f64,
    pub boundary_h_term: f64,
    pub boundary_grad_term: f64,
    pub total: f64,
    pub k_p: f64,
    pub truncation: Truncation,
    pub finiteness: FinitenessBound,
}

fn sum_chunks<F>(a: f64, b: f64, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let n = (b - a).ceil().max(1.0) as usize;
    let parts: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = a + (b - a) * i as f64 / n as f64;
            let hi = a + (b - a) * (i + 1) as f64 / n as f64;
            f(lo, hi)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().sum())
}

/// Polarized p-harmonic Mass of a bounded profile (Λ > 0).
pub fn polarized_mass(ctx: &MassContext) -> Result<PolarizedMassBreakdown> {
    let ModelParams { lambda, p, .. } = ctx.params();
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("the Polarized p-harmonic Mass needs Λ > 0, got {lambda}")));
    }
    let profile = ctx.profile();
    let r_max = profile.r_max;
    if !r_max.is_finite() {
        return Err(Error::Domain("the Polarized p-harmonic Mass needs a bounded profile".into()));
    }
    let q = 1.0 / (p - 1.0);
    let r_l = (3.0 / lambda).sqrt();
    let ups = Upsilon::new(p)?;

    let (t_min, lower_tail) = ctx.lower_cutoff(-20.0)?;
    let far_factor = (4.0 * PI - lambda * 4.0 * PI * r_max * r_max).abs() * (p - 1.0);
    let mut t_max = 10.0;
    let upper_tail = loop {
        let d = ctx.level(t_max)?;
        let tail = ctx.bulk_integrand(&d) * (p - 1.0);
        if d.lambda.exp() * far_factor < UPPER_TAIL_MAX {
            break tail;
        }
        t_max += 5.0;
    };
    let bulk = lower_tail + sum_chunks(t_min, t_max, |a, b| ctx.bulk(a, b))? + upper_tail;

    let area = 4.0 * PI * r_max * r_max;
    let h_bdry = profile.mean_curvature(r_max);
    let boundary_h_term = r_l.powf(2.0 * q) / (8.0 * PI) * ups.gamma_half_ratio() * r_max.powf(-2.0 * q) * h_bdry * area;
    let boundary_grad_term = r_l.powf((5.0 - p) * q) / (16.0 * PI) * ups.k_p() * r_max.powf(-4.0 * q) * area;
    let total = bulk - boundary_h_term + boundary_grad_term;

    // finiteness bound
    let lo = ctx.level(t_min)?;
    let hi = ctx.level(t_max)?;
    let weighted_area = lo.lambda.exp() * lo.area() * (3.0 - p) / 3.0
        + sum_chunks(t_min, t_max, |a, b| ctx.integrate_levels(|d| d.lambda.exp() * d.area(), a, b))?
        + hi.lambda.exp() * hi.area() * (p - 1.0);
    let exp_integral = (p * lo.lambda + t_min).exp() * (3.0 - p) / 3.0
        + sum_chunks(t_min, t_max, |a, b| ctx.integrate_levels(|d| (p * d.lambda + d.t).exp(), a, b))?
        + (p * hi.lambda + t_max).exp() * (p - 1.0);
    let volume = profile.volume()?;
    let bound = (4.0 * PI * (p - 1.0).powf(p - 1.0) * volume.powf(p - 1.0) * exp_integral).powf(1.0 / p);

    Ok(PolarizedMassBreakdown {
        lambda,
        p,
        bulk,
        boundary_h_term,
        boundary_grad_term,
        total,
        k_p: ups.k_p(),
        truncation: Truncation { t_min, t_max, lower_tail, upper_tail },
        finiteness: FinitenessBound {
            weighted_area,
            second_summand: lambda * weighted_area,
            volume,
            exp_integral,
            bound,
            holds: weighted_area <= bound,
        },
    })
}

/// 1-harmonic mass: closed form and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneHarmonicMass {
    pub lambda: f64,
    pub t_star: f64,
    /// min(T_Λ, T*)
    pub t_upper: f64,
    pub closed_form: f64,
    pub quadrature: f64,
}

/// (e^{T/2}/2)(1 - e^{T - T_Λ}) with T = min(T_Λ, T*), checked against quadrature.
pub fn one_harmonic_mass(lambda: f64, t_star: f64) -> Result<OneHarmonicMass> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("the 1-harmonic mass needs Λ > 0, got {lambda}")));
    }
    let t_l = (3.0 / lambda).ln();
    let t = t_star.min(t_l);
    let closed_form = -0.5 * (t / 2.0).exp() * (t - t_l).exp_m1() + 0.0;
    let a = t - 60.0;
    let tail = 0.5 * (a / 2.0).exp() - lambda * (1.5 * a).exp() / 6.0;
    let f = |tau: f64| (tau / 2.0).exp() / (16.0 * PI) * (4.0 * PI - lambda * 4.0 * PI * tau.exp());
    let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 1e-14, ..QuadOptions::default() };
    let quadrature = tail + integrate_with(f, a, t, &opts)?.value;
    Ok(OneHarmonicMass { lambda, t_star, t_upper: t, closed_form, quadrature })
}

/// 1-harmonic mass of a bounded profile, with T* = 2 log R_max.
pub fn one_harmonic_mass_of(profile: &RadialProfile, lambda: f64) -> Result<OneHarmonicMass> {
    if !profile.r_max.is_finite() {
        return Err(Error::Domain("the 1-harmonic mass needs a bounded profile".into()));
    }
    one_harmonic_mass(lambda, 2.0 * profile.r_max.ln())
}

/// Caveat attached to every formal-limit table.
pub const FORMAL_LIMIT_CAVEAT: &str = "EXPERIMENTAL: the convergence of m^(p)(t) to the Hawking mass of the sphere r = e^{t/2} as p -> 1 is conjectural; the p-levels are relabelled by t, and different p give different level sets for the same t.";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormalLimitRow {
    pub p: f64,
    pub mass: f64,
    pub hawking: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FormalLimitReport {
    pub experimental: bool,
    pub caveat: &'static str,
    pub lambda: f64,
    pub t: f64,
    pub rows: Vec<FormalLimitRow>,
}

/// m^{(p)}(t) against the Hawking mass of the sphere r = e^{t/2} along p → 1⁺.
pub fn formal_limit_experiment(profile: &RadialProfile, lambda: f64, t: f64, p_list: &[f64]) -> Result<FormalLimitReport> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("the formal limit experiment needs Λ > 0".into()));
    }
    if !(t < (3.0 / lambda).ln()) {
        return Err(Error::Domain("the formal limit experiment needs t < T_Λ".into()));
    }
    let r = (t / 2.0).exp();
    if !(r < profile.r_max) {
        return Err(Error::Domain(format!("sphere radius e^(t/2) = {r} lies outside the profile")));
    }
    let hawking = sphere_hawking_mass(profile, r, lambda);
    let rows = p_list
        .par_iter()
        .map(|&p| {
            let ctx = MassContext::new(profile.clone(), ModelParams::new(lambda, p)?)?;
            let mass = ctx.mass_at(t)?;
            Ok(FormalLimitRow { p, mass, hawking, gap: (mass - hawking).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalLimitReport { experimental: true, caveat: FORMAL_LIMIT_CAVEAT, lambda, t, rows })
}

#[cfg(test)]
mod tests;
