//! Check registry. Every acceptance item has exactly one check id; a check
//! measures one number, compares it with a target under a tolerance, and
//! records a pass flag. Failed or erroring checks never abort the suite.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{bundled_profiles, dec_violating_profile, sds_horizon_radii, ModelParams, RadialProfile};
use crate::mass::{hawking_mass, mass_profile, one_harmonic_mass_of, polarized_mass, sphere_hawking_mass, MassContext};
use crate::pgreen::RadialGreen;
use crate::specfun::Upsilon;
use crate::structural::{
    asymptotic_constants, coefficients_closed_form, coefficients_ode, default_t_start, p_limit_profiles,
};

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub desc: &'static str,
    pub anchor: &'static str,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub pass: bool,
    pub detail: String,
    pub ms: u128,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// What a check measured.
struct Measured {
    value: f64,
    target: f64,
    pass: bool,
    detail: String,
}

impl Measured {
    /// `value` is an error size that must stay within `tol`.
    fn within(value: f64, tol: f64, detail: String) -> Self {
        Self { value, target: 0.0, pass: value <= tol, detail }
    }
}

type CheckFn = fn(f64) -> Result<Measured>;

pub struct CheckSpec {
    pub id: &'static str,
    pub desc: &'static str,
    pub anchor: &'static str,
    pub default_tol: f64,
    run: CheckFn,
}

/// Registered checks, in dependency order.
pub static CHECKS: &[CheckSpec] = &[
    CheckSpec {
        id: "upsilon-ode-residual",
        desc: "Υ solves its hypergeometric ODE on x∈[0.01,0.99], p∈{1.1,1.5,2,2.5,2.9}; Υ(0)=1, Υ'(0)=-(5-p)/(4p); boundary relation at x=1",
        anchor: "hypergeometric ODE for Υ",
        default_tol: 1e-8,
        run: check_upsilon,
    },
    CheckSpec {
        id: "gamma-ratio-asymptotics",
        desc: "K_p/(p-1) and Γ(1/2)Γ(c)/(Γ(a+1)Γ(b+1)) ÷ (3√π/4)(p-1)^{3/2} approach 1 monotonically along p = 1.2, 1.1, 1.05, 1.02",
        anchor: "Gamma-ratio expansions near p = 1",
        default_tol: 0.2,
        run: check_gamma_ratios,
    },
    CheckSpec {
        id: "route-agreement",
        desc: "closed form vs Riccati ODE: max |Δμ|, |Δλ| on t∈[-10,10], (Λ,p)∈{0.3,3}×{1.2,1.5,2,2.5}; Λ=0 exact formulas",
        anchor: "global existence routes",
        default_tol: 1e-6,
        run: check_routes,
    },
    CheckSpec {
        id: "de-sitter-rigidity",
        desc: "de Sitter m(t)≡0 on t∈[-12,12] and Polarized Mass total 0, p∈{1.3,2,2.7}",
        anchor: "rigidity of the model",
        default_tol: 1e-6,
        run: check_de_sitter,
    },
    CheckSpec {
        id: "sds-one-harmonic",
        desc: "1-harmonic mass of capped Schwarzschild-de Sitter equals m; φ(R±)≈0",
        anchor: "Schwarzschild-de Sitter 1-harmonic mass",
        default_tol: 1e-9,
        run: check_sds,
    },
    CheckSpec {
        id: "small-sphere-limit",
        desc: "m(t)/((4π/3)r³) within 1% of (R-2Λ)/16π for r ≤ 1e-2·R_max, R-2Λ = 0.6, p∈{1.5,2}",
        anchor: "small sphere limit",
        default_tol: 0.01,
        run: check_small_sphere,
    },
    CheckSpec {
        id: "monotonicity-derivative",
        desc: "m(t) nondecreasing on 5 bundled DEC profiles (slack 1e-8) and derivative identity on those plus one DEC-violating profile",
        anchor: "monotonicity and derivative formula",
        default_tol: 1e-8,
        run: check_monotonicity,
    },
    CheckSpec {
        id: "asymptotic-constants",
        desc: "e^{t/(p-1)}e^λ and e^{t/(p-1)}μ at t=30 against the Gamma-ratio constants, (Λ,p)∈{(3,2),(0.3,1.5)}",
        anchor: "large-t expansions of μ and λ",
        default_tol: 1e-3,
        run: check_asymptotic_constants,
    },
    CheckSpec {
        id: "p-limit-trends",
        desc: "Λ=0.3: gaps to e^{t/2}/16π and e^{t/2}/32π strictly decrease along p = 1.3, 1.2, 1.1, 1.05 at t=1; both quantities decrease at t=3",
        anchor: "fixed-t behaviour as p → 1",
        default_tol: 0.0,
        run: check_p_limit,
    },
    CheckSpec {
        id: "hawking-anchors",
        desc: "Clifford torus √(3π/8Λ)(1-π/2); de Sitter spheres and equator give 0",
        anchor: "Hawking mass",
        default_tol: 1e-12,
        run: check_hawking,
    },
    CheckSpec {
        id: "flux-identity",
        desc: "e^{-t}|∇w|^{p-1}·4πr² = 4π(p-1)^{p-1} on every sampled profile, p and t",
        anchor: "flux identity",
        default_tol: 1e-10,
        run: check_flux,
    },
    CheckSpec {
        id: "finiteness-bound",
        desc: "Λ·∫e^λ|Σ_τ|dτ stays below Λ times the Hölder bound on every Λ>0 profile tested",
        anchor: "finiteness of the bulk term",
        default_tol: 0.0,
        run: check_finiteness,
    },
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

/// Run the selected checks (`None` or `["all"]` runs every check).
pub fn run_suite(selection: Option<&[String]>, tolerances: &BTreeMap<String, f64>) -> Result<VerificationReport> {
    let ids = check_ids();
    for key in tolerances.keys() {
        if !ids.contains(&key.as_str()) {
            return Err(unknown(key));
        }
    }
    let chosen: Vec<&CheckSpec> = match selection {
        None => CHECKS.iter().collect(),
        Some(list) if list.iter().any(|s| s == "all") => CHECKS.iter().collect(),
        Some(list) => {
            let mut out = Vec::new();
            for id in list {
                let spec = CHECKS.iter().find(|c| c.id == id).ok_or_else(|| unknown(id))?;
                out.push(spec);
            }
            // registry order, no duplicates
            CHECKS.iter().filter(|c| out.iter().any(|o| o.id == c.id)).collect()
        }
    };
    let checks: Vec<CheckResult> = chosen
        .into_iter()
        .map(|spec| {
            let tol = tolerances.get(spec.id).copied().unwrap_or(spec.default_tol);
            let start = Instant::now();
            let outcome = (spec.run)(tol);
            let ms = start.elapsed().as_millis();
            let m = outcome.unwrap_or_else(|e| Measured {
                value: f64::NAN,
                target: 0.0,
                pass: false,
                detail: format!("error: {e}"),
            });
            CheckResult {
                id: spec.id,
                desc: spec.desc,
                anchor: spec.anchor,
                value: m.value,
                target: m.target,
                tol,
                pass: m.pass,
                detail: m.detail,
                ms,
            }
        })
        .collect();
    let pass = checks.iter().filter(|c| c.pass).count();
    let summary = Summary { pass, fail: checks.len() - pass };
    Ok(VerificationReport { checks, summary })
}

fn unknown(id: &str) -> Error {
    Error::Domain(format!("unknown check id '{id}'; available: {}", check_ids().join(", ")))
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(", ")
}

/// Number of places where `v` fails to decrease strictly.
fn decrease_violations(v: &[f64]) -> usize {
    v.windows(2).filter(|w| !(w[1] < w[0])).count()
}

fn check_upsilon(tol: f64) -> Result<Measured> {
    let xs = grid(0.01, 0.99, 99);
    let mut residual: f64 = 0.0;
    let mut origin: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for &p in &[1.1, 1.5, 2.0, 2.5, 2.9] {
        let ups = Upsilon::new(p)?;
        let (a, b, c) = (ups.hp.a, ups.hp.b, ups.hp.c);
        for &x in &xs {
            let (f, df) = ups.pair(x)?;
            let d2 = ups.second(x)?;
            let res = x * (1.0 - x) * d2 + (c - (a + b + 1.0) * x) * df - a * b * f;
            residual = residual.max(res.abs() / (1.0 + f.abs() + df.abs() + d2.abs()));
        }
        let (f0, df0) = ups.pair(0.0)?;
        origin = origin.max((f0 - 1.0).abs()).max((df0 + (5.0 - p) / (4.0 * p)).abs());
        boundary = boundary.max((ups.at_one() + 2.0 * (p - 1.0) / (5.0 - p) * ups.deriv_at_one()).abs());
    }
    let pass = residual <= tol && origin <= 1e-12 && boundary <= 1e-10;
    Ok(Measured {
        value: residual,
        target: 0.0,
        pass,
        detail: format!("ode residual {residual:.3e}; origin {origin:.3e}; boundary relation {boundary:.3e}"),
    })
}

fn check_gamma_ratios(tol: f64) -> Result<Measured> {
    let ps = [1.2, 1.1, 1.05, 1.02];
    let mut kp = Vec::new();
    let mut gh = Vec::new();
    for &p in &ps {
        let ups = Upsilon::new(p)?;
        kp.push(ups.k_p() / (p - 1.0));
        gh.push(ups.gamma_half_ratio() / (0.75 * PI.sqrt() * (p - 1.0f64).powf(1.5)));
    }
    let dist = |v: &[f64]| v.iter().map(|r| (r - 1.0).abs()).collect::<Vec<_>>();
    let violations = decrease_violations(&dist(&kp)) + decrease_violations(&dist(&gh));
    let at_105 = (kp[2] - 1.0).abs().max((gh[2] - 1.0).abs());
    Ok(Measured {
        value: violations as f64,
        target: 0.0,
        pass: violations == 0 && at_105 <= tol,
        detail: format!("K_p/(p-1): [{}]; Γ(1/2) ratio: [{}]", fmt_list(&kp), fmt_list(&gh)),
    })
}

fn check_routes(tol: f64) -> Result<Measured> {
    let cases: Vec<(f64, f64)> =
        [0.3, 3.0].iter().flat_map(|&l| [1.2, 1.5, 2.0, 2.5].into_iter().map(move |p| (l, p))).collect();
    let ts = grid(-10.0, 10.0, 81);
    let gaps = cases
        .par_iter()
        .map(|&(lambda, p)| -> Result<f64> {
            let params = ModelParams::new(lambda, p)?;
            let closed = coefficients_closed_form(params)?;
            let ode = coefficients_ode(params, default_t_start(p), 10.0)?;
            let mut worst: f64 = 0.0;
            for &t in &ts {
                let (a, b) = (closed.sample(t)?, ode.sample(t)?);
                worst = worst.max((a.mu - b.mu).abs()).max((a.lambda - b.lambda).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    let route_gap = max_of(gaps);
    let mut exact_gap: f64 = 0.0;
    for &p in &[1.2, 1.5, 2.0, 2.5] {
        let sc = coefficients_closed_form(ModelParams::new(0.0, p)?)?;
        let flat = RadialGreen::new(RadialProfile::constant_curvature(0.0)?, p)?;
        let q = 1.0 / (p - 1.0);
        for &t in &ts {
            let s = sc.sample(t)?;
            let r = flat.radius_of_level(t)?;
            let lam = -t * q + 2.0 * q * r.ln() - (8.0 * PI * (p - 1.0)).ln();
            exact_gap = exact_gap.max((s.lambda - lam).abs()).max((s.mu - 1.0 / (3.0 - p)).abs());
        }
    }
    Ok(Measured {
        value: route_gap,
        target: 0.0,
        pass: route_gap <= tol && exact_gap <= 1e-9,
        detail: format!("route gap {route_gap:.3e}; Λ=0 exact gap {exact_gap:.3e}"),
    })
}

fn check_de_sitter(tol: f64) -> Result<Measured> {
    let lambda = 3.0;
    let rows = [1.3, 2.0, 2.7]
        .par_iter()
        .map(|&p| -> Result<(f64, f64)> {
            let ctx = MassContext::new(RadialProfile::de_sitter(lambda)?, ModelParams::new(lambda, p)?)?;
            let mp = mass_profile(&ctx, &grid(-12.0, 12.0, 25))?;
            let m = max_of(mp.rows.iter().map(|r| r.mass.abs()));
            let total = polarized_mass(&ctx)?.total.abs();
            Ok((m, total))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = max_of(rows.iter().map(|r| r.0));
    let total = max_of(rows.iter().map(|r| r.1));
    Ok(Measured {
        value: m,
        target: 0.0,
        pass: m <= tol && total <= 2e-5,
        detail: format!("max |m(t)| {m:.3e}; max |polarized total| {total:.3e}"),
    })
}

fn check_sds(tol: f64) -> Result<Measured> {
    let mut mass_gap: f64 = 0.0;
    let mut horizon: f64 = 0.0;
    for &(lambda, m) in &[(3.0, 0.05), (3.0, 0.1), (1.0, 0.3)] {
        let (r_minus, r_plus) = sds_horizon_radii(lambda, m)?;
        let phi = |r: f64| 1.0 - lambda * r * r / 3.0 - 2.0 * m / r;
        horizon = horizon.max(phi(r_minus).abs()).max(phi(r_plus).abs());
        let v = one_harmonic_mass_of(&RadialProfile::sds_capped(lambda, m)?, lambda)?;
        mass_gap = mass_gap.max((v.closed_form - m).abs()).max((v.quadrature - m).abs());
    }
    Ok(Measured {
        value: mass_gap,
        target: 0.0,
        pass: mass_gap <= tol && horizon <= 1e-12,
        detail: format!("mass gap {mass_gap:.3e}; max |φ(R±)| {horizon:.3e}"),
    })
}

/// Sphere radii, as fractions of R_max, sampled by the small-sphere check.
pub const SMALL_SPHERE_FRACTIONS: [f64; 5] = [1e-2, 5e-3, 1e-3, 5e-4, 1e-4];

fn check_small_sphere(tol: f64) -> Result<Measured> {
    let (lambda, delta) = (0.3, 0.6);
    let prof = RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0)?;
    let target = delta / (16.0 * PI);
    let mut worst: f64 = 0.0;
    for &p in &[1.5, 2.0] {
        let ctx = MassContext::new(prof.clone(), ModelParams::new(lambda, p)?)?;
        for &f in &SMALL_SPHERE_FRACTIONS {
            let t = ctx.green().w_and_grad(f * prof.r_max)?.0;
            let r = ctx.level(t)?.r;
            let q = ctx.mass_at(t)? / (4.0 * PI / 3.0 * r.powi(3));
            worst = worst.max((q / target - 1.0).abs());
        }
    }
    Ok(Measured::within(worst, tol, format!("worst relative deviation {worst:.3e} from {target:.6e}")))
}

fn check_monotonicity(tol: f64) -> Result<Measured> {
    let lambda = 0.3;
    let mut cases: Vec<(String, RadialProfile, bool)> =
        bundled_profiles(lambda)?.into_iter().map(|(n, p)| (n.to_string(), p, true)).collect();
    cases.push(("dec-violating".into(), dec_violating_profile(lambda)?, false));
    let jobs: Vec<(usize, f64)> =
        (0..cases.len()).flat_map(|i| [1.2, 1.5, 2.0, 2.5, 2.8].into_iter().map(move |p| (i, p))).collect();
    let ts = grid(-12.0, 12.0, 25);
    let out = jobs
        .par_iter()
        .map(|&(i, p)| -> Result<(f64, f64)> {
            let (_, prof, dec) = &cases[i];
            let ctx = MassContext::new(prof.clone(), ModelParams::new(lambda, p)?)?;
            let mp = mass_profile(&ctx, &ts)?;
            let decrease = if *dec { mp.worst_decrease() } else { f64::NEG_INFINITY };
            Ok((decrease, mp.worst_identity_ratio()))
        })
        .collect::<Result<Vec<_>>>()?;
    let decrease = out.iter().map(|o| o.0).fold(f64::NEG_INFINITY, f64::max);
    let identity = max_of(out.iter().map(|o| o.1));
    Ok(Measured {
        value: decrease,
        target: 0.0,
        pass: decrease <= tol && identity <= 1.0,
        detail: format!(
            "largest decrease {decrease:.3e}; identity error / max(1e-6, 1e-4|rhs|) up to {identity:.3e}; profiles: {}",
            cases.iter().map(|c| c.0.as_str()).collect::<Vec<_>>().join(", ")
        ),
    })
}

fn check_asymptotic_constants(tol: f64) -> Result<Measured> {
    let t = 30.0;
    let mut worst: f64 = 0.0;
    for &(lambda, p) in &[(3.0, 2.0), (0.3, 1.5)] {
        let params = ModelParams::new(lambda, p)?;
        let s = coefficients_closed_form(params)?.sample(t)?;
        let (c_lambda, c_mu) = asymptotic_constants(params)?;
        let e = t / (p - 1.0);
        worst = worst.max(((e + s.lambda).exp() / c_lambda - 1.0).abs());
        worst = worst.max(((e + s.ln_mu()).exp() / c_mu - 1.0).abs());
    }
    Ok(Measured::within(worst, tol, format!("worst relative deviation {worst:.3e}")))
}

fn check_p_limit(_tol: f64) -> Result<Measured> {
    let ps = [1.3, 1.2, 1.1, 1.05];
    let below = p_limit_profiles(0.3, 1.0, &ps)?;
    let above = p_limit_profiles(0.3, 3.0, &ps)?;
    let g_lam: Vec<f64> = below.iter().map(|r| (r.exp_lambda - r.exp_lambda_limit).abs()).collect();
    let g_mu: Vec<f64> = below.iter().map(|r| (r.mu_exp_lambda - r.mu_exp_lambda_limit).abs()).collect();
    let a_lam: Vec<f64> = above.iter().map(|r| r.exp_lambda).collect();
    let a_mu: Vec<f64> = above.iter().map(|r| r.mu_exp_lambda).collect();
    let violations = decrease_violations(&g_lam) + decrease_violations(&g_mu) + decrease_violations(&a_lam) + decrease_violations(&a_mu);
    Ok(Measured {
        value: violations as f64,
        target: 0.0,
        pass: violations == 0,
        detail: format!(
            "t=1 e^λ gaps [{}]; μe^λ gaps [{}]; t=3 e^λ [{}]; μe^λ [{}]",
            fmt_list(&g_lam),
            fmt_list(&g_mu),
            fmt_list(&a_lam),
            fmt_list(&a_mu)
        ),
    })
}

fn check_hawking(tol: f64) -> Result<Measured> {
    let mut worst: f64 = 0.0;
    for &lambda in &[0.3, 1.0, 3.0] {
        let oracle = (3.0 * PI / (8.0 * lambda)).sqrt() * (1.0 - PI / 2.0);
        worst = worst.max((hawking_mass(6.0 * PI * PI / lambda, 0.0, lambda) - oracle).abs());
        worst = worst.max(hawking_mass(12.0 * PI / lambda, 0.0, lambda).abs());
        let ds = RadialProfile::de_sitter(lambda)?;
        for &f in &[0.01, 0.25, 0.5, 0.75, 0.99] {
            let r = f * ds.r_max;
            let willmore = 16.0 * PI * (1.0 - lambda * r * r / 3.0);
            worst = worst.max(hawking_mass(4.0 * PI * r * r, willmore, lambda).abs());
            worst = worst.max(sphere_hawking_mass(&ds, r, lambda).abs());
        }
    }
    let clifford = hawking_mass(2.0 * PI * PI, 0.0, 3.0);
    Ok(Measured::within(worst, tol, format!("Clifford torus at Λ=3: {clifford:.12}")))
}

fn check_flux(tol: f64) -> Result<Measured> {
    let lambda = 0.3;
    let mut profiles: Vec<RadialProfile> = bundled_profiles(lambda)?.into_iter().map(|(_, p)| p).collect();
    profiles.push(dec_violating_profile(lambda)?);
    profiles.push(RadialProfile::constant_curvature(0.0)?);
    profiles.push(RadialProfile::constant_curvature(-0.5)?);
    let jobs: Vec<(usize, f64)> =
        (0..profiles.len()).flat_map(|i| [1.1, 1.5, 2.0, 2.5, 2.9].into_iter().map(move |p| (i, p))).collect();
    let ts = grid(-15.0, 15.0, 31);
    let errs = jobs
        .par_iter()
        .map(|&(i, p)| -> Result<f64> {
            let green = RadialGreen::new(profiles[i].clone(), p)?;
            let target = 4.0 * PI * (p - 1.0).powf(p - 1.0);
            let mut worst: f64 = 0.0;
            for &t in &ts {
                let pt = green.level(t)?;
                let (_, grad) = green.w_and_grad_at(&pt)?;
                let flux = (-t).exp() * grad.powf(p - 1.0) * 4.0 * PI * pt.r * pt.r;
                worst = worst.max((flux / target - 1.0).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = max_of(errs);
    Ok(Measured::within(worst, tol, format!("{} profile/p pairs, 31 levels each", jobs.len())))
}

fn check_finiteness(_tol: f64) -> Result<Measured> {
    let lambda = 0.3;
    let profiles: Vec<RadialProfile> = bundled_profiles(lambda)?.into_iter().map(|(_, p)| p).collect();
    let jobs: Vec<(usize, f64)> =
        (0..profiles.len()).flat_map(|i| [1.5, 2.0, 2.5].into_iter().map(move |p| (i, p))).collect();
    let ratios = jobs
        .par_iter()
        .map(|&(i, p)| -> Result<f64> {
            let ctx = MassContext::new(profiles[i].clone(), ModelParams::new(lambda, p)?)?;
            let f = polarized_mass(&ctx)?.finiteness;
            Ok(f.second_summand.abs() / (lambda * f.bound))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = max_of(ratios);
    Ok(Measured {
        value: worst,
        target: 1.0,
        pass: worst <= 1.0,
        detail: format!("largest ratio summand / bound over {} cases: {worst:.6}", jobs.len()),
    })
}
