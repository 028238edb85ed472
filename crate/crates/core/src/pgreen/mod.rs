//! Radial p-Green's functions `u(r) = ∫_r^{R_max} ρ^{-2/(p-1)} φ(ρ)^{-1/2} dρ`,
//! the p-IMCF variable `w = -(p-1) log u` and inversion of its level sets.
//!
//! Everything is evaluated in the log domain: `u` spans hundreds of decades
//! between the pole and the boundary when `p` is close to 1.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, ProfileKind, RadialProfile, POLE_FRACTION, TAYLOR_DEGREE};
use crate::numerics::{find_root_bracketed, integrate_with, QuadOptions};

const PANEL_WIDTH: f64 = 0.1;
const BOUNDARY_FRACTION: f64 = 0.25;
const BOUNDARY_PANELS: usize = 16;
const FAR_FACTOR: f64 = 20.0;
const FAR_TERMS: usize = 24;
const QUAD_TOL: f64 = 1e-13;

/// Where a point sits in the panel structure of a [`RadialGreen`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coordinate {
    /// ln r below the pole-series radius.
    Pole(f64),
    /// ln r on the interior panels.
    Interior(f64),
    /// Boundary coordinate s: r = R_max - s² at an equator, r = R_max - s at a wall.
    Boundary(f64),
    /// ln r beyond the far-tail radius of an unbounded profile.
    Far(f64),
}

/// A point on a level set, carrying the boundary gap at full relative precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPoint {
    pub t: f64,
    pub r: f64,
    /// R_max - r (infinite on unbounded profiles).
    pub gap: f64,
    pub phi: f64,
    /// log u recomputed at the located coordinate.
    pub ln_u: f64,
    pub coord: Coordinate,
}

#[derive(Debug, Clone)]
struct BoundaryZone {
    /// 2 at an equator, 1 at a wall.
    power: i32,
    nodes: Vec<f64>,
    /// ∫_0^{s_k} of the boundary integrand.
    acc: Vec<f64>,
}

/// p-Green's function with pole at r = 0 and zero Dirichlet data at R_max.
#[derive(Debug, Clone)]
pub struct RadialGreen {
    profile: RadialProfile,
    p: f64,
    q: f64,
    r_pole: f64,
    x_pole: f64,
    /// Taylor coefficients of φ^{-1/2}.
    inv_sqrt: Vec<f64>,
    ln_u_pole: f64,
    /// ln r at interior nodes, increasing.
    xs: Vec<f64>,
    ln_us: Vec<f64>,
    boundary: Option<BoundaryZone>,
    far: Option<(f64, Vec<(f64, f64)>)>,
}

/// Power series of f^{-1/2} for f = Σ c_k r^k with c_0 = 1.
fn inverse_sqrt_series(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut g = vec![0.0; n];
    g[0] = 1.0;
    for m in 1..n {
        let mut acc = 0.0;
        for k in 1..=m {
            acc += (0.5 * k as f64 - m as f64) * c[k] * g[m - k];
        }
        g[m] = acc / m as f64;
    }
    g
}

fn quad_opts() -> QuadOptions {
    QuadOptions { rel_tol: QUAD_TOL, abs_tol: 0.0, ..QuadOptions::default() }
}

/// ln(a + e^b) for a ≥ 0.
fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a <= 0.0 {
        return b;
    }
    let la = a.ln();
    if b > la {
        b + (a * (-b).exp()).ln_1p()
    } else {
        la + (b - la).exp().ln_1p()
    }
}

impl RadialGreen {
    pub fn new(profile: RadialProfile, p: f64) -> Result<Self> {
        if !(p > 1.0 && p < 3.0) {
            return Err(Error::Domain(format!("p must lie in (1, 3), got {p}")));
        }
        if let ProfileKind::SchwarzschildDeSitterCapped { .. } = profile.kind {
            return Err(Error::Contract(
                "the capped Schwarzschild-de Sitter profile is Lipschitz at its gluing sphere and is accepted only by the 1-harmonic mass".into(),
            ));
        }
        let q = 1.0 / (p - 1.0);
        let mut r_pole = POLE_FRACTION * profile.scale();
        if let ProfileKind::Tabulated(s) = &profile.kind {
            r_pole = r_pole.min(0.5 * s.knots()[1]);
        }
        let taylor = profile.pole_taylor(TAYLOR_DEGREE).expect("pole-regular profile");
        let inv_sqrt = inverse_sqrt_series(&taylor);

        let mut green = Self {
            profile,
            p,
            q,
            r_pole,
            x_pole: r_pole.ln(),
            inv_sqrt,
            ln_u_pole: 0.0,
            xs: Vec::new(),
            ln_us: Vec::new(),
            boundary: None,
            far: None,
        };

        let (x_top, ln_u_top) = match green.profile.boundary {
            BoundaryKind::Equator | BoundaryKind::Wall => {
                let power = if green.profile.boundary == BoundaryKind::Equator { 2 } else { 1 };
                let d0 = BOUNDARY_FRACTION * green.profile.r_max;
                let s0 = if power == 2 { d0.sqrt() } else { d0 };
                let nodes: Vec<f64> = (0..=BOUNDARY_PANELS).map(|i| s0 * i as f64 / BOUNDARY_PANELS as f64).collect();
                let mut zone = BoundaryZone { power, nodes, acc: vec![0.0] };
                green.boundary = Some(zone.clone());
                let mut acc = 0.0;
                for w in zone.nodes.windows(2) {
                    acc += integrate_with(|s| green.boundary_integrand(s), w[0], w[1], &quad_opts())?.value;
                    zone.acc.push(acc);
                }
                let top = (green.profile.r_max - d0).ln();
                green.boundary = Some(zone);
                (top, acc.ln())
            }
            BoundaryKind::Unbounded => {
                let r_far = FAR_FACTOR * green.profile.scale();
                let coeffs = green
                    .profile
                    .far_expansion(FAR_TERMS)
                    .ok_or_else(|| Error::Contract("unbounded profile without a far expansion".into()))?;
                green.far = Some((r_far.ln(), coeffs));
                (r_far.ln(), green.far_ln_u(r_far.ln()))
            }
        };

        let n = ((x_top - green.x_pole) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let xs: Vec<f64> = (0..=n).map(|i| green.x_pole + (x_top - green.x_pole) * i as f64 / n as f64).collect();
        let mut ln_us = vec![0.0; n + 1];
        ln_us[n] = ln_u_top;
        for j in (0..n).rev() {
            ln_us[j] = green.panel_ln_u(xs[j], xs[j + 1], ln_us[j + 1])?;
        }
        green.ln_u_pole = ln_us[0];
        green.xs = xs;
        green.ln_us = ln_us;
        Ok(green)
    }

    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Radius below which the pole series replaces quadrature.
    pub fn pole_radius(&self) -> f64 {
        self.r_pole
    }

    fn boundary_integrand(&self, s: f64) -> f64 {
        let zone = self.boundary.as_ref().expect("bounded profile");
        let big_r = self.profile.r_max;
        if zone.power == 2 {
            let r = big_r - s * s;
            2.0 * r.powf(-2.0 * self.q) / self.profile.phi_over_gap(s * s).sqrt()
        } else {
            let r = big_r - s;
            r.powf(-2.0 * self.q) / self.profile.phi(r).sqrt()
        }
    }

    /// ln u at x = ln r given ln u at a larger node `x_hi`.
    fn panel_ln_u(&self, x: f64, x_hi: f64, ln_u_hi: f64) -> Result<f64> {
        let e = 1.0 - 2.0 * self.q;
        let integral = if x_hi > x {
            integrate_with(|xi| (e * (xi - x)).exp() / self.profile.phi(xi.exp()).sqrt(), x, x_hi, &quad_opts())?.value
        } else {
            0.0
        };
        Ok(e * x + ln_add_exp(integral, ln_u_hi - e * x))
    }

    fn pole_ln_u(&self, x: f64) -> f64 {
        let two_q = 2.0 * self.q;
        let big_l = self.x_pole - x;
        let mut scaled = 0.0;
        for (k, &b) in self.inv_sqrt.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let kf = k as f64;
            let e = kf + 1.0 - two_q;
            let term = if e == 0.0 {
                (kf * x).exp() * big_l
            } else if e * big_l > 1.0 {
                ((e * self.x_pole + (two_q - 1.0) * x).exp() - (kf * x).exp()) / e
            } else {
                (kf * x).exp() * (e * big_l).exp_m1() / e
            };
            scaled += b * term;
        }
        (1.0 - two_q) * x + ln_add_exp(scaled, self.ln_u_pole + (two_q - 1.0) * x)
    }

    fn far_ln_u(&self, x: f64) -> f64 {
        let (_, coeffs) = self.far.as_ref().expect("unbounded profile");
        let two_q = 2.0 * self.q;
        let scaled: f64 = coeffs.iter().map(|&(e, c)| c * (e * x).exp() / (two_q - 1.0 - e)).sum();
        (1.0 - two_q) * x + scaled.ln()
    }

    fn boundary_ln_u(&self, s: f64) -> Result<f64> {
        let zone = self.boundary.as_ref().expect("bounded profile");
        if s <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let k = zone.nodes.partition_point(|&n| n <= s).clamp(1, zone.nodes.len() - 1) - 1;
        let extra = integrate_with(|v| self.boundary_integrand(v), zone.nodes[k], s.max(zone.nodes[k]), &quad_opts())?.value;
        Ok((zone.acc[k] + extra).ln())
    }

    /// ln u at a coordinate.
    pub fn ln_u_at(&self, coord: Coordinate) -> Result<f64> {
        match coord {
            Coordinate::Pole(x) => Ok(self.pole_ln_u(x)),
            Coordinate::Far(x) => Ok(self.far_ln_u(x)),
            Coordinate::Boundary(s) => self.boundary_ln_u(s),
            Coordinate::Interior(x) => {
                let j = self.xs.partition_point(|&n| n <= x).clamp(1, self.xs.len() - 1);
                self.panel_ln_u(x, self.xs[j], self.ln_us[j])
            }
        }
    }

    /// Panel coordinate of a radius.
    pub fn coordinate_of(&self, r: f64) -> Coordinate {
        let x = r.ln();
        if r < self.r_pole {
            return Coordinate::Pole(x);
        }
        if let Some(zone) = &self.boundary {
            let d = self.profile.r_max - r;
            let s = if zone.power == 2 { d.max(0.0).sqrt() } else { d.max(0.0) };
            if s <= *zone.nodes.last().unwrap() {
                return Coordinate::Boundary(s);
            }
        }
        if let Some((x_far, _)) = &self.far {
            if x > *x_far {
                return Coordinate::Far(x);
            }
        }
        Coordinate::Interior(x)
    }

    fn radius_gap_phi(&self, coord: Coordinate) -> (f64, f64, f64) {
        let big_r = self.profile.r_max;
        match coord {
            Coordinate::Boundary(s) => {
                let power = self.boundary.as_ref().unwrap().power;
                let gap = if power == 2 { s * s } else { s };
                let phi = if power == 2 { gap * self.profile.phi_over_gap(gap) } else { self.profile.phi(big_r - gap) };
                (big_r - gap, gap, phi)
            }
            Coordinate::Pole(x) | Coordinate::Interior(x) | Coordinate::Far(x) => {
                let r = x.exp();
                (r, big_r - r, self.profile.phi(r))
            }
        }
    }

    /// ln u(r); -∞ at or beyond the boundary.
    pub fn ln_u(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        if r >= self.profile.r_max {
            return Ok(f64::NEG_INFINITY);
        }
        self.ln_u_at(self.coordinate_of(r))
    }

    /// u(r)
    pub fn green_u(&self, r: f64) -> Result<f64> {
        Ok(self.ln_u(r)?.exp())
    }

    /// |∇u| = r^{-2/(p-1)}, independent of the profile.
    pub fn grad_norm_u(&self, r: f64) -> f64 {
        r.powf(-2.0 * self.q)
    }

    /// (w, |∇w|) at radius r.
    pub fn w_and_grad(&self, r: f64) -> Result<(f64, f64)> {
        let ln_u = self.ln_u(r)?;
        Ok(self.w_and_grad_from(r, ln_u))
    }

    /// (w, |∇w|) recomputed from the coordinate stored in a level point.
    pub fn w_and_grad_at(&self, pt: &LevelPoint) -> Result<(f64, f64)> {
        let ln_u = self.ln_u_at(pt.coord)?;
        Ok(self.w_and_grad_from(pt.r, ln_u))
    }

    fn w_and_grad_from(&self, r: f64, ln_u: f64) -> (f64, f64) {
        let w = -(self.p - 1.0) * ln_u;
        let grad = (self.p - 1.0) * (-2.0 * self.q * r.ln() - ln_u).exp();
        (w, grad)
    }

    /// The point of the level set {w = t}.
    /// log r at a level point; near the boundary it is built from the stored
    /// gap so that it varies smoothly with t instead of in steps of one ulp of r.
    pub fn ln_radius(&self, pt: &LevelPoint) -> f64 {
        let r_max = self.profile.r_max;
        if pt.gap.is_finite() && pt.gap < 0.5 * r_max {
            r_max.ln() + (-pt.gap / r_max).ln_1p()
        } else {
            pt.r.ln()
        }
    }

    pub fn level(&self, t: f64) -> Result<LevelPoint> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("level must be finite, got {t}")));
        }
        let target = -t / (self.p - 1.0);
        let coord = self.locate(target)?;
        let ln_u = self.ln_u_at(coord)?;
        let (r, gap, phi) = self.radius_gap_phi(coord);
        let gap = if self.profile.r_max.is_finite() { gap } else { f64::INFINITY };
        Ok(LevelPoint { t, r, gap, phi, ln_u, coord })
    }

    /// r(t), the inverse of w.
    pub fn radius_of_level(&self, t: f64) -> Result<f64> {
        Ok(self.level(t)?.r)
    }

    fn locate(&self, target: f64) -> Result<Coordinate> {
        let tol = |x: f64| 4.0 * f64::EPSILON * x.abs().max(1.0);
        // pole zone: ln u decreasing in x on (-∞, x_pole]
        if target >= self.ln_u_pole {
            let f = |x: f64| self.pole_ln_u(x) - target;
            let guess = (target + (2.0 * self.q - 1.0).ln()) / (1.0 - 2.0 * self.q);
            let hi = self.x_pole;
            let mut lo = (guess - 1.0).min(hi - 1.0);
            let mut step = 1.0;
            while f(lo) < 0.0 {
                step *= 2.0;
                lo -= step;
            }
            let x = find_root_bracketed(f, lo, hi, tol(lo))?;
            return Ok(Coordinate::Pole(x));
        }
        let n = self.xs.len() - 1;
        if target >= self.ln_us[n] {
            // first node whose value is below the target
            let j = self.ln_us.partition_point(|&v| v >= target).clamp(1, n);
            let (a, b) = (self.xs[j - 1], self.xs[j]);
            let x = find_root_bracketed(|x| self.panel_ln_u(x, b, self.ln_us[j]).unwrap_or(f64::NAN) - target, a, b, tol(a))?;
            return Ok(Coordinate::Interior(x));
        }
        if let Some(zone) = &self.boundary {
            let lns: Vec<f64> = zone.acc.iter().map(|a| a.ln()).collect();
            let k = lns.partition_point(|&v| v < target).clamp(1, lns.len() - 1);
            if k > 1 {
                let (a, b) = (zone.nodes[k - 1], zone.nodes[k]);
                let s = find_root_bracketed(|s| self.boundary_ln_u(s).unwrap_or(f64::NAN) - target, a, b, tol(b))?;
                return Ok(Coordinate::Boundary(s));
            }
            // first panel: solve in ln s, where ln u ≈ ln s + ln(integrand(0))
            let f = |ls: f64| self.boundary_ln_u(ls.exp()).unwrap_or(f64::NAN) - target;
            let hi = zone.nodes[1].ln();
            let guess = target - self.boundary_integrand(0.0).ln();
            let mut lo = (guess - 1.0).min(hi - 1.0);
            let mut step = 1.0;
            while f(lo) > 0.0 {
                step *= 2.0;
                lo -= step;
            }
            let ls = find_root_bracketed(f, lo, hi, tol(lo))?;
            return Ok(Coordinate::Boundary(ls.exp()));
        }
        let (x_far, coeffs) = self.far.as_ref().expect("unbounded profile");
        let f = |x: f64| self.far_ln_u(x) - target;
        let lead = coeffs[0];
        let guess = (target - (lead.1 / (2.0 * self.q - 1.0 - lead.0)).ln()) / (lead.0 + 1.0 - 2.0 * self.q);
        let lo = *x_far;
        let mut hi = (guess + 1.0).max(lo + 1.0);
        let mut step = 1.0;
        while f(hi) > 0.0 {
            step *= 2.0;
            hi += step;
        }
        let x = find_root_bracketed(f, lo, hi, tol(hi))?;
        Ok(Coordinate::Far(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Shape;

    fn profiles() -> Vec<RadialProfile> {
        vec![
            RadialProfile::de_sitter(3.0).unwrap(),
            RadialProfile::de_sitter(0.3).unwrap(),
            RadialProfile::constant_curvature(0.0).unwrap(),
            RadialProfile::constant_curvature(-1.0).unwrap(),
            RadialProfile::constant_curvature(1.3).unwrap(),
            RadialProfile::de_sitter(3.0).unwrap().with_cap(0.8).unwrap(),
            RadialProfile::perturbed(3.0, -0.5, Shape::Quadratic).unwrap().with_cap(0.7).unwrap(),
            RadialProfile::perturbed(3.0, 0.4, Shape::Bump { width: 0.3 }).unwrap(),
        ]
    }

    #[test]
    fn flat_closed_form() {
        for &p in &[1.2, 1.5, 2.0, 2.5, 2.9] {
            let g = RadialGreen::new(RadialProfile::constant_curvature(0.0).unwrap(), p).unwrap();
            let e = (3.0 - p) / (p - 1.0);
            for &r in &[1e-6, 1e-3, 0.3, 1.0, 7.0, 50.0, 1e4] {
                let exact = ((p - 1.0) / (3.0 - p)).ln() - e * f64::ln(r);
                assert!((g.ln_u(r).unwrap() - exact).abs() < 1e-12, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn de_sitter_p2_closed_form() {
        let g = RadialGreen::new(RadialProfile::de_sitter(3.0).unwrap(), 2.0).unwrap();
        for &r in &[1e-5, 1e-3, 0.2, 0.5, 0.9, 0.999, 1.0 - 1e-9] {
            let exact = f64::sqrt((1.0 - r) * (1.0 + r)) / r;
            let got = g.green_u(r).unwrap();
            assert!((got - exact).abs() <= 1e-11 * exact, "r={r}: {got} vs {exact}");
        }
        assert_eq!(g.green_u(1.0).unwrap(), 0.0);
    }

    #[test]
    fn hyperbolic_p2_closed_form() {
        // φ = 1 + r²: u = √(1+r²)/r - 1
        let g = RadialGreen::new(RadialProfile::constant_curvature(-1.0).unwrap(), 2.0).unwrap();
        for &r in &[1e-4, 0.1, 1.0, 10.0, 19.0, 21.0, 300.0] {
            let exact = f64::sqrt(1.0 + 1.0 / (r * r)) - 1.0;
            let got = g.green_u(r).unwrap();
            assert!((got - exact).abs() <= 1e-11 * exact, "r={r}: {got} vs {exact}");
        }
    }

    #[test]
    fn grad_norm_examples() {
        let g2 = RadialGreen::new(RadialProfile::de_sitter(3.0).unwrap(), 2.0).unwrap();
        assert_eq!(g2.grad_norm_u(0.5), 4.0);
        let g = RadialGreen::new(RadialProfile::de_sitter(3.0).unwrap(), 1.5).unwrap();
        assert_eq!(g.grad_norm_u(1.0), 1.0);
    }

    #[test]
    fn flat_level_inversion() {
        let g = RadialGreen::new(RadialProfile::constant_curvature(0.0).unwrap(), 2.0).unwrap();
        for &t in &[-30.0, -2.0, 0.0, 3.0, 40.0] {
            let r = g.radius_of_level(t).unwrap();
            // u = 1/r, so w = log r
            assert!((r - f64::exp(t)).abs() < 1e-12 * r);
            let (w, grad) = g.w_and_grad(r).unwrap();
            assert!((w - t).abs() < 1e-10);
            assert!((grad - 1.0 / r).abs() < 1e-10 / r);
        }
    }

    #[test]
    fn round_trip_and_flux() {
        for prof in profiles() {
            for &p in &[1.05, 1.2, 1.5, 2.0, 2.5, 2.9] {
                let g = RadialGreen::new(prof.clone(), p).unwrap();
                for i in 0..=40 {
                    let t = -20.0 + i as f64;
                    let pt = g.level(t).unwrap();
                    let (w, grad) = g.w_and_grad_at(&pt).unwrap();
                    assert!((w - t).abs() < 1e-10 * t.abs().max(1.0), "{:?} p={p} t={t}: w={w}", prof.kind);
                    let flux = (-t).exp() * grad.powf(p - 1.0) * 4.0 * std::f64::consts::PI * pt.r * pt.r;
                    let target = 4.0 * std::f64::consts::PI * (p - 1.0).powf(p - 1.0);
                    assert!((flux - target).abs() < 1e-10 * target, "flux {flux} vs {target}");
                }
            }
        }
    }

    #[test]
    fn levels_are_monotone_and_approach_boundary() {
        let g = RadialGreen::new(RadialProfile::de_sitter(3.0).unwrap(), 1.5).unwrap();
        let mut prev = (0.0, f64::INFINITY);
        for i in 0..60 {
            let pt = g.level(-30.0 + i as f64).unwrap();
            assert!(pt.r >= prev.0 && pt.gap < prev.1);
            prev = (pt.r, pt.gap);
        }
        let far = g.level(40.0).unwrap();
        assert!(far.gap > 0.0 && far.gap < 1e-30);
        assert!((far.phi / far.gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn near_pole_asymptotics() {
        for &p in &[1.2, 1.5, 2.0] {
            let g = RadialGreen::new(RadialProfile::de_sitter(3.0).unwrap(), p).unwrap();
            let e = (3.0 - p) / (p - 1.0);
            for &r in &[1e-4, 1e-6] {
                let v = g.green_u(r).unwrap() * f64::powf(r, e) * e;
                assert!((v - 1.0).abs() < 1e-3, "p={p} r={r} v={v}");
            }
        }
    }

    #[test]
    fn pole_series_meets_quadrature() {
        for &p in &[1.2, 5.0 / 3.0, 2.0, 2.5] {
            let g = RadialGreen::new(RadialProfile::perturbed(3.0, 0.3, Shape::Quartic).unwrap(), p).unwrap();
            let r = g.pole_radius();
            let below = g.ln_u(r * (1.0 - 1e-12)).unwrap();
            let above = g.ln_u(r * (1.0 + 1e-12)).unwrap();
            assert!((below - above).abs() < 1e-12 * below.abs(), "p={p}: {below} {above}");
        }
    }

    #[test]
    fn flux_density_identity() {
        // r² φ^{(p-1)/2} |u'|^{p-1} = 1 with |u'| = r^{-2/(p-1)}/√φ, checked by differencing u
        let prof = RadialProfile::perturbed(3.0, 0.4, Shape::Bump { width: 0.3 }).unwrap();
        for &p in &[1.5, 2.0, 2.5] {
            let g = RadialGreen::new(prof.clone(), p).unwrap();
            for &r in &[0.05, 0.3, 0.6, 0.9] {
                let h = 1e-5 * r;
                let du = (g.green_u(r + h).unwrap() - g.green_u(r - h).unwrap()) / (2.0 * h);
                let flux = r * r * prof.phi(r).powf((p - 1.0) / 2.0) * du.abs().powf(p - 1.0);
                assert!((flux - 1.0).abs() < 1e-6, "p={p} r={r} flux={flux}");
            }
        }
    }

    #[test]
    fn rejects_sds() {
        let s = RadialProfile::sds_capped(3.0, 0.1).unwrap();
        assert!(matches!(RadialGreen::new(s, 2.0), Err(Error::Contract(_))));
    }
}
