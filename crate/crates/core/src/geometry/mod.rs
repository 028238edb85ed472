//! Rotationally symmetric metrics `dr²/φ(r) + r² g_S²`, their curvatures,
//! Schwarzschild-de Sitter horizons and the dominant-energy margin.

mod spline;

use std::path::Path;

pub use spline::CubicSpline;

use crate::error::{Error, Result};
use crate::numerics::find_root_bracketed;

/// Below `POLE_FRACTION * R_max` curvature uses the Taylor jet of φ.
pub const POLE_FRACTION: f64 = 1e-3;
/// Degree of the Taylor jet carried by pole-regular profiles.
pub const TAYLOR_DEGREE: usize = 10;

/// Smooth perturbation shapes `h` with `h(0) = h'(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// h = r²
    Quadratic,
    /// h = r⁴
    Quartic,
    /// h = r² exp(-r²/w²)
    Bump { width: f64 },
}

impl Shape {
    fn value(&self, r: f64) -> f64 {
        match *self {
            Shape::Quadratic => r * r,
            Shape::Quartic => r.powi(4),
            Shape::Bump { width } => r * r * (-(r * r) / (width * width)).exp(),
        }
    }

    fn deriv(&self, r: f64) -> f64 {
        match *self {
            Shape::Quadratic => 2.0 * r,
            Shape::Quartic => 4.0 * r.powi(3),
            Shape::Bump { width } => {
                let w2 = width * width;
                2.0 * r * (1.0 - r * r / w2) * (-(r * r) / w2).exp()
            }
        }
    }

    fn taylor(&self, n: usize) -> Vec<f64> {
        let mut c = vec![0.0; n + 1];
        match *self {
            Shape::Quadratic => c[2] = 1.0,
            Shape::Quartic => {
                if n >= 4 {
                    c[4] = 1.0
                }
            }
            Shape::Bump { width } => {
                let w2 = width * width;
                let mut coef = 1.0;
                let mut j = 0usize;
                while 2 * j + 2 <= n {
                    c[2 * j + 2] = coef;
                    j += 1;
                    coef *= -1.0 / (w2 * j as f64);
                }
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    DeSitter { lambda: f64 },
    SchwarzschildDeSitterCapped { lambda: f64, m: f64, r_minus: f64, r_plus: f64 },
    ConstantCurvature { a: f64 },
    Perturbed { lambda: f64, eps: f64, shape: Shape },
    Tabulated(CubicSpline),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// φ has a simple zero at R_max (minimal boundary).
    Equator,
    /// φ(R_max) > 0.
    Wall,
    /// No boundary: the domain is [0, ∞).
    Unbounded,
}

/// Warped-product profile φ on [0, R_max].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub kind: ProfileKind,
    pub r_max: f64,
    pub boundary: BoundaryKind,
    /// Radius where the natural zero of φ sits (equals `r_max` unless capped by a wall).
    natural_end: f64,
}

/// Cosmological constant and exponent of a computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub lambda: f64,
    pub p: f64,
    /// √(3/Λ) for Λ > 0.
    pub r_lambda: Option<f64>,
    /// log(3/Λ) for Λ > 0.
    pub t_lambda: Option<f64>,
}

impl ModelParams {
    pub fn new(lambda: f64, p: f64) -> Result<Self> {
        if !(p > 1.0 && p < 3.0) {
            return Err(Error::Domain(format!("p must lie in (1, 3), got {p}")));
        }
        if !lambda.is_finite() {
            return Err(Error::Domain("Λ must be finite".into()));
        }
        let (r_lambda, t_lambda) = if lambda > 0.0 {
            (Some((3.0 / lambda).sqrt()), Some((3.0 / lambda).ln()))
        } else {
            (None, None)
        };
        Ok(Self { lambda, p, r_lambda, t_lambda })
    }

    /// 1/(p-1)
    pub fn q(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }
}

fn check_lambda_positive(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Λ must be positive, got {lambda}")))
    }
}

/// φ = 1 - a r² evaluated in factored form near its zero.
fn quadratic_phi(a: f64, r: f64) -> f64 {
    if a > 0.0 {
        let big_r = 1.0 / a.sqrt();
        if r > 0.5 * big_r {
            return a * (big_r - r) * (big_r + r);
        }
    }
    1.0 - a * r * r
}

impl RadialProfile {
    /// de Sitter hemisphere of radius √(3/Λ).
    pub fn de_sitter(lambda: f64) -> Result<Self> {
        check_lambda_positive(lambda)?;
        let r = (3.0 / lambda).sqrt();
        Ok(Self { kind: ProfileKind::DeSitter { lambda }, r_max: r, boundary: BoundaryKind::Equator, natural_end: r })
    }

    /// φ = 1 - a r²: equator at 1/√a for a > 0, unbounded otherwise.
    pub fn constant_curvature(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::Domain("curvature parameter must be finite".into()));
        }
        if a > 0.0 {
            let r = 1.0 / a.sqrt();
            Ok(Self { kind: ProfileKind::ConstantCurvature { a }, r_max: r, boundary: BoundaryKind::Equator, natural_end: r })
        } else {
            Ok(Self {
                kind: ProfileKind::ConstantCurvature { a },
                r_max: f64::INFINITY,
                boundary: BoundaryKind::Unbounded,
                natural_end: f64::INFINITY,
            })
        }
    }

    /// φ = (1 - Λr²/3)(1 + ε h(r)) on [0, √(3/Λ)].
    pub fn perturbed(lambda: f64, eps: f64, shape: Shape) -> Result<Self> {
        check_lambda_positive(lambda)?;
        if let Shape::Bump { width } = shape {
            if !(width > 0.0) {
                return Err(Error::Domain("bump width must be positive".into()));
            }
        }
        let r = (3.0 / lambda).sqrt();
        let prof = Self {
            kind: ProfileKind::Perturbed { lambda, eps, shape },
            r_max: r,
            boundary: BoundaryKind::Equator,
            natural_end: r,
        };
        prof.check_positive_factor(r)?;
        Ok(prof)
    }

    /// Capped Schwarzschild-de Sitter: φ = 1 - Λr²/3 - 2m/r on [R⁻, R⁺].
    pub fn sds_capped(lambda: f64, m: f64) -> Result<Self> {
        let (r_minus, r_plus) = sds_horizon_radii(lambda, m)?;
        Ok(Self {
            kind: ProfileKind::SchwarzschildDeSitterCapped { lambda, m, r_minus, r_plus },
            r_max: r_plus,
            boundary: BoundaryKind::Equator,
            natural_end: r_plus,
        })
    }

    /// Cubic-spline profile from samples; first row must be (0, 1).
    pub fn tabulated(rs: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if rs.is_empty() || rs[0] != 0.0 || (phis[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("tabulated profile must start with the row (0, 1)".into()));
        }
        let last = *phis.last().unwrap();
        let mut phis = phis;
        let equator = last.abs() <= 1e-12;
        if equator {
            *phis.last_mut().unwrap() = 0.0;
        } else if last < 0.0 {
            return Err(Error::Domain("tabulated φ must be nonnegative".into()));
        }
        if let Some(i) = phis[..phis.len() - 1].iter().position(|&v| !(v > 0.0)) {
            return Err(Error::Domain(format!("tabulated φ must be positive in the interior (row {})", i + 1)));
        }
        let spline = CubicSpline::clamped_left(rs, phis)?;
        let r_max = spline.x_max();
        // dense interior positivity check of the interpolant
        let n = 64 * spline.knots().len();
        for i in 1..n {
            let r = r_max * i as f64 / n as f64;
            if !(spline.eval(r) > 0.0) {
                return Err(Error::Domain(format!("interpolated φ is not positive at r = {r:e}")));
            }
        }
        if equator && !(spline.right_jet()[1] < 0.0) {
            return Err(Error::Domain("tabulated equator needs φ'(R_max) < 0".into()));
        }
        Ok(Self {
            kind: ProfileKind::Tabulated(spline),
            r_max,
            boundary: if equator { BoundaryKind::Equator } else { BoundaryKind::Wall },
            natural_end: r_max,
        })
    }

    /// Read a `r,phi` CSV file.
    pub fn tabulated_from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        let headers = rdr.headers().map_err(|e| Error::Domain(e.to_string()))?.clone();
        if headers.len() != 2 || headers[0].trim() != "r" || headers[1].trim() != "phi" {
            return Err(Error::Domain(format!("{}: header must be `r,phi`", path.display())));
        }
        let (mut rs, mut phis) = (Vec::new(), Vec::new());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Domain(e.to_string()))?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("{}: row {}: bad number `{s}`", path.display(), i + 2)))
            };
            rs.push(parse(&rec[0])?);
            phis.push(parse(&rec[1])?);
        }
        Self::tabulated(rs, phis)
    }

    /// Restrict the domain to [0, cap] with a wall boundary.
    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if matches!(self.kind, ProfileKind::SchwarzschildDeSitterCapped { .. } | ProfileKind::Tabulated(_)) {
            return Err(Error::Domain("this profile kind does not accept a cap".into()));
        }
        if !(cap > 0.0) {
            return Err(Error::Domain(format!("cap radius must be positive, got {cap}")));
        }
        if cap < self.r_max {
            self.r_max = cap;
            self.boundary = BoundaryKind::Wall;
            self.check_positive_factor(cap)?;
        }
        Ok(self)
    }

    fn check_positive_factor(&self, upto: f64) -> Result<()> {
        if let ProfileKind::Perturbed { eps, shape, .. } = self.kind {
            let n = 2048;
            for i in 0..=n {
                let r = upto * i as f64 / n as f64;
                if !(1.0 + eps * shape.value(r) > 0.0) {
                    return Err(Error::Domain(format!("perturbation makes φ nonpositive near r = {r:e}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_pole_regular(&self) -> bool {
        !matches!(self.kind, ProfileKind::SchwarzschildDeSitterCapped { .. })
    }

    /// Lower end of the radial domain (R⁻ for the capped Schwarzschild-de Sitter profile).
    pub fn r_min(&self) -> f64 {
        match self.kind {
            ProfileKind::SchwarzschildDeSitterCapped { r_minus, .. } => r_minus,
            _ => 0.0,
        }
    }

    /// Length scale for relative thresholds.
    pub fn scale(&self) -> f64 {
        if self.r_max.is_finite() {
            self.r_max
        } else {
            match self.kind {
                ProfileKind::ConstantCurvature { a } if a < 0.0 => 1.0 / (-a).sqrt(),
                _ => 1.0,
            }
        }
    }

    pub fn phi(&self, r: f64) -> f64 {
        if self.boundary == BoundaryKind::Equator && r >= self.r_max {
            return 0.0;
        }
        match &self.kind {
            ProfileKind::DeSitter { lambda } => quadratic_phi(lambda / 3.0, r),
            ProfileKind::ConstantCurvature { a } => quadratic_phi(*a, r),
            ProfileKind::Perturbed { lambda, eps, shape } => quadratic_phi(lambda / 3.0, r) * (1.0 + eps * shape.value(r)),
            ProfileKind::SchwarzschildDeSitterCapped { lambda, m, .. } => 1.0 - lambda * r * r / 3.0 - 2.0 * m / r,
            ProfileKind::Tabulated(s) => s.eval(r),
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::DeSitter { lambda } => -2.0 * lambda / 3.0 * r,
            ProfileKind::ConstantCurvature { a } => -2.0 * a * r,
            ProfileKind::Perturbed { lambda, eps, shape } => {
                let k = lambda / 3.0;
                -2.0 * k * r * (1.0 + eps * shape.value(r)) + quadratic_phi(k, r) * eps * shape.deriv(r)
            }
            ProfileKind::SchwarzschildDeSitterCapped { lambda, m, .. } => -2.0 * lambda / 3.0 * r + 2.0 * m / (r * r),
            ProfileKind::Tabulated(s) => s.deriv(r),
        }
    }

    /// Taylor coefficients of φ at the pole in powers of r, up to degree `n`.
    pub fn pole_taylor(&self, n: usize) -> Option<Vec<f64>> {
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        match &self.kind {
            ProfileKind::DeSitter { lambda } => c[2] = -lambda / 3.0,
            ProfileKind::ConstantCurvature { a } => c[2] = -a,
            ProfileKind::Perturbed { lambda, eps, shape } => {
                let h = shape.taylor(n);
                let mut f = vec![0.0; n + 1];
                f[0] = 1.0;
                for k in 0..=n {
                    f[k] += eps * h[k];
                }
                // (1 - k r²) * f
                for k in 0..=n {
                    c[k] = f[k] - if k >= 2 { lambda / 3.0 * f[k - 2] } else { 0.0 };
                }
            }
            ProfileKind::SchwarzschildDeSitterCapped { .. } => return None,
            ProfileKind::Tabulated(s) => {
                let cf = s.coefficients(0);
                c[0] = cf[0];
                c[1] = cf[1];
                c[2] = cf[2];
                c[3] = cf[3];
            }
        }
        Some(c)
    }

    /// Radius up to which [`Self::pole_taylor`] represents φ exactly or to truncation order.
    pub fn pole_series_radius(&self) -> f64 {
        match &self.kind {
            ProfileKind::Tabulated(s) => s.knots()[1],
            _ => self.scale(),
        }
    }

    /// φ(R_max - g)/g near an equator, accurate for tiny g.
    pub fn phi_over_gap(&self, g: f64) -> f64 {
        let big_r = self.r_max;
        match &self.kind {
            ProfileKind::DeSitter { lambda } => lambda / 3.0 * (2.0 * big_r - g),
            ProfileKind::ConstantCurvature { a } => a * (2.0 * big_r - g),
            ProfileKind::Perturbed { lambda, eps, shape } => {
                lambda / 3.0 * (2.0 * big_r - g) * (1.0 + eps * shape.value(big_r - g))
            }
            ProfileKind::SchwarzschildDeSitterCapped { lambda, r_minus, r_plus, .. } => {
                let r = r_plus - g;
                lambda / 3.0 * (r - r_minus) * (r + r_minus + r_plus) / r
            }
            ProfileKind::Tabulated(s) => {
                let j = s.right_jet();
                -j[1] + 0.5 * j[2] * g - j[3] / 6.0 * g * g
            }
        }
    }

    /// φ from the distance to the natural zero; falls back to φ(r) elsewhere.
    pub fn phi_from_gap(&self, g: f64) -> f64 {
        if self.boundary == BoundaryKind::Equator {
            g * self.phi_over_gap(g)
        } else {
            self.phi(self.natural_end - g)
        }
    }

    /// Coefficients `(e_j, c_j)` with 1/√φ(ρ) ≈ Σ c_j ρ^{e_j} for large ρ (unbounded profiles).
    pub fn far_expansion(&self, terms: usize) -> Option<Vec<(f64, f64)>> {
        match self.kind {
            ProfileKind::ConstantCurvature { a } if a == 0.0 => Some(vec![(0.0, 1.0)]),
            ProfileKind::ConstantCurvature { a } if a < 0.0 => {
                let k = -a;
                let mut out = Vec::with_capacity(terms);
                let mut binom = 1.0;
                for j in 0..terms {
                    let jf = j as f64;
                    out.push((-1.0 - 2.0 * jf, binom * k.powf(-jf - 0.5)));
                    binom *= (-0.5 - jf) / (jf + 1.0);
                }
                Some(out)
            }
            _ => None,
        }
    }

    /// Scalar curvature R = 2(1 - φ - rφ')/r² of the warped metric.
    pub fn scalar_curvature(&self, r: f64) -> f64 {
        if self.is_pole_regular() && r < POLE_FRACTION * self.scale().min(self.pole_series_radius()) {
            let c = self.pole_taylor(6).expect("pole-regular profile");
            // 1 - φ - rφ' = -Σ_{k≥2} (k+1) c_k r^k
            let mut acc = 0.0;
            for k in (2..=6).rev() {
                acc = acc * r + (k as f64 + 1.0) * c[k];
            }
            return -2.0 * acc + if c[1] != 0.0 && r > 0.0 { -4.0 * c[1] / r } else { 0.0 };
        }
        2.0 * (1.0 - self.phi(r) - r * self.dphi(r)) / (r * r)
    }

    /// Mean curvature 2√φ/r of the centered sphere of radius r.
    pub fn mean_curvature(&self, r: f64) -> f64 {
        if self.boundary == BoundaryKind::Equator && r >= self.r_max {
            return 0.0;
        }
        2.0 * self.phi(r).max(0.0).sqrt() / r
    }

    /// min over a uniform grid of R(r) - 2Λ.
    pub fn dec_margin(&self, lambda: f64, samples: usize) -> Result<f64> {
        if samples < 2 {
            return Err(Error::Domain("dec_margin needs at least 2 samples".into()));
        }
        let lo = self.r_min();
        let hi = if self.r_max.is_finite() { self.r_max } else { 10.0 * self.scale() };
        let mut worst = f64::INFINITY;
        for i in 0..samples {
            let r = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let r = if r == 0.0 && !self.is_pole_regular() { lo } else { r };
            worst = worst.min(self.scalar_curvature(r) - 2.0 * lambda);
        }
        Ok(worst)
    }

    /// Volume ∫ 4πr²/√φ dr of the whole domain.
    pub fn volume(&self) -> Result<f64> {
        use crate::numerics::{integrate_with, QuadOptions};
        if !self.r_max.is_finite() {
            return Err(Error::Domain("unbounded profile has infinite volume".into()));
        }
        let f = |r: f64| 4.0 * std::f64::consts::PI * r * r / self.phi(r).sqrt();
        let opts = QuadOptions { rel_tol: 1e-12, abs_tol: 0.0, ..QuadOptions::default() };
        let (lo, hi) = (self.r_min(), self.r_max);
        let mid = 0.5 * (lo + hi);
        let left = integrate_with(f, lo, mid, &opts)?.value;
        let right = if self.boundary == BoundaryKind::Equator {
            // r = R - s²: 2s/√φ = 2/√(φ/gap)
            let g = |s: f64| {
                let r = hi - s * s;
                4.0 * std::f64::consts::PI * r * r * 2.0 / self.phi_over_gap(s * s).sqrt()
            };
            integrate_with(g, 0.0, (hi - mid).sqrt(), &opts)?.value
        } else {
            integrate_with(f, mid, hi, &opts)?.value
        };
        Ok(left + right)
    }
}

/// Both positive roots of r - (Λ/3)r³ - 2m.
pub fn sds_horizon_radii(lambda: f64, m: f64) -> Result<(f64, f64)> {
    check_lambda_positive(lambda)?;
    let m_max = 1.0 / (3.0 * lambda.sqrt());
    if !(m > 0.0 && m < m_max) {
        return Err(Error::Domain(format!(
            "mass {m} outside (0, {m_max:e}); the extremal mass 1/(3√Λ) admits no pair of horizons"
        )));
    }
    let poly = |r: f64| r - lambda / 3.0 * r * r * r - 2.0 * m;
    let r_star = 1.0 / lambda.sqrt();
    let r_lam = (3.0 / lambda).sqrt();
    let r_minus = find_root_bracketed(poly, 0.0, r_star, 1e-16)?;
    let r_plus = find_root_bracketed(poly, r_star, r_lam, 1e-16)?;
    Ok((r_minus, r_plus))
}

/// Five pole-regular profiles with R ≥ 2Λ for the given Λ > 0.
pub fn bundled_profiles(lambda: f64) -> Result<Vec<(&'static str, RadialProfile)>> {
    let r_l = (3.0 / lambda).sqrt();
    Ok(vec![
        ("de-sitter", RadialProfile::de_sitter(lambda)?),
        ("constant-curvature-0.6", RadialProfile::constant_curvature((2.0 * lambda + 0.6) / 6.0)?),
        ("constant-curvature-3", RadialProfile::constant_curvature((2.0 * lambda + 3.0) / 6.0)?),
        ("de-sitter-wall", RadialProfile::de_sitter(lambda)?.with_cap(0.7 * r_l)?),
        ("quadratic-dip-wall", RadialProfile::perturbed(lambda, -0.1 * lambda, Shape::Quadratic)?.with_cap(0.4 * r_l)?),
    ])
}

/// A profile with R < 2Λ somewhere, used for the unconditional derivative identity.
pub fn dec_violating_profile(lambda: f64) -> Result<RadialProfile> {
    RadialProfile::perturbed(lambda, 0.1 * lambda, Shape::Quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let slo = f(lo).signum();
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == slo {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn bundled_profiles_satisfy_dec() {
        for &lambda in &[0.3, 3.0] {
            let list = bundled_profiles(lambda).unwrap();
            assert_eq!(list.len(), 5);
            for (name, prof) in list {
                assert!(prof.dec_margin(lambda, 4001).unwrap() >= -1e-9, "{name}");
            }
            assert!(dec_violating_profile(lambda).unwrap().dec_margin(lambda, 4001).unwrap() < 0.0);
        }
    }

    #[test]
    fn de_sitter_basics() {
        let p = RadialProfile::de_sitter(3.0).unwrap();
        assert!((p.r_max - 1.0).abs() < 1e-15);
        assert!((p.phi(0.5) - 0.75).abs() < 1e-15);
        assert!((p.mean_curvature(0.5) - 4.0 * 0.75f64.sqrt()).abs() < 1e-14);
        assert_eq!(p.mean_curvature(p.r_max), 0.0);
    }

    #[test]
    fn flat_mean_curvature() {
        let p = RadialProfile::constant_curvature(0.0).unwrap();
        assert!((p.mean_curvature(2.0) - 1.0).abs() < 1e-15);
        assert_eq!(p.boundary, BoundaryKind::Unbounded);
    }

    #[test]
    fn constant_curvature_matches_de_sitter() {
        let a = RadialProfile::constant_curvature(1.0).unwrap();
        let d = RadialProfile::de_sitter(3.0).unwrap();
        for &r in &[0.1, 0.4, 0.77, 0.999] {
            assert!((a.phi(r) - d.phi(r)).abs() < 1e-15);
        }
    }

    #[test]
    fn curvature_of_model_families() {
        for &lam in &[0.3, 1.0, 3.0] {
            let d = RadialProfile::de_sitter(lam).unwrap();
            for i in 1..20 {
                let r = d.r_max * i as f64 / 20.0;
                assert!((d.scalar_curvature(r) - 2.0 * lam).abs() < 1e-10 * lam.max(1.0));
            }
            assert!((d.scalar_curvature(0.0) - 2.0 * lam).abs() < 1e-14);
        }
        let s = RadialProfile::sds_capped(3.0, 0.1).unwrap();
        let (lo, hi) = (s.r_min(), s.r_max);
        for i in 1..20 {
            let r = lo + (hi - lo) * i as f64 / 20.0;
            assert!((s.scalar_curvature(r) - 6.0).abs() < 1e-10);
        }
        for &a in &[0.5, 1.1, 2.0] {
            let c = RadialProfile::constant_curvature(a).unwrap();
            assert!((c.scalar_curvature(0.3 * c.r_max) - 6.0 * a).abs() < 1e-12);
        }
    }

    #[test]
    fn pole_branch_continuity() {
        let profiles = vec![
            RadialProfile::de_sitter(3.0).unwrap(),
            RadialProfile::constant_curvature(1.3).unwrap(),
            RadialProfile::perturbed(3.0, -0.4, Shape::Bump { width: 0.4 }).unwrap(),
            RadialProfile::perturbed(1.0, 0.3, Shape::Quartic).unwrap(),
        ];
        for p in &profiles {
            let r = 1e-4 * p.r_max;
            let limit = p.scalar_curvature(r);
            let direct = 2.0 * (1.0 - p.phi(r) - r * p.dphi(r)) / (r * r);
            assert!((limit - direct).abs() <= 1e-6 * limit.abs().max(1.0), "{limit} vs {direct}");
        }
    }

    #[test]
    fn dec_margins() {
        let lam = 3.0;
        assert!(RadialProfile::de_sitter(lam).unwrap().dec_margin(lam, 200).unwrap().abs() < 1e-9);
        let delta = 0.6;
        let c = RadialProfile::constant_curvature((2.0 * lam + delta) / 6.0).unwrap();
        assert!((c.dec_margin(lam, 200).unwrap() - delta).abs() < 1e-9);
        let bad = RadialProfile::perturbed(lam, -0.9, Shape::Bump { width: 0.3 }).unwrap();
        assert!(bad.dec_margin(lam, 400).unwrap() < 0.0);
    }

    #[test]
    fn horizons_against_bisection() {
        for &(lam, m) in &[(3.0, 0.1), (3.0, 0.05), (1.0, 0.3)] {
            let (rm, rp) = sds_horizon_radii(lam, m).unwrap();
            let poly = |r: f64| r - lam / 3.0 * r * r * r - 2.0 * m;
            let rs = 1.0 / f64::sqrt(lam);
            assert!((rm - bisect(poly, 0.0, rs)).abs() < 1e-14);
            assert!((rp - bisect(poly, rs, (3.0 / lam).sqrt())).abs() < 1e-14);
            assert!(rm < rp);
            assert!((rp * (1.0 - lam / 3.0 * rp * rp) - 2.0 * m).abs() < 1e-12);
            let s = RadialProfile::sds_capped(lam, m).unwrap();
            assert!(s.phi(rm).abs() < 1e-12 && (1.0 - lam * rp * rp / 3.0 - 2.0 * m / rp).abs() < 1e-12);
        }
        assert!(sds_horizon_radii(3.0, 0.2).is_err());
        let (_, rp) = sds_horizon_radii(3.0, 1e-9).unwrap();
        assert!((rp - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gap_form_is_consistent() {
        let profiles = vec![
            RadialProfile::de_sitter(0.3).unwrap(),
            RadialProfile::perturbed(3.0, 0.2, Shape::Quadratic).unwrap(),
            RadialProfile::sds_capped(3.0, 0.1).unwrap(),
        ];
        for p in &profiles {
            for &g in &[1e-3, 1e-2, 0.1] {
                let r = p.r_max - g * p.r_max;
                let gap = p.r_max - r;
                assert!((p.phi_from_gap(gap) - p.phi(r)).abs() < 1e-12, "{:?}", p.kind);
            }
        }
    }

    #[test]
    fn tabulated_profile() {
        let rs: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let phis: Vec<f64> = rs.iter().map(|r| 1.0 - r * r).collect();
        let t = RadialProfile::tabulated(rs, phis).unwrap();
        assert_eq!(t.boundary, BoundaryKind::Equator);
        assert!((t.phi(0.5) - 0.75).abs() < 1e-5);
        assert!(RadialProfile::tabulated(vec![0.0, 0.5, 1.0], vec![1.0, -0.1, 0.0]).is_err());
        assert!(RadialProfile::tabulated(vec![0.1, 0.5, 1.0], vec![1.0, 0.5, 0.0]).is_err());
    }

    #[test]
    fn volume_of_round_hemisphere() {
        // hemisphere of radius R has volume π² R³
        let d = RadialProfile::de_sitter(3.0).unwrap();
        let v = d.volume().unwrap();
        assert!((v - std::f64::consts::PI.powi(2)).abs() < 1e-10);
    }
}
