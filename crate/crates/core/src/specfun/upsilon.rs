use crate::error::{Error, Result};

use super::gamma::gamma_ratio;
use super::hyper::{hyp2f1, series, X_SWITCH};

const COND_MAX: f64 = 1e4;

/// Hypergeometric parameters attached to the exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub p: f64,
}

/// `a_p, b_p, c_p` for `1 < p <= 3`.
pub fn hyper_params(p: f64) -> Result<HyperParams> {
    if !(p > 1.0 && p <= 3.0) {
        return Err(Error::Domain(format!("p must lie in (1, 3], got {p}")));
    }
    let s = (4.0 + 12.0 * (p - 1.0) - 3.0 * (p - 1.0).powi(2)).sqrt();
    let d = 4.0 * (p - 1.0);
    Ok(HyperParams { a: (3.0 - p + s) / d, b: (3.0 - p - s) / d, c: p / (p - 1.0), p })
}

/// Υ together with the quantities needed by the Φ/Ψ closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpsilonPoint {
    /// Υ(x)
    pub ups: f64,
    /// Υ'(x)
    pub dups: f64,
    /// [Υ + 2((p-1)/(5-p)) x Υ'] / √(1-x), finite at x = 1.
    pub bracket_scaled: f64,
}

/// Evaluator for Υ(x) = ₂F₁(a_p, b_p; c_p; x) and its companions.
#[derive(Debug, Clone)]
pub struct Upsilon {
    pub hp: HyperParams,
    /// Υ(1)
    ups_one: f64,
    /// Γ(1/2)Γ(c)/(Γ(a+3/2)Γ(b+3/2))
    k_p: f64,
    /// Γ(1/2)Γ(c)/(Γ(a+1)Γ(b+1))
    g_half: f64,
    /// Γ(c)Γ(-3/2)/(Γ(a)Γ(b))
    k2: f64,
    /// Γ(c+1)Γ(1/2)/(Γ(a+3/2)Γ(b+3/2))
    cd1: f64,
    /// Γ(c+1)Γ(-1/2)/(Γ(a+1)Γ(b+1))
    cd2: f64,
}

impl Upsilon {
    pub fn new(p: f64) -> Result<Self> {
        let hp = hyper_params(p)?;
        let HyperParams { a, b, c, .. } = hp;
        Ok(Self {
            hp,
            ups_one: gamma_ratio(&[1.5, c], &[a + 1.5, b + 1.5])?,
            k_p: gamma_ratio(&[0.5, c], &[a + 1.5, b + 1.5])?,
            g_half: gamma_ratio(&[0.5, c], &[a + 1.0, b + 1.0])?,
            k2: gamma_ratio(&[c, -1.5], &[a, b])?,
            cd1: gamma_ratio(&[c + 1.0, 0.5], &[a + 1.5, b + 1.5])?,
            cd2: gamma_ratio(&[c + 1.0, -0.5], &[a + 1.0, b + 1.0])?,
        })
    }

    pub fn p(&self) -> f64 {
        self.hp.p
    }

    /// K_p = Γ(1/2)Γ(c)/(Γ(a+3/2)Γ(b+3/2)) = 2Υ(1).
    pub fn k_p(&self) -> f64 {
        self.k_p
    }

    /// Γ(1/2)Γ(c)/(Γ(a+1)Γ(b+1)), the limit of the scaled bracket at x = 1.
    pub fn gamma_half_ratio(&self) -> f64 {
        self.g_half
    }

    /// Υ(1) by Gauss summation.
    pub fn at_one(&self) -> f64 {
        self.ups_one
    }

    /// Υ'(1) = -((5-p)/(4(p-1))) K_p.
    pub fn deriv_at_one(&self) -> f64 {
        let p = self.hp.p;
        -(5.0 - p) / (4.0 * p) * self.cd1
    }

    fn dcoef(&self) -> f64 {
        let p = self.hp.p;
        -(5.0 - p) / (4.0 * p)
    }

    /// (Υ(x), Υ'(x)) for x in (-1, 1].
    pub fn pair(&self, x: f64) -> Result<(f64, f64)> {
        if x == 1.0 {
            return Ok((self.ups_one, self.deriv_at_one()));
        }
        let pt = self.point(x, 1.0 - x)?;
        Ok((pt.ups, pt.dups))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.pair(x)?.0)
    }

    /// Υ''(x) = -((5-p)/(4p)) ((a+1)(b+1)/(c+1)) ₂F₁(a+2, b+2; c+2; x), for x < 1.
    pub fn second(&self, x: f64) -> Result<f64> {
        let HyperParams { a, b, c, .. } = self.hp;
        Ok(self.dcoef() * (a + 1.0) * (b + 1.0) / (c + 1.0) * hyp2f1(a + 2.0, b + 2.0, c + 2.0, x)?)
    }

    /// Evaluate at `x` with `y = 1 - x` supplied separately so that points
    /// extremely close to `x = 1` keep full relative accuracy in `y`.
    pub fn point(&self, x: f64, y: f64) -> Result<UpsilonPoint> {
        if !(y > 0.0) {
            if y == 0.0 {
                return Ok(UpsilonPoint { ups: self.ups_one, dups: self.deriv_at_one(), bracket_scaled: self.g_half });
            }
            return Err(Error::Domain(format!("Υ evaluated beyond x = 1 (1 - x = {y:e})")));
        }
        if x > X_SWITCH {
            if let Some(pt) = self.near_one(y)? {
                return Ok(pt);
            }
        }
        self.direct(x, y)
    }

    fn direct(&self, x: f64, y: f64) -> Result<UpsilonPoint> {
        let HyperParams { a, b, c, p } = self.hp;
        let ups = hyp2f1(a, b, c, x)?;
        let f1 = hyp2f1(a + 1.0, b + 1.0, c + 1.0, x)?;
        let bracket = ups - (p - 1.0) / (2.0 * p) * x * f1;
        Ok(UpsilonPoint { ups, dups: self.dcoef() * f1, bracket_scaled: bracket / y.sqrt() })
    }

    /// Expansions in `y = 1 - x`; `None` if the branches cancel too strongly.
    fn near_one(&self, y: f64) -> Result<Option<UpsilonPoint>> {
        let HyperParams { a, b, p, .. } = self.hp;
        let sy = y.sqrt();
        let s1 = series(a, b, -0.5, y)?;
        let s2 = series(b + 1.5, a + 1.5, 2.5, y)?;
        let s3 = series(b + 1.5, a + 1.5, 1.5, y)?;
        let s4 = series(a + 1.0, b + 1.0, 0.5, y)?;

        let u1 = self.ups_one * s1;
        let u2 = self.k2 * y * sy * s2;
        let ups = u1 + u2;

        let f1a = self.cd1 * s4;
        let f1b = self.cd2 * sy * s3;
        let f1 = f1a + f1b;

        let dq = bracket_difference_quotient(a, b, y)?;
        let b1 = self.ups_one * sy * dq;
        let b2 = self.k2 * y * s2;
        let b3 = -self.k2 * 3.0 * (p - 1.0) / (5.0 - p) * (1.0 - y) * s3;
        let bs = b1 + b2 + b3;

        let bad = |parts: f64, total: f64| parts > COND_MAX * total.abs();
        if bad(u1.abs() + u2.abs(), ups) || bad(f1a.abs() + f1b.abs(), f1) || bad(b1.abs() + b2.abs() + b3.abs(), bs) {
            return Ok(None);
        }
        Ok(Some(UpsilonPoint { ups, dups: self.dcoef() * f1, bracket_scaled: bs }))
    }
}

/// [₂F₁(a, b; -1/2; y) - (1 - y) ₂F₁(a+1, b+1; 1/2; y)] / y, summed termwise so
/// that the cancellation of the constant terms is exact.
fn bracket_difference_quotient(a: f64, b: f64, y: f64) -> Result<f64> {
    let mut ak = 1.0; // (a)_k (b)_k / ((-1/2)_k k!)
    let mut bk = 1.0; // (a+1)_k (b+1)_k / ((1/2)_k k!)
    let mut bprev;
    let mut sum = 0.0;
    let mut ypow = 1.0;
    for k in 0..2_000_000usize {
        let kf = k as f64;
        bprev = bk;
        ak *= (a + kf) * (b + kf) / ((-0.5 + kf) * (kf + 1.0));
        bk *= (a + 1.0 + kf) * (b + 1.0 + kf) / ((0.5 + kf) * (kf + 1.0));
        let d = ak - bk + bprev;
        let term = d * ypow;
        sum += term;
        ypow *= y;
        if kf > a.abs() + 2.0 && term.abs() <= 1e-17 * sum.abs() * (1.0 - y) {
            return Ok(sum);
        }
        if term == 0.0 && k > 2 {
            return Ok(sum);
        }
    }
    Err(Error::SeriesBudget { terms: 2_000_000 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_at_closure_and_two() {
        let h = hyper_params(3.0).unwrap();
        assert!((h.a - 0.5).abs() < 1e-15 && (h.b + 0.5).abs() < 1e-15 && (h.c - 1.5).abs() < 1e-15);
        let h = hyper_params(2.0).unwrap();
        let s13 = 13f64.sqrt();
        assert!((h.a - (1.0 + s13) / 4.0).abs() < 1e-15);
        assert!((h.b - (1.0 - s13) / 4.0).abs() < 1e-15);
        assert_eq!(h.c, 2.0);
        assert!(hyper_params(1.0).is_err() && hyper_params(3.1).is_err());
    }

    #[test]
    fn params_near_one() {
        let h = hyper_params(1.0 + 1e-6).unwrap();
        assert!(h.a > 1e5);
        assert!((h.b + 1.0).abs() < 1e-5);
    }

    #[test]
    fn parameter_identities() {
        for &p in &[1.05, 1.3, 5.0 / 3.0, 2.0, 2.5, 2.95] {
            let h = hyper_params(p).unwrap();
            assert!(h.a > 0.5 && h.b > -1.0 && h.b < -0.5 && h.c > 1.5);
            assert!((h.a + h.b - (3.0 - p) / (2.0 * (p - 1.0))).abs() < 1e-12 * h.a);
            assert!((h.a * h.b + (5.0 - p) / (4.0 * (p - 1.0))).abs() < 1e-12 * h.a);
            assert!((h.c - (h.a + h.b + 1.5)).abs() < 1e-12 * h.c);
        }
    }

    #[test]
    fn values_at_origin() {
        for &p in &[1.2, 2.0, 2.8] {
            let u = Upsilon::new(p).unwrap();
            let (v, d) = u.pair(0.0).unwrap();
            assert_eq!(v, 1.0);
            assert!((d + (5.0 - p) / (4.0 * p)).abs() < 1e-15);
        }
    }

    #[test]
    fn bracket_vanishes_at_one() {
        for &p in &[1.2, 2.0, 2.8] {
            let u = Upsilon::new(p).unwrap();
            let comb = u.at_one() + 2.0 * (p - 1.0) / (5.0 - p) * u.deriv_at_one();
            assert!(comb.abs() < 1e-12, "p = {p}: {comb}");
        }
    }

    #[test]
    fn near_one_branch_agrees_with_direct_series() {
        for &p in &[1.1, 1.5, 2.0, 2.5, 2.9] {
            let u = Upsilon::new(p).unwrap();
            for &x in &[0.76, 0.8, 0.9, 0.97] {
                let y = 1.0 - x;
                let d = u.direct(x, y).unwrap();
                if let Some(n) = u.near_one(y).unwrap() {
                    assert!((d.ups - n.ups).abs() < 1e-12 * d.ups.abs(), "p={p} x={x}");
                    assert!((d.dups - n.dups).abs() < 1e-11 * d.dups.abs(), "p={p} x={x}");
                    assert!(
                        (d.bracket_scaled - n.bracket_scaled).abs() < 1e-11 * d.bracket_scaled.abs(),
                        "p={p} x={x}: {} vs {}",
                        d.bracket_scaled,
                        n.bracket_scaled
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_bracket_limit() {
        for &p in &[1.2, 2.0, 2.8] {
            let u = Upsilon::new(p).unwrap();
            let pt = u.point(1.0 - 1e-30, 1e-30).unwrap();
            assert!((pt.bracket_scaled / u.gamma_half_ratio() - 1.0).abs() < 1e-12);
            assert!((pt.ups / u.at_one() - 1.0).abs() < 1e-14);
        }
    }
}
