use crate::error::{Error, Result};

/// Options for [`solve_ivp_with`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial step; `None` picks one from the first derivative.
    pub first_step: Option<f64>,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: super::ODE_REL_TOL,
            abs_tol: 1e-12,
            first_step: None,
            max_step: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

/// Accepted steps of a Dormand-Prince integration with continuous extension.
#[derive(Debug, Clone)]
pub struct OdePath {
    ts: Vec<f64>,
    ys: Vec<Vec<f64>>,
    /// Per-step dense output coefficients (5 vectors per step).
    dense: Vec<[Vec<f64>; 5]>,
    forward: bool,
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

impl OdePath {
    pub fn t_start(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.ts.last().unwrap()
    }

    /// Accepted nodes in integration order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.ts.iter().copied().zip(self.ys.iter().map(|v| v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.ys.last().unwrap()
    }

    /// Dense evaluation anywhere inside the integrated range.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let (lo, hi) = if self.forward { (self.t_start(), self.t_end()) } else { (self.t_end(), self.t_start()) };
        let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        if !(t >= lo - slack && t <= hi + slack) {
            return Err(Error::Domain(format!("t = {t:e} outside integrated range [{lo:e}, {hi:e}]")));
        }
        if self.ts.len() == 1 {
            return Ok(self.ys[0].clone());
        }
        // index of the step containing t
        let pos = if self.forward {
            self.ts.partition_point(|&s| s <= t)
        } else {
            self.ts.partition_point(|&s| s >= t)
        };
        let i = pos.clamp(1, self.ts.len() - 1) - 1;
        let h = self.ts[i + 1] - self.ts[i];
        let theta = ((t - self.ts[i]) / h).clamp(0.0, 1.0);
        let th1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.dense[i];
        Ok((0..r1.len())
            .map(|k| r1[k] + theta * (r2[k] + th1 * (r3[k] + theta * (r4[k] + th1 * r5[k]))))
            .collect())
    }
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` with default options and the given tolerance.
pub fn solve_ivp<F>(f: F, t0: f64, y0: &[f64], t1: f64, rel_tol: f64) -> Result<OdePath>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    solve_ivp_with(f, t0, y0, t1, &OdeOptions { rel_tol, ..OdeOptions::default() })
}

/// Adaptive Dormand-Prince 5(4) integration in either direction.
pub fn solve_ivp_with<F>(mut f: F, t0: f64, y0: &[f64], t1: f64, opts: &OdeOptions) -> Result<OdePath>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    if t0 == t1 {
        return Err(Error::Domain("t0 and t1 coincide".into()));
    }
    let n = y0.len();
    let dir = (t1 - t0).signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = f(t, &y);
    check_finite(&k1, t)?;

    let scale = |y: &[f64], yn: &[f64], i: usize| opts.abs_tol + opts.rel_tol * y[i].abs().max(yn[i].abs());

    let mut h = match opts.first_step {
        Some(h) => h.abs(),
        None => {
            let d0 = (0..n).map(|i| (y[i] / scale(&y, &y, i)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
            let d1 = (0..n).map(|i| (k1[i] / scale(&y, &y, i)).powi(2)).sum::<f64>().sqrt() / (n as f64).sqrt();
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
            h0.min((t1 - t0).abs())
        }
    }
    .min(opts.max_step);

    let mut path = OdePath { ts: vec![t], ys: vec![y.clone()], dense: Vec::new(), forward: dir > 0.0 };
    let mut tmp = vec![0.0; n];
    let mut steps = 0usize;
    let mut last_rejected = false;

    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepUnderflow { t });
        }
        let hmin = 1e-14 * (1.0 + t.abs());
        if h < hmin {
            return Err(Error::StepUnderflow { t });
        }
        let mut hs = h * dir;
        if ((t + hs) - t1) * dir > 0.0 {
            hs = t1 - t;
        }
        let lin = |tmp: &mut Vec<f64>, terms: &[(f64, &Vec<f64>)]| {
            for i in 0..n {
                tmp[i] = y[i] + hs * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>();
            }
        };
        lin(&mut tmp, &[(A21, &k1)]);
        let k2 = f(t + C2 * hs, &tmp);
        lin(&mut tmp, &[(A31, &k1), (A32, &k2)]);
        let k3 = f(t + C3 * hs, &tmp);
        lin(&mut tmp, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = f(t + C4 * hs, &tmp);
        lin(&mut tmp, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = f(t + C5 * hs, &tmp);
        lin(&mut tmp, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + hs, &tmp);
        let mut ynew = vec![0.0; n];
        for i in 0..n {
            ynew[i] = y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let k7 = f(t + hs, &ynew);

        let finite = ynew.iter().chain(k7.iter()).all(|v| v.is_finite());
        let err = if finite {
            let s: f64 = (0..n)
                .map(|i| {
                    let e = hs
                        * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                    (e / scale(&y, &ynew, i)).powi(2)
                })
                .sum();
            (s / n as f64).sqrt()
        } else {
            f64::INFINITY
        };

        if err <= 1.0 {
            let r1 = y.clone();
            let r2: Vec<f64> = (0..n).map(|i| ynew[i] - y[i]).collect();
            let r3: Vec<f64> = (0..n).map(|i| hs * k1[i] - r2[i]).collect();
            let r4: Vec<f64> = (0..n).map(|i| r2[i] - hs * k7[i] - r3[i]).collect();
            let r5: Vec<f64> = (0..n)
                .map(|i| hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]))
                .collect();
            t = if ((t + hs) - t1) * dir >= 0.0 { t1 } else { t + hs };
            y = ynew;
            k1 = k7;
            path.ts.push(t);
            path.ys.push(y.clone());
            path.dense.push([r1, r2, r3, r4, r5]);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = if last_rejected { (hs.abs() * fac.min(1.0)).min(opts.max_step) } else { (hs.abs() * fac).min(opts.max_step) };
            last_rejected = false;
        } else {
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = hs.abs() * fac;
            last_rejected = true;
        }
    }
    Ok(path)
}

fn check_finite(v: &[f64], t: f64) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::StepUnderflow { t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let path = solve_ivp(|_, y| vec![-y[0]], 0.0, &[1.0], 1.0, 1e-10).unwrap();
        let y1 = path.final_state()[0];
        assert!((y1 - (-1.0f64).exp()).abs() < 1e-9);
        // dense output in the middle of the range
        let ym = path.eval(0.37).unwrap()[0];
        assert!((ym - (-0.37f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn backward_direction() {
        let path = solve_ivp(|_, y| vec![y[0]], 0.0, &[1.0], -2.0, 1e-10).unwrap();
        assert!((path.final_state()[0] - (-2.0f64).exp()).abs() < 1e-9);
        assert!((path.eval(-1.3).unwrap()[0] - (-1.3f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn rotation_matches_matrix_exponential() {
        // y'' = -y as a first-order system; exp(tA) is a rotation.
        let tol = 1e-9;
        let path = solve_ivp(|_, y| vec![y[1], -y[0]], 0.0, &[1.0, 0.0], 5.0, tol).unwrap();
        let y = path.final_state();
        assert!((y[0] - 5.0f64.cos()).abs() < 10.0 * tol * 5.0);
        assert!((y[1] + 5.0f64.sin()).abs() < 10.0 * tol * 5.0);
    }

    #[test]
    fn blow_up_is_reported() {
        let err = solve_ivp(|_, y| vec![y[0] * y[0]], 0.0, &[1.0], 1.5, 1e-9).unwrap_err();
        match err {
            Error::StepUnderflow { t } => assert!((t - 1.0).abs() < 1e-2, "stopped at {t}"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn eval_outside_range_is_an_error() {
        let path = solve_ivp(|_, y| vec![-y[0]], 0.0, &[1.0], 1.0, 1e-9).unwrap();
        assert!(path.eval(1.5).is_err());
        assert!(path.eval(-0.1).is_err());
    }
}
