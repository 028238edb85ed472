use crate::error::{Error, Result};

/// Cubic spline with zero slope at the left end and a natural right end.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn clamped_left(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(Error::Domain("a tabulated profile needs at least 3 rows".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("tabulated r values must be strictly increasing".into()));
        }
        // Tridiagonal system for the second derivatives.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let h0 = xs[1] - xs[0];
        diag[0] = h0 / 3.0;
        sup[0] = h0 / 6.0;
        rhs[0] = (ys[1] - ys[0]) / h0;
        for i in 1..n - 1 {
            let (hl, hr) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
            sub[i] = hl / 6.0;
            diag[i] = (hl + hr) / 3.0;
            sup[i] = hr / 6.0;
            rhs[i] = (ys[i + 1] - ys[i]) / hr - (ys[i] - ys[i - 1]) / hl;
        }
        diag[n - 1] = 1.0;
        // Thomas algorithm
        for i in 1..n {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
        }
        Ok(Self { xs, ys, m })
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    fn segment(&self, x: f64) -> usize {
        self.xs.partition_point(|&k| k <= x).clamp(1, self.xs.len() - 1) - 1
    }

    /// Coefficients (c0, c1, c2, c3) of the cubic on segment `i` in powers of `x - xs[i]`.
    pub fn coefficients(&self, i: usize) -> [f64; 4] {
        let h = self.xs[i + 1] - self.xs[i];
        let (y0, y1, m0, m1) = (self.ys[i], self.ys[i + 1], self.m[i], self.m[i + 1]);
        [y0, (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0, m0 / 2.0, (m1 - m0) / (6.0 * h)]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let c = self.coefficients(i);
        let s = x - self.xs[i];
        c[0] + s * (c[1] + s * (c[2] + s * c[3]))
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let c = self.coefficients(i);
        let s = x - self.xs[i];
        c[1] + s * (2.0 * c[2] + 3.0 * s * c[3])
    }

    /// Value, first, second and third derivative at the right end.
    pub fn right_jet(&self) -> [f64; 4] {
        let i = self.xs.len() - 2;
        let c = self.coefficients(i);
        let s = self.xs[i + 1] - self.xs[i];
        [
            c[0] + s * (c[1] + s * (c[2] + s * c[3])),
            c[1] + s * (2.0 * c[2] + 3.0 * s * c[3]),
            2.0 * c[2] + 6.0 * s * c[3],
            6.0 * c[3],
        ]
    }
}
