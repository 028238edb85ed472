use crate::error::{Error, Result};

use super::ABS_FLOOR;

/// Endpoint carrying an inverse square-root singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularEnd {
    #[default]
    None,
    LeftSqrt,
    RightSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    /// Absolute error estimate.
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub singular_end: SingularEnd,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: super::QUAD_REL_TOL,
            abs_tol: ABS_FLOOR,
            singular_end: SingularEnd::None,
            max_intervals: 2000,
        }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_708_828_138,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// One 21-point Gauss-Kronrod application on `[a, b]`.
///
/// Returns `(kronrod, error_estimate)` using the QUADPACK error heuristic.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let result = res_k * half;
    res_abs *= h;
    res_asc *= h;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Adaptive integration with the default absolute floor and interval budget.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    singular_end: SingularEnd,
) -> Result<IntegrationResult> {
    integrate_with(
        f,
        a,
        b,
        &QuadOptions {
            rel_tol,
            singular_end,
            ..QuadOptions::default()
        },
    )
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// A square-root endpoint singularity is removed with `x = end -/+ s^2`
/// before subdivision starts.
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<IntegrationResult> {
    if !(a < b) {
        if a == b {
            return Ok(IntegrationResult { value: 0.0, error_estimate: 0.0, evaluations: 1 });
        }
        return Err(Error::Domain(format!("integration bounds must satisfy a < b, got [{a:e}, {b:e}]")));
    }
    match opts.singular_end {
        SingularEnd::None => bisect(&f, a, b, a, b, opts, &|s| s),
        SingularEnd::LeftSqrt => {
            let g = |s: f64| 2.0 * s * f(a + s * s);
            bisect(&g, 0.0, (b - a).sqrt(), a, b, opts, &|s| a + s * s)
        }
        SingularEnd::RightSqrt => {
            let g = |s: f64| 2.0 * s * f(b - s * s);
            bisect(&g, 0.0, (b - a).sqrt(), a, b, opts, &|s| b - s * s)
        }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn bisect<F: Fn(f64) -> f64, M: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    orig_a: f64,
    orig_b: f64,
    opts: &QuadOptions,
    to_x: &M,
) -> Result<IntegrationResult> {
    let (v, e) = gauss_kronrod_21(f, a, b);
    let mut pieces = vec![Piece { a, b, value: v, error: e }];
    let mut evaluations = 21;
    let mut total = v;
    let mut err = e;
    loop {
        let target = (opts.rel_tol * total.abs()).max(opts.abs_tol);
        if err <= target {
            break;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let worst = pieces.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        if pieces.len() + 2 > opts.max_intervals || !(worst.a < mid && mid < worst.b) {
            let (wa, wb) = (to_x(worst.a), to_x(worst.b));
            return Err(Error::Quadrature {
                a: orig_a,
                b: orig_b,
                worst_a: wa.min(wb),
                worst_b: wa.max(wb),
                error: err,
            });
        }
        let (v1, e1) = gauss_kronrod_21(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(f, mid, worst.b);
        evaluations += 42;
        pieces.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        pieces.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
        // Re-sum to keep the running totals free of drift.
        total = pieces.iter().map(|p| p.value).sum();
        err = pieces.iter().map(|p| p.error).sum();
    }
    Ok(IntegrationResult { value: total, error_estimate: err, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_sqrt_at_right_end() {
        let r = integrate_adaptive(|x| 1.0 / (1.0 - x).sqrt(), 0.0, 1.0, 1e-12, SingularEnd::RightSqrt).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn inverse_sqrt_at_left_end() {
        let r = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 4.0, 1e-12, SingularEnd::LeftSqrt).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial() {
        let r = integrate_adaptive(|x| 3.0 * x * x, 0.0, 1.0, 1e-12, SingularEnd::None).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.evaluations > 0 && r.error_estimate >= 0.0);
    }

    #[test]
    fn de_sitter_green_p2() {
        // integral of rho^-2 / sqrt(1 - rho^2) from r to 1 equals sqrt(1 - r^2) / r
        let r0 = 0.5;
        let res = integrate_adaptive(
            |x: f64| 1.0 / (x * x * (1.0 - x * x).sqrt()),
            r0,
            1.0,
            1e-12,
            SingularEnd::RightSqrt,
        )
        .unwrap();
        let exact = (1.0f64 - r0 * r0).sqrt() / r0;
        assert!((res.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn non_convergence_reports_worst_interval() {
        let opts = QuadOptions { rel_tol: 1e-15, abs_tol: 0.0, max_intervals: 8, ..Default::default() };
        let err = integrate_with(|x: f64| (1.0 / x).sin() / x, 1e-4, 1.0, &opts).unwrap_err();
        match err {
            Error::Quadrature { worst_a, worst_b, .. } => assert!(worst_a < worst_b && worst_a >= 1e-4),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, 1e-10, SingularEnd::None).is_err());
    }
}
