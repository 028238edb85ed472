use super::*;

fn params(lambda: f64, p: f64) -> ModelParams {
    ModelParams::new(lambda, p).unwrap()
}

#[test]
fn kappa_at_p2() {
    assert!((kappa(2.0) + (8.0 * PI).ln()).abs() < 1e-15);
    assert!((kappa(2.0) + 3.224171427529236).abs() < 1e-12);
}

#[test]
fn equilibria_examples() {
    for &p in &[1.2, 1.5, 2.0, 2.5] {
        let c = 1.0 / (3.0 - p);
        let (lo, hi) = riccati_equilibria(p, c).unwrap();
        assert!((lo - c).abs() < 1e-14 && (hi - (5.0 - p) * c * c).abs() < 1e-13);
        let (z, w) = riccati_equilibria(p, 0.0).unwrap();
        assert!(z.abs() < 1e-15 && (w - c).abs() < 1e-15);
        // both are zeros of the Riccati right-hand side
        for mu in [lo, hi] {
            assert!(structural_rhs(p, c, mu).0.abs() < 1e-12);
        }
    }
    assert_eq!(riccati_equilibria(2.0, 1.0).unwrap(), (1.0, 3.0));
    assert!(riccati_equilibria(1.5, 10.0).is_err());
}

#[test]
fn lambda_zero_exact_and_generic() {
    for &p in &[1.2, 1.5, 2.0, 2.5] {
        let pr = params(0.0, p);
        let sc = coefficients_closed_form(pr).unwrap();
        assert_eq!(sc.route(), Route::LambdaZeroExact);
        // generic formula through the flat Green's function
        let flat = RadialGreen::new(RadialProfile::constant_curvature(0.0).unwrap(), p).unwrap();
        let q = 1.0 / (p - 1.0);
        for i in 0..=20 {
            let t = -10.0 + i as f64;
            let s = sc.sample(t).unwrap();
            let r = flat.radius_of_level(t).unwrap();
            let generic = -t * q + 2.0 * q * r.ln() - (8.0 * PI * (p - 1.0)).ln();
            assert!((s.lambda - generic).abs() < 1e-9, "p={p} t={t}");
            assert_eq!(s.mu, 1.0 / (3.0 - p));
        }
    }
    let s = coefficients_closed_form(params(0.0, 2.0)).unwrap().sample(1.5).unwrap();
    assert!((s.exp_lambda() - f64::exp(1.5) / (8.0 * PI)).abs() < 1e-15);
    assert!((s.mu - 1.0).abs() < 1e-15);
}

#[test]
fn lambda_zero_ode_equilibrium() {
    let sc = coefficients_ode(params(0.0, 1.5), -20.0, 20.0).unwrap();
    for i in 0..=40 {
        let t = -20.0 + i as f64;
        let s = sc.sample(t).unwrap();
        assert!((s.mu - 1.0 / 1.5).abs() < 1e-9);
        assert!((s.lambda - (t / 1.5 + kappa(1.5))).abs() < 1e-9);
    }
}

#[test]
fn alpha_limits_and_p2_oracle() {
    for &lam in &[0.3, 3.0] {
        let m = ModelGreen::new(params(lam, 2.0)).unwrap();
        for i in 0..=20 {
            let t = -10.0 + i as f64;
            let r = m.level(t).unwrap().r;
            let expected = 1.0 - lam * r * r / 3.0;
            assert!((m.alpha(t).unwrap() - expected).abs() < 1e-9, "Λ={lam} t={t}");
        }
    }
    for &p in &[1.3, 2.0, 2.6] {
        for &lam in &[-3.0, 0.3, 3.0] {
            let a = alpha_model(params(lam, p), -40.0).unwrap();
            assert!((a - 1.0 / (3.0 - p)).abs() < 1e-6);
        }
        let a = alpha_model(params(-3.0, p), 40.0).unwrap();
        assert!((a - 0.5).abs() < 1e-3, "p={p}: α(+∞) = {a}");
    }
}

#[test]
fn closed_form_satisfies_structural_system() {
    for &(lam, p) in &[(3.0, 1.2), (3.0, 2.5), (0.3, 1.5), (0.3, 2.0)] {
        let sc = coefficients_closed_form(params(lam, p)).unwrap();
        let h = 1e-4;
        for i in 0..=16 {
            let t = -8.0 + i as f64;
            let s = sc.sample(t).unwrap();
            let (sp, sm) = (sc.sample(t + h).unwrap(), sc.sample(t - h).unwrap());
            let (dmu, dlam) = structural_rhs(p, s.alpha, s.mu);
            let fd_lam = (sp.lambda - sm.lambda) / (2.0 * h);
            let fd_mu = (sp.mu - sm.mu) / (2.0 * h);
            assert!((fd_lam - dlam).abs() < 1e-6, "Λ={lam} p={p} t={t}: {fd_lam} vs {dlam}");
            assert!((fd_mu - dmu).abs() < 1e-6 * dmu.abs().max(1.0), "Λ={lam} p={p} t={t}: {fd_mu} vs {dmu}");
        }
    }
}

#[test]
fn route_agreement() {
    for &lam in &[0.3, 3.0] {
        for &p in &[1.2, 1.5, 2.0, 2.5] {
            let pr = params(lam, p);
            let cf = coefficients_closed_form(pr).unwrap();
            let ode = coefficients_ode(pr, default_t_start(p), 10.0).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..=80 {
                let t = -10.0 + 0.25 * i as f64;
                let (a, b) = (cf.sample(t).unwrap(), ode.sample(t).unwrap());
                worst = worst.max((a.mu - b.mu).abs()).max((a.lambda - b.lambda).abs());
            }
            assert!(worst < 1e-6, "Λ={lam} p={p}: {worst:e}");
        }
    }
}

#[test]
fn negative_lambda_corridor_and_continuation() {
    let p = 1.5;
    let pr = params(-3.0, p);
    let sc = coefficients_ode(pr, -20.0, 15.0).unwrap();
    let ups = Upsilon::new(p).unwrap();
    for i in 0..=60 {
        let t = -15.0 + 0.5 * i as f64;
        let s = sc.sample(t).unwrap();
        assert!(s.mu > 0.0 && s.mu < 1.0 / (3.0 - p));
        assert!(s.alpha > 0.0 && s.alpha < 1.0 / (3.0 - p));
        // Pfaff-continued closed form as an oracle: e^λ = αΨ, μ = αΦ/Ψ
        let r = sc.model().level(t).unwrap().r;
        let (phi, psi) = phi_psi_closed(&ups, -3.0, r).unwrap();
        assert!((s.lambda - (s.alpha * psi).ln()).abs() < 1e-6, "t={t}");
        assert!((s.mu - s.alpha * phi / psi).abs() < 1e-6, "t={t}");
    }
}

#[test]
fn phi_psi_limits() {
    for &p in &[1.2, 1.5, 2.0, 2.7] {
        for &lam in &[0.3, 3.0] {
            let pr = params(lam, p);
            let ups = Upsilon::new(p).unwrap();
            let r0 = 1e-5;
            let (a, b) = phi_psi(pr, r0).unwrap();
            assert!((a / r0 * 8.0 * PI - 1.0).abs() < 1e-8 && (b / r0 * 8.0 * PI - 1.0).abs() < 1e-8);
            // Φ y → limit with O(y) error; Ψ √y carries an O(√y) term, removed by Richardson
            let r_l = pr.r_lambda.unwrap();
            let at = |f: f64| {
                let r = r_l * (1.0 - f);
                let y = lam * (r_l - r) * (r_l + r) / 3.0;
                let (a, b) = phi_psi(pr, r).unwrap();
                (a * y, b * y.sqrt(), y.sqrt())
            };
            let (a1, b1, s1) = at(1e-7);
            let (_, b2, s2) = at(4e-7);
            let lim_phi = r_l / (16.0 * PI) * ups.k_p();
            let lim_psi = r_l / (8.0 * PI) * ups.gamma_half_ratio();
            let psi_extrap = (b1 * s2 - b2 * s1) / (s2 - s1);
            assert!((a1 / lim_phi - 1.0).abs() < 1e-5, "p={p} Λ={lam}: {}", a1 / lim_phi);
            assert!((psi_extrap / lim_psi - 1.0).abs() < 1e-5, "p={p} Λ={lam}: {}", psi_extrap / lim_psi);
            assert!(phi_psi(pr, r_l).is_err());
        }
    }
    let (a, b) = phi_psi(params(0.0, 1.7), 2.0).unwrap();
    assert!((a - 2.0 / (8.0 * PI)).abs() < 1e-16 && a == b);
}

#[test]
fn phi_psi_ode_residual() {
    for &(lam, p) in &[(3.0, 1.5), (0.3, 2.5), (-3.0, 1.5), (-1.0, 2.2)] {
        let pr = params(lam, p);
        let scale = (3.0 / lam.abs()).sqrt();
        for &f in &[0.1, 0.4, 0.7, 0.95, 1.5, 3.0] {
            if lam > 0.0 && f >= 1.0 {
                continue;
            }
            let r = f * scale;
            let h = 1e-4 * r;
            let f = |x: f64| phi_psi(pr, x).unwrap();
            let (p2, p1, m1, m2) = (f(r + 2.0 * h), f(r + h), f(r - h), f(r - 2.0 * h));
            let d = |a: f64, b: f64, c: f64, e: f64| (-a + 8.0 * b - 8.0 * c + e) / (12.0 * h);
            let (phi, psi) = f(r);
            let (dphi, dpsi) = phi_psi_rhs(lam, p, r, phi, psi);
            let res_phi = d(p2.0, p1.0, m1.0, m2.0) - dphi;
            let res_psi = d(p2.1, p1.1, m1.1, m2.1) - dpsi;
            let size = dphi.abs().max(dpsi.abs()).max(1.0);
            assert!(res_phi.abs() < 1e-8 * size && res_psi.abs() < 1e-8 * size, "Λ={lam} p={p} r={r}: {res_phi:e} {res_psi:e}");
            assert!(phi > 0.0 && psi > 0.0);
        }
    }
}

#[test]
fn negative_lambda_continuation_matches_pfaff() {
    let p = 1.8;
    let pr = params(-2.0, p);
    let ups = Upsilon::new(p).unwrap();
    let scale = (3.0f64 / 2.0).sqrt();
    for &f in &[0.95, 1.5, 4.0, 10.0] {
        let (a, b) = phi_psi(pr, f * scale).unwrap();
        let (c, d) = phi_psi_closed(&ups, -2.0, f * scale).unwrap();
        assert!((a / c - 1.0).abs() < 1e-9 && (b / d - 1.0).abs() < 1e-9, "f={f}");
    }
}

#[test]
fn asymptotic_constants_at_t30() {
    for &(lam, p) in &[(3.0, 2.0), (0.3, 1.5)] {
        let pr = params(lam, p);
        let sc = coefficients_closed_form(pr).unwrap();
        let (c_lam, c_mu) = asymptotic_constants(pr).unwrap();
        let t = 30.0;
        let s = sc.sample(t).unwrap();
        let e = t / (p - 1.0);
        assert!(((e + s.lambda).exp() / c_lam - 1.0).abs() < 1e-3);
        assert!((e.exp() * s.mu / c_mu - 1.0).abs() < 1e-3);
    }
}

#[test]
fn p_limit_columns() {
    let rows = p_limit_profiles(0.3, 1.0, &[1.3, 1.2, 1.1, 1.05]).unwrap();
    for w in rows.windows(2) {
        assert!((w[1].r - w[1].r_limit).abs() < (w[0].r - w[0].r_limit).abs());
    }
    assert!((rows[0].exp_lambda_limit - f64::exp(0.5) / (16.0 * PI)).abs() < 1e-15);
    let high = p_limit_profiles(0.3, 3.0, &[1.3, 1.2, 1.1, 1.05]).unwrap();
    assert_eq!(high[0].exp_lambda_limit, 0.0);
    assert!(p_limit_profiles(-1.0, 1.0, &[1.5]).is_err());
}
