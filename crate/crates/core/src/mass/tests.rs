use super::*;
use crate::geometry::{bundled_profiles, dec_violating_profile, Shape};

fn ctx(profile: RadialProfile, lambda: f64, p: f64) -> MassContext {
    MassContext::new(profile, ModelParams::new(lambda, p).unwrap()).unwrap()
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn hawking_anchors() {
    let lambda = 3.0;
    let area = 6.0 * PI * PI / lambda;
    let oracle = (3.0 * PI / (8.0 * lambda)).sqrt() * (1.0 - PI / 2.0);
    assert!((hawking_mass(area, 0.0, lambda) - oracle).abs() < 1e-12);
    assert!((oracle + 0.3576935529499).abs() < 1e-12);
    assert!(hawking_mass(12.0 * PI / lambda, 0.0, lambda).abs() < 1e-12);
    let ds = RadialProfile::de_sitter(lambda).unwrap();
    for &r in &[0.01, 0.3, 0.9] {
        let willmore = 16.0 * PI * (1.0 - lambda * r * r / 3.0);
        assert!(hawking_mass(4.0 * PI * r * r, willmore, lambda).abs() < 1e-12);
        assert!(sphere_hawking_mass(&ds, r, lambda).abs() < 1e-12);
    }
}

#[test]
fn geroch_radial_matches_derivative() {
    let lambda = 0.3;
    let prof = RadialProfile::constant_curvature((2.0 * lambda + 0.6) / 6.0).unwrap();
    let h = 1e-3;
    for &t in &[-4.0, -1.0, 0.5, 1.5] {
        let m = |s: f64| sphere_hawking_mass(&prof, (s / 2.0).exp(), lambda);
        let num = (-m(t + 2.0 * h) + 8.0 * m(t + h) - 8.0 * m(t - h) + m(t - 2.0 * h)) / (12.0 * h);
        let rhs = geroch_radial_rhs(&prof, (t / 2.0).exp(), lambda);
        assert!((num - rhs).abs() < 1e-6, "t = {t}: {num} vs {rhs}");
    }
}

#[test]
fn de_sitter_mass_vanishes() {
    for &p in &[1.3, 2.0, 2.7] {
        let c = ctx(RadialProfile::de_sitter(3.0).unwrap(), 3.0, p);
        let prof = mass_profile(&c, &grid(-12.0, 12.0, 13)).unwrap();
        for row in &prof.rows {
            assert!(row.mass.abs() < 1e-6, "p = {p}, t = {}: m = {}", row.t, row.mass);
            assert!(row.dmdt_formula.abs() < 1e-8, "p = {p}, t = {}: rhs = {}", row.t, row.dmdt_formula);
            assert_eq!(row.area, 4.0 * PI * row.r * row.r);
        }
    }
}

#[test]
fn derivative_identity_and_monotonicity() {
    let lambda = 0.3;
    let mut cases: Vec<(RadialProfile, bool)> =
        bundled_profiles(lambda).unwrap().into_iter().map(|(_, prof)| (prof, true)).collect();
    cases.push((dec_violating_profile(lambda).unwrap(), false));
    for (prof, dec) in cases {
        for &p in &[1.5, 2.0, 2.5] {
            let c = ctx(prof.clone(), lambda, p);
            let mp = mass_profile(&c, &grid(-8.0, 8.0, 17)).unwrap();
            assert!(mp.worst_identity_ratio() <= 1.0, "p = {p}: ratio {}", mp.worst_identity_ratio());
            if dec {
                assert!(mp.worst_decrease() <= 1e-8, "p = {p}: decrease {}", mp.worst_decrease());
                assert!(mp.rows.iter().all(|r| r.dmdt_formula >= -1e-12));
            }
        }
    }
}

#[test]
fn constant_curvature_rhs_lower_bound() {
    let (lambda, delta) = (0.3, 0.6);
    let c = ctx(RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0).unwrap(), lambda, 2.0);
    for &t in &[-5.0, 0.0, 3.0] {
        let d = c.level(t).unwrap();
        let bound = d.lambda.exp() * delta / 2.0 * d.area();
        assert!(c.rhs_at(&d) >= bound * (1.0 - 1e-12));
    }
}

#[test]
fn small_sphere_quotient() {
    let (lambda, delta) = (0.3, 0.6);
    let prof = RadialProfile::constant_curvature((2.0 * lambda + delta) / 6.0).unwrap();
    let r_cap = 1e-2 * prof.r_max;
    let target = delta / (16.0 * PI);
    for &p in &[1.5, 2.0] {
        let c = ctx(prof.clone(), lambda, p);
        let t = c.green().w_and_grad(r_cap).unwrap().0;
        for &s in &[t, t - 2.0, t - 5.0] {
            let d = c.level(s).unwrap();
            let quotient = c.mass_at(s).unwrap() / (4.0 * PI / 3.0 * d.r.powi(3));
            assert!((quotient - target).abs() <= 0.01 * target, "p = {p}, t = {s}: {quotient} vs {target}");
        }
    }
}

#[test]
fn mismatched_coefficients_rejected() {
    let coeffs = coefficients_closed_form(ModelParams::new(3.0, 2.0).unwrap()).unwrap();
    let err = MassContext::with_coefficients(
        RadialProfile::de_sitter(3.0).unwrap(),
        ModelParams::new(3.0, 1.5).unwrap(),
        coeffs,
    );
    assert!(matches!(err, Err(Error::Contract(_))));
    let sds = RadialProfile::sds_capped(3.0, 0.1).unwrap();
    assert!(MassContext::new(sds, ModelParams::new(3.0, 2.0).unwrap()).is_err());
}

#[test]
fn polarized_de_sitter_vanishes() {
    for &p in &[1.3, 2.0, 2.7] {
        let c = ctx(RadialProfile::de_sitter(3.0).unwrap(), 3.0, p);
        let b = polarized_mass(&c).unwrap();
        assert!(b.total.abs() < 2e-5, "p = {p}: total {}", b.total);
        assert!((b.bulk + 0.25 * b.k_p).abs() < 2e-5);
        assert_eq!(b.boundary_h_term, 0.0);
        assert!((b.total - (b.bulk - b.boundary_h_term + b.boundary_grad_term)).abs() < 1e-15);
        assert!(b.finiteness.holds);
    }
    let c = ctx(RadialProfile::constant_curvature(0.5).unwrap(), 0.0, 2.0);
    assert!(matches!(polarized_mass(&c), Err(Error::Domain(_))));
}

#[test]
fn polarized_positive_under_dec() {
    let lambda = 0.3;
    let prof = RadialProfile::perturbed(lambda, -0.1 * lambda, Shape::Quadratic).unwrap().with_cap(2.0).unwrap();
    let b = polarized_mass(&ctx(prof, lambda, 2.0)).unwrap();
    assert!(b.total >= -1e-6);
    assert!(b.finiteness.second_summand.abs() <= lambda * b.finiteness.bound);
    assert!(b.finiteness.holds);
}

#[test]
fn one_harmonic_closed_form() {
    for &(lambda, m) in &[(3.0, 0.05), (3.0, 0.1), (1.0, 0.3)] {
        let sds = RadialProfile::sds_capped(lambda, m).unwrap();
        let v = one_harmonic_mass_of(&sds, lambda).unwrap();
        assert!((v.closed_form - m).abs() < 1e-9);
        assert!((v.quadrature - v.closed_form).abs() < 1e-10);
    }
    let ds = one_harmonic_mass(3.0, 0.0).unwrap();
    assert!(ds.closed_form.abs() < 1e-15 && ds.quadrature.abs() < 1e-10);
    let r_max: f64 = 0.7;
    let v = one_harmonic_mass(3.0, 2.0 * r_max.ln()).unwrap();
    assert!((v.closed_form - r_max / 2.0 * (1.0 - r_max * r_max)).abs() < 1e-14);
    assert!(v.closed_form > 0.0);
    assert!(one_harmonic_mass(-1.0, 0.0).is_err());
}

#[test]
fn formal_limit_on_de_sitter() {
    let ds = RadialProfile::de_sitter(0.3).unwrap();
    let rep = formal_limit_experiment(&ds, 0.3, 1.0, &[1.5, 1.2]).unwrap();
    assert!(rep.experimental && rep.caveat.contains("relabel"));
    for row in &rep.rows {
        assert!(row.mass.abs() < 1e-6 && row.hawking.abs() < 1e-12);
    }
}
