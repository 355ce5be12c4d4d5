mod common;

use common::{rel_err, runner};
use hopfion_core::profile::WindingPhase;
use hopfion_core::verify::{
    boundary_check, boundary_check_default, boundary_check_phase, default_samples, equation_lhs, expected_k1,
    expected_k2, first_integral, ode_residual, residual_of_sample, residual_report, ProfileSample, DEFAULT_WINDOW,
};
use hopfion_core::{Scale, SolitonConfig};
use proptest::prelude::*;

fn verification_configs() -> Vec<SolitonConfig> {
    vec![
        SolitonConfig::charged(2, 1, 0).unwrap(),
        SolitonConfig::charged(2, 1, 1).unwrap(),
        SolitonConfig::charged(1, 3, 1).unwrap(),
        SolitonConfig::charged(3, 2, 0).unwrap(),
        SolitonConfig::neutral(2, 1, 1).unwrap(),
        SolitonConfig::neutral(2, 1, 2).unwrap(),
        SolitonConfig::charged(2, 1, 2).unwrap(),
        SolitonConfig::neutral(3, 1, 1).unwrap(),
    ]
}

#[test]
fn exact_profiles_solve_the_field_equation() {
    for cfg in verification_configs() {
        let r = residual_report(&cfg, 2000, 12.0, DEFAULT_WINDOW).unwrap();
        assert!(r.max_abs_residual < 1e-7, "{cfg:?}: {}", r.max_abs_residual);
        assert!(r.max_abs_residual.is_finite());
        assert!(r.excluded_windows.len() >= cfg.half_turns() as usize);
        assert!(r.eta_grid.len() > 1500, "{cfg:?}: {}", r.eta_grid.len());
    }
    let r = ode_residual(1.0, &SolitonConfig::charged(2, 1, 0).unwrap(), DEFAULT_WINDOW).unwrap();
    assert!(r.abs() < 1e-8);
}

#[test]
fn perturbed_profile_is_rejected() {
    let cfg = SolitonConfig::charged(2, 1, 0).unwrap();
    let sample = ProfileSample::exact(&cfg.phase(), 1.0).unwrap().scaled(1.01);
    assert!(residual_of_sample(1.0, 2.0, 1.0, &sample).abs() > 1e-3);
    for cfg in verification_configs() {
        let phase = cfg.phase();
        let samples = default_samples(&cfg, 50, 6.0, DEFAULT_WINDOW).unwrap();
        let worst = samples
            .iter()
            .filter_map(|&eta| {
                let s = ProfileSample::exact(&phase, eta)?.scaled(1.01);
                Some(residual_of_sample(eta, f64::from(cfg.m().abs()), f64::from(cfg.n().abs()), &s).abs())
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "{cfg:?}: {worst}");
    }
}

#[test]
fn residual_rejects_points_in_windows() {
    let cfg = SolitonConfig::charged(2, 1, 1).unwrap();
    let pole = (11f64.sqrt() / 8.0).asinh();
    assert!(ode_residual(pole + 1e-4, &cfg, DEFAULT_WINDOW).is_err());
    assert!(ode_residual(pole + 2e-3, &cfg, DEFAULT_WINDOW).is_ok());
    assert!(ode_residual(0.0, &cfg, DEFAULT_WINDOW).is_err());
}

/// `d/d eta ln(sgn(f) f' / (2 (1+f^2)))` by central differences of the
/// profile, against the analytic chain rule.
#[test]
fn lhs_matches_log_derivative() {
    let cfgs = verification_configs();
    let h = 1e-5;
    runner(100)
        .run(&(0usize..8, 0.02f64..6.0), |(i, eta)| {
            let phase = cfgs[i].phase();
            let g = phase.value(eta);
            let quarter = std::f64::consts::FRAC_PI_2;
            prop_assume!((g / quarter - (g / quarter).round()).abs() > 0.05);
            let log_f = |x: f64| {
                let s = ProfileSample::exact(&phase, x).unwrap();
                (s.f_prime / (1.0 + s.f * s.f)).ln()
            };
            let fd = (log_f(eta + h) - log_f(eta - h)) / (2.0 * h);
            let an = equation_lhs(&ProfileSample::exact(&phase, eta).unwrap());
            prop_assert!((fd - an).abs() < 1e-7 * an.abs().max(1.0), "{} {}", fd, an);
            Ok(())
        })
        .unwrap();
}

#[test]
fn first_integral_is_constant() {
    for cfg in verification_configs() {
        let samples = default_samples(&cfg, 50, 12.0, DEFAULT_WINDOW).unwrap();
        assert_eq!(samples.len(), 50);
        let r = first_integral(&cfg, &samples).unwrap();
        assert!(r.is_constant(1e-8), "{cfg:?}: spread {}", r.relative_spread());
        assert!(rel_err(r.k1, expected_k1(&cfg)) < 1e-8, "{cfg:?}: k1 {}", r.k1);
        assert!(rel_err(r.k2, expected_k2(&cfg)) < 1e-8, "{cfg:?}: k2 {}", r.k2);
    }
}

#[test]
fn k1_scales_with_half_turns() {
    let k1 = |cfg: SolitonConfig| {
        let s = default_samples(&cfg, 50, 12.0, DEFAULT_WINDOW).unwrap();
        first_integral(&cfg, &s).unwrap().k1
    };
    let l0 = k1(SolitonConfig::charged(2, 1, 0).unwrap());
    assert!(rel_err(k1(SolitonConfig::charged(2, 1, 1).unwrap()) / l0, 3.0) < 1e-8);
    assert!(rel_err(k1(SolitonConfig::neutral(2, 1, 1).unwrap()) / l0, 2.0) < 1e-8);
    // |m||n|(|m|+|n|) is symmetric under the swap
    assert!(rel_err(k1(SolitonConfig::charged(1, 2, 0).unwrap()), l0) < 1e-8);
}

#[test]
fn first_integral_rejects_bad_samples() {
    let cfg = SolitonConfig::charged(2, 1, 1).unwrap();
    let pole = cfg.phase().solve(std::f64::consts::FRAC_PI_2).unwrap();
    assert!(first_integral(&cfg, &[]).is_err());
    assert!(first_integral(&cfg, &[pole]).is_err());
    assert!(first_integral(&SolitonConfig::neutral(2, 1, 0).unwrap(), &[1.0]).is_err());
}

#[test]
fn boundary_conditions() {
    for cfg in verification_configs() {
        let b = boundary_check_default(&cfg);
        assert!(b.passed, "{cfg:?}: {b:?}");
        assert_eq!(b.expected_at_eta_max, if cfg.family().is_charged() { 1.0 } else { -1.0 });
    }
    let broken = WindingPhase::new(2.0, 1.0, 1.5).unwrap();
    assert!(!boundary_check_phase(&broken, true, 12.0).passed);
    assert!(!boundary_check_phase(&broken, false, 12.0).passed);
}

#[test]
fn verification_ignores_scale() {
    for cfg in verification_configs() {
        let base = residual_report(&cfg, 400, 12.0, DEFAULT_WINDOW).unwrap();
        let samples = default_samples(&cfg, 50, 12.0, DEFAULT_WINDOW).unwrap();
        let k = first_integral(&cfg, &samples).unwrap();
        for a in [0.5, 2.0] {
            let scaled = cfg.with_scale(Scale::new(a).unwrap());
            assert_eq!(residual_report(&scaled, 400, 12.0, DEFAULT_WINDOW).unwrap(), base);
            assert_eq!(first_integral(&scaled, &samples).unwrap(), k);
            assert_eq!(boundary_check(&scaled, 12.0), boundary_check(&cfg, 12.0));
        }
    }
}
