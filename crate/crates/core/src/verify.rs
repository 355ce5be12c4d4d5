//! Checks that the closed-form profiles solve the reduced field equation.
//!
//! The static equation for the ansatz reads
//!
//! ```text
//! d/d eta ln( sigma^(2/3) f f' / (1+f^2)^2 )
//!     = -(2 m^2 sinh^2 - n^2) / (m^2 sinh^2 + n^2) * cosh / sinh
//! ```
//!
//! and has the first integral
//! `sigma^(2/3) f f' / (1+f^2)^2 = (k1/|m|^3) sinh / ((n^2-m^2)/m^2 + cosh^2)^(3/2)`.
//! The left-hand side is differentiated analytically; the log form is
//! singular at zeros and poles of `f`, so those are cut out by windows.

use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};
use crate::geometry::DEFAULT_ETA_MAX;
use crate::profile::{soliton_positions, SolitonConfig, WindingPhase};

/// Default half-width of the windows cut around zeros and poles of `f`.
pub const DEFAULT_WINDOW: f64 = 1e-3;

/// `f`, `f'` and `f''` at one point of a (possibly non-exact) profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub f: f64,
    pub f_prime: f64,
    pub f_second: f64,
}

impl ProfileSample {
    /// Sample of the exact profile `f = tan g`; `None` at a pole.
    pub fn exact(phase: &WindingPhase, eta: f64) -> Option<Self> {
        let f = phase.profile(eta).finite()?;
        let gp = phase.derivative(eta);
        let gpp = phase.second_derivative(eta);
        let fp = (1.0 + f * f) * gp;
        Some(ProfileSample {
            f,
            f_prime: fp,
            f_second: 2.0 * f * fp * gp + (1.0 + f * f) * gpp,
        })
    }

    pub fn scaled(self, factor: f64) -> Self {
        ProfileSample {
            f: self.f * factor,
            f_prime: self.f_prime * factor,
            f_second: self.f_second * factor,
        }
    }
}

/// `n^3 = (f^2-1)/(f^2+1)` together with `1 - n3` and `1 + n3` formed without
/// cancellation.
fn n3_parts(f: f64) -> (f64, f64, f64) {
    let d = 1.0 + f * f;
    ((f * f - 1.0) / d, 2.0 / d, 2.0 * f * f / d)
}

/// Left-hand side of the field equation for an arbitrary profile sample.
///
/// `ln F` with `F = sigma^(2/3) f / (1+f^2)^2` is differentiated by the chain
/// rule through `n^3(f)`; `f''/f'` accounts for the `f'` factor.
pub fn equation_lhs(sample: &ProfileSample) -> f64 {
    let ProfileSample { f, f_prime, f_second } = *sample;
    let (n3, one_minus, one_plus) = n3_parts(f);
    let d = 1.0 + f * f;
    let dn3_df = 4.0 * f / (d * d);
    // ln sigma^(2/3) = -(1/2) ln(1 - n3^2)
    let dln_sigma = n3 * dn3_df / (one_minus * one_plus);
    let dln_f = dln_sigma + 1.0 / f - 4.0 * f / d;
    dln_f * f_prime + f_second / f_prime
}

/// Right-hand side `-(2 m^2 s^2 - n^2)/(m^2 s^2 + n^2) cosh/s`.
pub fn equation_rhs(eta: f64, m_abs: f64, n_abs: f64) -> f64 {
    let s = eta.sinh();
    let ms2 = m_abs * m_abs * s * s;
    let n2 = n_abs * n_abs;
    -(2.0 * ms2 - n2) / (ms2 + n2) * (eta.cosh() / s)
}

pub fn residual_of_sample(eta: f64, m_abs: f64, n_abs: f64, sample: &ProfileSample) -> f64 {
    equation_lhs(sample) - equation_rhs(eta, m_abs, n_abs)
}

fn special_points(cfg: &SolitonConfig) -> Result<Vec<f64>> {
    let pos = soliton_positions(cfg)?;
    let mut pts: Vec<f64> = pos.zeros.iter().chain(pos.poles.iter()).copied().collect();
    pts.sort_by(f64::total_cmp);
    Ok(pts)
}

fn inside_window(eta: f64, points: &[f64], window: f64) -> bool {
    points.iter().any(|&p| (eta - p).abs() < window)
}

/// Field-equation residual of the exact profile at `eta`.
pub fn ode_residual(eta: f64, cfg: &SolitonConfig, window: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::Domain("residual is evaluated for 0 < eta < inf"));
    }
    if inside_window(eta, &special_points(cfg)?, window) {
        return Err(Error::Domain("eta lies inside an exclusion window"));
    }
    residual_at(eta, cfg)
}

fn residual_at(eta: f64, cfg: &SolitonConfig) -> Result<f64> {
    let phase = cfg.phase();
    let sample = ProfileSample::exact(&phase, eta).ok_or(Error::Domain("f has a pole at eta"))?;
    Ok(residual_of_sample(
        eta,
        f64::from(cfg.m().unsigned_abs()),
        f64::from(cfg.n().unsigned_abs()),
        &sample,
    ))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ResidualReport {
    pub max_abs_residual: f64,
    pub eta_grid: Vec<f64>,
    pub excluded_windows: Vec<(f64, f64)>,
}

/// Residual over a uniform grid of `samples` points in `(0, eta_max]`,
/// skipping the windows around zeros and poles of `f`.
pub fn residual_report(cfg: &SolitonConfig, samples: usize, eta_max: f64, window: f64) -> Result<ResidualReport> {
    let points = special_points(cfg)?;
    let excluded_windows: Vec<(f64, f64)> = points
        .iter()
        .map(|&p| ((p - window).max(0.0), p + window))
        .collect();
    let mut excluded_windows = excluded_windows;
    let phase = cfg.phase();
    let mut eta_grid = Vec::with_capacity(samples);
    let mut max_abs_residual: f64 = 0.0;
    let mut ring_window = false;
    for i in 1..=samples {
        let eta = eta_max * i as f64 / samples as f64;
        if inside_window(eta, &points, window) {
            continue;
        }
        // charged family: the pole at the focal ring is numerically reached
        // at large finite eta
        if phase.profile(eta).is_pole() {
            if !ring_window {
                excluded_windows.push((eta, f64::INFINITY));
                ring_window = true;
            }
            continue;
        }
        let r = residual_at(eta, cfg)?;
        max_abs_residual = max_abs_residual.max(r.abs());
        eta_grid.push(eta);
    }
    Ok(ResidualReport {
        max_abs_residual,
        eta_grid,
        excluded_windows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FirstIntegralReport {
    pub k1: f64,
    pub k1_stddev: f64,
    pub k2: f64,
    pub samples: usize,
}

impl FirstIntegralReport {
    pub fn relative_spread(&self) -> f64 {
        self.k1_stddev / self.k1.abs()
    }

    pub fn is_constant(&self, rel_tol: f64) -> bool {
        self.relative_spread() < rel_tol
    }
}

/// `k1 = (pi/4) N |m||n| (|m|+|n|)`, the value the exact profiles give.
pub fn expected_k1(cfg: &SolitonConfig) -> f64 {
    let m = f64::from(cfg.m().unsigned_abs());
    let n = f64::from(cfg.n().unsigned_abs());
    0.25 * PI * f64::from(cfg.half_turns()) * m * n * (m + n)
}

/// `k2 = -pi N |m| / (|m| - |n|)`.
pub fn expected_k2(cfg: &SolitonConfig) -> f64 {
    let m = f64::from(cfg.m().unsigned_abs());
    let n = f64::from(cfg.n().unsigned_abs());
    -PI * f64::from(cfg.half_turns()) * m / (m - n)
}

/// Extracts `k1` from the first integral and `k2` from its integrated form
/// `arctan f = -2 k1 h / (|m|(m^2-n^2)) - k2/2`, using the continuous branch
/// `g` of `arctan f`.
///
/// `sigma^(2/3)` is taken on the branch continued along the solution,
/// `(1+f^2)/(2f)`, so `k1` keeps its sign where `f < 0`.
pub fn first_integral(cfg: &SolitonConfig, eta_samples: &[f64]) -> Result<FirstIntegralReport> {
    if eta_samples.is_empty() {
        return Err(Error::InvalidConfig("no samples"));
    }
    if cfg.is_vacuum() {
        return Err(Error::Domain("the vacuum has no first integral to check"));
    }
    let phase = cfg.phase();
    let m = f64::from(cfg.m().unsigned_abs());
    let n = f64::from(cfg.n().unsigned_abs());
    let mut k1s = Vec::with_capacity(eta_samples.len());
    let mut k2s = Vec::with_capacity(eta_samples.len());
    for &eta in eta_samples {
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::Domain("first integral samples need eta > 0"));
        }
        let sample = ProfileSample::exact(&phase, eta).ok_or(Error::Domain("sample sits on a pole of f"))?;
        let f = sample.f;
        if f == 0.0 {
            return Err(Error::Domain("sample sits on a zero of f"));
        }
        let sigma23 = (1.0 + f * f) / (2.0 * f);
        let lhs = sigma23 * f * sample.f_prime / ((1.0 + f * f) * (1.0 + f * f));
        let s = eta.sinh();
        let c = eta.cosh();
        let base = (n * n - m * m) / (m * m) + c * c;
        let k1 = lhs * m.powi(3) * base.powf(1.5) / s;
        k1s.push(k1);
        let k2 = -2.0 * (phase.value(eta) + 2.0 * k1 * phase.bracket(eta) / (m * (m * m - n * n)));
        k2s.push(k2);
    }
    let count = k1s.len() as f64;
    let mean = k1s.iter().sum::<f64>() / count;
    let var = k1s.iter().map(|k| (k - mean) * (k - mean)).sum::<f64>() / count;
    Ok(FirstIntegralReport {
        k1: mean,
        k1_stddev: var.sqrt(),
        k2: k2s.iter().sum::<f64>() / count,
        samples: k1s.len(),
    })
}

/// `count` sample points spread uniformly in `t = tanh(eta/2)` over
/// `(0, eta_max]`, nudged out of the exclusion windows.
pub fn default_samples(cfg: &SolitonConfig, count: usize, eta_max: f64, window: f64) -> Result<Vec<f64>> {
    let points = special_points(cfg)?;
    let phase = cfg.phase();
    let t_max = (0.5 * eta_max).tanh();
    let mut out = Vec::with_capacity(count);
    for i in 1..=count {
        let t = t_max * i as f64 / count as f64;
        let mut eta = 2.0 * t.atanh();
        // the outermost samples of a charged profile can land on the pole
        // at the focal ring
        while phase.profile(eta).is_pole() {
            eta *= 0.95;
        }
        if let Some(&p) = points.iter().find(|&&p| (eta - p).abs() < window) {
            eta = if eta >= p || p - 2.0 * window <= 0.0 { p + 2.0 * window } else { p - 2.0 * window };
        }
        out.push(eta);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryCheck {
    pub n3_at_origin: f64,
    pub n3_at_eta_max: f64,
    pub expected_at_origin: f64,
    pub expected_at_eta_max: f64,
    pub passed: bool,
}

pub const BOUNDARY_TOL: f64 = 1e-9;

/// `n^3(0) = -1` and `n^3(eta_max) = +1` (charged) or `-1` (neutral).
pub fn boundary_check(cfg: &SolitonConfig, eta_max: f64) -> BoundaryCheck {
    boundary_check_phase(&cfg.phase(), cfg.family().is_charged(), eta_max)
}

/// Boundary check for an arbitrary winding phase, e.g. one with a
/// non-integer number of half turns.
pub fn boundary_check_phase(phase: &WindingPhase, charged: bool, eta_max: f64) -> BoundaryCheck {
    let origin = phase.n3(0.0);
    let far = phase.n3(eta_max);
    let expected_far = if charged { 1.0 } else { -1.0 };
    BoundaryCheck {
        n3_at_origin: origin,
        n3_at_eta_max: far,
        expected_at_origin: -1.0,
        expected_at_eta_max: expected_far,
        passed: (origin + 1.0).abs() <= BOUNDARY_TOL && (far - expected_far).abs() <= BOUNDARY_TOL,
    }
}

/// [`boundary_check`] at the default `eta_max`.
pub fn boundary_check_default(cfg: &SolitonConfig) -> BoundaryCheck {
    boundary_check(cfg, DEFAULT_ETA_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn residual_examples() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        let r = ode_residual(1.0, &c, DEFAULT_WINDOW).unwrap();
        assert!(r.abs() < 1e-8, "{r}");

        let exact = ProfileSample::exact(&c.phase(), 1.0).unwrap();
        let perturbed = residual_of_sample(1.0, 2.0, 1.0, &exact.scaled(1.01));
        assert!(perturbed.abs() > 1e-3, "{perturbed}");
    }

    #[test]
    fn residual_rejects_windows() {
        let c = SolitonConfig::charged(2, 1, 1).unwrap();
        let pole = (11f64.sqrt() / 8.0).asinh();
        assert!(ode_residual(pole + 1e-4, &c, DEFAULT_WINDOW).is_err());
        assert!(ode_residual(pole + 1e-2, &c, DEFAULT_WINDOW).is_ok());
        assert!(ode_residual(0.0, &c, DEFAULT_WINDOW).is_err());
    }

    #[test]
    fn first_integral_values() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        let samples = default_samples(&c, 50, 12.0, DEFAULT_WINDOW).unwrap();
        let r = first_integral(&c, &samples).unwrap();
        assert_eq!(r.samples, 50);
        assert!(r.is_constant(1e-8), "{}", r.relative_spread());
        assert_relative_eq!(r.k1, expected_k1(&c), max_relative = 1e-10);
        assert_relative_eq!(r.k2, expected_k2(&c), max_relative = 1e-10);
    }

    #[test]
    fn first_integral_rejects_vacuum_and_poles() {
        let v = SolitonConfig::neutral(2, 1, 0).unwrap();
        assert!(first_integral(&v, &[1.0]).is_err());
        let c = SolitonConfig::charged(2, 1, 1).unwrap();
        assert!(first_integral(&c, &[(11f64.sqrt() / 8.0).asinh()]).is_err());
        assert!(first_integral(&c, &[]).is_err());
    }

    #[test]
    fn boundary_checks() {
        assert!(boundary_check_default(&SolitonConfig::charged(3, 1, 2).unwrap()).passed);
        assert!(boundary_check_default(&SolitonConfig::neutral(3, 1, 2).unwrap()).passed);
        let broken = WindingPhase::new(2.0, 1.0, 1.3).unwrap();
        let r = boundary_check_phase(&broken, true, 12.0);
        assert!(!r.passed);
        assert_eq!(r.n3_at_origin, -1.0);
    }

    #[test]
    fn sample_nudging_keeps_out_of_windows() {
        let c = SolitonConfig::charged(1, 3, 4).unwrap();
        let pts = special_points(&c).unwrap();
        for eta in default_samples(&c, 400, 12.0, 1e-2).unwrap() {
            assert!(!inside_window(eta, &pts, 1e-2));
        }
    }

    #[test]
    fn lhs_identity_for_exact_profile() {
        // for f = tan g the left-hand side collapses to g''/g'
        let c = SolitonConfig::charged(3, 2, 1).unwrap();
        let phase = c.phase();
        for eta in [0.2, 0.9, 2.5] {
            let s = ProfileSample::exact(&phase, eta).unwrap();
            let expected = phase.second_derivative(eta) / phase.derivative(eta);
            assert_relative_eq!(equation_lhs(&s), expected, epsilon = 1e-9, max_relative = 1e-9);
        }
    }
}
