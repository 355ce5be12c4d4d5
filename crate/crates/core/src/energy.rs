//! Static energy of the nested solutions.
//!
//! After the angular integrals the energy is `E = int_0^inf e(eta) d eta`.
//! Substituting `f = tan g` and the dielectric function into the integrand
//! collapses it to
//!
//! ```text
//! e(eta) = (2pi)^2 8 2^(-3/4) sinh(eta) (m^2 + n^2/sinh^2 eta)^(3/4) g'(eta)^(3/2)
//! ```
//!
//! which is free of the `0 * inf` products the `f`-form has at poles of `f`.
//! The `f`-form is kept as [`energy_density_eta_raw`] for cross-checking.

use core::f64::consts::{FRAC_PI_2, PI};


use crate::error::{Error, Result};
use crate::geometry::{scale_factors, ToroidalPoint};
use crate::profile::{ProfileValue, SolitonConfig};
use crate::quad::{integrate, QuadOptions};

/// Default relative tolerance of [`total_energy_quadrature`].
pub const DEFAULT_ENERGY_TOL: f64 = 1e-10;

const TWO_PI_SQ: f64 = 4.0 * PI * PI;

/// Quadrature total over `total_energy_closed`. Derived independently
/// (the reduced integral has an elementary antiderivative); the test suite
/// asserts that the measured ratio is this single constant for every
/// configuration.
pub fn closed_form_ratio() -> f64 {
    FRAC_PI_2.powf(1.5)
}

/// Dielectric function `sigma(n3) = (1 - n3^2)^(-3/4)`.
pub fn dielectric(n3: f64) -> f64 {
    ((1.0 - n3) * (1.0 + n3)).powf(-0.75)
}

/// Same as [`dielectric`] with `1 -+ n3` formed directly from the profile,
/// `1 - n3 = 2/(1+f^2)`, `1 + n3 = 2f^2/(1+f^2)`.
pub fn dielectric_of_profile(f: f64) -> f64 {
    let d = 1.0 + f * f;
    ((2.0 / d) * (2.0 * f * f / d)).powf(-0.75)
}

fn check_open(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("energy density is defined for 0 < eta < inf"))
    }
}

/// Angularly integrated energy density (pole-free reduced form).
pub fn energy_density_eta(eta: f64, cfg: &SolitonConfig) -> Result<f64> {
    check_open(eta)?;
    Ok(reduced_density(eta, cfg))
}

fn reduced_density(eta: f64, cfg: &SolitonConfig) -> f64 {
    let gp = cfg.phase().derivative(eta);
    if gp <= 0.0 {
        return 0.0;
    }
    let m = f64::from(cfg.m());
    let n = f64::from(cfg.n());
    let s = eta.sinh();
    let angular = (m * m + (n / s) * (n / s)).powf(0.75);
    TWO_PI_SQ * 8.0 * 2f64.powf(-0.75) * s * angular * gp.powf(1.5)
}

/// The unreduced integrand
/// `(2pi)^2 8 2^(3/4) sinh / (1+f^2)^3 (m^2 + n^2/sinh^2)^(3/4) f^(3/2) f'^(3/2) sigma(f)`.
/// `None` where `f` has a pole or a zero (the product is indeterminate
/// there). `|f|` stands in for `f` on the branches where `f < 0`.
pub fn energy_density_eta_raw(eta: f64, cfg: &SolitonConfig) -> Result<Option<f64>> {
    check_open(eta)?;
    let phase = cfg.phase();
    let (f, fp) = match (phase.profile(eta), phase.profile_derivative(eta)) {
        (ProfileValue::Finite(f), ProfileValue::Finite(fp)) if f != 0.0 => (f.abs(), fp),
        _ => return Ok(None),
    };
    let m = f64::from(cfg.m());
    let n = f64::from(cfg.n());
    let s = eta.sinh();
    let angular = (m * m + (n / s) * (n / s)).powf(0.75);
    let value = TWO_PI_SQ * 8.0 * 2f64.powf(0.75) * s / (1.0 + f * f).powi(3)
        * angular
        * f.powf(1.5)
        * fp.powf(1.5)
        * dielectric_of_profile(f);
    Ok(Some(value))
}

/// Energy per unit volume at a point, `T_00`. The reduced density is
/// `T_00 h_eta h_xi h_phi` integrated over both angles, and that product
/// does not depend on `xi` or `phi`.
pub fn energy_density_volume(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<f64> {
    let h = scale_factors(p, cfg.scale())?;
    let e = energy_density_eta(p.eta(), cfg)?;
    Ok(e / (TWO_PI_SQ * h.volume()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyQuadrature {
    pub value: f64,
    pub error_estimate: f64,
}

/// `int_0^inf e(eta) d eta` by adaptive Gauss-Kronrod in `t = tanh(eta/2)`.
pub fn total_energy_quadrature(cfg: &SolitonConfig, tol: f64) -> Result<EnergyQuadrature> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidConfig("tolerance must be positive"));
    }
    if cfg.is_vacuum() {
        return Ok(EnergyQuadrature {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let integrand = |t: f64| {
        let eta = 2.0 * t.atanh();
        if eta.is_nan() || eta <= 0.0 || eta.is_infinite() {
            return 0.0;
        }
        reduced_density(eta, cfg) * 2.0 / ((1.0 - t) * (1.0 + t))
    };
    let opts = QuadOptions {
        rel_tol: tol,
        abs_tol: 0.0,
        max_intervals: 4000,
    };
    let r = integrate(integrand, 0.0, 1.0, opts)?;
    Ok(EnergyQuadrature {
        value: r.value,
        error_estimate: r.abs_error,
    })
}

/// `E = (2pi)^2 4 2^(1/4) N^(3/2) sqrt(|m||n|(|m|+|n|))` with
/// `N = 2l+1` or `2k`.
pub fn total_energy_closed(cfg: &SolitonConfig) -> f64 {
    TWO_PI_SQ * 4.0 * 2f64.powf(0.25) * winding_structure(cfg)
}

/// `N^(3/2) sqrt(|m||n|(|m|+|n|))`, the configuration dependence shared by
/// both totals.
pub fn winding_structure(cfg: &SolitonConfig) -> f64 {
    let m = f64::from(cfg.m().unsigned_abs());
    let n = f64::from(cfg.n().unsigned_abs());
    f64::from(cfg.half_turns()).powf(1.5) * (m * n * (m + n)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyReport {
    pub closed_form: f64,
    pub quadrature: f64,
    /// `quadrature / closed_form`; `None` for the vacuum.
    pub ratio: Option<f64>,
    pub abs_error_estimate: f64,
    pub config: SolitonConfig,
}

pub fn energy_report(cfg: &SolitonConfig, tol: f64) -> Result<EnergyReport> {
    let q = total_energy_quadrature(cfg, tol)?;
    let closed = total_energy_closed(cfg);
    Ok(EnergyReport {
        closed_form: closed,
        quadrature: q.value,
        ratio: (closed > 0.0).then(|| q.value / closed),
        abs_error_estimate: q.error_estimate,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_examples() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        let e = total_energy_closed(&c);
        let expected = TWO_PI_SQ * 4.0 * 2f64.powf(0.25) * 6f64.sqrt();
        assert_relative_eq!(e, expected, epsilon = 1e-12);
        assert_relative_eq!(e, 459.98, epsilon = 0.02);

        let k1 = SolitonConfig::neutral(2, 1, 1).unwrap();
        assert_relative_eq!(total_energy_closed(&k1), 2f64.powf(1.5) * e, epsilon = 1e-10);
        assert_relative_eq!(total_energy_closed(&k1), 1300.9, epsilon = 0.2);

        let swapped = SolitonConfig::charged(1, 2, 0).unwrap();
        assert_eq!(total_energy_closed(&swapped), e);
    }

    #[test]
    fn density_domain_and_vacuum() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        assert!(energy_density_eta(0.0, &c).is_err());
        assert!(energy_density_eta(-1.0, &c).is_err());
        let near = energy_density_eta(1e-6, &c).unwrap();
        assert!(near > 0.0 && near < 2e-5 * energy_density_eta(0.1, &c).unwrap());

        let v = SolitonConfig::neutral(2, 1, 0).unwrap();
        for eta in [0.1, 1.0, 5.0] {
            assert_eq!(energy_density_eta(eta, &v).unwrap(), 0.0);
        }
        assert_eq!(total_energy_quadrature(&v, 1e-10).unwrap().value, 0.0);
        assert_eq!(energy_report(&v, 1e-10).unwrap().ratio, None);
    }

    #[test]
    fn density_is_linear_near_axis() {
        let c = SolitonConfig::charged(3, 2, 1).unwrap();
        let a = energy_density_eta(1e-4, &c).unwrap();
        let b = energy_density_eta(2e-4, &c).unwrap();
        assert_relative_eq!(b / a, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        assert!(total_energy_quadrature(&c, 0.0).is_err());
        assert!(total_energy_quadrature(&c, f64::NAN).is_err());
    }

    #[test]
    fn dielectric_forms_agree() {
        for f in [0.1, 0.7, 1.0, 3.0, -2.0] {
            let n3 = (f * f - 1.0) / (f * f + 1.0);
            assert_relative_eq!(dielectric(n3), dielectric_of_profile(f), max_relative = 1e-12);
        }
        assert_eq!(dielectric(0.0), 1.0);
    }
}
