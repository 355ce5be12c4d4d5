//! Hopf index of the nested solutions.
//!
//! The unit field is written as `n_i = Z^dagger sigma_i Z` with
//! `Z = (Phi1 + i Phi2, Phi3 + i Phi4)`, the Abelian potential is
//! `A_i = (i/2)(Z^dagger d_i Z - d_i Z^dagger Z)` and the charge is
//! `Q = (1/4pi^2) int A.B d^3x` with `B = curl A`.
//!
//! For the ansatz the coordinate components are `A_eta = 0`,
//! `A_xi = -m S`, `A_phi = n (1 - S)` with `S = sin^2 g`. That potential is
//! singular on the axis (where the `phi` circle shrinks) and, for the charged
//! family, on the focal ring (where the `xi` circle shrinks). The charge is
//! computed in the regular gauge
//!
//! ```text
//! A_xi = m (S_inf - S),   A_phi = -n S,   S_inf = sin^2(N pi/2)
//! ```
//!
//! which differs from the above by the gradient of `m S_inf xi - n phi`.
//! In it `A.B h_eta h_xi h_phi = m n S_inf S'(eta)` and `Q = m n S_inf`.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    cartesian_to_toroidal, scale_factors, CartesianPoint, ScaleFactors, ToroidalPoint, UnitVector3,
};
use crate::profile::{soliton_positions, BoundaryKind, ProfileValue, SolitonConfig, SolitonPositions};

/// Handedness of `(e_eta, e_xi, e_phi)`: `+1`, the frame is right-handed.
/// Signed charges in this crate follow that orientation.
pub const ORIENTATION: f64 = 1.0;

/// Default `(N_eta, N_xi)` resolution of [`hopf_index_numeric`].
pub const DEFAULT_GRID: HopfGrid = HopfGrid {
    n_eta: 512,
    n_xi: 512,
};

const MIN_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PhiQuadruple {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
}

impl PhiQuadruple {
    pub fn norm_sqr(&self) -> f64 {
        self.phi1 * self.phi1 + self.phi2 * self.phi2 + self.phi3 * self.phi3 + self.phi4 * self.phi4
    }

    /// `(Phi1^2 + Phi2^2)^2 - (Phi3^2 + Phi4^2)^2`, the boundary term whose
    /// differences give the partial charges.
    pub fn boundary_term(&self) -> f64 {
        let upper = self.phi1 * self.phi1 + self.phi2 * self.phi2;
        let lower = self.phi3 * self.phi3 + self.phi4 * self.phi4;
        upper * upper - lower * lower
    }

    pub fn spinor(&self) -> SpinorZ {
        SpinorZ {
            z1: Complex64::new(self.phi1, self.phi2),
            z2: Complex64::new(self.phi3, self.phi4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorZ {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl SpinorZ {
    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// `n_i = Z^dagger sigma_i Z`.
    ///
    /// Note `n1 + i n2 = 2 conj(z1) z2`: this is the stereographic field of
    /// `conj(u)`, the mirror image of the ansatz field across the `n1 n3`
    /// plane.
    pub fn unit_vector(&self) -> UnitVector3 {
        let w = self.z1.conj() * self.z2;
        UnitVector3 {
            n1: 2.0 * w.re,
            n2: 2.0 * w.im,
            n3: self.z1.norm_sqr() - self.z2.norm_sqr(),
        }
    }
}

/// `(Phi1, Phi2) = f/sqrt(f^2+1) (cos m xi, sin m xi)`,
/// `(Phi3, Phi4) = 1/sqrt(f^2+1) (cos n phi, -sin n phi)`; at a pole of `f`
/// the limit `f -> +inf` is taken.
pub fn phi_quadruple(p: &ToroidalPoint, cfg: &SolitonConfig) -> PhiQuadruple {
    let (upper, lower) = match cfg.phase().profile(p.eta()) {
        ProfileValue::Finite(f) => {
            let r = (1.0 + f * f).sqrt();
            (f / r, 1.0 / r)
        }
        ProfileValue::Pole => (1.0, 0.0),
    };
    let mx = f64::from(cfg.m()) * p.xi();
    let nf = f64::from(cfg.n()) * p.phi();
    PhiQuadruple {
        phi1: upper * mx.cos(),
        phi2: upper * mx.sin(),
        phi3: lower * nf.cos(),
        phi4: -lower * nf.sin(),
    }
}

pub fn spinor_z(p: &ToroidalPoint, cfg: &SolitonConfig) -> SpinorZ {
    phi_quadruple(p, cfg).spinor()
}

/// Components in the orthonormal frame `(e_eta, e_xi, e_phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FrameVector {
    pub eta: f64,
    pub xi: f64,
    pub phi: f64,
}

impl FrameVector {
    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.eta * other.eta + self.xi * other.xi + self.phi * other.phi
    }

    pub fn add(&self, other: &FrameVector) -> FrameVector {
        FrameVector {
            eta: self.eta + other.eta,
            xi: self.xi + other.xi,
            phi: self.phi + other.phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GaugeField {
    pub a: FrameVector,
    pub b: FrameVector,
}

fn frame(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<ScaleFactors> {
    if p.eta().is_nan() || p.eta() <= 0.0 {
        return Err(Error::Domain("the gauge field is evaluated for eta > 0"));
    }
    scale_factors(p, cfg.scale())
}

/// `sin^2(N pi/2)`: 1 when the field ends at the north pole, 0 otherwise.
fn s_infinity(cfg: &SolitonConfig) -> f64 {
    if cfg.half_turns() % 2 == 1 {
        1.0
    } else {
        0.0
    }
}

/// `S = sin^2 g = f^2/(1+f^2)` and `dS/d eta = sin(2g) g'`.
fn s_and_derivative(eta: f64, cfg: &SolitonConfig) -> (f64, f64) {
    let phase = cfg.phase();
    let g = phase.value(eta);
    let s = g.sin();
    (s * s, (2.0 * g).sin() * phase.derivative(eta))
}

/// The potential exactly as built from `Z`: coordinate components
/// `(0, -m S, n (1 - S))`, returned in the orthonormal frame. Singular on the
/// axis.
pub fn abelian_potential_raw(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<FrameVector> {
    let h = frame(p, cfg)?;
    let (s, _) = s_and_derivative(p.eta(), cfg);
    Ok(FrameVector {
        eta: 0.0,
        xi: -f64::from(cfg.m()) * s / h.h_xi,
        phi: f64::from(cfg.n()) * (1.0 - s) / h.h_phi,
    })
}

/// Regular-gauge potential in the orthonormal frame.
pub fn abelian_potential(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<FrameVector> {
    let h = frame(p, cfg)?;
    let (s, _) = s_and_derivative(p.eta(), cfg);
    Ok(FrameVector {
        eta: 0.0,
        xi: f64::from(cfg.m()) * (s_infinity(cfg) - s) / h.h_xi,
        phi: -f64::from(cfg.n()) * s / h.h_phi,
    })
}

/// `B = curl A`; gauge independent. `B_eta = 0`,
/// `B_xi = n S' / (h_phi h_eta)`, `B_phi = -m S' / (h_eta h_xi)`.
pub fn magnetic_field(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<FrameVector> {
    let h = frame(p, cfg)?;
    let (_, ds) = s_and_derivative(p.eta(), cfg);
    Ok(FrameVector {
        eta: 0.0,
        xi: ORIENTATION * f64::from(cfg.n()) * ds / (h.h_phi * h.h_eta),
        phi: -ORIENTATION * f64::from(cfg.m()) * ds / (h.h_eta * h.h_xi),
    })
}

pub fn gauge_field(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<GaugeField> {
    Ok(GaugeField {
        a: abelian_potential(p, cfg)?,
        b: magnetic_field(p, cfg)?,
    })
}

/// `A.B` per unit volume in the regular gauge.
pub fn hopf_density(p: &ToroidalPoint, cfg: &SolitonConfig) -> Result<f64> {
    let field = gauge_field(p, cfg)?;
    Ok(field.a.dot(&field.b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HopfGrid {
    pub n_eta: usize,
    pub n_xi: usize,
}

impl HopfGrid {
    pub fn new(n_eta: usize, n_xi: usize) -> Result<Self> {
        if n_eta < MIN_GRID || n_xi < MIN_GRID {
            return Err(Error::InvalidConfig("Hopf grid needs at least 64 x 64 points"));
        }
        Ok(HopfGrid { n_eta, n_xi })
    }

    fn halved(self) -> HopfGrid {
        HopfGrid {
            n_eta: self.n_eta / 2,
            n_xi: self.n_xi / 2,
        }
    }
}

/// Numeric charge with a Richardson comparison against the half-resolution
/// grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HopfNumeric {
    pub value: f64,
    pub coarse_value: f64,
    /// `|Q_fine - Q_coarse| / 3`, the second-order Richardson estimate.
    pub error_estimate: f64,
    /// Richardson-extrapolated charge.
    pub extrapolated: f64,
}

/// Charge from the volume integral on a composite (midpoint in
/// `t = tanh(eta/2)`, periodic trapezoid in `xi`) grid. `A.B` does not depend
/// on `phi`, which contributes a factor `2 pi`.
pub fn hopf_index_numeric(cfg: &SolitonConfig, grid: HopfGrid) -> Result<HopfNumeric> {
    hopf_index_numeric_gauged(cfg, grid, |_| FrameVector::default())
}

/// As [`hopf_index_numeric`] with `grad chi` (orthonormal components, supplied
/// by the caller) added to the potential.
pub fn hopf_index_numeric_gauged<G>(cfg: &SolitonConfig, grid: HopfGrid, gradient: G) -> Result<HopfNumeric>
where
    G: Fn(&ToroidalPoint) -> FrameVector,
{
    let grid = HopfGrid::new(grid.n_eta, grid.n_xi)?;
    let fine = integrate_charge(cfg, grid, &gradient)?;
    let coarse = integrate_charge(cfg, grid.halved(), &gradient)?;
    Ok(HopfNumeric {
        value: fine,
        coarse_value: coarse,
        error_estimate: (fine - coarse).abs() / 3.0,
        extrapolated: fine + (fine - coarse) / 3.0,
    })
}

/// Single-level charge integral, exposed for convergence studies.
pub fn integrate_charge<G>(cfg: &SolitonConfig, grid: HopfGrid, gradient: &G) -> Result<f64>
where
    G: Fn(&ToroidalPoint) -> FrameVector,
{
    if grid.n_eta == 0 || grid.n_xi == 0 {
        return Err(Error::InvalidConfig("empty grid"));
    }
    let dt = 1.0 / grid.n_eta as f64;
    let dxi = TAU / grid.n_xi as f64;
    let mut total = 0.0;
    for i in 0..grid.n_eta {
        let t = (i as f64 + 0.5) * dt;
        let eta = 2.0 * t.atanh();
        let jac = 2.0 / ((1.0 - t) * (1.0 + t));
        let mut row = 0.0;
        for j in 0..grid.n_xi {
            let p = ToroidalPoint::new(eta, j as f64 * dxi, 0.0)?;
            let h = scale_factors(&p, cfg.scale())?;
            let field = gauge_field(&p, cfg)?;
            let a = field.a.add(&gradient(&p));
            row += a.dot(&field.b) * h.volume();
        }
        total += row * jac;
    }
    Ok(total * dt * dxi * TAU / (4.0 * PI * PI))
}

/// Per-soliton charges from the boundary term between consecutive zeros and
/// poles of `f`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryCharge {
    pub total: f64,
    pub per_soliton: Vec<f64>,
    pub positions: SolitonPositions,
}

/// `Q_i = (mn/2) [(Phi1^2+Phi2^2)^2 - (Phi3^2+Phi4^2)^2]` between boundary
/// points `i` and `i+1`. The boundary term is `-1` at a zero of `f` and `+1`
/// at a pole, so every `Q_i = (-1)^i mn` exactly.
pub fn hopf_index_boundary(cfg: &SolitonConfig) -> Result<BoundaryCharge> {
    let positions = soliton_positions(cfg)?;
    let mn = f64::from(cfg.m()) * f64::from(cfg.n());
    let terms: Vec<f64> = positions
        .boundaries()
        .iter()
        .map(|b| match b.kind {
            BoundaryKind::Zero => PhiQuadruple {
                phi1: 0.0,
                phi2: 0.0,
                phi3: 1.0,
                phi4: 0.0,
            },
            BoundaryKind::Pole => PhiQuadruple {
                phi1: 1.0,
                phi2: 0.0,
                phi3: 0.0,
                phi4: 0.0,
            },
        })
        .map(|phi| phi.boundary_term())
        .collect();
    let per_soliton: Vec<f64> = terms.windows(2).map(|w| 0.5 * mn * (w[1] - w[0])).collect();
    let total = per_soliton.iter().sum();
    Ok(BoundaryCharge {
        total,
        per_soliton,
        positions,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HopfReport {
    pub q_numeric: f64,
    pub q_numeric_error: f64,
    pub q_boundary: f64,
    pub per_soliton: Vec<f64>,
    pub grid: HopfGrid,
    pub config: SolitonConfig,
}

impl HopfReport {
    /// `|q_numeric - q_boundary|` against `max(rel |q_boundary|, abs)`.
    pub fn is_consistent(&self, rel: f64, abs: f64) -> bool {
        (self.q_numeric - ORIENTATION * self.q_boundary).abs() <= (rel * self.q_boundary.abs()).max(abs)
    }
}

pub fn hopf_report(cfg: &SolitonConfig, grid: HopfGrid) -> Result<HopfReport> {
    let numeric = hopf_index_numeric(cfg, grid)?;
    let boundary = hopf_index_boundary(cfg)?;
    Ok(HopfReport {
        q_numeric: numeric.value,
        q_numeric_error: numeric.error_estimate,
        q_boundary: boundary.total,
        per_soliton: boundary.per_soliton,
        grid,
        config: *cfg,
    })
}

/// Flux of `B` through the half plane `phi = const` (the meridian cross
/// section of the tori), `-2 pi m S_inf` in closed form.
pub fn meridian_flux(cfg: &SolitonConfig, n_eta: usize, n_xi: usize) -> Result<f64> {
    let dt = 1.0 / n_eta as f64;
    let dxi = TAU / n_xi as f64;
    let mut total = 0.0;
    for i in 0..n_eta {
        let t = (i as f64 + 0.5) * dt;
        let eta = 2.0 * t.atanh();
        let jac = 2.0 / ((1.0 - t) * (1.0 + t));
        for j in 0..n_xi {
            let p = ToroidalPoint::new(eta, j as f64 * dxi, 0.0)?;
            let h = scale_factors(&p, cfg.scale())?;
            total += magnetic_field(&p, cfg)?.phi * h.h_eta * h.h_xi * jac;
        }
    }
    Ok(total * dt * dxi)
}

/// Flux of `B` through a `xi = const` surface, `2 pi n S_inf` in closed form.
pub fn xi_surface_flux(cfg: &SolitonConfig, xi: f64, n_eta: usize, n_phi: usize) -> Result<f64> {
    let dt = 1.0 / n_eta as f64;
    let dphi = TAU / n_phi as f64;
    let mut total = 0.0;
    for i in 0..n_eta {
        let t = (i as f64 + 0.5) * dt;
        let eta = 2.0 * t.atanh();
        let jac = 2.0 / ((1.0 - t) * (1.0 + t));
        for j in 0..n_phi {
            let p = ToroidalPoint::new(eta, xi, j as f64 * dphi)?;
            let h = scale_factors(&p, cfg.scale())?;
            total += magnetic_field(&p, cfg)?.xi * h.h_eta * h.h_phi * jac;
        }
    }
    Ok(total * dt * dphi)
}

/// Slow cross-check: `(1/4pi^2) sum A.B dV` over cell centres of the cube
/// `[-half_width, half_width]^3` with `cells^3` cells. Misses the charge
/// outside the box.
pub fn hopf_index_cartesian(cfg: &SolitonConfig, half_width: f64, cells: usize, eta_max: f64) -> Result<f64> {
    if half_width.is_nan() || half_width <= 0.0 || cells == 0 {
        return Err(Error::InvalidConfig("box must have positive size"));
    }
    let h = 2.0 * half_width / cells as f64;
    let mut total = 0.0;
    for i in 0..cells {
        let x = -half_width + (i as f64 + 0.5) * h;
        for j in 0..cells {
            let y = -half_width + (j as f64 + 0.5) * h;
            for k in 0..cells {
                let z = -half_width + (k as f64 + 0.5) * h;
                let inv = cartesian_to_toroidal(&CartesianPoint::new(x, y, z), cfg.scale(), eta_max);
                if inv.point.eta() > 0.0 {
                    total += hopf_density(&inv.point, cfg)?;
                }
            }
        }
    }
    Ok(total * h * h * h / (4.0 * PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn phi_examples() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        let q = phi_quadruple(&ToroidalPoint::new(0.0, 0.0, 0.0).unwrap(), &c);
        assert_eq!(q, PhiQuadruple { phi1: 0.0, phi2: 0.0, phi3: 1.0, phi4: 0.0 });

        let c1 = SolitonConfig::charged(2, 1, 1).unwrap();
        let pole = (11f64.sqrt() / 8.0).asinh();
        let xi = 0.7;
        let q = phi_quadruple(&ToroidalPoint::new(pole, xi, 1.3).unwrap(), &c1);
        assert_relative_eq!(q.phi1, (2.0 * xi).cos());
        assert_relative_eq!(q.phi2, (2.0 * xi).sin());
        assert_eq!((q.phi3, q.phi4), (0.0, 0.0));
    }

    #[test]
    fn boundary_charges() {
        let b = hopf_index_boundary(&SolitonConfig::charged(2, 1, 0).unwrap()).unwrap();
        assert_eq!(b.per_soliton, [2.0]);
        assert_eq!(b.total, 2.0);

        let b = hopf_index_boundary(&SolitonConfig::charged(2, 1, 1).unwrap()).unwrap();
        assert_eq!(b.per_soliton, [2.0, -2.0, 2.0]);
        assert_eq!(b.total, 2.0);

        let b = hopf_index_boundary(&SolitonConfig::neutral(2, 1, 1).unwrap()).unwrap();
        assert_eq!(b.per_soliton, [2.0, -2.0]);
        assert_eq!(b.total, 0.0);

        let b = hopf_index_boundary(&SolitonConfig::charged(-3, 2, 2).unwrap()).unwrap();
        assert_eq!(b.per_soliton, [-6.0, 6.0, -6.0, 6.0, -6.0]);

        let v = hopf_index_boundary(&SolitonConfig::neutral(2, 1, 0).unwrap()).unwrap();
        assert!(v.per_soliton.is_empty());
        assert_eq!(v.total, 0.0);
    }

    #[test]
    fn grid_minimum() {
        assert!(HopfGrid::new(32, 64).is_err());
        assert!(HopfGrid::new(64, 64).is_ok());
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        assert!(hopf_index_numeric(&c, HopfGrid { n_eta: 16, n_xi: 128 }).is_err());
    }

    #[test]
    fn field_domain() {
        let c = SolitonConfig::charged(2, 1, 0).unwrap();
        let axis = ToroidalPoint::new(0.0, 1.0, 0.0).unwrap();
        assert!(abelian_potential(&axis, &c).is_err());
        assert!(magnetic_field(&axis, &c).is_err());
    }

    #[test]
    fn raw_and_regular_gauges_differ_by_pure_gradient() {
        let c = SolitonConfig::charged(3, -2, 1).unwrap();
        let p = ToroidalPoint::new(0.8, 2.0, 0.4).unwrap();
        let h = scale_factors(&p, c.scale()).unwrap();
        let raw = abelian_potential_raw(&p, &c).unwrap();
        let reg = abelian_potential(&p, &c).unwrap();
        // grad(m xi - n phi) for S_inf = 1
        assert_relative_eq!(reg.xi - raw.xi, 3.0 / h.h_xi, epsilon = 1e-12);
        assert_relative_eq!(reg.phi - raw.phi, 2.0 / h.h_phi, epsilon = 1e-12);
    }
}
