//! Toroidal coordinates and the stereographic map between the complex field
//! `u` and the unit vector field `n`.
//!
//! The coordinates `(eta, xi, phi)` relate to Cartesian space through
//!
//! ```text
//! x = (a/q) sinh(eta) cos(phi)
//! y = (a/q) sinh(eta) sin(phi)
//! z = (a/q) sin(xi),          q = cosh(eta) - cos(xi)
//! ```
//!
//! Surfaces of constant `eta` are nested tori around the focal ring
//! `rho = a, z = 0` (`eta -> inf`); `eta = 0` is the symmetry axis together
//! with spatial infinity. The frame `(e_eta, e_xi, e_phi)` is right-handed.

use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default cap on `eta` for the inverse map and for "at infinity" probes.
pub const DEFAULT_ETA_MAX: f64 = 12.0;

/// Tolerance on `|n| = 1` accepted by [`UnitVector3::new`].
pub const UNIT_NORM_TOL: f64 = 1e-12;

fn wrap_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // `-tiny % TAU + TAU` rounds to TAU itself
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Length scale `a > 0` fixing the size of the toroidal coordinate system.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct Scale(f64);

impl Scale {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Scale(a))
        } else {
            Err(Error::InvalidConfig("scale a must be finite and positive"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Scale {
    fn default() -> Self {
        Scale(1.0)
    }
}

impl TryFrom<f64> for Scale {
    type Error = Error;
    fn try_from(a: f64) -> Result<Self> {
        Scale::new(a)
    }
}

impl From<Scale> for f64 {
    fn from(s: Scale) -> f64 {
        s.0
    }
}

/// A point in toroidal coordinates. Angles are normalized to `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ToroidalPoint {
    eta: f64,
    xi: f64,
    phi: f64,
}

impl ToroidalPoint {
    pub fn new(eta: f64, xi: f64, phi: f64) -> Result<Self> {
        if !(eta.is_finite() && xi.is_finite() && phi.is_finite()) {
            return Err(Error::Domain("toroidal coordinates must be finite"));
        }
        if eta < 0.0 {
            return Err(Error::Domain("eta must be non-negative"));
        }
        Ok(ToroidalPoint {
            eta,
            xi: wrap_angle(xi),
            phi: wrap_angle(phi),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `q = cosh(eta) - cos(xi)`, written to stay accurate when both terms
    /// approach 1.
    pub fn q(&self) -> f64 {
        let sh = (0.5 * self.eta).sinh();
        let s = (0.5 * self.xi).sin();
        2.0 * (sh * sh + s * s)
    }

    fn is_singular(&self) -> bool {
        self.q() <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartesianPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CartesianPoint { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Result of [`cartesian_to_toroidal`]: the point plus a flag telling whether
/// `eta` hit the cap (the point sits on or next to the focal ring).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMap {
    pub point: ToroidalPoint,
    pub saturated: bool,
}

/// Metric scale factors of the toroidal system.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScaleFactors {
    pub h_eta: f64,
    pub h_xi: f64,
    pub h_phi: f64,
}

impl ScaleFactors {
    pub fn volume(&self) -> f64 {
        self.h_eta * self.h_xi * self.h_phi
    }
}

pub fn toroidal_to_cartesian(p: &ToroidalPoint, s: Scale) -> Result<CartesianPoint> {
    if p.is_singular() {
        return Err(Error::Domain("eta = 0, xi = 0 is the point at infinity"));
    }
    let r = s.get() / p.q();
    let rho = r * p.eta.sinh();
    Ok(CartesianPoint {
        x: rho * p.phi.cos(),
        y: rho * p.phi.sin(),
        z: r * p.xi.sin(),
    })
}

/// Inverse of [`toroidal_to_cartesian`]. On the z-axis `phi` is set to 0;
/// `eta` is capped at `eta_max`.
pub fn cartesian_to_toroidal(p: &CartesianPoint, s: Scale, eta_max: f64) -> InverseMap {
    let a = s.get();
    let rho = p.x.hypot(p.y);
    let z = p.z;

    let d_far = (rho + a) * (rho + a) + z * z;
    let d_near = (rho - a) * (rho - a) + z * z;
    let (eta, saturated) = if d_near <= 0.0 {
        (eta_max, true)
    } else {
        let eta = 0.5 * (d_far.ln() - d_near.ln());
        if eta > eta_max {
            (eta_max, true)
        } else {
            (eta.max(0.0), false)
        }
    };

    let xi = (2.0 * a * z).atan2(rho * rho + z * z - a * a);
    let phi = if rho == 0.0 { 0.0 } else { p.y.atan2(p.x) };

    InverseMap {
        point: ToroidalPoint {
            eta,
            xi: wrap_angle(xi),
            phi: wrap_angle(phi),
        },
        saturated,
    }
}

/// `h_eta = h_xi = a/q`, `h_phi = (a/q) sinh(eta)`.
pub fn scale_factors(p: &ToroidalPoint, s: Scale) -> Result<ScaleFactors> {
    if p.is_singular() {
        return Err(Error::Domain("scale factors diverge at eta = 0, xi = 0"));
    }
    let h = s.get() / p.q();
    Ok(ScaleFactors {
        h_eta: h,
        h_xi: h,
        h_phi: h * p.eta.sinh(),
    })
}

/// A point of the target two-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UnitVector3 {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl UnitVector3 {
    pub const NORTH: UnitVector3 = UnitVector3 {
        n1: 0.0,
        n2: 0.0,
        n3: 1.0,
    };
    pub const SOUTH: UnitVector3 = UnitVector3 {
        n1: 0.0,
        n2: 0.0,
        n3: -1.0,
    };

    pub fn new(n1: f64, n2: f64, n3: f64) -> Result<Self> {
        let v = UnitVector3 { n1, n2, n3 };
        if (v.norm() - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::Domain("vector is not of unit length"));
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.n1 * self.n1 + self.n2 * self.n2 + self.n3 * self.n3).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.n1, self.n2, self.n3]
    }
}

/// Stereographic coordinate of the unit field; the north pole maps to
/// [`ComplexField::Infinity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexField {
    Finite(Complex64),
    Infinity,
}

impl ComplexField {
    pub fn from_polar(modulus: f64, phase: f64) -> Self {
        if modulus.is_infinite() {
            ComplexField::Infinity
        } else {
            ComplexField::Finite(Complex64::from_polar(modulus, phase))
        }
    }
}

/// `n = (u + u*, -i(u - u*), |u|^2 - 1) / (1 + |u|^2)`.
pub fn u_to_n(u: ComplexField) -> UnitVector3 {
    match u {
        ComplexField::Infinity => UnitVector3::NORTH,
        ComplexField::Finite(u) => {
            let r2 = u.norm_sqr();
            if !r2.is_finite() {
                return UnitVector3::NORTH;
            }
            if r2 > 1.0 {
                // divide through by |u|^2 to keep large moduli exact
                let w = u.inv();
                let d = 1.0 + w.norm_sqr();
                UnitVector3 {
                    n1: 2.0 * w.re / d,
                    n2: -2.0 * w.im / d,
                    n3: (1.0 - w.norm_sqr()) / d,
                }
            } else {
                let d = 1.0 + r2;
                UnitVector3 {
                    n1: 2.0 * u.re / d,
                    n2: 2.0 * u.im / d,
                    n3: (r2 - 1.0) / d,
                }
            }
        }
    }
}

/// Inverse stereographic map, `u = (n1 + i n2) / (1 - n3)`.
pub fn n_to_u(n: &UnitVector3) -> ComplexField {
    let w = Complex64::new(n.n1, n.n2);
    if n.n3 >= 1.0 {
        return ComplexField::Infinity;
    }
    if n.n3 > 0.0 {
        // 1 - n3 = (n1^2 + n2^2) / (1 + n3) avoids cancellation near the pole
        let r2 = w.norm_sqr();
        if r2 == 0.0 {
            return ComplexField::Infinity;
        }
        ComplexField::Finite(w * ((1.0 + n.n3) / r2))
    } else {
        ComplexField::Finite(w / (1.0 - n.n3))
    }
}
