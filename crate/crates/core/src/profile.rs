//! Exact nested-soliton profiles.
//!
//! With the ansatz `u = f(eta) exp(i(m xi + n phi))` every solution family is
//! `f = tan g(eta)`, where the winding phase
//!
//! ```text
//! g(eta) = (pi/2) N / (|m| - |n|) * (|m| - |n| h(eta)),
//! h(eta) = cosh(eta) / sqrt(n^2/m^2 + sinh^2(eta))
//! ```
//!
//! rises monotonically from 0 to `N pi/2`. The charged family has `N = 2l+1`
//! (the field ends at the north pole), the neutral family `N = 2k` (it
//! returns to the south pole). Zeros of `f` sit where `g = j pi`, poles where
//! `g = (2j+1) pi/2`; consecutive zero/pole pairs bound the nested solitons.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};


use crate::error::{Error, Result};
use crate::geometry::Scale;
use crate::roots::{brent_expanding, BrentOptions};

/// `|g - (2j+1) pi/2|` below this marks a pole of `f`.
pub const POLE_PHASE_TOL: f64 = 1e-9;
/// `|f|` above this is reported as a pole.
pub const POLE_MAGNITUDE: f64 = 1e12;

/// Largest `eta` at which the root finder will look for a zero or pole.
const ROOT_SEARCH_LIMIT: f64 = 300.0;

/// Beyond this `sinh(eta)` the derivatives of `g` are below `1e-200`.
const LARGE_SINH: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    /// `2l+1` nested solitons, total charge `|mn|`.
    Charged(u32),
    /// `2k` nested solitons, zero total charge; `k = 0` is the vacuum.
    Neutral(u32),
}

impl Family {
    /// Number of half turns `N` of the winding phase.
    pub fn half_turns(self) -> u32 {
        match self {
            Family::Charged(l) => 2 * l + 1,
            Family::Neutral(k) => 2 * k,
        }
    }

    pub fn is_charged(self) -> bool {
        matches!(self, Family::Charged(_))
    }
}

/// Discrete label of a solution: winding numbers, family and length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolitonConfig {
    m: i32,
    n: i32,
    family: Family,
    scale: Scale,
}

impl SolitonConfig {
    pub fn new(m: i32, n: i32, family: Family, scale: Scale) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidConfig("winding numbers m and n must be nonzero"));
        }
        if m.unsigned_abs() == n.unsigned_abs() {
            return Err(Error::InvalidConfig("|m| = |n| has no solution in this family"));
        }
        // keep 2l+1 and 2k representable
        let too_big = match family {
            Family::Charged(l) => l > (u32::MAX - 1) / 2,
            Family::Neutral(k) => k > u32::MAX / 2,
        };
        if too_big {
            return Err(Error::InvalidConfig("family index out of range"));
        }
        Ok(SolitonConfig { m, n, family, scale })
    }

    pub fn charged(m: i32, n: i32, l: u32) -> Result<Self> {
        Self::new(m, n, Family::Charged(l), Scale::default())
    }

    pub fn neutral(m: i32, n: i32, k: u32) -> Result<Self> {
        Self::new(m, n, Family::Neutral(k), Scale::default())
    }

    pub fn with_scale(self, scale: Scale) -> Self {
        SolitonConfig { scale, ..self }
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn n(&self) -> i32 {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn half_turns(&self) -> u32 {
        self.family.half_turns()
    }

    pub fn is_vacuum(&self) -> bool {
        self.half_turns() == 0
    }

    pub fn phase(&self) -> WindingPhase {
        WindingPhase {
            m_abs: f64::from(self.m.unsigned_abs()),
            n_abs: f64::from(self.n.unsigned_abs()),
            half_turns: f64::from(self.half_turns()),
        }
    }
}

/// The winding phase `g(eta)` for given `|m|`, `|n|` and a (possibly
/// non-integer) number of half turns.
///
/// Only integer half turns solve the boundary value problem; arbitrary
/// values are allowed so that checks can be fed deliberately broken profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingPhase {
    m_abs: f64,
    n_abs: f64,
    half_turns: f64,
}

impl WindingPhase {
    pub fn new(m_abs: f64, n_abs: f64, half_turns: f64) -> Result<Self> {
        if !(m_abs > 0.0 && n_abs > 0.0 && m_abs.is_finite() && n_abs.is_finite()) {
            return Err(Error::InvalidConfig("|m| and |n| must be positive"));
        }
        if m_abs == n_abs {
            return Err(Error::InvalidConfig("|m| = |n| has no solution in this family"));
        }
        if !(half_turns.is_finite() && half_turns >= 0.0) {
            return Err(Error::InvalidConfig("half turns must be a non-negative number"));
        }
        Ok(WindingPhase {
            m_abs,
            n_abs,
            half_turns,
        })
    }

    pub fn half_turns(&self) -> f64 {
        self.half_turns
    }

    /// `c = |n|/|m|`.
    pub fn ratio(&self) -> f64 {
        self.n_abs / self.m_abs
    }

    /// Limit of `g` as `eta -> inf`.
    pub fn limit(&self) -> f64 {
        FRAC_PI_2 * self.half_turns
    }

    /// `h(eta) = cosh(eta) / sqrt(c^2 + sinh^2(eta))`.
    pub fn bracket(&self, eta: f64) -> f64 {
        let c = self.ratio();
        let s = eta.sinh();
        eta.cosh() / (c * c + s * s).sqrt()
    }

    /// `g(eta)`. Evaluated as `(pi/2) N (1+c) s^2 / (D (D + c cosh))` with
    /// `D = sqrt(c^2 + s^2)`, which is algebraically the textbook form but
    /// has no cancellation near `eta = 0`.
    pub fn value(&self, eta: f64) -> f64 {
        let c = self.ratio();
        let s = eta.sinh();
        if s == 0.0 {
            return 0.0;
        }
        // s/D and s/(D + c cosh) rewritten in c/s so that large eta cannot overflow
        let u = c / s;
        let w = (1.0 + u * u).sqrt();
        let coth = 1.0 / eta.tanh();
        self.limit() * (1.0 + c) / (w * (w + c * coth))
    }

    /// `g'(eta) = (pi/2) N c (1+c) sinh / D^3`; nonnegative for both
    /// orderings of `|m|` and `|n|`.
    pub fn derivative(&self, eta: f64) -> f64 {
        let c = self.ratio();
        let s = eta.sinh();
        if s > LARGE_SINH {
            return 0.0;
        }
        let d2 = c * c + s * s;
        self.limit() * c * (1.0 + c) * s / (d2 * d2.sqrt())
    }

    /// `g''(eta) = (pi/2) N c (1+c) cosh (c^2 - 2 sinh^2) / D^5`.
    pub fn second_derivative(&self, eta: f64) -> f64 {
        let c = self.ratio();
        let s = eta.sinh();
        if s > LARGE_SINH {
            return 0.0;
        }
        let d2 = c * c + s * s;
        let d = d2.sqrt();
        self.limit() * c * (1.0 + c) * (eta.cosh() / d2) * ((c * c - 2.0 * s * s) / (d2 * d))
    }

    /// `eta` at which `g` equals `target`, by bracketed root finding.
    /// `target` must lie in `[0, limit)`.
    pub fn solve(&self, target: f64) -> Result<f64> {
        if target == 0.0 {
            return Ok(0.0);
        }
        if !(target > 0.0 && target < self.limit()) {
            return Err(Error::Domain("phase target outside [0, N pi/2)"));
        }
        let opts = BrentOptions {
            x_tol: 1e-15,
            max_iter: 300,
        };
        brent_expanding(|eta| self.value(eta) - target, 0.0, 0.5, ROOT_SEARCH_LIMIT, opts)
    }

    /// Closed-form inverse of `g`: with `r = g / (N pi/2)` the bracket value
    /// is `h = (1 - (1-c) r) / c` and `sinh^2(eta) = (1 - h^2 c^2) / (h^2 - 1)`.
    pub fn solve_closed_form(&self, target: f64) -> Option<f64> {
        if !(target >= 0.0 && target < self.limit()) {
            return None;
        }
        let c = self.ratio();
        let r = target / self.limit();
        let h = (1.0 - (1.0 - c) * r) / c;
        let s2 = (1.0 - h * h * c * c) / (h * h - 1.0);
        if s2 >= 0.0 && s2.is_finite() {
            Some(s2.sqrt().asinh())
        } else if target == 0.0 {
            Some(0.0)
        } else {
            None
        }
    }
}

/// `f` at a point: either a finite value or a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProfileValue {
    Finite(f64),
    Pole,
}

impl ProfileValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            ProfileValue::Finite(v) => Some(v),
            ProfileValue::Pole => None,
        }
    }

    pub fn is_pole(self) -> bool {
        matches!(self, ProfileValue::Pole)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProfileEval {
    pub eta: f64,
    pub g: f64,
    pub f: ProfileValue,
    pub f_prime: ProfileValue,
    pub n3: f64,
    pub at_pole: bool,
}

fn near_pole(g: f64) -> bool {
    // distance to the nearest odd multiple of pi/2
    let j = ((g - FRAC_PI_2) / PI).round();
    (g - (FRAC_PI_2 + j * PI)).abs() < POLE_PHASE_TOL
}

fn check_eta(eta: f64) -> Result<()> {
    if eta >= 0.0 && !eta.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain("eta must be non-negative"))
    }
}

impl WindingPhase {
    pub fn profile(&self, eta: f64) -> ProfileValue {
        let g = self.value(eta);
        if near_pole(g) {
            return ProfileValue::Pole;
        }
        let f = g.tan();
        if f.abs() > POLE_MAGNITUDE {
            ProfileValue::Pole
        } else {
            ProfileValue::Finite(f)
        }
    }

    /// `f' = (1 + f^2) g'`.
    pub fn profile_derivative(&self, eta: f64) -> ProfileValue {
        match self.profile(eta) {
            ProfileValue::Finite(f) => ProfileValue::Finite((1.0 + f * f) * self.derivative(eta)),
            ProfileValue::Pole => ProfileValue::Pole,
        }
    }

    /// `n^3 = -cos(2g)`, smooth through the poles of `f`.
    pub fn n3(&self, eta: f64) -> f64 {
        -(2.0 * self.value(eta)).cos()
    }

    pub fn evaluate(&self, eta: f64) -> ProfileEval {
        let g = self.value(eta);
        let f = self.profile(eta);
        ProfileEval {
            eta,
            g,
            f,
            f_prime: self.profile_derivative(eta),
            n3: -(2.0 * g).cos(),
            at_pole: f.is_pole(),
        }
    }
}

pub fn winding_phase(eta: f64, cfg: &SolitonConfig) -> Result<f64> {
    check_eta(eta)?;
    Ok(cfg.phase().value(eta))
}

pub fn winding_phase_derivative(eta: f64, cfg: &SolitonConfig) -> Result<f64> {
    check_eta(eta)?;
    Ok(cfg.phase().derivative(eta))
}

pub fn profile_f(eta: f64, cfg: &SolitonConfig) -> Result<ProfileValue> {
    check_eta(eta)?;
    Ok(cfg.phase().profile(eta))
}

pub fn profile_derivative(eta: f64, cfg: &SolitonConfig) -> Result<ProfileValue> {
    check_eta(eta)?;
    Ok(cfg.phase().profile_derivative(eta))
}

pub fn n3_component(eta: f64, cfg: &SolitonConfig) -> Result<f64> {
    check_eta(eta)?;
    Ok(cfg.phase().n3(eta))
}

pub fn evaluate(eta: f64, cfg: &SolitonConfig) -> Result<ProfileEval> {
    check_eta(eta)?;
    Ok(cfg.phase().evaluate(eta))
}

/// Kind of a soliton boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundaryKind {
    /// `f = 0`, field at the south pole.
    Zero,
    /// `f = inf`, field at the north pole.
    Pole,
}

/// A point delimiting nested solitons; `eta = None` means the focal ring.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryPoint {
    pub kind: BoundaryKind,
    pub eta: Option<f64>,
    /// Phase `g` at the point, an exact multiple of `pi/2`.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolitonPositions {
    pub zeros: Vec<f64>,
    /// Finite poles only.
    pub poles: Vec<f64>,
    pub innermost_pole_at_infinity: bool,
    /// Neutral family: the last zero of `f` sits at the focal ring.
    pub innermost_zero_at_infinity: bool,
}

impl SolitonPositions {
    /// Boundary points ordered from the axis (`eta = 0`) inwards.
    pub fn boundaries(&self) -> Vec<BoundaryPoint> {
        let mut out = Vec::with_capacity(self.zeros.len() + self.poles.len() + 1);
        let mut zeros = self.zeros.iter();
        let mut poles = self.poles.iter();
        let mut j = 0u32;
        loop {
            let phase = FRAC_PI_2 * f64::from(j);
            let (kind, next) = if j.is_multiple_of(2) {
                (BoundaryKind::Zero, zeros.next())
            } else {
                (BoundaryKind::Pole, poles.next())
            };
            match next {
                Some(&eta) => out.push(BoundaryPoint {
                    kind,
                    eta: Some(eta),
                    phase,
                }),
                None => {
                    let at_infinity = match kind {
                        BoundaryKind::Zero => self.innermost_zero_at_infinity,
                        BoundaryKind::Pole => self.innermost_pole_at_infinity,
                    };
                    if at_infinity {
                        out.push(BoundaryPoint {
                            kind,
                            eta: None,
                            phase,
                        });
                    }
                    break;
                }
            }
            j += 1;
        }
        out
    }

    /// Number of nested solitons delimited by the boundary points.
    pub fn soliton_count(&self) -> usize {
        self.boundaries().len().saturating_sub(1)
    }
}

/// Zeros and poles of `f`: `g = j pi` and `g = (2j+1) pi/2`.
pub fn soliton_positions(cfg: &SolitonConfig) -> Result<SolitonPositions> {
    let phase = cfg.phase();
    let half_turns = cfg.half_turns();
    let mut zeros = Vec::new();
    let mut poles = Vec::new();
    // phase j pi/2 for j < N lies strictly inside [0, limit)
    for j in 0..half_turns {
        let eta = phase.solve(FRAC_PI_2 * f64::from(j))?;
        if j % 2 == 0 {
            zeros.push(eta);
        } else {
            poles.push(eta);
        }
    }
    if half_turns == 0 {
        zeros.push(0.0);
    }
    let last_odd = half_turns % 2 == 1;
    Ok(SolitonPositions {
        zeros,
        poles,
        innermost_pole_at_infinity: last_odd,
        innermost_zero_at_infinity: half_turns > 0 && !last_odd,
    })
}

/// Monotone sweeps of `n^3` between the poles of the target sphere:
/// `2l+1` for the charged family, `2k` for the neutral one.
pub fn flip_count(cfg: &SolitonConfig) -> Result<usize> {
    Ok(soliton_positions(cfg)?.soliton_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(m: i32, n: i32, family: Family) -> SolitonConfig {
        SolitonConfig::new(m, n, family, Scale::default()).unwrap()
    }

    #[test]
    fn rejects_degenerate_windings() {
        assert!(SolitonConfig::charged(0, 1, 0).is_err());
        assert!(SolitonConfig::charged(2, 0, 0).is_err());
        assert!(SolitonConfig::charged(2, -2, 0).is_err());
        assert!(SolitonConfig::neutral(3, 3, 1).is_err());
        assert!(SolitonConfig::charged(1, 2, u32::MAX).is_err());
        assert!(WindingPhase::new(1.0, 1.0, 1.0).is_err());
        assert!(WindingPhase::new(2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn phase_examples() {
        let c = cfg(2, 1, Family::Charged(0));
        assert_eq!(winding_phase(0.0, &c).unwrap(), 0.0);
        assert_relative_eq!(winding_phase(12.0, &c).unwrap(), FRAC_PI_2, epsilon = 1e-9);
        let eta = (5.0f64 / 7.0).sqrt().asinh();
        assert_relative_eq!(winding_phase(eta, &c).unwrap(), PI / 3.0, epsilon = 1e-14);
        assert_relative_eq!(c.phase().bracket(eta), 4.0 / 3.0, epsilon = 1e-14);
        assert!(winding_phase(-1.0, &c).is_err());
    }

    #[test]
    fn stable_form_matches_textbook_form() {
        for (m, n) in [(2.0, 1.0), (1.0, 3.0), (3.0, 2.0)] {
            let p = WindingPhase::new(m, n, 3.0).unwrap();
            for i in 1..50 {
                let eta = 0.1 * f64::from(i);
                let textbook = FRAC_PI_2 * 3.0 / (m - n) * (m - n * p.bracket(eta));
                assert_relative_eq!(p.value(eta), textbook, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn profile_examples() {
        let c = cfg(2, 1, Family::Charged(0));
        assert_eq!(profile_f(0.0, &c).unwrap(), ProfileValue::Finite(0.0));
        let eta = (5.0f64 / 7.0).sqrt().asinh();
        let f = profile_f(eta, &c).unwrap().finite().unwrap();
        assert_relative_eq!(f, 3f64.sqrt(), epsilon = 1e-13);
        let fp = profile_derivative(eta, &c).unwrap().finite().unwrap();
        assert_relative_eq!(fp, 4.0 * winding_phase_derivative(eta, &c).unwrap(), epsilon = 1e-12);
        assert_relative_eq!(n3_component(eta, &c).unwrap(), 0.5, epsilon = 1e-13);

        let c1 = cfg(2, 1, Family::Charged(1));
        let pole = (11f64.sqrt() / 8.0).asinh();
        assert!(profile_f(pole, &c1).unwrap().is_pole());
        assert!(profile_derivative(pole, &c1).unwrap().is_pole());
        assert!(evaluate(pole, &c1).unwrap().at_pole);
        assert_relative_eq!(evaluate(pole, &c1).unwrap().n3, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let c = cfg(2, 1, Family::Charged(0));
        assert_eq!(winding_phase_derivative(0.0, &c).unwrap(), 0.0);
        let expected = 3.0 * PI / 5f64.powf(1.5);
        assert_relative_eq!(winding_phase_derivative(1f64.asinh(), &c).unwrap(), expected, epsilon = 1e-14);
        assert_relative_eq!(expected, 0.84299, epsilon = 5e-5);
        assert_eq!(profile_derivative(0.0, &c).unwrap(), ProfileValue::Finite(0.0));
    }

    #[test]
    fn boundary_values() {
        for family in [Family::Charged(0), Family::Charged(2), Family::Neutral(1), Family::Neutral(3)] {
            let c = cfg(2, 1, family);
            assert_eq!(n3_component(0.0, &c).unwrap(), -1.0);
            let far = n3_component(12.0, &c).unwrap();
            let expected = if family.is_charged() { 1.0 } else { -1.0 };
            assert!((far - expected).abs() < 1e-9, "{family:?}: {far}");
        }
    }

    #[test]
    fn positions_charged() {
        let p = soliton_positions(&cfg(2, 1, Family::Charged(0))).unwrap();
        assert_eq!(p.zeros, [0.0]);
        assert!(p.poles.is_empty());
        assert!(p.innermost_pole_at_infinity);
        assert!(!p.innermost_zero_at_infinity);

        let p = soliton_positions(&cfg(2, 1, Family::Charged(1))).unwrap();
        assert_eq!(p.zeros.len(), 2);
        assert_eq!(p.poles.len(), 1);
        assert_relative_eq!(p.poles[0], (11f64.sqrt() / 8.0).asinh(), epsilon = 1e-13);
        assert_relative_eq!(p.poles[0], 0.40354, epsilon = 1e-5);
        assert_relative_eq!(p.zeros[1], (5.0f64 / 7.0).sqrt().asinh(), epsilon = 1e-13);
        assert_relative_eq!(p.zeros[1], 0.76755, epsilon = 1e-5);
        assert_eq!(p.boundaries().len(), 4);
        assert_eq!(p.soliton_count(), 3);
    }

    #[test]
    fn positions_neutral_and_vacuum() {
        let p = soliton_positions(&cfg(2, 1, Family::Neutral(2))).unwrap();
        assert_eq!(p.zeros.len(), 2);
        assert_eq!(p.poles.len(), 2);
        assert!(p.innermost_zero_at_infinity);
        assert!(!p.innermost_pole_at_infinity);
        let b = p.boundaries();
        assert_eq!(b.len(), 5);
        assert_eq!(b.last().unwrap().kind, BoundaryKind::Zero);
        assert_eq!(b.last().unwrap().eta, None);

        let v = soliton_positions(&cfg(2, 1, Family::Neutral(0))).unwrap();
        assert_eq!(v.zeros, [0.0]);
        assert_eq!(v.soliton_count(), 0);
    }

    #[test]
    fn closed_form_inverse_agrees_with_root_finding() {
        for (m, n) in [(2, 1), (1, 3), (3, 2), (5, 2)] {
            let c = cfg(m, n, Family::Charged(3));
            let phase = c.phase();
            for j in 1..7 {
                let target = FRAC_PI_2 * f64::from(j);
                let a = phase.solve(target).unwrap();
                let b = phase.solve_closed_form(target).unwrap();
                assert_relative_eq!(a, b, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn flip_counts() {
        assert_eq!(flip_count(&cfg(2, 1, Family::Charged(0))).unwrap(), 1);
        assert_eq!(flip_count(&cfg(2, 1, Family::Charged(2))).unwrap(), 5);
        assert_eq!(flip_count(&cfg(2, 1, Family::Neutral(2))).unwrap(), 4);
        assert_eq!(flip_count(&cfg(2, 1, Family::Neutral(0))).unwrap(), 0);
    }

    #[test]
    fn vacuum_is_flat() {
        let c = cfg(3, 1, Family::Neutral(0));
        for eta in [0.0, 0.3, 2.0, 12.0] {
            assert_eq!(n3_component(eta, &c).unwrap(), -1.0);
            assert_eq!(winding_phase_derivative(eta, &c).unwrap(), 0.0);
        }
    }
}
