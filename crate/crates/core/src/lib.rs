//! Exact nested multi-hopfion solutions of the Aratyn-Ferreira-Zimerman
//! sigma model with the dielectric symmetry-breaking factor
//! `sigma(n) = (1 - n3^2)^(-3/4)`.
//!
//! The crate evaluates the closed-form solution families and checks every
//! closed-form statement about them numerically:
//!
//! - [`geometry`]: toroidal coordinates and the stereographic field map,
//! - [`profile`]: winding phase, profile `f`, `n3` and soliton positions,
//! - [`energy`]: energy density, adaptive quadrature and closed-form totals,
//! - [`topology`]: the Hopf charge as a volume integral and as boundary terms,
//! - [`verify`]: field-equation residuals, first integral, boundary values.
//!
//! Everything is `no_std` (with `alloc`); IO lives in the `hopfion-cli` crate.
//!
//! ```
//! use hopfion_core::{profile::SolitonConfig, topology};
//!
//! let cfg = SolitonConfig::charged(2, 1, 1).unwrap();
//! let charge = topology::hopf_index_boundary(&cfg).unwrap();
//! assert_eq!(charge.per_soliton, [2.0, -2.0, 2.0]);
//! ```
#![no_std]

extern crate alloc;

pub mod energy;
pub mod error;
pub mod geometry;
pub mod profile;
pub mod quad;
pub mod roots;
pub mod topology;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{CartesianPoint, Scale, ToroidalPoint, UnitVector3};
pub use profile::{Family, SolitonConfig};
