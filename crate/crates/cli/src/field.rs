//! Cartesian box sampling of the unit field, the energy density and the
//! Hopf density, with legacy-VTK and CSV writers.

use std::f64::consts::PI;
use std::io::Write;

use hopfion_core::energy::energy_density_volume;
use hopfion_core::geometry::{cartesian_to_toroidal, u_to_n, CartesianPoint, ComplexField};
use hopfion_core::profile::{Family, ProfileValue};
use hopfion_core::topology::hopf_density;
use hopfion_core::SolitonConfig;

use crate::error::CliError;
use crate::table::{format_float, Cell, Table};

/// 2^24 points, about 640 MB of samples.
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub dims: [usize; 3],
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    /// Unit field per point, `x` fastest, then `y`, then `z`.
    pub n: Vec<[f64; 3]>,
    /// Energy per unit volume.
    pub energy_density: Vec<f64>,
    /// `A.B / (4 pi^2)`: sums to the Hopf index when multiplied by the cell
    /// volume.
    pub hopf_density: Vec<f64>,
    /// Points whose `eta` was capped next to the focal ring.
    pub saturated: usize,
    pub config: SolitonConfig,
}

impl FieldGrid {
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn point(&self, index: usize) -> [f64; 3] {
        let [nx, ny, _] = self.dims;
        let (i, j, k) = (index % nx, (index / nx) % ny, index / (nx * ny));
        [
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        ]
    }

    /// Riemann sum of the Hopf density over the box.
    pub fn charge(&self) -> f64 {
        self.hopf_density.iter().sum::<f64>() * self.cell_volume()
    }

    pub fn is_finite(&self) -> bool {
        self.n.iter().flatten().all(|v| v.is_finite())
            && self.energy_density.iter().all(|v| v.is_finite())
            && self.hopf_density.iter().all(|v| v.is_finite())
    }
}

pub fn describe(cfg: &SolitonConfig) -> String {
    let family = match cfg.family() {
        Family::Charged(l) => format!("charged l={l}"),
        Family::Neutral(k) => format!("neutral k={k}"),
    };
    format!("m={} n={} {family} a={}", cfg.m(), cfg.n(), cfg.scale().get())
}

/// Samples the cube `[-half_width a, half_width a]^3` on `dims` points per
/// axis, both faces included.
pub fn sample_field(
    cfg: &SolitonConfig,
    half_width: f64,
    dims: [usize; 3],
    eta_max: f64,
    max_points: usize,
) -> Result<FieldGrid, CliError> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(CliError::Usage("box half-width must be positive".into()));
    }
    if dims.iter().any(|&d| d < 2) {
        return Err(CliError::Usage("field grid needs at least 2 points per axis".into()));
    }
    let points = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if points > max_points {
        return Err(CliError::GridTooLarge { points, cap: max_points });
    }
    let a = cfg.scale().get();
    let lo = -half_width * a;
    let spacing = dims.map(|d| 2.0 * half_width * a / (d - 1) as f64);
    let phase = cfg.phase();
    let m = f64::from(cfg.m());
    let n_wind = f64::from(cfg.n());

    let mut grid = FieldGrid {
        dims,
        origin: [lo; 3],
        spacing,
        n: Vec::with_capacity(points),
        energy_density: Vec::with_capacity(points),
        hopf_density: Vec::with_capacity(points),
        saturated: 0,
        config: *cfg,
    };
    for k in 0..dims[2] {
        let z = lo + k as f64 * spacing[2];
        for j in 0..dims[1] {
            let y = lo + j as f64 * spacing[1];
            for i in 0..dims[0] {
                let x = lo + i as f64 * spacing[0];
                let inv = cartesian_to_toroidal(&CartesianPoint::new(x, y, z), cfg.scale(), eta_max);
                if inv.saturated {
                    grid.saturated += 1;
                }
                let p = inv.point;
                let u = match phase.profile(p.eta()) {
                    ProfileValue::Finite(f) => ComplexField::from_polar(f, m * p.xi() + n_wind * p.phi()),
                    ProfileValue::Pole => ComplexField::Infinity,
                };
                grid.n.push(u_to_n(u).as_array());
                if p.eta() > 0.0 {
                    grid.energy_density.push(energy_density_volume(&p, cfg)?);
                    grid.hopf_density.push(hopf_density(&p, cfg)? / (4.0 * PI * PI));
                } else {
                    // axis: both densities vanish in the limit
                    grid.energy_density.push(0.0);
                    grid.hopf_density.push(0.0);
                }
            }
        }
    }
    Ok(grid)
}

/// Legacy VTK, ASCII, `STRUCTURED_POINTS`; layout documented in the README.
pub fn write_vtk<W: Write>(grid: &FieldGrid, mut out: W) -> Result<(), CliError> {
    let [nx, ny, nz] = grid.dims;
    let f = |x: f64| format_float(x);
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "hopfion field {}", describe(&grid.config))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_POINTS")?;
    writeln!(out, "DIMENSIONS {nx} {ny} {nz}")?;
    writeln!(out, "ORIGIN {} {} {}", f(grid.origin[0]), f(grid.origin[1]), f(grid.origin[2]))?;
    writeln!(out, "SPACING {} {} {}", f(grid.spacing[0]), f(grid.spacing[1]), f(grid.spacing[2]))?;
    writeln!(out, "POINT_DATA {}", grid.len())?;
    writeln!(out, "VECTORS n double")?;
    for v in &grid.n {
        writeln!(out, "{} {} {}", f(v[0]), f(v[1]), f(v[2]))?;
    }
    for (name, values) in [("energy_density", &grid.energy_density), ("hopf_density", &grid.hopf_density)] {
        writeln!(out, "SCALARS {name} double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for v in values {
            writeln!(out, "{}", f(*v))?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row per point: `x, y, z, n1, n2, n3, energy_density, hopf_density`.
pub fn field_table(grid: &FieldGrid) -> Table {
    let mut table = Table::new(["x", "y", "z", "n1", "n2", "n3", "energy_density", "hopf_density"]);
    for idx in 0..grid.len() {
        let [x, y, z] = grid.point(idx);
        let [n1, n2, n3] = grid.n[idx];
        table.push(
            [x, y, z, n1, n2, n3, grid.energy_density[idx], grid.hopf_density[idx]]
                .into_iter()
                .map(Cell::Num)
                .collect(),
        );
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_indexing() {
        let cfg = SolitonConfig::charged(2, 1, 0).unwrap();
        let g = sample_field(&cfg, 3.0, [4, 3, 2], 12.0, 100).unwrap();
        assert_eq!(g.len(), 24);
        assert_eq!(g.point(0), [-3.0, -3.0, -3.0]);
        assert_eq!(g.point(23), [3.0, 3.0, 3.0]);
        assert_eq!(g.point(1)[0], -1.0);
        assert_eq!(g.point(4)[1], 0.0);
    }

    #[test]
    fn cap_is_enforced() {
        let cfg = SolitonConfig::charged(2, 1, 0).unwrap();
        assert!(matches!(
            sample_field(&cfg, 3.0, [10, 10, 10], 12.0, 999),
            Err(CliError::GridTooLarge { points: 1000, cap: 999 })
        ));
    }

    #[test]
    fn vtk_header() {
        let cfg = SolitonConfig::neutral(2, 1, 1).unwrap();
        let g = sample_field(&cfg, 2.0, [3, 3, 3], 12.0, 100).unwrap();
        let mut buf = Vec::new();
        write_vtk(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert_eq!(lines[1], "hopfion field m=2 n=1 neutral k=1 a=1");
        assert_eq!(lines[4], "DIMENSIONS 3 3 3");
        assert_eq!(lines[7], "POINT_DATA 27");
        assert_eq!(lines[8], "VECTORS n double");
        assert_eq!(lines[9 + 27], "SCALARS energy_density double 1");
        assert_eq!(lines.len(), 9 + 27 + 2 + 27 + 2 + 27);
    }
}
