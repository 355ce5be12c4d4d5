//! Profile and density tables on a uniform `t = tanh(eta/2)` grid, the four
//! figure datasets (`m = 2`, `n = 1`, three family members each) and the
//! shape checks run on them.

use hopfion_core::energy::energy_density_eta;
use hopfion_core::profile::ProfileValue;
use hopfion_core::SolitonConfig;
use serde::Serialize;

use crate::error::CliError;
use crate::table::{Cell, Table};

pub const DEFAULT_SAMPLES: usize = 801;

/// Boundary values of `n3` are checked to this tolerance.
pub const N3_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Figure {
    ChargedProfile,
    ChargedEnergy,
    NeutralProfile,
    NeutralEnergy,
}

impl Figure {
    pub const ALL: [Figure; 4] = [
        Figure::ChargedProfile,
        Figure::ChargedEnergy,
        Figure::NeutralProfile,
        Figure::NeutralEnergy,
    ];

    pub fn from_number(n: u8) -> Option<Figure> {
        Figure::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn number(self) -> u8 {
        match self {
            Figure::ChargedProfile => 1,
            Figure::ChargedEnergy => 2,
            Figure::NeutralProfile => 3,
            Figure::NeutralEnergy => 4,
        }
    }

    pub fn is_charged(self) -> bool {
        matches!(self, Figure::ChargedProfile | Figure::ChargedEnergy)
    }

    pub fn is_profile(self) -> bool {
        matches!(self, Figure::ChargedProfile | Figure::NeutralProfile)
    }

    pub fn file_name(self) -> String {
        let what = if self.is_profile() { "n3" } else { "energy" };
        let family = if self.is_charged() { "charged" } else { "neutral" };
        format!("fig{}_{what}_{family}.csv", self.number())
    }

    /// `(column suffix, config)` for `l` or `k` in `{0, 1, 2}`.
    pub fn curves(self) -> Vec<(String, SolitonConfig)> {
        (0..3)
            .map(|i| {
                if self.is_charged() {
                    (format!("l{i}"), SolitonConfig::charged(2, 1, i).expect("valid config"))
                } else {
                    (format!("k{i}"), SolitonConfig::neutral(2, 1, i).expect("valid config"))
                }
            })
            .collect()
    }
}

/// `(eta, t)` pairs with `t` uniform on `[0, tanh(eta_max/2)]`; the last
/// point is `eta_max` exactly.
pub fn t_grid(samples: usize, eta_max: f64) -> Result<Vec<(f64, f64)>, CliError> {
    if samples < 2 {
        return Err(CliError::Usage("need at least 2 samples".into()));
    }
    if !(eta_max > 0.0 && eta_max.is_finite()) {
        return Err(CliError::Usage("eta-max must be positive".into()));
    }
    let t_max = (0.5 * eta_max).tanh();
    Ok((0..samples)
        .map(|i| {
            if i + 1 == samples {
                (eta_max, t_max)
            } else {
                let t = t_max * i as f64 / (samples - 1) as f64;
                (2.0 * t.atanh(), t)
            }
        })
        .collect())
}

/// Columns `eta, t, g, f, n3`; `f` reads `pole` where it diverges.
pub fn profile_table(cfg: &SolitonConfig, samples: usize, eta_max: f64) -> Result<Table, CliError> {
    let phase = cfg.phase();
    let mut table = Table::new(["eta", "t", "g", "f", "n3"]);
    for (eta, t) in t_grid(samples, eta_max)? {
        let e = phase.evaluate(eta);
        let f = match e.f {
            ProfileValue::Finite(f) => Cell::Num(f),
            ProfileValue::Pole => Cell::Text("pole".into()),
        };
        table.push(vec![eta.into(), t.into(), e.g.into(), f, e.n3.into()]);
    }
    Ok(table)
}

/// Angularly integrated density; its `eta -> 0` limit `0` at the axis.
pub fn density_at(eta: f64, cfg: &SolitonConfig) -> Result<f64, CliError> {
    if eta == 0.0 {
        Ok(0.0)
    } else {
        Ok(energy_density_eta(eta, cfg)?)
    }
}

/// Columns `eta, t, density`.
pub fn density_table(cfg: &SolitonConfig, samples: usize, eta_max: f64) -> Result<Table, CliError> {
    let mut table = Table::new(["eta", "t", "density"]);
    for (eta, t) in t_grid(samples, eta_max)? {
        table.push(vec![eta.into(), t.into(), density_at(eta, cfg)?.into()]);
    }
    Ok(table)
}

/// Columns `eta, t` then one column per curve, e.g. `n3_l0, n3_l1, n3_l2`.
pub fn figure_table(figure: Figure, samples: usize, eta_max: f64) -> Result<Table, CliError> {
    let curves = figure.curves();
    let prefix = if figure.is_profile() { "n3" } else { "density" };
    let mut columns = vec!["eta".to_owned(), "t".to_owned()];
    columns.extend(curves.iter().map(|(name, _)| format!("{prefix}_{name}")));
    let mut table = Table::new(columns);
    for (eta, t) in t_grid(samples, eta_max)? {
        let mut row = vec![Cell::Num(eta), Cell::Num(t)];
        for (_, cfg) in &curves {
            let v = if figure.is_profile() {
                cfg.phase().n3(eta)
            } else {
                density_at(eta, cfg)?
            };
            row.push(v.into());
        }
        table.push(row);
    }
    Ok(table)
}

/// Monotone sweeps of `n3` between the poles of the sphere, counted as sign
/// changes (each sweep crosses the equator once).
pub fn count_flips(n3: &[f64]) -> usize {
    n3.windows(2).filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0)).count()
}

/// Interior strict local maxima above `1e-6` of the curve maximum.
pub fn count_peaks(values: &[f64]) -> usize {
    let top = values.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return 0;
    }
    values
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2] && w[1] > 1e-6 * top)
        .count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveCheck {
    pub curve: String,
    pub half_turns: u32,
    pub first_value: f64,
    pub last_value: f64,
    pub expected_first: f64,
    pub expected_last: Option<f64>,
    /// `n3` figures: sweeps found versus `N`.
    pub flips: Option<usize>,
    /// Density figures: local maxima.
    pub peaks: Option<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureCheck {
    pub figure: u8,
    pub file: String,
    pub curves: Vec<CurveCheck>,
    /// Density figures: whether the peak count grows strictly along the
    /// family index.
    pub peaks_increase: Option<bool>,
    pub passed: bool,
}

/// Shape checks on a dataset produced by [`figure_table`].
pub fn check_figure(figure: Figure, table: &Table) -> Result<FigureCheck, CliError> {
    let prefix = if figure.is_profile() { "n3" } else { "density" };
    let mut curves = Vec::new();
    for (name, cfg) in figure.curves() {
        let column = format!("{prefix}_{name}");
        let values = table
            .column(&column)
            .ok_or_else(|| CliError::Usage(format!("dataset lacks column {column}")))?;
        let first = values[0];
        let last = *values.last().expect("non-empty table");
        let big_n = cfg.half_turns();
        let check = if figure.is_profile() {
            let expected_last = if figure.is_charged() { 1.0 } else { -1.0 };
            let flips = count_flips(&values);
            CurveCheck {
                curve: column,
                half_turns: big_n,
                first_value: first,
                last_value: last,
                expected_first: -1.0,
                expected_last: Some(expected_last),
                flips: Some(flips),
                peaks: None,
                passed: (first + 1.0).abs() <= N3_TOL
                    && (last - expected_last).abs() <= N3_TOL
                    && flips == big_n as usize,
            }
        } else {
            CurveCheck {
                curve: column,
                half_turns: big_n,
                first_value: first,
                last_value: last,
                expected_first: 0.0,
                expected_last: None,
                flips: None,
                peaks: Some(count_peaks(&values)),
                passed: first == 0.0 && values.iter().all(|v| *v >= 0.0 && v.is_finite()),
            }
        };
        curves.push(check);
    }
    let peaks_increase = (!figure.is_profile()).then(|| {
        curves
            .windows(2)
            .all(|w| w[1].peaks.unwrap_or(0) > w[0].peaks.unwrap_or(0))
    });
    let passed = curves.iter().all(|c| c.passed) && peaks_increase.unwrap_or(true);
    Ok(FigureCheck {
        figure: figure.number(),
        file: figure.file_name(),
        curves,
        peaks_increase,
        passed,
    })
}
