use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hopfion_core::geometry::DEFAULT_ETA_MAX;

#[derive(Debug, Parser)]
#[command(
    name = "hopfion",
    version,
    about = "Exact nested toroidal hopfions: profiles, energies, Hopf charges, field export"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate g, f and n3 on a uniform t = tanh(eta/2) grid
    Profile(ProfileArgs),
    /// Total energy (quadrature and closed form) and density tables
    Energy(EnergyArgs),
    /// Hopf index from the volume integral and from the boundary term
    Hopf(HopfArgs),
    /// Field equation residual, first integral and boundary values
    Verify(VerifyArgs),
    /// Sample n, energy density and Hopf density on a Cartesian box
    Field(FieldArgs),
    /// Write the four figure datasets and check their shape
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Vtk,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("family").args(["charged", "neutral"]).multiple(false)))]
pub struct ConfigArgs {
    /// Winding number m (xi direction)
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i32>,
    /// Winding number n (phi direction)
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i32>,
    /// Charged family index l, N = 2l+1 half turns
    #[arg(long, value_name = "L")]
    pub charged: Option<u32>,
    /// Neutral family index k, N = 2k half turns
    #[arg(long, value_name = "K")]
    pub neutral: Option<u32>,
    /// Scale a of the toroidal coordinates
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; csv for tables, json for reports, vtk for `field`
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_ETA_MAX)]
    pub eta_max: f64,
    /// Number of grid points, both ends included
    #[arg(long, default_value_t = crate::figures::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Emit the three-curve dataset of figure 1 (charged) or 3 (neutral)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub figure: Option<u8>,
}

#[derive(Debug, Clone, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_ETA_MAX)]
    pub eta_max: f64,
    #[arg(long, default_value_t = crate::figures::DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Relative tolerance of the quadrature
    #[arg(long, default_value_t = hopfion_core::energy::DEFAULT_ENERGY_TOL)]
    pub tol: f64,
    /// Add the density-versus-eta table
    #[arg(long)]
    pub table: bool,
    /// Emit the three-curve dataset of figure 2 (charged) or 4 (neutral)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub figure: Option<u8>,
}

#[derive(Debug, Clone, Args)]
pub struct HopfArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Quadrature grid in (t, xi), at least 64x64
    #[arg(long, default_value = "512x512", value_parser = parse_grid_2d)]
    pub grid: (usize, usize),
    /// Relative tolerance between the numeric and boundary charges
    #[arg(long, default_value_t = crate::run::HOPF_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = DEFAULT_ETA_MAX)]
    pub eta_max: f64,
    /// Residual grid size
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// First-integral sample count
    #[arg(long, default_value_t = 50)]
    pub integral_samples: usize,
    /// Half-width of the windows around zeros and poles of f
    #[arg(long, default_value_t = hopfion_core::verify::DEFAULT_WINDOW)]
    pub window: f64,
    /// Bound on the residual
    #[arg(long, default_value_t = crate::run::RESIDUAL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Points per axis: N or NxNyxNz
    #[arg(long, default_value = "64", value_parser = parse_grid_3d)]
    pub grid: [usize; 3],
    /// Half-width of the box in units of a
    #[arg(long = "box", default_value_t = 3.0)]
    pub half_width: f64,
    /// Cap on eta for points next to the focal ring
    #[arg(long, default_value_t = DEFAULT_ETA_MAX)]
    pub eta_max: f64,
    #[arg(long, default_value_t = crate::field::DEFAULT_MAX_POINTS)]
    pub max_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Directory receiving fig1.csv .. fig4.csv
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ETA_MAX)]
    pub eta_max: f64,
    #[arg(long, default_value_t = crate::figures::DEFAULT_SAMPLES)]
    pub samples: usize,
}

fn parse_dims(s: &str) -> Result<Vec<usize>, String> {
    s.split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad grid size {p:?}: {e}")))
        .collect()
}

pub fn parse_grid_2d(s: &str) -> Result<(usize, usize), String> {
    match parse_dims(s)?.as_slice() {
        [n] => Ok((*n, *n)),
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected NxM, got {s:?}")),
    }
}

pub fn parse_grid_3d(s: &str) -> Result<[usize; 3], String> {
    match parse_dims(s)?.as_slice() {
        [n] => Ok([*n; 3]),
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(format!("expected N or NxNyxNz, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid_2d("512x256").unwrap(), (512, 256));
        assert_eq!(parse_grid_2d("128").unwrap(), (128, 128));
        assert!(parse_grid_2d("1x2x3").is_err());
        assert_eq!(parse_grid_3d("64").unwrap(), [64; 3]);
        assert_eq!(parse_grid_3d("8x9x10").unwrap(), [8, 9, 10]);
        assert!(parse_grid_3d("8x").is_err());
    }

    #[test]
    fn family_flags_are_exclusive() {
        let r = Cli::try_parse_from(["hopfion", "hopf", "--m", "2", "--n", "1", "--charged", "0", "--neutral", "1"]);
        assert!(r.is_err());
        let ok = Cli::try_parse_from(["hopfion", "hopf", "--m", "-2", "--n", "1", "--charged", "1"]).unwrap();
        match ok.command {
            Command::Hopf(h) => assert_eq!(h.config.m, Some(-2)),
            other => panic!("{other:?}"),
        }
    }
}
