use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "affinor",
    version,
    about = "Circulant metrics, almost conformal transformations and angle dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Determinant: closed form and cofactor expansion.
    Det,
    /// Positivity under every registered criterion, with the spectrum.
    Posdef,
    /// Cosines of the angles from w to qw and q²w.
    Angles,
    /// Transformed angles, by the recurrence formula and by the transformed metric.
    Transform,
    /// Angle trace along g_n, recurrence and direct side by side.
    Iterate,
    /// Gradient conditions and ∇q residual for a named field family.
    CheckFields,
    /// Grid over (alpha, beta) reporting limit cosines per cell.
    Sweep,
    /// List registered field families and positivity criteria.
    Families,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Det => "det",
            Self::Posdef => "posdef",
            Self::Angles => "angles",
            Self::Transform => "transform",
            Self::Iterate => "iterate",
            Self::CheckFields => "check-fields",
            Self::Sweep => "sweep",
            Self::Families => "families",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Metric coefficients a,b,c (first row a,b,c,b).
    #[arg(long, global = true, value_parser = parse_list::<3>, allow_hyphen_values = true)]
    pub metric: Option<[f64; 3]>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,

    /// Tangent vector x,y,z,u.
    #[arg(long = "w", global = true, value_parser = parse_list::<4>, allow_hyphen_values = true)]
    pub vector: Option<[f64; 4]>,

    /// Number of sequence steps.
    #[arg(long = "n", global = true)]
    pub steps: Option<usize>,

    /// Convergence tolerance on successive rows.
    #[arg(long = "tol", global = true)]
    pub tolerance: Option<f64>,

    /// Field family name (see `families`).
    #[arg(long = "family", global = true)]
    pub field_family: Option<String>,

    /// Evaluation point p1,p2,p3,p4 (defaults to the family's box centre).
    #[arg(long, global = true, value_parser = parse_list::<4>, allow_hyphen_values = true)]
    pub point: Option<[f64; 4]>,

    /// Central-difference step.
    #[arg(long, global = true)]
    pub fd_step: Option<f64>,

    /// Divide each g_n by its trace (angles are unchanged).
    #[arg(long, global = true)]
    pub renormalize: bool,

    /// Sweep grid for alpha: start,stop,count.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub alpha_grid: Option<GridSpec>,

    /// Sweep grid for beta: start,stop,count.
    #[arg(long, global = true, value_parser = parse_grid)]
    pub beta_grid: Option<GridSpec>,
}

/// Inclusive linear grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

pub fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("`{part}`: {e}"))?;
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected start,stop,count".into());
    }
    let start = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let stop = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    let count = parts[2].parse::<usize>().map_err(|e| e.to_string())?;
    Ok(GridSpec { start, stop, count })
}
