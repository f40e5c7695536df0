//! Run configuration: an optional JSON document overlaid by command-line flags.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{Format, GridSpec, Options};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub metric: Option<[f64; 3]>,
    pub params: Option<ParamsConfig>,
    pub vector: Option<[f64; 4]>,
    pub steps: Option<usize>,
    pub tolerance: Option<f64>,
    pub output_format: Option<Format>,
    pub field_family: Option<String>,
    pub point: Option<[f64; 4]>,
    pub fd_step: Option<f64>,
    #[serde(default)]
    pub renormalize: bool,
    pub alpha_grid: Option<GridSpec>,
    pub beta_grid: Option<GridSpec>,
}

pub const DEFAULT_STEPS: usize = 10;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Flags win over file values.
    pub fn overlay(mut self, o: &Options) -> Result<Self, CliError> {
        if o.metric.is_some() {
            self.metric = o.metric;
        }
        match (o.alpha, o.beta, self.params) {
            (None, None, _) => {}
            (Some(alpha), Some(beta), _) => self.params = Some(ParamsConfig { alpha, beta }),
            (Some(alpha), None, Some(p)) => {
                self.params = Some(ParamsConfig {
                    alpha,
                    beta: p.beta,
                })
            }
            (None, Some(beta), Some(p)) => {
                self.params = Some(ParamsConfig {
                    alpha: p.alpha,
                    beta,
                })
            }
            (Some(_), None, None) => {
                return Err(CliError::Config("--alpha given without --beta".into()))
            }
            (None, Some(_), None) => {
                return Err(CliError::Config("--beta given without --alpha".into()))
            }
        }
        if o.vector.is_some() {
            self.vector = o.vector;
        }
        if o.steps.is_some() {
            self.steps = o.steps;
        }
        if o.tolerance.is_some() {
            self.tolerance = o.tolerance;
        }
        if o.format.is_some() {
            self.output_format = o.format;
        }
        if o.field_family.is_some() {
            self.field_family = o.field_family.clone();
        }
        if o.point.is_some() {
            self.point = o.point;
        }
        if o.fd_step.is_some() {
            self.fd_step = o.fd_step;
        }
        self.renormalize |= o.renormalize;
        if o.alpha_grid.is_some() {
            self.alpha_grid = o.alpha_grid;
        }
        if o.beta_grid.is_some() {
            self.beta_grid = o.beta_grid;
        }
        Ok(self)
    }

    pub fn format(&self) -> Format {
        self.output_format.unwrap_or_default()
    }

    pub fn require_metric(&self) -> Result<[f64; 3], CliError> {
        self.metric
            .ok_or_else(|| CliError::Config("missing --metric a,b,c".into()))
    }

    pub fn require_vector(&self) -> Result<[f64; 4], CliError> {
        self.vector
            .ok_or_else(|| CliError::Config("missing --w x,y,z,u".into()))
    }

    pub fn require_params(&self) -> Result<ParamsConfig, CliError> {
        self.params
            .ok_or_else(|| CliError::Config("missing --alpha and --beta".into()))
    }

    pub fn require_family(&self) -> Result<&str, CliError> {
        self.field_family
            .as_deref()
            .ok_or_else(|| CliError::Config("missing --family".into()))
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or(DEFAULT_STEPS)
    }

    pub fn tolerance(&self) -> Result<f64, CliError> {
        let tol = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(tol)
    }

    pub fn fd_step(&self) -> Result<Option<f64>, CliError> {
        match self.fd_step {
            Some(h) if !(h > 0.0 && h.is_finite()) => Err(CliError::Config(format!(
                "fd_step must be positive, got {h}"
            ))),
            h => Ok(h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_flags() {
        let file = RunConfig {
            metric: Some([3.0, 1.0, 2.0]),
            params: Some(ParamsConfig {
                alpha: 2.0,
                beta: 1.0,
            }),
            steps: Some(5),
            ..Default::default()
        };
        let opts = Options {
            beta: Some(0.5),
            steps: Some(7),
            ..Default::default()
        };
        let cfg = file.overlay(&opts).unwrap();
        assert_eq!(
            cfg.params,
            Some(ParamsConfig {
                alpha: 2.0,
                beta: 0.5
            })
        );
        assert_eq!(cfg.steps(), 7);
        assert_eq!(cfg.metric, Some([3.0, 1.0, 2.0]));
    }

    #[test]
    fn half_params_rejected() {
        let opts = Options {
            alpha: Some(2.0),
            ..Default::default()
        };
        assert!(RunConfig::default().overlay(&opts).is_err());
    }

    #[test]
    fn json_document_parses() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"metric":[3,1,2],"params":{"alpha":2,"beta":1},"vector":[1,0,0,0],
                "steps":50,"tolerance":1e-9,"output_format":"csv"}"#,
        )
        .unwrap();
        assert_eq!(cfg.format(), Format::Csv);
        assert_eq!(cfg.steps(), 50);
        assert!(serde_json::from_str::<RunConfig>(r#"{"metrik":[1,2,3]}"#).is_err());
    }

    #[test]
    fn bad_tolerance() {
        let cfg = RunConfig {
            tolerance: Some(-1.0),
            ..Default::default()
        };
        assert!(cfg.tolerance().is_err());
    }
}
