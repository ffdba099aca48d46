//! JSON experiment configurations for the batch CLI.
//!
//! Each subcommand owns one config struct. Schemas are strict
//! (`deny_unknown_fields`) and validated with field-naming messages before
//! any computation; parse and validation failures are configuration-class
//! errors (CLI exit code 2), while unwritable *outputs* are runtime-class.
//!
//! Matrices and model specs can be given inline or by path — exactly one of
//! `<field>` and `<field>_path` per input.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, MatrixDocument};
use crate::models::ModelSpec;

/// Parse a JSON config file. Read failures and schema violations are both
/// config-class errors; serde's message carries the line and column.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        what: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config {
        what: format!("{}: {e}", path.display()),
    })
}

/// Load a matrix document from a JSON file.
pub fn read_matrix_file(path: &Path) -> Result<HermitianMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        what: format!("cannot read {}: {e}", path.display()),
    })?;
    let doc: MatrixDocument = serde_json::from_str(&text).map_err(|e| Error::Config {
        what: format!("{}: {e}", path.display()),
    })?;
    doc.into_matrix()
}

/// Load a model spec from a JSON file.
pub fn read_model_file(path: &Path) -> Result<ModelSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config {
        what: format!("cannot read {}: {e}", path.display()),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config {
        what: format!("{}: {e}", path.display()),
    })
}

fn check_grid(values: &[f64], field: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Config {
            what: format!("field '{field}' must list at least one value"),
        });
    }
    for &v in values {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Config {
                what: format!("field '{field}' must contain positive finite values; got {v}"),
            });
        }
    }
    Ok(())
}

fn check_exactly_one<A, B>(inline: &Option<A>, path: &Option<B>, field: &str) -> Result<()> {
    match (inline, path) {
        (Some(_), None) | (None, Some(_)) => Ok(()),
        (Some(_), Some(_)) => Err(Error::Config {
            what: format!("fields '{field}' and '{field}_path' are mutually exclusive"),
        }),
        (None, None) => Err(Error::Config {
            what: format!("one of '{field}' or '{field}_path' is required"),
        }),
    }
}

fn resolve_matrix(
    inline: &Option<MatrixDocument>,
    path: &Option<String>,
    field: &str,
) -> Result<HermitianMatrix> {
    check_exactly_one(inline, path, field)?;
    match inline {
        Some(doc) => doc.into_matrix(),
        None => read_matrix_file(Path::new(path.as_deref().expect("checked above"))),
    }
}

fn resolve_model(
    inline: &Option<ModelSpec>,
    path: &Option<String>,
    field: &str,
) -> Result<ModelSpec> {
    check_exactly_one(inline, path, field)?;
    match inline {
        Some(spec) => Ok(spec.clone()),
        None => read_model_file(Path::new(path.as_deref().expect("checked above"))),
    }
}

fn default_center() -> f64 {
    0.0
}

fn default_ms() -> Vec<usize> {
    vec![1]
}

/// `count`: eigenvalues of a fixed matrix inside `(center-eps, center+eps)`
/// for each grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_path: Option<String>,
    /// Interval centers are `center +- eps`; defaults to `0`.
    #[serde(default = "default_center")]
    pub center: f64,
    pub eps: Vec<f64>,
}

impl CountConfig {
    pub fn validate(&self) -> Result<()> {
        check_exactly_one(&self.matrix, &self.matrix_path, "matrix")?;
        check_grid(&self.eps, "eps")?;
        if !self.center.is_finite() {
            return Err(Error::Config {
                what: format!("field 'center' must be finite; got {}", self.center),
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<HermitianMatrix> {
        resolve_matrix(&self.matrix, &self.matrix_path, "matrix")
    }
}

/// `witness`: search for a counting certificate on a fixed matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_path: Option<String>,
    pub eps: f64,
    /// Certified level: the certificate asserts `C_eps >= m`.
    pub m: usize,
    /// Witness strength `K`; omitted means the guaranteed `C_m / N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
    /// When set, search block-aligned index sets of this block size instead
    /// of free pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
}

impl WitnessConfig {
    pub fn validate(&self) -> Result<()> {
        check_exactly_one(&self.matrix, &self.matrix_path, "matrix")?;
        check_grid(&[self.eps], "eps")?;
        if self.m == 0 {
            return Err(Error::Config {
                what: "field 'm' must be at least 1".into(),
            });
        }
        if let Some(k) = self.strength {
            if !(k > 0.0 && k.is_finite()) {
                return Err(Error::Config {
                    what: format!("field 'strength' must be positive and finite; got {k}"),
                });
            }
        }
        if self.block == Some(0) {
            return Err(Error::Config {
                what: "field 'block' must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<HermitianMatrix> {
        resolve_matrix(&self.matrix, &self.matrix_path, "matrix")
    }
}

/// `reduce`: shift-based reduction of a pair plus the count sandwich on an
/// eps grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2: Option<MatrixDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b2_path: Option<String>,
    pub eps: Vec<f64>,
}

impl ReduceConfig {
    pub fn validate(&self) -> Result<()> {
        check_exactly_one(&self.b1, &self.b1_path, "b1")?;
        check_exactly_one(&self.b2, &self.b2_path, "b2")?;
        check_grid(&self.eps, "eps")
    }

    pub fn matrix_b1(&self) -> Result<HermitianMatrix> {
        resolve_matrix(&self.b1, &self.b1_path, "b1")
    }

    pub fn matrix_b2(&self) -> Result<HermitianMatrix> {
        resolve_matrix(&self.b2, &self.b2_path, "b2")
    }
}

/// `wegner`: Monte Carlo sweep of `P(C_eps(H) >= m)` over an `(eps, m)`
/// grid, with per-`m` scaling fits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WegnerConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_path: Option<String>,
    pub eps: Vec<f64>,
    /// Count levels to sweep; defaults to `[1]`.
    #[serde(default = "default_ms")]
    pub m: Vec<usize>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl WegnerConfig {
    pub fn validate(&self) -> Result<()> {
        check_exactly_one(&self.model, &self.model_path, "model")?;
        check_grid(&self.eps, "eps")?;
        if self.m.is_empty() || self.m.contains(&0) {
            return Err(Error::Config {
                what: "field 'm' must list levels >= 1".into(),
            });
        }
        if self.trials == 0 {
            return Err(Error::Config {
                what: "field 'trials' must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn model(&self) -> Result<ModelSpec> {
        resolve_model(&self.model, &self.model_path, "model")
    }
}

/// `det-event`: Monte Carlo sweep of `P(|det H_hat| <= delta)` for the
/// reduced sampler at an integer shift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetEventConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_path: Option<String>,
    /// Integer shift `a` with `|a| >= 3`.
    pub shift: i64,
    pub delta: Vec<f64>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
}

impl DetEventConfig {
    pub fn validate(&self) -> Result<()> {
        check_exactly_one(&self.model, &self.model_path, "model")?;
        check_grid(&self.delta, "delta")?;
        if self.shift.abs() < 3 {
            return Err(Error::Config {
                what: format!("field 'shift' must satisfy |shift| >= 3; got {}", self.shift),
            });
        }
        if self.trials == 0 {
            return Err(Error::Config {
                what: "field 'trials' must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn model(&self) -> Result<ModelSpec> {
        resolve_model(&self.model, &self.model_path, "model")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{GraphSpec, HoppingSpec, ModelFamily, SiteDistribution};

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn count_config_round_trips_and_validates() {
        let cfg = CountConfig {
            matrix: Some(MatrixDocument {
                dim: 2,
                re: vec![vec![1.0, 0.0], vec![0.0, -0.5]],
                im: None,
            }),
            matrix_path: None,
            center: 0.0,
            eps: vec![0.1, 0.7],
        };
        cfg.validate().unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: CountConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.matrix().unwrap().dim(), 2);
    }

    #[test]
    fn bad_grids_name_the_field() {
        let cfg = CountConfig {
            matrix: Some(MatrixDocument {
                dim: 1,
                re: vec![vec![2.0]],
                im: None,
            }),
            matrix_path: None,
            center: 0.0,
            eps: vec![-0.1],
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.is_config_error());
        assert!(err.to_string().contains("'eps'"), "message was: {err}");

        let det = DetEventConfig {
            model: None,
            model_path: Some("unused.json".into()),
            shift: 2,
            delta: vec![0.1],
            trials: 10,
            seed: 0,
        };
        let err = det.validate().unwrap_err();
        assert!(err.to_string().contains("'shift'"), "message was: {err}");
    }

    #[test]
    fn exactly_one_source_is_enforced() {
        let neither = CountConfig {
            matrix: None,
            matrix_path: None,
            center: 0.0,
            eps: vec![0.5],
        };
        let err = neither.validate().unwrap_err();
        assert!(err.to_string().contains("'matrix'"), "message was: {err}");

        let both = CountConfig {
            matrix: Some(MatrixDocument {
                dim: 1,
                re: vec![vec![0.0]],
                im: None,
            }),
            matrix_path: Some("x.json".into()),
            center: 0.0,
            eps: vec![0.5],
        };
        assert!(both.validate().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = serde_json::from_str::<CountConfig>(
            "{\n  \"eps\": [0.5],\n  \"bogus\": 1\n}",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus"), "message was: {msg}");
        assert!(msg.contains("line"), "message was: {msg}");
    }

    #[test]
    fn files_load_through_the_path_fields() {
        let m = HermitianMatrix::diagonal(&[0.25, 4.0]).unwrap();
        let f = write_temp(&m.to_json());
        let cfg = WitnessConfig {
            matrix: None,
            matrix_path: Some(f.path().display().to_string()),
            eps: 0.5,
            m: 1,
            strength: None,
            block: None,
        };
        cfg.validate().unwrap();
        assert_eq!(cfg.matrix().unwrap().dim(), 2);

        let missing = CountConfig {
            matrix: None,
            matrix_path: Some("/nonexistent/matrix.json".into()),
            center: 0.0,
            eps: vec![0.5],
        };
        let err = missing.matrix().unwrap_err();
        assert!(err.is_config_error());
        assert!(err.to_string().contains("/nonexistent/matrix.json"));
    }

    #[test]
    fn model_configs_parse_inline_specs() {
        let spec = ModelSpec {
            family: ModelFamily::Anderson,
            graph: GraphSpec::path(3).unwrap(),
            block_size: 1,
            coupling: 1.0,
            energy: 0.0,
            site_dist: SiteDistribution::uniform_interval(1.0).unwrap(),
            hopping: HoppingSpec::Default,
        };
        let cfg = WegnerConfig {
            model: Some(spec.clone()),
            model_path: None,
            eps: vec![0.2, 0.1],
            m: vec![1, 2],
            trials: 50,
            seed: 7,
        };
        cfg.validate().unwrap();
        assert_eq!(cfg.model().unwrap(), spec);

        let text = serde_json::to_string(&cfg).unwrap();
        let back: WegnerConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);

        // defaults: m falls back to [1], seed to 0
        let minimal: WegnerConfig = serde_json::from_str(
            &format!(
                "{{\"model\": {}, \"eps\": [0.1], \"trials\": 5}}",
                serde_json::to_string(&spec).unwrap()
            ),
        )
        .unwrap();
        assert_eq!(minimal.m, vec![1]);
        assert_eq!(minimal.seed, 0);
    }
}
