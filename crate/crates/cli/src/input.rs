//! Problem-file schema and conversion into library types.

use hardyball::{BallPoint, ComplexPoly, Config, MultiIndex, NormOrder};
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

/// Top-level problem file. Unknown fields are rejected so that typos fail
/// loudly instead of silently falling back to defaults.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: String,
    /// `pick`: an array of `[re, im]` scalars. Other interpolation
    /// commands: an array of points, each an array of `[re, im]` pairs.
    #[serde(default)]
    pub points: Option<serde_json::Value>,
    #[serde(default)]
    pub values: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub polynomial: Option<PolyDto>,
    #[serde(default)]
    pub monomial: Option<MonomialDto>,
    #[serde(default)]
    pub order: Option<String>,
    #[serde(default)]
    pub truncation_degree: Option<u32>,
    #[serde(default)]
    pub config: Option<ConfigDto>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDto {
    pub dimension: usize,
    pub terms: Vec<TermDto>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub exponents: Vec<u32>,
    pub coeff: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDto {
    pub alpha: Vec<u32>,
    #[serde(default)]
    pub beta: Option<Vec<u32>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDto {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mc_samples: Option<u64>,
    #[serde(default)]
    pub grid_points_per_dim: Option<usize>,
    #[serde(default)]
    pub tol_psd: Option<f64>,
    #[serde(default)]
    pub tol_bisect: Option<f64>,
    #[serde(default)]
    pub solver_tol: Option<f64>,
    #[serde(default)]
    pub inflation_factor: Option<f64>,
    #[serde(default)]
    pub max_degree: Option<u32>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text)
            .map_err(|e| CliError::invalid(format!("problem file does not match the schema: {e}")))?;
        if file.version != "1" {
            return Err(CliError::invalid(format!(
                "unsupported problem file version {:?}",
                file.version
            )));
        }
        Ok(file)
    }

    /// Applies file-level overrides on top of defaults. Command-line flags
    /// are layered on afterwards by the caller.
    pub fn config(&self) -> Config {
        let mut cfg = Config::default();
        if let Some(o) = &self.config {
            if let Some(v) = o.seed {
                cfg.seed = v;
            }
            if let Some(v) = o.mc_samples {
                cfg.mc_samples = v;
            }
            if let Some(v) = o.grid_points_per_dim {
                cfg.grid_points_per_dim = v;
            }
            if let Some(v) = o.tol_psd {
                cfg.tol_psd = v;
            }
            if let Some(v) = o.tol_bisect {
                cfg.tol_bisect = v;
            }
            if let Some(v) = o.solver_tol {
                cfg.solver_tol = v;
            }
            if let Some(v) = o.inflation_factor {
                cfg.inflation_factor = Some(v);
            }
            if let Some(v) = o.max_degree {
                cfg.max_degree = v;
            }
        }
        cfg
    }

    /// Disc nodes for `pick`: a flat list of `[re, im]` scalars.
    pub fn disc_points(&self) -> Result<Vec<BallPoint>, CliError> {
        let raw = self.points_value()?;
        let scalars: Vec<[f64; 2]> = serde_json::from_value(raw.clone())
            .map_err(|e| CliError::invalid(format!("points must be [re, im] scalars: {e}")))?;
        scalars
            .iter()
            .map(|[re, im]| {
                BallPoint::disc(Complex64::new(*re, *im))
                    .map_err(|e| CliError::invalid(e.to_string()))
            })
            .collect()
    }

    /// Ball nodes for the several-variable commands: a list of points,
    /// each an array of `[re, im]` coordinate pairs.
    pub fn ball_points(&self) -> Result<Vec<BallPoint>, CliError> {
        let raw = self.points_value()?;
        let nested: Vec<Vec<[f64; 2]>> = serde_json::from_value(raw.clone()).map_err(|e| {
            CliError::invalid(format!(
                "points must be arrays of [re, im] coordinate pairs: {e}"
            ))
        })?;
        let dims: Vec<usize> = nested.iter().map(Vec::len).collect();
        if dims.windows(2).any(|w| w[0] != w[1]) {
            return Err(CliError::invalid("points of mixed dimension".into()));
        }
        nested
            .iter()
            .map(|coords| {
                BallPoint::new(
                    coords
                        .iter()
                        .map(|[re, im]| Complex64::new(*re, *im))
                        .collect(),
                )
                .map_err(|e| CliError::invalid(e.to_string()))
            })
            .collect()
    }

    fn points_value(&self) -> Result<&serde_json::Value, CliError> {
        self.points
            .as_ref()
            .ok_or_else(|| CliError::invalid("this command requires a \"points\" field".into()))
    }

    pub fn target_values(&self) -> Result<Vec<Complex64>, CliError> {
        let values = self
            .values
            .as_ref()
            .ok_or_else(|| CliError::invalid("this command requires a \"values\" field".into()))?;
        Ok(values
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect())
    }

    pub fn polynomial(&self) -> Result<ComplexPoly, CliError> {
        let dto = self
            .polynomial
            .as_ref()
            .ok_or_else(|| CliError::invalid("this command requires a \"polynomial\" field".into()))?;
        ComplexPoly::from_terms(
            dto.dimension,
            dto.terms.iter().map(|t| {
                (
                    MultiIndex::new(t.exponents.clone()),
                    Complex64::new(t.coeff[0], t.coeff[1]),
                )
            }),
        )
        .map_err(|e| CliError::invalid(e.to_string()))
    }

    pub fn norm_order(&self) -> Result<NormOrder, CliError> {
        match self.order.as_deref() {
            Some("L1") => Ok(NormOrder::L1),
            Some("L2") => Ok(NormOrder::L2),
            Some("Linf") => Ok(NormOrder::Linf),
            Some(other) => Err(CliError::invalid(format!(
                "unknown norm order {other:?}; expected L1, L2, or Linf"
            ))),
            None => Err(CliError::invalid(
                "integrating a polynomial requires an \"order\" field".into(),
            )),
        }
    }
}
