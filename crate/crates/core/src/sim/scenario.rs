//! Data-generating scenarios and their flat key-value file format.
//!
//! ```toml
//! name = "paper_pattern1_n1400"
//! n_per_arm = 700
//! replications = 3000
//! seed = 20240501
//! alpha = 0.05
//! taus = [45.0, 48.0, 51.0]
//! stratum_fractions = [0.7, 0.3]
//! weights = [0.7, 0.3]
//! control_shape = [1.46, 1.37]
//! control_scale = [55.87, 87.64]
//! treatment_shape = [1.52, 1.43]
//! treatment_scale = [69.62, 118.65]
//! censoring = "weibull"        # or "none"
//! censoring_shape = 8.21       # required for "weibull"
//! censoring_scale = 47.79
//! variance_form = "published"  # optional; or "influence"
//! ```
//!
//! Per-stratum arrays are in stratum order and must all have the same length.

use serde::{Deserialize, Serialize};

use super::weibull::WeibullParams;
use crate::error::{Error, Result};
use crate::stratified::VarianceForm;
use crate::survival::Arm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Censoring {
    /// Independent Weibull censoring shared by every arm and stratum.
    Weibull(WeibullParams),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimScenario {
    pub name: String,
    /// Event-time laws indexed `[arm][stratum]`.
    pub event_params: [Vec<WeibullParams>; 2],
    pub censoring: Censoring,
    pub n_per_arm: usize,
    pub stratum_fractions: Vec<f64>,
    pub weights: Vec<f64>,
    pub taus: Vec<f64>,
    pub alpha: f64,
    pub replications: usize,
    pub seed: u64,
    pub variance_form: VarianceForm,
}

/// Censoring pattern of the two-stratum trial-based design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignPattern {
    /// Common Weibull(8.21, 47.79) censoring.
    RandomCensoring,
    /// No censoring.
    NoCensoring,
}

const CONTROL_PARAMS: [(f64, f64); 2] = [(1.46, 55.87), (1.37, 87.64)];
const TREATMENT_PARAMS: [(f64, f64); 2] = [(1.52, 69.62), (1.43, 118.65)];
const CENSORING_PARAMS: (f64, f64) = (8.21, 47.79);

impl SimScenario {
    /// Two-stratum design built from the Weibull fits to a prostate cancer
    /// trial; `total_size` is split evenly between arms.
    pub fn reference_design(pattern: DesignPattern, total_size: usize) -> Self {
        let to_params = |p: &[(f64, f64); 2]| {
            p.iter()
                .map(|&(k, l)| WeibullParams { shape: k, scale: l })
                .collect()
        };
        let (censoring, tag) = match pattern {
            DesignPattern::RandomCensoring => (
                Censoring::Weibull(WeibullParams {
                    shape: CENSORING_PARAMS.0,
                    scale: CENSORING_PARAMS.1,
                }),
                1,
            ),
            DesignPattern::NoCensoring => (Censoring::None, 2),
        };
        Self {
            name: format!("paper_pattern{tag}_n{total_size}"),
            event_params: [to_params(&CONTROL_PARAMS), to_params(&TREATMENT_PARAMS)],
            censoring,
            n_per_arm: total_size / 2,
            stratum_fractions: vec![0.7, 0.3],
            weights: vec![0.7, 0.3],
            taus: vec![45.0, 48.0, 51.0],
            alpha: 0.05,
            replications: 3000,
            seed: 20240501,
            variance_form: VarianceForm::Published,
        }
    }

    pub fn strata(&self) -> usize {
        self.stratum_fractions.len()
    }

    pub fn params(&self, arm: Arm, stratum: usize) -> WeibullParams {
        self.event_params[arm.index()][stratum]
    }

    /// Deterministic subjects per stratum within each arm: rounded shares,
    /// with the last stratum taking the remainder.
    pub fn stratum_counts(&self) -> Vec<usize> {
        let k = self.strata();
        let mut counts: Vec<usize> = self.stratum_fractions[..k - 1]
            .iter()
            .map(|f| (f * self.n_per_arm as f64).round() as usize)
            .collect();
        let used: usize = counts.iter().sum();
        counts.push(self.n_per_arm.saturating_sub(used));
        counts
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |key: &str, message: String| {
            Err(Error::Config {
                key: key.into(),
                message,
            })
        };
        let k = self.stratum_fractions.len();
        if k == 0 {
            return cfg("stratum_fractions", "at least one stratum required".into());
        }
        if self.stratum_fractions.iter().any(|f| f.is_nan() || *f <= 0.0) {
            return cfg("stratum_fractions", "fractions must be positive".into());
        }
        if (self.stratum_fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return cfg("stratum_fractions", "fractions must sum to 1".into());
        }
        if self.weights.len() != k || self.weights.iter().any(|w| w.is_nan() || *w <= 0.0) {
            return cfg("weights", format!("expected {k} positive weights"));
        }
        for (arm, key) in [(Arm::Control, "control"), (Arm::Treatment, "treatment")] {
            if self.event_params[arm.index()].len() != k {
                return cfg(&format!("{key}_shape"), format!("expected {k} values"));
            }
            for p in &self.event_params[arm.index()] {
                if let Err(e) = WeibullParams::new(p.shape, p.scale) {
                    return cfg(&format!("{key}_shape"), e.to_string());
                }
            }
        }
        if let Censoring::Weibull(p) = self.censoring {
            if let Err(e) = WeibullParams::new(p.shape, p.scale) {
                return cfg("censoring_shape", e.to_string());
            }
        }
        if self.n_per_arm == 0 {
            return cfg("n_per_arm", "must be positive".into());
        }
        if self.stratum_counts().contains(&0) {
            return cfg("n_per_arm", "too small to populate every stratum".into());
        }
        if self.taus.is_empty() || self.taus.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return cfg("taus", "need at least one positive tau".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return cfg("alpha", "must lie in (0, 1)".into());
        }
        if self.replications == 0 {
            return cfg("replications", "must be at least 1".into());
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config {
            key: toml_error_key(&e),
            message: e.message().to_string(),
        })?;
        file.into_scenario()
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        let file = ScenarioFile::from(self);
        toml::to_string(&file).expect("scenario serializes")
    }
}

fn toml_error_key(e: &toml::de::Error) -> String {
    let msg = e.message();
    // serde messages name the field in backticks: "missing field `seed`"
    msg.split('`').nth(1).unwrap_or("<file>").to_string()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    n_per_arm: usize,
    replications: usize,
    seed: u64,
    #[serde(default = "default_alpha")]
    alpha: f64,
    taus: Vec<f64>,
    stratum_fractions: Vec<f64>,
    weights: Vec<f64>,
    control_shape: Vec<f64>,
    control_scale: Vec<f64>,
    treatment_shape: Vec<f64>,
    treatment_scale: Vec<f64>,
    censoring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    censoring_shape: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    censoring_scale: Option<f64>,
    #[serde(default)]
    variance_form: VarianceForm,
}

fn default_alpha() -> f64 {
    0.05
}

impl ScenarioFile {
    fn into_scenario(self) -> Result<SimScenario> {
        let zip = |shape: &[f64], scale: &[f64], key: &str| -> Result<Vec<WeibullParams>> {
            if shape.len() != scale.len() {
                return Err(Error::Config {
                    key: format!("{key}_scale"),
                    message: format!("{} shapes but {} scales", shape.len(), scale.len()),
                });
            }
            Ok(shape
                .iter()
                .zip(scale)
                .map(|(&shape, &scale)| WeibullParams { shape, scale })
                .collect())
        };
        let censoring = match self.censoring.to_ascii_lowercase().as_str() {
            "none" => Censoring::None,
            "weibull" => {
                let missing = |key: &str| Error::Config {
                    key: key.into(),
                    message: "required when censoring = \"weibull\"".into(),
                };
                Censoring::Weibull(WeibullParams {
                    shape: self
                        .censoring_shape
                        .ok_or_else(|| missing("censoring_shape"))?,
                    scale: self
                        .censoring_scale
                        .ok_or_else(|| missing("censoring_scale"))?,
                })
            }
            other => {
                return Err(Error::Config {
                    key: "censoring".into(),
                    message: format!("expected \"weibull\" or \"none\", got {other:?}"),
                })
            }
        };
        let scenario = SimScenario {
            event_params: [
                zip(&self.control_shape, &self.control_scale, "control")?,
                zip(&self.treatment_shape, &self.treatment_scale, "treatment")?,
            ],
            name: self.name,
            censoring,
            n_per_arm: self.n_per_arm,
            stratum_fractions: self.stratum_fractions,
            weights: self.weights,
            taus: self.taus,
            alpha: self.alpha,
            replications: self.replications,
            seed: self.seed,
            variance_form: self.variance_form,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

impl From<&SimScenario> for ScenarioFile {
    fn from(s: &SimScenario) -> Self {
        let split = |arm: Arm| -> (Vec<f64>, Vec<f64>) {
            s.event_params[arm.index()]
                .iter()
                .map(|p| (p.shape, p.scale))
                .unzip()
        };
        let (control_shape, control_scale) = split(Arm::Control);
        let (treatment_shape, treatment_scale) = split(Arm::Treatment);
        let (censoring, censoring_shape, censoring_scale) = match s.censoring {
            Censoring::Weibull(p) => ("weibull".to_string(), Some(p.shape), Some(p.scale)),
            Censoring::None => ("none".to_string(), None, None),
        };
        Self {
            name: s.name.clone(),
            n_per_arm: s.n_per_arm,
            replications: s.replications,
            seed: s.seed,
            alpha: s.alpha,
            taus: s.taus.clone(),
            stratum_fractions: s.stratum_fractions.clone(),
            weights: s.weights.clone(),
            control_shape,
            control_scale,
            treatment_shape,
            treatment_scale,
            censoring,
            censoring_shape,
            censoring_scale,
            variance_form: s.variance_form,
        }
    }
}
