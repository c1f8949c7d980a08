use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stratified::{Method, VarianceForm, WeightScheme};

/// Standardization weights for the proposed method.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum WeightChoice {
    Equal,
    Size,
    User(Vec<f64>),
}

impl WeightChoice {
    pub fn scheme(&self, strata: usize) -> WeightScheme {
        match self {
            WeightChoice::Equal => WeightScheme::UserSupplied(vec![1.0; strata]),
            WeightChoice::Size => WeightScheme::SampleSizeProportional,
            WeightChoice::User(w) => WeightScheme::UserSupplied(w.clone()),
        }
    }
}

impl FromStr for WeightChoice {
    type Err = Error;

    /// `equal`, `size`, or a comma-separated list of positive numbers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "equal" => return Ok(WeightChoice::Equal),
            "size" => return Ok(WeightChoice::Size),
            _ => {}
        }
        let values = s
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .ok()
                    .filter(|w| w.is_finite() && *w > 0.0)
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("weight {v:?} is not a positive number"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightChoice::User(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Table,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" => Ok(OutputFormat::Table),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidInput(format!(
                "unknown format {other:?} (table or json)"
            ))),
        }
    }
}

/// Settings for one run of [`analyze`](super::analyze).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub tau: f64,
    pub alpha: f64,
    pub methods: Vec<Method>,
    pub weights: WeightChoice,
    /// Display multiplier for rates; 100 gives events per 100 person-time units.
    pub unit_scale: f64,
    pub format: OutputFormat,
    pub variance_form: VarianceForm,
}

impl AnalysisConfig {
    /// All methods, size-proportional weights, alpha 0.05, rates per 100.
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            alpha: 0.05,
            methods: Method::ALL.to_vec(),
            weights: WeightChoice::Size,
            unit_scale: 100.0,
            format: OutputFormat::Table,
            variance_form: VarianceForm::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidInput("select at least one method".into()));
        }
        if !(self.unit_scale.is_finite() && self.unit_scale > 0.0) {
            return Err(Error::InvalidInput(format!(
                "unit scale must be positive, got {}",
                self.unit_scale
            )));
        }
        Ok(())
    }
}

/// Parse a comma-separated method list, dropping duplicates.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    let mut methods = Vec::new();
    for item in list.split(',').filter(|s| !s.trim().is_empty()) {
        let m: Method = item.parse()?;
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    Ok(methods)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_choices() {
        assert_eq!(
            "equal".parse::<WeightChoice>().unwrap(),
            WeightChoice::Equal
        );
        assert_eq!("Size".parse::<WeightChoice>().unwrap(), WeightChoice::Size);
        assert_eq!(
            "2, 1".parse::<WeightChoice>().unwrap(),
            WeightChoice::User(vec![2.0, 1.0])
        );
        assert!("1,-1".parse::<WeightChoice>().is_err());
        assert!("abc".parse::<WeightChoice>().is_err());
    }

    #[test]
    fn methods_and_validation() {
        assert_eq!(
            parse_methods("cmh1,proposed,cmh1").unwrap(),
            vec![Method::Cmh1, Method::Proposed]
        );
        assert!(parse_methods("cox").is_err());
        let mut c = AnalysisConfig::new(48.0);
        assert!(c.validate().is_ok());
        c.methods.clear();
        assert!(c.validate().is_err());
        assert!(AnalysisConfig::new(0.0).validate().is_err());
    }
}
