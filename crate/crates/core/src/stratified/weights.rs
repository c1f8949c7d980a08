use serde::Serialize;

use super::contrast::ContrastScale;
use super::conventional::stratum_effect;
use crate::error::{Error, Result};
use crate::survival::{stratum_ah, Arm, Observation, TruncatedFit};

/// Both arms of one stratum.
#[derive(Debug, Clone, Copy)]
pub struct StratumCell<'a> {
    pub label: &'a str,
    pub control: &'a [Observation],
    pub treatment: &'a [Observation],
}

impl<'a> StratumCell<'a> {
    pub fn arm(&self, arm: Arm) -> &'a [Observation] {
        match arm {
            Arm::Control => self.control,
            Arm::Treatment => self.treatment,
        }
    }

    pub(crate) fn check_populated(&self) -> Result<()> {
        for arm in Arm::BOTH {
            if self.arm(arm).is_empty() {
                return Err(Error::MissingStratumArm {
                    stratum: self.label.to_string(),
                    arm: arm.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// How the standardization weights `w_k` are chosen.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum WeightScheme {
    /// Positive weights, one per stratum in stratum order.
    UserSupplied(Vec<f64>),
    /// Proportional to the combined-arm stratum size.
    SampleSizeProportional,
    /// `n1 n0 R1 R0 / (n1 + n0)`.
    Cmh1,
    /// `n1 n0 R1 R0 / (n1 R1 + n0 R0)`.
    Cmh2,
    /// Reciprocal variance of the stratum contrast on the given scale.
    InverseVariance(ContrastScale),
}

fn normalize(raw: Vec<f64>) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::InvalidInput("no strata".into()));
    }
    if let Some(bad) = raw.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "weights must be positive, got {bad}"
        )));
    }
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// Normalize `weights` to sum to one; every entry must be positive.
pub fn normalize_weights(weights: &[f64]) -> Result<Vec<f64>> {
    normalize(weights.to_vec())
}

/// Resolve a scheme into normalized positive weights, one per cell.
pub fn resolve_weights(
    scheme: &WeightScheme,
    cells: &[StratumCell<'_>],
    tau: f64,
) -> Result<Vec<f64>> {
    for cell in cells {
        cell.check_populated()?;
    }
    let raw = match scheme {
        WeightScheme::UserSupplied(w) => {
            if w.len() != cells.len() {
                return Err(Error::InvalidInput(format!(
                    "{} weights supplied for {} strata",
                    w.len(),
                    cells.len()
                )));
            }
            w.clone()
        }
        WeightScheme::SampleSizeProportional => cells
            .iter()
            .map(|c| (c.control.len() + c.treatment.len()) as f64)
            .collect(),
        WeightScheme::Cmh1 | WeightScheme::Cmh2 => {
            let mut raw = Vec::with_capacity(cells.len());
            for c in cells {
                let fit0 = TruncatedFit::new(c.control, tau)
                    .map_err(|e| e.in_cell(cell_label(c, Arm::Control)))?;
                let fit1 = TruncatedFit::new(c.treatment, tau)
                    .map_err(|e| e.in_cell(cell_label(c, Arm::Treatment)))?;
                let (n0, n1) = (fit0.n as f64, fit1.n as f64);
                let (r0, r1) = (fit0.r_hat, fit1.r_hat);
                raw.push(match scheme {
                    WeightScheme::Cmh1 => n1 * n0 * r1 * r0 / (n1 + n0),
                    _ => n1 * n0 * r1 * r0 / (n1 * r1 + n0 * r0),
                });
            }
            raw
        }
        WeightScheme::InverseVariance(scale) => {
            let mut raw = Vec::with_capacity(cells.len());
            for c in cells {
                let e0 = stratum_ah(c.control, tau)
                    .map_err(|e| e.in_cell(cell_label(c, Arm::Control)))?;
                let e1 = stratum_ah(c.treatment, tau)
                    .map_err(|e| e.in_cell(cell_label(c, Arm::Treatment)))?;
                let (_, var) = stratum_effect(&e0, &e1, *scale);
                raw.push(1.0 / var);
            }
            raw
        }
    };
    normalize(raw)
}

pub(crate) fn cell_label(cell: &StratumCell<'_>, arm: Arm) -> String {
    format!("stratum {}, {} arm", cell.label, arm)
}
