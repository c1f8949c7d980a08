use serde::Serialize;

use super::config::AnalysisConfig;
use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::stratified::{
    ah_contrast, cell_label, cmh_adjusted_ah, conventional_contrast, resolve_weights,
    standardized_ah_with, stratum_effect, CmhVariant, ContrastResult, ContrastScale, GroupSummary,
    Method, StratumPair, VarianceForm,
};
use crate::survival::{stratum_ah, AhEstimate, Arm};

/// Version of the machine-readable report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Full analysis output. Rates are per base time unit; `unit_scale` is the
/// display multiplier used by the table renderer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tau: f64,
    pub alpha: f64,
    pub unit_scale: f64,
    pub variance_form: VarianceForm,
    /// `[control, treatment]` labels.
    pub arms: [String; 2],
    pub n: [usize; 2],
    pub strata: Vec<StratumReport>,
    pub methods: Vec<MethodReport>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumReport {
    pub label: String,
    pub n: [usize; 2],
    /// Events at or before tau per arm.
    pub events: [usize; 2],
    /// `None` when the arm has no events at or before tau.
    pub control: Option<AhEstimate>,
    pub treatment: Option<AhEstimate>,
    pub difference: ContrastResult,
    /// `None` when either arm has no events at or before tau.
    pub ratio: Option<ContrastResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodReport {
    pub method: Method,
    /// Normalized stratum weights behind the difference estimate.
    pub weights_difference: Vec<f64>,
    /// Normalized stratum weights behind the ratio estimate.
    pub weights_ratio: Vec<f64>,
    /// `[control, treatment]` group AHs; absent for the conventional method.
    pub groups: Option<[GroupSummary; 2]>,
    pub difference: ContrastResult,
    pub ratio: ContrastResult,
}

impl AnalysisReport {
    pub fn method(&self, method: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == method)
    }
}

fn normalized(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|w| w / total).collect()
}

fn block(
    method: Method,
    weights_difference: Vec<f64>,
    weights_ratio: Vec<f64>,
    mut difference: ContrastResult,
    mut ratio: ContrastResult,
) -> MethodReport {
    let groups = difference.group_summaries.take();
    ratio.group_summaries = None;
    MethodReport {
        method,
        weights_difference,
        weights_ratio,
        groups,
        difference,
        ratio,
    }
}

/// Per-stratum AH and every selected stratified comparison at `config.tau`.
pub fn analyze(dataset: &Dataset, config: &AnalysisConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let (tau, alpha, form) = (config.tau, config.alpha, config.variance_form);
    let cells = dataset.stratum_cells();

    let mut fits = Vec::with_capacity(cells.len());
    let mut diagnostics = Vec::new();
    for cell in &cells {
        let mut fit = |arm: Arm| -> Result<Option<AhEstimate>> {
            let est = match stratum_ah(cell.arm(arm), tau) {
                Ok(est) => est,
                Err(Error::ZeroEvents { .. }) => return Ok(None),
                Err(e) => return Err(e.in_cell(cell_label(cell, arm))),
            };
            if est.variance_dominated() {
                diagnostics.push(format!(
                    "{}: one risk-set term carries {:.0}% of the variance sum",
                    cell_label(cell, arm),
                    100.0 * est.max_term_share
                ));
            }
            Ok(Some(est))
        };
        fits.push((fit(Arm::Control)?, fit(Arm::Treatment)?));
    }

    let mut strata = Vec::with_capacity(cells.len());
    for (cell, (control, treatment)) in cells.iter().zip(&fits) {
        let g0 = standardized_ah_with(&[cell.control], &[1.0], tau, form)?;
        let g1 = standardized_ah_with(&[cell.treatment], &[1.0], tau, form)?;
        let ratio = match (control, treatment) {
            (Some(_), Some(_)) => Some(ah_contrast(&g0, &g1, ContrastScale::Ratio, alpha)?),
            _ => None,
        };
        strata.push(StratumReport {
            label: cell.label.to_string(),
            n: [cell.control.len(), cell.treatment.len()],
            events: [g0.per_stratum[0].events, g1.per_stratum[0].events],
            control: control.clone(),
            treatment: treatment.clone(),
            difference: ah_contrast(&g0, &g1, ContrastScale::Difference, alpha)?,
            ratio,
        });
    }

    // stratum-level contrasts need events in every cell
    let pairs = || -> Result<Vec<StratumPair>> {
        cells
            .iter()
            .zip(&fits)
            .map(|(cell, fit)| match fit {
                (Some(c), Some(t)) => Ok(StratumPair {
                    control: c.clone(),
                    treatment: t.clone(),
                }),
                (None, _) => Err(Error::ZeroEvents {
                    cell: Some(cell_label(cell, Arm::Control)),
                }),
                (_, None) => Err(Error::ZeroEvents {
                    cell: Some(cell_label(cell, Arm::Treatment)),
                }),
            })
            .collect()
    };

    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        methods.push(match method {
            Method::Proposed => {
                let w = resolve_weights(&config.weights.scheme(cells.len()), &cells, tau)?;
                let g0 = standardized_ah_with(&dataset.arm_samples(Arm::Control), &w, tau, form)?;
                let g1 = standardized_ah_with(&dataset.arm_samples(Arm::Treatment), &w, tau, form)?;
                let d = ah_contrast(&g0, &g1, ContrastScale::Difference, alpha)?;
                let r = ah_contrast(&g0, &g1, ContrastScale::Ratio, alpha)?;
                block(method, w.clone(), w, d, r)
            }
            Method::Conventional => {
                let pairs = pairs()?;
                let precision = |scale| -> Vec<f64> {
                    normalized(
                        &pairs
                            .iter()
                            .map(|p| 1.0 / stratum_effect(&p.control, &p.treatment, scale).1)
                            .collect::<Vec<_>>(),
                    )
                };
                let d = conventional_contrast(&pairs, ContrastScale::Difference, alpha)?;
                let r = conventional_contrast(&pairs, ContrastScale::Ratio, alpha)?;
                block(
                    method,
                    precision(ContrastScale::Difference),
                    precision(ContrastScale::Ratio),
                    d,
                    r,
                )
            }
            Method::Cmh1 | Method::Cmh2 => {
                let variant = if method == Method::Cmh1 {
                    CmhVariant::Cmh1
                } else {
                    CmhVariant::Cmh2
                };
                let est = cmh_adjusted_ah(&pairs()?, variant)?;
                let d = est.contrast(ContrastScale::Difference, alpha)?;
                let r = est.contrast(ContrastScale::Ratio, alpha)?;
                block(
                    method,
                    normalized(&est.weights),
                    normalized(&est.ratio_weights),
                    d,
                    r,
                )
            }
        });
    }

    let n = [
        dataset
            .records
            .iter()
            .filter(|r| r.arm == Arm::Control)
            .count(),
        dataset
            .records
            .iter()
            .filter(|r| r.arm == Arm::Treatment)
            .count(),
    ];
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tau,
        alpha,
        unit_scale: config.unit_scale,
        variance_form: form,
        arms: dataset.arm_labels.clone(),
        n,
        strata,
        methods,
        diagnostics,
    })
}
