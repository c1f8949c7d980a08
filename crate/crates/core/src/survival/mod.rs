//! One-sample survival machinery: Kaplan–Meier, RMST, cumulative-hazard
//! increments, at-risk fractions and the per-stratum average hazard.

mod ah;
mod km;
mod step;

use serde::{Deserialize, Serialize};

pub use ah::{stratum_ah, AhEstimate};
pub(crate) use km::TruncatedFit;
pub use km::{
    at_risk_fraction, cumulative_incidence, hazard_increments, kaplan_meier, rmst, KmFit,
};
pub use step::StepFunction;

/// Observed follow-up `(X, Delta)` of one subject within a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// `min(T, C)`, in months.
    pub time: f64,
    /// `true` when the event was observed.
    pub event: bool,
}

impl Observation {
    pub fn new(time: f64, event: bool) -> Self {
        Self { time, event }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arm {
    Control = 0,
    Treatment = 1,
}

impl Arm {
    pub const BOTH: [Arm; 2] = [Arm::Control, Arm::Treatment];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Arm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Arm::Control => "control",
            Arm::Treatment => "treatment",
        })
    }
}

/// Zero-based stratum index assigned at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratumId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubjectRecord {
    pub time: f64,
    pub event: bool,
    pub arm: Arm,
    pub stratum: StratumId,
}

impl SubjectRecord {
    pub fn observation(&self) -> Observation {
        Observation {
            time: self.time,
            event: self.event,
        }
    }
}
