//! Average hazard with survival weight (AH) for right-censored data.
//!
//! - [`survival`]: Kaplan–Meier, RMST, hazard increments and the
//!   per-stratum AH with its asymptotic variance.
//! - [`stratified`]: standardized AH with difference/ratio contrasts, the
//!   inverse-variance combiner and CMH-type adjusted AHs.
//! - [`sim`]: Weibull data generation, analytic truths and a replicated
//!   bias/coverage study.
//! - [`io`]: delimited dataset ingestion, the `analyze` and `simulate`
//!   workflows and report rendering.

pub mod error;
pub mod io;
pub mod normal;
pub mod sim;
pub mod stratified;
pub mod survival;

pub use error::{Error, Result};
