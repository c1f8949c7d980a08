//! Stratified inference on the average hazard: the standardized AH with its
//! contrasts, the inverse-variance combiner, and CMH-type adjusted AHs.

mod cmh;
mod contrast;
mod conventional;
mod standardized;
mod weights;

pub use cmh::{cmh_adjusted_ah, CmhEstimate, CmhVariant};
pub use contrast::{ah_contrast, ContrastResult, ContrastScale, GroupSummary, Method};
pub use conventional::{
    conventional_contrast, inverse_variance_combine, stratum_effect, StratumPair,
};
pub(crate) use standardized::from_fits;
pub use standardized::{
    standardized_ah, standardized_ah_with, StandardizedAhEstimate, StratumTerms, VarianceForm,
};
pub(crate) use weights::cell_label;
pub use weights::{normalize_weights, resolve_weights, StratumCell, WeightScheme};
