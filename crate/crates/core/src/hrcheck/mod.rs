//! Gram matrices, signatures, class division and Hodge–Riemann verdicts.

mod gram;
mod pair;
mod pointwise;
mod search;

pub use gram::{gram, relative_gap, signature, signature_with_evidence, GramForm};
pub use pair::{
    divide, find_certifying_h, has_hr_property, is_hr_pair, kernel_negative_definite, pos_cone_contains,
    PosConeReport,
};
pub use pointwise::{pointwise_hr_pair, pointwise_hr_pair_in};
pub use search::{run_trial, sample_search, trial_forms, SearchConfig, SearchReport, TrialRecord};
