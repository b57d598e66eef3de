//! Sufficient conditions, sieve criteria, thresholds and pair classification.

pub mod decide;
pub mod recipe;
pub mod report;
pub mod sieve;
pub mod threshold;

pub use decide::{
    bounded_strategy, classify_many, classify_pair, decide_no_bb, decide_yes_bb, default_strategy,
    primitive_normal_count, replay, Certificate, ClassifyOptions, NoBbCertificate, PairClassification, Rule, Status,
    YesBbCertificate, DEFAULT_COUNT_CAP,
};
pub use recipe::{EllSpec, GSpec, PairData};
pub use sieve::{
    bounded_corollary, corollary_condition, corollary_condition_for, sieve_condition, sieve_identity_check,
    theorem_bound, BoundedCorollaryReport, CorollaryReport, SieveIdentityReport, SieveReport, TheoremBound,
};
pub use threshold::{casen3_bound, threshold_n, threshold_q, Regime};
