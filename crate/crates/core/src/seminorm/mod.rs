//! Sup, oscillation, r-variation and λ-jump seminorms of sampled families.

mod field;
mod scalar;
mod structure;

pub use field::{default_lambda_grid, lambda_grid_for, seminorm_field, SeminormFieldResult, DEFAULT_LAMBDA_POINTS};
pub use scalar::{
    default_anchors, jump_bruteforce, jump_count, jump_values, oscillation, oscillation_values, sup_seminorm,
    sup_values, variation, variation_bruteforce, variation_values, ScalarSequence, SeminormKind,
    JUMP_BRUTEFORCE_CAP, VARIATION_BRUTEFORCE_CAP,
};
pub use structure::{
    le_with_slack, long_short_split, long_short_split_field, rademacher_menshov_check, weak_lp_norm,
    LongShortField, LongShortSplit, RmReport,
};
