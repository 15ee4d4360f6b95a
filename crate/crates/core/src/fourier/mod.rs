//! Exponential sums, Gauss sums, oscillatory integrals, denominator sets and
//! the bump-function projections built from them.

pub mod approx;
pub mod bump;
pub mod expsum;
pub mod gauss;
pub mod iw;
pub mod multiplier;
pub mod phi;
pub mod projection;
pub mod quad;
pub mod torus;

pub use approx::{approximation_error, near_zero_offsets, ApproxReport, ApproxRow};
pub use bump::{bump_eta, BumpProfile};
pub use expsum::{e, exponential_sum_m, ExponentialSum, FnMultiplier, Multiplier};
pub use gauss::{gauss_decay_fit, gauss_sum, GaussFit, GaussFitOptions, GaussFitOutcome, GaussRow};
pub use iw::{
    build_p_leq, build_sigma, for_each_fraction, jordan_totient, sigma_size, DenominatorFamily, DenominatorSet,
    InitialSegment, IwFamily, DEFAULT_SIGMA_CAP,
};
pub use multiplier::{multiplier_apply, multiplier_apply_padded, plancherel_check, PlancherelReport};
pub use phi::{decay_check_phi, oscillatory_integral_phi, phi_normalized, sinc_2pi, PhiDecayReport, PhiDecayRow};
pub use projection::{projection_xi, ProjectionParams, ProjectionVariant, Projector};
pub use torus::{reduce, torus_diff, FrequencyPoint, RationalFraction};
