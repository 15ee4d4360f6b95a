//! Discrete averaging operators along polynomial orbits, their variational
//! seminorms, and the exponential-sum machinery used to analyse them.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`] – convex bodies, integer polynomial maps, canonical lifting.
//! * [`radon`] – averaging kernels, grid functions, direct and FFT convolution.
//! * [`seminorm`] – sup, oscillation, r-variation and λ-jump seminorms.
//! * [`fourier`] – exponential sums, Gauss sums, oscillatory integrals,
//!   rational frequency sets and the projection multipliers built on them.
//! * [`harness`] – experiment drivers (constant estimation, sweeps, suites).
//! * [`report`] – CSV/JSON/SVG emission.

pub mod error;
pub mod fourier;
pub mod harness;
pub mod lattice;
pub mod radon;
pub mod report;
pub mod seminorm;

pub use error::{Error, Result};
pub use num_complex::Complex64;
