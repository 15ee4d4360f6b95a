//! Averaging kernels and their action on finitely supported grid functions.

mod family;
mod fft;
mod grid;
pub mod io;
mod kernel;

pub use family::{
    apply_auto, average_family, average_family_cached, is_u_time, KernelCache, SampledFamily, TimeGrid,
    TimeGridKind, DEFAULT_FAMILY_BUDGET, MAX_REFINEMENT,
};
pub use fft::{apply_fast, fft_nd, MAX_PADDED_CELLS};
pub(crate) use fft::{padded_shape, place};
pub use grid::{lp_norm, GridFunction, IntBox};
pub use kernel::{apply_direct, build_kernel, RadonKernel};
