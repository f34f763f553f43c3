//! Periodic grids, spectral transforms, Fourier multipliers, and `L^q`
//! quadrature.

mod grid;
pub mod io;
mod norms;
mod transform;

pub use grid::{make_grid, Centering, GridSpec, SampledField, Spectrum};
pub use norms::{lq_norm, power_weighted_lq_norm, weight_table, weighted_lq_norm, WeightRule};
pub use transform::{
    apply_multiplier, forward_transform, fractional_laplacian, gradient, inverse_transform,
    is_mean_zero, partial_derivative, resample, riesz_transform, vector_magnitude,
};

