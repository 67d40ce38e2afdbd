//! Shape-constrained density estimation by warping piecewise-linear templates.
//!
//! Densities on `[0, 1]` are written as `p = g∘γ / ∫ g∘γ` where `g` is a
//! template with the requested sequence of modes and antimodes and `γ` an
//! increasing warp represented by Fourier coefficients of its square-root
//! slope on the tangent space of the unit sphere. Warping never changes the
//! number of modes, so every estimate has exactly the requested shape.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod conditional;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod geometry;
pub mod optimize;
pub mod quad;
pub mod scalar;
pub mod shape;
pub mod templates;

pub use conditional::{
    adaptive_bandwidth, compute_weights, fit_conditional, pilot_bandwidth, Bandwidth, ConditionalEstimate,
    ConditionalFitConfig, WeightVector,
};
pub use error::{Error, Result};
pub use estimator::{
    estimate_support, fit, fit_fixed_j, log_likelihood, rescale_to_unit, DensityEstimate, FitConfig, FixedFit, Support,
};
pub use geometry::{
    coeffs_to_warp, exp_map, fourier_basis, inv_exp_map, inv_exp_map_point, srsf, srsf_inverse, warp_to_coeffs, BasisSet,
    CoefficientVector, SpherePoint, SrsfGrid, TangentVector, WarpingGrid,
};
pub use scalar::Scalar;
pub use shape::{CriticalKind, HeightRatioVector, Piece, ShapeKind, ShapeSpec};
pub use templates::{
    build_template, count_modes, group_action, height_ratios_of, height_ratios_of_fn, oracle_reconstruct_warp,
    GridDensity, TemplateFunction, UnitFunction,
};

pub type Warp = WarpingGrid<f64>;
pub type Srsf = SrsfGrid<f64>;
pub type Coefficients = CoefficientVector<f64>;
pub type Basis = BasisSet<f64>;
pub type Density = GridDensity<f64>;
pub type Template = TemplateFunction<f64>;
pub type HeightRatios = HeightRatioVector<f64>;
pub type Estimate = DensityEstimate<f64>;
pub type Config = FitConfig<f64>;
pub type ConditionalConfig = ConditionalFitConfig<f64>;
