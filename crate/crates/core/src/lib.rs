//! Degenerate polylogarithms, harmonic numbers and zeta values, with certified
//! tail bounds and a verification engine for the identities relating them.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the identity
//! engine works in `f64`.
//!
//! ```
//! use degenzeta::{verify, zeta, DegenParam, IdentityId, Params, ToleranceBudget};
//!
//! let lambda = DegenParam::new(0.5).unwrap();
//! let z = zeta(2.0, lambda, 1e-14, 100_000).unwrap();
//! assert!((z.value - (4.0 - 4.0 * 2f64.ln())).abs() <= z.tail_bound + 1e-14);
//!
//! let report = verify(IdentityId::T5a, &Params::new(0.5, 2), &ToleranceBudget::default());
//! assert!(report.pass);
//! ```

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod accel;
pub mod error;
pub mod functions;
pub mod harmonic;
pub mod identities;
pub mod integrals;
pub mod kernel;
pub mod quadrature;
pub mod scalar;
pub mod zeta;

pub use error::{Error, Result};
pub use functions::{
    degenerate_exp, degenerate_log1p, degenerate_log1p_series, polylog, PolylogEvaluator, SeriesValue,
};
pub use harmonic::{
    convolution, convolution_by_expansion, harmonic, harmonic_classical, harmonic_higher, harmonic_prefix,
    ConvolutionTable, HarmonicTable,
};
pub use identities::{
    expand_grid, reference_rhs, series_lhs, verify, Grid, IdentityId, IdentityReport, Params, ToleranceBudget,
};
pub use integrals::{
    integral_closed, integral_closed_with, integral_quadrature, integral_quadrature_with, quadrature_theorem6,
    quadrature_theorem6_with, weight, weight_tail,
};
pub use kernel::{
    coeff_prefix, degenerate_binomial, falling_factorial, generalized_binomial, rising_factorial, CoefficientTable,
    DegenParam, Mode,
};
pub use quadrature::QuadratureResult;
pub use scalar::{Accumulator, Scalar};
pub use zeta::{hurwitz, zeta, zeta_partial_sum};

pub type DegenParamF64 = DegenParam<f64>;
pub type DegenParamF32 = DegenParam<f32>;
pub type SeriesValueF64 = SeriesValue<f64>;
pub type SeriesValueF32 = SeriesValue<f32>;
pub type QuadratureResultF64 = QuadratureResult<f64>;
pub type QuadratureResultF32 = QuadratureResult<f32>;
pub type CoefficientTableF64 = CoefficientTable<f64>;
pub type HarmonicTableF64 = HarmonicTable<f64>;
pub type ConvolutionTableF64 = ConvolutionTable<f64>;
