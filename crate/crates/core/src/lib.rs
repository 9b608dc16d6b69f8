//! Density, CDF and quantile evaluation for a continuous random variable
//! given only its characteristic function, with certified error bounds on
//! the quantile.
//!
//! The pipeline: a Fourier-cosine expansion of the density on a truncation
//! interval chosen from central moments, a term count chosen from a tail
//! integral of |phi|, bracketing bisection to invert the expansion CDF,
//! and a computable certificate `2 eps / min{h(y ± eps)} + 2 eps` that
//! dominates the distance to the true quantile. An adaptive loop shrinks
//! the CDF tolerance until the certificate meets a requested quantile
//! tolerance.
//!
//! ```
//! use cfquant::{CfSpec, ToleranceConfig, quantile_with_tolerance};
//!
//! let spec = CfSpec::nig(1.0, 0.0, 1.0).unwrap();
//! let r = quantile_with_tolerance(&spec, 0.99, 0.1, &ToleranceConfig::default()).unwrap();
//! assert!(r.bound <= 0.1);
//! assert!((r.quantile - 2.702).abs() < 0.01);
//! ```

mod cf;
mod cos;
mod error;
mod inversion;
mod quadrature;
mod reference;

pub use cf::{CfSpec, Family, MomentMethod, MomentReport, SupportInterval, MAX_CUMULANT_ORDER};
pub use cos::{choose_term_count, truncation_range, CosApproximation, ToleranceConfig, TruncationRange};
pub use error::{Error, Result};
pub use inversion::{
    bisect_quantile, error_bound, monotone_prescan, quantile_batch, quantile_with_tolerance,
    QuantileResult,
};
pub use reference::{
    gil_pelaez_cdf, high_precision_reference, high_precision_reference_with, normal_cdf,
    normal_quantile, CdfReference, HighPrecisionConfig, HighPrecisionPipeline,
    HighPrecisionReference, ReferenceMethod,
};

pub use num_complex::Complex64;
