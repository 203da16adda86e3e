//! Regularized Shannon sampling.
//!
//! Reconstruction of bandlimited functions from integer samples with the
//! window-regularized, localized sinc series
//! `R f(t) = Σ_{|t−k|≤m} f(k) sinc(t−k) φ(t−k)`, for Gaussian, modified
//! Gaussian, sinh-type and continuous Kaiser–Bessel windows, together with
//! error bounds, optimality diagnostics and an experiment harness.

pub mod bounds;
pub mod delta;
pub mod diagnostics;
pub mod error;
pub mod harness;
mod identities;
pub mod quadrature;
pub mod reconstruction;
pub mod special_fn;
pub mod sum;
pub mod windows;

pub use error::{ReconError, Result};
pub use quadrature::{integrate, integrate_sqrt_singular, QuadratureResult};
pub use windows::{alpha_spec, eval_window, optimal_spec, window_ft, Family, Window, WindowSpec};
pub use reconstruction::{reconstruct, reconstruct_grid, sample_function, SampleSet};
pub use bounds::{bound_closed_form, e1_numeric, e2_numeric, BoundBreakdown, BoundMethod};
pub use delta::Delta;
pub use diagnostics::{
    decay_slope, delta_ckb_split, delta_sinh_split, nu1, verify_identities, DeltaSplit, DiagnosticSeries,
    IdentityGrids, IdentityReport,
};
pub use harness::{
    run_diagnostics_sweep, run_error_sweep, test_function, ErrorReport, ErrorRow, ExperimentConfig,
};
