//! Gram matrices of normalized Szegő kernels on finite sequences in the unit
//! disk, their Schatten norms, Blaschke products, and Pick interpolation
//! bounds, together with a verifier for the quantitative relations between them.
//!
//! Points near the unit circle keep `ln(1 - |z|)` alongside their Cartesian
//! coordinates, so sequences far beyond double-precision resolution of the
//! radius still produce well-defined Gram matrices.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons deliberately route NaN to the error path

pub mod error;
pub mod geometry;
pub mod gram;
pub mod interpolation;
pub mod io;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    blaschke_factor, generate, log_band_constant, one_minus_pseudo_dist_sq, pseudo_dist,
    random_separated, separation_profile, sort_by_delta, DiskPoint, GeneratorSpec, PointSequence,
    SeparationProfile,
};
pub use gram::{
    build_corrector, build_gram, checked_inverse, column_deficiency, eqc1_residual, gram_entry,
    koosis_residual, DiagonalCorrector, GramMatrix,
};
pub use interpolation::{
    earl_bound, interp_constant_lower, interpolation_estimates, min_norm, pick_feasible,
    InterpolationEstimates, PickProblem,
};
pub use io::{format_number, ComplexRecord, PointRecord, ReportRow, SequenceFile};
pub use num_complex::Complex64;
pub use spectral::{
    schatten_norm, spectral_summary, tail_chain, zhu_column_sum, CMatrix, Exponent, HermitianEigen,
    SpectralSummary, TailChain, TailRow,
};
pub use verify::{run_suite, Check, Status, Suite, VerificationReport, VerifierConfig};
