//! Subspace estimation: covariances, the four MUSIC spectrum variants, peak
//! picking, closed-form coupling estimates and the alternating calibrated
//! estimator.

mod coupling;
mod cream;
mod peaks;
mod spectrum;
mod subspace;

pub use crate::array_model::SectorPlan;
pub use coupling::{
    constrained_minimizer, coupling_cost, coupling_gram, estimate_coupling, estimate_coupling_from_form,
};
pub use cream::{
    cream_music, decompose_all, estimate, estimate_with, rmse, CalibrationResult, EstimatorOptions, Workspace,
};
pub use peaks::{find_peaks, find_peaks_or_largest};
pub use spectrum::{spectrum, AngleGrid, Mode, NullForms, SpectrumGrid, SpectrumModel, DENOMINATOR_FLOOR};
pub use subspace::{noise_subspace, sample_covariance, SubspaceDecomposition};
