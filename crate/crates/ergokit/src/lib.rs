//! Battery capacity of finite-dimensional quantum states.
//!
//! The crate computes, for a state ρ and Hamiltonian H:
//!
//! - the work extractable or injectable by unitary cycles (ergotropy and
//!   antiergotropy) and their span, the battery capacity;
//! - the passive and active states realizing the extremes;
//! - asymptotic many-copy limits through entropy-matched Gibbs states;
//! - entanglement witnesses built from the capacity advantage of global
//!   over local unitaries on composite batteries;
//! - Haar-measure Monte Carlo checks of the work statistics.
//!
//! Everything is exact spectral arithmetic on small dense matrices; no
//! numerical optimization over unitaries is ever performed. See the guide
//! in `book/` for worked examples, or run the `ergokit` binary.

#[cfg(doctest)]
mod book;
pub mod cli;
pub mod eigen;
pub mod ergotropics;
pub mod error;
pub mod families;
pub mod gaps;
pub mod hamiltonian;
pub mod matrix;
pub mod report;
pub mod sampling;
pub mod spectrum;
pub mod state;
pub mod thermal;
pub mod tolerances;

pub use eigen::eig_hermitian;
pub use ergotropics::{
    capacity_from_spectra, equispaced_capacity_bounds, equispaced_duality, extremal_states,
    qubit_capacity, variance_lower_bound, work_extracted, work_quantities, ExtremalStates,
    WorkQuantities,
};
pub use error::{ErgoError, Result};
pub use gaps::{
    acin_gap_formulas, capacity_gap, capacity_gap_mixed_2q, concurrence_2q, ergotropic_gaps,
    fully_separable_gap, gap_report, multipartite_measures, AcinGaps, GapReport,
    MultipartiteMeasures,
};
pub use hamiltonian::Hamiltonian;
pub use matrix::{ComplexMatrix, C64};
pub use sampling::{
    haar_unitary, mc_work_variance, random_density, McEstimate, PurityModel, SampleConfig,
    WorkVarianceRun,
};
pub use spectrum::{majorizes, Spectrum};
pub use state::{
    coherence_l1, coherence_relative_entropy, coherence_robustness, linear_entropy,
    tsallis_entropy, von_neumann_entropy, DensityMatrix, EntropyKind, EntropyValue,
};
pub use thermal::{match_gibbs, total_quantities, BetaSign, GibbsMatch, TotalQuantities};
