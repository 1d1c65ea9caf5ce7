//! Every tolerance and iteration budget used by the library, in one place.
//!
//! The values fall into three groups: validation thresholds for inputs
//! (Hermiticity, trace, positivity), convergence controls for the iterative
//! solvers (Jacobi sweeps, entropy bisection), and slack allowances for
//! identities that hold exactly in real arithmetic but accumulate rounding
//! in f64.

/// Maximum entrywise deviation from `M = M†` accepted for state and
/// Hamiltonian inputs.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Maximum entrywise deviation from `U U† = I` accepted for unitaries
/// supplied by callers (work extraction, state conjugation).
pub const UNITARY_TOL: f64 = 1e-9;

/// Haar-sampled unitaries are produced by orthonormalization and must be
/// tighter than user inputs.
pub const HAAR_UNITARY_TOL: f64 = 1e-10;

/// Maximum deviation of `Tr ρ` from one.
pub const TRACE_TOL: f64 = 1e-9;

/// Eigenvalues of a state in `[PSD_CLAMP_FLOOR, 0)` are treated as solver
/// noise: clamped to zero and the spectrum renormalized. Anything below the
/// floor is a validation error.
pub const PSD_CLAMP_FLOOR: f64 = -1e-9;

/// Purity threshold above which a state is treated as pure
/// (`Tr ρ² ≥ 1 − PURITY_TOL`).
pub const PURITY_TOL: f64 = 1e-8;

/// Jacobi eigensolver: sweeps stop when the off-diagonal Frobenius mass
/// drops below `EIG_CONVERGENCE_REL · ‖M‖_F`.
pub const EIG_CONVERGENCE_REL: f64 = 1e-12;

/// Jacobi eigensolver sweep budget. Convergence is quadratic; well-formed
/// inputs at these dimensions (d ≤ ~64) finish in well under ten sweeps.
pub const JACOBI_SWEEP_BUDGET: usize = 100;

/// Maximum entrywise error of the reconstruction `V diag(λ) V†` against the
/// input, and of `V V†` against the identity.
pub const EIG_RECONSTRUCTION_TOL: f64 = 1e-8;

/// Two eigenvalues closer than this belong to one degenerate cluster and are
/// ordered by the deterministic tie-break rule instead of by value.
pub const DEGENERACY_CLUSTER_TOL: f64 = 1e-10;

/// Partial sums in majorization comparisons are compared at this tolerance.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Slack for energy identities that are exact in real arithmetic
/// (capacity = active − passive, duality sums, gap decompositions).
pub const ENERGY_IDENTITY_TOL: f64 = 1e-9;

/// Entropy bisection: accepted residual `|S(ω_β) − S_target|` at the root.
pub const GIBBS_BISECTION_TOL: f64 = 1e-10;

/// Entropy match guaranteed to callers (looser than the bisection target to
/// absorb the final function evaluation).
pub const GIBBS_MATCH_TOL: f64 = 1e-8;

/// Iteration cap for the entropy bisection, including bracket expansion.
pub const GIBBS_MAX_ITERS: usize = 200;

/// Agreement required between the closed-form gap expressions for
/// three-qubit states in generalized Schmidt form and the direct spectral
/// computation on the explicit state.
pub const DUAL_PATH_TOL: f64 = 1e-8;

/// A capacity gap at or below this threshold is treated as zero when the
/// multipartite measures take products and indicator functions; bipartite
/// gaps of separable cuts are zero only up to rounding.
pub const GAP_ZERO_TOL: f64 = 1e-9;
