//! Validated density matrices, entropies, and coherence functionals.
//!
//! All coherence measures are taken in the computational basis, which this
//! crate fixes to coincide with the Hamiltonian eigenbasis ordered by
//! ascending energy. Von Neumann entropies default to base 2 at the call
//! sites that report them; the base is always an explicit parameter.

use std::sync::OnceLock;

use crate::eigen::eig_hermitian;
use crate::error::{ErgoError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::Spectrum;
use crate::tolerances::{HERMITIAN_TOL, PURITY_TOL, TRACE_TOL, UNITARY_TOL};

/// A quantum state: Hermitian, unit-trace, positive semidefinite matrix
/// together with its subsystem dimensions.
///
/// The ascending eigenvalue spectrum is cached on first use; constructors
/// that already know the spectrum store it up front.
#[derive(Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    spectrum: OnceLock<Spectrum>,
}

impl Clone for DensityMatrix {
    fn clone(&self) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(s.clone());
        }
        Self { matrix: self.matrix.clone(), dims: self.dims.clone(), spectrum }
    }
}

impl DensityMatrix {
    /// Full validation: Hermiticity and trace entrywise, then an
    /// eigendecomposition to check positivity (eigenvalues down to the
    /// clamp floor are tolerated and cleaned).
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let state = Self::new_unvalidated(matrix, dims)?;
        state.spectrum_checked()?;
        Ok(state)
    }

    /// Hermiticity, trace, and dimension checks only; the positivity check
    /// runs on first spectrum access.
    fn new_unvalidated(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != matrix.dim() {
            return Err(ErgoError::DimensionMismatch(format!(
                "subsystem dims {:?} do not match matrix dimension {}",
                dims,
                matrix.dim()
            )));
        }
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(ErgoError::NotHermitian(
                "state matrix deviates from M = M†".into(),
            ));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(ErgoError::TraceNotOne(format!(
                "state trace is {trace}, expected 1"
            )));
        }
        Ok(Self { matrix, dims, spectrum: OnceLock::new() })
    }

    /// Internal constructor for states valid by construction. The caller
    /// may supply the known spectrum to skip the eigensolve.
    pub(crate) fn from_valid_parts(
        matrix: ComplexMatrix,
        dims: Vec<usize>,
        known_spectrum: Option<Spectrum>,
    ) -> Self {
        let spectrum = OnceLock::new();
        if let Some(s) = known_spectrum {
            let _ = spectrum.set(s);
        }
        Self { matrix, dims, spectrum }
    }

    /// Pure state `|ψ⟩⟨ψ|` from amplitudes (normalized internally).
    pub fn from_pure(amplitudes: &[C64], dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(ErgoError::DimensionMismatch(format!(
                "{} amplitudes for dims {:?}",
                amplitudes.len(),
                dims
            )));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(ErgoError::InvalidCoefficients("zero state vector".into()));
        }
        let normalized: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        let matrix = ComplexMatrix::outer(&normalized);
        let mut spec = vec![0.0; total];
        spec[total - 1] = 1.0;
        Ok(Self::from_valid_parts(matrix, dims, Some(Spectrum::from_sorted(spec).unwrap())))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    /// Ascending eigenvalues after positive-semidefinite cleanup.
    ///
    /// Panics only if the state was corrupted after construction; states
    /// built through `new` have already passed this check.
    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum_checked()
            .expect("state spectrum failed validation after construction")
    }

    fn spectrum_checked(&self) -> Result<&Spectrum> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let (raw, _) = eig_hermitian(&self.matrix, HERMITIAN_TOL)?;
        let cleaned = raw.clamped_probability()?;
        let _ = self.spectrum.set(cleaned);
        Ok(self.spectrum.get().unwrap())
    }

    /// `Tr ρ²`, computed entrywise from the matrix.
    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    /// Reduced state on the `keep` subsystems (ascending subsystem order).
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = self.matrix.partial_trace(&self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let dims: Vec<usize> = keep_sorted.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix::from_valid_parts(reduced.hermitized(), dims, None))
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn apply_unitary(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(ErgoError::DimensionMismatch(format!(
                "unitary dimension {} does not match state dimension {}",
                u.dim(),
                self.dim()
            )));
        }
        if !u.is_unitary(UNITARY_TOL) {
            return Err(ErgoError::NotUnitary(
                "matrix deviates from U U† = I".into(),
            ));
        }
        let rotated = self.matrix.conjugate_with(u).hermitized();
        // The spectrum is unitarily invariant.
        Ok(DensityMatrix::from_valid_parts(
            rotated,
            self.dims.clone(),
            self.spectrum.get().cloned(),
        ))
    }

    /// The state with all off-diagonal entries deleted.
    pub fn dephased(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d);
        let mut diag = Vec::with_capacity(d);
        for i in 0..d {
            let p = self.matrix.get(i, i).re.max(0.0);
            m.set(i, i, C64::new(p, 0.0));
            diag.push(p);
        }
        DensityMatrix::from_valid_parts(m, self.dims.clone(), Some(Spectrum::from_unsorted(diag)))
    }
}

/// Entropy family tags.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyKind {
    VonNeumann { base: f64 },
    Tsallis { order: f64 },
    Linear,
}

/// A nonnegative entropy value with its family tag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub kind: EntropyKind,
    pub value: f64,
}

/// `−Σ λ log_base λ` with `0·log 0 = 0`. Requires `base > 1`.
pub fn von_neumann_entropy(rho: &DensityMatrix, base: f64) -> Result<EntropyValue> {
    if base <= 1.0 {
        return Err(ErgoError::EntropyOutOfRange(format!("log base {base} must exceed 1")));
    }
    let value = entropy_of_probabilities(rho.spectrum().values(), base);
    Ok(EntropyValue { kind: EntropyKind::VonNeumann { base }, value })
}

pub(crate) fn entropy_of_probabilities(probabilities: &[f64], base: f64) -> f64 {
    let nats: f64 = probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    (nats / base.ln()).max(0.0)
}

/// `(1 − Σ λᵖ)/(p − 1)` for `p > 1`.
pub fn tsallis_entropy(rho: &DensityMatrix, p: f64) -> Result<EntropyValue> {
    if p <= 1.0 {
        return Err(ErgoError::EntropyOutOfRange(format!("Tsallis order {p} must exceed 1")));
    }
    let value = tsallis_of_probabilities(rho.spectrum().values(), p);
    Ok(EntropyValue { kind: EntropyKind::Tsallis { order: p }, value })
}

fn tsallis_of_probabilities(probabilities: &[f64], p: f64) -> f64 {
    let moment: f64 = probabilities.iter().map(|&x| x.powf(p)).sum();
    ((1.0 - moment) / (p - 1.0)).max(0.0)
}

/// Linear entropy `1 − Tr ρ²`; identical to the Tsallis entropy at order 2
/// by construction (same code path).
pub fn linear_entropy(rho: &DensityMatrix) -> EntropyValue {
    let value = tsallis_of_probabilities(rho.spectrum().values(), 2.0);
    EntropyValue { kind: EntropyKind::Linear, value }
}

/// `Σ_{i≠j} |ρ_ij|` in the computational (energy) basis.
pub fn coherence_l1(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                acc += rho.matrix().get(i, j).norm();
            }
        }
    }
    acc
}

/// Relative entropy of coherence `S(ρ_diag) − S(ρ)` at the given base.
pub fn coherence_relative_entropy(rho: &DensityMatrix, base: f64) -> Result<f64> {
    let dephased = rho.dephased();
    let s_inc = von_neumann_entropy(&dephased, base)?.value;
    let s = von_neumann_entropy(rho, base)?.value;
    Ok((s_inc - s).max(0.0))
}

/// Robustness of coherence as an interval `[lower, upper]`.
///
/// For qubits and for pure states the robustness equals the l1 coherence,
/// so the interval is degenerate. For mixed states in d > 2 the exact value
/// needs convex optimization; the returned bounds are `l1/(d−1) ≤ RoC ≤ l1`.
pub fn coherence_robustness(rho: &DensityMatrix) -> (f64, f64) {
    let l1 = coherence_l1(rho);
    let d = rho.dim();
    if d == 2 || rho.is_pure() {
        (l1, l1)
    } else {
        (l1 / (d as f64 - 1.0), l1)
    }
}
