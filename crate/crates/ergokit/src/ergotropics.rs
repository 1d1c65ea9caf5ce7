//! Work extraction by unitary cycles: ergotropy, antiergotropy, battery
//! capacity, extremal states, and the equispaced-spectrum identities.
//!
//! With the state eigenvalues `λ₀ ≤ … ≤ λ_{d−1}` and eigenenergies
//! `ε₀ ≤ … ≤ ε_{d−1}`, the extremes of `W_U = Tr[ρH] − Tr[UρU†H]` over the
//! unitary group are reached on the passive state (largest populations on
//! the lowest levels) and the active state (largest populations on the
//! highest levels). Everything here is exact arithmetic on the two sorted
//! spectra.

use crate::error::{ErgoError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::matrix::ComplexMatrix;
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;
use crate::tolerances::UNITARY_TOL;

/// The work-related functionals of one (state, Hamiltonian) pair.
///
/// Invariants: `capacity = ergotropy − antiergotropy` exactly,
/// `passive_energy ≤ mean_energy ≤ active_energy`, and
/// `capacity = active_energy − passive_energy` up to rounding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkQuantities {
    pub mean_energy: f64,
    /// Maximal extractable work, `≥ 0`.
    pub ergotropy: f64,
    /// Minimal work-extraction value, `≤ 0`; its magnitude is the maximal
    /// charge the state can absorb.
    pub antiergotropy: f64,
    /// Energy span of the unitary orbit, `≥ 0`.
    pub capacity: f64,
    pub passive_energy: f64,
    pub active_energy: f64,
}

/// Lowest- and highest-energy states in the unitary orbit of the input.
#[derive(Clone, Debug)]
pub struct ExtremalStates {
    pub passive: DensityMatrix,
    pub active: DensityMatrix,
}

fn check_dims(rho: &DensityMatrix, h: &Hamiltonian) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(ErgoError::DimensionMismatch(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    Ok(())
}

/// Work extracted by the unitary cycle `U`: `Tr[ρH] − Tr[UρU†H]`.
pub fn work_extracted(rho: &DensityMatrix, h: &Hamiltonian, u: &ComplexMatrix) -> Result<f64> {
    check_dims(rho, h)?;
    if u.dim() != rho.dim() {
        return Err(ErgoError::DimensionMismatch(format!(
            "unitary dimension {} does not match state dimension {}",
            u.dim(),
            rho.dim()
        )));
    }
    if !u.is_unitary(UNITARY_TOL) {
        return Err(ErgoError::NotUnitary("matrix deviates from U U† = I".into()));
    }
    Ok(work_extracted_unchecked(rho, h, u))
}

/// Same as [`work_extracted`] without the unitarity check; used by the
/// Monte Carlo sampler whose unitaries are orthonormal by construction.
pub(crate) fn work_extracted_unchecked(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    u: &ComplexMatrix,
) -> f64 {
    let rotated = rho.matrix().conjugate_with(u);
    rho.matrix().trace_product_re(h.matrix()) - rotated.trace_product_re(h.matrix())
}

/// Passive-state energy `Σ λ_i ε_{d−1−i}` of a spectrum pair (both sorted
/// ascending).
pub fn passive_energy_from_spectra(lambda: &Spectrum, energies: &Spectrum) -> Result<f64> {
    pair_check(lambda, energies)?;
    let d = lambda.len();
    Ok((0..d).map(|i| lambda.values()[i] * energies.values()[d - 1 - i]).sum())
}

/// Active-state energy `Σ λ_i ε_i` of a spectrum pair (both sorted
/// ascending).
pub fn active_energy_from_spectra(lambda: &Spectrum, energies: &Spectrum) -> Result<f64> {
    pair_check(lambda, energies)?;
    Ok(lambda
        .values()
        .iter()
        .zip(energies.values())
        .map(|(l, e)| l * e)
        .sum())
}

/// Battery capacity `Σ ε_i (λ_i − λ_{d−1−i})` of a spectrum pair, the
/// difference between active and passive energies.
pub fn capacity_from_spectra(lambda: &Spectrum, energies: &Spectrum) -> Result<f64> {
    let active = active_energy_from_spectra(lambda, energies)?;
    let passive = passive_energy_from_spectra(lambda, energies)?;
    Ok(active - passive)
}

fn pair_check(lambda: &Spectrum, energies: &Spectrum) -> Result<()> {
    if lambda.len() != energies.len() {
        return Err(ErgoError::LengthMismatch(format!(
            "spectrum length {} does not match energy count {}",
            lambda.len(),
            energies.len()
        )));
    }
    Ok(())
}

/// All work functionals of `(ρ, H)` from the two sorted spectra.
pub fn work_quantities(rho: &DensityMatrix, h: &Hamiltonian) -> Result<WorkQuantities> {
    check_dims(rho, h)?;
    let lambda = rho.spectrum();
    let energies = h.eigenenergies()?;
    let mean_energy = h.mean_energy(rho)?;
    let passive_energy = passive_energy_from_spectra(lambda, &energies)?;
    let active_energy = active_energy_from_spectra(lambda, &energies)?;
    let ergotropy = mean_energy - passive_energy;
    let antiergotropy = mean_energy - active_energy;
    Ok(WorkQuantities {
        mean_energy,
        ergotropy,
        antiergotropy,
        capacity: ergotropy - antiergotropy,
        passive_energy,
        active_energy,
    })
}

/// The passive and active states `Σ λ_{d−1−i} |ε_i⟩⟨ε_i|` and
/// `Σ λ_i |ε_i⟩⟨ε_i|` in the ascending-energy eigenbasis of `H`.
pub fn extremal_states(rho: &DensityMatrix, h: &Hamiltonian) -> Result<ExtremalStates> {
    check_dims(rho, h)?;
    let lambda = rho.spectrum().clone();
    let (_, basis) = h.eigenbasis()?;
    let d = rho.dim();

    let build = |populations: Vec<f64>| -> DensityMatrix {
        let diag = ComplexMatrix::from_diag(&populations);
        let matrix = basis.matmul(&diag).matmul(&basis.dagger()).hermitized();
        DensityMatrix::from_valid_parts(matrix, rho.dims().to_vec(), Some(lambda.clone()))
    };

    let descending: Vec<f64> = (0..d).map(|i| lambda.values()[d - 1 - i]).collect();
    let ascending = lambda.values().to_vec();
    Ok(ExtremalStates { passive: build(descending), active: build(ascending) })
}

/// Capacity of the two-level state with excited population `q` and
/// coherence `c`, in units of the level spacing: `√((2q−1)² + 4c²)`.
pub fn qubit_capacity(q: f64, c: f64) -> Result<f64> {
    let (_, _, capacity) = qubit_closed_forms(q, c)?;
    Ok(capacity)
}

/// Closed-form `(ergotropy, antiergotropy, capacity)` of a two-level state
/// in units of the level spacing: `E = q − λ₋`, `A = q − λ₊`, `C = E − A`.
pub fn qubit_closed_forms(q: f64, c: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&q) {
        return Err(ErgoError::InvalidBlochParameters(format!(
            "population q = {q} outside [0, 1]"
        )));
    }
    let c_max = (q * (1.0 - q)).sqrt();
    if c < 0.0 || c > c_max + 1e-12 {
        return Err(ErgoError::InvalidBlochParameters(format!(
            "coherence c = {c} exceeds the purity bound {c_max} for q = {q}"
        )));
    }
    let radius = ((2.0 * q - 1.0).powi(2) + 4.0 * c * c).sqrt();
    let lambda_minus = (1.0 - radius) / 2.0;
    let lambda_plus = (1.0 + radius) / 2.0;
    Ok((q - lambda_minus, q - lambda_plus, radius))
}

/// `σ²_ρ = Tr ρ² − 1/d`, clamped at zero.
pub fn state_variance(rho: &DensityMatrix) -> f64 {
    (rho.purity() - 1.0 / rho.dim() as f64).max(0.0)
}

/// `σ²_H = Tr H² − (Tr H)²/d`, clamped at zero.
pub fn hamiltonian_variance(h: &Hamiltonian) -> f64 {
    let (t, t2) = h.trace_and_square_trace();
    (t2 - t * t / h.dim() as f64).max(0.0)
}

/// Closed form of `σ²_H` for a ladder of `d` levels with spacing `e`:
/// `e²·d(d²−1)/12`, by direct summation of `Σ j²  − (Σ j)²/d`.
pub fn equispaced_hamiltonian_variance(d: usize, e: f64) -> f64 {
    let df = d as f64;
    e * e * df * (df * df - 1.0) / 12.0
}

/// Capacity lower bound `2 σ_H σ_ρ / √(d²−1)` from the Haar variance of the
/// work distribution.
pub fn variance_lower_bound(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dims(rho, h)?;
    let d = rho.dim() as f64;
    let sigma_rho = state_variance(rho).sqrt();
    let sigma_h = hamiltonian_variance(h).sqrt();
    Ok(2.0 * sigma_h * sigma_rho / (d * d - 1.0).sqrt())
}

/// For a ladder Hamiltonian the passive and active energies of any state
/// sum to `(d−1)E`. Returns `(passive + active, (d−1)E)`.
pub fn equispaced_duality(rho: &DensityMatrix, d: usize, e: f64) -> Result<(f64, f64)> {
    let h = Hamiltonian::equispaced(d, e)?;
    let w = work_quantities(rho, &h)?;
    Ok((w.passive_energy + w.active_energy, (d as f64 - 1.0) * e))
}

/// Coefficient `⌊d²/4⌋` of the pairwise capacity expansion: the sum of
/// `2j − d + 1` over levels with `2j > d − 1`.
pub fn capacity_bound_coefficient(d: usize) -> usize {
    d * d / 4
}

/// Upper and lower capacity bounds for a `d`-level ladder with spacing `e`:
///
/// ```text
///   ⌊d²/4⌋·e·(λ_{⌈d/2⌉} − λ_{⌈d/2⌉−1})  ≤  C  ≤  ⌊d²/4⌋·e·(λ_{d−1} − λ₀)
/// ```
///
/// The lower bound uses the central pair gap; each pair gap in the
/// capacity expansion dominates it, so the bound is valid for every d.
pub fn equispaced_capacity_bounds(
    spectrum: &Spectrum,
    d: usize,
    e: f64,
) -> Result<(f64, f64)> {
    if spectrum.len() != d {
        return Err(ErgoError::LengthMismatch(format!(
            "spectrum has {} entries, ladder has {d} levels",
            spectrum.len()
        )));
    }
    if d < 2 {
        return Err(ErgoError::NotEquispaced("bounds need at least two levels".into()));
    }
    let coefficient = capacity_bound_coefficient(d) as f64 * e;
    let values = spectrum.values();
    let upper = coefficient * (values[d - 1] - values[0]);
    let mid = d.div_ceil(2);
    let lower = coefficient * (values[mid] - values[mid - 1]);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::matrix::{pauli_x, C64};
    use approx::assert_abs_diff_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn diag_state(probs: &[f64]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_diag(probs), vec![probs.len()]).unwrap()
    }

    fn qubit_h() -> Hamiltonian {
        Hamiltonian::equispaced(2, 1.0).unwrap()
    }

    #[test]
    fn identity_cycle_extracts_nothing() {
        let rho = families::qubit_state(0.3, 0.2, 0.1).unwrap();
        let w = work_extracted(&rho, &qubit_h(), &ComplexMatrix::identity(2)).unwrap();
        assert_abs_diff_eq!(w, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn full_discharge_of_excited_state() {
        let rho = diag_state(&[0.0, 1.0]);
        let w = work_extracted(&rho, &qubit_h(), &pauli_x()).unwrap();
        assert_abs_diff_eq!(w, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn maximally_mixed_state_is_invariant() {
        let rho = diag_state(&[0.5, 0.5]);
        for seed in 0..5u64 {
            let mut rng = StdRng::seed_from_u64(seed);
            let angle: f64 = rng.gen::<f64>() * std::f64::consts::PI;
            let u = ComplexMatrix::from_data(
                2,
                vec![
                    C64::new(angle.cos(), 0.0),
                    C64::new(-angle.sin(), 0.0),
                    C64::new(angle.sin(), 0.0),
                    C64::new(angle.cos(), 0.0),
                ],
            )
            .unwrap();
            let w = work_extracted(&rho, &qubit_h(), &u).unwrap();
            assert_abs_diff_eq!(w, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn non_unitary_is_rejected() {
        let rho = diag_state(&[0.5, 0.5]);
        let m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            work_extracted(&rho, &qubit_h(), &m),
            Err(ErgoError::NotUnitary(_))
        ));
    }

    #[test]
    fn reference_qubit_work_quantities() {
        let rho = families::qubit_state(0.3, 0.2, 0.0).unwrap();
        let w = work_quantities(&rho, &qubit_h()).unwrap();
        assert_abs_diff_eq!(w.ergotropy, 0.082842712, epsilon = 1e-8);
        assert_abs_diff_eq!(w.antiergotropy, -0.482842712, epsilon = 1e-8);
        assert_abs_diff_eq!(w.capacity, 0.565685424, epsilon = 1e-8);
        assert_abs_diff_eq!(w.capacity, w.active_energy - w.passive_energy, epsilon = 1e-12);
        assert!(w.passive_energy <= w.mean_energy && w.mean_energy <= w.active_energy);
    }

    #[test]
    fn uniform_noise_family_capacity() {
        for (d, v) in [(3usize, 0.5f64), (4, 0.8), (6, 0.2)] {
            let rho = families::werner_qudit(d, v).unwrap();
            let h = Hamiltonian::equispaced(d, 1.0).unwrap();
            let w = work_quantities(&rho, &h).unwrap();
            assert_abs_diff_eq!(w.capacity, (d as f64 - 1.0) * v, epsilon = 1e-9);
        }
    }

    #[test]
    fn maximally_mixed_has_zero_capacity() {
        let d = 5;
        let rho = diag_state(&vec![1.0 / d as f64; d]);
        let h = Hamiltonian::equispaced(d, 2.0).unwrap();
        assert_abs_diff_eq!(work_quantities(&rho, &h).unwrap().capacity, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn extremal_states_of_pure_qubit() {
        let rho = DensityMatrix::from_pure(
            &[C64::new(0.6, 0.0), C64::new(0.8, 0.0)],
            vec![2],
        )
        .unwrap();
        let ext = extremal_states(&rho, &qubit_h()).unwrap();
        assert_abs_diff_eq!(ext.passive.matrix().get(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ext.active.matrix().get(1, 1).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn passive_input_is_fixed_point() {
        let rho = diag_state(&[0.5, 0.3, 0.2]);
        let h = Hamiltonian::equispaced(3, 1.0).unwrap();
        let ext = extremal_states(&rho, &h).unwrap();
        assert!(ext.passive.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        let w = work_quantities(&rho, &h).unwrap();
        assert_abs_diff_eq!(h.mean_energy(&ext.passive).unwrap(), w.passive_energy, epsilon = 1e-9);
        assert_abs_diff_eq!(h.mean_energy(&ext.active).unwrap(), w.active_energy, epsilon = 1e-9);
        assert_abs_diff_eq!(w.passive_energy, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(w.active_energy, 1.3, epsilon = 1e-12);
    }

    #[test]
    fn qubit_closed_forms_match_matrix_path() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let q: f64 = rng.gen();
            let c: f64 = rng.gen::<f64>() * (q * (1.0 - q)).sqrt();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let rho = families::qubit_state(q, c, theta).unwrap();
            let w = work_quantities(&rho, &qubit_h()).unwrap();
            let (erg, anti, cap) = qubit_closed_forms(q, c).unwrap();
            assert_abs_diff_eq!(w.capacity, cap, epsilon = 1e-12);
            assert_abs_diff_eq!(w.ergotropy, erg, epsilon = 1e-12);
            assert_abs_diff_eq!(w.antiergotropy, anti, epsilon = 1e-12);
        }
    }

    #[test]
    fn qubit_capacity_examples() {
        assert_abs_diff_eq!(qubit_capacity(0.5, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(qubit_capacity(1.0, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(qubit_capacity(0.3, 0.2).unwrap(), 0.565685424, epsilon = 1e-9);
        assert!(qubit_capacity(0.1, 0.9).is_err());
    }

    #[test]
    fn variance_bound_examples() {
        let pure = diag_state(&[0.0, 1.0]);
        let bound = variance_lower_bound(&pure, &qubit_h()).unwrap();
        assert_abs_diff_eq!(bound, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert!(bound <= work_quantities(&pure, &qubit_h()).unwrap().capacity + 1e-9);

        let mixed = diag_state(&[0.5, 0.5]);
        assert_abs_diff_eq!(
            variance_lower_bound(&mixed, &qubit_h()).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        let rho = diag_state(&[0.5, 0.3, 0.2]);
        let h = Hamiltonian::equispaced(3, 1.0).unwrap();
        let bound = variance_lower_bound(&rho, &h).unwrap();
        assert_abs_diff_eq!(bound, 0.216024690, epsilon = 1e-8);
        let cap = work_quantities(&rho, &h).unwrap().capacity;
        assert_abs_diff_eq!(cap, 0.6, epsilon = 1e-12);
        assert!(bound <= cap + 1e-9);
    }

    #[test]
    fn equispaced_variance_closed_form_matches_summation() {
        for d in 2..=8 {
            for e in [0.5, 1.0, 2.5] {
                let h = Hamiltonian::equispaced(d, e).unwrap();
                assert_abs_diff_eq!(
                    hamiltonian_variance(&h),
                    equispaced_hamiltonian_variance(d, e),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn duality_examples() {
        let qubit = families::qubit_state(0.7, 0.1, 0.0).unwrap();
        let (sum, expected) = equispaced_duality(&qubit, 2, 1.0).unwrap();
        assert_abs_diff_eq!(sum, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 1.0, epsilon = 1e-15);

        let rho = diag_state(&[0.5, 0.3, 0.2]);
        let (sum, expected) = equispaced_duality(&rho, 3, 1.0).unwrap();
        assert_abs_diff_eq!(sum, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 2.0, epsilon = 1e-15);

        let mixed = diag_state(&[0.25; 4]);
        let (sum, expected) = equispaced_duality(&mixed, 4, 2.0).unwrap();
        assert_abs_diff_eq!(sum, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 6.0, epsilon = 1e-15);
    }

    #[test]
    fn capacity_bound_coefficient_matches_pairwise_sum() {
        for d in 2..=12usize {
            let direct: usize = (0..d).filter(|&j| 2 * j > d - 1).map(|j| 2 * j - d + 1).sum();
            assert_eq!(capacity_bound_coefficient(d), direct, "d = {d}");
        }
    }

    #[test]
    fn equispaced_bounds_examples() {
        // Point-mass spectrum at the top level: capacity saturates the
        // upper bound for d = 3.
        let spec = Spectrum::from_sorted(vec![0.0, 0.0, 1.0]).unwrap();
        let (_, upper) = equispaced_capacity_bounds(&spec, 3, 1.0).unwrap();
        let rho = diag_state(&[0.0, 0.0, 1.0]);
        let cap = work_quantities(&rho, &Hamiltonian::equispaced(3, 1.0).unwrap())
            .unwrap()
            .capacity;
        assert_abs_diff_eq!(upper, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cap, 2.0, epsilon = 1e-12);

        let uniform = Spectrum::from_sorted(vec![0.25; 4]).unwrap();
        let (lo, hi) = equispaced_capacity_bounds(&uniform, 4, 1.0).unwrap();
        assert_eq!((lo, hi), (0.0, 0.0));

        let spec = Spectrum::from_sorted(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let (lo, hi) = equispaced_capacity_bounds(&spec, 4, 1.0).unwrap();
        assert_abs_diff_eq!(hi, 1.2, epsilon = 1e-12);
        let rho = diag_state(&[0.1, 0.2, 0.3, 0.4]);
        let cap = work_quantities(&rho, &Hamiltonian::equispaced(4, 1.0).unwrap())
            .unwrap()
            .capacity;
        assert_abs_diff_eq!(cap, 1.0, epsilon = 1e-12);
        assert!(lo <= cap + 1e-9 && cap <= hi + 1e-9);
    }

    #[test]
    fn printed_odd_d_coefficient_would_fail() {
        // The coefficient must be ⌊d²/4⌋ = 2 at d = 3; the square of ⌊d/2⌋
        // gives 1 and would put the upper bound below the capacity on the
        // point-mass spectrum.
        let spec = Spectrum::from_sorted(vec![0.0, 0.0, 1.0]).unwrap();
        let (_, upper) = equispaced_capacity_bounds(&spec, 3, 1.0).unwrap();
        assert!(upper >= 2.0 - 1e-12);
        let printed = (3usize / 2).pow(2) as f64 * 1.0;
        assert!(printed < 2.0);
    }
}
