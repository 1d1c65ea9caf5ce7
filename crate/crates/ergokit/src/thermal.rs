//! Asymptotic many-copy quantities through entropy-matched Gibbs states.
//!
//! At fixed von Neumann entropy the Gibbs state `e^{−βH}/Z` with `β ≥ 0` is
//! the energy minimum and its negative-temperature mirror the energy
//! maximum. The per-copy limits of ergotropy, antiergotropy, and capacity
//! over many identical copies are differences of those energies, so the
//! whole computation reduces to one scalar root-find for β per branch.
//! Entropy is handled in natural log throughout this module.

use crate::error::{ErgoError, Result};
use crate::ergotropics::{
    active_energy_from_spectra, passive_energy_from_spectra, work_quantities,
};
use crate::hamiltonian::Hamiltonian;
use crate::matrix::ComplexMatrix;
use crate::spectrum::Spectrum;
use crate::state::{entropy_of_probabilities, DensityMatrix};
use crate::tolerances::{GIBBS_BISECTION_TOL, GIBBS_MATCH_TOL, GIBBS_MAX_ITERS};

/// Which side of the entropy-matched pair to solve for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaSign {
    /// `β ≥ 0`: the lowest-energy state at the target entropy.
    Positive,
    /// `β ≤ 0`: the highest-energy state at the target entropy.
    Negative,
}

/// Result of matching a Gibbs state to a target entropy.
#[derive(Clone, Debug)]
pub struct GibbsMatch {
    /// Inverse temperature; `±∞` at pure-state targets.
    pub beta: f64,
    /// `e^{−βH}/Z`, diagonal in the eigenbasis of `H`.
    pub gibbs_state: DensityMatrix,
    /// Von Neumann entropy (natural log) actually reached.
    pub achieved_entropy: f64,
}

/// Per-copy many-copy limits.
#[derive(Clone, Copy, Debug)]
pub struct TotalQuantities {
    /// `Tr[ρH] − Tr[ω_β H] ≥ ergotropy`.
    pub total_ergotropy: f64,
    /// `Tr[ρH] − Tr[ω_{−β*} H] ≤ antiergotropy`.
    pub total_antiergotropy: f64,
    /// `Tr[ω_{−β*}H] − Tr[ω_β H] ≥ capacity`.
    pub total_capacity: f64,
}

/// Solves `S(e^{−βH}/Z) = target_entropy` (natural log) on the requested
/// branch by bracketed bisection.
///
/// Targets of zero entropy short-circuit to the extreme projector with
/// `β = ±∞`. A fully degenerate Hamiltonian only supports the maximal
/// entropy `ln d`.
pub fn match_gibbs(
    target_entropy: f64,
    h: &Hamiltonian,
    sign: BetaSign,
) -> Result<GibbsMatch> {
    let (energies, _) = h.eigenbasis()?;
    let d = energies.len();
    let ln_d = (d as f64).ln();
    if !(-1e-12..=ln_d + 1e-9).contains(&target_entropy) {
        return Err(ErgoError::EntropyOutOfRange(format!(
            "target entropy {target_entropy} outside [0, ln {d} = {ln_d}]"
        )));
    }
    let target = target_entropy.clamp(0.0, ln_d);

    // Work on energies oriented so that the solved branch is always β ≥ 0:
    // the negative branch minimizes energy of −H, i.e. maximizes it for H.
    let oriented: Vec<f64> = match sign {
        BetaSign::Positive => energies.values().to_vec(),
        BetaSign::Negative => {
            let top = energies.max();
            energies.values().iter().rev().map(|&e| top - e).collect()
        }
    };

    let solved = solve_positive_branch(&oriented, target, d)?;

    // Map populations back to the original level order.
    let populations: Vec<f64> = match sign {
        BetaSign::Positive => solved.populations,
        BetaSign::Negative => solved.populations.into_iter().rev().collect(),
    };
    let beta = match sign {
        BetaSign::Positive => solved.beta,
        BetaSign::Negative => -solved.beta,
    };

    let (_, basis) = h.eigenbasis()?;
    let diag = ComplexMatrix::from_diag(&populations);
    let matrix = basis.matmul(&diag).matmul(&basis.dagger()).hermitized();
    let spectrum = Spectrum::from_unsorted(populations);
    let gibbs_state = DensityMatrix::from_valid_parts(matrix, h.dims(), Some(spectrum));
    Ok(GibbsMatch { beta, gibbs_state, achieved_entropy: solved.entropy })
}

struct BranchSolution {
    beta: f64,
    /// Populations aligned with the oriented ascending energies.
    populations: Vec<f64>,
    entropy: f64,
}

/// Populations `e^{−b·x_i}/Z` and entropy for shifted energies `x_i ≥ 0`.
fn gibbs_populations(shifted: &[f64], b: f64) -> (Vec<f64>, f64) {
    let weights: Vec<f64> = shifted.iter().map(|&x| (-b * x).exp()).collect();
    let z: f64 = weights.iter().sum();
    let populations: Vec<f64> = weights.into_iter().map(|w| w / z).collect();
    let entropy = entropy_of_probabilities(&populations, std::f64::consts::E);
    (populations, entropy)
}

fn solve_positive_branch(energies: &[f64], target: f64, d: usize) -> Result<BranchSolution> {
    let e_min = energies[0];
    let shifted: Vec<f64> = energies.iter().map(|e| e - e_min).collect();
    let spread = *shifted.last().unwrap();
    let ln_d = (d as f64).ln();

    // The entropy is flat to second order around β = 0, so the maximal
    // entropy target maps to β = 0 directly instead of through bisection.
    if (target - ln_d).abs() <= 1e-12 {
        let populations = vec![1.0 / d as f64; d];
        return Ok(BranchSolution { beta: 0.0, populations, entropy: ln_d });
    }

    if spread <= 1e-14 {
        // Fully degenerate spectrum: every Gibbs state is maximally mixed.
        if (target - ln_d).abs() <= GIBBS_MATCH_TOL {
            let populations = vec![1.0 / d as f64; d];
            return Ok(BranchSolution { beta: 0.0, populations, entropy: ln_d });
        }
        return Err(ErgoError::DegenerateSpectrum(format!(
            "fully degenerate spectrum only reaches entropy ln {d}, not {target}"
        )));
    }

    // Entropy floor: as β → ∞ the populations flatten onto the ground
    // level(s); below ln(multiplicity) there is no solution.
    let ground_multiplicity = shifted.iter().filter(|&&x| x <= 1e-12 * spread).count();
    let floor = (ground_multiplicity as f64).ln();
    if target <= floor + GIBBS_BISECTION_TOL {
        if target < floor - GIBBS_MATCH_TOL {
            return Err(ErgoError::DegenerateSpectrum(format!(
                "extreme level multiplicity {ground_multiplicity} sets an entropy floor \
                 ln {ground_multiplicity} above the target {target}"
            )));
        }
        let mut populations = vec![0.0; d];
        for (p, &x) in populations.iter_mut().zip(&shifted) {
            if x <= 1e-12 * spread {
                *p = 1.0 / ground_multiplicity as f64;
            }
        }
        return Ok(BranchSolution { beta: f64::INFINITY, populations, entropy: floor });
    }

    // S(β) is strictly decreasing; S(0) = ln d ≥ target. Expand the upper
    // bracket edge until the entropy drops below the target.
    let scale = spread / (d as f64 - 1.0);
    let mut lo = 0.0f64;
    let mut hi = 50.0 / scale;
    let mut iterations = 0usize;
    loop {
        let (_, s_hi) = gibbs_populations(&shifted, hi);
        if s_hi < target {
            break;
        }
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations >= GIBBS_MAX_ITERS {
            return Err(ErgoError::NoConvergence(format!(
                "entropy bracket never crossed the target {target} (floor {floor})"
            )));
        }
    }

    // Run the bisection to a tight bracket, not merely to the entropy
    // tolerance: near β = 0 the entropy is flat while the Gibbs energy is
    // not, so a loose β would still show up in the matched energies.
    let mut best_b = hi;
    let mut best = gibbs_populations(&shifted, hi);
    while iterations < GIBBS_MAX_ITERS {
        iterations += 1;
        debug_assert!(lo < hi, "bisection bracket collapsed");
        let mid = 0.5 * (lo + hi);
        let (populations, entropy) = gibbs_populations(&shifted, mid);
        if (entropy - target).abs() < (best.1 - target).abs() {
            best_b = mid;
            best = (populations.clone(), entropy);
        }
        let bracket_tight = hi - lo <= 1e-13 * hi.max(1.0);
        if bracket_tight && (entropy - target).abs() <= GIBBS_BISECTION_TOL {
            return Ok(BranchSolution { beta: mid, populations, entropy });
        }
        if entropy > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if bracket_tight {
            break;
        }
    }
    if (best.1 - target).abs() <= GIBBS_MATCH_TOL {
        return Ok(BranchSolution { beta: best_b, populations: best.0, entropy: best.1 });
    }
    Err(ErgoError::NoConvergence(format!(
        "entropy bisection stalled at |ΔS| = {:e}",
        (best.1 - target).abs()
    )))
}

/// Per-copy limits of ergotropy, antiergotropy, and capacity over many
/// identical copies of `(ρ, H)`.
pub fn total_quantities(rho: &DensityMatrix, h: &Hamiltonian) -> Result<TotalQuantities> {
    if rho.dim() != h.dim() {
        return Err(ErgoError::DimensionMismatch(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            rho.dim(),
            h.dim()
        )));
    }
    let entropy = entropy_of_probabilities(rho.spectrum().values(), std::f64::consts::E);
    let energies = h.eigenenergies()?;
    let mean = h.mean_energy(rho)?;

    let low = match_gibbs(entropy, h, BetaSign::Positive)?;
    let high = match_gibbs(entropy, h, BetaSign::Negative)?;
    // β > 0 populations are passive-ordered, β < 0 active-ordered; the
    // spectral pairings give the energies without matrix products.
    let energy_low = passive_energy_from_spectra(low.gibbs_state.spectrum(), &energies)?;
    let energy_high = active_energy_from_spectra(high.gibbs_state.spectrum(), &energies)?;

    Ok(TotalQuantities {
        total_ergotropy: mean - energy_low,
        total_antiergotropy: mean - energy_high,
        total_capacity: energy_high - energy_low,
    })
}

/// Convenience: the regular and total quantities side by side, with the
/// dominance slack `total_capacity − capacity ≥ 0` available to callers.
pub fn totals_with_baseline(
    rho: &DensityMatrix,
    h: &Hamiltonian,
) -> Result<(crate::ergotropics::WorkQuantities, TotalQuantities)> {
    Ok((work_quantities(rho, h)?, total_quantities(rho, h)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag_state(probs: &[f64]) -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_diag(probs), vec![probs.len()]).unwrap()
    }

    #[test]
    fn maximal_entropy_gives_infinite_temperature() {
        let h = Hamiltonian::equispaced(2, 1.0).unwrap();
        let m = match_gibbs(2f64.ln(), &h, BetaSign::Positive).unwrap();
        assert_abs_diff_eq!(m.beta, 0.0, epsilon = 1e-9);
        assert!(m
            .gibbs_state
            .matrix()
            .max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5))
            < 1e-9);
    }

    #[test]
    fn zero_entropy_gives_ground_projector() {
        let h = Hamiltonian::equispaced(3, 1.0).unwrap();
        let m = match_gibbs(0.0, &h, BetaSign::Positive).unwrap();
        assert!(m.beta.is_infinite() && m.beta > 0.0);
        assert_abs_diff_eq!(m.gibbs_state.matrix().get(0, 0).re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.achieved_entropy, 0.0, epsilon = 1e-12);

        let top = match_gibbs(0.0, &h, BetaSign::Negative).unwrap();
        assert_abs_diff_eq!(top.gibbs_state.matrix().get(2, 2).re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn matched_entropy_beats_passive_energy() {
        // The entropy-matched Gibbs state is the energy minimum at fixed
        // entropy, so it lies below the passive state of any state with
        // that spectrum.
        let spectrum = [0.5f64, 0.3, 0.2];
        let target = -spectrum.iter().map(|p: &f64| p * p.ln()).sum::<f64>();
        assert_abs_diff_eq!(target, 1.029653014, epsilon = 1e-8);
        let h = Hamiltonian::equispaced(3, 1.0).unwrap();
        let m = match_gibbs(target, &h, BetaSign::Positive).unwrap();
        assert!((m.achieved_entropy - target).abs() <= GIBBS_MATCH_TOL);
        let energy = h.mean_energy(&m.gibbs_state).unwrap();
        assert!(energy < 0.7, "Gibbs energy {energy} should undercut the passive 0.7");
        assert!(m.beta > 0.0);
    }

    #[test]
    fn entropy_is_monotone_in_beta() {
        let h = Hamiltonian::equispaced(4, 1.0).unwrap();
        let energies: Vec<f64> = h.eigenenergies().unwrap().values().to_vec();
        let mut last = f64::INFINITY;
        for k in 0..60 {
            let b = 0.2 * k as f64;
            let (_, s) = gibbs_populations(&energies, b);
            assert!(s <= last + 1e-12);
            last = s;
        }
    }

    #[test]
    fn degenerate_hamiltonian_needs_maximal_entropy() {
        let h = Hamiltonian::equispaced(3, 0.0).unwrap();
        assert!(matches!(
            match_gibbs(0.5, &h, BetaSign::Positive),
            Err(ErgoError::DegenerateSpectrum(_))
        ));
        let ok = match_gibbs(3f64.ln(), &h, BetaSign::Positive).unwrap();
        assert_abs_diff_eq!(ok.beta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn out_of_range_entropy_rejected() {
        let h = Hamiltonian::equispaced(2, 1.0).unwrap();
        assert!(matches!(
            match_gibbs(1.0, &h, BetaSign::Positive),
            Err(ErgoError::EntropyOutOfRange(_))
        ));
        assert!(match_gibbs(-0.5, &h, BetaSign::Positive).is_err());
    }

    #[test]
    fn totals_for_pure_and_mixed_extremes() {
        let d = 4;
        let h = Hamiltonian::equispaced(d, 1.5).unwrap();
        let pure = diag_state(&[1.0, 0.0, 0.0, 0.0]);
        let t = total_quantities(&pure, &h).unwrap();
        assert_abs_diff_eq!(t.total_capacity, (d as f64 - 1.0) * 1.5, epsilon = 1e-9);

        let mixed = diag_state(&[0.25; 4]);
        let t = total_quantities(&mixed, &h).unwrap();
        assert_abs_diff_eq!(t.total_ergotropy, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.total_antiergotropy, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.total_capacity, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn qubit_totals_equal_plain_quantities() {
        // A qubit spectrum is fixed by its entropy, so the matched Gibbs
        // pair coincides with the passive and active states.
        let rho = diag_state(&[0.3, 0.7]);
        let h = Hamiltonian::equispaced(2, 1.0).unwrap();
        let (w, t) = totals_with_baseline(&rho, &h).unwrap();
        assert_abs_diff_eq!(t.total_capacity, 0.4, epsilon = 1e-9);
        assert_abs_diff_eq!(t.total_capacity, w.capacity, epsilon = 1e-9);
        assert_abs_diff_eq!(t.total_ergotropy, w.ergotropy, epsilon = 1e-9);
        assert_abs_diff_eq!(t.total_antiergotropy, w.antiergotropy, epsilon = 1e-9);
    }

    #[test]
    fn branch_symmetry_for_ladders() {
        let h = Hamiltonian::equispaced(5, 1.0).unwrap();
        let target = 1.2;
        let low = match_gibbs(target, &h, BetaSign::Positive).unwrap();
        let high = match_gibbs(target, &h, BetaSign::Negative).unwrap();
        let e_low = h.mean_energy(&low.gibbs_state).unwrap();
        let e_high = h.mean_energy(&high.gibbs_state).unwrap();
        assert_abs_diff_eq!(e_low + e_high, 4.0, epsilon = 1e-9);
        assert_abs_diff_eq!(low.beta, -high.beta, epsilon = 1e-9);
    }
}
