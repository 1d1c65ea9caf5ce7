//! Property suites that cut across modules: unitary invariance, work-window
//! sandwich, duality, entropy orderings, gap nonnegativity, and the Monte
//! Carlo identity across seeds.

use ergokit::ergotropics::{extremal_states, work_extracted, work_quantities};
use ergokit::families;
use ergokit::gaps;
use ergokit::hamiltonian::Hamiltonian;
use ergokit::matrix::{ComplexMatrix, C64};
use ergokit::sampling::{self, haar_unitary, stream_rng, PurityModel, SampleConfig};
use ergokit::state::{self, DensityMatrix};
use ergokit::tolerances::EIG_RECONSTRUCTION_TOL;

use rand::Rng;

fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    sampling::ginibre(d, rng).hermitized()
}

#[test]
fn eigendecomposition_round_trip_bulk() {
    for d in 2usize..=8 {
        for i in 0..1000u64 {
            let mut rng = stream_rng(0x11A_0001 + d as u64, i);
            let m = random_hermitian(d, &mut rng);
            let (values, vectors) = ergokit::eig_hermitian(&m, 1e-8).unwrap();
            let recon = vectors
                .matmul(&ComplexMatrix::from_diag(values.values()))
                .matmul(&vectors.dagger());
            assert!(recon.max_abs_diff(&m) <= EIG_RECONSTRUCTION_TOL, "d = {d}, i = {i}");
            assert!(
                vectors
                    .matmul(&vectors.dagger())
                    .max_abs_diff(&ComplexMatrix::identity(d))
                    <= EIG_RECONSTRUCTION_TOL
            );
        }
    }
}

#[test]
fn capacity_is_unitarily_invariant() {
    for &d in &[2usize, 3, 4, 6] {
        let h = Hamiltonian::equispaced(d, 1.0).unwrap();
        for i in 0..500u64 {
            let mut rng = stream_rng(0x11A_0002 + d as u64, i);
            let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
            let u = haar_unitary(d, &mut rng);
            let rotated = rho.apply_unitary(&u).unwrap();
            let c0 = work_quantities(&rho, &h).unwrap().capacity;
            let c1 = work_quantities(&rotated, &h).unwrap().capacity;
            assert!((c0 - c1).abs() <= 1e-8, "d = {d}: {c0} vs {c1}");
        }
    }
}

#[test]
fn work_extraction_sandwich() {
    let mut rng = stream_rng(0x11A_0003, 0);
    let rho = sampling::random_density(3, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
    let h = Hamiltonian::explicit(random_hermitian(3, &mut rng)).unwrap();
    let w = work_quantities(&rho, &h).unwrap();
    for i in 0..10_000u64 {
        let mut rng = stream_rng(0x11A_0004, i);
        let u = haar_unitary(3, &mut rng);
        let value = work_extracted(&rho, &h, &u).unwrap();
        assert!(value >= w.antiergotropy - 1e-9);
        assert!(value <= w.ergotropy + 1e-9);
    }
}

#[test]
fn antiergotropy_is_negated_ergotropy_of_flipped_hamiltonian() {
    for i in 0..500u64 {
        let mut rng = stream_rng(0x11A_0005, i);
        let d = 2 + (i % 4) as usize;
        let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let h = Hamiltonian::explicit(random_hermitian(d, &mut rng)).unwrap();
        let w = work_quantities(&rho, &h).unwrap();
        let flipped = work_quantities(&rho, &h.negated()).unwrap();
        assert!((w.antiergotropy + flipped.ergotropy).abs() <= 1e-9);
        assert!((w.ergotropy + flipped.antiergotropy).abs() <= 1e-9);
    }
}

#[test]
fn capacity_equals_extremal_state_functionals() {
    for i in 0..300u64 {
        let mut rng = stream_rng(0x11A_0006, i);
        let d = 2 + (i % 5) as usize;
        let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let h = Hamiltonian::explicit(random_hermitian(d, &mut rng)).unwrap();
        let w = work_quantities(&rho, &h).unwrap();
        let ext = extremal_states(&rho, &h).unwrap();
        let w_active = work_quantities(&ext.active, &h).unwrap();
        let w_passive = work_quantities(&ext.passive, &h).unwrap();
        assert!((w.capacity - w_active.ergotropy).abs() <= 1e-9);
        assert!((w.capacity + w_passive.antiergotropy).abs() <= 1e-9);
        // The extremes share the input spectrum.
        assert!((w_active.capacity - w.capacity).abs() <= 1e-9);
    }
}

#[test]
fn qubit_coherence_decomposition() {
    let h = Hamiltonian::equispaced(2, 1.0).unwrap();
    for i in 0..10_000u64 {
        let mut rng = stream_rng(0x11A_0007, i);
        let rho = sampling::random_density(2, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let cap = work_quantities(&rho, &h).unwrap().capacity;
        let q = rho.matrix().get(1, 1).re;
        let c_inc = (1.0 - 2.0 * q).abs();
        let l1 = state::coherence_l1(&rho);
        assert!(
            (cap * cap - c_inc * c_inc - l1 * l1).abs() <= 1e-9,
            "decomposition fails: C² = {}, C_inc² + l1² = {}",
            cap * cap,
            c_inc * c_inc + l1 * l1
        );
        // The interval collapses to the l1 value on qubits.
        let (lo, hi) = state::coherence_robustness(&rho);
        assert_eq!(lo, hi);
        assert!((lo - l1).abs() <= 1e-12);
    }
}

#[test]
fn equispaced_entropy_and_coherence_bounds() {
    for &d in &[2usize, 3, 4, 6] {
        let h = Hamiltonian::equispaced(d, 1.0).unwrap();
        let coefficient = (d * d / 4) as f64;
        for i in 0..2_000u64 {
            let mut rng = stream_rng(0x11A_0008 + d as u64, i);
            let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
            let cap = work_quantities(&rho, &h).unwrap().capacity;
            let l = state::linear_entropy(&rho).value;
            // Variance bound in entropic form, with the summed (not the
            // printed) ladder variance.
            let lhs = cap * cap + (d as f64 / 3.0) * l;
            assert!(lhs >= (d as f64 - 1.0) / 3.0 - 1e-9, "d = {d}: lhs {lhs}");
            // l1-coherence bound with the ⌊d²/4⌋ coefficient.
            let l1 = state::coherence_l1(&rho);
            assert!(cap <= coefficient * (l1 + 1.0) + 1e-9);
        }
    }
}

#[test]
fn entropy_orderings_on_random_states() {
    for i in 0..2_000u64 {
        let mut rng = stream_rng(0x11A_0009, i);
        let d = 2 + (i % 5) as usize;
        let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let nats = state::von_neumann_entropy(&rho, std::f64::consts::E).unwrap().value;
        let l = state::linear_entropy(&rho).value;
        assert!(nats >= l - 1e-12);
        let mut last = f64::INFINITY;
        for p in [1.5, 2.0, 3.0, 5.0] {
            let t = state::tsallis_entropy(&rho, p).unwrap().value;
            assert!(t <= last + 1e-12, "Tsallis not monotone at p = {p}");
            last = t;
        }
    }
}

#[test]
fn gap_nonnegativity_on_random_states() {
    for (seed, dims) in [(0x11A_000Au64, vec![2usize, 2]), (0x11A_000B, vec![2, 3])] {
        let locals: Vec<Hamiltonian> =
            dims.iter().map(|&d| Hamiltonian::equispaced(d, 1.0).unwrap()).collect();
        let h = Hamiltonian::composite(locals).unwrap();
        let total: usize = dims.iter().product();
        for i in 0..5_000u64 {
            let mut rng = stream_rng(seed, i);
            let rho_single =
                sampling::random_density(total, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
            let rho = DensityMatrix::new(rho_single.matrix().clone(), dims.clone()).unwrap();
            let (delta_out, delta_in) = gaps::ergotropic_gaps(&rho, &h).unwrap();
            assert!(delta_out >= -1e-9, "δ_out = {delta_out}");
            assert!(delta_in >= -1e-9, "δ_in = {delta_in}");
            let gap = gaps::capacity_gap(&rho, &h, &[vec![0], vec![1]]).unwrap();
            assert!(gap >= -1e-9);
            assert!((gap - (delta_in + delta_out)).abs() <= 1e-9);
        }
    }
}

#[test]
fn gaps_vanish_on_pure_products() {
    let h = gaps::qubit_ladder_sum(3).unwrap();
    for i in 0..2_000u64 {
        let mut rng = stream_rng(0x11A_000C, i);
        let mut amplitudes = vec![C64::new(1.0, 0.0)];
        for _ in 0..3 {
            let factor = sampling::haar_state_vector(2, &mut rng);
            let mut next = Vec::with_capacity(amplitudes.len() * 2);
            for a in &amplitudes {
                for f in &factor {
                    next.push(a * f);
                }
            }
            amplitudes = next;
        }
        let rho = DensityMatrix::from_pure(&amplitudes, vec![2, 2, 2]).unwrap();
        let full = gaps::fully_separable_gap(&rho, &h).unwrap();
        assert!(full.abs() <= 1e-9, "product state has gap {full}");
    }
}

#[test]
fn equispaced_local_ladders_balance_charging_and_discharging() {
    // δ_in = δ_out whenever every local term is an equispaced ladder, even
    // with different spacings per site.
    let locals = vec![
        Hamiltonian::equispaced(2, 1.0).unwrap(),
        Hamiltonian::equispaced(3, 0.7).unwrap(),
    ];
    let h = Hamiltonian::composite(locals).unwrap();
    for i in 0..3_000u64 {
        let mut rng = stream_rng(0x11A_000D, i);
        let rho_single =
            sampling::random_density(6, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let rho = DensityMatrix::new(rho_single.matrix().clone(), vec![2, 3]).unwrap();
        let (delta_out, delta_in) = gaps::ergotropic_gaps(&rho, &h).unwrap();
        assert!(
            (delta_in - delta_out).abs() <= 1e-9,
            "δ_in = {delta_in}, δ_out = {delta_out}"
        );
    }
}

#[test]
fn tripartite_gap_half_sum_identity() {
    let h = gaps::qubit_ladder_sum(3).unwrap();
    for i in 0..2_000u64 {
        let mut rng = stream_rng(0x11A_000E, i);
        let psi = sampling::haar_state_vector(8, &mut rng);
        let rho = DensityMatrix::from_pure(&psi, vec![2, 2, 2]).unwrap();
        let bipartite = gaps::bipartition_gaps(&rho, &h).unwrap();
        let full = gaps::fully_separable_gap(&rho, &h).unwrap();
        let half_sum = 0.5 * bipartite.iter().sum::<f64>();
        assert!((full - half_sum).abs() <= 1e-9);
    }
}

#[test]
fn faithfulness_smoke_tests() {
    let h = gaps::qubit_ladder_sum(3).unwrap();
    // Genuinely entangled states give positive measures.
    for theta in [0.2, 0.7, 1.2] {
        let m = gaps::multipartite_measures(&families::ghz_state(theta), &h, None).unwrap();
        assert!(m.mbwcg > 0.0, "GHZ(θ = {theta}) mbwcg vanished");
    }
    let ghz = gaps::multipartite_measures(&families::ghz_state(0.785398163), &h, None).unwrap();
    let w = gaps::multipartite_measures(&families::w_state(), &h, None).unwrap();
    assert!(ghz.wcf.unwrap() > 0.0);
    assert!(w.wcf.unwrap() > 0.0);

    // Biseparable but not fully product: qubit ⊗ Bell pair.
    let mut amplitudes = vec![C64::new(0.0, 0.0); 8];
    amplitudes[0] = C64::new(0.5f64.sqrt(), 0.0);
    amplitudes[3] = C64::new(0.5f64.sqrt(), 0.0);
    let bisep = DensityMatrix::from_pure(&amplitudes, vec![2, 2, 2]).unwrap();
    let m = gaps::multipartite_measures(&bisep, &h, None).unwrap();
    assert_eq!(m.mbwcg, 0.0);
    assert_eq!(m.abcg, 0.0);
    assert_eq!(m.wcv, 0.0);
    // The fully separable gap may stay positive on biseparable states.
    let full = gaps::fully_separable_gap(&bisep, &h).unwrap();
    assert!(full > 1.0);
    // The capacity fill as defined does not vanish here; the errata ledger
    // adjudicates this against the faithfulness claim.
    assert!(m.wcf.unwrap() > 0.0);
}

#[test]
fn variance_identity_across_seeds() {
    // 3 dimensions × 5 seeds; tolerate one outlier beyond 3 SE and retry it
    // once with a shifted seed before failing.
    let n = 20_000usize;
    let mut failures = Vec::new();
    for &d in &[2usize, 3, 4] {
        for seed in 0..5u64 {
            let mut rng = stream_rng(0x11A_000F + seed, d as u64);
            let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
            let h = Hamiltonian::equispaced(d, 1.0).unwrap();
            let cfg = SampleConfig::new(d, n, 0xCAFE + seed, PurityModel::HilbertSchmidt).unwrap();
            let run = sampling::mc_work_variance(&rho, &h, &cfg).unwrap();
            let z = (run.estimate.variance - run.analytic_variance)
                / run.estimate.std_error_of_variance;
            if z.abs() > 3.0 {
                failures.push((d, seed, z));
            }
        }
    }
    assert!(failures.len() <= 1, "too many variance outliers: {failures:?}");
    if let Some(&(d, seed, _)) = failures.first() {
        let mut rng = stream_rng(0x11A_000F + seed, d as u64);
        let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
        let h = Hamiltonian::equispaced(d, 1.0).unwrap();
        let cfg =
            SampleConfig::new(d, n, 0xFEED + seed, PurityModel::HilbertSchmidt).unwrap();
        let run = sampling::mc_work_variance(&rho, &h, &cfg).unwrap();
        let z = (run.estimate.variance - run.analytic_variance)
            / run.estimate.std_error_of_variance;
        assert!(z.abs() <= 3.0, "outlier persisted after the retry: z = {z}");
    }
}

#[test]
fn haar_golden_regression() {
    // Frozen first row of the seed-42 stream-0 two-level unitary; guards
    // the sampling pipeline (Gaussian draws, orthonormalization order)
    // against silent changes that would invalidate recorded runs.
    let mut rng = stream_rng(42, 0);
    let u = haar_unitary(2, &mut rng);
    let reconstructed = format!(
        "{:.15e} {:.15e} {:.15e} {:.15e}",
        u.get(0, 0).re,
        u.get(0, 0).im,
        u.get(0, 1).re,
        u.get(0, 1).im
    );
    assert_eq!(reconstructed, GOLDEN_HAAR_ROW, "Haar sampling pipeline changed");
}

const GOLDEN_HAAR_ROW: &str =
    "9.721087235410089e-2 1.861359394471606e-1 8.980889284399084e-1 3.864449960291050e-1";

#[test]
fn sandwich_implies_popoviciu_orientation() {
    // Every sampled W_U lies in [A, E]; the empirical variance therefore
    // respects Var ≤ (E − A)²/4 = C²/4, the corrected orientation.
    let mut rng = stream_rng(0x11A_0010, 0);
    let rho = sampling::random_density(4, &PurityModel::HilbertSchmidt, &mut rng).unwrap();
    let h = Hamiltonian::equispaced(4, 1.0).unwrap();
    let w = work_quantities(&rho, &h).unwrap();
    let samples = sampling::sample_work_values(&rho, &h, 0x600D, 20_000);
    let est = sampling::summarize(&samples);
    assert!(est.variance <= w.capacity * w.capacity / 4.0 + 1e-12);
    // And the analytic variance obeys the same cap, as the bound demands.
    assert!(
        sampling::analytic_work_variance(&rho, &h) <= w.capacity * w.capacity / 4.0 + 1e-12
    );
}

#[test]
fn ergotropics_are_threadsafe_for_shared_inputs() {
    // Immutable inputs, pure functions: hammer one (ρ, H) pair from many
    // threads and require identical outputs.
    let mut rng = stream_rng(0x11A_0011, 0);
    let rho = std::sync::Arc::new(
        sampling::random_density(4, &PurityModel::HilbertSchmidt, &mut rng).unwrap(),
    );
    let h = std::sync::Arc::new(Hamiltonian::equispaced(4, 1.0).unwrap());
    let reference = work_quantities(&rho, &h).unwrap();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let rho = rho.clone();
            let h = h.clone();
            std::thread::spawn(move || work_quantities(&rho, &h).unwrap())
        })
        .collect();
    for handle in handles {
        let w = handle.join().unwrap();
        assert_eq!(w.capacity.to_bits(), reference.capacity.to_bits());
        assert_eq!(w.passive_energy.to_bits(), reference.passive_energy.to_bits());
    }
}
