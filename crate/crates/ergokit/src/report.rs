//! The reproduction report: re-derives the worked examples, tabulates the
//! identity checks, and adjudicates every discrepancy found in the source
//! material in an errata ledger with printed value, computed value, and the
//! oracle used. Output is deterministic for a fixed seed: no timestamps,
//! fixed iteration orders, fixed formatting.

use serde::Serialize;

use crate::error::Result;
use crate::families;
use crate::gaps;
use crate::hamiltonian::Hamiltonian;
use crate::matrix::ComplexMatrix;
use crate::sampling::{self, PurityModel, SampleConfig};
use crate::spectrum::Spectrum;
use crate::state::{self, DensityMatrix};
use crate::thermal;

/// Formats with a fixed number of significant digits, positional where
/// readable and scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        let decimals = (digits as i32 - 1 - mag).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.*e}", digits.saturating_sub(1), x)
    }
}

/// One adjudicated discrepancy: where it is, what is printed there, what
/// the computation gives, and which independent oracle decided.
#[derive(Clone, Debug, Serialize)]
pub struct ErrataEntry {
    pub id: String,
    pub location: String,
    pub printed: String,
    pub computed: String,
    pub oracle: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct QubitGridSection {
    pub grid_points: usize,
    /// max |capacity(matrix path) − √((2q−1)²+4c²)| over the grid.
    pub max_capacity_deviation: f64,
    /// max |(C/E)² + 2L − 1| over the grid.
    pub max_linear_identity_deviation: f64,
    /// max |C² − C_inc² − E²·l1²| over the grid.
    pub max_coherence_split_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PureSchmidtSection {
    pub lambda_grid_points: usize,
    /// max |Δ_direct − 2(1−√(1−C²))| with the analytic concurrence.
    pub max_concurrence_form_deviation: f64,
    /// Value of the formula as printed, at λ = 1/2.
    pub printed_sqrt_form_at_half: f64,
    /// Direct gap at λ = 1/2.
    pub direct_gap_at_half: f64,
    pub isotropic_grid_points: usize,
    /// max |Δ_roof(v) − max(0, 2(1−2√(v−v²)))| over the v grid.
    pub max_isotropic_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GhzSection {
    pub theta_grid_points: usize,
    /// max |Δ_A|BC − 4·min(sin²θ, cos²θ)| over the θ grid.
    pub max_min_form_deviation: f64,
    /// max |Δ_A|BC − 4·sin²θ| over the θ grid (the printed form).
    pub max_printed_form_deviation: f64,
    pub gap_at_three_eighths_pi: f64,
    pub printed_at_three_eighths_pi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WernerPairSection {
    pub v_grid_points: usize,
    /// max |δ_in − v| and max |δ_out − v| at θ = π/4, units of E.
    pub max_delta_in_deviation: f64,
    pub max_delta_out_deviation: f64,
    /// `(θ, v, δ_in, δ_out)` samples over general θ.
    pub general_theta_rows: Vec<(f64, f64, f64, f64)>,
    /// Reduced spectrum at (v, θ) = (0.5, π/3) as computed.
    pub reduced_spectrum_example: Vec<f64>,
    /// Sum of the spectrum as printed (`{v cos²θ, v sin²θ}`) at the same
    /// point; a unit trace is the oracle.
    pub printed_reduced_sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WernerQuditRow {
    pub d: usize,
    pub v: f64,
    pub capacity: f64,
    pub capacity_rule: f64,
    pub von_neumann: f64,
    pub linear: f64,
    pub tsallis_2: f64,
    pub l1_coherence: f64,
    pub relative_entropy_coherence: f64,
    pub roc_lower: f64,
    pub roc_upper: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WernerQuditSection {
    pub rows: Vec<WernerQuditRow>,
    /// max over rows of |capacity − E·l1| (the table's headline relation).
    pub max_capacity_l1_deviation: f64,
    /// Whether the entropy ordering held on every row.
    pub entropy_ordering_held: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcinSection {
    pub random_tuples: usize,
    /// max |closed − spectral| over bipartitions and tuples.
    pub max_dual_path_deviation: f64,
    /// max |Δ_A|B|C − ½ Σ Δ_X|Xc| over the tuples, units of E.
    pub max_half_sum_deviation: f64,
    pub ghz_delta_in: [f64; 3],
    pub ghz_fully_separable_gap: f64,
    pub ghz_measures: gaps::MultipartiteMeasures,
    pub w_measures: gaps::MultipartiteMeasures,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarianceRow {
    pub dim: usize,
    pub model: String,
    pub n_samples: usize,
    pub sample_variance: f64,
    pub analytic_variance: f64,
    pub jackknife_se: f64,
    pub z_score: f64,
    /// max over samples of Var-normalized Popoviciu ratio Var/(C²/4).
    pub popoviciu_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarianceSection {
    pub rows: Vec<VarianceRow>,
    pub all_within_three_se: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThermalSection {
    pub random_pairs: usize,
    /// min over pairs of total_capacity − capacity (should be ≥ ~0).
    pub min_dominance_slack: f64,
    /// max |S(ω) − S(ρ)| over the pairs.
    pub max_entropy_residual: f64,
}

/// The full reproduction report.
#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub seed: u64,
    pub qubit_grid: QubitGridSection,
    pub pure_schmidt: PureSchmidtSection,
    pub ghz: GhzSection,
    pub werner_pair: WernerPairSection,
    pub werner_qudit: WernerQuditSection,
    pub acin: AcinSection,
    pub variance: VarianceSection,
    pub thermal: ThermalSection,
    pub errata: Vec<ErrataEntry>,
}

fn qubit_h() -> Hamiltonian {
    Hamiltonian::equispaced(2, 1.0).unwrap()
}

fn qubit_grid_section() -> Result<QubitGridSection> {
    let n = 100usize;
    let mut max_cap = 0.0f64;
    let mut max_lin = 0.0f64;
    let mut max_split = 0.0f64;
    let h = qubit_h();
    for iq in 0..n {
        let q = iq as f64 / (n - 1) as f64;
        let c_top = (q * (1.0 - q)).sqrt();
        for ic in 0..n {
            let c = c_top * ic as f64 / (n - 1) as f64;
            let rho = families::qubit_state(q, c, 0.0)?;
            let w = crate::ergotropics::work_quantities(&rho, &h)?;
            let closed = crate::ergotropics::qubit_capacity(q, c)?;
            max_cap = max_cap.max((w.capacity - closed).abs());
            let l = state::linear_entropy(&rho).value;
            max_lin = max_lin.max((w.capacity * w.capacity + 2.0 * l - 1.0).abs());
            let c_inc = (1.0 - 2.0 * q).abs();
            let l1 = state::coherence_l1(&rho);
            max_split =
                max_split.max((w.capacity * w.capacity - c_inc * c_inc - l1 * l1).abs());
        }
    }
    Ok(QubitGridSection {
        grid_points: n * n,
        max_capacity_deviation: max_cap,
        max_linear_identity_deviation: max_lin,
        max_coherence_split_deviation: max_split,
    })
}

fn pure_schmidt_section() -> Result<PureSchmidtSection> {
    let h = gaps::qubit_ladder_sum(2)?;
    let grid = 101usize;
    let mut max_conc = 0.0f64;
    for k in 0..grid {
        let lambda = k as f64 / (grid - 1) as f64;
        let rho = families::two_qubit_schmidt(lambda)?;
        let direct = gaps::capacity_gap(&rho, &h, &[vec![0], vec![1]])?;
        let c = 2.0 * (lambda * (1.0 - lambda)).sqrt();
        let form = 2.0 * (1.0 - (1.0 - c * c).max(0.0).sqrt());
        max_conc = max_conc.max((direct - form).abs());
    }
    let printed_half = 4.0 * (1.0 - 0.5f64.sqrt().max(0.5f64.sqrt()));
    let rho_half = families::two_qubit_schmidt(0.5)?;
    let direct_half = gaps::capacity_gap(&rho_half, &h, &[vec![0], vec![1]])?;

    let mut max_iso = 0.0f64;
    for k in 0..grid {
        let v = k as f64 / (grid - 1) as f64;
        let rho = families::isotropic_two_qubit(v, 0.5)?;
        let roof = gaps::capacity_gap_mixed_2q(&rho)?;
        let expected =
            if v > 0.5 { 2.0 * (1.0 - 2.0 * (v - v * v).sqrt()) } else { 0.0 };
        max_iso = max_iso.max((roof - expected).abs());
    }
    Ok(PureSchmidtSection {
        lambda_grid_points: grid,
        max_concurrence_form_deviation: max_conc,
        printed_sqrt_form_at_half: printed_half,
        direct_gap_at_half: direct_half,
        isotropic_grid_points: grid,
        max_isotropic_deviation: max_iso,
    })
}

fn ghz_section() -> Result<GhzSection> {
    let h = gaps::qubit_ladder_sum(3)?;
    let grid = 99usize;
    let mut max_min_form = 0.0f64;
    let mut max_printed = 0.0f64;
    for k in 1..grid {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / grid as f64;
        let rho = families::ghz_state(theta);
        let gap = gaps::capacity_gap(&rho, &h, &[vec![0], vec![1, 2]])?;
        let s2 = theta.sin().powi(2);
        let c2 = theta.cos().powi(2);
        max_min_form = max_min_form.max((gap - 4.0 * s2.min(c2)).abs());
        max_printed = max_printed.max((gap - 4.0 * s2).abs());
    }
    let probe = 3.0 * std::f64::consts::FRAC_PI_8;
    let rho = families::ghz_state(probe);
    let gap = gaps::capacity_gap(&rho, &h, &[vec![0], vec![1, 2]])?;
    Ok(GhzSection {
        theta_grid_points: grid - 1,
        max_min_form_deviation: max_min_form,
        max_printed_form_deviation: max_printed,
        gap_at_three_eighths_pi: gap,
        printed_at_three_eighths_pi: 4.0 * probe.sin().powi(2),
    })
}

fn werner_pair_section() -> Result<WernerPairSection> {
    let h = gaps::qubit_ladder_sum(2)?;
    let grid = 101usize;
    let mut max_in = 0.0f64;
    let mut max_out = 0.0f64;
    for k in 0..grid {
        let v = k as f64 / (grid - 1) as f64;
        let rho = families::werner_two_qubit(v, std::f64::consts::FRAC_PI_4)?;
        let (delta_out, delta_in) = gaps::ergotropic_gaps(&rho, &h)?;
        max_in = max_in.max((delta_in - v).abs());
        max_out = max_out.max((delta_out - v).abs());
    }
    let mut rows = Vec::new();
    for &theta in &[
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_4,
        3.0 * std::f64::consts::FRAC_PI_8,
    ] {
        for &v in &[0.25, 0.5, 0.75, 1.0] {
            let rho = families::werner_two_qubit(v, theta)?;
            let (delta_out, delta_in) = gaps::ergotropic_gaps(&rho, &h)?;
            rows.push((theta, v, delta_in, delta_out));
        }
    }
    let probe = families::werner_two_qubit(0.5, std::f64::consts::FRAC_PI_3)?;
    let reduced = probe.reduce(&[0])?;
    let reduced_spectrum = reduced.spectrum().values().to_vec();
    let printed_sum = 0.5 * std::f64::consts::FRAC_PI_3.cos().powi(2)
        + 0.5 * std::f64::consts::FRAC_PI_3.sin().powi(2);
    Ok(WernerPairSection {
        v_grid_points: grid,
        max_delta_in_deviation: max_in,
        max_delta_out_deviation: max_out,
        general_theta_rows: rows,
        reduced_spectrum_example: reduced_spectrum,
        printed_reduced_sum: printed_sum,
    })
}

fn werner_qudit_section() -> Result<WernerQuditSection> {
    let mut rows = Vec::new();
    let mut max_dev = 0.0f64;
    let mut ordering = true;
    for &(d, v) in &[(2usize, 0.3f64), (3, 0.5), (4, 0.75), (5, 0.9)] {
        let rho = families::werner_qudit(d, v)?;
        let h = Hamiltonian::equispaced(d, 1.0)?;
        let w = crate::ergotropics::work_quantities(&rho, &h)?;
        let rule = (d as f64 - 1.0) * v;
        let s = state::von_neumann_entropy(&rho, 2.0)?.value;
        let l = state::linear_entropy(&rho).value;
        let t2 = state::tsallis_entropy(&rho, 2.0)?.value;
        let l1 = state::coherence_l1(&rho);
        let re = state::coherence_relative_entropy(&rho, 2.0)?;
        let (lo, hi) = state::coherence_robustness(&rho);
        max_dev = max_dev.max((w.capacity - l1).abs());
        // Von Neumann in nats dominates the linear entropy.
        let nats = state::von_neumann_entropy(&rho, std::f64::consts::E)?.value;
        if nats < l - 1e-12 || t2 != l {
            ordering = false;
        }
        rows.push(WernerQuditRow {
            d,
            v,
            capacity: w.capacity,
            capacity_rule: rule,
            von_neumann: s,
            linear: l,
            tsallis_2: t2,
            l1_coherence: l1,
            relative_entropy_coherence: re,
            roc_lower: lo,
            roc_upper: hi,
        });
    }
    Ok(WernerQuditSection {
        rows,
        max_capacity_l1_deviation: max_dev,
        entropy_ordering_held: ordering,
    })
}

/// Draws a random generalized-Schmidt coefficient tuple.
pub fn random_acin_tuple<R: rand::Rng + ?Sized>(rng: &mut R) -> ([f64; 5], f64) {
    let mut l = [0.0f64; 5];
    let mut norm = 0.0;
    for slot in l.iter_mut() {
        let x: f64 = rng.gen::<f64>();
        *slot = x;
        norm += x * x;
    }
    let norm = norm.sqrt();
    for slot in l.iter_mut() {
        *slot /= norm;
    }
    let theta = rng.gen::<f64>() * std::f64::consts::PI;
    (l, theta)
}

fn acin_section(seed: u64, tuples: usize) -> Result<AcinSection> {
    let h = gaps::qubit_ladder_sum(3)?;
    let mut max_dual = 0.0f64;
    let mut max_half_sum = 0.0f64;
    for i in 0..tuples {
        let mut rng = sampling::stream_rng(seed ^ 0xAC1D, i as u64);
        let (l, theta) = random_acin_tuple(&mut rng);
        let result = gaps::acin_gap_formulas(&l, theta)?;
        for k in 0..3 {
            max_dual =
                max_dual.max((result.delta_in_closed[k] - result.delta_in_spectral[k]).abs());
        }
        let rho = families::acin_state(&l, theta)?;
        let gaps_list = gaps::bipartition_gaps(&rho, &h)?;
        let full = gaps::fully_separable_gap(&rho, &h)?;
        let half_sum = 0.5 * gaps_list.iter().sum::<f64>();
        max_half_sum = max_half_sum.max((full - half_sum).abs());
    }

    let inv = 0.5f64.sqrt();
    let ghz_result = gaps::acin_gap_formulas(&[inv, 0.0, 0.0, 0.0, inv], 0.0)?;
    let ghz = families::ghz_state(std::f64::consts::FRAC_PI_4);
    let ghz_full = gaps::fully_separable_gap(&ghz, &h)?;
    let ghz_measures = gaps::multipartite_measures(&ghz, &h, None)?;
    let w_measures = gaps::multipartite_measures(&families::w_state(), &h, None)?;
    Ok(AcinSection {
        random_tuples: tuples,
        max_dual_path_deviation: max_dual,
        max_half_sum_deviation: max_half_sum,
        ghz_delta_in: ghz_result.delta_in_spectral,
        ghz_fully_separable_gap: ghz_full,
        ghz_measures,
        w_measures,
    })
}

fn variance_section(seed: u64, n_samples: usize) -> Result<VarianceSection> {
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &d in &[2usize, 3, 4] {
        for model in [PurityModel::Pure, PurityModel::HilbertSchmidt] {
            let mut rng = sampling::stream_rng(seed ^ 0xFACE, d as u64);
            let rho = sampling::random_density(d, &model, &mut rng)?;
            let h = Hamiltonian::equispaced(d, 1.0)?;
            let cfg = SampleConfig::new(d, n_samples, seed.wrapping_add(d as u64), model.clone())?;
            let run = sampling::mc_work_variance(&rho, &h, &cfg)?;
            let se = run.estimate.std_error_of_variance;
            let z = if se > 0.0 {
                (run.estimate.variance - run.analytic_variance) / se
            } else {
                0.0
            };
            if z.abs() > 3.0 {
                all_ok = false;
            }
            let cap = crate::ergotropics::work_quantities(&rho, &h)?.capacity;
            let popoviciu_ratio = if cap > 0.0 {
                run.estimate.variance / (cap * cap / 4.0)
            } else {
                0.0
            };
            rows.push(VarianceRow {
                dim: d,
                model: match model {
                    PurityModel::Pure => "pure".into(),
                    PurityModel::HilbertSchmidt => "hilbert-schmidt".into(),
                    PurityModel::FixedSpectrum(_) => "fixed-spectrum".into(),
                },
                n_samples,
                sample_variance: run.estimate.variance,
                analytic_variance: run.analytic_variance,
                jackknife_se: se,
                z_score: z,
                popoviciu_ratio,
            });
        }
    }
    Ok(VarianceSection { rows, all_within_three_se: all_ok })
}

fn thermal_section(seed: u64, pairs: usize) -> Result<ThermalSection> {
    let mut min_slack = f64::INFINITY;
    let mut max_residual = 0.0f64;
    for i in 0..pairs {
        let mut rng = sampling::stream_rng(seed ^ 0x7E47, i as u64);
        let d = 2 + (i % 4);
        let rho = sampling::random_density(d, &PurityModel::HilbertSchmidt, &mut rng)?;
        let h = Hamiltonian::equispaced(d, 1.0)?;
        let (w, t) = thermal::totals_with_baseline(&rho, &h)?;
        min_slack = min_slack.min(t.total_capacity - w.capacity);
        let entropy = state::von_neumann_entropy(&rho, std::f64::consts::E)?.value;
        let m = thermal::match_gibbs(entropy, &h, thermal::BetaSign::Positive)?;
        max_residual = max_residual.max((m.achieved_entropy - entropy).abs());
    }
    Ok(ThermalSection {
        random_pairs: pairs,
        min_dominance_slack: min_slack,
        max_entropy_residual: max_residual,
    })
}

fn errata_entries() -> Result<Vec<ErrataEntry>> {
    let mut entries = Vec::new();

    // (a) Closed-form ladder variance.
    let direct_d3 = crate::ergotropics::hamiltonian_variance(&Hamiltonian::equispaced(3, 1.0)?);
    let closed_d3 = crate::ergotropics::equispaced_hamiltonian_variance(3, 1.0);
    let printed_d3 = (9.0 - 1.0) * (6.0 - 3.0) / 6.0;
    entries.push(ErrataEntry {
        id: "equispaced-variance-closed-form".into(),
        location: "appendix on equally spaced levels, closed form of the Hamiltonian variance".into(),
        printed: format!("σ²_H = (d²−1)(2d−3)/6 · E², giving {} at d = 3", format_sig(printed_d3, 9)),
        computed: format!(
            "σ²_H = d(d²−1)/12 · E², giving {} at d = 3 (direct summation gives {})",
            format_sig(closed_d3, 9),
            format_sig(direct_d3, 9)
        ),
        oracle: "direct evaluation of Tr[H²] − (Tr H)²/d = Σj² − (Σj)²/d".into(),
    });

    // (b) Capacity bound coefficient.
    let spec = Spectrum::from_sorted(vec![0.0, 0.0, 1.0])?;
    let rho = DensityMatrix::new(ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]), vec![3])?;
    let cap = crate::ergotropics::work_quantities(&rho, &Hamiltonian::equispaced(3, 1.0)?)?.capacity;
    let (_, upper) = crate::ergotropics::equispaced_capacity_bounds(&spec, 3, 1.0)?;
    entries.push(ErrataEntry {
        id: "capacity-bound-coefficient".into(),
        location: "appendix on equally spaced levels, display of the capacity bounds".into(),
        printed: format!(
            "coefficient (⌊d/2⌋)² = 1 at d = 3; on the spectrum (0,0,1) the upper bound 1 \
             falls below the capacity {}",
            format_sig(cap, 9)
        ),
        computed: format!(
            "coefficient ⌊d²/4⌋ = 2 at d = 3; upper bound {} holds with equality there",
            format_sig(upper, 9)
        ),
        oracle: "pairwise-sum identity Σ_{2j>d−1}(2j−d+1) = ⌊d²/4⌋ plus the explicit spectrum".into(),
    });

    // (c) Popoviciu orientation.
    entries.push(ErrataEntry {
        id: "popoviciu-orientation".into(),
        location: "appendix proof of the variance bound, Popoviciu inequality".into(),
        printed: "Var[f] ≤ 4(max f − min f)²".into(),
        computed: "Var[f] ≤ (max f − min f)²/4; a fair coin on {0,1} attains Var = 1/4".into(),
        oracle: "two-point equality case, and only the /4 orientation yields the final \
                 capacity bound 2σ_Hσ_ρ/√(d²−1) from the Haar variance identity"
            .into(),
    });

    // (d) Pure Schmidt-pair gap formula.
    let printed_half = 4.0 * (1.0 - 0.5f64.sqrt());
    let h2 = gaps::qubit_ladder_sum(2)?;
    let direct_half =
        gaps::capacity_gap(&families::two_qubit_schmidt(0.5)?, &h2, &[vec![0], vec![1]])?;
    entries.push(ErrataEntry {
        id: "pure-schmidt-gap-sqrt".into(),
        location: "first worked example, two-qubit pure state gap".into(),
        printed: format!(
            "Δ = 4(1 − max(√λ, √(1−λ))), giving {} at λ = 1/2",
            format_sig(printed_half, 9)
        ),
        computed: format!(
            "Δ = 4(1 − max(λ, 1−λ)), giving {} at λ = 1/2, matching the concurrence form \
             2(1 − √(1−C²)) = 2",
            format_sig(direct_half, 9)
        ),
        oracle: "direct spectral computation of global and reduced capacities".into(),
    });

    // (e) GHZ gap θ-range.
    let probe = 3.0 * std::f64::consts::FRAC_PI_8;
    let h3 = gaps::qubit_ladder_sum(3)?;
    let gap_probe =
        gaps::capacity_gap(&families::ghz_state(probe), &h3, &[vec![0], vec![1, 2]])?;
    entries.push(ErrataEntry {
        id: "ghz-gap-theta-range".into(),
        location: "second worked example, generalized GHZ bipartite gap".into(),
        printed: format!(
            "Δ = 4sin²θ for θ ∈ (0, π/2), giving {} at θ = 3π/8",
            format_sig(4.0 * probe.sin().powi(2), 9)
        ),
        computed: format!(
            "Δ = 4·min(sin²θ, cos²θ), giving {} at θ = 3π/8; the printed form holds only \
             for θ ≤ π/4",
            format_sig(gap_probe, 9)
        ),
        oracle: "direct spectral computation across the θ grid".into(),
    });

    // (f) Two-level antiergotropy sign.
    let (_, anti, _) = crate::ergotropics::qubit_closed_forms(0.3, 0.2)?;
    entries.push(ErrataEntry {
        id: "qubit-antiergotropy-sign".into(),
        location: "two-level battery section, antiergotropy expression".into(),
        printed: format!(
            "A = E(λ₊ − q), giving +{} at (q, c) = (0.3, 0.2)",
            format_sig(-anti, 9)
        ),
        computed: format!(
            "A = E(q − λ₊) = {}, consistent with A = min_U W_U ≤ W_I = 0",
            format_sig(anti, 9)
        ),
        oracle: "definition of the minimum over unitaries (the identity cycle gives 0) \
                 and dense sampling of 2×2 unitaries"
            .into(),
    });

    // (g) Main-text variance definition.
    let h_scaled = Hamiltonian::equispaced(2, 2.0)?;
    let correct = crate::ergotropics::hamiltonian_variance(&h_scaled);
    let main_text_form = 4.0 - 2.0 / 2.0;
    entries.push(ErrataEntry {
        id: "main-text-variance-definition".into(),
        location: "main text before the variance bound, definition of σ²_H".into(),
        printed: format!(
            "σ²_H = Tr[H²] − Tr[H]/d, giving {} for H = diag(0, 2)",
            format_sig(main_text_form, 9)
        ),
        computed: format!(
            "σ²_H = Tr[H²] − (Tr H)²/d, giving {} for H = diag(0, 2)",
            format_sig(correct, 9)
        ),
        oracle: "dimensional homogeneity: σ²(kH) = k²σ²(H), which the printed form violates".into(),
    });

    // (h) Spectral capacity form sign. On a qubit with energies (0, E) the
    // printed pairing gives λ₋·E − λ₊·E, the passive-minus-active sign.
    let (lm, lp) = families::qubit_eigenvalues(0.3, 0.2);
    let printed_value = lm - lp;
    entries.push(ErrataEntry {
        id: "capacity-spectral-form-sign".into(),
        location: "main text, second line of the spectral capacity display".into(),
        printed: format!(
            "C = Σ λ_i (ε_{{d−i−1}} − ε_i), which evaluates to {} on the reference qubit \
             (λ ascending)",
            format_sig(printed_value, 9)
        ),
        computed: format!(
            "C = Σ λ_i (ε_i − ε_{{d−1−i}}) = {}, the difference of active and passive \
             energies; the first line of the same display already has the correct \
             orientation",
            format_sig(lp - lm, 9)
        ),
        oracle: "two-level evaluation against C = E(λ₊ − λ₋) ≥ 0".into(),
    });

    // (i) Capacity fill on biseparable states.
    let mut amplitudes = vec![crate::matrix::C64::new(0.0, 0.0); 8];
    amplitudes[0] = crate::matrix::C64::new(0.5f64.sqrt(), 0.0); // |0⟩(|00⟩+|11⟩)/√2
    amplitudes[3] = crate::matrix::C64::new(0.5f64.sqrt(), 0.0);
    let bisep = DensityMatrix::from_pure(&amplitudes, vec![2, 2, 2])?;
    let bisep_gaps = gaps::bipartition_gaps(&bisep, &h3)?;
    let q: f64 = bisep_gaps.iter().sum();
    let printed_fill =
        (q * bisep_gaps.iter().map(|&g| q - g).product::<f64>() / 3.0).max(0.0).sqrt();
    let s = q / 2.0;
    let heron_fill =
        (s * bisep_gaps.iter().map(|&g| s - g).product::<f64>()).max(0.0).sqrt();
    entries.push(ErrataEntry {
        id: "capacity-fill-biseparable".into(),
        location: "appendix on multipartite measures, capacity fill definition".into(),
        printed: format!(
            "fill with Q = ΣΔ is claimed faithful, yet on |0⟩_A ⊗ Bell_BC the gaps are \
             ({}, {}, {}) and the fill is {} ≠ 0",
            format_sig(bisep_gaps[0], 3),
            format_sig(bisep_gaps[1], 3),
            format_sig(bisep_gaps[2], 3),
            format_sig(printed_fill, 9)
        ),
        computed: format!(
            "the Heron orientation with semiperimeter Q/2 vanishes there ({}); the \
             printed form is kept in the measures, adjudicated here",
            format_sig(heron_fill, 9)
        ),
        oracle: "direct gap computation on a biseparable product of a qubit with a Bell pair".into(),
    });

    // (j) Noisy Schmidt-pair reduced spectra.
    let probe_state = families::werner_two_qubit(0.5, std::f64::consts::FRAC_PI_3)?;
    let reduced = probe_state.reduce(&[0])?;
    let spec_vals = reduced.spectrum().values().to_vec();
    let printed_sum = 0.5 * std::f64::consts::FRAC_PI_3.cos().powi(2)
        + 0.5 * std::f64::consts::FRAC_PI_3.sin().powi(2);
    entries.push(ErrataEntry {
        id: "werner-pair-reduced-spectra".into(),
        location: "third worked example, reduced spectra of the noisy Schmidt pair".into(),
        printed: format!(
            "reduced spectrum {{v cos²θ, v sin²θ}}, which sums to v = {} at (v, θ) = (0.5, π/3)",
            format_sig(printed_sum, 9)
        ),
        computed: format!(
            "reduced spectrum {{v cos²θ + (1−v)/2, v sin²θ + (1−v)/2}} = ({}, {}), of unit trace",
            format_sig(spec_vals[0], 9),
            format_sig(spec_vals[1], 9)
        ),
        oracle: "partial trace plus the unit-trace requirement".into(),
    });

    // (k) Tripartite half-sum prefactor.
    entries.push(ErrataEntry {
        id: "tripartite-half-sum-prefactor".into(),
        location: "appendix on multipartite measures, fully separable gap identity".into(),
        printed: "Δ_A|B|C = (E/2)(Δ_A|BC + Δ_B|CA + Δ_C|AB), carrying one factor of E too many"
            .into(),
        computed: "Δ_A|B|C = ½(Δ_A|BC + Δ_B|CA + Δ_C|AB); the relation then holds exactly \
                   on every pure three-qubit state (GHZ: 3E = 6E/2), see the dual-path \
                   section for the observed residual"
            .into(),
        oracle: "spectral evaluation over seeded generalized-Schmidt tuples".into(),
    });

    Ok(entries)
}

/// Builds the full report. Deterministic for a fixed seed.
pub fn paper_report(seed: u64) -> Result<PaperReport> {
    Ok(PaperReport {
        seed,
        qubit_grid: qubit_grid_section()?,
        pure_schmidt: pure_schmidt_section()?,
        ghz: ghz_section()?,
        werner_pair: werner_pair_section()?,
        werner_qudit: werner_qudit_section()?,
        acin: acin_section(seed, 1000)?,
        variance: variance_section(seed, 20_000)?,
        thermal: thermal_section(seed, 500)?,
        errata: errata_entries()?,
    })
}

fn fmt(x: f64) -> String {
    format_sig(x, 9)
}

/// Renders the report as Markdown (the text output format).
pub fn render_markdown(report: &PaperReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, "# Battery capacity reproduction report".into());
    push(&mut out, String::new());
    push(&mut out, format!("Seed: {}", report.seed));
    push(&mut out, String::new());

    push(&mut out, "## Two-level closed forms".into());
    let g = &report.qubit_grid;
    push(&mut out, format!("- grid points: {}", g.grid_points));
    push(
        &mut out,
        format!("- max |capacity − closed form|: {}", fmt(g.max_capacity_deviation)),
    );
    push(
        &mut out,
        format!("- max |(C/E)² + 2L − 1|: {}", fmt(g.max_linear_identity_deviation)),
    );
    push(
        &mut out,
        format!(
            "- max |C² − C_inc² − E²·Cohe_l1²|: {}",
            fmt(g.max_coherence_split_deviation)
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Pure Schmidt pair and its noisy mixture".into());
    let p = &report.pure_schmidt;
    push(
        &mut out,
        format!(
            "- max |Δ − 2(1−√(1−C²))| over {} λ points: {}",
            p.lambda_grid_points,
            fmt(p.max_concurrence_form_deviation)
        ),
    );
    push(
        &mut out,
        format!(
            "- printed √λ form at λ = 1/2: {} (direct gap: {})",
            fmt(p.printed_sqrt_form_at_half),
            fmt(p.direct_gap_at_half)
        ),
    );
    push(
        &mut out,
        format!(
            "- max isotropic-family deviation over {} v points: {}",
            p.isotropic_grid_points,
            fmt(p.max_isotropic_deviation)
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Generalized GHZ bipartite gap".into());
    let gh = &report.ghz;
    push(
        &mut out,
        format!(
            "- max |Δ − 4·min(sin²θ, cos²θ)| over {} θ points: {}",
            gh.theta_grid_points,
            fmt(gh.max_min_form_deviation)
        ),
    );
    push(
        &mut out,
        format!(
            "- max |Δ − 4·sin²θ| over the same grid: {} (printed form fails above π/4)",
            fmt(gh.max_printed_form_deviation)
        ),
    );
    push(
        &mut out,
        format!(
            "- θ = 3π/8: computed {} versus printed {}",
            fmt(gh.gap_at_three_eighths_pi),
            fmt(gh.printed_at_three_eighths_pi)
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Noisy Schmidt pair gaps".into());
    let w = &report.werner_pair;
    push(
        &mut out,
        format!(
            "- θ = π/4 grid ({} points): max |δ_in − vE| = {}, max |δ_out − vE| = {}",
            w.v_grid_points,
            fmt(w.max_delta_in_deviation),
            fmt(w.max_delta_out_deviation)
        ),
    );
    push(&mut out, "- general θ (θ, v, δ_in, δ_out):".into());
    for (theta, v, din, dout) in &w.general_theta_rows {
        push(
            &mut out,
            format!("  - ({}, {}, {}, {})", fmt(*theta), fmt(*v), fmt(*din), fmt(*dout)),
        );
    }
    push(
        &mut out,
        format!(
            "- reduced spectrum at (v, θ) = (0.5, π/3): ({}, {}); printed form sums to {}",
            fmt(w.reduced_spectrum_example[0]),
            fmt(w.reduced_spectrum_example[1]),
            fmt(w.printed_reduced_sum)
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Uniform-superposition noise family".into());
    push(
        &mut out,
        "| d | v | capacity | (d−1)vE | S | L | T₂ | Cohe_l1 | Cohe_re | RoC |".into(),
    );
    push(&mut out, "|---|---|----------|---------|---|---|----|---------|---------|-----|".into());
    for row in &report.werner_qudit.rows {
        push(
            &mut out,
            format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | [{}, {}] |",
                row.d,
                fmt(row.v),
                fmt(row.capacity),
                fmt(row.capacity_rule),
                fmt(row.von_neumann),
                fmt(row.linear),
                fmt(row.tsallis_2),
                fmt(row.l1_coherence),
                fmt(row.relative_entropy_coherence),
                fmt(row.roc_lower),
                fmt(row.roc_upper)
            ),
        );
    }
    push(
        &mut out,
        format!(
            "- max |capacity − E·Cohe_l1|: {}; entropy ordering held: {}",
            fmt(report.werner_qudit.max_capacity_l1_deviation),
            report.werner_qudit.entropy_ordering_held
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Three-qubit generalized Schmidt form".into());
    let a = &report.acin;
    push(
        &mut out,
        format!(
            "- dual-path max deviation over {} tuples: {}",
            a.random_tuples,
            fmt(a.max_dual_path_deviation)
        ),
    );
    push(
        &mut out,
        format!("- half-sum identity max residual: {}", fmt(a.max_half_sum_deviation)),
    );
    push(
        &mut out,
        format!(
            "- GHZ point: δ_in per cut ({}, {}, {}), fully separable gap {}",
            fmt(a.ghz_delta_in[0]),
            fmt(a.ghz_delta_in[1]),
            fmt(a.ghz_delta_in[2]),
            fmt(a.ghz_fully_separable_gap)
        ),
    );
    push(
        &mut out,
        format!(
            "- GHZ measures: mbwcg {}, abcg {}, wcf {}, wcv {}",
            fmt(a.ghz_measures.mbwcg),
            fmt(a.ghz_measures.abcg),
            fmt(a.ghz_measures.wcf.unwrap_or(f64::NAN)),
            fmt(a.ghz_measures.wcv)
        ),
    );
    push(
        &mut out,
        format!(
            "- W measures: mbwcg {}, abcg {}, wcf {}, wcv {}",
            fmt(a.w_measures.mbwcg),
            fmt(a.w_measures.abcg),
            fmt(a.w_measures.wcf.unwrap_or(f64::NAN)),
            fmt(a.w_measures.wcv)
        ),
    );
    push(&mut out, String::new());

    push(&mut out, "## Haar work-variance identity".into());
    push(
        &mut out,
        "| d | model | n | sample Var | analytic | jackknife SE | z | Var/(C²/4) |".into(),
    );
    push(&mut out, "|---|-------|---|-----------|----------|--------------|---|------------|".into());
    for row in &report.variance.rows {
        push(
            &mut out,
            format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |",
                row.dim,
                row.model,
                row.n_samples,
                fmt(row.sample_variance),
                fmt(row.analytic_variance),
                fmt(row.jackknife_se),
                fmt(row.z_score),
                fmt(row.popoviciu_ratio)
            ),
        );
    }
    push(
        &mut out,
        format!("- all rows within 3 SE: {}", report.variance.all_within_three_se),
    );
    push(&mut out, String::new());

    push(&mut out, "## Entropy-matched totals".into());
    let t = &report.thermal;
    push(&mut out, format!("- random pairs: {}", t.random_pairs));
    push(&mut out, format!("- min(total capacity − capacity): {}", fmt(t.min_dominance_slack)));
    push(&mut out, format!("- max entropy-match residual: {}", fmt(t.max_entropy_residual)));
    push(&mut out, String::new());

    push(&mut out, "## Errata ledger".into());
    push(&mut out, String::new());
    for entry in &report.errata {
        push(&mut out, format!("### {}", entry.id));
        push(&mut out, format!("- location: {}", entry.location));
        push(&mut out, format!("- printed: {}", entry.printed));
        push(&mut out, format!("- computed: {}", entry.computed));
        push(&mut out, format!("- oracle: {}", entry.oracle));
        push(&mut out, String::new());
    }
    out
}
