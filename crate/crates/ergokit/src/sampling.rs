//! Haar-random unitaries, random states, and Monte Carlo verification of
//! the work statistics.
//!
//! Reproducibility contract: every sample index derives its own
//! counter-based RNG stream from the run seed, so results are bit-identical
//! across runs and across serial/parallel execution. Accumulation uses a
//! pairwise reduction in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ErgoError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;
use crate::tolerances::TRACE_TOL;

/// How random states are drawn.
#[derive(Clone, Debug)]
pub enum PurityModel {
    /// `G G† / Tr[G G†]` with complex Gaussian `G`.
    HilbertSchmidt,
    /// Haar-rotated fixed spectrum.
    FixedSpectrum(Spectrum),
    /// Haar-random pure state.
    Pure,
}

/// One Monte Carlo run configuration.
#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub dim: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub purity_model: PurityModel,
}

impl SampleConfig {
    pub fn new(dim: usize, n_samples: usize, seed: u64, purity_model: PurityModel) -> Result<Self> {
        if dim < 2 {
            return Err(ErgoError::WrongDimension(format!("dimension {dim} must be at least 2")));
        }
        if n_samples == 0 {
            return Err(ErgoError::InvalidCoefficients("need at least one sample".into()));
        }
        Ok(Self { dim, n_samples, seed, purity_model })
    }
}

/// Mean and unbiased variance of a sample, with the jackknife standard
/// error of the variance estimate.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub mean: f64,
    pub variance: f64,
    pub std_error_of_variance: f64,
    pub n: usize,
}

/// A Monte Carlo work-variance run with the analytic prediction attached.
#[derive(Clone, Copy, Debug)]
pub struct WorkVarianceRun {
    pub estimate: McEstimate,
    /// `σ²_ρ σ²_H / (d² − 1)`.
    pub analytic_variance: f64,
    pub observed_min: f64,
    pub observed_max: f64,
}

/// Independent RNG stream for one sample index of a seeded run.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Gaussian (Ginibre) matrix with unit-variance entries.
pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let data: Vec<C64> = (0..dim * dim).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::from_data(dim, data).expect("square data")
}

/// Haar-distributed unitary.
///
/// A Ginibre matrix is orthonormalized column by column and each column is
/// multiplied by the phase of its `R` diagonal entry, fixing the `R`
/// diagonal positive. That convention makes the factorization unique and
/// the resulting `Q` exactly Haar, not merely orthonormal.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<C64>> =
        (0..dim).map(|j| (0..dim).map(|i| g.get(i, j)).collect()).collect();
    for j in 0..dim {
        // Two orthogonalization passes keep the columns orthonormal to
        // machine precision even for nearly dependent draws.
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..dim {
                    let sub = proj * cols[k][i];
                    cols[j][i] -= sub;
                }
            }
        }
        // Dividing by the positive column norm realizes the QR convention
        // with a positive R diagonal. That convention makes the
        // factorization unique, which is exactly the diagonal phase
        // correction that turns "orthonormal" into Haar: with an arbitrary
        // R-diagonal phase, Q would carry a bias.
        let r_jj: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= r_jj;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Haar-random state vector (uniform on the unit sphere).
pub fn haar_state_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let mut psi: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in psi.iter_mut() {
        *z /= norm;
    }
    psi
}

/// Random density matrix under the given model.
pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    model: &PurityModel,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(ErgoError::WrongDimension(format!("dimension {dim} must be at least 2")));
    }
    match model {
        PurityModel::Pure => {
            let psi = haar_state_vector(dim, rng);
            DensityMatrix::from_pure(&psi, vec![dim])
        }
        PurityModel::HilbertSchmidt => {
            let g = ginibre(dim, rng);
            let gram = g.matmul(&g.dagger()).hermitized();
            let trace = gram.trace().re;
            let matrix = gram.scale_re(1.0 / trace);
            Ok(DensityMatrix::from_valid_parts(matrix, vec![dim], None))
        }
        PurityModel::FixedSpectrum(spec) => {
            if spec.len() != dim {
                return Err(ErgoError::InvalidSpectrum(format!(
                    "spectrum length {} does not match dimension {dim}",
                    spec.len()
                )));
            }
            if !spec.is_probability(TRACE_TOL) || spec.min() < 0.0 {
                return Err(ErgoError::InvalidSpectrum(
                    "fixed spectrum must be a nonnegative probability vector".into(),
                ));
            }
            let u = haar_unitary(dim, rng);
            let matrix = u
                .matmul(&ComplexMatrix::from_diag(spec.values()))
                .matmul(&u.dagger())
                .hermitized();
            Ok(DensityMatrix::from_valid_parts(matrix, vec![dim], Some(spec.clone())))
        }
    }
}

/// Sum with a fixed pairwise tree, independent of thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        n if n <= 32 => xs.iter().sum(),
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Mean/variance/jackknife summary of raw samples.
///
/// The jackknife standard error of the variance is exact (leave-one-out
/// from sufficient statistics) and needs at least three samples; below
/// that it is reported as infinite. A constant sample has zero standard
/// error.
pub fn summarize(samples: &[f64]) -> McEstimate {
    let n = samples.len();
    if n == 0 {
        return McEstimate { mean: 0.0, variance: 0.0, std_error_of_variance: f64::INFINITY, n };
    }
    let nf = n as f64;
    let mean = pairwise_sum(samples) / nf;
    if n == 1 {
        return McEstimate { mean, variance: 0.0, std_error_of_variance: f64::INFINITY, n };
    }
    let centered: Vec<f64> = samples.iter().map(|&x| x - mean).collect();
    let squares: Vec<f64> = centered.iter().map(|&c| c * c).collect();
    let ss = pairwise_sum(&squares);
    let variance = (ss / (nf - 1.0)).max(0.0);
    if n == 2 {
        return McEstimate { mean, variance, std_error_of_variance: f64::INFINITY, n };
    }

    // Leave-one-out variances from the centered sufficient statistics:
    // dropping sample i shifts the mean by c_i/(n−1) and removes c_i².
    let loo: Vec<f64> = centered
        .iter()
        .map(|&c| {
            let ss_i = ss - c * c;
            let mean_shift = c / (nf - 1.0);
            ((ss_i - (nf - 1.0) * mean_shift * mean_shift) / (nf - 2.0)).max(0.0)
        })
        .collect();
    let loo_mean = pairwise_sum(&loo) / nf;
    let devs: Vec<f64> = loo.iter().map(|&v| (v - loo_mean) * (v - loo_mean)).collect();
    let se = ((nf - 1.0) / nf * pairwise_sum(&devs)).sqrt();
    McEstimate { mean, variance, std_error_of_variance: se, n }
}

/// Samples `W_U` over Haar unitaries and compares the sample variance with
/// the analytic `σ²_ρ σ²_H / (d² − 1)`.
pub fn mc_work_variance(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    cfg: &SampleConfig,
) -> Result<WorkVarianceRun> {
    if rho.dim() != h.dim() || rho.dim() != cfg.dim {
        return Err(ErgoError::DimensionMismatch(format!(
            "state dimension {}, Hamiltonian dimension {}, configured dimension {}",
            rho.dim(),
            h.dim(),
            cfg.dim
        )));
    }
    let samples = sample_work_values(rho, h, cfg.seed, cfg.n_samples);
    let estimate = summarize(&samples);
    let analytic = analytic_work_variance(rho, h);
    let observed_min = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let observed_max = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(WorkVarianceRun { estimate, analytic_variance: analytic, observed_min, observed_max })
}

/// `σ²_ρ σ²_H / (d² − 1)`.
pub fn analytic_work_variance(rho: &DensityMatrix, h: &Hamiltonian) -> f64 {
    let d = rho.dim() as f64;
    crate::ergotropics::state_variance(rho) * crate::ergotropics::hamiltonian_variance(h)
        / (d * d - 1.0)
}

/// Raw `W_U` samples in index order (parallel generation, deterministic
/// output).
pub fn sample_work_values(
    rho: &DensityMatrix,
    h: &Hamiltonian,
    seed: u64,
    n_samples: usize,
) -> Vec<f64> {
    let dim = rho.dim();
    // Force the caches shared across threads to materialize first.
    let _ = h.matrix();
    (0..n_samples as u64)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream_rng(seed, index);
            let u = haar_unitary(dim, &mut rng);
            crate::ergotropics::work_extracted_unchecked(rho, h, &u)
        })
        .collect()
}
