//! Named state families used as worked examples and CLI constructors.

use crate::error::{ErgoError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;

/// Two-level state with excited population `q`, coherence `c`, and phase
/// `theta`:
///
/// ```text
///   [ 1−q       c·e^{iθ} ]
///   [ c·e^{−iθ}        q ]
/// ```
///
/// Requires `0 ≤ q ≤ 1` and `0 ≤ c ≤ √(q(1−q))` (the purity bound).
pub fn qubit_state(q: f64, c: f64, theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(ErgoError::InvalidBlochParameters(format!(
            "population q = {q} outside [0, 1]"
        )));
    }
    let c_max = (q * (1.0 - q)).sqrt();
    if c < 0.0 || c > c_max + 1e-12 {
        return Err(ErgoError::InvalidBlochParameters(format!(
            "coherence c = {c} outside [0, {c_max}] for q = {q}"
        )));
    }
    let off = C64::from_polar(c, theta);
    let matrix = ComplexMatrix::from_data(
        2,
        vec![C64::new(1.0 - q, 0.0), off, off.conj(), C64::new(q, 0.0)],
    )?;
    let radius = ((2.0 * q - 1.0).powi(2) + 4.0 * c * c).sqrt();
    let spectrum = Spectrum::from_sorted(vec![(1.0 - radius) / 2.0, (1.0 + radius) / 2.0])?;
    Ok(DensityMatrix::from_valid_parts(matrix, vec![2], Some(spectrum)))
}

/// Qubit eigenvalue pair `(λ₋, λ₊)` for the state above.
pub fn qubit_eigenvalues(q: f64, c: f64) -> (f64, f64) {
    let radius = ((2.0 * q - 1.0).powi(2) + 4.0 * c * c).sqrt();
    ((1.0 - radius) / 2.0, (1.0 + radius) / 2.0)
}

/// `cos θ |00⟩ + sin θ |11⟩` on two qubits, parametrized by the angle.
pub fn two_qubit_schmidt_angle(theta: f64) -> DensityMatrix {
    let mut psi = vec![C64::new(0.0, 0.0); 4];
    psi[0] = C64::new(theta.cos(), 0.0);
    psi[3] = C64::new(theta.sin(), 0.0);
    DensityMatrix::from_pure(&psi, vec![2, 2]).unwrap()
}

/// `√λ |00⟩ + √(1−λ) |11⟩` for `λ ∈ [0, 1]`.
pub fn two_qubit_schmidt(lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(ErgoError::InvalidCoefficients(format!(
            "Schmidt weight {lambda} outside [0, 1]"
        )));
    }
    let mut psi = vec![C64::new(0.0, 0.0); 4];
    psi[0] = C64::new(lambda.sqrt(), 0.0);
    psi[3] = C64::new((1.0 - lambda).sqrt(), 0.0);
    DensityMatrix::from_pure(&psi, vec![2, 2])
}

/// The Bell state `(|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> DensityMatrix {
    two_qubit_schmidt(0.5).unwrap()
}

/// Generalized three-qubit GHZ state `cos θ |000⟩ + sin θ |111⟩`.
pub fn ghz_state(theta: f64) -> DensityMatrix {
    let mut psi = vec![C64::new(0.0, 0.0); 8];
    psi[0] = C64::new(theta.cos(), 0.0);
    psi[7] = C64::new(theta.sin(), 0.0);
    DensityMatrix::from_pure(&psi, vec![2, 2, 2]).unwrap()
}

/// The three-qubit W state `(|100⟩ + |010⟩ + |001⟩)/√3`.
pub fn w_state() -> DensityMatrix {
    let amp = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut psi = vec![C64::new(0.0, 0.0); 8];
    psi[1] = amp; // |001⟩
    psi[2] = amp; // |010⟩
    psi[4] = amp; // |100⟩
    DensityMatrix::from_pure(&psi, vec![2, 2, 2]).unwrap()
}

/// Single-qudit uniform-superposition state mixed with white noise:
/// `(1−v)/d · I + v |φ⟩⟨φ|` with `|φ⟩ = Σ_i |i⟩ / √d`.
pub fn werner_qudit(d: usize, v: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(ErgoError::WrongDimension(format!("dimension {d} must be at least 2")));
    }
    if !(0.0..=1.0).contains(&v) {
        return Err(ErgoError::InvalidCoefficients(format!("visibility {v} outside [0, 1]")));
    }
    let df = d as f64;
    let matrix = ComplexMatrix::from_fn(d, |i, j| {
        let noise = if i == j { (1.0 - v) / df } else { 0.0 };
        C64::new(noise + v / df, 0.0)
    });
    let mut spec = vec![(1.0 - v) / df; d];
    spec[d - 1] = (1.0 + (df - 1.0) * v) / df;
    Ok(DensityMatrix::from_valid_parts(matrix, vec![d], Some(Spectrum::from_unsorted(spec))))
}

/// Two-qubit noisy Schmidt state
/// `v |ψ⟩⟨ψ| + (1−v)/4 · I` with `|ψ⟩ = cos θ |00⟩ + sin θ |11⟩`.
pub fn werner_two_qubit(v: f64, theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(ErgoError::InvalidCoefficients(format!("visibility {v} outside [0, 1]")));
    }
    let pure = two_qubit_schmidt_angle(theta);
    let noise = ComplexMatrix::identity(4).scale_re((1.0 - v) / 4.0);
    let matrix = &pure.matrix().scale_re(v) + &noise;
    let spec = Spectrum::from_unsorted(vec![
        (1.0 + 3.0 * v) / 4.0,
        (1.0 - v) / 4.0,
        (1.0 - v) / 4.0,
        (1.0 - v) / 4.0,
    ]);
    Ok(DensityMatrix::from_valid_parts(matrix, vec![2, 2], Some(spec)))
}

/// Two-qubit isotropic-type mixture
/// `[(1−v) I₄ + (4v−1) |ψ_λ⟩⟨ψ_λ|] / 3` with `|ψ_λ⟩ = √λ|00⟩ + √(1−λ)|11⟩`.
pub fn isotropic_two_qubit(v: f64, lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&v) {
        return Err(ErgoError::InvalidCoefficients(format!("visibility {v} outside [0, 1]")));
    }
    let pure = two_qubit_schmidt(lambda)?;
    let matrix = &ComplexMatrix::identity(4).scale_re((1.0 - v) / 3.0)
        + &pure.matrix().scale_re((4.0 * v - 1.0) / 3.0);
    let spec = Spectrum::from_unsorted(vec![v, (1.0 - v) / 3.0, (1.0 - v) / 3.0, (1.0 - v) / 3.0]);
    Ok(DensityMatrix::from_valid_parts(matrix, vec![2, 2], Some(spec)))
}

/// Three-qubit pure state in the five-coefficient generalized Schmidt form
/// `λ₀|000⟩ + λ₁e^{iθ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩` with
/// `λ_i ≥ 0`, `Σ λ_i² = 1`, `0 ≤ θ ≤ π`.
pub fn acin_state(l: &[f64; 5], theta: f64) -> Result<DensityMatrix> {
    validate_acin(l, theta)?;
    let mut psi = vec![C64::new(0.0, 0.0); 8];
    psi[0] = C64::new(l[0], 0.0); // |000⟩
    psi[4] = C64::from_polar(l[1], theta); // |100⟩
    psi[5] = C64::new(l[2], 0.0); // |101⟩
    psi[6] = C64::new(l[3], 0.0); // |110⟩
    psi[7] = C64::new(l[4], 0.0); // |111⟩
    DensityMatrix::from_pure(&psi, vec![2, 2, 2])
}

pub(crate) fn validate_acin(l: &[f64; 5], theta: f64) -> Result<()> {
    if l.iter().any(|&x| x < 0.0) {
        return Err(ErgoError::InvalidCoefficients(
            "generalized Schmidt coefficients must be nonnegative".into(),
        ));
    }
    let norm: f64 = l.iter().map(|&x| x * x).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(ErgoError::InvalidCoefficients(format!(
            "squared coefficients sum to {norm}, expected 1"
        )));
    }
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&theta) {
        return Err(ErgoError::InvalidCoefficients(format!("phase {theta} outside [0, π]")));
    }
    Ok(())
}
