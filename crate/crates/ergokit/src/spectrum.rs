//! Ascending eigenvalue vectors and majorization.

use serde::Serialize;

use crate::error::{ErgoError, Result};
use crate::tolerances::{MAJORIZATION_TOL, PSD_CLAMP_FLOOR, TRACE_TOL};

/// Real eigenvalues sorted ascending.
///
/// Holds either state eigenvalues (probabilities) or Hamiltonian
/// eigenenergies; the ordering invariant is the same for both.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the input ascending.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
        Self(values)
    }

    /// Accepts an already ascending vector, rejecting out-of-order input.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(ErgoError::InvalidSpectrum("values are not sorted ascending".into()));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0[0]
    }

    pub fn max(&self) -> f64 {
        *self.0.last().expect("empty spectrum")
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// True when the entries are a probability vector: nonnegative within
    /// `tol` and summing to one within `tol`.
    pub fn is_probability(&self, tol: f64) -> bool {
        self.0.iter().all(|&x| x >= -tol) && (self.sum() - 1.0).abs() <= tol
    }

    /// Applies the state-spectrum cleanup rule: eigenvalues in
    /// `[PSD_CLAMP_FLOOR, 0)` are solver noise and become zero, the result
    /// is renormalized to unit sum. Anything below the floor is an error.
    pub fn clamped_probability(&self) -> Result<Spectrum> {
        if let Some(&bad) = self.0.iter().find(|&&x| x < PSD_CLAMP_FLOOR) {
            return Err(ErgoError::NotPositive(format!(
                "eigenvalue {bad:e} is below the clamp floor {PSD_CLAMP_FLOOR:e}"
            )));
        }
        let clamped: Vec<f64> = self.0.iter().map(|&x| x.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(ErgoError::TraceNotOne(format!(
                "spectrum sums to {sum}, expected 1 within {TRACE_TOL:e}"
            )));
        }
        Ok(Spectrum(clamped.into_iter().map(|x| x / sum).collect()))
    }
}

/// True when `p ≺ q`, i.e. `q` majorizes `p`: with both spectra sorted
/// descending, every partial sum of `q` dominates the corresponding partial
/// sum of `p`. Comparisons carry a `MAJORIZATION_TOL` slack.
pub fn majorizes(p: &Spectrum, q: &Spectrum) -> Result<bool> {
    if p.len() != q.len() {
        return Err(ErgoError::LengthMismatch(format!(
            "spectra have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    // Ascending storage: descending partial sums are suffix sums.
    let mut acc_p = 0.0;
    let mut acc_q = 0.0;
    for (x, y) in p.values().iter().rev().zip(q.values().iter().rev()) {
        acc_p += x;
        acc_q += y;
        if acc_q < acc_p - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}
