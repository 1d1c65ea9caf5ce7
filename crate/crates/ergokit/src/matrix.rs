//! Dense complex square matrices.
//!
//! This is deliberately small: the systems handled here are products of a
//! few qubits or qudits (d ≤ ~64), where a row-major `Vec<Complex64>` with
//! straightforward O(d³) products beats any sparse or blocked scheme.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{ErgoError, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense `dim × dim` complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format!("{:+.4}{:+.4}i", self.get(i, j).re, self.get(i, j).im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build from a row-major entry vector. Errors if the length is not `dim²`.
    pub fn from_data(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(ErgoError::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, C64::new(x, 0.0));
        }
        m
    }

    /// Projector `|ψ⟩⟨ψ|` from an amplitude vector.
    pub fn outer(psi: &[C64]) -> Self {
        let dim = psi.len();
        Self::from_fn(dim, |i, j| psi[i] * psi[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj_entrywise(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `(M + M†)/2`; projects solver noise off a nominally Hermitian matrix.
    pub fn hermitized(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `|self − other|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dimensions");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M − M†| ≤ tol`, entrywise.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in i..self.dim {
                if (self.get(i, j) - self.get(j, i).conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// `max |M M† − I| ≤ tol`, entrywise.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let product = self * &self.dagger();
        product.max_abs_diff(&Self::identity(self.dim)) <= tol
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul on mismatched dimensions");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `U self U†`.
    pub fn conjugate_with(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.dagger())
    }

    /// `Re Tr(self · other)`; for Hermitian pairs this is the
    /// Hilbert-Schmidt pairing and costs O(d²).
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product_re on mismatched dimensions");
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.get(i, j) * other.get(j, i)).re;
            }
        }
        acc
    }

    /// Kronecker product; the result has dimension `dim(a)·dim(b)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut out = Self::zeros(d);
        for ia in 0..da {
            for ja in 0..da {
                let a = self.get(ia, ja);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out.set(ia * db + ib, ja * db + jb, a * other.get(ib, jb));
                    }
                }
            }
        }
        out
    }

    /// Trace out every subsystem not listed in `keep`.
    ///
    /// `dims` lists the subsystem dimensions whose product must equal the
    /// matrix dimension; `keep` holds subsystem indices (any order, no
    /// duplicates). The kept subsystems stay in their original relative
    /// order. Keeping everything returns a copy.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim {
            return Err(ErgoError::DimensionMismatch(format!(
                "subsystem dims {:?} multiply to {total}, matrix dimension is {}",
                dims, self.dim
            )));
        }
        if keep.is_empty() {
            return Err(ErgoError::DimensionMismatch(
                "partial trace must keep at least one subsystem".into(),
            ));
        }
        let mut keep_sorted: Vec<usize> = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        if keep_sorted.len() != keep.len() || *keep_sorted.last().unwrap() >= dims.len() {
            return Err(ErgoError::DimensionMismatch(format!(
                "keep set {:?} is not a valid subset of 0..{}",
                keep,
                dims.len()
            )));
        }
        if keep_sorted.len() == dims.len() {
            return Ok(self.clone());
        }

        let traced: Vec<usize> =
            (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();

        // Row-major strides over the full index space.
        let mut strides = vec![1usize; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }

        // Flat offsets contributed by each composite index of the kept and
        // traced subsystems.
        let offsets = |subsys: &[usize]| -> Vec<usize> {
            let size: usize = subsys.iter().map(|&k| dims[k]).product();
            let mut table = vec![0usize; size];
            for (flat, slot) in table.iter_mut().enumerate() {
                let mut rem = flat;
                let mut offset = 0;
                for &k in subsys.iter().rev() {
                    offset += (rem % dims[k]) * strides[k];
                    rem /= dims[k];
                }
                *slot = offset;
            }
            table
        };
        let keep_offsets = offsets(&keep_sorted);
        let traced_offsets = offsets(&traced);

        let dk = keep_offsets.len();
        let mut out = Self::zeros(dk);
        for (a, &ka) in keep_offsets.iter().enumerate() {
            for (b, &kb) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_offsets {
                    acc += self.get_flat(ka + t, kb + t);
                }
                out.set(a, b, acc);
            }
        }
        Ok(out)
    }

    #[inline]
    fn get_flat(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add on mismatched dimensions");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub on mismatched dimensions");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )
    .unwrap()
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    )
    .unwrap()
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_data(
        2,
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
    )
    .unwrap()
}
