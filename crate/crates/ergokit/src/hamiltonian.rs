//! Energy observables: explicit Hermitian matrices, ladders of equally
//! spaced levels, and sums of local terms on composite systems.

use std::sync::OnceLock;

use crate::eigen::eig_hermitian;
use crate::error::{ErgoError, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;
use crate::tolerances::HERMITIAN_TOL;

#[derive(Clone, Debug)]
enum Form {
    /// Arbitrary Hermitian matrix on a single system.
    Explicit(ComplexMatrix),
    /// `Σ_j j·E |j⟩⟨j|`: levels `0, E, 2E, …, (d−1)E`.
    Equispaced { levels: usize, quantum: f64 },
    /// `Σ_i I ⊗ … ⊗ H_i ⊗ … ⊗ I` over the listed subsystem dimensions.
    /// Subsystems without a term contribute zero energy.
    CompositeSum { locals: Vec<(Hamiltonian, usize)>, dims: Vec<usize> },
}

/// An energy observable. Immutable; the expanded matrix and the ascending
/// eigendecomposition are cached on first use.
#[derive(Debug)]
pub struct Hamiltonian {
    form: Form,
    matrix_cache: OnceLock<ComplexMatrix>,
    eig_cache: OnceLock<(Spectrum, ComplexMatrix)>,
}

impl Clone for Hamiltonian {
    fn clone(&self) -> Self {
        // Caches are cheap to rebuild; cloning shares nothing.
        Self { form: self.form.clone(), matrix_cache: OnceLock::new(), eig_cache: OnceLock::new() }
    }
}

impl Hamiltonian {
    /// Explicit Hermitian matrix.
    pub fn explicit(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_hermitian(HERMITIAN_TOL) {
            return Err(ErgoError::NotHermitian(
                "Hamiltonian matrix deviates from M = M†".into(),
            ));
        }
        Ok(Self::from_form(Form::Explicit(matrix)))
    }

    /// Equally spaced ladder with `levels ≥ 1` levels and quantum `e ≥ 0`.
    pub fn equispaced(levels: usize, e: f64) -> Result<Self> {
        if levels == 0 {
            return Err(ErgoError::WrongDimension("a ladder needs at least one level".into()));
        }
        if e < 0.0 || !e.is_finite() {
            return Err(ErgoError::NotEquispaced(format!(
                "level spacing {e} must be finite and nonnegative"
            )));
        }
        Ok(Self::from_form(Form::Equispaced { levels, quantum: e }))
    }

    /// Sum of one local term per subsystem, in order.
    pub fn composite(locals: Vec<Hamiltonian>) -> Result<Self> {
        if locals.is_empty() {
            return Err(ErgoError::StructureMismatch("composite needs at least one term".into()));
        }
        let dims: Vec<usize> = locals.iter().map(|h| h.dim()).collect();
        let locals = locals.into_iter().enumerate().map(|(i, h)| (h, i)).collect();
        Self::composite_sparse(locals, dims)
    }

    /// Sum of local terms on selected subsystems of the `dims` structure.
    pub fn composite_sparse(locals: Vec<(Hamiltonian, usize)>, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(ErgoError::StructureMismatch("empty subsystem structure".into()));
        }
        for (h, idx) in &locals {
            match dims.get(*idx) {
                Some(&d) if d == h.dim() => {}
                Some(&d) => {
                    return Err(ErgoError::StructureMismatch(format!(
                        "local term on subsystem {idx} has dimension {}, structure says {d}",
                        h.dim()
                    )))
                }
                None => {
                    return Err(ErgoError::StructureMismatch(format!(
                        "subsystem index {idx} outside structure {:?}",
                        dims
                    )))
                }
            }
        }
        Ok(Self::from_form(Form::CompositeSum { locals, dims }))
    }

    fn from_form(form: Form) -> Self {
        Self { form, matrix_cache: OnceLock::new(), eig_cache: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        match &self.form {
            Form::Explicit(m) => m.dim(),
            Form::Equispaced { levels, .. } => *levels,
            Form::CompositeSum { dims, .. } => dims.iter().product(),
        }
    }

    /// Subsystem dimension list; a single `[d]` for non-composite forms.
    pub fn dims(&self) -> Vec<usize> {
        match &self.form {
            Form::CompositeSum { dims, .. } => dims.clone(),
            _ => vec![self.dim()],
        }
    }

    /// `(levels, quantum)` when this is an equally spaced ladder.
    pub fn as_equispaced(&self) -> Option<(usize, f64)> {
        match &self.form {
            Form::Equispaced { levels, quantum } => Some((*levels, *quantum)),
            _ => None,
        }
    }

    /// Local term acting on subsystem `i` of a composite sum; a zero ladder
    /// when the subsystem has no term.
    pub fn local_term(&self, i: usize) -> Result<Hamiltonian> {
        match &self.form {
            Form::CompositeSum { locals, dims } => {
                let d = *dims.get(i).ok_or_else(|| {
                    ErgoError::StructureMismatch(format!("no subsystem {i} in {:?}", dims))
                })?;
                for (h, idx) in locals {
                    if *idx == i {
                        return Ok(h.clone());
                    }
                }
                Hamiltonian::equispaced(d, 0.0)
            }
            _ => Err(ErgoError::StructureMismatch(
                "local terms exist only for composite Hamiltonians".into(),
            )),
        }
    }

    /// Sum of the local terms inside one block of subsystems, as a composite
    /// Hamiltonian over the block (subsystem order preserved).
    pub fn block(&self, subsystems: &[usize]) -> Result<Hamiltonian> {
        let mut sorted = subsystems.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != subsystems.len() {
            return Err(ErgoError::StructureMismatch(format!(
                "block {:?} repeats subsystems",
                subsystems
            )));
        }
        match &self.form {
            Form::CompositeSum { dims, .. } => {
                let block_dims: Vec<usize> = sorted
                    .iter()
                    .map(|&k| {
                        dims.get(k).copied().ok_or_else(|| {
                            ErgoError::StructureMismatch(format!(
                                "subsystem {k} outside structure {:?}",
                                dims
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                let mut locals = Vec::new();
                for (new_idx, &old_idx) in sorted.iter().enumerate() {
                    locals.push((self.local_term(old_idx)?, new_idx));
                }
                Hamiltonian::composite_sparse(locals, block_dims)
            }
            _ if sorted == [0] => Ok(self.clone()),
            _ => Err(ErgoError::StructureMismatch(
                "blocks exist only for composite Hamiltonians".into(),
            )),
        }
    }

    /// Expanded matrix form (cached).
    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix_cache.get_or_init(|| match &self.form {
            Form::Explicit(m) => m.clone(),
            Form::Equispaced { levels, quantum } => {
                ComplexMatrix::from_diag(&ladder(*levels, *quantum))
            }
            Form::CompositeSum { locals, dims } => {
                let total: usize = dims.iter().product();
                let mut acc = ComplexMatrix::zeros(total);
                for (h, idx) in locals {
                    let mut term = ComplexMatrix::identity(1);
                    for (k, &d) in dims.iter().enumerate() {
                        let factor =
                            if k == *idx { h.matrix().clone() } else { ComplexMatrix::identity(d) };
                        term = term.tensor(&factor);
                    }
                    acc = &acc + &term;
                }
                acc
            }
        })
    }

    /// Ascending eigenenergies.
    pub fn eigenenergies(&self) -> Result<Spectrum> {
        Ok(self.eigenbasis()?.0.clone())
    }

    /// Ascending eigenenergies with the matching eigenvector columns.
    ///
    /// For ladders the basis is the computational one. For composite sums
    /// the basis is the product of local eigenbases, ordered by total
    /// energy with ties broken by the product-basis index; the
    /// eigenenergies are exact sums of local eigenenergies.
    pub fn eigenbasis(&self) -> Result<&(Spectrum, ComplexMatrix)> {
        if let Some(cached) = self.eig_cache.get() {
            return Ok(cached);
        }
        let computed = match &self.form {
            Form::Explicit(m) => eig_hermitian(m, HERMITIAN_TOL)?,
            Form::Equispaced { levels, quantum } => {
                let values = Spectrum::from_sorted(ladder(*levels, *quantum))?;
                (values, ComplexMatrix::identity(*levels))
            }
            Form::CompositeSum { locals: _, dims } => {
                let mut energies = vec![0.0f64];
                let mut basis = ComplexMatrix::identity(1);
                for (k, _) in dims.iter().enumerate() {
                    let local = self.local_term(k)?;
                    let (lvals, lvecs) = local.eigenbasis()?.clone();
                    let mut next = Vec::with_capacity(energies.len() * lvals.len());
                    for &e in &energies {
                        for &le in lvals.values() {
                            next.push(e + le);
                        }
                    }
                    energies = next;
                    basis = basis.tensor(&lvecs);
                }
                let total = energies.len();
                let mut order: Vec<usize> = (0..total).collect();
                order.sort_by(|&i, &j| {
                    energies[i].partial_cmp(&energies[j]).expect("non-finite energy").then(i.cmp(&j))
                });
                let sorted = Spectrum::from_unsorted(energies.clone());
                let mut vectors = ComplexMatrix::zeros(total);
                for (col, &src) in order.iter().enumerate() {
                    for row in 0..total {
                        vectors.set(row, col, basis.get(row, src));
                    }
                }
                (sorted, vectors)
            }
        };
        let _ = self.eig_cache.set(computed);
        Ok(self.eig_cache.get().unwrap())
    }

    /// `Tr[ρ H]`.
    pub fn mean_energy(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dim() != self.dim() {
            return Err(ErgoError::DimensionMismatch(format!(
                "state dimension {} does not match Hamiltonian dimension {}",
                rho.dim(),
                self.dim()
            )));
        }
        match &self.form {
            Form::Equispaced { levels, quantum } => Ok((0..*levels)
                .map(|j| j as f64 * quantum * rho.matrix().get(j, j).re)
                .sum()),
            _ => Ok(rho.matrix().trace_product_re(self.matrix())),
        }
    }

    /// `Tr H` and `Tr H²` without an eigensolve.
    pub fn trace_and_square_trace(&self) -> (f64, f64) {
        match &self.form {
            Form::Equispaced { levels, quantum } => {
                let t: f64 = (0..*levels).map(|j| j as f64 * quantum).sum();
                let t2: f64 = (0..*levels).map(|j| (j as f64 * quantum).powi(2)).sum();
                (t, t2)
            }
            _ => {
                let m = self.matrix();
                let t = m.trace().re;
                // For Hermitian H, Tr H² = Σ |H_ij|².
                let t2 = m.data().iter().map(|z| z.norm_sqr()).sum();
                (t, t2)
            }
        }
    }

    /// `−H` as an explicit Hamiltonian.
    pub fn negated(&self) -> Hamiltonian {
        let m = self.matrix().scale(C64::new(-1.0, 0.0));
        Hamiltonian::from_form(Form::Explicit(m))
    }
}

fn ladder(levels: usize, quantum: f64) -> Vec<f64> {
    (0..levels).map(|j| j as f64 * quantum).collect()
}
