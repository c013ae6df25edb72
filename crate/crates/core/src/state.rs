//! Dense multi-qubit operators.
//!
//! Qubit 0 is the leftmost (most significant) tensor factor: in a basis
//! index `b` of a `q`-qubit register, qubit `i` is bit `q - 1 - i`.

use alloc::{format, vec, vec::Vec};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{error::bail, Config, Error, Result};

pub type C64 = num_complex::Complex64;
pub type CMatrix = DMatrix<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Behaviour shared by the three operator kinds.
pub trait QubitOperator: Sized + sealed::Sealed {
    fn qubits(&self) -> usize;
    fn matrix(&self) -> &CMatrix;

    /// Validates `matrix` against the kind's invariants.
    fn from_matrix(matrix: CMatrix, cfg: &Config) -> Result<Self>;

    fn dim(&self) -> usize {
        1 << self.qubits()
    }
}

mod sealed {
    pub trait Sealed {
        fn wrap(qubits: usize, matrix: super::CMatrix) -> Self;
    }
}

/// Trace-one positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubits: usize,
    matrix: CMatrix,
}

/// Unitary operator on a register of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    qubits: usize,
    matrix: CMatrix,
}

/// Hermitian operator with no trace or positivity requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    qubits: usize,
    matrix: CMatrix,
}

macro_rules! impl_operator {
    ($ty:ident, $validate:path) => {
        impl sealed::Sealed for $ty {
            fn wrap(qubits: usize, matrix: CMatrix) -> Self {
                Self { qubits, matrix }
            }
        }

        impl QubitOperator for $ty {
            fn qubits(&self) -> usize {
                self.qubits
            }

            fn matrix(&self) -> &CMatrix {
                &self.matrix
            }

            fn from_matrix(matrix: CMatrix, cfg: &Config) -> Result<Self> {
                let qubits = register_size(&matrix, cfg)?;
                $validate(&matrix, cfg)?;
                Ok(Self { qubits, matrix })
            }
        }

        impl $ty {
            pub fn new(matrix: CMatrix, cfg: &Config) -> Result<Self> {
                <Self as QubitOperator>::from_matrix(matrix, cfg)
            }

            pub fn qubits(&self) -> usize {
                self.qubits
            }

            pub fn matrix(&self) -> &CMatrix {
                &self.matrix
            }

            pub fn into_matrix(self) -> CMatrix {
                self.matrix
            }
        }
    };
}

impl_operator!(DensityOperator, validate_density);
impl_operator!(UnitaryOperator, validate_unitary);
impl_operator!(HermitianOperator, validate_hermitian);

/// Qubit count of a square matrix whose side is a power of two.
fn register_size(matrix: &CMatrix, cfg: &Config) -> Result<usize> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        bail!(Dimension, "matrix is not square: {rows}x{cols}");
    }
    if rows == 0 || !rows.is_power_of_two() {
        bail!(Dimension, "side {rows} is not a positive power of two");
    }
    let qubits = rows.trailing_zeros() as usize;
    if qubits == 0 {
        bail!(Dimension, "operators act on at least one qubit");
    }
    cfg.check_qubits(qubits)?;
    Ok(qubits)
}

/// Max-abs deviation of `m` from its conjugate transpose.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-abs deviation of `m` from the identity.
pub fn identity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((m[(i, j)] - target).norm());
        }
    }
    worst
}

/// Max-abs entrywise difference.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn validate_hermitian(m: &CMatrix, cfg: &Config) -> Result<()> {
    let defect = hermiticity_defect(m);
    if !(defect <= cfg.validation_tol) {
        bail!(Validation, "not Hermitian (max deviation {defect:e})");
    }
    Ok(())
}

fn validate_unitary(m: &CMatrix, cfg: &Config) -> Result<()> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        bail!(Validation, "matrix has non-finite entries");
    }
    let defect = identity_defect(&(m * m.adjoint()));
    if !(defect <= cfg.validation_tol) {
        bail!(Validation, "not unitary (|UU* - I| = {defect:e})");
    }
    Ok(())
}

fn validate_density(m: &CMatrix, cfg: &Config) -> Result<()> {
    validate_hermitian(m, cfg)?;
    let trace = m.trace();
    if !((trace.re - 1.0).abs() <= cfg.validation_tol) {
        bail!(Validation, "trace is {} rather than 1", trace.re);
    }
    let min = smallest_eigenvalue(m);
    if !(min >= -cfg.validation_tol) {
        bail!(Validation, "not positive semidefinite (min eigenvalue {min:e})");
    }
    Ok(())
}

pub(crate) fn smallest_eigenvalue(m: &CMatrix) -> f64 {
    SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `(m + m*) / 2`.
pub(crate) fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

impl DensityOperator {
    /// Diagonal state with the given probabilities.
    pub fn from_diagonal(diag: &[f64], cfg: &Config) -> Result<Self> {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&p| C64::new(p, 0.0)),
        ));
        Self::new(m, cfg)
    }

    /// Computational basis projector `|index><index|`.
    pub fn basis_state(qubits: usize, index: usize, cfg: &Config) -> Result<Self> {
        if qubits == 0 {
            bail!(Domain, "a state needs at least one qubit");
        }
        cfg.check_qubits(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = ONE;
        Ok(Self { qubits, matrix: m })
    }

    /// `|psi><psi|` for a unit state vector.
    pub fn pure(amplitudes: &[C64], cfg: &Config) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if !((norm - 1.0).abs() <= cfg.validation_tol) {
            bail!(Validation, "state vector has norm {norm}");
        }
        let m = &v * v.adjoint();
        let qubits = register_size(&m, cfg)?;
        Ok(Self { qubits, matrix: m })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

impl UnitaryOperator {
    pub fn identity(qubits: usize, cfg: &Config) -> Result<Self> {
        if qubits == 0 {
            bail!(Domain, "a unitary needs at least one qubit");
        }
        cfg.check_qubits(qubits)?;
        let dim = 1usize << qubits;
        Ok(Self { qubits, matrix: CMatrix::identity(dim, dim) })
    }
}

impl HermitianOperator {
    /// Hermitian operator with a real diagonal.
    pub fn from_diagonal(diag: &[f64], cfg: &Config) -> Result<Self> {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&p| C64::new(p, 0.0)),
        ));
        Self::new(m, cfg)
    }

    pub fn identity(qubits: usize, cfg: &Config) -> Result<Self> {
        if qubits == 0 {
            bail!(Domain, "an operator needs at least one qubit");
        }
        cfg.check_qubits(qubits)?;
        let dim = 1usize << qubits;
        Ok(Self { qubits, matrix: CMatrix::identity(dim, dim) })
    }
}

impl From<DensityOperator> for HermitianOperator {
    fn from(rho: DensityOperator) -> Self {
        Self { qubits: rho.qubits, matrix: rho.matrix }
    }
}

/// Kronecker product with `a` on the high-order qubits.
pub fn tensor_product<T: QubitOperator>(a: &T, b: &T, cfg: &Config) -> Result<T> {
    let qubits = a.qubits() + b.qubits();
    cfg.check_qubits(qubits)?;
    Ok(<T as sealed::Sealed>::wrap(qubits, a.matrix().kronecker(b.matrix())))
}

/// Eigenvalues in non-increasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// The largest eigenvalue.
    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `sum_k lambda_k |k><k|`.
    pub fn reconstruct(&self) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(lambda);
        }
        scaled * v.adjoint()
    }

    /// Applies `f` to the spectrum: `sum_k f(lambda_k) |k><k|`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let mapped = SpectralDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|&l| f(l)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        };
        mapped.reconstruct()
    }
}

/// Exact Hermitian eigendecomposition, sorted non-increasing.
pub fn spectral_decompose<T: QubitOperator>(op: &T, cfg: &Config) -> Result<SpectralDecomposition> {
    decompose_matrix(op.matrix(), cfg)
}

pub(crate) fn decompose_matrix(m: &CMatrix, cfg: &Config) -> Result<SpectralDecomposition> {
    let defect = hermiticity_defect(m);
    if !(defect <= cfg.validation_tol) {
        bail!(Validation, "not Hermitian (max deviation {defect:e})");
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let n = m.nrows();
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// `U rho U*`.
pub fn apply_unitary(rho: &DensityOperator, u: &UnitaryOperator) -> Result<DensityOperator> {
    if rho.qubits != u.qubits {
        bail!(Dimension, "state has {} qubits but unitary has {}", rho.qubits, u.qubits);
    }
    let conjugated = &u.matrix * &rho.matrix * u.matrix.adjoint();
    Ok(DensityOperator { qubits: rho.qubits, matrix: hermitian_part(&conjugated) })
}

/// `(I/2)^{\otimes q}`.
pub fn maximally_mixed(qubits: usize, cfg: &Config) -> Result<DensityOperator> {
    if qubits == 0 {
        bail!(Domain, "a state needs at least one qubit");
    }
    cfg.check_qubits(qubits)?;
    let dim = 1usize << qubits;
    let p = C64::new(1.0 / dim as f64, 0.0);
    Ok(DensityOperator { qubits, matrix: CMatrix::from_diagonal_element(dim, dim, p) })
}

/// Partial trace keeping the listed qubits, in the listed order.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    if keep.is_empty() {
        bail!(Domain, "keeping no qubits leaves a scalar, not a state");
    }
    let q = rho.qubits;
    if keep.len() == q && keep.iter().enumerate().all(|(i, &k)| i == k) {
        return Ok(rho.clone());
    }
    let matrix = reduce(&rho.matrix, q, keep)?;
    Ok(DensityOperator { qubits: keep.len(), matrix: hermitian_part(&matrix) })
}

/// Reorders the qubits of `rho` so that new qubit `i` is old qubit `order[i]`.
pub fn permute_qubits(rho: &DensityOperator, order: &[usize]) -> Result<DensityOperator> {
    if order.len() != rho.qubits {
        bail!(Dimension, "permutation lists {} qubits for a {}-qubit state", order.len(), rho.qubits);
    }
    partial_trace(rho, order)
}

/// Offsets contributed by each assignment of `qubits` into a `total`-qubit
/// index, with `qubits[0]` as the most significant bit of the assignment.
fn scatter_offsets(qubits: &[usize], total: usize) -> Vec<usize> {
    let m = qubits.len();
    (0..1usize << m)
        .map(|local| {
            qubits.iter().enumerate().fold(0usize, |acc, (j, &qb)| {
                let bit = (local >> (m - 1 - j)) & 1;
                acc | (bit << (total - 1 - qb))
            })
        })
        .collect()
}

/// Partial trace on a raw matrix of a `q`-qubit register.
pub(crate) fn reduce(m: &CMatrix, q: usize, keep: &[usize]) -> Result<CMatrix> {
    let mut seen = vec![false; q];
    for &k in keep {
        if k >= q {
            return Err(Error::IndexOutOfRange { index: k, len: q });
        }
        if core::mem::replace(&mut seen[k], true) {
            bail!(Validation, "qubit {k} listed twice");
        }
    }
    let traced: Vec<usize> = (0..q).filter(|&i| !seen[i]).collect();
    let keep_off = scatter_offsets(keep, q);
    let trace_off = scatter_offsets(&traced, q);
    let d = keep_off.len();
    Ok(CMatrix::from_fn(d, d, |r, c| {
        trace_off.iter().map(|&t| m[(keep_off[r] | t, keep_off[c] | t)]).fold(ZERO, |acc, z| acc + z)
    }))
}

pub(crate) fn check_same_register(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension(format!("{what}: expected {expected} qubits, got {got}")));
    }
    Ok(())
}
