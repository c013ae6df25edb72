//! Random instances for property sweeps.
//!
//! States mix a random rank profile: the spectrum is a symmetric Dirichlet
//! draw over a random number of nonzero eigenvalues, rotated by a Haar
//! unitary obtained from the QR decomposition of a complex Gaussian matrix.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::{
    gate::{Gate, SingleQubitGate},
    mbqc::{Povm, SolutionFamily},
    state::{decompose_matrix, hermitian_part, CMatrix, DensityOperator, HermitianOperator, UnitaryOperator, C64},
    thermal::{HamiltonianSpec, Pauli, PauliString, PauliTerm},
    Config, Result,
};

fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary on `qubits` qubits.
pub fn random_unitary<R: Rng + ?Sized>(qubits: usize, rng: &mut R, cfg: &Config) -> Result<UnitaryOperator> {
    cfg.check_qubits(qubits)?;
    let dim = 1usize << qubits;
    let qr = gaussian_matrix(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOperator::new(q, cfg)
}

/// Symmetric Dirichlet(1) draw of `len` weights.
pub fn dirichlet<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Density operator with a uniformly random rank and Dirichlet spectrum.
pub fn random_density<R: Rng + ?Sized>(qubits: usize, rng: &mut R, cfg: &Config) -> Result<DensityOperator> {
    cfg.check_qubits(qubits)?;
    let dim = 1usize << qubits;
    let rank = rng.random_range(1..=dim);
    random_density_with_rank(qubits, rank, rng, cfg)
}

pub fn random_density_with_rank<R: Rng + ?Sized>(
    qubits: usize,
    rank: usize,
    rng: &mut R,
    cfg: &Config,
) -> Result<DensityOperator> {
    let u = random_unitary(qubits, rng, cfg)?;
    let dim = 1usize << qubits;
    let mut spectrum = dirichlet(rank.clamp(1, dim), rng);
    spectrum.resize(dim, 0.0);
    let mut scaled = u.matrix().clone();
    for (k, &l) in spectrum.iter().enumerate() {
        scaled.column_mut(k).scale_mut(l);
    }
    DensityOperator::new(hermitian_part(&(scaled * u.matrix().adjoint())), cfg)
}

/// Pure state drawn from the Haar measure.
pub fn random_pure<R: Rng + ?Sized>(qubits: usize, rng: &mut R, cfg: &Config) -> Result<DensityOperator> {
    random_density_with_rank(qubits, 1, rng, cfg)
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(qubits: usize, rng: &mut R, cfg: &Config) -> Result<HermitianOperator> {
    cfg.check_qubits(qubits)?;
    HermitianOperator::new(hermitian_part(&gaussian_matrix(1 << qubits, rng)), cfg)
}

/// Sum of between 1 and `2 q + 2` random Pauli strings with coefficients in `[-1, 1]`.
pub fn random_hamiltonian<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Result<HamiltonianSpec> {
    const LABELS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let count = rng.random_range(1..=2 * qubits + 2);
    let terms = (0..count)
        .map(|_| PauliTerm {
            coeff: rng.random_range(-1.0..=1.0),
            paulis: PauliString((0..qubits).map(|_| LABELS[rng.random_range(0..4)]).collect()),
        })
        .collect();
    HamiltonianSpec::new(qubits, terms)
}

/// POVM with `outcomes` elements `S^{-1/2} A_j S^{-1/2}`, where each `A_j` is a
/// random positive operator of random rank and `S = sum_j A_j`.
pub fn random_povm<R: Rng + ?Sized>(qubits: usize, outcomes: usize, rng: &mut R, cfg: &Config) -> Result<Povm> {
    if qubits == 0 {
        return Ok(Povm::trivial());
    }
    cfg.check_qubits(qubits)?;
    let dim = 1usize << qubits;
    let mut ranks: Vec<usize> = (0..outcomes.max(1)).map(|_| rng.random_range(1..=dim)).collect();
    // S must be invertible, so the ranks have to cover the space.
    let covered: usize = ranks.iter().sum();
    if covered < dim {
        *ranks.last_mut().expect("at least one outcome") += dim - covered;
    }
    let raw: Vec<CMatrix> = ranks
        .into_iter()
        .map(|rank| {
            let g = gaussian_matrix(dim, rng);
            let thin = g.columns(0, rank).into_owned();
            &thin * thin.adjoint()
        })
        .collect();
    let sum = raw.iter().fold(CMatrix::zeros(dim, dim), |acc, a| acc + a);
    let eig = decompose_matrix(&hermitian_part(&sum), cfg)?;
    let inv_sqrt = eig.map(|l| 1.0 / l.sqrt());
    let elements = raw
        .iter()
        .map(|a| HermitianOperator::new(hermitian_part(&(&inv_sqrt * a * &inv_sqrt)), cfg))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(elements, cfg)
}

/// `size` distinct values from `0..universe` (partial Fisher-Yates), sorted.
pub fn random_subset<R: Rng + ?Sized>(universe: u64, size: usize, rng: &mut R) -> Vec<u64> {
    let size = size.min(universe as usize);
    let mut pool: Vec<u64> = (0..universe).collect();
    for i in 0..size {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(size);
    pool.sort_unstable();
    pool
}

/// `outcomes` random subsets of `{0,1}^bits`, each of size `size`.
pub fn random_solution_family<R: Rng + ?Sized>(
    bits: usize,
    outcomes: usize,
    size: usize,
    rng: &mut R,
) -> Result<SolutionFamily> {
    let sets = (0..outcomes).map(|_| random_subset(1u64 << bits, size, rng)).collect();
    SolutionFamily::new(bits, sets)
}

/// Random gate sequence of `len` gates over the full vocabulary.
pub fn random_gates<R: Rng + ?Sized>(qubits: usize, len: usize, rng: &mut R) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(len);
    for _ in 0..len {
        let single = match rng.random_range(0..8) {
            0 => SingleQubitGate::X,
            1 => SingleQubitGate::Y,
            2 => SingleQubitGate::Z,
            3 => SingleQubitGate::H,
            4 => SingleQubitGate::S,
            5 => SingleQubitGate::T,
            6 => SingleQubitGate::Rz(rng.random_range(-3.2..3.2)),
            _ => SingleQubitGate::Rx(rng.random_range(-3.2..3.2)),
        };
        let target = rng.random_range(0..qubits);
        if qubits > 1 && rng.random_bool(0.4) {
            let mut control = rng.random_range(0..qubits - 1);
            if control >= target {
                control += 1;
            }
            gates.push(Gate::Controlled { gate: single, control, target });
        } else {
            gates.push(Gate::single(single, target));
        }
    }
    gates
}

/// Random probability vector over `len` inputs, sometimes with zero entries.
pub fn random_distribution<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut p = dirichlet(len, rng);
    if len > 1 && rng.random_bool(0.2) {
        let drop = rng.random_range(0..len);
        let mass = core::mem::replace(&mut p[drop], 0.0);
        let keep = (drop + 1) % len;
        p[keep] += mass;
    }
    p
}

/// Shuffled qubit list `0..total`, split into an output region of `n` qubits.
pub fn random_output_region<R: Rng + ?Sized>(total: usize, n: usize, rng: &mut R) -> Vec<usize> {
    let mut all: Vec<usize> = (0..total).collect();
    for i in (1..all.len()).rev() {
        let j = rng.random_range(0..=i);
        all.swap(i, j);
    }
    all.truncate(n);
    all
}
