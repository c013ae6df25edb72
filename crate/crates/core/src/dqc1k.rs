//! The one-clean-qubit model with `k` measured qubits.
//!
//! The input is `|0><0| (x) (I/2)^{(x) n}` on `n + 1` qubits with the clean
//! qubit first; after a unitary `U` the first `k` qubits are read out in the
//! computational basis.

use alloc::{format, string::String, vec, vec::Vec};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{
    error::bail,
    gate::{circuit_unitary, Gate},
    mbqc::pow2,
    state::{apply_unitary, spectral_decompose, CMatrix, DensityOperator, UnitaryOperator, C64},
    Config, Error, Result,
};

/// `|0><0| (x) (I/2)^{(x) n}`.
pub fn dqc1k_input(n: usize, cfg: &Config) -> Result<DensityOperator> {
    cfg.check_qubits(n + 1)?;
    let dim = 1usize << (n + 1);
    let p = pow2(-(n as i32));
    let mut m = CMatrix::zeros(dim, dim);
    // Clean qubit is the most significant bit, so its |0> half is the first half.
    for i in 0..dim / 2 {
        m[(i, i)] = C64::new(p, 0.0);
    }
    DensityOperator::new(m, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dqc1kCircuit {
    n: usize,
    k: usize,
    unitary: UnitaryOperator,
}

impl Dqc1kCircuit {
    pub fn from_unitary(n: usize, k: usize, unitary: UnitaryOperator) -> Result<Self> {
        if unitary.qubits() != n + 1 {
            bail!(Dimension, "unitary acts on {} qubits, circuit needs n + 1 = {}", unitary.qubits(), n + 1);
        }
        if k == 0 || k > n + 1 {
            bail!(Validation, "k = {k} must lie in 1..={}", n + 1);
        }
        Ok(Self { n, k, unitary })
    }

    pub fn from_gates(n: usize, k: usize, gates: &[Gate], cfg: &Config) -> Result<Self> {
        Self::from_unitary(n, k, circuit_unitary(n + 1, gates, cfg)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    /// `U rho_in U*`.
    pub fn output_state(&self, cfg: &Config) -> Result<DensityOperator> {
        apply_unitary(&dqc1k_input(self.n, cfg)?, &self.unitary)
    }
}

/// Readout distribution over `k`-bit strings; index `z` holds `P(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    bits: usize,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(bits: usize, probabilities: Vec<f64>, cfg: &Config) -> Result<Self> {
        if probabilities.len() != 1 << bits {
            bail!(Dimension, "{} probabilities for {bits}-bit outcomes", probabilities.len());
        }
        if let Some((z, p)) = probabilities.iter().enumerate().find(|(_, &p)| !(p >= -cfg.validation_tol)) {
            bail!(Validation, "P({z}) = {p:e} is negative");
        }
        let total: f64 = probabilities.iter().sum();
        if !((total - 1.0).abs() <= cfg.reconstruction_tol) {
            bail!(Validation, "probabilities sum to {total}");
        }
        Ok(Self { bits, probabilities })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, z: u64) -> f64 {
        self.probabilities.get(z as usize).copied().unwrap_or(0.0)
    }

    /// `sum_{z in set} P(z)`.
    pub fn mass(&self, set: &[u64]) -> f64 {
        set.iter().map(|&z| self.probability(z)).sum()
    }

    /// `z` written as a `bits`-character binary string, most significant first.
    pub fn bitstring(&self, z: u64) -> String {
        format!("{z:0width$b}", width = self.bits)
    }

    /// Sums out the last measured bit.
    pub fn marginalize_last(&self) -> Option<Self> {
        if self.bits <= 1 {
            return None;
        }
        let probabilities = self.probabilities.chunks(2).map(|pair| pair[0] + pair[1]).collect();
        Some(Self { bits: self.bits - 1, probabilities })
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probabilities.iter().enumerate().map(|(z, &p)| (z as u64, p))
    }
}

/// `P(z) = Tr[(P_z (x) I) U rho_in U*]` for every `z in {0,1}^k`.
pub fn run_dqc1k(c: &Dqc1kCircuit, cfg: &Config) -> Result<OutcomeDistribution> {
    let out = c.output_state(cfg)?;
    let rest = c.n + 1 - c.k;
    let mut probs = vec![0.0; 1 << c.k];
    for i in 0..out.matrix().nrows() {
        probs[i >> rest] += out.matrix()[(i, i)].re;
    }
    OutcomeDistribution::new(c.k, probs, cfg)
}

/// Outcome of comparing the spectrum of `U rho_in U*` with the flat profile
/// `{2^{-n}} x 2^n, {0} x 2^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumVerdict {
    pub passed: bool,
    pub max_deviation: f64,
}

pub fn dqc1k_spectrum_check(c: &Dqc1kCircuit, cfg: &Config) -> Result<SpectrumVerdict> {
    let eig = spectral_decompose(&c.output_state(cfg)?, cfg)?;
    let half = 1usize << c.n;
    let flat = pow2(-(c.n as i32));
    let max_deviation = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &l)| (l - if j < half { flat } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumVerdict { passed: max_deviation <= cfg.reconstruction_tol, max_deviation })
}

/// `2^{k-2}`, the smallest solution set compatible with success probability 1/2.
/// For `k = 1` this is 0.5, i.e. the trivial `|S| >= 1`.
pub fn dqc1k_solution_bound(k: usize) -> f64 {
    pow2(k as i32 - 2)
}

/// `r` circuits run in parallel and repeated `v` times.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelDqc1kSpec {
    repetitions: u64,
    per_circuit_success: Vec<f64>,
    solution_set_sizes: Vec<u64>,
}

impl ParallelDqc1kSpec {
    pub fn new(repetitions: u64, per_circuit_success: Vec<f64>, solution_set_sizes: Vec<u64>) -> Result<Self> {
        if repetitions == 0 {
            bail!(Validation, "need at least one repetition");
        }
        if per_circuit_success.is_empty() {
            bail!(Validation, "need at least one circuit");
        }
        if per_circuit_success.len() != solution_set_sizes.len() {
            bail!(
                Validation,
                "{} success probabilities for {} solution sets",
                per_circuit_success.len(),
                solution_set_sizes.len()
            );
        }
        if let Some(p) = per_circuit_success.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
            bail!(Validation, "success probability {p} outside [0, 1]");
        }
        Ok(Self { repetitions, per_circuit_success, solution_set_sizes })
    }

    /// `r`.
    pub fn circuits(&self) -> usize {
        self.per_circuit_success.len()
    }

    /// `v`.
    pub fn repetitions(&self) -> u64 {
        self.repetitions
    }

    pub fn per_circuit_success(&self) -> &[f64] {
        &self.per_circuit_success
    }

    pub fn solution_set_sizes(&self) -> &[u64] {
        &self.solution_set_sizes
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParallelBounds {
    /// `|S_i| lambda_1 2^{n+1-k}`; may exceed 1.
    pub p_i_bound: f64,
    /// `(1 - |S_i|/2^k)^v`, the exact miss probability of uniform sampling.
    pub exact_failure: f64,
    /// `e^{-p_i v / 2}`.
    pub exp_failure: f64,
    /// `min(exact_failure, exp_failure)`.
    pub classical_failure_bound: f64,
}

/// Per-circuit bounds for circuit `index` of a parallel run.
pub fn parallel_failure_bound(
    spec: &ParallelDqc1kSpec,
    index: usize,
    lambda1: f64,
    n: usize,
    k: usize,
) -> Result<ParallelBounds> {
    let len = spec.circuits();
    if index >= len {
        return Err(Error::IndexOutOfRange { index, len });
    }
    if k == 0 || k > n + 1 {
        bail!(Validation, "k = {k} must lie in 1..={}", n + 1);
    }
    let size = spec.solution_set_sizes[index];
    let outcomes = pow2(k as i32);
    if size as f64 > outcomes {
        bail!(Validation, "|S_{index}| = {size} exceeds 2^{k}");
    }
    let p = spec.per_circuit_success[index];
    let v = spec.repetitions as f64;
    let exact_failure = (1.0 - size as f64 / outcomes).powf(v);
    let exp_failure = (-p * v / 2.0).exp();
    Ok(ParallelBounds {
        p_i_bound: size as f64 * lambda1 * pow2(n as i32 + 1 - k as i32),
        exact_failure,
        exp_failure,
        classical_failure_bound: exact_failure.min(exp_failure),
    })
}
