//! Min-entropy, von Neumann entropy and the min-entropy deficit, in bits.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{
    error::bail,
    state::{spectral_decompose, DensityOperator, SpectralDecomposition},
    Config, Result,
};

/// Entropic summary of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyReport {
    pub min_entropy_bits: f64,
    pub von_neumann_bits: f64,
    /// `qubits - min_entropy_bits`.
    pub deficit_bits: f64,
    pub qubits: usize,
}

impl EntropyReport {
    pub fn of(rho: &DensityOperator, cfg: &Config) -> Result<Self> {
        let eig = spectral_decompose(rho, cfg)?;
        Self::from_spectrum(&eig, rho.qubits(), cfg)
    }

    pub fn from_spectrum(eig: &SpectralDecomposition, qubits: usize, cfg: &Config) -> Result<Self> {
        let min_entropy_bits = min_entropy_of_spectrum(&eig.eigenvalues, qubits)?;
        Ok(Self {
            min_entropy_bits,
            von_neumann_bits: von_neumann_of_spectrum(&eig.eigenvalues, cfg),
            deficit_bits: qubits as f64 - min_entropy_bits,
            qubits,
        })
    }
}

/// `-log2` of the largest eigenvalue, clamped to `[0, qubits]`.
pub fn min_entropy_of_spectrum(eigenvalues: &[f64], qubits: usize) -> Result<f64> {
    let largest = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(largest > 0.0) {
        bail!(Inconsistent, "largest eigenvalue {largest:e} is not positive");
    }
    Ok((-largest.log2()).clamp(0.0, qubits as f64))
}

/// Shannon entropy of a spectrum in bits, with values under the floor set to zero.
pub fn von_neumann_of_spectrum(eigenvalues: &[f64], cfg: &Config) -> f64 {
    shannon_bits(eigenvalues, cfg.eigen_floor)
}

pub(crate) fn shannon_bits(probs: &[f64], floor: f64) -> f64 {
    let h: f64 = probs.iter().filter(|&&p| p >= floor).map(|&p| -p * p.log2()).sum();
    h.max(0.0)
}

pub fn min_entropy(rho: &DensityOperator, cfg: &Config) -> Result<f64> {
    let eig = spectral_decompose(rho, cfg)?;
    min_entropy_of_spectrum(&eig.eigenvalues, rho.qubits())
}

pub fn von_neumann_entropy(rho: &DensityOperator, cfg: &Config) -> Result<f64> {
    let eig = spectral_decompose(rho, cfg)?;
    Ok(von_neumann_of_spectrum(&eig.eigenvalues, cfg))
}

/// `qubits - H_min(rho)`.
pub fn min_entropy_deficit(rho: &DensityOperator, cfg: &Config) -> Result<f64> {
    Ok(rho.qubits() as f64 - min_entropy(rho, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{maximally_mixed, tensor_product};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn maximally_mixed_saturates_both_entropies() {
        for q in 1..=8 {
            let rho = maximally_mixed(q, &cfg()).unwrap();
            assert_eq!(min_entropy(&rho, &cfg()).unwrap(), q as f64);
            if q <= 3 {
                assert!((von_neumann_entropy(&rho, &cfg()).unwrap() - q as f64).abs() < 1e-12);
            }
        }
        let five = maximally_mixed(5, &cfg()).unwrap();
        assert_eq!(min_entropy_deficit(&five, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn pure_states_have_zero_entropy() {
        let rho = DensityOperator::basis_state(5, 7, &cfg()).unwrap();
        assert_eq!(min_entropy(&rho, &cfg()).unwrap(), 0.0);
        assert_eq!(von_neumann_entropy(&rho, &cfg()).unwrap(), 0.0);
        assert_eq!(min_entropy_deficit(&rho, &cfg()).unwrap(), 5.0);
    }

    #[test]
    fn dyadic_spectrum() {
        let rho = DensityOperator::from_diagonal(&[0.5, 0.25, 0.25, 0.0], &cfg()).unwrap();
        assert!((von_neumann_entropy(&rho, &cfg()).unwrap() - 1.5).abs() < 1e-15);
        assert!((min_entropy(&rho, &cfg()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dqc1_input_has_unit_deficit() {
        let zero = DensityOperator::basis_state(1, 0, &cfg()).unwrap();
        let rho = tensor_product(&zero, &maximally_mixed(4, &cfg()).unwrap(), &cfg()).unwrap();
        assert!((min_entropy_deficit(&rho, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        let report = EntropyReport::of(&rho, &cfg()).unwrap();
        assert_eq!(report.qubits, 5);
        assert_eq!(report.deficit_bits, 5.0 - report.min_entropy_bits);
        assert!((report.von_neumann_bits - 4.0).abs() < 1e-12);
    }

    #[test]
    fn non_positive_spectrum_is_inconsistent() {
        assert!(matches!(min_entropy_of_spectrum(&[0.0, -1e-3], 1), Err(crate::Error::Inconsistent(_))));
    }
}
