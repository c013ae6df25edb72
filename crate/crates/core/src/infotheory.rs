//! Alice sends a classical input `i` with probability `p_i`; Bob applies `U_i`
//! to his state `sigma_B`. The Holevo-form mutual information between the two
//! registers is bounded by `N_B - S(sigma_B)`.

use alloc::{vec, vec::Vec};

use crate::{
    entropy::{shannon_bits, von_neumann_entropy},
    error::bail,
    state::{apply_unitary, check_same_register, hermitian_part, CMatrix, DensityOperator, UnitaryOperator},
    Config, Result,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteModel {
    input_probs: Vec<f64>,
    unitaries: Vec<UnitaryOperator>,
    bob_state: DensityOperator,
}

impl BipartiteModel {
    pub fn new(
        input_probs: Vec<f64>,
        unitaries: Vec<UnitaryOperator>,
        bob_state: DensityOperator,
        cfg: &Config,
    ) -> Result<Self> {
        if input_probs.is_empty() {
            bail!(Validation, "need at least one input");
        }
        if input_probs.len() != unitaries.len() {
            bail!(Validation, "{} input probabilities for {} unitaries", input_probs.len(), unitaries.len());
        }
        if let Some(p) = input_probs.iter().find(|&&p| !(p >= 0.0 && p.is_finite())) {
            bail!(Validation, "input probability {p} is not a probability");
        }
        let total: f64 = input_probs.iter().sum();
        if !((total - 1.0).abs() <= cfg.validation_tol) {
            bail!(Validation, "input probabilities sum to {total}");
        }
        for (i, u) in unitaries.iter().enumerate() {
            check_same_register(&alloc::format!("unitary {i}"), bob_state.qubits(), u.qubits())?;
        }
        Ok(Self { input_probs, unitaries, bob_state })
    }

    pub fn input_probs(&self) -> &[f64] {
        &self.input_probs
    }

    pub fn unitaries(&self) -> &[UnitaryOperator] {
        &self.unitaries
    }

    pub fn bob_state(&self) -> &DensityOperator {
        &self.bob_state
    }

    /// `N_B`.
    pub fn bob_qubits(&self) -> usize {
        self.bob_state.qubits()
    }

    /// `N_A = max(1, ceil(log2(#inputs)))`.
    pub fn alice_qubits(&self) -> usize {
        let count = self.input_probs.len();
        (count.next_power_of_two().trailing_zeros() as usize).max(1)
    }

    /// `sigma_B^i = U_i sigma_B U_i*`.
    pub fn conditional_states(&self) -> Result<Vec<DensityOperator>> {
        self.unitaries.iter().map(|u| apply_unitary(&self.bob_state, u)).collect()
    }
}

/// `rho_AB = sum_i p_i |i><i| (x) U_i sigma_B U_i*`, with Alice's register on the
/// high-order qubits and zero-probability padding up to `2^{N_A}` inputs.
pub fn bipartite_output_state(m: &BipartiteModel, cfg: &Config) -> Result<DensityOperator> {
    let na = m.alice_qubits();
    let nb = m.bob_qubits();
    cfg.check_qubits(na + nb)?;
    let bdim = 1usize << nb;
    let dim = bdim << na;
    let mut out = CMatrix::zeros(dim, dim);
    for (i, (p, sigma)) in m.input_probs.iter().zip(m.conditional_states()?).enumerate() {
        let mut block = out.view_mut((i * bdim, i * bdim), (bdim, bdim));
        block += sigma.matrix().scale(*p);
    }
    DensityOperator::new(hermitian_part(&out), cfg)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MutualInfoReport {
    /// `I_AB = S(rho_B) - sum_i p_i S(sigma_B^i)`.
    pub mutual_information_bits: f64,
    /// `N_B - S(sigma_B)`.
    pub bound_bits: f64,
    /// `S(rho_B)`.
    pub bob_marginal_entropy: f64,
    /// `S(sigma_B^i)` per input.
    pub conditional_entropies: Vec<f64>,
}

pub fn mutual_information(m: &BipartiteModel, cfg: &Config) -> Result<MutualInfoReport> {
    let conditionals = m.conditional_states()?;
    let bdim = 1usize << m.bob_qubits();
    let mut marginal = CMatrix::zeros(bdim, bdim);
    for (p, sigma) in m.input_probs.iter().zip(&conditionals) {
        marginal += sigma.matrix().scale(*p);
    }
    let rho_b = DensityOperator::new(hermitian_part(&marginal), cfg)?;
    let bob_marginal_entropy = von_neumann_entropy(&rho_b, cfg)?;
    let conditional_entropies = conditionals.iter().map(|s| von_neumann_entropy(s, cfg)).collect::<Result<Vec<_>>>()?;
    let average: f64 = m.input_probs.iter().zip(&conditional_entropies).map(|(p, s)| p * s).sum();
    Ok(MutualInfoReport {
        mutual_information_bits: bob_marginal_entropy - average,
        bound_bits: mutual_info_bound(m, cfg)?,
        bob_marginal_entropy,
        conditional_entropies,
    })
}

/// `N_B - S(sigma_B)`.
pub fn mutual_info_bound(m: &BipartiteModel, cfg: &Config) -> Result<f64> {
    Ok(m.bob_qubits() as f64 - von_neumann_entropy(&m.bob_state, cfg)?)
}

/// Shannon entropy of Alice's input distribution, in bits.
pub fn input_entropy(m: &BipartiteModel, cfg: &Config) -> f64 {
    shannon_bits(&m.input_probs, cfg.eigen_floor)
}

/// Padded copy of Alice's distribution over all `2^{N_A}` labels.
pub fn padded_input_probs(m: &BipartiteModel) -> Vec<f64> {
    let mut p = vec![0.0; 1 << m.alice_qubits()];
    p[..m.input_probs.len()].copy_from_slice(&m.input_probs);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        dqc1k::dqc1k_input,
        state::C64,
        state::{max_abs_diff, maximally_mixed, partial_trace, tensor_product},
    };

    fn cfg() -> Config {
        Config::default()
    }

    fn x() -> UnitaryOperator {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        UnitaryOperator::new(CMatrix::from_row_slice(2, 2, &[o, l, l, o]), &cfg()).unwrap()
    }

    fn id(q: usize) -> UnitaryOperator {
        UnitaryOperator::identity(q, &cfg()).unwrap()
    }

    #[test]
    fn single_input_output_state() {
        let sigma = DensityOperator::from_diagonal(&[0.75, 0.25], &cfg()).unwrap();
        let m = BipartiteModel::new(vec![1.0], vec![id(1)], sigma.clone(), &cfg()).unwrap();
        assert_eq!(m.alice_qubits(), 1);
        let rho = bipartite_output_state(&m, &cfg()).unwrap();
        let zero = DensityOperator::basis_state(1, 0, &cfg()).unwrap();
        let want = tensor_product(&zero, &sigma, &cfg()).unwrap();
        assert!(max_abs_diff(rho.matrix(), want.matrix()) < 1e-15);
    }

    #[test]
    fn flip_channel_output_state() {
        let zero = DensityOperator::basis_state(1, 0, &cfg()).unwrap();
        let m = BipartiteModel::new(vec![0.5, 0.5], vec![id(1), x()], zero, &cfg()).unwrap();
        let rho = bipartite_output_state(&m, &cfg()).unwrap();
        let want = DensityOperator::from_diagonal(&[0.5, 0.0, 0.0, 0.5], &cfg()).unwrap();
        assert!(max_abs_diff(rho.matrix(), want.matrix()) < 1e-15);
        let reduced = partial_trace(&rho, &[1]).unwrap();
        assert!(max_abs_diff(reduced.matrix(), maximally_mixed(1, &cfg()).unwrap().matrix()) < 1e-15);

        let report = mutual_information(&m, &cfg()).unwrap();
        assert!((report.mutual_information_bits - 1.0).abs() < 1e-12);
        assert_eq!(report.conditional_entropies, vec![0.0, 0.0]);
        assert!((report.bound_bits - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_bob_learns_nothing() {
        let mixed = maximally_mixed(1, &cfg()).unwrap();
        let m = BipartiteModel::new(vec![0.3, 0.7], vec![id(1), x()], mixed, &cfg()).unwrap();
        let report = mutual_information(&m, &cfg()).unwrap();
        assert!(report.mutual_information_bits.abs() < 1e-12);
        assert!(mutual_info_bound(&m, &cfg()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bound_examples() {
        let pure = DensityOperator::basis_state(3, 0, &cfg()).unwrap();
        let m = BipartiteModel::new(vec![1.0], vec![id(3)], pure, &cfg()).unwrap();
        assert_eq!(mutual_info_bound(&m, &cfg()).unwrap(), 3.0);

        let dqc1 = dqc1k_input(4, &cfg()).unwrap();
        let m = BipartiteModel::new(vec![1.0], vec![id(5)], dqc1, &cfg()).unwrap();
        assert!((mutual_info_bound(&m, &cfg()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alice_register_sizes() {
        let sigma = maximally_mixed(1, &cfg()).unwrap();
        let model = |count: usize| {
            BipartiteModel::new(vec![1.0 / count as f64; count], vec![id(1); count], sigma.clone(), &cfg()).unwrap()
        };
        assert_eq!(model(2).alice_qubits(), 1);
        assert_eq!(model(3).alice_qubits(), 2);
        assert_eq!(model(4).alice_qubits(), 2);
        assert_eq!(model(5).alice_qubits(), 3);
        assert_eq!(padded_input_probs(&model(3)).len(), 4);
        let rho = bipartite_output_state(&model(3), &cfg()).unwrap();
        assert_eq!(rho.qubits(), 3);
    }

    #[test]
    fn model_validation() {
        let sigma = maximally_mixed(1, &cfg()).unwrap();
        assert!(BipartiteModel::new(vec![0.5, 0.4], vec![id(1), id(1)], sigma.clone(), &cfg()).is_err());
        assert!(BipartiteModel::new(vec![1.5, -0.5], vec![id(1), id(1)], sigma.clone(), &cfg()).is_err());
        assert!(BipartiteModel::new(vec![1.0], vec![id(1), id(1)], sigma.clone(), &cfg()).is_err());
        assert!(BipartiteModel::new(vec![1.0], vec![id(2)], sigma, &cfg()).is_err());
    }
}
