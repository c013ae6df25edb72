//! Measurement-based computation on a general resource state: a POVM on the
//! control region `C`, a computational-basis readout of the output region `O`,
//! and outcome-dependent sets of accepted readouts.

use alloc::{format, vec, vec::Vec};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{
    error::bail,
    state::{
        check_same_register, identity_defect, reduce, smallest_eigenvalue, spectral_decompose, CMatrix,
        DensityOperator, HermitianOperator, C64,
    },
    Config, Error, Result,
};

/// Split of an `N`-qubit register into output qubits `O` and control qubits `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResourcePartition {
    total_qubits: usize,
    /// Readout order: bit `i` (from the most significant end) of a readout
    /// string is the outcome of qubit `output_qubits[i]`.
    output_qubits: Vec<usize>,
    /// Complement of `output_qubits`, ascending.
    control_qubits: Vec<usize>,
}

impl ResourcePartition {
    pub fn new(total_qubits: usize, output_qubits: Vec<usize>) -> Result<Self> {
        let n = output_qubits.len();
        if n == 0 || n > total_qubits {
            bail!(Validation, "output region must have between 1 and {total_qubits} qubits, got {n}");
        }
        let mut member = vec![false; total_qubits];
        for &q in &output_qubits {
            if q >= total_qubits {
                return Err(Error::IndexOutOfRange { index: q, len: total_qubits });
            }
            if core::mem::replace(&mut member[q], true) {
                bail!(Validation, "output qubit {q} listed twice");
            }
        }
        let control_qubits = (0..total_qubits).filter(|&q| !member[q]).collect();
        Ok(Self { total_qubits, output_qubits, control_qubits })
    }

    pub fn total_qubits(&self) -> usize {
        self.total_qubits
    }

    pub fn output_qubits(&self) -> &[usize] {
        &self.output_qubits
    }

    pub fn control_qubits(&self) -> &[usize] {
        &self.control_qubits
    }

    /// `n`, the size of `O`.
    pub fn output_len(&self) -> usize {
        self.output_qubits.len()
    }

    pub fn control_len(&self) -> usize {
        self.control_qubits.len()
    }
}

/// Positive operators on `C` summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    control_qubits: usize,
    elements: Vec<CMatrix>,
}

impl Povm {
    /// Validates positivity of every element and completeness of the sum.
    ///
    /// A POVM on an empty control region (`N = n`) is the single scalar
    /// element `[1]`; build it with [`Povm::trivial`].
    pub fn new(elements: Vec<HermitianOperator>, cfg: &Config) -> Result<Self> {
        let Some(first) = elements.first() else {
            bail!(Validation, "a POVM needs at least one element");
        };
        let qubits = first.qubits();
        let dim = 1usize << qubits;
        let mut sum = CMatrix::zeros(dim, dim);
        for (j, e) in elements.iter().enumerate() {
            check_same_register(&format!("POVM element {j}"), qubits, e.qubits())?;
            if e.matrix().iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
                bail!(Validation, "POVM element {j} has non-finite entries");
            }
            let min = smallest_eigenvalue(e.matrix());
            if !(min >= -cfg.validation_tol) {
                bail!(Validation, "POVM element {j} has eigenvalue {min:e}");
            }
            sum += e.matrix();
        }
        let defect = identity_defect(&sum);
        if !(defect <= cfg.reconstruction_tol) {
            bail!(Validation, "POVM elements sum to identity only within {defect:e}");
        }
        Ok(Self {
            control_qubits: qubits,
            elements: elements.into_iter().map(HermitianOperator::into_matrix).collect(),
        })
    }

    /// The one-outcome measurement on a zero-qubit control region.
    pub fn trivial() -> Self {
        Self { control_qubits: 0, elements: vec![CMatrix::identity(1, 1)] }
    }

    /// Projective measurement in the computational basis of `qubits` qubits.
    pub fn computational(qubits: usize, cfg: &Config) -> Result<Self> {
        cfg.check_qubits(qubits)?;
        let dim = 1usize << qubits;
        let elements = (0..dim)
            .map(|i| {
                let mut m = CMatrix::zeros(dim, dim);
                m[(i, i)] = C64::new(1.0, 0.0);
                m
            })
            .collect();
        Ok(Self { control_qubits: qubits, elements })
    }

    pub fn qubits(&self) -> usize {
        self.control_qubits
    }

    /// `r`, the number of outcomes.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }
}

/// Accepted readout strings `S_j` per POVM outcome, all of one size.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolutionFamily {
    bits: usize,
    sets: Vec<Vec<u64>>,
}

impl SolutionFamily {
    /// Sorts and deduplicates each set; rejects out-of-range strings and sets
    /// of unequal size.
    pub fn new(bits: usize, sets: Vec<Vec<u64>>) -> Result<Self> {
        if bits == 0 || bits > 63 {
            bail!(Domain, "readout strings must have 1 to 63 bits, got {bits}");
        }
        let mut normalized = Vec::with_capacity(sets.len());
        for (j, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&z) = s.last() {
                if z >> bits != 0 {
                    bail!(Validation, "set {j} contains {z}, which is not a {bits}-bit string");
                }
            }
            normalized.push(s);
        }
        if let Some(first) = normalized.first() {
            if let Some((j, s)) = normalized.iter().enumerate().find(|(_, s)| s.len() != first.len()) {
                bail!(Validation, "set {j} has {} strings but set 0 has {}", s.len(), first.len());
            }
        }
        Ok(Self { bits, sets: normalized })
    }

    /// Every set equal to all of `{0,1}^bits`.
    pub fn complete(bits: usize, outcomes: usize) -> Result<Self> {
        Self::new(bits, vec![(0..1u64 << bits).collect(); outcomes])
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn sets(&self) -> &[Vec<u64>] {
        &self.sets
    }

    /// `|S|`, or 0 for an empty family.
    pub fn solution_size(&self) -> usize {
        self.sets.first().map_or(0, Vec::len)
    }
}

/// `sum_j sum_{z in S_j} Tr[(M_j (x) P_z) sigma]`, with `M_j` on `C` and `P_z`
/// on `O` placed according to the partition's indices.
pub fn mbqc_success_probability(
    sigma: &DensityOperator,
    part: &ResourcePartition,
    povm: &Povm,
    sols: &SolutionFamily,
) -> Result<f64> {
    check_same_register("resource state", part.total_qubits(), sigma.qubits())?;
    check_same_register("POVM", part.control_len(), povm.qubits())?;
    if sols.bits() != part.output_len() {
        bail!(Dimension, "solution strings have {} bits but O has {} qubits", sols.bits(), part.output_len());
    }
    if sols.sets().len() != povm.len() {
        bail!(Dimension, "{} solution sets for {} POVM outcomes", sols.sets().len(), povm.len());
    }
    // Reorder to C ++ O so that a basis index factors as (c, o).
    let order: Vec<usize> = part.control_qubits().iter().chain(part.output_qubits()).copied().collect();
    let permuted = reduce(sigma.matrix(), sigma.qubits(), &order)?;
    let out_dim = 1usize << part.output_len();
    let ctl_dim = 1usize << part.control_len();
    let mut total = 0.0;
    for (m, set) in povm.elements().iter().zip(sols.sets()) {
        for &z in set {
            let z = z as usize;
            // Tr[(M (x) |z><z|) sigma] = sum_{a,b} M[a,b] sigma[(b,z),(a,z)]
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..ctl_dim {
                for b in 0..ctl_dim {
                    acc += m[(a, b)] * permuted[(b * out_dim + z, a * out_dim + z)];
                }
            }
            total += acc.re;
        }
    }
    Ok(total)
}

/// `lambda_1(sigma) |S| 2^{N-n}`; a bound on the success probability, and may exceed 1.
pub fn success_upper_bound(
    sigma: &DensityOperator,
    part: &ResourcePartition,
    solution_size: u64,
    cfg: &Config,
) -> Result<f64> {
    check_same_register("resource state", part.total_qubits(), sigma.qubits())?;
    let n = part.output_len();
    if n < 64 && solution_size > 1u64 << n {
        bail!(Domain, "|S| = {solution_size} exceeds 2^{n}");
    }
    let lambda1 = spectral_decompose(sigma, cfg)?.largest();
    Ok(lambda1 * solution_size as f64 * pow2(part.control_len() as i32))
}

/// Smallest `|S|` compatible with a success probability of at least 1/2:
/// `2^{n-N-1} / lambda_1`.
pub fn solution_count_lower_bound(lambda1: f64, total_qubits: usize, output_qubits: usize) -> Result<f64> {
    if !(lambda1 > 0.0 && lambda1 <= 1.0) {
        bail!(Domain, "largest eigenvalue must lie in (0, 1], got {lambda1}");
    }
    if output_qubits == 0 || output_qubits > total_qubits {
        bail!(Domain, "need 1 <= n <= N, got n = {output_qubits}, N = {total_qubits}");
    }
    Ok(pow2(output_qubits as i32 - total_qubits as i32 - 1) / lambda1)
}

pub(crate) fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// Checks that an arbitrary Hermitian matrix list forms a POVM on `qubits` qubits;
/// used by loaders that hold raw matrices.
pub fn povm_from_matrices(qubits: usize, matrices: Vec<CMatrix>, cfg: &Config) -> Result<Povm> {
    if qubits == 0 {
        if matrices.len() == 1
            && matrices[0].shape() == (1, 1)
            && (matrices[0][(0, 0)].re - 1.0).abs() <= cfg.reconstruction_tol
        {
            return Ok(Povm::trivial());
        }
        bail!(Validation, "a POVM on zero qubits is the single element [1]");
    }
    let elements = matrices.into_iter().map(|m| HermitianOperator::new(m, cfg)).collect::<Result<Vec<_>>>()?;
    let povm = Povm::new(elements, cfg)?;
    check_same_register("POVM", qubits, povm.qubits())?;
    Ok(povm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::maximally_mixed;

    fn cfg() -> Config {
        Config::default()
    }

    fn setup() -> (ResourcePartition, Povm, SolutionFamily) {
        (
            ResourcePartition::new(2, vec![1]).unwrap(),
            Povm::computational(1, &cfg()).unwrap(),
            SolutionFamily::new(1, vec![vec![0], vec![0]]).unwrap(),
        )
    }

    #[test]
    fn product_zero_state_always_succeeds() {
        let (part, povm, sols) = setup();
        let sigma = DensityOperator::basis_state(2, 0, &cfg()).unwrap();
        let p = mbqc_success_probability(&sigma, &part, &povm, &sols).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_succeeds_half_the_time() {
        let (part, povm, sols) = setup();
        let sigma = maximally_mixed(2, &cfg()).unwrap();
        let p = mbqc_success_probability(&sigma, &part, &povm, &sols).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_contiguous_output_region() {
        // |010>: qubit 1 is the only one set.
        let sigma = DensityOperator::basis_state(3, 0b010, &cfg()).unwrap();
        let part = ResourcePartition::new(3, vec![1]).unwrap();
        assert_eq!(part.control_qubits(), &[0, 2]);
        let povm = Povm::computational(2, &cfg()).unwrap();
        let hits = SolutionFamily::new(1, vec![vec![1]; 4]).unwrap();
        let p = mbqc_success_probability(&sigma, &part, &povm, &hits).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        let misses = SolutionFamily::new(1, vec![vec![0]; 4]).unwrap();
        assert_eq!(mbqc_success_probability(&sigma, &part, &povm, &misses).unwrap(), 0.0);
    }

    #[test]
    fn readout_order_follows_output_list() {
        // Qubit 0 = 1, qubit 2 = 0; O = [2, 0] reads "01".
        let sigma = DensityOperator::basis_state(3, 0b100, &cfg()).unwrap();
        let part = ResourcePartition::new(3, vec![2, 0]).unwrap();
        let povm = Povm::computational(1, &cfg()).unwrap();
        let sols = SolutionFamily::new(2, vec![vec![0b01], vec![0b01]]).unwrap();
        let p = mbqc_success_probability(&sigma, &part, &povm, &sols).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn whole_register_as_output() {
        let sigma = maximally_mixed(2, &cfg()).unwrap();
        let part = ResourcePartition::new(2, vec![0, 1]).unwrap();
        let sols = SolutionFamily::new(2, vec![vec![0, 3]]).unwrap();
        let p = mbqc_success_probability(&sigma, &part, &Povm::trivial(), &sols).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unequal_solution_sets_rejected() {
        assert!(matches!(SolutionFamily::new(2, vec![vec![0], vec![1, 2]]), Err(Error::Validation(_))));
        assert!(SolutionFamily::new(2, vec![vec![4]]).is_err());
        let dedup = SolutionFamily::new(2, vec![vec![3, 1, 3]]).unwrap();
        assert_eq!(dedup.sets()[0], vec![1, 3]);
    }

    #[test]
    fn povm_validation() {
        let half = HermitianOperator::from_diagonal(&[0.5, 0.5], &cfg()).unwrap();
        assert!(Povm::new(vec![half.clone(), half.clone()], &cfg()).is_ok());
        assert!(matches!(Povm::new(vec![half.clone()], &cfg()), Err(Error::Validation(_))));
        let neg = HermitianOperator::from_diagonal(&[1.5, 1.5], &cfg()).unwrap();
        let neg2 = HermitianOperator::from_diagonal(&[-0.5, -0.5], &cfg()).unwrap();
        assert!(matches!(Povm::new(vec![neg, neg2], &cfg()), Err(Error::Validation(_))));
        assert!(Povm::new(vec![], &cfg()).is_err());
    }

    #[test]
    fn mismatches_are_reported() {
        let (part, povm, sols) = setup();
        let sigma = maximally_mixed(3, &cfg()).unwrap();
        assert!(matches!(mbqc_success_probability(&sigma, &part, &povm, &sols), Err(Error::Dimension(_))));
        let sigma = maximally_mixed(2, &cfg()).unwrap();
        let three = SolutionFamily::new(1, vec![vec![0]; 3]).unwrap();
        assert!(mbqc_success_probability(&sigma, &part, &povm, &three).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(ResourcePartition::new(3, vec![]).is_err());
        assert!(ResourcePartition::new(3, vec![3]).is_err());
        assert!(ResourcePartition::new(3, vec![1, 1]).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        let part = ResourcePartition::new(3, vec![0, 1, 2]).unwrap();
        let mixed = maximally_mixed(3, &cfg()).unwrap();
        let b = success_upper_bound(&mixed, &part, 8, &cfg()).unwrap();
        assert!((b - 1.0).abs() < 1e-14);

        let part = ResourcePartition::new(3, vec![2]).unwrap();
        let pure = DensityOperator::basis_state(3, 5, &cfg()).unwrap();
        let b = success_upper_bound(&pure, &part, 1, &cfg()).unwrap();
        assert!((b - 4.0).abs() < 1e-14);
        assert!(success_upper_bound(&pure, &part, 3, &cfg()).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let n = 6;
        let b = solution_count_lower_bound(pow2(-(n as i32)), n, n).unwrap();
        assert_eq!(b, pow2(n as i32 - 1));
        let b = solution_count_lower_bound(1.0, 10, 4).unwrap();
        assert_eq!(b, 1.0 / 128.0);
        let delta = 3;
        let b = solution_count_lower_bound(pow2(-8 + delta), 8, 8).unwrap();
        assert_eq!(b, 16.0);
        assert!(solution_count_lower_bound(0.0, 2, 1).is_err());
        assert!(solution_count_lower_bound(0.5, 2, 3).is_err());
    }
}
