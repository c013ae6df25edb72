//! Gibbs states, the free-energy form of the min-entropy, and the cluster-state
//! Hamiltonian.

use alloc::{collections::BTreeSet, format, string::String, vec, vec::Vec};
use core::{fmt, str::FromStr};

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{
    entropy::min_entropy_of_spectrum,
    error::bail,
    state::{decompose_matrix, hermitian_part, CMatrix, DensityOperator, HermitianOperator, C64},
    Config, Error, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Matrix element `<bit ^ flip| P |bit>`.
    fn phase(self, bit: usize) -> C64 {
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        match self {
            Pauli::I | Pauli::X => C64::new(1.0, 0.0),
            Pauli::Z => C64::new(sign, 0.0),
            Pauli::Y => C64::new(0.0, sign),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(qubits: usize) -> Self {
        Self(vec![Pauli::I; qubits])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Dense matrix; every Pauli string is a phased permutation.
    pub fn matrix(&self) -> CMatrix {
        let q = self.0.len();
        let dim = 1usize << q;
        let flip_mask =
            self.0.iter().enumerate().filter(|(_, p)| p.flips()).fold(0usize, |m, (i, _)| m | (1 << (q - 1 - i)));
        let mut m = CMatrix::zeros(dim, dim);
        for col in 0..dim {
            let phase = self
                .0
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (i, p)| acc * p.phase((col >> (q - 1 - i)) & 1));
            m[(col ^ flip_mask, col)] = phase;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Validation(format!("unknown Pauli label {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: f64,
    pub paulis: PauliString,
}

/// Real linear combination of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    qubits: usize,
    terms: Vec<PauliTerm>,
}

impl HamiltonianSpec {
    pub fn new(qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if qubits == 0 {
            bail!(Domain, "a Hamiltonian needs at least one qubit");
        }
        for (i, t) in terms.iter().enumerate() {
            if t.paulis.len() != qubits {
                bail!(Validation, "term {i} ({}) has length {} on a {qubits}-qubit register", t.paulis, t.paulis.len());
            }
            if !t.coeff.is_finite() {
                bail!(Validation, "term {i} has a non-finite coefficient");
            }
        }
        Ok(Self { qubits, terms })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Adds `shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut terms = self.terms.clone();
        terms.push(PauliTerm { coeff: shift, paulis: PauliString::identity(self.qubits) });
        Self { qubits: self.qubits, terms }
    }

    pub fn matrix(&self, cfg: &Config) -> Result<HermitianOperator> {
        cfg.check_qubits(self.qubits)?;
        let dim = 1usize << self.qubits;
        let m = self.terms.iter().fold(CMatrix::zeros(dim, dim), |acc, t| acc + t.paulis.matrix().scale(t.coeff));
        HermitianOperator::new(m, cfg)
    }
}

/// Simple undirected graph on `vertices` sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterGraph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ClusterGraph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            bail!(Domain, "a graph needs at least one vertex");
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                bail!(Validation, "self-loop on vertex {a}");
            }
            if a >= vertices || b >= vertices {
                bail!(Validation, "edge ({a}, {b}) leaves the {vertices}-vertex range");
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { vertices, edges: set })
    }

    pub fn path(vertices: usize) -> Result<Self> {
        Self::new(vertices, (1..vertices).map(|i| (i - 1, i)))
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !core::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Compact label such as `4:0-1,1-2,2-3`.
    pub fn label(&self) -> String {
        let mut s = format!("{}:", self.vertices);
        for (i, (a, b)) in self.edges().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&format!("{a}-{b}"));
        }
        s
    }

    fn adjacency_mask(&self, perm: &[usize]) -> u32 {
        let n = self.vertices;
        let mut mask = 0u32;
        for &(a, b) in &self.edges {
            let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            mask |= 1 << (x * n + y);
        }
        mask
    }
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `vertices` vertices (brute force, intended for `vertices <= 6`).
pub fn connected_graphs(vertices: usize) -> Result<Vec<ClusterGraph>> {
    if vertices == 0 || vertices > 6 {
        bail!(Domain, "graph catalog supports 1 to 6 vertices, got {vertices}");
    }
    let pairs: Vec<(usize, usize)> = (0..vertices).flat_map(|a| (a + 1..vertices).map(move |b| (a, b))).collect();
    let perms = permutations(vertices);
    let mut canon_seen = BTreeSet::new();
    let mut out = Vec::new();
    for subset in 0u32..(1 << pairs.len()) {
        let g = ClusterGraph::new(
            vertices,
            pairs.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).map(|(_, &e)| e),
        )?;
        if !g.is_connected() {
            continue;
        }
        let canon = perms.iter().map(|p| g.adjacency_mask(p)).min().unwrap_or(0);
        if canon_seen.insert(canon) {
            out.push(g);
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `-sum_i K_i` with `K_i = X_i prod_{j in N(i)} Z_j`.
pub fn cluster_hamiltonian(g: &ClusterGraph) -> HamiltonianSpec {
    let n = g.vertices();
    let terms = (0..n)
        .map(|i| {
            let mut p = PauliString::identity(n);
            p.0[i] = Pauli::X;
            for j in g.neighbors(i) {
                p.0[j] = Pauli::Z;
            }
            PauliTerm { coeff: -1.0, paulis: p }
        })
        .collect();
    HamiltonianSpec { qubits: n, terms }
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() {
        bail!(Domain, "inverse temperature must be finite, got {beta}");
    }
    if beta < 0.0 {
        bail!(Domain, "negative inverse temperature {beta} is not supported");
    }
    Ok(())
}

/// Energy eigenvalues and the ground-shifted Boltzmann weights `exp(-beta (E - E_min))`.
struct Boltzmann {
    eigenvectors: CMatrix,
    weights: Vec<f64>,
    ground_energy: f64,
}

fn boltzmann(h: &HamiltonianSpec, beta: f64, cfg: &Config) -> Result<Boltzmann> {
    check_beta(beta)?;
    let op = h.matrix(cfg)?;
    let eig = decompose_matrix(op.matrix(), cfg)?;
    // Non-increasing order, so the ground energy is last; the largest
    // exponent -beta E is therefore -beta E_min.
    let ground_energy = *eig.eigenvalues.last().expect("non-empty spectrum");
    let weights = eig.eigenvalues.iter().map(|&e| (-beta * (e - ground_energy)).exp()).collect();
    Ok(Boltzmann { eigenvectors: eig.eigenvectors, weights, ground_energy })
}

/// `exp(-beta H) / Tr exp(-beta H)`, via the eigendecomposition of `H`.
pub fn gibbs_state(h: &HamiltonianSpec, beta: f64, cfg: &Config) -> Result<DensityOperator> {
    let b = boltzmann(h, beta, cfg)?;
    let z: f64 = b.weights.iter().sum();
    let mut scaled = b.eigenvectors.clone();
    for (k, w) in b.weights.iter().enumerate() {
        scaled.column_mut(k).scale_mut(w / z);
    }
    let rho = hermitian_part(&(scaled * b.eigenvectors.adjoint()));
    DensityOperator::new(rho, cfg)
}

/// Thermal min-entropy in bits alongside its free-energy form.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThermalReport {
    pub beta: f64,
    /// `-log2` of the largest Gibbs eigenvalue.
    pub min_entropy_bits: f64,
    /// `log2 Z` with the ground energy shifted to zero.
    pub log2_partition_function: f64,
    /// `-beta F = ln Z` (nats) with the ground energy shifted to zero.
    pub free_energy_scaled: f64,
    /// Ground energy `E_min` of the unshifted Hamiltonian.
    pub ground_energy_shift: f64,
}

/// Shifts the spectrum so the ground energy is zero and reports
/// `H_min = log2 Z` together with `-beta F = ln Z`, cross-checked against the
/// largest Gibbs eigenvalue.
pub fn thermal_min_entropy(h: &HamiltonianSpec, beta: f64, cfg: &Config) -> Result<ThermalReport> {
    let b = boltzmann(h, beta, cfg)?;
    let z: f64 = b.weights.iter().sum();
    let probs: Vec<f64> = b.weights.iter().map(|w| w / z).collect();
    let min_entropy_bits = min_entropy_of_spectrum(&probs, h.qubits())?;
    let report = ThermalReport {
        beta,
        min_entropy_bits,
        log2_partition_function: z.log2(),
        free_energy_scaled: z.ln(),
        ground_energy_shift: b.ground_energy,
    };
    let gap = (report.min_entropy_bits - report.log2_partition_function).abs();
    if !(gap <= cfg.reconstruction_tol) {
        bail!(
            Inconsistent,
            "min-entropy {} disagrees with log2 Z {} at beta {beta}",
            report.min_entropy_bits,
            report.log2_partition_function
        );
    }
    Ok(report)
}

/// `N log2(1 + e^{-2 beta})`.
pub fn thermal_cluster_min_entropy_closed_form(vertices: usize, beta: f64) -> Result<f64> {
    if vertices == 0 {
        bail!(Domain, "a cluster needs at least one vertex");
    }
    check_beta(beta)?;
    Ok(vertices as f64 * (-2.0 * beta).exp().ln_1p() / core::f64::consts::LN_2)
}

/// Free-energy change `(delta_useful - delta_useless) kT ln 2` needed to turn a
/// state with deficit `delta_useless` into one with deficit `delta_useful`.
pub fn isothermal_work_bound(delta_useless: f64, delta_useful: f64, kt: f64) -> Result<f64> {
    if !(delta_useless >= 0.0 && delta_useful >= delta_useless) {
        bail!(Domain, "deficits must satisfy 0 <= {delta_useless} <= {delta_useful}");
    }
    if !(kt > 0.0 && kt.is_finite()) {
        bail!(Domain, "kT must be positive, got {kt}");
    }
    Ok((delta_useful - delta_useless) * kt * core::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        entropy::min_entropy,
        state::{max_abs_diff, maximally_mixed},
    };

    fn cfg() -> Config {
        Config::default()
    }

    fn minus_z() -> HamiltonianSpec {
        HamiltonianSpec::new(1, vec![PauliTerm { coeff: -1.0, paulis: "Z".parse().unwrap() }]).unwrap()
    }

    #[test]
    fn pauli_strings_parse_and_print() {
        let p: PauliString = "XZIY".parse().unwrap();
        assert_eq!(p.to_string(), "XZIY");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn y_matrix() {
        let y = PauliString(vec![Pauli::Y]).matrix();
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
    }

    #[test]
    fn term_length_is_checked() {
        let t = PauliTerm { coeff: 1.0, paulis: "XX".parse().unwrap() };
        assert!(matches!(HamiltonianSpec::new(3, vec![t]), Err(Error::Validation(_))));
    }

    #[test]
    fn infinite_temperature_is_maximally_mixed() {
        let h = cluster_hamiltonian(&ClusterGraph::path(3).unwrap());
        let rho = gibbs_state(&h, 0.0, &cfg()).unwrap();
        assert!(max_abs_diff(rho.matrix(), maximally_mixed(3, &cfg()).unwrap().matrix()) < 1e-14);
        let report = thermal_min_entropy(&h, 0.0, &cfg()).unwrap();
        assert!((report.min_entropy_bits - 3.0).abs() < 1e-12);
    }

    #[test]
    fn low_temperature_reaches_ground_state() {
        let rho = gibbs_state(&minus_z(), 50.0, &cfg()).unwrap();
        let ground = DensityOperator::basis_state(1, 0, &cfg()).unwrap();
        assert!(max_abs_diff(rho.matrix(), ground.matrix()) < 1e-9);
    }

    #[test]
    fn negative_beta_is_rejected() {
        assert!(matches!(gibbs_state(&minus_z(), -1.0, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(gibbs_state(&minus_z(), f64::NAN, &cfg()), Err(Error::Domain(_))));
    }

    #[test]
    fn single_spin_free_energy() {
        let report = thermal_min_entropy(&minus_z(), 1.0, &cfg()).unwrap();
        let z = 1.0 + (-2.0f64).exp();
        assert!((report.min_entropy_bits - z.log2()).abs() < 1e-12);
        assert!((report.min_entropy_bits - 0.18312).abs() < 1e-5);
        assert!((report.free_energy_scaled - z.ln()).abs() < 1e-12);
        assert!((report.ground_energy_shift + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_terms() {
        let two = cluster_hamiltonian(&ClusterGraph::path(2).unwrap());
        let labels: Vec<_> = two.terms().iter().map(|t| (t.coeff, t.paulis.to_string())).collect();
        assert_eq!(labels, vec![(-1.0, "XZ".into()), (-1.0, "ZX".into())]);

        let one = cluster_hamiltonian(&ClusterGraph::new(1, []).unwrap());
        assert_eq!(one.terms()[0].paulis.to_string(), "X");

        let three = cluster_hamiltonian(&ClusterGraph::path(3).unwrap());
        assert_eq!(three.terms()[1].paulis.to_string(), "ZXZ");
    }

    #[test]
    fn closed_form_limits() {
        assert_eq!(thermal_cluster_min_entropy_closed_form(7, 0.0).unwrap(), 7.0);
        assert!(thermal_cluster_min_entropy_closed_form(5, 40.0).unwrap() < 1e-10);
        assert!(thermal_cluster_min_entropy_closed_form(0, 1.0).is_err());
    }

    #[test]
    fn graph_validation() {
        assert!(ClusterGraph::new(3, [(1, 1)]).is_err());
        assert!(ClusterGraph::new(3, [(0, 3)]).is_err());
        let g = ClusterGraph::new(3, [(2, 0), (0, 2)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert!(!g.is_connected());
        assert_eq!(g.label(), "3:0-2");
    }

    #[test]
    fn connected_graph_counts() {
        // OEIS A001349.
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn work_bound() {
        assert_eq!(isothermal_work_bound(0.0, 0.0, 1.0).unwrap(), 0.0);
        assert!((isothermal_work_bound(0.0, 6.0, 1.0).unwrap() - 6.0 * 2f64.ln()).abs() < 1e-15);
        assert!((isothermal_work_bound(2.0, 10.0, 0.5).unwrap() - 2.772588722239781).abs() < 1e-12);
        assert!(isothermal_work_bound(3.0, 1.0, 1.0).is_err());
        assert!(isothermal_work_bound(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn gibbs_min_entropy_tracks_report() {
        let h = cluster_hamiltonian(&ClusterGraph::path(2).unwrap());
        let rho = gibbs_state(&h, 1.0, &cfg()).unwrap();
        let report = thermal_min_entropy(&h, 1.0, &cfg()).unwrap();
        assert!((min_entropy(&rho, &cfg()).unwrap() - report.min_entropy_bits).abs() < 1e-12);
    }
}
