//! JSON schemas for instance files.
//!
//! Every schema rejects unknown fields. Parsing happens in two steps: serde
//! checks the shape (errors carry a line and column), then the `to_*`
//! conversions run the library's own validation (errors name the field).

use std::{collections::BTreeMap, fs, path::Path};

use mixedq_core::{
    dqc1k::{Dqc1kCircuit, OutcomeDistribution},
    gate::Gate,
    infotheory::BipartiteModel,
    mbqc::{povm_from_matrices, ResourcePartition, SolutionFamily},
    thermal::{ClusterGraph, HamiltonianSpec, PauliTerm},
    CMatrix, Config, DensityOperator, QubitOperator, UnitaryOperator, C64,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::{LabError, Result};

/// Reads and parses a JSON file; content errors are reported against `path`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io { path: path.to_path_buf(), source })?;
    parse_json(&text, &path.display().to_string())
}

pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| LabError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Wraps a library rejection of an already parsed file.
pub fn invalid(origin: &str) -> impl Fn(String) -> LabError + '_ {
    move |message| LabError::Input { path: origin.to_string(), message }
}

fn at<T>(field: &str, r: mixedq_core::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{field}: {e}"))
}

/// A `2^q x 2^q` complex matrix with row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub qubits: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    /// Panics if `m` is not square with a power-of-two side.
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        assert!(dim.is_power_of_two() && m.ncols() == dim, "not a qubit operator");
        let mut re = Vec::with_capacity(dim * dim);
        let mut im = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        Self { qubits: dim.trailing_zeros() as usize, re, im }
    }

    pub fn to_matrix(&self, cfg: &Config) -> std::result::Result<CMatrix, String> {
        if self.qubits > cfg.qubit_cap {
            return Err(format!("qubits: {} exceeds the cap of {}", self.qubits, cfg.qubit_cap));
        }
        let dim = 1usize << self.qubits;
        for (name, v) in [("re", &self.re), ("im", &self.im)] {
            if v.len() != dim * dim {
                return Err(format!(
                    "{name}: expected {} entries for {} qubits, got {}",
                    dim * dim,
                    self.qubits,
                    v.len()
                ));
            }
        }
        Ok(CMatrix::from_fn(dim, dim, |r, c| C64::new(self.re[r * dim + c], self.im[r * dim + c])))
    }

    pub fn to_density(&self, cfg: &Config) -> std::result::Result<DensityOperator, String> {
        at("density matrix", DensityOperator::from_matrix(self.to_matrix(cfg)?, cfg))
    }

    pub fn to_unitary(&self, cfg: &Config) -> std::result::Result<UnitaryOperator, String> {
        at("unitary", UnitaryOperator::from_matrix(self.to_matrix(cfg)?, cfg))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: f64,
    pub paulis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianJson {
    pub qubits: usize,
    pub terms: Vec<TermJson>,
}

impl HamiltonianJson {
    pub fn from_spec(h: &HamiltonianSpec) -> Self {
        Self {
            qubits: h.qubits(),
            terms: h.terms().iter().map(|t| TermJson { coeff: t.coeff, paulis: t.paulis.to_string() }).collect(),
        }
    }

    pub fn to_spec(&self, cfg: &Config) -> std::result::Result<HamiltonianSpec, String> {
        if self.qubits > cfg.qubit_cap {
            return Err(format!("qubits: {} exceeds the cap of {}", self.qubits, cfg.qubit_cap));
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                Ok(PauliTerm { coeff: t.coeff, paulis: at(&format!("terms[{i}].paulis"), t.paulis.parse())? })
            })
            .collect::<std::result::Result<Vec<_>, String>>()?;
        at("terms", HamiltonianSpec::new(self.qubits, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn from_graph(g: &ClusterGraph) -> Self {
        Self { vertices: g.vertices(), edges: g.edges().map(|(a, b)| [a, b]).collect() }
    }

    pub fn to_graph(&self, cfg: &Config) -> std::result::Result<ClusterGraph, String> {
        if self.vertices > cfg.qubit_cap {
            return Err(format!("vertices: {} exceeds the qubit cap of {}", self.vertices, cfg.qubit_cap));
        }
        at("edges", ClusterGraph::new(self.vertices, self.edges.iter().map(|&[a, b]| (a, b))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateJson {
    pub name: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
}

impl GateJson {
    pub fn from_gate(g: &Gate) -> Self {
        let (name, qubits, params) = g.describe();
        Self { name, qubits, params }
    }
}

/// `{n, k, gates}` or `{n, k, unitary}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitJson {
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<Vec<GateJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixJson>,
}

impl CircuitJson {
    pub fn to_circuit(&self, cfg: &Config) -> std::result::Result<Dqc1kCircuit, String> {
        if self.n + 1 > cfg.qubit_cap {
            return Err(format!("n: {} + 1 qubits exceeds the cap of {}", self.n, cfg.qubit_cap));
        }
        match (&self.gates, &self.unitary) {
            (Some(gates), None) => {
                let gates = gates
                    .iter()
                    .enumerate()
                    .map(|(i, g)| at(&format!("gates[{i}]"), Gate::from_name(&g.name, &g.qubits, &g.params)))
                    .collect::<std::result::Result<Vec<_>, String>>()?;
                at("gates", Dqc1kCircuit::from_gates(self.n, self.k, &gates, cfg))
            }
            (None, Some(u)) => at("unitary", Dqc1kCircuit::from_unitary(self.n, self.k, u.to_unitary(cfg)?)),
            _ => Err("exactly one of `gates` and `unitary` must be present".into()),
        }
    }
}

/// `{"0101": probability, ...}` keyed by zero-padded bit strings.
pub fn distribution_json(d: &OutcomeDistribution) -> BTreeMap<String, f64> {
    d.iter().map(|(z, p)| (d.bitstring(z), p)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub probs: Vec<f64>,
    pub unitaries: Vec<MatrixJson>,
    pub bob_state: MatrixJson,
}

impl ModelJson {
    pub fn to_model(&self, cfg: &Config) -> std::result::Result<BipartiteModel, String> {
        let bob = self.bob_state.to_density(cfg).map_err(|e| format!("bob_state: {e}"))?;
        let unitaries = self
            .unitaries
            .iter()
            .enumerate()
            .map(|(i, u)| u.to_unitary(cfg).map_err(|e| format!("unitaries[{i}]: {e}")))
            .collect::<std::result::Result<Vec<_>, String>>()?;
        at("model", BipartiteModel::new(self.probs.clone(), unitaries, bob, cfg))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub total_qubits: usize,
    /// Output region `O`; the first entry is the most significant readout bit.
    pub output_qubits: Vec<usize>,
}

/// A resource state, its partition, the POVM on `C` and the per-outcome solution sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbqcInstanceJson {
    pub state: MatrixJson,
    pub partition: PartitionJson,
    pub povm: Vec<MatrixJson>,
    pub solution_family: Vec<Vec<u64>>,
}

pub struct MbqcInstance {
    pub state: DensityOperator,
    pub partition: ResourcePartition,
    pub povm: mixedq_core::mbqc::Povm,
    pub solutions: SolutionFamily,
}

impl MbqcInstanceJson {
    pub fn to_instance(&self, cfg: &Config) -> std::result::Result<MbqcInstance, String> {
        let state = self.state.to_density(cfg).map_err(|e| format!("state: {e}"))?;
        let partition =
            at("partition", ResourcePartition::new(self.partition.total_qubits, self.partition.output_qubits.clone()))?;
        let matrices = self
            .povm
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_matrix(cfg).map_err(|e| format!("povm[{i}]: {e}")))
            .collect::<std::result::Result<Vec<_>, String>>()?;
        let povm = at("povm", povm_from_matrices(partition.control_len(), matrices, cfg))?;
        let solutions =
            at("solution_family", SolutionFamily::new(partition.output_len(), self.solution_family.clone()))?;
        Ok(MbqcInstance { state, partition, povm, solutions })
    }
}

/// A search problem over `n`-bit strings whose verifier accepts exactly `solutions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedProblemJson {
    pub n: u32,
    pub solutions: Vec<u64>,
}

impl PlantedProblemJson {
    /// Sorted, deduplicated solution set after range checks.
    pub fn solution_set(&self) -> std::result::Result<Vec<u64>, String> {
        if self.n == 0 || self.n > 63 {
            return Err(format!("n: must lie in 1..=63, got {}", self.n));
        }
        if let Some(s) = self.solutions.iter().find(|&&s| s >> self.n != 0) {
            return Err(format!("solutions: {s} does not fit in {} bits", self.n));
        }
        let mut set = self.solutions.clone();
        set.sort_unstable();
        set.dedup();
        Ok(set)
    }
}
