//! Numerical tolerances and capacity limits shared by every module.

/// Default hard cap on the number of qubits of any dense operator.
pub const DEFAULT_QUBIT_CAP: usize = 12;

/// Single configuration record for tolerances and the qubit cap.
///
/// Every constructor and operation that validates its input reads its
/// thresholds from here, so platform-dependent floating-point variance can
/// be absorbed in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Config {
    /// Largest qubit count any operator may have.
    pub qubit_cap: usize,
    /// Hermiticity, trace, positivity and unitarity checks (max-abs).
    pub validation_tol: f64,
    /// Spectral reconstruction, POVM completeness and spectrum comparisons.
    pub reconstruction_tol: f64,
    /// Eigenvalues below this are treated as exactly zero before taking logs.
    pub eigen_floor: f64,
}

impl Config {
    pub const DEFAULT: Config =
        Config { qubit_cap: DEFAULT_QUBIT_CAP, validation_tol: 1e-10, reconstruction_tol: 1e-9, eigen_floor: 1e-12 };

    pub fn with_qubit_cap(mut self, cap: usize) -> Self {
        self.qubit_cap = cap;
        self
    }

    pub(crate) fn check_qubits(&self, qubits: usize) -> crate::Result<()> {
        if qubits > self.qubit_cap {
            return Err(crate::Error::Capacity { qubits, cap: self.qubit_cap });
        }
        Ok(())
    }
}

impl Default for Config {
    fn default() -> Self {
        Self::DEFAULT
    }
}
