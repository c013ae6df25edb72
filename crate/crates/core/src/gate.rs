//! A small gate vocabulary and a dense unitary builder.

use alloc::{format, string::String, vec::Vec};
use core::f64::consts::FRAC_1_SQRT_2;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{
    error::bail,
    state::{CMatrix, QubitOperator, UnitaryOperator, C64},
    Config, Error, Result,
};

pub type Mat2 = [[C64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleQubitGate {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rz(f64),
    Rx(f64),
}

impl SingleQubitGate {
    pub fn matrix(self) -> Mat2 {
        let c = |re, im| C64::new(re, im);
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        match self {
            Self::X => [[o, l], [l, o]],
            Self::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
            Self::Z => [[l, o], [o, c(-1.0, 0.0)]],
            Self::H => {
                let h = c(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Self::S => [[l, o], [o, c(0.0, 1.0)]],
            Self::T => [[l, o], [o, c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]],
            Self::Rz(theta) => {
                let half = theta / 2.0;
                [[c(half.cos(), -half.sin()), o], [o, c(half.cos(), half.sin())]]
            }
            Self::Rx(theta) => {
                let half = theta / 2.0;
                let (cs, sn) = (c(half.cos(), 0.0), c(0.0, -half.sin()));
                [[cs, sn], [sn, cs]]
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::H => "H",
            Self::S => "S",
            Self::T => "T",
            Self::Rz(_) => "RZ",
            Self::Rx(_) => "RX",
        }
    }

    fn params(self) -> Option<f64> {
        match self {
            Self::Rz(t) | Self::Rx(t) => Some(t),
            _ => None,
        }
    }

    fn from_name(name: &str, params: &[f64]) -> Result<Option<Self>> {
        let angle = || -> Result<f64> {
            match params {
                [theta] if theta.is_finite() => Ok(*theta),
                _ => bail!(Validation, "gate {name} takes exactly one finite angle"),
            }
        };
        let fixed = |g| -> Result<Option<Self>> {
            if !params.is_empty() {
                bail!(Validation, "gate {name} takes no parameters");
            }
            Ok(Some(g))
        };
        match name {
            "X" => fixed(Self::X),
            "Y" => fixed(Self::Y),
            "Z" => fixed(Self::Z),
            "H" => fixed(Self::H),
            "S" => fixed(Self::S),
            "T" => fixed(Self::T),
            "RZ" => Ok(Some(Self::Rz(angle()?))),
            "RX" => Ok(Some(Self::Rx(angle()?))),
            _ => Ok(None),
        }
    }
}

/// One gate of a circuit. `CNOT` and `CZ` are [`Gate::Controlled`] with `X` / `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Single { gate: SingleQubitGate, target: usize },
    Controlled { gate: SingleQubitGate, control: usize, target: usize },
}

impl Gate {
    pub fn single(gate: SingleQubitGate, target: usize) -> Self {
        Self::Single { gate, target }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::Controlled { gate: SingleQubitGate::X, control, target }
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self::Controlled { gate: SingleQubitGate::Z, control, target }
    }

    /// Parses a gate by name: single-qubit `X Y Z H S T RZ RX`, `CNOT`, and
    /// controlled forms written as `C` followed by a single-qubit name
    /// (`CX`, `CZ`, `CRZ`, ...). Controlled gates list the control first.
    pub fn from_name(name: &str, qubits: &[usize], params: &[f64]) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        let name = upper.as_str();
        if let Some(gate) = SingleQubitGate::from_name(name, params)? {
            let [target] = qubits else {
                bail!(Validation, "gate {name} acts on one qubit, got {}", qubits.len());
            };
            return Ok(Self::single(gate, *target));
        }
        let base = match name {
            "CNOT" => Some("X"),
            _ => name.strip_prefix('C'),
        };
        if let Some(gate) = base.map(|b| SingleQubitGate::from_name(b, params)).transpose()?.flatten() {
            let [control, target] = qubits else {
                bail!(Validation, "gate {name} acts on two qubits, got {}", qubits.len());
            };
            if control == target {
                bail!(Validation, "gate {name} has control equal to target ({control})");
            }
            return Ok(Self::Controlled { gate, control: *control, target: *target });
        }
        bail!(Validation, "unknown gate {name:?}")
    }

    /// Name, qubits and parameters in the form accepted by [`Gate::from_name`].
    pub fn describe(&self) -> (String, Vec<usize>, Vec<f64>) {
        match *self {
            Self::Single { gate, target } => {
                (gate.name().into(), alloc::vec![target], gate.params().into_iter().collect())
            }
            Self::Controlled { gate, control, target } => {
                (format!("C{}", gate.name()), alloc::vec![control, target], gate.params().into_iter().collect())
            }
        }
    }

    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Self::Single { target, .. } => (target, None),
            Self::Controlled { control, target, .. } => (target, Some(control)),
        }
    }
}

/// Left-multiplies `m` (a `q`-qubit operator) by `gate` acting on `target`,
/// optionally conditioned on `control` being 1.
fn apply_rows(m: &mut CMatrix, q: usize, gate: &Mat2, target: usize, control: Option<usize>) {
    let tbit = 1usize << (q - 1 - target);
    let cbit = control.map(|c| 1usize << (q - 1 - c));
    let dim = m.nrows();
    for r0 in (0..dim).filter(|r| r & tbit == 0) {
        if cbit.is_some_and(|c| r0 & c == 0) {
            continue;
        }
        let r1 = r0 | tbit;
        for col in 0..m.ncols() {
            let (a, b) = (m[(r0, col)], m[(r1, col)]);
            m[(r0, col)] = gate[0][0] * a + gate[0][1] * b;
            m[(r1, col)] = gate[1][0] * a + gate[1][1] * b;
        }
    }
}

/// Product of the gates in order (the first gate acts first).
pub fn circuit_unitary(qubits: usize, gates: &[Gate], cfg: &Config) -> Result<UnitaryOperator> {
    let id = UnitaryOperator::identity(qubits, cfg)?;
    let mut m = id.into_matrix();
    for (i, g) in gates.iter().enumerate() {
        let (target, control) = g.qubits();
        for q in core::iter::once(target).chain(control) {
            if q >= qubits {
                return Err(Error::Validation(format!("gate {i} touches qubit {q} of a {qubits}-qubit register")));
            }
        }
        let gate = match *g {
            Gate::Single { gate, .. } | Gate::Controlled { gate, .. } => gate.matrix(),
        };
        apply_rows(&mut m, qubits, &gate, target, control);
    }
    <UnitaryOperator as QubitOperator>::from_matrix(m, cfg)
}
