//! Gate-level circuit IR and the exact statevector simulator used as the
//! oracle for every construction in the crate.
//!
//! Qubit 0 is the most significant bit of a basis index.

mod observable;
pub mod random;
mod sim;
mod text;

use std::fmt;

use thiserror::Error;

use crate::ring::RingError;

pub use observable::{Observable, Pauli};
pub use sim::{
    basis_state, expectation, gate_matrix, marginal_distribution, prep_vector, simulate,
    simulate_from, unitary_of, unitary_of_capped, StateVector, SIMULATE_WIDTH_CAP,
    UNITARY_WIDTH_CAP,
};
pub use text::{parse_circuit, serialize_circuit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("gate {gate} uses qubit {qubit} but the circuit has {width} qubits")]
    QubitOutOfRange {
        gate: String,
        qubit: usize,
        width: usize,
    },
    #[error("gate {0} repeats a qubit")]
    DuplicateQubit(String),
    #[error("{gate} expects {expected} qubits, got {got}")]
    Arity {
        gate: String,
        expected: String,
        got: usize,
    },
    #[error("gate {gate} is not in gate set {set}")]
    GateSetViolation { gate: String, set: GateSet },
    #[error("width {width} exceeds the cap of {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("cannot represent {0} in the chosen tower")]
    Unrepresentable(String),
    #[error("invalid preparation: {0}")]
    Preparation(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Gate kinds of the IR. Controls precede the target in [`Gate::qubits`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    H,
    CX,
    CZ,
    CS,
    CSdg,
    Swap,
    CCZ,
    CCX,
    /// `Z(sign * 2 pi / 2^k)` on one qubit.
    PhaseK {
        k: u32,
        sign: i8,
    },
    /// Phase `exp(sign * 2 pi i / 2^k)` applied when every listed qubit is 1.
    CPhaseK {
        k: u32,
        sign: i8,
    },
    /// X on the last qubit controlled on all the others.
    Mcx,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::H => "h",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::CS => "cs",
            GateKind::CSdg => "csdg",
            GateKind::Swap => "swap",
            GateKind::CCZ => "ccz",
            GateKind::CCX => "ccx",
            GateKind::PhaseK { sign, .. } if *sign < 0 => "phasekdg",
            GateKind::PhaseK { .. } => "phasek",
            GateKind::CPhaseK { sign, .. } if *sign < 0 => "cphasekdg",
            GateKind::CPhaseK { .. } => "cphasek",
            GateKind::Mcx => "mcx",
        }
    }

    /// Inclusive range of allowed qubit counts.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::H
            | GateKind::PhaseK { .. } => (1, 1),
            GateKind::CX | GateKind::CZ | GateKind::CS | GateKind::CSdg | GateKind::Swap => (2, 2),
            GateKind::CCZ | GateKind::CCX => (3, 3),
            GateKind::CPhaseK { .. } => (2, usize::MAX),
            GateKind::Mcx => (1, usize::MAX),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::CS => GateKind::CSdg,
            GateKind::CSdg => GateKind::CS,
            GateKind::PhaseK { k, sign } => GateKind::PhaseK { k, sign: -sign },
            GateKind::CPhaseK { k, sign } => GateKind::CPhaseK { k, sign: -sign },
            other => other,
        }
    }

    /// Depth `k` of the `2^k`-th root of unity the gate's matrix needs
    /// (`H` needs `sqrt 2`, reported as depth 3).
    pub fn root_depth(&self) -> u32 {
        match *self {
            GateKind::X | GateKind::CX | GateKind::CCX | GateKind::Mcx | GateKind::Swap => 0,
            GateKind::Z | GateKind::CZ | GateKind::CCZ => 1,
            GateKind::Y | GateKind::S | GateKind::Sdg | GateKind::CS | GateKind::CSdg => 2,
            GateKind::T | GateKind::Tdg | GateKind::H => 3,
            GateKind::PhaseK { k, .. } | GateKind::CPhaseK { k, .. } => k,
        }
    }

    pub fn is_t_like(&self) -> bool {
        matches!(self, GateKind::T | GateKind::Tdg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Result<Gate, CircuitError> {
        let (lo, hi) = kind.arity();
        if qubits.len() < lo || qubits.len() > hi {
            let expected = if lo == hi {
                lo.to_string()
            } else {
                format!("at least {lo}")
            };
            return Err(CircuitError::Arity {
                gate: kind.name().into(),
                expected,
                got: qubits.len(),
            });
        }
        if let GateKind::PhaseK { k, sign } | GateKind::CPhaseK { k, sign } = kind {
            if k == 0 || sign.abs() != 1 {
                return Err(CircuitError::Arity {
                    gate: kind.name().into(),
                    expected: "k >= 1 and sign +-1".into(),
                    got: qubits.len(),
                });
            }
        }
        let g = Gate { kind, qubits };
        for (i, q) in g.qubits.iter().enumerate() {
            if g.qubits[..i].contains(q) {
                return Err(CircuitError::DuplicateQubit(g.to_string()));
            }
        }
        Ok(g)
    }

    fn make(kind: GateKind, qubits: Vec<usize>) -> Gate {
        Gate::new(kind, qubits).expect("valid gate")
    }

    pub fn x(q: usize) -> Gate {
        Gate::make(GateKind::X, vec![q])
    }
    pub fn y(q: usize) -> Gate {
        Gate::make(GateKind::Y, vec![q])
    }
    pub fn z(q: usize) -> Gate {
        Gate::make(GateKind::Z, vec![q])
    }
    pub fn s(q: usize) -> Gate {
        Gate::make(GateKind::S, vec![q])
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::make(GateKind::Sdg, vec![q])
    }
    pub fn t(q: usize) -> Gate {
        Gate::make(GateKind::T, vec![q])
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::make(GateKind::Tdg, vec![q])
    }
    pub fn h(q: usize) -> Gate {
        Gate::make(GateKind::H, vec![q])
    }
    pub fn cx(c: usize, t: usize) -> Gate {
        Gate::make(GateKind::CX, vec![c, t])
    }
    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::make(GateKind::CZ, vec![a, b])
    }
    pub fn cs(a: usize, b: usize) -> Gate {
        Gate::make(GateKind::CS, vec![a, b])
    }
    pub fn csdg(a: usize, b: usize) -> Gate {
        Gate::make(GateKind::CSdg, vec![a, b])
    }
    pub fn swap(a: usize, b: usize) -> Gate {
        Gate::make(GateKind::Swap, vec![a, b])
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Gate {
        Gate::make(GateKind::CCZ, vec![a, b, c])
    }
    pub fn ccx(a: usize, b: usize, t: usize) -> Gate {
        Gate::make(GateKind::CCX, vec![a, b, t])
    }
    pub fn phase_k(k: u32, sign: i8, q: usize) -> Gate {
        Gate::make(GateKind::PhaseK { k, sign }, vec![q])
    }

    /// Phase on the all-ones subspace of `qubits`. A single qubit gives
    /// [`GateKind::PhaseK`].
    pub fn cphase_k(k: u32, sign: i8, qubits: Vec<usize>) -> Gate {
        if qubits.len() == 1 {
            Gate::phase_k(k, sign, qubits[0])
        } else {
            Gate::make(GateKind::CPhaseK { k, sign }, qubits)
        }
    }

    /// Phase `exp(sign * 2 pi i / 2^k)` on the all-ones subspace of `qubits`,
    /// using the named gate (Z, S, T, CZ, CS, CCZ, ...) when one exists.
    pub fn phase_on(k: u32, sign: i8, qubits: Vec<usize>) -> Gate {
        let kind = match (qubits.len(), k, sign) {
            (1, 1, _) => GateKind::Z,
            (1, 2, 1) => GateKind::S,
            (1, 2, _) => GateKind::Sdg,
            (1, 3, 1) => GateKind::T,
            (1, 3, _) => GateKind::Tdg,
            (1, _, _) => GateKind::PhaseK { k, sign },
            (2, 1, _) => GateKind::CZ,
            (2, 2, 1) => GateKind::CS,
            (2, 2, _) => GateKind::CSdg,
            (3, 1, _) => GateKind::CCZ,
            _ => GateKind::CPhaseK { k, sign },
        };
        Gate::make(kind, qubits)
    }

    /// Multi-controlled X, canonicalised to X, CX or CCX for small control counts.
    pub fn mcx(controls: &[usize], target: usize) -> Gate {
        let mut q = controls.to_vec();
        q.push(target);
        let kind = match controls.len() {
            0 => GateKind::X,
            1 => GateKind::CX,
            2 => GateKind::CCX,
            _ => GateKind::Mcx,
        };
        Gate::make(kind, q)
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            qubits: self.qubits.clone(),
        }
    }

    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let GateKind::PhaseK { k, .. } | GateKind::CPhaseK { k, .. } = self.kind {
            write!(f, " {k}")?;
        }
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Named gate sets used for linting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateSet {
    CliffordT,
    CliffordCs,
    ToffoliH,
}

impl GateSet {
    pub fn name(&self) -> &'static str {
        match self {
            GateSet::CliffordT => "clifford+t",
            GateSet::CliffordCs => "clifford+cs",
            GateSet::ToffoliH => "toffoli+h",
        }
    }

    pub fn from_name(s: &str) -> Option<GateSet> {
        match s {
            "clifford+t" => Some(GateSet::CliffordT),
            "clifford+cs" | "cs+h" => Some(GateSet::CliffordCs),
            "toffoli+h" => Some(GateSet::ToffoliH),
            _ => None,
        }
    }

    pub fn contains(&self, kind: GateKind) -> bool {
        use GateKind::*;
        let clifford = matches!(kind, X | Y | Z | S | Sdg | H | CX | CZ | Swap);
        match self {
            GateSet::CliffordT => clifford || matches!(kind, T | Tdg),
            GateSet::CliffordCs => clifford || matches!(kind, CS | CSdg),
            GateSet::ToffoliH => matches!(kind, CCX | H | X | CX | Swap),
        }
    }
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial single-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatePrep {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
    /// `T|+>`.
    T,
    /// `Z(sign * 2 pi / 2^k)|+>`.
    Zk {
        k: u32,
        sign: i8,
    },
}

impl StatePrep {
    pub fn tag(&self) -> String {
        match self {
            StatePrep::Zero => "0".into(),
            StatePrep::One => "1".into(),
            StatePrep::Plus => "+".into(),
            StatePrep::Minus => "-".into(),
            StatePrep::PlusI => "i".into(),
            StatePrep::MinusI => "-i".into(),
            StatePrep::T => "T".into(),
            StatePrep::Zk { k, sign } if *sign < 0 => format!("zkdg {k}"),
            StatePrep::Zk { k, .. } => format!("zk {k}"),
        }
    }

    /// Clifford-hierarchy gates that prepare this state from `|0>` on qubit `q`.
    pub fn to_gates(&self, q: usize) -> Vec<Gate> {
        match *self {
            StatePrep::Zero => vec![],
            StatePrep::One => vec![Gate::x(q)],
            StatePrep::Plus => vec![Gate::h(q)],
            StatePrep::Minus => vec![Gate::x(q), Gate::h(q)],
            StatePrep::PlusI => vec![Gate::h(q), Gate::s(q)],
            StatePrep::MinusI => vec![Gate::h(q), Gate::sdg(q)],
            StatePrep::T => vec![Gate::h(q), Gate::t(q)],
            StatePrep::Zk { k, sign } => vec![Gate::h(q), Gate::phase_k(k, sign, q)],
        }
    }

    pub fn is_stabilizer(&self) -> bool {
        match self {
            StatePrep::T => false,
            StatePrep::Zk { k, .. } => *k <= 2,
            _ => true,
        }
    }

    pub fn root_depth(&self) -> u32 {
        match *self {
            StatePrep::Zero | StatePrep::One => 0,
            StatePrep::Zk { k, .. } => k.max(3),
            _ => 3,
        }
    }
}

/// A gate-level circuit with its input preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    preps: Vec<StatePrep>,
    ccz_blocks: Vec<[usize; 3]>,
    gates: Vec<Gate>,
    gateset: Option<GateSet>,
}

impl Circuit {
    pub fn new(width: usize) -> Circuit {
        Circuit {
            width,
            preps: vec![StatePrep::Zero; width],
            ccz_blocks: Vec::new(),
            gates: Vec::new(),
            gateset: None,
        }
    }

    pub fn from_gates(width: usize, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.try_push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn preps(&self) -> &[StatePrep] {
        &self.preps
    }

    pub fn ccz_blocks(&self) -> &[[usize; 3]] {
        &self.ccz_blocks
    }

    pub fn gateset(&self) -> Option<GateSet> {
        self.gateset
    }

    pub fn set_gateset(&mut self, gs: Option<GateSet>) -> Result<(), CircuitError> {
        if let Some(set) = gs {
            if let Some(g) = self.gates.iter().find(|g| !set.contains(g.kind)) {
                return Err(CircuitError::GateSetViolation {
                    gate: g.to_string(),
                    set,
                });
            }
        }
        self.gateset = gs;
        Ok(())
    }

    fn check_gate(&self, g: &Gate) -> Result<(), CircuitError> {
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.width) {
            return Err(CircuitError::QubitOutOfRange {
                gate: g.to_string(),
                qubit: q,
                width: self.width,
            });
        }
        if let Some(set) = self.gateset {
            if !set.contains(g.kind) {
                return Err(CircuitError::GateSetViolation {
                    gate: g.to_string(),
                    set,
                });
            }
        }
        Ok(())
    }

    pub fn try_push(&mut self, g: Gate) -> Result<&mut Self, CircuitError> {
        self.check_gate(&g)?;
        self.gates.push(g);
        Ok(self)
    }

    /// Appends a gate; panics if it does not fit the circuit.
    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.try_push(g).expect("gate does not fit circuit")
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> &mut Self {
        for g in gates {
            self.push(g);
        }
        self
    }

    pub fn set_prep(&mut self, q: usize, p: StatePrep) -> Result<&mut Self, CircuitError> {
        if q >= self.width {
            return Err(CircuitError::Preparation(format!("qubit {q} out of range")));
        }
        if self.ccz_blocks.iter().any(|b| b.contains(&q)) {
            return Err(CircuitError::Preparation(format!(
                "qubit {q} is already part of a ccz block"
            )));
        }
        self.preps[q] = p;
        Ok(self)
    }

    /// Prepares `CCZ|+++>` on three fresh qubits.
    pub fn add_ccz_block(&mut self, qs: [usize; 3]) -> Result<&mut Self, CircuitError> {
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.width || qs[..i].contains(&q) {
                return Err(CircuitError::Preparation(format!("bad ccz block {qs:?}")));
            }
            if self.preps[q] != StatePrep::Zero || self.ccz_blocks.iter().any(|b| b.contains(&q)) {
                return Err(CircuitError::Preparation(format!(
                    "qubit {q} already has a preparation"
                )));
            }
        }
        for &q in &qs {
            self.preps[q] = StatePrep::Plus;
        }
        self.ccz_blocks.push(qs);
        Ok(self)
    }

    /// Same circuit with `extra` idle `|0>` qubits appended at the end.
    pub fn widened(&self, extra: usize) -> Circuit {
        let mut c = self.clone();
        c.width += extra;
        c.preps.resize(c.width, StatePrep::Zero);
        c
    }

    /// Appends the gates of `other`, with its qubit `q` mapped to `map[q]`.
    pub fn append_mapped(
        &mut self,
        other: &Circuit,
        map: &[usize],
    ) -> Result<&mut Self, CircuitError> {
        if map.len() != other.width {
            return Err(CircuitError::WidthMismatch {
                expected: other.width,
                got: map.len(),
            });
        }
        for g in &other.gates {
            self.try_push(g.relabel(|q| map[q]))?;
        }
        Ok(self)
    }

    /// Reversed circuit of inverse gates, preparations dropped.
    pub fn inverse(&self) -> Circuit {
        let mut c = Circuit::new(self.width);
        c.gates = self.gates.iter().rev().map(Gate::inverse).collect();
        c.gateset = self.gateset;
        c
    }

    /// Same width and preparation, no gates and no gate-set tag.
    pub fn without_gates(&self) -> Circuit {
        let mut c = self.clone();
        c.gates.clear();
        c.gateset = None;
        c
    }

    /// Same gates, every qubit in `|0>`.
    pub fn without_preps(&self) -> Circuit {
        let mut c = self.clone();
        c.preps = vec![StatePrep::Zero; self.width];
        c.ccz_blocks.clear();
        c
    }

    /// Replaces the preparation by explicit gates at the front; CCZ blocks
    /// become `H H H` followed by a `ccz` gate.
    pub fn preps_as_gates(&self) -> Circuit {
        let mut c = Circuit::new(self.width);
        for (q, p) in self.preps.iter().enumerate() {
            c.extend(p.to_gates(q));
        }
        for b in &self.ccz_blocks {
            c.push(Gate::ccz(b[0], b[1], b[2]));
        }
        c.gates.extend(self.gates.iter().cloned());
        c
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_t_like()).count()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Deepest root of unity needed to simulate the circuit exactly.
    pub fn root_depth(&self) -> u32 {
        let g = self
            .gates
            .iter()
            .map(|g| g.kind.root_depth())
            .max()
            .unwrap_or(0);
        let p = self
            .preps
            .iter()
            .map(StatePrep::root_depth)
            .max()
            .unwrap_or(0);
        g.max(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_errors() {
        assert!(matches!(
            Gate::new(GateKind::CS, vec![0]),
            Err(CircuitError::Arity { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::CX, vec![1, 1]),
            Err(CircuitError::DuplicateQubit(_))
        ));
        assert!(Gate::new(GateKind::PhaseK { k: 0, sign: 1 }, vec![0]).is_err());
    }

    #[test]
    fn gateset_lint() {
        let mut c = Circuit::new(2);
        c.set_gateset(Some(GateSet::CliffordT)).unwrap();
        c.push(Gate::t(0));
        assert!(c.try_push(Gate::cs(0, 1)).is_err());
        let mut d = Circuit::new(2);
        d.push(Gate::cs(0, 1));
        assert!(d.set_gateset(Some(GateSet::CliffordT)).is_err());
        assert!(d.try_push(Gate::x(2)).is_err());
    }

    #[test]
    fn inverse_reverses() {
        let mut c = Circuit::new(2);
        c.push(Gate::t(0)).push(Gate::cs(0, 1)).push(Gate::h(1));
        let inv = c.inverse();
        assert_eq!(inv.gates(), &[Gate::h(1), Gate::csdg(0, 1), Gate::tdg(0)]);
    }

    #[test]
    fn mcx_canonical_forms() {
        assert_eq!(Gate::mcx(&[], 3).kind, GateKind::X);
        assert_eq!(Gate::mcx(&[1], 3).kind, GateKind::CX);
        assert_eq!(Gate::mcx(&[0, 1], 3).kind, GateKind::CCX);
        assert_eq!(Gate::mcx(&[0, 1, 2], 3).kind, GateKind::Mcx);
    }
}
