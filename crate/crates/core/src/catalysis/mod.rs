//! Catalysis gadgets, transpiler passes and encodings.
//!
//! Every construction here is checked against the exact simulator; the
//! `verify_*` functions return a [`VerificationReport`] instead of panicking
//! so callers (tests, the CLI) can print and aggregate outcomes.

mod adder;
mod embedding;
mod gadgets;
mod mixed;
mod real;

use std::fmt;

use thiserror::Error;

use crate::circuit::{basis_state, simulate_from, Circuit, CircuitError, StateVector};
use crate::ring::{RingElement, RingError, Tower};

pub use adder::{
    adder, catalyst_bank, controlled_decrementer, subtractor, synth_phase_pass, synth_small_phase,
    verify_adder_catalysis, verify_adder_catalysis_with_bank, verify_synth_phase_pass,
    verify_synth_small_phase, ADDER_VERIFY_MAX,
};
pub use embedding::{
    apply_embedding, real_embedding, t_embedding, transpile_t_to_cs, verify_embedding,
    CatalyticEmbedding,
};
pub use gadgets::{
    ccz_to_3t, controlled_phase_gadget, convert_ccz_blocks, phase_gadget, t_gadget,
    verify_ccz_to_3t, verify_controlled_phase_gadget, verify_convert_ccz_blocks,
    verify_phase_gadget,
};
pub use mixed::{decompose_t_dm, decompose_t_dm_literal, MixedDecomposition, MixedTerm};
pub use real::{
    compare_with_toffoli, real_encode_circuit, real_encode_gate, real_encode_matrix,
    ToffoliComparison,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalysisError {
    #[error("gate {gate} is not supported by {pass}")]
    UnsupportedGate { gate: String, pass: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is not unitary")]
    NonUnitary,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Outcome of an exact verification sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    /// Human-readable descriptions of failing inputs.
    pub failures: Vec<String>,
    /// Global phase relating output and target when the check allows one.
    pub global_phase: Option<RingElement>,
    pub notes: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            passed: true,
            checks: 0,
            failures: Vec::new(),
            global_phase: None,
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(failure());
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    /// `key=value` lines for scripts.
    pub fn machine_lines(&self) -> String {
        let mut out = format!(
            "name={}\npassed={}\nchecks={}\nfailures={}\n",
            self.name,
            self.passed,
            self.checks,
            self.failures.len()
        );
        if let Some(p) = &self.global_phase {
            out.push_str(&format!("global_phase={p}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        writeln!(f, "{status} {} ({} checks)", self.name, self.checks)?;
        if let Some(p) = &self.global_phase {
            writeln!(f, "  global phase: {p}")?;
        }
        for (k, v) in &self.notes {
            writeln!(f, "  {k}: {v}")?;
        }
        for fail in self.failures.iter().take(8) {
            writeln!(f, "  failing input: {fail}")?;
        }
        if self.failures.len() > 8 {
            writeln!(f, "  ... {} more", self.failures.len() - 8)?;
        }
        Ok(())
    }
}

/// Checks `gadget (v (x) c) = (U v) (x) c` for every data basis state `v`,
/// where data qubits come first and the catalyst occupies the last qubits.
pub fn verify_catalytic_contract(
    name: &str,
    gadget: &Circuit,
    target: &Circuit,
    catalyst: &StateVector,
    tower: &Tower,
) -> Result<VerificationReport, CatalysisError> {
    let nd = target.width();
    if gadget.width() != nd + catalyst.width() {
        return Err(CircuitError::WidthMismatch {
            expected: nd + catalyst.width(),
            got: gadget.width(),
        }
        .into());
    }
    let mut report = VerificationReport::new(name);
    for v in 0..(1usize << nd) {
        let input = basis_state(tower, nd, v).kron(catalyst);
        let got = simulate_from(gadget, input)?;
        let want = simulate_from(target, basis_state(tower, nd, v))?.kron(catalyst);
        report.record(got == want, || format!("data basis |{v:0nd$b}>"));
    }
    report.global_phase = Some(tower.one());
    Ok(report)
}
