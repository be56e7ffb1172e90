use std::collections::BTreeMap;

use super::gadgets::t_gadget;
use super::real::real_encode_gate;
use super::{verify_catalytic_contract, CatalysisError, VerificationReport};
use crate::circuit::{prep_vector, Circuit, Gate, GateKind, GateSet, StatePrep};
use crate::ring::Tower;

/// A gate-by-gate catalytic embedding `(phi, |c>)`.
///
/// Templates act on `arity + catalyst.len()` qubits: the gate's own qubits
/// first, then the catalyst qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalyticEmbedding {
    pub name: String,
    pub catalyst: Vec<StatePrep>,
    pub gadget_map: BTreeMap<GateKind, Circuit>,
    /// Gates shared by both gate sets, copied unchanged.
    pub passthrough: Vec<GateKind>,
    pub source_gateset: GateSet,
    pub target_gateset: GateSet,
}

impl CatalyticEmbedding {
    pub fn catalyst_width(&self) -> usize {
        self.catalyst.len()
    }
}

/// `T -> CX, CS` with a `|T>` catalyst; `T^dagger` gets an extra `S^dagger`.
pub fn t_embedding() -> CatalyticEmbedding {
    let t = t_gadget().without_preps();
    let mut tdg = t.clone();
    tdg.push(Gate::sdg(0));
    CatalyticEmbedding {
        name: "t-to-cs".into(),
        catalyst: vec![StatePrep::T],
        gadget_map: BTreeMap::from([(GateKind::T, t), (GateKind::Tdg, tdg)]),
        passthrough: vec![
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::H,
            GateKind::CX,
            GateKind::CZ,
            GateKind::Swap,
        ],
        source_gateset: GateSet::CliffordT,
        target_gateset: GateSet::CliffordCs,
    }
}

/// The real encoding read as a catalytic embedding with catalyst `|-i>`.
pub fn real_embedding() -> CatalyticEmbedding {
    let kinds = [
        (GateKind::X, 1),
        (GateKind::Y, 1),
        (GateKind::Z, 1),
        (GateKind::S, 1),
        (GateKind::Sdg, 1),
        (GateKind::H, 1),
        (GateKind::CX, 2),
        (GateKind::CZ, 2),
        (GateKind::CS, 2),
        (GateKind::CSdg, 2),
        (GateKind::Swap, 2),
        (GateKind::CCZ, 3),
        (GateKind::CCX, 3),
    ];
    let mut map = BTreeMap::new();
    for (kind, arity) in kinds {
        let g = Gate::new(kind, (0..arity).collect()).expect("arity matches");
        let gates = real_encode_gate(&g, arity).expect("kind has a real encoding");
        map.insert(
            kind,
            Circuit::from_gates(arity + 1, gates).expect("template fits"),
        );
    }
    CatalyticEmbedding {
        name: "real-encode".into(),
        catalyst: vec![StatePrep::MinusI],
        gadget_map: map,
        passthrough: vec![],
        source_gateset: GateSet::CliffordCs,
        target_gateset: GateSet::ToffoliH,
    }
}

/// Replaces every mapped gate by its template and appends the catalyst
/// qubits (prepared per the embedding) after the circuit's own qubits.
pub fn apply_embedding(c: &Circuit, e: &CatalyticEmbedding) -> Result<Circuit, CatalysisError> {
    let n = c.width();
    let mut out = c.without_gates().widened(e.catalyst_width());
    for (j, p) in e.catalyst.iter().enumerate() {
        out.set_prep(n + j, *p)?;
    }
    for g in c.gates() {
        if let Some(template) = e.gadget_map.get(&g.kind) {
            let a = g.qubits.len();
            let map: Vec<usize> = (0..template.width())
                .map(|i| if i < a { g.qubits[i] } else { n + i - a })
                .collect();
            out.append_mapped(template, &map)?;
        } else if e.passthrough.contains(&g.kind) {
            out.push(g.clone());
        } else {
            return Err(CatalysisError::UnsupportedGate {
                gate: g.to_string(),
                pass: e.name.clone(),
            });
        }
    }
    if out
        .gates()
        .iter()
        .all(|g| e.target_gateset.contains(g.kind))
    {
        out.set_gateset(Some(e.target_gateset))?;
    }
    Ok(out)
}

/// Replaces each `T`/`T^dagger` by the CS gadget, appending one `|T>` catalyst.
pub fn transpile_t_to_cs(c: &Circuit) -> Result<Circuit, CatalysisError> {
    if let Some(g) = c
        .gates()
        .iter()
        .find(|g| !GateSet::CliffordT.contains(g.kind))
    {
        return Err(CatalysisError::UnsupportedGate {
            gate: g.to_string(),
            pass: "t-to-cs".into(),
        });
    }
    apply_embedding(c, &t_embedding())
}

/// Checks the catalytic contract for every template of the embedding.
pub fn verify_embedding(e: &CatalyticEmbedding) -> Result<Vec<VerificationReport>, CatalysisError> {
    let tower = Tower::clifford_t();
    let mut cat = Circuit::new(e.catalyst_width());
    for (j, p) in e.catalyst.iter().enumerate() {
        cat.set_prep(j, *p)?;
    }
    let cat = prep_vector(&cat, &tower)?;
    let mut reports = Vec::new();
    for (kind, template) in &e.gadget_map {
        let a = template.width() - e.catalyst_width();
        let target = Circuit::from_gates(a, vec![Gate::new(*kind, (0..a).collect())?])?;
        reports.push(verify_catalytic_contract(
            &format!("{}[{}]", e.name, kind.name()),
            template,
            &target,
            &cat,
            &tower,
        )?);
    }
    Ok(reports)
}
