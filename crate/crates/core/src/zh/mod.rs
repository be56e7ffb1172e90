//! ZH-diagrams: exact semantics, the phase-free rule set and the
//! catalyst-extraction procedure behind the completeness extension.
//!
//! A diagram is an undirected multigraph. Z-spiders and H-boxes are
//! symmetric tensors, so only adjacency matters; boundary nodes carry the
//! wire order through the `inputs` and `outputs` lists.

mod build;
mod catalyst;
mod eval;
pub mod random;
mod rules;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::ring::{RingElement, RingError};

pub use build::{
    ccz_diagram, circuit_to_diagram, cnot_diagram, cz_alpha_diagram, cz_diagram, h_box,
    not_diagram, state_one, toffoli_diagram, unary_state, x_spider, z_spider, CircuitDiagram,
};
pub use catalyst::{
    a_box_count, catalysis_rule, catalyst_rule_book, euler_rule, extract_catalyst,
    extract_catalyst_with, replay_trace, scalar_intro_rule, split_on_catalyst, ExtractOrder,
    ProofTrace, SplitResult, TraceStep,
};
pub use eval::{eval_tensor, eval_tensor_capped, semantic_equal, EvalCaps};
pub use rules::{
    apply_rule, find_matches, multiply_rule, register_rule, Family, RewriteRule, RuleBook,
};
pub use text::{parse_diagram, parse_trace, serialize_diagram, serialize_trace};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Z,
    H(RingElement),
    /// The scalar 1/2.
    Star,
    Boundary,
}

impl NodeKind {
    pub fn tag(&self) -> &'static str {
        match self {
            NodeKind::Z => "z",
            NodeKind::H(_) => "h",
            NodeKind::Star => "star",
            NodeKind::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZhError {
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("evaluation cap exceeded: {0}")]
    Cap(String),
    #[error("label {0} is not in the evaluation tower")]
    Label(String),
    #[error("rule {rule} is unsound: {witness}")]
    Unsound { rule: String, witness: String },
    #[error("no rule named {0}")]
    UnknownRule(String),
    #[error("invalid match for {rule}: {msg}")]
    Match { rule: String, msg: String },
    #[error("catalyst: {0}")]
    Catalyst(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZhDiagram {
    nodes: BTreeMap<NodeId, NodeKind>,
    edges: Vec<(NodeId, NodeId)>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
    next_id: NodeId,
}

impl ZhDiagram {
    pub fn new() -> Self {
        ZhDiagram::default()
    }

    pub fn add_node(&mut self, kind: NodeKind) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(id, kind);
        id
    }

    pub fn add_z(&mut self) -> NodeId {
        self.add_node(NodeKind::Z)
    }

    pub fn add_h(&mut self, label: RingElement) -> NodeId {
        self.add_node(NodeKind::H(label))
    }

    pub fn add_star(&mut self) -> NodeId {
        self.add_node(NodeKind::Star)
    }

    /// Inserts a node under a chosen id (used by the parser).
    pub fn insert_node(&mut self, id: NodeId, kind: NodeKind) -> Result<(), ZhError> {
        if self.nodes.contains_key(&id) {
            return Err(ZhError::Invalid(format!("duplicate node id {id}")));
        }
        self.nodes.insert(id, kind);
        self.next_id = self.next_id.max(id + 1);
        Ok(())
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) {
        debug_assert!(self.nodes.contains_key(&a) && self.nodes.contains_key(&b));
        self.edges.push((a, b));
    }

    /// New boundary node wired to `to`, appended to the inputs.
    pub fn add_input(&mut self, to: NodeId) -> NodeId {
        let b = self.add_node(NodeKind::Boundary);
        self.add_edge(b, to);
        self.inputs.push(b);
        b
    }

    pub fn add_output(&mut self, to: NodeId) -> NodeId {
        let b = self.add_node(NodeKind::Boundary);
        self.add_edge(b, to);
        self.outputs.push(b);
        b
    }

    /// A bare wire from a new input to a new output.
    pub fn add_wire(&mut self) -> (NodeId, NodeId) {
        let i = self.add_node(NodeKind::Boundary);
        let o = self.add_node(NodeKind::Boundary);
        self.add_edge(i, o);
        self.inputs.push(i);
        self.outputs.push(o);
        (i, o)
    }

    pub fn set_inputs(&mut self, ids: Vec<NodeId>) {
        self.inputs = ids;
    }

    pub fn set_outputs(&mut self, ids: Vec<NodeId>) {
        self.outputs = ids;
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, NodeKind> {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    /// Number of edge ends at `id`; a self-loop counts twice.
    pub fn degree(&self, id: NodeId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == id) as usize + (b == id) as usize)
            .sum()
    }

    /// Neighbours of `id` with multiplicity, self-loops listed twice.
    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == id {
                out.push(b);
            }
            if b == id {
                out.push(a);
            }
        }
        out
    }

    pub fn edge_count_between(&self, a: NodeId, b: NodeId) -> usize {
        self.edges
            .iter()
            .filter(|&&(x, y)| (x == a && y == b) || (x == b && y == a))
            .count()
    }

    /// Internal (non-boundary) node count.
    pub fn internal_count(&self) -> usize {
        self.nodes
            .values()
            .filter(|k| !matches!(k, NodeKind::Boundary))
            .count()
    }

    pub fn remove_node(&mut self, id: NodeId) {
        self.nodes.remove(&id);
        self.edges.retain(|&(a, b)| a != id && b != id);
        self.inputs.retain(|&x| x != id);
        self.outputs.retain(|&x| x != id);
    }

    /// Checks the structural invariants: boundary nodes have degree one and
    /// appear exactly once in the boundary lists, stars are isolated, and
    /// every edge endpoint exists.
    pub fn validate(&self) -> Result<(), ZhError> {
        for &(a, b) in &self.edges {
            if !self.nodes.contains_key(&a) || !self.nodes.contains_key(&b) {
                return Err(ZhError::Invalid(format!(
                    "edge {a}-{b} has a missing endpoint"
                )));
            }
        }
        let mut seen = BTreeMap::new();
        for &b in self.inputs.iter().chain(&self.outputs) {
            if self.nodes.get(&b) != Some(&NodeKind::Boundary) {
                return Err(ZhError::Invalid(format!(
                    "boundary entry {b} is not a boundary node"
                )));
            }
            if seen.insert(b, ()).is_some() {
                return Err(ZhError::Invalid(format!("boundary node {b} listed twice")));
            }
        }
        for (&id, kind) in &self.nodes {
            match kind {
                NodeKind::Boundary => {
                    if self.degree(id) != 1 {
                        return Err(ZhError::Invalid(format!(
                            "boundary node {id} has degree {}",
                            self.degree(id)
                        )));
                    }
                    if !seen.contains_key(&id) {
                        return Err(ZhError::Invalid(format!(
                            "boundary node {id} is not listed"
                        )));
                    }
                }
                NodeKind::Star if self.degree(id) != 0 => {
                    return Err(ZhError::Invalid(format!("star {id} has edges")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Copies `other` in with fresh ids; returns the id map.
    fn absorb(&mut self, other: &ZhDiagram) -> BTreeMap<NodeId, NodeId> {
        let map: BTreeMap<NodeId, NodeId> = other
            .nodes
            .iter()
            .map(|(&id, k)| (id, self.add_node(k.clone())))
            .collect();
        for &(a, b) in &other.edges {
            self.edges.push((map[&a], map[&b]));
        }
        map
    }

    /// Removes a degree-2 pass-through node and joins its two neighbours.
    /// A node that only loops to itself becomes a closed loop, the scalar 2.
    fn splice_out(&mut self, id: NodeId) {
        let nb = self.neighbors(id);
        debug_assert_eq!(nb.len(), 2);
        let closed = nb[0] == id;
        self.remove_node(id);
        if closed {
            self.add_z();
        } else {
            self.add_edge(nb[0], nb[1]);
        }
    }

    /// Joins two boundary nodes into a single wire (both are removed).
    fn glue(&mut self, a: NodeId, b: NodeId) {
        self.add_edge(a, b);
        self.inputs.retain(|&x| x != a && x != b);
        self.outputs.retain(|&x| x != a && x != b);
        self.splice_out(a);
        if self.nodes.contains_key(&b) {
            self.splice_out(b);
        }
    }
}

/// Sequential composition: `d1` first, its outputs fed into the inputs of `d2`.
pub fn compose(d1: &ZhDiagram, d2: &ZhDiagram) -> Result<ZhDiagram, ZhError> {
    if d1.outputs.len() != d2.inputs.len() {
        return Err(ZhError::Arity(format!(
            "{} outputs composed with {} inputs",
            d1.outputs.len(),
            d2.inputs.len()
        )));
    }
    let mut out = d1.clone();
    let map = out.absorb(d2);
    let glue: Vec<(NodeId, NodeId)> = d1
        .outputs
        .iter()
        .zip(&d2.inputs)
        .map(|(&o, i)| (o, map[i]))
        .collect();
    out.outputs = d2.outputs.iter().map(|o| map[o]).collect();
    for (o, i) in glue {
        out.glue(o, i);
    }
    Ok(out)
}

/// Parallel composition; `d1`'s wires come first.
pub fn tensor(d1: &ZhDiagram, d2: &ZhDiagram) -> ZhDiagram {
    let mut out = d1.clone();
    let map = out.absorb(d2);
    out.inputs.extend(d2.inputs.iter().map(|i| map[i]));
    out.outputs.extend(d2.outputs.iter().map(|o| map[o]));
    out
}

impl fmt::Display for ZhDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_diagram(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Tower;

    #[test]
    fn compose_with_identity_keeps_semantics() {
        let t = Tower::clifford_t();
        let d = cz_diagram(&t);
        let mut id = ZhDiagram::new();
        id.add_wire();
        id.add_wire();
        let c = compose(&id, &d).unwrap();
        c.validate().unwrap();
        assert_eq!(eval_tensor(&c, &t).unwrap(), eval_tensor(&d, &t).unwrap());
        assert_eq!(c.internal_count(), d.internal_count());
    }

    #[test]
    fn closed_loop_is_two() {
        let t = Tower::dyadic();
        let mut cup = ZhDiagram::new();
        let a = cup.add_node(NodeKind::Boundary);
        let b = cup.add_node(NodeKind::Boundary);
        cup.add_edge(a, b);
        cup.set_outputs(vec![a, b]);
        let mut cap = ZhDiagram::new();
        let c = cap.add_node(NodeKind::Boundary);
        let d = cap.add_node(NodeKind::Boundary);
        cap.add_edge(c, d);
        cap.set_inputs(vec![c, d]);
        let loop_ = compose(&cup, &cap).unwrap();
        loop_.validate().unwrap();
        assert_eq!(eval_tensor(&loop_, &t).unwrap().get(0, 0), &t.from_int(2));
    }

    #[test]
    fn validation_catches_bad_boundary() {
        let mut d = ZhDiagram::new();
        let z = d.add_z();
        let b = d.add_input(z);
        d.add_edge(b, z);
        assert!(d.validate().is_err());
        let mut d = ZhDiagram::new();
        let s = d.add_star();
        let z = d.add_z();
        d.add_edge(s, z);
        assert!(d.validate().is_err());
    }
}
