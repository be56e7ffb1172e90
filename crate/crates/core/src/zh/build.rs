//! Derived generators and the circuit-to-diagram translation.
//!
//! The X-spider is a Z-spider with a binary H-box on every leg and one
//! star; with the star its tensor is exactly the parity indicator, so no
//! stray powers of two leak into gate diagrams.

use super::{NodeId, NodeKind, ZhDiagram, ZhError};
use crate::circuit::{Circuit, GateKind};
use crate::ring::{RingElement, Tower};

pub fn z_spider(n_in: usize, n_out: usize) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    let z = d.add_z();
    for _ in 0..n_in {
        d.add_input(z);
    }
    for _ in 0..n_out {
        d.add_output(z);
    }
    d
}

pub fn h_box(label: RingElement, n_in: usize, n_out: usize) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    let h = d.add_h(label);
    for _ in 0..n_in {
        d.add_input(h);
    }
    for _ in 0..n_out {
        d.add_output(h);
    }
    d
}

/// `|0> + a|1>`.
pub fn unary_state(a: RingElement) -> ZhDiagram {
    h_box(a, 0, 1)
}

fn minus_one(tower: &Tower) -> RingElement {
    tower.from_int(-1)
}

/// Adds an X-spider and returns its leg nodes (binary H-boxes whose free
/// end is still open).
pub(crate) fn add_x_spider(d: &mut ZhDiagram, tower: &Tower, legs: usize) -> Vec<NodeId> {
    let c = d.add_z();
    d.add_star();
    (0..legs)
        .map(|_| {
            let h = d.add_h(minus_one(tower));
            d.add_edge(c, h);
            h
        })
        .collect()
}

pub fn x_spider(tower: &Tower, n_in: usize, n_out: usize) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    let legs = add_x_spider(&mut d, tower, n_in + n_out);
    for &l in &legs[..n_in] {
        d.add_input(l);
    }
    for &l in &legs[n_in..] {
        d.add_output(l);
    }
    d
}

/// Adds a NOT between `from` and a new open end, which is returned.
fn add_not(d: &mut ZhDiagram, tower: &Tower, from: NodeId) -> NodeId {
    // an X-spider whose third leg is plugged with |1> collapses to a
    // unary (-1) box on the centre
    let c = d.add_z();
    d.add_star();
    let a = d.add_h(minus_one(tower));
    let b = d.add_h(minus_one(tower));
    let p = d.add_h(minus_one(tower));
    d.add_edge(from, a);
    d.add_edge(a, c);
    d.add_edge(c, b);
    d.add_edge(c, p);
    b
}

pub fn not_diagram(tower: &Tower) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    let i = d.add_node(NodeKind::Boundary);
    let end = add_not(&mut d, tower, i);
    d.set_inputs(vec![i]);
    d.add_output(end);
    d
}

/// `|1>` as a star, a binary H-box and a unary (-1) box.
pub fn state_one(tower: &Tower) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    d.add_star();
    let h = d.add_h(minus_one(tower));
    let p = d.add_h(minus_one(tower));
    d.add_edge(h, p);
    d.add_output(h);
    d
}

/// Adds `target ^= AND(controls)` fed from `cur[target]`; updates `cur`.
fn add_toffoli_like(
    d: &mut ZhDiagram,
    tower: &Tower,
    cur: &mut [NodeId],
    controls: &[usize],
    target: usize,
) {
    let mut and_legs = Vec::new();
    for &q in controls {
        let z = d.add_z();
        d.add_edge(cur[q], z);
        cur[q] = z;
        and_legs.push(z);
    }
    let legs = add_x_spider(d, tower, 3);
    d.add_edge(cur[target], legs[0]);
    cur[target] = legs[1];
    match and_legs.len() {
        1 => d.add_edge(legs[2], and_legs[0]),
        _ => {
            // AND gate: H-box on the controls, binary H-box out, one star
            let h = d.add_h(minus_one(tower));
            for &z in &and_legs {
                d.add_edge(z, h);
            }
            let k = d.add_h(minus_one(tower));
            d.add_edge(h, k);
            d.add_star();
            d.add_edge(k, legs[2]);
        }
    }
}

/// Diagonal phase `label` on the all-ones subspace of `qubits`.
fn add_controlled_phase(
    d: &mut ZhDiagram,
    cur: &mut [NodeId],
    qubits: &[usize],
    label: RingElement,
) {
    let h = d.add_h(label);
    for &q in qubits {
        let z = d.add_z();
        d.add_edge(cur[q], z);
        d.add_edge(z, h);
        cur[q] = z;
    }
}

fn gate_frame(n: usize) -> (ZhDiagram, Vec<NodeId>) {
    let mut d = ZhDiagram::new();
    let ins: Vec<NodeId> = (0..n).map(|_| d.add_node(NodeKind::Boundary)).collect();
    d.set_inputs(ins.clone());
    (d, ins)
}

fn close_frame(mut d: ZhDiagram, cur: &[NodeId]) -> ZhDiagram {
    for &c in cur {
        d.add_output(c);
    }
    d
}

pub fn cnot_diagram(tower: &Tower) -> ZhDiagram {
    let (mut d, mut cur) = gate_frame(2);
    add_toffoli_like(&mut d, tower, &mut cur, &[0], 1);
    close_frame(d, &cur)
}

pub fn cz_diagram(tower: &Tower) -> ZhDiagram {
    cz_alpha_diagram(minus_one(tower))
}

/// `diag(1, 1, 1, a)`.
pub fn cz_alpha_diagram(a: RingElement) -> ZhDiagram {
    let (mut d, mut cur) = gate_frame(2);
    add_controlled_phase(&mut d, &mut cur, &[0, 1], a);
    close_frame(d, &cur)
}

pub fn ccz_diagram(tower: &Tower) -> ZhDiagram {
    let (mut d, mut cur) = gate_frame(3);
    add_controlled_phase(&mut d, &mut cur, &[0, 1, 2], minus_one(tower));
    close_frame(d, &cur)
}

pub fn toffoli_diagram(tower: &Tower) -> ZhDiagram {
    let (mut d, mut cur) = gate_frame(3);
    add_toffoli_like(&mut d, tower, &mut cur, &[0, 1], 2);
    close_frame(d, &cur)
}

/// A circuit's diagram together with the scalar it carries:
/// `eval(diagram) = scalar * U`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDiagram {
    pub diagram: ZhDiagram,
    pub scalar: RingElement,
}

/// Translates the gates of `c` (preparations are ignored). Each Hadamard is
/// a binary H-box, i.e. `sqrt 2 * H`; pairs of them are compensated with a
/// star and an odd one leaves `sqrt 2` in the scalar.
pub fn circuit_to_diagram(c: &Circuit, tower: &Tower) -> Result<CircuitDiagram, ZhError> {
    let (mut d, mut cur) = gate_frame(c.width());
    let mut hadamards = 0usize;
    let root = |k: u32, sign: i8| -> Result<RingElement, ZhError> {
        let r = tower.root_of_unity(k)?;
        Ok(if sign < 0 { r.conj() } else { r })
    };
    for g in c.gates() {
        let q = &g.qubits;
        match g.kind {
            GateKind::X => cur[q[0]] = add_not(&mut d, tower, cur[q[0]]),
            GateKind::Y => {
                // Y = i X Z
                add_controlled_phase(&mut d, &mut cur, q, minus_one(tower));
                cur[q[0]] = add_not(&mut d, tower, cur[q[0]]);
                d.add_h(tower.i()?);
            }
            GateKind::H => {
                let h = d.add_h(minus_one(tower));
                d.add_edge(cur[q[0]], h);
                cur[q[0]] = h;
                hadamards += 1;
            }
            GateKind::CX | GateKind::CCX | GateKind::Mcx => {
                let (t, ctrl) = q.split_last().expect("gates have qubits");
                add_toffoli_like(&mut d, tower, &mut cur, ctrl, *t);
            }
            GateKind::Swap => cur.swap(q[0], q[1]),
            GateKind::Z | GateKind::CZ | GateKind::CCZ => {
                add_controlled_phase(&mut d, &mut cur, q, minus_one(tower))
            }
            GateKind::S | GateKind::CS => add_controlled_phase(&mut d, &mut cur, q, root(2, 1)?),
            GateKind::Sdg | GateKind::CSdg => {
                add_controlled_phase(&mut d, &mut cur, q, root(2, -1)?)
            }
            GateKind::T => add_controlled_phase(&mut d, &mut cur, q, root(3, 1)?),
            GateKind::Tdg => add_controlled_phase(&mut d, &mut cur, q, root(3, -1)?),
            GateKind::PhaseK { k, sign } | GateKind::CPhaseK { k, sign } => {
                add_controlled_phase(&mut d, &mut cur, q, root(k, sign)?)
            }
        }
    }
    for _ in 0..hadamards / 2 {
        d.add_star();
    }
    let scalar = if hadamards % 2 == 1 {
        tower.sqrt2()?
    } else {
        tower.one()
    };
    Ok(CircuitDiagram {
        diagram: close_frame(d, &cur),
        scalar,
    })
}

#[cfg(test)]
mod tests {
    use super::super::eval_tensor;
    use super::*;
    use crate::circuit::{gate_matrix, unitary_of, Gate};

    fn ct() -> Tower {
        Tower::clifford_t()
    }

    #[test]
    fn derived_gates_exact() {
        let t = ct();
        let cases = [
            (cnot_diagram(&t), Gate::cx(0, 1)),
            (cz_diagram(&t), Gate::cz(0, 1)),
            (ccz_diagram(&t), Gate::ccz(0, 1, 2)),
            (toffoli_diagram(&t), Gate::ccx(0, 1, 2)),
            (not_diagram(&t), Gate::x(0)),
            (cz_alpha_diagram(t.i().unwrap()), Gate::cs(0, 1)),
        ];
        for (d, g) in cases {
            assert_eq!(
                eval_tensor(&d, &t).unwrap(),
                gate_matrix(&g, &t).unwrap(),
                "{g}"
            );
        }
    }

    #[test]
    fn ccz_is_diagonal_minus_one() {
        let t = ct();
        let m = eval_tensor(&ccz_diagram(&t), &t).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let want = match (r == c, r) {
                    (false, _) => t.zero(),
                    (true, 7) => t.from_int(-1),
                    _ => t.one(),
                };
                assert_eq!(m.get(r, c), &want);
            }
        }
    }

    #[test]
    fn spiders_and_states() {
        let t = ct();
        let x = eval_tensor(&x_spider(&t, 0, 1), &t).unwrap();
        assert!(x.get(0, 0).is_one() && x.get(1, 0).is_zero());
        let one = eval_tensor(&state_one(&t), &t).unwrap();
        assert!(one.get(0, 0).is_zero() && one.get(1, 0).is_one());
        let x3 = eval_tensor(&x_spider(&t, 1, 2), &t).unwrap();
        for r in 0..4usize {
            for c in 0..2 {
                let parity = (r.count_ones() as usize + c).is_multiple_of(2);
                assert_eq!(x3.get(r, c).is_one(), parity);
            }
        }
    }

    #[test]
    fn circuits_translate_with_scalar() {
        let t = ct();
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::h(0),
                Gate::t(1),
                Gate::cx(0, 2),
                Gate::cs(1, 2),
                Gate::ccx(2, 0, 1),
                Gate::y(2),
                Gate::swap(0, 1),
                Gate::tdg(0),
                Gate::h(1),
                Gate::h(2),
                Gate::x(1),
            ],
        )
        .unwrap();
        let cd = circuit_to_diagram(&c, &t).unwrap();
        let want = unitary_of(&c, &t).unwrap().scale(&cd.scalar);
        assert_eq!(eval_tensor(&cd.diagram, &t).unwrap(), want);
        assert_eq!(cd.scalar, t.sqrt2().unwrap());
    }

    #[test]
    fn empty_circuit_is_wires() {
        let t = ct();
        let cd = circuit_to_diagram(&Circuit::new(2), &t).unwrap();
        assert_eq!(cd.diagram.internal_count(), 0);
        assert!(eval_tensor(&cd.diagram, &t).unwrap().is_identity());
    }

    #[test]
    fn t_gate_is_spider_with_omega_box() {
        let t = ct();
        let c = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        let d = circuit_to_diagram(&c, &t).unwrap().diagram;
        let hs: Vec<_> = d
            .nodes()
            .values()
            .filter_map(|k| match k {
                NodeKind::H(l) => Some(l.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(hs, vec![t.generator(1)]);
        assert_eq!(d.internal_count(), 2);
    }
}
