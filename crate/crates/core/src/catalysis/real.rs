//! Real encoding `U -> [[Re U, -Im U], [Im U, Re U]]` with the encoding
//! qubit most significant. As an operator this is
//! `I (x) Re U + (XZ)_e (x) Im U`, which is how gates are lowered below.

use super::CatalysisError;
use crate::circuit::{unitary_of_capped, Circuit, Gate, GateKind, GateSet};
use crate::ring::{RingMatrix, Tower};

/// `Z` on `target`, controlled on `controls`, written with H and X gates.
fn controlled_z(controls: &[usize], target: usize) -> Vec<Gate> {
    vec![
        Gate::h(target),
        Gate::mcx(controls, target),
        Gate::h(target),
    ]
}

/// Real lowering of one gate. `enc` is the encoding qubit; data qubits keep
/// their indices.
pub fn real_encode_gate(g: &Gate, enc: usize) -> Result<Vec<Gate>, CatalysisError> {
    let unsupported = || CatalysisError::UnsupportedGate {
        gate: g.to_string(),
        pass: "real-encode".into(),
    };
    let q = &g.qubits;
    // diagonal phase on the all-ones subspace of `qs`
    let phase = |k: u32, sign: i8, qs: &[usize]| -> Result<Vec<Gate>, CatalysisError> {
        let (last, ctrl) = qs.split_last().expect("gates have qubits");
        match k {
            // real already: multi-controlled Z
            1 => Ok(controlled_z(ctrl, *last)),
            // +-i on the subspace: controlled (XZ) or (ZX) onto the encoding qubit
            2 => {
                let mut z = controlled_z(qs, enc);
                let x = Gate::mcx(qs, enc);
                Ok(if sign > 0 {
                    z.push(x);
                    z
                } else {
                    let mut v = vec![x];
                    v.append(&mut z);
                    v
                })
            }
            _ => Err(unsupported()),
        }
    };
    match g.kind {
        GateKind::X
        | GateKind::CX
        | GateKind::CCX
        | GateKind::Mcx
        | GateKind::Swap
        | GateKind::H => Ok(vec![g.clone()]),
        GateKind::Z | GateKind::CZ | GateKind::CCZ => phase(1, 1, q),
        GateKind::S | GateKind::CS => phase(2, 1, q),
        GateKind::Sdg | GateKind::CSdg => phase(2, -1, q),
        GateKind::PhaseK { k, sign } | GateKind::CPhaseK { k, sign } => phase(k, sign, q),
        GateKind::Y => {
            // Y = i XZ, so Y~ = (XZ)_e (x) (XZ)_q
            let mut v = controlled_z(&[], q[0]);
            v.push(Gate::x(q[0]));
            v.extend(controlled_z(&[], enc));
            v.push(Gate::x(enc));
            Ok(v)
        }
        GateKind::T | GateKind::Tdg => Err(unsupported()),
    }
}

/// Encodes a circuit on `n` qubits into one on `n + 1`; the encoding qubit
/// is qubit 0 (prepared in `|0>`) and data qubit `q` moves to `q + 1`.
pub fn real_encode_circuit(c: &Circuit) -> Result<Circuit, CatalysisError> {
    let n = c.width();
    let mut out = Circuit::new(n + 1);
    for (q, p) in c.preps().iter().enumerate() {
        if !c.ccz_blocks().iter().any(|b| b.contains(&q)) {
            out.set_prep(q + 1, *p)?;
        }
    }
    for b in c.ccz_blocks() {
        out.add_ccz_block([b[0] + 1, b[1] + 1, b[2] + 1])?;
    }
    for g in c.gates() {
        for e in real_encode_gate(&g.relabel(|q| q + 1), 0)? {
            out.push(e);
        }
    }
    if out
        .gates()
        .iter()
        .all(|g| GateSet::ToffoliH.contains(g.kind))
    {
        out.set_gateset(Some(GateSet::ToffoliH))?;
    }
    Ok(out)
}

/// Block matrix `[[Re U, -Im U], [Im U, Re U]]`. Requires `U` unitary.
pub fn real_encode_matrix(u: &RingMatrix) -> Result<RingMatrix, CatalysisError> {
    if !u.is_unitary() {
        return Err(CatalysisError::NonUnitary);
    }
    let n = u.rows();
    let tower = u.tower().clone();
    let mut out = RingMatrix::zeros(&tower, 2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let x = u.get(r, c);
            let re = x.real_part();
            let im = x.imag_part()?;
            out.set(r, c, re.clone());
            out.set(r + n, c + n, re);
            out.set(r, c + n, -&im);
            out.set(r + n, c, im);
        }
    }
    Ok(out)
}

/// How the encoded CS relates to a Toffoli.
#[derive(Debug, Clone)]
pub struct ToffoliComparison {
    /// `CS~` on (encoding, a, b).
    pub encoded: RingMatrix,
    /// Qubit relabelling `[c1, c2, target]` making a Toffoli equal to `CS~`.
    pub exact_permutation: Option<[usize; 3]>,
    /// Relabelling under which the nonzero patterns coincide.
    pub support_permutation: Option<[usize; 3]>,
    /// Whether `CS~ = CCX(a, b -> e) * CCZ(a, b, e)` holds exactly.
    pub ccx_ccz_factorization: bool,
}

impl ToffoliComparison {
    pub fn summary(&self) -> String {
        let fmt = |p: &Option<[usize; 3]>| match p {
            Some(p) => format!("ccx {} {} {}", p[0], p[1], p[2]),
            None => "none".into(),
        };
        format!(
            "exact_permutation={}\nsupport_permutation={}\nccx_ccz_factorization={}",
            fmt(&self.exact_permutation),
            fmt(&self.support_permutation),
            self.ccx_ccz_factorization
        )
    }
}

/// Encodes CS and searches all qubit relabellings of a Toffoli for a match.
pub fn compare_with_toffoli() -> Result<ToffoliComparison, CatalysisError> {
    let tower = Tower::clifford_t();
    let cs = unitary_of_capped(&Circuit::from_gates(2, vec![Gate::cs(0, 1)])?, &tower, 2)?;
    let encoded = real_encode_matrix(&cs)?;
    let mut exact = None;
    let mut support = None;
    for t in 0..3 {
        let ctrl: Vec<usize> = (0..3).filter(|&q| q != t).collect();
        for (c1, c2) in [(ctrl[0], ctrl[1]), (ctrl[1], ctrl[0])] {
            let tof = unitary_of_capped(
                &Circuit::from_gates(3, vec![Gate::ccx(c1, c2, t)])?,
                &tower,
                3,
            )?;
            if exact.is_none() && tof == encoded {
                exact = Some([c1, c2, t]);
            }
            let same_support = tof
                .entries()
                .iter()
                .zip(encoded.entries())
                .all(|(a, b)| a.is_zero() == b.is_zero());
            if support.is_none() && same_support {
                support = Some([c1, c2, t]);
            }
        }
    }
    let fact = unitary_of_capped(
        &Circuit::from_gates(3, vec![Gate::ccz(1, 2, 0), Gate::ccx(1, 2, 0)])?,
        &tower,
        3,
    )?;
    Ok(ToffoliComparison {
        ccx_ccz_factorization: fact == encoded,
        encoded,
        exact_permutation: exact,
        support_permutation: support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_matrix, unitary_of};

    fn ct() -> Tower {
        Tower::clifford_t()
    }

    #[test]
    fn h_encodes_to_identity_tensor_h() {
        let t = ct();
        let h = gate_matrix(&Gate::h(0), &t).unwrap();
        let enc = real_encode_matrix(&h).unwrap();
        assert_eq!(enc, RingMatrix::identity(&t, 2).kron(&h));
    }

    #[test]
    fn s_encoding_blocks() {
        let t = ct();
        let s = gate_matrix(&Gate::s(0), &t).unwrap();
        let enc = real_encode_matrix(&s).unwrap();
        let expect = [[1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0]];
        for (r, row) in expect.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert_eq!(enc.get(r, c), &t.from_int(*v));
            }
        }
        assert!(enc.transpose().mul(&enc).is_identity());
    }

    #[test]
    fn gate_lowering_matches_matrix() {
        let t = ct();
        for g in [
            Gate::s(0),
            Gate::sdg(0),
            Gate::y(0),
            Gate::z(0),
            Gate::cs(0, 1),
            Gate::csdg(1, 0),
            Gate::cz(0, 1),
            Gate::ccz(0, 1, 2),
            Gate::h(1),
        ] {
            let n = g.qubits.iter().max().unwrap() + 1;
            let c = Circuit::from_gates(n, vec![g.clone()]).unwrap();
            let want = real_encode_matrix(&unitary_of(&c, &t).unwrap()).unwrap();
            let got = unitary_of(&real_encode_circuit(&c).unwrap(), &t).unwrap();
            assert_eq!(got, want, "{g}");
        }
    }

    #[test]
    fn rejects_t_and_non_unitary() {
        let c = Circuit::from_gates(1, vec![Gate::t(0)]).unwrap();
        assert!(real_encode_circuit(&c).is_err());
        let t = ct();
        assert!(real_encode_matrix(&RingMatrix::zeros(&t, 2, 2)).is_err());
    }

    #[test]
    fn cs_versus_toffoli() {
        let cmp = compare_with_toffoli().unwrap();
        assert!(cmp.ccx_ccz_factorization);
        assert_eq!(cmp.support_permutation.map(|p| p[2]), Some(0));
        // CS~ has a -1 entry and order 4, so no relabelled Toffoli equals it
        assert_eq!(cmp.exact_permutation, None);
    }
}
