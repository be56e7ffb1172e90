//! Line-based circuit text format.
//!
//! ```text
//! # comment
//! qubits 3
//! gateset clifford+t
//! prep 0 +            # tags: 0 1 + - i -i T, zk K, zkdg K
//! prep ccz 0 1 2      # CCZ|+++> on three qubits
//! h 0
//! cx 0 1
//! phasek 4 2
//! cphasek 3 0 1 2     # controls first, target last
//! mcx 0 1 2
//! ```

use super::{Circuit, CircuitError, Gate, GateKind, GateSet, StatePrep};

fn syntax(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, CircuitError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

fn parse_k(tok: Option<&&str>, line: usize) -> Result<u32, CircuitError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing phase depth K"))?;
    let k: u32 = tok
        .parse()
        .map_err(|_| syntax(line, format!("expected phase depth, found `{tok}`")))?;
    if k == 0 {
        return Err(syntax(line, "phase depth must be at least 1"));
    }
    Ok(k)
}

fn gate_kind(name: &str) -> Option<(GateKind, bool)> {
    // second field: whether a phase depth K precedes the qubits
    let k = GateKind::PhaseK { k: 1, sign: 1 };
    Some(match name {
        "x" => (GateKind::X, false),
        "y" => (GateKind::Y, false),
        "z" => (GateKind::Z, false),
        "s" => (GateKind::S, false),
        "sdg" => (GateKind::Sdg, false),
        "t" => (GateKind::T, false),
        "tdg" => (GateKind::Tdg, false),
        "h" => (GateKind::H, false),
        "cx" | "cnot" => (GateKind::CX, false),
        "cz" => (GateKind::CZ, false),
        "cs" => (GateKind::CS, false),
        "csdg" => (GateKind::CSdg, false),
        "swap" => (GateKind::Swap, false),
        "ccz" => (GateKind::CCZ, false),
        "ccx" | "toffoli" => (GateKind::CCX, false),
        "mcx" => (GateKind::Mcx, false),
        "phasek" => (k, true),
        "phasekdg" => (k.inverse(), true),
        "cphasek" => (GateKind::CPhaseK { k: 1, sign: 1 }, true),
        "cphasekdg" => (GateKind::CPhaseK { k: 1, sign: -1 }, true),
        _ => return None,
    })
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    let mut pending_gateset: Option<GateSet> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let head = toks[0].to_ascii_lowercase();
        if head == "qubits" {
            if circuit.is_some() {
                return Err(syntax(line, "duplicate `qubits` line"));
            }
            if toks.len() != 2 {
                return Err(syntax(line, "usage: qubits N"));
            }
            let n = parse_usize(toks[1], line, "qubit count")?;
            let mut c = Circuit::new(n);
            c.set_gateset(pending_gateset)
                .map_err(|e| syntax(line, e.to_string()))?;
            circuit = Some(c);
            continue;
        }
        if head == "gateset" {
            if toks.len() != 2 {
                return Err(syntax(line, "usage: gateset NAME"));
            }
            let gs = GateSet::from_name(&toks[1].to_ascii_lowercase())
                .ok_or_else(|| syntax(line, format!("unknown gate set `{}`", toks[1])))?;
            match circuit.as_mut() {
                Some(c) => c
                    .set_gateset(Some(gs))
                    .map_err(|e| syntax(line, e.to_string()))?,
                None => pending_gateset = Some(gs),
            }
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| syntax(line, "`qubits N` must come before anything else"))?;
        if head == "prep" {
            parse_prep(c, &toks, line)?;
            continue;
        }
        let (kind, has_k) =
            gate_kind(&head).ok_or_else(|| syntax(line, format!("unknown gate `{}`", toks[0])))?;
        let mut rest = &toks[1..];
        let kind = if has_k {
            let k = parse_k(rest.first(), line)?;
            rest = &rest[1..];
            match kind {
                GateKind::PhaseK { sign, .. } => GateKind::PhaseK { k, sign },
                GateKind::CPhaseK { sign, .. } => GateKind::CPhaseK { k, sign },
                other => other,
            }
        } else {
            kind
        };
        let qubits = rest
            .iter()
            .map(|t| parse_usize(t, line, "qubit index"))
            .collect::<Result<Vec<_>, _>>()?;
        let gate = Gate::new(kind, qubits).map_err(|e| syntax(line, e.to_string()))?;
        c.try_push(gate).map_err(|e| syntax(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| syntax(text.lines().count().max(1), "missing `qubits N` line"))
}

fn parse_prep(c: &mut Circuit, toks: &[&str], line: usize) -> Result<(), CircuitError> {
    if toks.get(1) == Some(&"ccz") {
        if toks.len() != 5 {
            return Err(syntax(line, "usage: prep ccz A B C"));
        }
        let q: Vec<usize> = toks[2..]
            .iter()
            .map(|t| parse_usize(t, line, "qubit index"))
            .collect::<Result<_, _>>()?;
        c.add_ccz_block([q[0], q[1], q[2]])
            .map_err(|e| syntax(line, e.to_string()))?;
        return Ok(());
    }
    if toks.len() < 3 {
        return Err(syntax(line, "usage: prep Q TAG"));
    }
    let q = parse_usize(toks[1], line, "qubit index")?;
    let (prep, used) = match toks[2] {
        "0" => (StatePrep::Zero, 3),
        "1" => (StatePrep::One, 3),
        "+" => (StatePrep::Plus, 3),
        "-" => (StatePrep::Minus, 3),
        "i" | "+i" => (StatePrep::PlusI, 3),
        "-i" => (StatePrep::MinusI, 3),
        "T" | "t" => (StatePrep::T, 3),
        "zk" | "zkdg" => {
            let k = parse_k(toks.get(3), line)?;
            let sign = if toks[2] == "zk" { 1 } else { -1 };
            (StatePrep::Zk { k, sign }, 4)
        }
        other => return Err(syntax(line, format!("unknown preparation `{other}`"))),
    };
    if toks.len() != used {
        return Err(syntax(line, "trailing tokens after preparation"));
    }
    c.set_prep(q, prep)
        .map_err(|e| syntax(line, e.to_string()))?;
    Ok(())
}

/// Normalised text: `qubits`, optional `gateset`, non-default preps, gates.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.width());
    if let Some(gs) = c.gateset() {
        out.push_str(&format!("gateset {gs}\n"));
    }
    let in_block = |q: usize| c.ccz_blocks().iter().any(|b| b.contains(&q));
    for (q, p) in c.preps().iter().enumerate() {
        if *p != StatePrep::Zero && !in_block(q) {
            out.push_str(&format!("prep {q} {}\n", p.tag()));
        }
    }
    for b in c.ccz_blocks() {
        out.push_str(&format!("prep ccz {} {} {}\n", b[0], b[1], b[2]));
    }
    for g in c.gates() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let c = parse_circuit("qubits 1\nprep 0 +\nt 0").unwrap();
        assert_eq!(c.preps(), &[StatePrep::Plus]);
        assert_eq!(c.gates(), &[Gate::t(0)]);
        let c = parse_circuit("qubits 2\ncs 0 1").unwrap();
        assert_eq!(c.gates(), &[Gate::cs(0, 1)]);
    }

    #[test]
    fn arity_error_cites_line() {
        let err = parse_circuit("qubits 2\n\ncs 0").unwrap_err();
        match err {
            CircuitError::Syntax { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("expects 2"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_errors() {
        assert!(parse_circuit("h 0").is_err());
        assert!(parse_circuit("qubits 1\nh 1").is_err());
        assert!(parse_circuit("qubits 1\nfoo 0").is_err());
        assert!(parse_circuit("qubits 2\ngateset clifford+t\ncs 0 1").is_err());
        assert!(parse_circuit("gateset toffoli+h\nqubits 2\ncz 0 1").is_err());
        assert!(parse_circuit("qubits 1\nprep 0 q").is_err());
        assert!(parse_circuit("qubits 1\nphasek 0 0").is_err());
    }

    #[test]
    fn round_trip() {
        let src = "# demo\nqubits 5\ngateset clifford+t\nprep 0 T\nprep 1 zkdg 4\nprep ccz 2 3 4\nh 0\ntdg 1 # inline\ncx 0 1\n";
        let c = parse_circuit(src).unwrap();
        let text = serialize_circuit(&c);
        assert_eq!(parse_circuit(&text).unwrap(), c);
        assert_eq!(serialize_circuit(&parse_circuit(&text).unwrap()), text);
        let d = parse_circuit("qubits 4\ncphasekdg 3 0 1 2\nmcx 0 1 2 3\nphasek 5 0").unwrap();
        assert_eq!(parse_circuit(&serialize_circuit(&d)).unwrap(), d);
    }
}
