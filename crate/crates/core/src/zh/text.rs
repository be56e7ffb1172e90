//! Line-oriented text form of diagrams and proof traces.
//!
//! ```text
//! # comment
//! node 0 boundary
//! node 1 z
//! node 2 h -1
//! node 3 h 1/2 + w
//! node 4 star
//! edge 0 1
//! in 0
//! out 5
//! ```
//!
//! An `h` without a label is the default `-1` box. Traces are one
//! `step RULE ID...` line per rewrite.

use std::fmt::Write as _;

use super::{NodeId, NodeKind, ProofTrace, TraceStep, ZhDiagram, ZhError};
use crate::ring::Tower;

fn syntax(line: usize, msg: impl Into<String>) -> ZhError {
    ZhError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_id(line: usize, s: &str) -> Result<NodeId, ZhError> {
    s.parse()
        .map_err(|_| syntax(line, format!("bad node id {s:?}")))
}

fn content(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

pub fn parse_diagram(text: &str, tower: &Tower) -> Result<ZhDiagram, ZhError> {
    let mut d = ZhDiagram::new();
    let mut edges = Vec::new();
    let (mut inputs, mut outputs) = (None, None);
    for (n, raw) in text.lines().enumerate() {
        let ln = n + 1;
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let (cmd, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match cmd {
            "node" => {
                let (id, kind) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let id = parse_id(ln, id)?;
                let kind = kind.trim();
                let (tag, label) = kind.split_once(char::is_whitespace).unwrap_or((kind, ""));
                let label = label.trim();
                let node = match tag {
                    "z" => NodeKind::Z,
                    "star" => NodeKind::Star,
                    "boundary" => NodeKind::Boundary,
                    "h" if label.is_empty() => NodeKind::H(tower.from_int(-1)),
                    "h" => NodeKind::H(
                        tower
                            .parse(label)
                            .map_err(|e| syntax(ln, format!("label {label:?}: {e}")))?,
                    ),
                    _ => return Err(syntax(ln, format!("unknown node kind {tag:?}"))),
                };
                if !label.is_empty() && tag != "h" {
                    return Err(syntax(ln, format!("{tag} nodes take no label")));
                }
                d.insert_node(id, node)
                    .map_err(|e| syntax(ln, e.to_string()))?;
            }
            "edge" => {
                let ids = rest
                    .split_whitespace()
                    .map(|s| parse_id(ln, s))
                    .collect::<Result<Vec<_>, _>>()?;
                if ids.len() != 2 {
                    return Err(syntax(ln, "edge needs two endpoints"));
                }
                edges.push((ln, ids[0], ids[1]));
            }
            "in" | "out" => {
                let ids = rest
                    .split_whitespace()
                    .map(|s| parse_id(ln, s))
                    .collect::<Result<Vec<_>, _>>()?;
                let slot = if cmd == "in" {
                    &mut inputs
                } else {
                    &mut outputs
                };
                if slot.replace(ids).is_some() {
                    return Err(syntax(ln, format!("repeated {cmd} line")));
                }
            }
            _ => return Err(syntax(ln, format!("unknown directive {cmd:?}"))),
        }
    }
    for (ln, a, b) in edges {
        for x in [a, b] {
            if d.node(x).is_none() {
                return Err(syntax(ln, format!("edge to undeclared node {x}")));
            }
        }
        d.add_edge(a, b);
    }
    d.set_inputs(inputs.unwrap_or_default());
    d.set_outputs(outputs.unwrap_or_default());
    d.validate()?;
    Ok(d)
}

fn id_list(ids: &[NodeId]) -> String {
    ids.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn serialize_diagram(d: &ZhDiagram) -> String {
    let mut s = String::new();
    for (id, k) in d.nodes() {
        match k {
            NodeKind::H(l) => writeln!(s, "node {id} h {l}"),
            k => writeln!(s, "node {id} {}", k.tag()),
        }
        .expect("string write");
    }
    for (a, b) in d.edges() {
        writeln!(s, "edge {a} {b}").expect("string write");
    }
    for (tag, ids) in [("in", d.inputs()), ("out", d.outputs())] {
        if ids.is_empty() {
            writeln!(s, "{tag}")
        } else {
            writeln!(s, "{tag} {}", id_list(ids))
        }
        .expect("string write");
    }
    s
}

pub fn parse_trace(text: &str) -> Result<ProofTrace, ZhError> {
    let mut steps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let body = content(raw);
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        if words.next() != Some("step") {
            return Err(syntax(n + 1, "expected `step RULE IDS`"));
        }
        let rule = words
            .next()
            .ok_or_else(|| syntax(n + 1, "missing rule name"))?
            .to_string();
        let ids = words
            .map(|w| parse_id(n + 1, w))
            .collect::<Result<Vec<_>, _>>()?;
        steps.push(TraceStep { rule, ids });
    }
    Ok(ProofTrace { steps })
}

pub fn serialize_trace(t: &ProofTrace) -> String {
    t.steps
        .iter()
        .map(|s| {
            if s.ids.is_empty() {
                format!("step {}\n", s.rule)
            } else {
                format!("step {} {}\n", s.rule, id_list(&s.ids))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zh::{cnot_diagram, eval_tensor};

    #[test]
    fn round_trip() {
        let t = Tower::clifford_t();
        let d = cnot_diagram(&t);
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text, &t).unwrap();
        assert_eq!(serialize_diagram(&back), text);
        assert_eq!(
            eval_tensor(&back, &t).unwrap(),
            eval_tensor(&d, &t).unwrap()
        );
    }

    #[test]
    fn labels_and_defaults() {
        let t = Tower::clifford_t();
        let d = parse_diagram(
            "# a state\nnode 0 h\nnode 1 boundary\nnode 2 h 1/2 + w\nedge 1 0\nout 1\n",
            &t,
        )
        .unwrap();
        assert_eq!(d.node(0), Some(&NodeKind::H(t.from_int(-1))));
        assert_eq!(d.node(2), Some(&NodeKind::H(t.parse("1/2 + w").unwrap())));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let t = Tower::dyadic();
        let e = parse_diagram("node 0 z\nedge 0 9\n", &t).unwrap_err();
        assert_eq!(
            e,
            ZhError::Syntax {
                line: 2,
                msg: "edge to undeclared node 9".into()
            }
        );
        assert!(matches!(
            parse_diagram("node 0 q\n", &t),
            Err(ZhError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn trace_round_trip() {
        let tr = ProofTrace {
            steps: vec![
                TraceStep {
                    rule: "cat[w]".into(),
                    ids: vec![3, 4],
                },
                TraceStep {
                    rule: "intro[w]".into(),
                    ids: vec![],
                },
            ],
        };
        assert_eq!(parse_trace(&serialize_trace(&tr)).unwrap(), tr);
    }
}
