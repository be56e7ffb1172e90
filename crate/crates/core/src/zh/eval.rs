//! Exact tensor semantics by variable elimination.
//!
//! Every wire carries a bit. A Z-spider forces all its wires to agree, so
//! its wires share one variable; an H-box labelled `a` contributes the
//! factor `a^(product of its wire bits)`; each star contributes 1/2.

use std::collections::{BTreeMap, BTreeSet};

use super::{NodeKind, ZhDiagram, ZhError};
use crate::ring::{RingElement, RingMatrix, Tower};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalCaps {
    /// Inputs plus outputs.
    pub max_boundary: usize,
    pub max_internal: usize,
    /// Largest intermediate factor, in variables.
    pub max_factor_vars: usize,
}

impl Default for EvalCaps {
    fn default() -> Self {
        EvalCaps {
            max_boundary: 12,
            max_internal: 512,
            max_factor_vars: 22,
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A table over sorted variables; bit `j` of the index is `vars[j]`.
#[derive(Clone)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<RingElement>,
}

impl Factor {
    fn value(&self, assign: &BTreeMap<usize, usize>) -> &RingElement {
        let idx = self
            .vars
            .iter()
            .enumerate()
            .map(|(j, v)| assign[v] << j)
            .sum::<usize>();
        &self.table[idx]
    }

    fn product(fs: &[Factor], tower: &Tower) -> Factor {
        let vars: Vec<usize> = fs
            .iter()
            .flat_map(|f| f.vars.iter().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // position of each factor variable inside the joint index
        let maps: Vec<Vec<usize>> = fs
            .iter()
            .map(|f| {
                f.vars
                    .iter()
                    .map(|v| vars.binary_search(v).expect("var present"))
                    .collect()
            })
            .collect();
        let table = (0..1usize << vars.len())
            .map(|x| {
                let mut acc = tower.one();
                for (f, m) in fs.iter().zip(&maps) {
                    let idx: usize = m
                        .iter()
                        .enumerate()
                        .map(|(j, &p)| ((x >> p) & 1) << j)
                        .sum();
                    let v = &f.table[idx];
                    if !v.is_one() {
                        acc = &acc * v;
                    }
                }
                acc
            })
            .collect();
        Factor { vars, table }
    }

    fn sum_out(&self, var: usize) -> Factor {
        let p = self.vars.binary_search(&var).expect("var present");
        let vars: Vec<usize> = self.vars.iter().copied().filter(|&v| v != var).collect();
        let low = (1usize << p) - 1;
        let table = (0..1usize << vars.len())
            .map(|x| {
                let base = (x & low) | ((x & !low) << 1);
                &self.table[base] + &self.table[base | (1 << p)]
            })
            .collect();
        Factor { vars, table }
    }
}

pub fn eval_tensor(d: &ZhDiagram, tower: &Tower) -> Result<RingMatrix, ZhError> {
    eval_tensor_capped(d, tower, EvalCaps::default())
}

/// The `2^|outputs| x 2^|inputs|` matrix of `d`; the first input/output is
/// the most significant bit of the column/row index.
pub fn eval_tensor_capped(
    d: &ZhDiagram,
    tower: &Tower,
    caps: EvalCaps,
) -> Result<RingMatrix, ZhError> {
    d.validate()?;
    let nb = d.inputs().len() + d.outputs().len();
    if nb > caps.max_boundary {
        return Err(ZhError::Cap(format!(
            "{nb} boundary wires > {}",
            caps.max_boundary
        )));
    }
    if d.internal_count() > caps.max_internal {
        return Err(ZhError::Cap(format!(
            "{} internal nodes > {}",
            d.internal_count(),
            caps.max_internal
        )));
    }

    // one variable per edge, plus one per isolated Z-spider
    let edges = d.edges();
    let mut extra = BTreeMap::new();
    for (&id, k) in d.nodes() {
        if *k == NodeKind::Z && d.degree(id) == 0 {
            let v = edges.len() + extra.len();
            extra.insert(id, v);
        }
    }
    let mut uf = UnionFind((0..edges.len() + extra.len()).collect());
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident.entry(a).or_default().push(e);
        incident.entry(b).or_default().push(e);
    }
    for (&id, k) in d.nodes() {
        if *k == NodeKind::Z {
            if let Some(es) = incident.get(&id) {
                for w in es.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
    }

    let mut scalar = tower.one();
    let mut factors = Vec::new();
    for (&id, k) in d.nodes() {
        match k {
            NodeKind::Star => scalar = scalar.div_pow2(1),
            NodeKind::H(label) => {
                let label = label
                    .lift(tower)
                    .map_err(|_| ZhError::Label(label.to_string()))?;
                let vars: BTreeSet<usize> = incident
                    .get(&id)
                    .map(|es| es.iter().map(|&e| uf.find(e)).collect())
                    .unwrap_or_default();
                if vars.is_empty() {
                    scalar = &scalar * &label;
                    continue;
                }
                if vars.len() > caps.max_factor_vars {
                    return Err(ZhError::Cap(format!("H-box of arity {}", vars.len())));
                }
                let vars: Vec<usize> = vars.into_iter().collect();
                let full = (1usize << vars.len()) - 1;
                let table = (0..=full)
                    .map(|x| {
                        if x == full {
                            label.clone()
                        } else {
                            tower.one()
                        }
                    })
                    .collect();
                factors.push(Factor { vars, table });
            }
            _ => {}
        }
    }

    let boundary: Vec<usize> = d
        .outputs()
        .iter()
        .chain(d.inputs())
        .map(|b| uf.find(incident[b][0]))
        .collect();
    let bset: BTreeSet<usize> = boundary.iter().copied().collect();
    let mut all: BTreeSet<usize> = (0..edges.len()).map(|e| uf.find(e)).collect();
    all.extend(extra.values().map(|&v| uf.find(v)));
    let mut internal: BTreeSet<usize> = all.difference(&bset).copied().collect();

    // variables touched by no factor just double the result
    let touched: BTreeSet<usize> = factors
        .iter()
        .flat_map(|f| f.vars.iter().copied())
        .collect();
    for v in internal.clone() {
        if !touched.contains(&v) {
            scalar = scalar.mul_pow2(1);
            internal.remove(&v);
        }
    }

    while !internal.is_empty() {
        // min-width elimination order, ties by variable index
        let (var, _) = internal
            .iter()
            .map(|&v| {
                let scope: BTreeSet<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&v))
                    .flat_map(|f| f.vars.iter().copied())
                    .collect();
                (v, scope.len())
            })
            .min_by_key(|&(v, w)| (w, v))
            .expect("non-empty");
        internal.remove(&var);
        let (with, without): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        let joint = Factor::product(&with, tower);
        if joint.vars.len() > caps.max_factor_vars {
            return Err(ZhError::Cap(format!(
                "intermediate factor over {} variables",
                joint.vars.len()
            )));
        }
        factors = without;
        let reduced = joint.sum_out(var);
        if reduced.vars.is_empty() {
            scalar = &scalar * &reduced.table[0];
        } else {
            factors.push(reduced);
        }
    }

    let joint = if factors.is_empty() {
        None
    } else {
        Some(Factor::product(&factors, tower))
    };
    let (no, ni) = (d.outputs().len(), d.inputs().len());
    let mut m = RingMatrix::zeros(tower, 1 << no, 1 << ni);
    for r in 0..1usize << no {
        for c in 0..1usize << ni {
            let mut assign = BTreeMap::new();
            let mut ok = true;
            for (pos, &v) in boundary.iter().enumerate() {
                let bit = if pos < no {
                    (r >> (no - 1 - pos)) & 1
                } else {
                    (c >> (ni - 1 - (pos - no))) & 1
                };
                if *assign.entry(v).or_insert(bit) != bit {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            let val = match &joint {
                Some(f) => f.value(&assign) * &scalar,
                None => scalar.clone(),
            };
            m.set(r, c, val);
        }
    }
    Ok(m)
}

/// Exact equality of the two linear maps.
pub fn semantic_equal(d1: &ZhDiagram, d2: &ZhDiagram, tower: &Tower) -> Result<bool, ZhError> {
    if d1.inputs().len() != d2.inputs().len() || d1.outputs().len() != d2.outputs().len() {
        return Err(ZhError::Arity(format!(
            "{}->{} vs {}->{}",
            d1.inputs().len(),
            d1.outputs().len(),
            d2.inputs().len(),
            d2.outputs().len()
        )));
    }
    Ok(eval_tensor(d1, tower)? == eval_tensor(d2, tower)?)
}
