//! Catalysis-based extraction of an adjoined generator `a`.
//!
//! Any number of unary `a`-boxes can be merged into one using the
//! catalysis rule (two `a`-states equal one `a`-state plus `a`-free
//! structure with a binary `a^2` box). With exactly one left, the diagram is
//! `D'[|0> + a|1>] = D'[|0>] + a D'[|1>]` with `D'` free of `a`.

use super::build::add_x_spider;
use super::rules::{apply_rule, labels_equal, register_rule, RewriteRule, RuleBook};
use super::{eval_tensor, NodeId, NodeKind, ZhDiagram, ZhError};
use crate::ring::{RingElement, RingMatrix, Tower};

/// Two unary `a`-boxes on the left; on the right, the data wire `x` and the
/// wire `d = x XOR c` of a single remaining `a`-state `c`, joined by a
/// binary `a^2` box. Correct since `a^(x + d) = a^(x XOR d) (a^2)^(x d)`.
pub fn catalysis_rule(a: &RingElement) -> Result<RewriteRule, ZhError> {
    if a.is_zero() {
        return Err(ZhError::Catalyst("catalysis needs a != 0".into()));
    }
    let tower = a.tower().clone();
    let mut l = ZhDiagram::new();
    for _ in 0..2 {
        let h = l.add_h(a.clone());
        l.add_output(h);
    }
    let mut r = ZhDiagram::new();
    let zx = r.add_z();
    let zd = r.add_z();
    let legs = add_x_spider(&mut r, &tower, 3);
    let c = r.add_h(a.clone());
    let sq = r.add_h(a * a);
    r.add_edge(legs[0], zx);
    r.add_edge(legs[1], zd);
    r.add_edge(legs[2], c);
    r.add_edge(zx, sq);
    r.add_edge(zd, sq);
    r.add_output(zx);
    r.add_output(zd);
    RewriteRule::new(format!("cat[{a}]"), l, r)
}

/// The empty diagram equals a unary X-spider (the effect `<0|`, exactly)
/// plugged with an `a`-state.
pub fn scalar_intro_rule(a: &RingElement) -> Result<RewriteRule, ZhError> {
    let tower = a.tower().clone();
    let mut r = ZhDiagram::new();
    let leg = add_x_spider(&mut r, &tower, 1);
    let h = r.add_h(a.clone());
    r.add_edge(leg[0], h);
    RewriteRule::new(format!("intro[{a}]"), ZhDiagram::new(), r)
}

/// Binary `a^2` box as two `a`-states and an `a^-1`-state on the XOR.
pub fn euler_rule(a: &RingElement) -> Result<RewriteRule, ZhError> {
    let inv = a.checked_inverse()?;
    let tower = a.tower().clone();
    let mut l = ZhDiagram::new();
    let sq = l.add_h(a * a);
    l.add_output(sq);
    l.add_output(sq);
    let mut r = ZhDiagram::new();
    let zx = r.add_z();
    let zy = r.add_z();
    for z in [zx, zy] {
        let h = r.add_h(a.clone());
        r.add_edge(z, h);
    }
    let legs = add_x_spider(&mut r, &tower, 3);
    let hi = r.add_h(inv);
    r.add_edge(legs[0], zx);
    r.add_edge(legs[1], zy);
    r.add_edge(legs[2], hi);
    r.add_output(zx);
    r.add_output(zy);
    RewriteRule::new(format!("euler[{a}]"), l, r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub ids: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
}

/// Which pair of `a`-boxes each catalysis step merges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExtractOrder {
    /// The two lowest node ids.
    #[default]
    Lowest,
    /// The two highest node ids.
    Highest,
}

fn generator_index(a: &RingElement) -> Result<usize, ZhError> {
    let t = a.tower();
    (0..t.len())
        .find(|&j| &t.generator(j) == a)
        .ok_or_else(|| ZhError::Catalyst(format!("{a} is not a generator of its tower")))
}

fn is_a_box(k: &NodeKind, a: &RingElement) -> bool {
    matches!(k, NodeKind::H(l) if labels_equal(l, a))
}

/// Unary `a`-boxes in id order.
fn a_boxes(d: &ZhDiagram, a: &RingElement) -> Vec<NodeId> {
    d.nodes()
        .iter()
        .filter(|(_, k)| is_a_box(k, a))
        .map(|(&id, _)| id)
        .collect()
}

pub fn a_box_count(d: &ZhDiagram, a: &RingElement) -> usize {
    a_boxes(d, a).len()
}

/// `a` must be a tower generator, every `a`-box unary, and every other
/// label free of `a` and later generators.
fn check_preconditions(d: &ZhDiagram, a: &RingElement) -> Result<usize, ZhError> {
    let j = generator_index(a)?;
    for (&id, k) in d.nodes() {
        if let NodeKind::H(l) = k {
            if is_a_box(k, a) {
                if d.degree(id) != 1 {
                    return Err(ZhError::Catalyst(format!(
                        "{a}-labelled H-box {id} has arity {}",
                        d.degree(id)
                    )));
                }
            } else if l
                .lift(a.tower())
                .map_or(true, |x| x.involves_generators_from(j))
            {
                return Err(ZhError::Catalyst(format!(
                    "label {l} of node {id} involves {a}"
                )));
            }
        }
    }
    Ok(j)
}

pub fn extract_catalyst(
    d: &ZhDiagram,
    a: &RingElement,
) -> Result<(ZhDiagram, ProofTrace), ZhError> {
    extract_catalyst_with(d, a, ExtractOrder::default())
}

/// Rewrites `d` until exactly one unary `a`-box remains: one catalysis step
/// per surplus box, or one scalar introduction when there is none.
pub fn extract_catalyst_with(
    d: &ZhDiagram,
    a: &RingElement,
    order: ExtractOrder,
) -> Result<(ZhDiagram, ProofTrace), ZhError> {
    check_preconditions(d, a)?;
    let mut trace = ProofTrace::default();
    let mut cur = d.clone();
    if a_box_count(&cur, a) == 0 {
        let rule = scalar_intro_rule(a)?;
        cur = apply_rule(&cur, &rule, &[])?;
        trace.steps.push(TraceStep {
            rule: rule.name,
            ids: vec![],
        });
        return Ok((cur, trace));
    }
    let rule = catalysis_rule(a)?;
    loop {
        let boxes = a_boxes(&cur, a);
        if boxes.len() < 2 {
            break;
        }
        let ids = match order {
            ExtractOrder::Lowest => vec![boxes[0], boxes[1]],
            ExtractOrder::Highest => vec![boxes[boxes.len() - 2], boxes[boxes.len() - 1]],
        };
        cur = apply_rule(&cur, &rule, &ids)?;
        trace.steps.push(TraceStep {
            rule: rule.name.clone(),
            ids,
        });
    }
    Ok((cur, trace))
}

/// A rule book holding the catalysis and scalar rules for `a`.
pub fn catalyst_rule_book(a: &RingElement) -> Result<RuleBook, ZhError> {
    let mut book = RuleBook::new(a.tower());
    register_rule(&mut book, catalysis_rule(a)?)?;
    register_rule(&mut book, scalar_intro_rule(a)?)?;
    Ok(book)
}

/// Re-applies every step of `trace` to `d`.
pub fn replay_trace(
    d: &ZhDiagram,
    trace: &ProofTrace,
    book: &RuleBook,
) -> Result<ZhDiagram, ZhError> {
    let mut cur = d.clone();
    for s in &trace.steps {
        cur = apply_rule(&cur, book.get(&s.rule)?, &s.ids)?;
    }
    Ok(cur)
}

/// `eval(d) = m0 + a m1` with `m0`, `m1` free of `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub m0: RingMatrix,
    pub m1: RingMatrix,
}

/// Cuts the single `a`-box off and evaluates the remaining diagram with
/// `|0>` and `|1>` on the freed wire.
pub fn split_on_catalyst(d: &ZhDiagram, a: &RingElement) -> Result<SplitResult, ZhError> {
    let j = check_preconditions(d, a)?;
    let boxes = a_boxes(d, a);
    if boxes.len() != 1 {
        return Err(ZhError::Catalyst(format!(
            "split needs exactly one {a}-box, found {}",
            boxes.len()
        )));
    }
    let tower: Tower = a.tower().clone();
    let h = boxes[0];
    let p = d.neighbors(h)[0];
    let mut open = d.clone();
    open.remove_node(h);
    open.add_input(p);
    let m = eval_tensor(&open, &tower)?;
    let (rows, cols) = (m.rows(), m.cols() / 2);
    let mut m0 = RingMatrix::zeros(&tower, rows, cols);
    let mut m1 = RingMatrix::zeros(&tower, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m0.set(r, c, m.get(r, 2 * c).clone());
            m1.set(r, c, m.get(r, 2 * c + 1).clone());
        }
    }
    for x in m0.entries().iter().chain(m1.entries()) {
        if x.involves_generators_from(j) {
            return Err(ZhError::Catalyst(format!(
                "component entry {x} involves {a}"
            )));
        }
    }
    let whole = eval_tensor(d, &tower)?;
    if m0.add(&m1.scale(a))? != whole {
        return Err(ZhError::Catalyst(
            "m0 + a m1 differs from the diagram".into(),
        ));
    }
    Ok(SplitResult { m0, m1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zh::random::{random_diagram, RandomSpec};
    use crate::zh::{semantic_equal, unary_state};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ct() -> Tower {
        Tower::clifford_t()
    }

    #[test]
    fn rules_sound_for_i_omega_and_minus_one() {
        let t = ct();
        for a in [t.i().unwrap(), t.generator(1), t.from_int(-1)] {
            catalysis_rule(&a).unwrap().check_sound(&t).unwrap();
            scalar_intro_rule(&a).unwrap().check_sound(&t).unwrap();
            euler_rule(&a).unwrap().check_sound(&t).unwrap();
        }
        assert!(catalysis_rule(&t.zero()).is_err());
    }

    #[test]
    fn counts_and_steps() {
        let t = ct();
        let w = t.generator(1);
        for n in 0..=5 {
            let mut d = ZhDiagram::new();
            let z = d.add_z();
            d.add_output(z);
            for _ in 0..n {
                let h = d.add_h(w.clone());
                d.add_edge(z, h);
            }
            let (e, trace) = extract_catalyst(&d, &w).unwrap();
            assert_eq!(a_box_count(&e, &w), 1);
            assert_eq!(trace.steps.len(), if n == 0 { 1 } else { n - 1 });
            assert!(semantic_equal(&d, &e, &t).unwrap());
            let book = catalyst_rule_book(&w).unwrap();
            assert_eq!(replay_trace(&d, &trace, &book).unwrap(), e);
        }
    }

    #[test]
    fn split_of_the_state_itself() {
        let t = ct();
        let i = t.i().unwrap();
        let s = split_on_catalyst(&unary_state(i), &t.i().unwrap()).unwrap();
        assert!(s.m0.get(0, 0).is_one() && s.m0.get(1, 0).is_zero());
        assert!(s.m1.get(0, 0).is_zero() && s.m1.get(1, 0).is_one());
    }

    #[test]
    fn rejects_binary_a_box() {
        let t = ct();
        let i = t.i().unwrap();
        let mut d = ZhDiagram::new();
        let h = d.add_h(i.clone());
        d.add_output(h);
        d.add_output(h);
        assert!(extract_catalyst(&d, &i).is_err());
    }

    #[test]
    fn random_extraction_and_uniqueness() {
        let t = ct();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for a in [t.i().unwrap(), t.generator(1)] {
            let spec = RandomSpec::with_catalyst(&t, &a);
            for _ in 0..25 {
                let d = random_diagram(&mut rng, &spec);
                let (e1, _) = extract_catalyst_with(&d, &a, ExtractOrder::Lowest).unwrap();
                let (e2, _) = extract_catalyst_with(&d, &a, ExtractOrder::Highest).unwrap();
                let s1 = split_on_catalyst(&e1, &a).unwrap();
                let s2 = split_on_catalyst(&e2, &a).unwrap();
                assert_eq!(s1, s2);
            }
        }
    }
}
