//! Rewrite rules as concrete pattern pairs.
//!
//! A rule's interface is the boundary of its left-hand side (inputs then
//! outputs); boundary `k` of the lhs corresponds to boundary `k` of the rhs.
//! Parameterised rules are families of such instances.

use std::collections::{BTreeMap, BTreeSet};

use super::build::add_x_spider;
use super::{eval_tensor, NodeId, NodeKind, ZhDiagram, ZhError};
use crate::ring::{RingElement, Tower};

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    pub name: String,
    pub lhs: ZhDiagram,
    pub rhs: ZhDiagram,
}

fn interface(d: &ZhDiagram) -> Vec<NodeId> {
    d.inputs().iter().chain(d.outputs()).copied().collect()
}

pub(crate) fn labels_equal(a: &RingElement, b: &RingElement) -> bool {
    a == b || a.lift(b.tower()).is_ok_and(|x| &x == b) || b.lift(a.tower()).is_ok_and(|x| &x == a)
}

fn kinds_match(p: &NodeKind, k: &NodeKind) -> bool {
    match (p, k) {
        (NodeKind::H(a), NodeKind::H(b)) => labels_equal(a, b),
        _ => p == k,
    }
}

impl RewriteRule {
    pub fn new(
        name: impl Into<String>,
        lhs: ZhDiagram,
        rhs: ZhDiagram,
    ) -> Result<RewriteRule, ZhError> {
        let name = name.into();
        lhs.validate()?;
        rhs.validate()?;
        if lhs.inputs().len() != rhs.inputs().len() || lhs.outputs().len() != rhs.outputs().len() {
            return Err(ZhError::Arity(format!(
                "rule {name}: sides have different boundaries"
            )));
        }
        for b in interface(&lhs) {
            let nb = lhs.neighbors(b)[0];
            if lhs.node(nb) == Some(&NodeKind::Boundary) {
                return Err(ZhError::Invalid(format!(
                    "rule {name}: lhs boundary {b} is a bare wire"
                )));
            }
        }
        Ok(RewriteRule { name, lhs, rhs })
    }

    /// Lhs internal nodes in the order a match lists their images.
    pub fn pattern_nodes(&self) -> Vec<NodeId> {
        self.lhs
            .nodes()
            .iter()
            .filter(|(_, k)| **k != NodeKind::Boundary)
            .map(|(&id, _)| id)
            .collect()
    }

    /// Exact comparison of both sides.
    pub fn check_sound(&self, tower: &Tower) -> Result<(), ZhError> {
        let l = eval_tensor(&self.lhs, tower)?;
        let r = eval_tensor(&self.rhs, tower)?;
        for row in 0..l.rows() {
            for col in 0..l.cols() {
                if l.get(row, col) != r.get(row, col) {
                    return Err(ZhError::Unsound {
                        rule: self.name.clone(),
                        witness: format!(
                            "entry ({row}, {col}): lhs {} vs rhs {}",
                            l.get(row, col),
                            r.get(row, col)
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// The rule read right to left.
    pub fn reversed(&self) -> Result<RewriteRule, ZhError> {
        RewriteRule::new(
            format!("{}~", self.name),
            self.rhs.clone(),
            self.lhs.clone(),
        )
    }
}

/// Replaces the lhs occurrence at `matched` (images of
/// [`RewriteRule::pattern_nodes`], in order) by the rhs.
pub fn apply_rule(
    d: &ZhDiagram,
    rule: &RewriteRule,
    matched: &[NodeId],
) -> Result<ZhDiagram, ZhError> {
    let err = |msg: String| ZhError::Match {
        rule: rule.name.clone(),
        msg,
    };
    let pat = rule.pattern_nodes();
    if matched.len() != pat.len() {
        return Err(err(format!(
            "expected {} node ids, got {}",
            pat.len(),
            matched.len()
        )));
    }
    let image: BTreeMap<NodeId, NodeId> =
        pat.iter().copied().zip(matched.iter().copied()).collect();
    if image.values().collect::<BTreeSet<_>>().len() != matched.len() {
        return Err(err("node ids repeat".into()));
    }
    for (&p, &m) in &image {
        let k = d.node(m).ok_or_else(|| err(format!("no node {m}")))?;
        if !kinds_match(rule.lhs.node(p).expect("pattern node"), k) {
            return Err(err(format!("node {m} has the wrong kind or label")));
        }
        if d.degree(m) != rule.lhs.degree(p) {
            return Err(err(format!(
                "node {m} has degree {}, pattern wants {}",
                d.degree(m),
                rule.lhs.degree(p)
            )));
        }
    }

    // consume the pattern's internal edges
    let mut used = vec![false; d.edges().len()];
    for &(a, b) in rule.lhs.edges() {
        let (Some(&ma), Some(&mb)) = (image.get(&a), image.get(&b)) else {
            continue;
        };
        let slot =
            d.edges().iter().enumerate().position(|(e, &(x, y))| {
                !used[e] && ((x == ma && y == mb) || (x == mb && y == ma))
            });
        match slot {
            Some(e) => used[e] = true,
            None => return Err(err(format!("missing edge {ma}-{mb}"))),
        }
    }

    // remaining half-edges of matched nodes, assigned to lhs boundary legs
    let boundary = interface(&rule.lhs);
    let mut legs_of: BTreeMap<NodeId, Vec<usize>> = BTreeMap::new();
    for (k, &b) in boundary.iter().enumerate() {
        legs_of.entry(rule.lhs.neighbors(b)[0]).or_default().push(k);
    }
    // (edge, endpoint) for each interface slot
    let mut slot_of = vec![(0usize, 0usize); boundary.len()];
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&p, &m) in &image {
        let halves: Vec<(usize, usize)> = d
            .edges()
            .iter()
            .enumerate()
            .filter(|(e, _)| !used[*e])
            .flat_map(|(e, &(x, y))| {
                let mut v = Vec::new();
                if x == m {
                    v.push((e, 0));
                }
                if y == m {
                    v.push((e, 1));
                }
                v
            })
            .collect();
        let legs = legs_of.get(&p).cloned().unwrap_or_default();
        if halves.len() != legs.len() {
            return Err(err(format!(
                "node {m} has the wrong number of outside edges"
            )));
        }
        for (h, k) in halves.into_iter().zip(legs) {
            slot_of[k] = h;
            owner.insert(h, k);
        }
    }

    let mut out = d.clone();
    for &m in matched {
        out.remove_node(m);
    }
    let mut rhs_only = rule.rhs.clone();
    rhs_only.set_inputs(vec![]);
    rhs_only.set_outputs(vec![]);
    let map = out.absorb(&rhs_only);
    let tb: Vec<NodeId> = interface(&rule.rhs).iter().map(|b| map[b]).collect();
    for (k, &(e, end)) in slot_of.iter().enumerate() {
        let (x, y) = d.edges()[e];
        let other = if end == 0 { y } else { x };
        if image.values().any(|&m| m == other) {
            let k2 = owner[&(e, 1 - end)];
            if k < k2 {
                out.add_edge(tb[k], tb[k2]);
            }
        } else {
            out.add_edge(tb[k], other);
        }
    }
    for &t in &tb {
        out.splice_out(t);
    }
    Ok(out)
}

/// All matches of the rule's lhs in `d`, up to `limit`.
pub fn find_matches(d: &ZhDiagram, rule: &RewriteRule, limit: usize) -> Vec<Vec<NodeId>> {
    let pat = rule.pattern_nodes();
    let cands: Vec<Vec<NodeId>> = pat
        .iter()
        .map(|&p| {
            let pk = rule.lhs.node(p).expect("pattern node");
            d.nodes()
                .iter()
                .filter(|(&id, k)| kinds_match(pk, k) && d.degree(id) == rule.lhs.degree(p))
                .map(|(&id, _)| id)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    search(d, rule, &pat, &cands, &mut cur, &mut out, limit);
    out
}

fn search(
    d: &ZhDiagram,
    rule: &RewriteRule,
    pat: &[NodeId],
    cands: &[Vec<NodeId>],
    cur: &mut Vec<NodeId>,
    out: &mut Vec<Vec<NodeId>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let i = cur.len();
    if i == pat.len() {
        out.push(cur.clone());
        return;
    }
    for &c in &cands[i] {
        if cur.contains(&c) {
            continue;
        }
        let fits = (0..=i).all(|j| {
            let (pj, mj) = if j == i {
                (pat[i], c)
            } else {
                (pat[j], cur[j])
            };
            rule.lhs.edge_count_between(pat[i], pj) <= d.edge_count_between(c, mj)
        });
        if fits {
            cur.push(c);
            search(d, rule, pat, cands, cur, out, limit);
            cur.pop();
        }
    }
}

/// A set of rules that passed the soundness gate.
#[derive(Debug, Clone)]
pub struct RuleBook {
    tower: Tower,
    rules: BTreeMap<String, RewriteRule>,
}

impl RuleBook {
    pub fn new(tower: &Tower) -> Self {
        RuleBook {
            tower: tower.clone(),
            rules: BTreeMap::new(),
        }
    }

    /// Every phase-free family instantiated with spider degrees up to
    /// `max_degree`.
    pub fn phase_free(tower: &Tower, max_degree: usize) -> Result<RuleBook, ZhError> {
        let mut book = RuleBook::new(tower);
        for f in Family::ALL {
            for r in f.instances(tower, max_degree) {
                register_rule(&mut book, r)?;
            }
        }
        Ok(book)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn get(&self, name: &str) -> Result<&RewriteRule, ZhError> {
        self.rules
            .get(name)
            .ok_or_else(|| ZhError::UnknownRule(name.into()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(|s| s.as_str())
    }

    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.values()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// Admits `rule` only if both sides evaluate to the same matrix.
pub fn register_rule(book: &mut RuleBook, rule: RewriteRule) -> Result<(), ZhError> {
    rule.check_sound(&book.tower)?;
    book.rules.insert(rule.name.clone(), rule);
    Ok(())
}

/// The phase-free rule families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Connected Z-spiders fuse.
    ZFusion,
    /// H-boxes joined through a binary H-box fuse (with a star).
    HFusion,
    /// A binary Z-spider is a wire.
    Identity,
    /// Two binary H-boxes in a row are a wire (with a star).
    HH,
    /// Two unary (-1) boxes on a Z-spider cancel.
    Multiply,
    /// Z-spider against X-spider.
    Bialgebra1,
    /// Z-spider against AND.
    Bialgebra2,
    /// `AND(x, x) = x`.
    And,
    /// An H-box with a `|0>` input copies into unary Z-spiders.
    HCopy,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::ZFusion,
        Family::HFusion,
        Family::Identity,
        Family::HH,
        Family::Multiply,
        Family::Bialgebra1,
        Family::Bialgebra2,
        Family::And,
        Family::HCopy,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::ZFusion => "zs",
            Family::HFusion => "hs",
            Family::Identity => "id",
            Family::HH => "hh",
            Family::Multiply => "m",
            Family::Bialgebra1 => "ba1",
            Family::Bialgebra2 => "ba2",
            Family::And => "and",
            Family::HCopy => "hc",
        }
    }

    /// All instances whose spiders have degree at most `max_degree`.
    pub fn instances(self, tower: &Tower, max_degree: usize) -> Vec<RewriteRule> {
        let top = max_degree.saturating_sub(1);
        let pairs = |lo: usize| -> Vec<Vec<usize>> {
            (lo..=top)
                .flat_map(|m| (lo..=top).map(move |n| vec![m, n]))
                .collect()
        };
        let params: Vec<Vec<usize>> = match self {
            Family::ZFusion | Family::HFusion | Family::Bialgebra1 | Family::Bialgebra2 => pairs(0),
            Family::Identity | Family::HH | Family::And => vec![vec![]],
            Family::Multiply => (0..=max_degree.saturating_sub(2))
                .map(|n| vec![n])
                .collect(),
            Family::HCopy => (0..=top).map(|n| vec![n]).collect(),
        };
        params
            .iter()
            .map(|p| {
                self.instance(tower, p)
                    .expect("family instances are well formed")
            })
            .collect()
    }

    pub fn instance(self, tower: &Tower, p: &[usize]) -> Result<RewriteRule, ZhError> {
        let need = match self {
            Family::ZFusion | Family::HFusion | Family::Bialgebra1 | Family::Bialgebra2 => 2,
            Family::Multiply | Family::HCopy => 1,
            _ => 0,
        };
        if p.len() != need {
            return Err(ZhError::Arity(format!(
                "{} takes {need} parameters",
                self.tag()
            )));
        }
        let neg = tower.from_int(-1);
        let name = if p.is_empty() {
            self.tag().to_string()
        } else {
            let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            format!("{}({})", self.tag(), ps.join(","))
        };
        let (lhs, rhs) = match self {
            Family::ZFusion => {
                let (m, n) = (p[0], p[1]);
                let mut l = ZhDiagram::new();
                let u = l.add_z();
                let v = l.add_z();
                l.add_edge(u, v);
                for _ in 0..m {
                    l.add_input(u);
                }
                for _ in 0..n {
                    l.add_input(v);
                }
                let mut r = ZhDiagram::new();
                let w = r.add_z();
                for _ in 0..m + n {
                    r.add_input(w);
                }
                (l, r)
            }
            Family::HFusion => {
                let (m, n) = (p[0], p[1]);
                let mut l = ZhDiagram::new();
                let u = l.add_h(neg.clone());
                let k = l.add_h(neg.clone());
                let v = l.add_h(neg.clone());
                l.add_star();
                l.add_edge(u, k);
                l.add_edge(k, v);
                for _ in 0..m {
                    l.add_input(u);
                }
                for _ in 0..n {
                    l.add_input(v);
                }
                let mut r = ZhDiagram::new();
                let w = r.add_h(neg.clone());
                for _ in 0..m + n {
                    r.add_input(w);
                }
                (l, r)
            }
            Family::Identity => {
                let mut l = ZhDiagram::new();
                let z = l.add_z();
                l.add_input(z);
                l.add_output(z);
                let mut r = ZhDiagram::new();
                r.add_wire();
                (l, r)
            }
            Family::HH => {
                let mut l = ZhDiagram::new();
                let a = l.add_h(neg.clone());
                let b = l.add_h(neg.clone());
                l.add_star();
                l.add_edge(a, b);
                l.add_input(a);
                l.add_output(b);
                let mut r = ZhDiagram::new();
                r.add_wire();
                (l, r)
            }
            Family::Multiply => {
                let n = p[0];
                let mut l = ZhDiagram::new();
                let z = l.add_z();
                for _ in 0..2 {
                    let h = l.add_h(neg.clone());
                    l.add_edge(z, h);
                }
                for _ in 0..n {
                    l.add_input(z);
                }
                let mut r = ZhDiagram::new();
                let w = r.add_z();
                for _ in 0..n {
                    r.add_input(w);
                }
                (l, r)
            }
            Family::Bialgebra1 => {
                let (m, n) = (p[0], p[1]);
                let mut l = ZhDiagram::new();
                let u = l.add_z();
                let legs = add_x_spider(&mut l, tower, n + 1);
                l.add_edge(u, legs[n]);
                for _ in 0..m {
                    l.add_input(u);
                }
                for &g in &legs[..n] {
                    l.add_input(g);
                }
                let mut r = ZhDiagram::new();
                let xs: Vec<Vec<NodeId>> =
                    (0..m).map(|_| add_x_spider(&mut r, tower, n + 1)).collect();
                let zs: Vec<NodeId> = (0..n).map(|_| r.add_z()).collect();
                for x in &xs {
                    for (j, &z) in zs.iter().enumerate() {
                        r.add_edge(x[j], z);
                    }
                }
                for x in &xs {
                    r.add_input(x[n]);
                }
                for &z in &zs {
                    r.add_input(z);
                }
                (l, r)
            }
            Family::Bialgebra2 => {
                let (m, n) = (p[0], p[1]);
                let mut l = ZhDiagram::new();
                let u = l.add_z();
                let out = add_and(&mut l, &neg, n);
                l.add_edge(out.1, u);
                for _ in 0..m {
                    l.add_input(u);
                }
                for &h in out.0.iter().take(n) {
                    l.add_input(h);
                }
                let mut r = ZhDiagram::new();
                let ands: Vec<(Vec<NodeId>, NodeId)> =
                    (0..m).map(|_| add_and(&mut r, &neg, 0)).collect();
                let zs: Vec<NodeId> = (0..n).map(|_| r.add_z()).collect();
                for (h, _) in &ands {
                    for &z in &zs {
                        r.add_edge(h[0], z);
                    }
                }
                for (_, k) in &ands {
                    r.add_input(*k);
                }
                for &z in &zs {
                    r.add_input(z);
                }
                (l, r)
            }
            Family::And => {
                let mut l = ZhDiagram::new();
                let u = l.add_z();
                let (h, k) = add_and(&mut l, &neg, 0);
                l.add_edge(u, h[0]);
                l.add_edge(u, h[0]);
                l.add_input(u);
                l.add_output(k);
                let mut r = ZhDiagram::new();
                r.add_wire();
                (l, r)
            }
            Family::HCopy => {
                let n = p[0];
                let mut l = ZhDiagram::new();
                let h = l.add_h(neg.clone());
                let leg = add_x_spider(&mut l, tower, 1);
                l.add_edge(h, leg[0]);
                for _ in 0..n {
                    l.add_input(h);
                }
                let mut r = ZhDiagram::new();
                for _ in 0..n {
                    let z = r.add_z();
                    r.add_input(z);
                }
                (l, r)
            }
        };
        RewriteRule::new(name, lhs, rhs)
    }
}

/// AND gate: an H-box with the returned legs (one if `n = 0`, otherwise `n`
/// open control legs on the same box) feeding a binary H-box whose node is
/// the output end, plus one star.
fn add_and(d: &mut ZhDiagram, neg: &RingElement, n: usize) -> (Vec<NodeId>, NodeId) {
    let h = d.add_h(neg.clone());
    let k = d.add_h(neg.clone());
    d.add_edge(h, k);
    d.add_star();
    (vec![h; n.max(1)], k)
}

/// `Z(a, b, rest...)`: a Z-spider with `n` open legs and unary boxes `a`,
/// `b` equals a Z-spider with the unary box `ab`.
pub fn multiply_rule(a: &RingElement, b: &RingElement, n: usize) -> Result<RewriteRule, ZhError> {
    let mut l = ZhDiagram::new();
    let z = l.add_z();
    for lab in [a, b] {
        let h = l.add_h(lab.clone());
        l.add_edge(z, h);
    }
    for _ in 0..n {
        l.add_input(z);
    }
    let mut r = ZhDiagram::new();
    let w = r.add_z();
    let h = r.add_h(a * b);
    r.add_edge(w, h);
    for _ in 0..n {
        r.add_input(w);
    }
    RewriteRule::new(format!("mult[{a};{b}]({n})"), l, r)
}
