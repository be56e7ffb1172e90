//! Small random diagrams for property tests and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{NodeId, ZhDiagram};
use crate::ring::{RingElement, Tower};

#[derive(Debug, Clone)]
pub struct RandomSpec {
    /// Z-spiders and H-boxes, excluding stars and catalyst boxes.
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_inputs: usize,
    pub max_outputs: usize,
    /// Labels for the internal H-boxes.
    pub labels: Vec<RingElement>,
    /// Unary H-boxes labelled `a`, between 0 and `max_a_boxes` of them.
    pub catalyst: Option<RingElement>,
    pub max_a_boxes: usize,
}

impl RandomSpec {
    pub fn phase_free(tower: &Tower) -> Self {
        RandomSpec {
            max_nodes: 6,
            max_edges: 9,
            max_inputs: 2,
            max_outputs: 2,
            labels: vec![tower.from_int(-1)],
            catalyst: None,
            max_a_boxes: 0,
        }
    }

    /// Labels are drawn from `{-1, 2, 1/2}` plus `i` when `a` comes after it.
    pub fn with_catalyst(tower: &Tower, a: &RingElement) -> Self {
        let mut labels = vec![
            tower.from_int(-1),
            tower.from_int(2),
            tower.one().div_pow2(1),
        ];
        if let Ok(i) = tower.i() {
            if !i.involves_generators_from(generator_position(tower, a)) {
                labels.push(i);
            }
        }
        RandomSpec {
            labels,
            catalyst: Some(a.clone()),
            max_a_boxes: 4,
            ..RandomSpec::phase_free(tower)
        }
    }
}

fn generator_position(tower: &Tower, a: &RingElement) -> usize {
    (0..tower.len())
        .find(|&j| &tower.generator(j) == a)
        .unwrap_or(0)
}

pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, spec: &RandomSpec) -> ZhDiagram {
    let n_in = rng.random_range(0..=spec.max_inputs);
    let n_out = rng.random_range(0..=spec.max_outputs);
    random_diagram_shaped(rng, spec, n_in, n_out)
}

/// Like [`random_diagram`] with exactly `n_in` inputs and `n_out` outputs.
pub fn random_diagram_shaped<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &RandomSpec,
    n_in: usize,
    n_out: usize,
) -> ZhDiagram {
    let mut d = ZhDiagram::new();
    let n = rng.random_range(1..=spec.max_nodes.max(1));
    let inner: Vec<NodeId> = (0..n)
        .map(|_| match spec.labels.choose(rng) {
            Some(l) if rng.random_bool(0.5) => d.add_h(l.clone()),
            _ => d.add_z(),
        })
        .collect();
    for _ in 0..rng.random_range(0..=spec.max_edges) {
        let a = *inner.choose(rng).expect("non-empty");
        let b = *inner.choose(rng).expect("non-empty");
        d.add_edge(a, b);
    }
    for _ in 0..rng.random_range(0..=2) {
        d.add_star();
    }
    if let Some(a) = &spec.catalyst {
        for _ in 0..rng.random_range(0..=spec.max_a_boxes) {
            let h = d.add_h(a.clone());
            let p = *inner.choose(rng).expect("non-empty");
            d.add_edge(h, p);
        }
    }
    for _ in 0..n_in {
        let p = *inner.choose(rng).expect("non-empty");
        d.add_input(p);
    }
    for _ in 0..n_out {
        let p = *inner.choose(rng).expect("non-empty");
        d.add_output(p);
    }
    d
}
