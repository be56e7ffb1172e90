use catalyst_core::circuit::random::random_clifford_t;
use catalyst_core::circuit::unitary_of;
use catalyst_core::ring::{RingMatrix, Tower};
use catalyst_core::zh::random::{random_diagram, random_diagram_shaped, RandomSpec};
use catalyst_core::zh::{
    a_box_count, circuit_to_diagram, compose, eval_tensor, extract_catalyst, h_box, parse_diagram,
    semantic_equal, serialize_diagram, split_on_catalyst, tensor, unary_state, ZhDiagram,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small() -> RandomSpec {
    RandomSpec {
        labels: {
            let t = Tower::clifford_t();
            vec![
                t.from_int(-1),
                t.i().unwrap(),
                t.generator(1),
                t.from_int(2),
            ]
        },
        ..RandomSpec::phase_free(&Tower::clifford_t())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_matrix_product(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2, c in 0usize..=2) {
        let t = Tower::clifford_t();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d1 = random_diagram_shaped(&mut rng, &small(), a, b);
        let d2 = random_diagram_shaped(&mut rng, &small(), b, c);
        let want = eval_tensor(&d2, &t).unwrap().mul(&eval_tensor(&d1, &t).unwrap());
        prop_assert_eq!(eval_tensor(&compose(&d1, &d2).unwrap(), &t).unwrap(), want);
    }

    #[test]
    fn tensor_is_kronecker(seed in any::<u64>()) {
        let t = Tower::clifford_t();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d1 = random_diagram(&mut rng, &small());
        let d2 = random_diagram(&mut rng, &small());
        let want = eval_tensor(&d1, &t).unwrap().kron(&eval_tensor(&d2, &t).unwrap());
        prop_assert_eq!(eval_tensor(&tensor(&d1, &d2), &t).unwrap(), want);
    }

    #[test]
    fn circuits_match_their_diagrams(seed in any::<u64>(), width in 1usize..=3, len in 0usize..=10) {
        let t = Tower::clifford_t();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_clifford_t(&mut rng, width, len, 2);
        let cd = circuit_to_diagram(&c, &t).unwrap();
        let want = unitary_of(&c, &t).unwrap().scale(&cd.scalar);
        prop_assert_eq!(eval_tensor(&cd.diagram, &t).unwrap(), want);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let t = Tower::clifford_t();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &small());
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text, &t).unwrap();
        prop_assert_eq!(serialize_diagram(&back), text);
    }

    #[test]
    fn extraction_and_split(seed in any::<u64>(), omega in any::<bool>()) {
        let t = Tower::clifford_t();
        let a = if omega { t.generator(1) } else { t.i().unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &RandomSpec::with_catalyst(&t, &a));
        let n = a_box_count(&d, &a);
        let (e, trace) = extract_catalyst(&d, &a).unwrap();
        prop_assert_eq!(a_box_count(&e, &a), 1);
        prop_assert_eq!(trace.steps.len(), n.saturating_sub(1).max(usize::from(n == 0)));
        prop_assert!(semantic_equal(&d, &e, &t).unwrap());
        let s = split_on_catalyst(&e, &a).unwrap();
        let whole = s.m0.add(&s.m1.scale(&a)).unwrap();
        prop_assert_eq!(whole, eval_tensor(&d, &t).unwrap());
    }
}

fn column(t: &Tower, xs: [i64; 2]) -> RingMatrix {
    RingMatrix::column(xs.iter().map(|&x| t.from_int(x)).collect())
}

#[test]
fn unary_box_is_a_phase_state() {
    // an a-box on a one-legged Z-spider is the state |0> + a|1>
    let t = Tower::clifford_t();
    for a in [t.i().unwrap(), t.generator(1), t.from_int(-1)] {
        let mut d = ZhDiagram::new();
        let z = d.add_z();
        let h = d.add_h(a.clone());
        d.add_edge(z, h);
        d.add_output(z);
        let state = eval_tensor(&unary_state(a.clone()), &t).unwrap();
        assert_eq!(eval_tensor(&d, &t).unwrap(), state);
        assert!(state.get(0, 0).is_one());
        assert_eq!(state.get(1, 0), &a);
    }
    let one = eval_tensor(&h_box(t.one(), 0, 1), &t).unwrap();
    assert_eq!(one, column(&t, [1, 1]));
}

#[test]
fn tensor_of_two_minus_states() {
    let t = Tower::dyadic();
    let s = h_box(t.from_int(-1), 0, 1);
    let m = eval_tensor(&tensor(&s, &s), &t).unwrap();
    let want = RingMatrix::column([1, -1, -1, 1].iter().map(|&x| t.from_int(x)).collect());
    assert_eq!(m, want);
}
