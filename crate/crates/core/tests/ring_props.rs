use catalyst_core::ring::{Dyadic, RingElement, Tower};
use proptest::prelude::*;

fn element(tower: Tower) -> impl Strategy<Value = RingElement> {
    let dim = tower.dim();
    prop::collection::vec((-256i64..=256, 0u32..4), dim).prop_map(move |cs| {
        tower
            .element(cs.into_iter().map(|(n, e)| Dyadic::new(n, e)).collect())
            .unwrap()
    })
}

fn ct() -> impl Strategy<Value = RingElement> {
    element(Tower::clifford_t())
}

fn c16() -> impl Strategy<Value = RingElement> {
    element(Tower::cyclotomic(4).unwrap())
}

proptest! {
    #[test]
    fn ring_axioms(a in ct(), b in ct(), c in ct()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ring_axioms_deeper_tower(a in c16(), b in c16(), c in c16()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn conj_is_involutive_homomorphism(a in c16(), b in c16()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert!(a.real_part().is_real());
        let im = a.imag_part().unwrap();
        prop_assert!(im.is_real());
        let i = a.tower().i().unwrap();
        prop_assert_eq!(&a.real_part() + &(&i * &im), a);
    }

    #[test]
    fn float_embedding_is_homomorphism(xs in prop::collection::vec(ct(), 1..=20)) {
        let mut exact = xs[0].tower().one();
        let mut float = num_complex::Complex64::new(1.0, 0.0);
        for x in &xs {
            exact = &exact * x;
            float *= x.embed_float();
        }
        let e = exact.embed_float();
        let scale = e.norm().max(float.norm()).max(1e-300);
        prop_assert!((e - float).norm() / scale < 1e-9, "{e} vs {float}");
    }

    #[test]
    fn text_round_trip(a in c16()) {
        let back = a.tower().parse(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn units_invert_exactly(k in 0u32..8, m in 0u32..4, e in -3i32..=3, a in c16()) {
        // w^k (1 + w)^m 2^e is a unit; 1 + w has no dyadic complex norm
        let t = Tower::cyclotomic(4).unwrap();
        let w = t.generator(1);
        let pow2 = if e >= 0 { t.one().mul_pow2(e as u32) } else { t.one().div_pow2((-e) as u32) };
        let u = &(&w.pow(k) * &(&t.one() + &w).pow(m)) * &pow2;
        prop_assert!((&u * &u.checked_inverse().unwrap()).is_one());
        if let Ok(inv) = a.checked_inverse() {
            prop_assert!((&a * &inv).is_one());
        }
    }
}

#[test]
fn sqrt2_identities() {
    let t = Tower::clifford_t();
    let w = t.generator(1);
    let s = &w + &w.conj();
    assert_eq!(&s * &s, t.from_int(2));
    let h = s.div_pow2(1);
    assert_eq!(&h * &h, t.ratio(1, 1));
}
