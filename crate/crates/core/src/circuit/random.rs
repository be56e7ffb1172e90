//! Random circuits and ring elements for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, Gate};
use crate::ring::{Dyadic, RingElement, Tower};

fn random_pair<R: Rng + ?Sized>(rng: &mut R, width: usize) -> (usize, usize) {
    let a = rng.random_range(0..width);
    let mut b = rng.random_range(0..width - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn random_clifford<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Gate {
    let q = rng.random_range(0..width);
    let choices = if width > 1 { 9 } else { 6 };
    match rng.random_range(0..choices) {
        0 | 1 => Gate::h(q),
        2 => Gate::s(q),
        3 => Gate::sdg(q),
        4 => Gate::x(q),
        5 => Gate::z(q),
        6 | 7 => {
            let (a, b) = random_pair(rng, width);
            Gate::cx(a, b)
        }
        _ => {
            let (a, b) = random_pair(rng, width);
            Gate::cz(a, b)
        }
    }
}

/// Clifford+T circuit with `cliffords` Clifford gates and exactly `t_count`
/// T or T-dagger gates at random positions.
pub fn random_clifford_t<R: Rng + ?Sized>(
    rng: &mut R,
    width: usize,
    cliffords: usize,
    t_count: usize,
) -> Circuit {
    let mut slots: Vec<bool> = std::iter::repeat_n(false, cliffords)
        .chain(std::iter::repeat_n(true, t_count))
        .collect();
    slots.shuffle(rng);
    let mut c = Circuit::new(width);
    for is_t in slots {
        let g = if is_t {
            let q = rng.random_range(0..width);
            if rng.random_bool(0.5) {
                Gate::t(q)
            } else {
                Gate::tdg(q)
            }
        } else {
            random_clifford(rng, width)
        };
        c.push(g);
    }
    c
}

/// Circuit over CS, CS-dagger, H and the Cliffords with known real encodings.
pub fn random_cs_h<R: Rng + ?Sized>(rng: &mut R, width: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(width);
    for _ in 0..len {
        let g = if width > 1 && rng.random_bool(0.35) {
            let (a, b) = random_pair(rng, width);
            match rng.random_range(0..3) {
                0 => Gate::cs(a, b),
                1 => Gate::csdg(a, b),
                _ => Gate::cx(a, b),
            }
        } else {
            let q = rng.random_range(0..width);
            match rng.random_range(0..5) {
                0 | 1 => Gate::h(q),
                2 => Gate::s(q),
                3 => Gate::y(q),
                _ => Gate::z(q),
            }
        };
        c.push(g);
    }
    c
}

/// Element with coefficients `n / 2^e`, `|n| <= bound`, `e < 4`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, tower: &Tower, bound: i64) -> RingElement {
    let coeffs = (0..tower.dim())
        .map(|_| Dyadic::new(rng.random_range(-bound..=bound), rng.random_range(0..4)))
        .collect();
    tower.element(coeffs).expect("dimension matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_t_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = random_clifford_t(&mut rng, 3, 20, 6);
        assert_eq!(c.t_count(), 6);
        assert_eq!(c.gates().len(), 26);
        let one = random_clifford_t(&mut rng, 1, 5, 1);
        assert!(one.gates().iter().all(|g| g.qubits == vec![0]));
    }
}
