//! Exact statevector simulation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Circuit, CircuitError, Gate, GateKind, Observable, Pauli, StatePrep};
use crate::ring::{RingElement, RingMatrix, Tower};

pub const SIMULATE_WIDTH_CAP: usize = 20;
pub const UNITARY_WIDTH_CAP: usize = 10;

/// Below this many amplitudes the kernels stay sequential.
const PAR_THRESHOLD: usize = 1 << 10;

/// Exact amplitudes of an n-qubit state; qubit 0 is the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<RingElement>,
}

impl StateVector {
    pub fn new(amps: Vec<RingElement>) -> Result<StateVector, CircuitError> {
        let n = amps.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(CircuitError::WidthMismatch {
                expected: n.next_power_of_two(),
                got: n,
            });
        }
        Ok(StateVector {
            width: n.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amps(&self) -> &[RingElement] {
        &self.amps
    }

    pub fn amplitude(&self, idx: usize) -> &RingElement {
        &self.amps[idx]
    }

    pub fn tower(&self) -> &Tower {
        self.amps[0].tower()
    }

    pub fn into_amps(self) -> Vec<RingElement> {
        self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> RingElement {
        let t = self.tower().clone();
        self.amps
            .par_iter()
            .zip(&other.amps)
            .map(|(a, b)| &a.conj() * b)
            .reduce(|| t.zero(), |a, b| a + b)
    }

    pub fn norm_sqr(&self) -> RingElement {
        self.inner(self)
    }

    /// `self (x) other`, with `self` on the leading qubits.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            width: self.width + other.width,
            amps,
        }
    }

    pub fn scale(&self, s: &RingElement) -> StateVector {
        StateVector {
            width: self.width,
            amps: self.amps.iter().map(|a| a * s).collect(),
        }
    }

    /// If `self = phase * other` for a nonzero ring element `phase`, returns it.
    pub fn proportionality(&self, other: &StateVector) -> Option<RingElement> {
        if self.width != other.width {
            return None;
        }
        let pivot = other.amps.iter().position(|a| !a.is_zero())?;
        // phase = self[p] / other[p]; check self[i] * other[p] == other[i] * self[p]
        let sp = &self.amps[pivot];
        let op = &other.amps[pivot];
        let consistent = self
            .amps
            .par_iter()
            .zip(&other.amps)
            .all(|(s, o)| s * op == o * sp);
        if !consistent || sp.is_zero() {
            return None;
        }
        let inv = op.checked_inverse().ok()?;
        Some(sp * &inv)
    }

    pub fn apply(&mut self, g: &Gate) -> Result<(), CircuitError> {
        let n = self.width;
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= n) {
            return Err(CircuitError::QubitOutOfRange {
                gate: g.to_string(),
                qubit: q,
                width: n,
            });
        }
        let bit = |q: usize| 1usize << (n - 1 - q);
        let tower = self.tower().clone();
        let phase = |k: u32, sign: i8| -> Result<RingElement, CircuitError> {
            let r = tower
                .root_of_unity(k)
                .map_err(|_| CircuitError::Unrepresentable(g.to_string()))?;
            Ok(if sign < 0 { r.conj() } else { r })
        };
        let mask_of = |qs: &[usize]| qs.iter().fold(0usize, |m, &q| m | bit(q));
        match g.kind {
            GateKind::X | GateKind::CX | GateKind::CCX | GateKind::Mcx => {
                let (ctrl, target) = g.qubits.split_at(g.qubits.len() - 1);
                self.controlled_flip(mask_of(ctrl), bit(target[0]));
            }
            GateKind::Swap => {
                let (a, b) = (bit(g.qubits[0]), bit(g.qubits[1]));
                for idx in 0..self.amps.len() {
                    if idx & a != 0 && idx & b == 0 {
                        self.amps.swap(idx, idx ^ a ^ b);
                    }
                }
            }
            GateKind::Z | GateKind::CZ | GateKind::CCZ => {
                self.diagonal(mask_of(&g.qubits), &phase(1, 1)?)
            }
            GateKind::S | GateKind::CS => self.diagonal(mask_of(&g.qubits), &phase(2, 1)?),
            GateKind::Sdg | GateKind::CSdg => self.diagonal(mask_of(&g.qubits), &phase(2, -1)?),
            GateKind::T => self.diagonal(mask_of(&g.qubits), &phase(3, 1)?),
            GateKind::Tdg => self.diagonal(mask_of(&g.qubits), &phase(3, -1)?),
            GateKind::PhaseK { k, sign } | GateKind::CPhaseK { k, sign } => {
                self.diagonal(mask_of(&g.qubits), &phase(k, sign)?)
            }
            GateKind::H => {
                let h = tower
                    .inv_sqrt2()
                    .map_err(|_| CircuitError::Unrepresentable(g.to_string()))?;
                self.pairwise(bit(g.qubits[0]), |a0, a1| ((a0 + a1) * &h, (a0 - a1) * &h));
            }
            GateKind::Y => {
                let i = phase(2, 1)?;
                self.pairwise(bit(g.qubits[0]), |a0, a1| (-(a1 * &i), a0 * &i));
            }
        }
        Ok(())
    }

    fn controlled_flip(&mut self, ctrl: usize, tb: usize) {
        for idx in 0..self.amps.len() {
            if idx & ctrl == ctrl && idx & tb == 0 {
                self.amps.swap(idx, idx | tb);
            }
        }
    }

    fn diagonal(&mut self, mask: usize, p: &RingElement) {
        let f = |(idx, a): (usize, &mut RingElement)| {
            if idx & mask == mask && !a.is_zero() {
                *a = &*a * p;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(f);
        } else {
            self.amps.iter_mut().enumerate().for_each(f);
        }
    }

    fn pairwise<F>(&mut self, tb: usize, f: F)
    where
        F: Fn(&RingElement, &RingElement) -> (RingElement, RingElement) + Sync,
    {
        let kernel = |chunk: &mut [RingElement]| {
            let (lo, hi) = chunk.split_at_mut(tb);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                if a0.is_zero() && a1.is_zero() {
                    continue;
                }
                let (n0, n1) = f(a0, a1);
                *a0 = n0;
                *a1 = n1;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * tb).for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * tb).for_each(kernel);
        }
    }
}

/// Computational basis state `|idx>` on `width` qubits.
pub fn basis_state(tower: &Tower, width: usize, idx: usize) -> StateVector {
    let mut amps = vec![tower.zero(); 1 << width];
    amps[idx] = tower.one();
    StateVector { width, amps }
}

fn single_prep(tower: &Tower, p: StatePrep) -> Result<[RingElement; 2], CircuitError> {
    let unrep = || CircuitError::Unrepresentable(format!("preparation {}", p.tag()));
    Ok(match p {
        StatePrep::Zero => [tower.one(), tower.zero()],
        StatePrep::One => [tower.zero(), tower.one()],
        _ => {
            let h = tower.inv_sqrt2().map_err(|_| unrep())?;
            let rel = match p {
                StatePrep::Plus => tower.one(),
                StatePrep::Minus => tower.from_int(-1),
                StatePrep::PlusI => tower.i().map_err(|_| unrep())?,
                StatePrep::MinusI => -tower.i().map_err(|_| unrep())?,
                StatePrep::T => tower.root_of_unity(3).map_err(|_| unrep())?,
                StatePrep::Zk { k, sign } => {
                    let r = tower.root_of_unity(k).map_err(|_| unrep())?;
                    if sign < 0 {
                        r.conj()
                    } else {
                        r
                    }
                }
                StatePrep::Zero | StatePrep::One => unreachable!(),
            };
            let b = &h * &rel;
            [h, b]
        }
    })
}

/// The state prepared by the circuit's preparation section.
pub fn prep_vector(c: &Circuit, tower: &Tower) -> Result<StateVector, CircuitError> {
    let mut state = StateVector {
        width: 0,
        amps: vec![tower.one()],
    };
    for &p in c.preps() {
        let [a, b] = single_prep(tower, p)?;
        state = state.kron(&StateVector {
            width: 1,
            amps: vec![a, b],
        });
    }
    for blk in c.ccz_blocks() {
        state.apply(&Gate::ccz(blk[0], blk[1], blk[2]))?;
    }
    Ok(state)
}

/// Applies the gates of `c` to `state`, ignoring the circuit's preparation.
pub fn simulate_from(c: &Circuit, mut state: StateVector) -> Result<StateVector, CircuitError> {
    if state.width != c.width() {
        return Err(CircuitError::WidthMismatch {
            expected: c.width(),
            got: state.width,
        });
    }
    for g in c.gates() {
        state.apply(g)?;
    }
    Ok(state)
}

/// Prepares the input and runs every gate, exactly.
pub fn simulate(c: &Circuit, tower: &Tower) -> Result<StateVector, CircuitError> {
    if c.width() > SIMULATE_WIDTH_CAP {
        return Err(CircuitError::WidthCap {
            width: c.width(),
            cap: SIMULATE_WIDTH_CAP,
        });
    }
    simulate_from(c, prep_vector(c, tower)?)
}

pub fn unitary_of(c: &Circuit, tower: &Tower) -> Result<RingMatrix, CircuitError> {
    unitary_of_capped(c, tower, UNITARY_WIDTH_CAP)
}

/// Matrix of the gate sequence; column `j` is the image of `|j>`.
pub fn unitary_of_capped(
    c: &Circuit,
    tower: &Tower,
    cap: usize,
) -> Result<RingMatrix, CircuitError> {
    let n = c.width();
    if n > cap {
        return Err(CircuitError::WidthCap { width: n, cap });
    }
    let dim = 1usize << n;
    let cols = (0..dim)
        .into_par_iter()
        .map(|j| simulate_from(c, basis_state(tower, n, j)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = RingMatrix::zeros(tower, dim, dim);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, a) in col.amps.into_iter().enumerate() {
            m.set(i, j, a);
        }
    }
    Ok(m)
}

/// Matrix of a single gate on its own qubits, first listed qubit most significant.
pub fn gate_matrix(g: &Gate, tower: &Tower) -> Result<RingMatrix, CircuitError> {
    let m = g.qubits.len();
    let local = Gate {
        kind: g.kind,
        qubits: (0..m).collect(),
    };
    let c = Circuit::from_gates(m, vec![local])?;
    unitary_of_capped(&c, tower, usize::MAX)
}

/// `<psi|P|psi>`, exact. The result is always self-conjugate.
pub fn expectation(psi: &StateVector, obs: &Observable) -> Result<RingElement, CircuitError> {
    let n = psi.width;
    if obs.len() != n {
        return Err(CircuitError::WidthMismatch {
            expected: n,
            got: obs.len(),
        });
    }
    let tower = psi.tower().clone();
    let (mut flip, mut sign_mask, mut ys) = (0usize, 0usize, 0u32);
    for (q, p) in obs.paulis().iter().enumerate() {
        let b = 1usize << (n - 1 - q);
        match p {
            Pauli::I => {}
            Pauli::X => flip |= b,
            Pauli::Y => {
                flip |= b;
                sign_mask |= b;
                ys += 1;
            }
            Pauli::Z => sign_mask |= b,
        }
    }
    // P|x> = i^ys (-1)^{|x & sign_mask|} |x ^ flip>
    let global = match ys % 4 {
        0 => tower.one(),
        2 => tower.from_int(-1),
        r => {
            let i = tower
                .i()
                .map_err(|_| CircuitError::Unrepresentable("Y observable".into()))?;
            if r == 1 {
                i
            } else {
                -i
            }
        }
    };
    let amps = &psi.amps;
    let sum = (0..amps.len())
        .into_par_iter()
        .map(|x| {
            let a = &amps[x];
            let b = &amps[x ^ flip];
            if a.is_zero() || b.is_zero() {
                return tower.zero();
            }
            let term = &b.conj() * a;
            if (x & sign_mask).count_ones() % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .reduce(|| tower.zero(), |a, b| a + b);
    let value = &sum * &global;
    if !value.is_real() {
        return Err(CircuitError::Unrepresentable(format!(
            "non-real expectation {value}"
        )));
    }
    Ok(value)
}

/// Exact Born probabilities of the `keep` qubits; keys use `keep[0]` as the
/// most significant bit. Zero-probability outcomes are omitted.
pub fn marginal_distribution(
    psi: &StateVector,
    keep: &[usize],
) -> Result<BTreeMap<usize, RingElement>, CircuitError> {
    let n = psi.width;
    if let Some(&q) = keep.iter().find(|&&q| q >= n) {
        return Err(CircuitError::QubitOutOfRange {
            gate: "marginal".into(),
            qubit: q,
            width: n,
        });
    }
    let mut out: BTreeMap<usize, RingElement> = BTreeMap::new();
    for (x, a) in psi.amps.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let key = keep
            .iter()
            .fold(0usize, |k, &q| (k << 1) | (x >> (n - 1 - q) & 1));
        let p = a.norm_sqr();
        match out.get_mut(&key) {
            Some(v) => *v += &p,
            None => {
                out.insert(key, p);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct() -> Tower {
        Tower::clifford_t()
    }

    #[test]
    fn gate_matrices() {
        let t = ct();
        let cs = gate_matrix(&Gate::cs(0, 1), &t).unwrap();
        for i in 0..4 {
            let expect = if i == 3 { t.i().unwrap() } else { t.one() };
            assert_eq!(cs.get(i, i), &expect);
        }
        let h = gate_matrix(&Gate::h(0), &t).unwrap();
        let w = t.generator(1);
        let inv = (&w + &w.conj()).div_pow2(1);
        assert_eq!(h.get(0, 0), &inv);
        assert_eq!(h.get(1, 1), &-&inv);
        let tm = gate_matrix(&Gate::phase_k(3, 1, 0), &t).unwrap();
        assert_eq!(tm.get(1, 1), &w);
    }

    #[test]
    fn basic_simulation() {
        let t = ct();
        let mut c = Circuit::new(1);
        c.set_prep(0, StatePrep::Plus).unwrap();
        c.push(Gate::t(0));
        let s = simulate(&c, &t).unwrap();
        let h = t.inv_sqrt2().unwrap();
        assert_eq!(s.amps(), &[h.clone(), &h * &t.generator(1)]);
        let empty = simulate(&Circuit::new(3), &t).unwrap();
        assert_eq!(empty, basis_state(&t, 3, 0));
    }

    #[test]
    fn unitary_identities() {
        let t = ct();
        let mut ss = Circuit::new(1);
        ss.push(Gate::s(0)).push(Gate::s(0));
        assert_eq!(
            unitary_of(&ss, &t).unwrap(),
            gate_matrix(&Gate::z(0), &t).unwrap()
        );
        let mut pair = Circuit::new(2);
        pair.push(Gate::cs(0, 1)).push(Gate::csdg(0, 1));
        assert!(unitary_of(&pair, &t).unwrap().is_identity());
        let cx = gate_matrix(&Gate::cx(0, 1), &t).unwrap();
        assert!(cx.get(3, 2).is_one() && cx.get(2, 3).is_one() && cx.get(0, 0).is_one());
        assert!(unitary_of(&Circuit::new(11), &t).is_err());
    }

    #[test]
    fn expectations() {
        let t = ct();
        let mut c = Circuit::new(1);
        c.set_prep(0, StatePrep::T).unwrap();
        let s = simulate(&c, &t).unwrap();
        let x = expectation(&s, &"X".parse().unwrap()).unwrap();
        let w = t.generator(1);
        assert_eq!(x, (&w + &w.conj()).div_pow2(1));
        let y = expectation(&s, &"Y".parse().unwrap()).unwrap();
        assert!((y.embed_float().re - 0.5f64.sqrt()).abs() < 1e-12);
        let z0 = expectation(&basis_state(&t, 1, 0), &"Z".parse().unwrap()).unwrap();
        assert!(z0.is_one());
        let mut p = Circuit::new(1);
        p.set_prep(0, StatePrep::Plus).unwrap();
        let zp = expectation(&simulate(&p, &t).unwrap(), &"Z".parse().unwrap()).unwrap();
        assert!(zp.is_zero());
        assert!(expectation(&s, &"XX".parse().unwrap()).is_err());
    }

    #[test]
    fn marginals() {
        let t = ct();
        let m = marginal_distribution(&basis_state(&t, 2, 0), &[1]).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[&0].is_one());
        let mut bell = Circuit::new(2);
        bell.push(Gate::h(0)).push(Gate::cx(0, 1));
        let m = marginal_distribution(&simulate(&bell, &t).unwrap(), &[1]).unwrap();
        assert_eq!(m[&0], t.ratio(1, 1));
        assert_eq!(m[&1], t.ratio(1, 1));
    }

    #[test]
    fn ccz_block_prep() {
        let t = ct();
        let mut c = Circuit::new(3);
        c.add_ccz_block([0, 1, 2]).unwrap();
        let s = simulate(&c, &t).unwrap();
        let h3 = t.inv_sqrt2().unwrap().pow(3);
        assert_eq!(s.amplitude(0), &h3);
        assert_eq!(s.amplitude(7), &-&h3);
        assert!(s.norm_sqr().is_one());
    }

    #[test]
    fn proportionality_detects_phase() {
        let t = ct();
        let a = basis_state(&t, 2, 1);
        let w = t.generator(1);
        let b = a.scale(&w);
        assert_eq!(b.proportionality(&a), Some(w));
        assert_eq!(basis_state(&t, 2, 2).proportionality(&a), None);
    }
}
