//! Reversible arithmetic and the adder form of phase catalysis.
//!
//! Registers are little-endian: register qubit `j` carries weight `2^j`.

use super::gadgets::catalyst_prep;
use super::{verify_catalytic_contract, CatalysisError, VerificationReport};
use crate::circuit::{prep_vector, Circuit, Gate, GateKind, StatePrep};
use crate::ring::Tower;

/// Largest register handled by the adder verification.
pub const ADDER_VERIFY_MAX: usize = 6;

/// Decrement `reg` by one (mod `2^len`) when all of `controls` are set.
fn decrement_gates(controls: &[usize], reg: &[usize]) -> Vec<Gate> {
    // b - 1 = ~(~b + 1); the X layers cancel when the controls are off
    let mut out: Vec<Gate> = reg.iter().map(|&q| Gate::x(q)).collect();
    for j in (0..reg.len()).rev() {
        let mut ctrl = controls.to_vec();
        ctrl.extend_from_slice(&reg[..j]);
        out.push(Gate::mcx(&ctrl, reg[j]));
    }
    out.extend(reg.iter().map(|&q| Gate::x(q)));
    out
}

/// Control on qubit 0, `n`-bit register on qubits `1..=n`.
pub fn controlled_decrementer(n: usize) -> Circuit {
    let reg: Vec<usize> = (1..=n).collect();
    Circuit::from_gates(n + 1, decrement_gates(&[0], &reg)).expect("qubits in range")
}

/// `|a, b> -> |a, b - a>` with `a` on qubits `0..n` and `b` on `n..2n`.
pub fn subtractor(n: usize) -> Circuit {
    let mut gates = Vec::new();
    for j in 0..n {
        let upper: Vec<usize> = (n + j..2 * n).collect();
        gates.extend(decrement_gates(&[j], &upper));
    }
    Circuit::from_gates(2 * n, gates).expect("qubits in range")
}

/// `|a, b> -> |a, a + b>`, the inverse of [`subtractor`].
pub fn adder(n: usize) -> Circuit {
    subtractor(n).inverse()
}

/// Bank qubit `j` holds `|Z(2 pi / 2^(n - j))>`, so the whole register is
/// the Fourier state `sum_b exp(2 pi i b / 2^n) |b>`.
pub fn catalyst_bank(n: usize) -> Vec<StatePrep> {
    (0..n).map(|j| catalyst_prep((n - j) as u32)).collect()
}

/// The complex conjugate of [`catalyst_bank`].
fn conjugate_bank(n: usize) -> Vec<StatePrep> {
    (0..n)
        .map(|j| match n - j {
            1 => StatePrep::Minus,
            2 => StatePrep::MinusI,
            k => StatePrep::Zk {
                k: k as u32,
                sign: -1,
            },
        })
        .collect()
}

fn register_state(
    preps: &[StatePrep],
    tower: &Tower,
) -> Result<crate::circuit::StateVector, CatalysisError> {
    let mut c = Circuit::new(preps.len());
    for (q, p) in preps.iter().enumerate() {
        c.set_prep(q, *p)?;
    }
    Ok(prep_vector(&c, tower)?)
}

fn check_n(n: usize) -> Result<(), CatalysisError> {
    if n == 0 || n > ADDER_VERIFY_MAX {
        return Err(CatalysisError::InvalidParameter(format!(
            "adder verification needs 1 <= n <= {ADDER_VERIFY_MAX}, got {n}"
        )));
    }
    Ok(())
}

/// Adding `a` into the Fourier bank kicks back `exp(-2 pi i a / 2^n)`, i.e.
/// `PhaseK(n - j)^dagger` on data bit `j`.
pub fn verify_adder_catalysis(n: usize) -> Result<VerificationReport, CatalysisError> {
    verify_adder_catalysis_with_bank(n, &catalyst_bank(n))
}

/// As [`verify_adder_catalysis`] with an arbitrary bank preparation.
pub fn verify_adder_catalysis_with_bank(
    n: usize,
    bank: &[StatePrep],
) -> Result<VerificationReport, CatalysisError> {
    check_n(n)?;
    if bank.len() != n {
        return Err(CatalysisError::InvalidParameter(format!(
            "bank has {} qubits, register has {n}",
            bank.len()
        )));
    }
    let tower = Tower::for_phase_depth(n as u32);
    let mut target = Circuit::new(n);
    for j in 0..n {
        target.push(Gate::phase_on((n - j) as u32, -1, vec![j]));
    }
    let tags: Vec<String> = bank.iter().map(|p| p.tag()).collect();
    let mut r = verify_catalytic_contract(
        &format!("adder_catalysis(n={n})"),
        &adder(n),
        &target,
        &register_state(bank, &tower)?,
        &tower,
    )?;
    r.note("bank", tags.join(","));
    Ok(r)
}

/// `Z(2 pi m / 2^k)` on qubit 0.
///
/// Layout: data on qubit 0, `k` zeroed ancillas on `1..=k` and the
/// conjugated bank on `k+1..=2k`. The data is copied onto the ancillas
/// selected by the bits of `m`, so the ancilla register reads `x * m`;
/// adding that into the conjugated bank kicks back `exp(2 pi i x m / 2^k)`
/// and the copies are undone.
pub fn synth_small_phase(k: u32, m: u64) -> Result<Circuit, CatalysisError> {
    if k == 0 || k as usize > ADDER_VERIFY_MAX || m == 0 || m >= 1u64 << k {
        return Err(CatalysisError::InvalidParameter(format!(
            "need 1 <= k <= {ADDER_VERIFY_MAX} and 1 <= m < 2^k, got k = {k}, m = {m}"
        )));
    }
    let n = k as usize;
    let mut c = Circuit::new(2 * n + 1);
    for (j, p) in conjugate_bank(n).into_iter().enumerate() {
        c.set_prep(n + 1 + j, p)?;
    }
    let fanout: Vec<Gate> = (0..n)
        .filter(|j| m >> j & 1 == 1)
        .map(|j| Gate::cx(0, 1 + j))
        .collect();
    c.extend(fanout.iter().cloned());
    let map: Vec<usize> = (1..=2 * n).collect();
    c.append_mapped(&adder(n), &map)?;
    c.extend(fanout);
    Ok(c)
}

/// Exact check of [`synth_small_phase`] with ancillas in `|0>` and the bank
/// as prepared; both must come back unchanged.
pub fn verify_synth_small_phase(k: u32, m: u64) -> Result<VerificationReport, CatalysisError> {
    let c = synth_small_phase(k, m)?;
    let n = k as usize;
    let tower = Tower::for_phase_depth(k);
    let mut target = Circuit::new(1);
    for _ in 0..m {
        target.push(Gate::phase_on(k, 1, vec![0]));
    }
    let mut cat_preps = vec![StatePrep::Zero; n];
    cat_preps.extend(conjugate_bank(n));
    let mut r = verify_catalytic_contract(
        &format!("synth_small_phase(k={k}, m={m})"),
        &c.without_preps(),
        &target,
        &register_state(&cat_preps, &tower)?,
        &tower,
    )?;
    r.note(
        "toffoli_like",
        c.gates()
            .iter()
            .filter(|g| g.qubits.len() >= 3)
            .count()
            .to_string(),
    );
    Ok(r)
}

/// Phase depth and sign of gates the synthesis pass replaces.
fn small_phase(g: &Gate) -> Option<(u32, i8)> {
    match g.kind {
        GateKind::T => Some((3, 1)),
        GateKind::Tdg => Some((3, -1)),
        GateKind::PhaseK { k, sign } if k >= 3 => Some((k, sign)),
        _ => None,
    }
}

/// Replaces every `T`, `T^dagger` and `PhaseK` with `k >= 3` by
/// [`synth_small_phase`].
///
/// All replacements share `K` ancillas and one conjugated bank of depth `K`
/// (the largest `k` present), appended after the circuit's qubits: bank
/// qubit `p` holds depth `K - p`, so a depth-`k` synthesis uses the last `k`.
pub fn synth_phase_pass(c: &Circuit) -> Result<Circuit, CatalysisError> {
    let Some(kmax) = c
        .gates()
        .iter()
        .filter_map(|g| small_phase(g).map(|p| p.0))
        .max()
    else {
        return Ok(c.clone());
    };
    let kk = kmax as usize;
    if kk > ADDER_VERIFY_MAX {
        return Err(CatalysisError::InvalidParameter(format!(
            "phase depth {kk} exceeds {ADDER_VERIFY_MAX}"
        )));
    }
    let n = c.width();
    let mut out = c.without_gates().widened(2 * kk);
    for (j, p) in conjugate_bank(kk).into_iter().enumerate() {
        out.set_prep(n + kk + j, p)?;
    }
    for g in c.gates() {
        let Some((k, sign)) = small_phase(g) else {
            out.push(g.clone());
            continue;
        };
        let m = if sign > 0 { 1 } else { (1u64 << k) - 1 };
        let s = synth_small_phase(k, m)?;
        let k = k as usize;
        let map: Vec<usize> = (0..=2 * k)
            .map(|q| match q {
                0 => g.qubits[0],
                q if q <= k => n + q - 1,
                q => n + 2 * kk - k + (q - k - 1),
            })
            .collect();
        out.append_mapped(&s, &map)?;
    }
    Ok(out)
}

/// Catalytic contract of [`synth_phase_pass`]: ancillas in `|0>` and the
/// bank come back unchanged for every data basis state.
pub fn verify_synth_phase_pass(c: &Circuit) -> Result<VerificationReport, CatalysisError> {
    let out = synth_phase_pass(c)?;
    let n = c.width();
    let tower = Tower::for_phase_depth(c.root_depth().max(out.root_depth()));
    let cat = register_state(&out.preps()[n..], &tower)?;
    verify_catalytic_contract(
        "synth-phase",
        &out.without_preps(),
        &c.without_preps(),
        &cat,
        &tower,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{basis_state, simulate_from};

    /// Permutation computed by a classical circuit on basis state `x`.
    fn run(c: &Circuit, x: usize) -> usize {
        let t = Tower::dyadic();
        let out = simulate_from(c, basis_state(&t, c.width(), x)).unwrap();
        let hit: Vec<usize> = (0..out.amps().len())
            .filter(|&i| !out.amps()[i].is_zero())
            .collect();
        assert_eq!(hit.len(), 1);
        assert!(out.amps()[hit[0]].is_one());
        hit[0]
    }

    /// Register value from the basis index, register qubits little-endian.
    fn read(x: usize, width: usize, qubits: impl Iterator<Item = usize>) -> usize {
        qubits
            .enumerate()
            .map(|(j, q)| ((x >> (width - 1 - q)) & 1) << j)
            .sum()
    }

    fn write(width: usize, fields: &[(usize, std::ops::Range<usize>)]) -> usize {
        let mut x = 0;
        for (v, qs) in fields {
            for (j, q) in qs.clone().enumerate() {
                x |= ((v >> j) & 1) << (width - 1 - q);
            }
        }
        x
    }

    #[test]
    fn decrementer_truth_table() {
        for n in 1..=4 {
            let c = controlled_decrementer(n);
            let w = n + 1;
            for ctl in 0..2 {
                for b in 0..1usize << n {
                    let out = run(&c, write(w, &[(ctl, 0..1), (b, 1..w)]));
                    let want = if ctl == 1 {
                        (b + (1 << n) - 1) % (1 << n)
                    } else {
                        b
                    };
                    assert_eq!(read(out, w, 1..w), want);
                    assert_eq!(read(out, w, 0..1), ctl);
                }
            }
        }
        // |1>|00> -> |1>|11>
        assert_eq!(run(&controlled_decrementer(2), 0b100), 0b111);
    }

    #[test]
    fn subtractor_and_adder_truth_tables() {
        for n in 1..=4 {
            let (s, a) = (subtractor(n), adder(n));
            let w = 2 * n;
            let modulus = 1 << n;
            for x in 0..modulus {
                for y in 0..modulus {
                    let inp = write(w, &[(x, 0..n), (y, n..w)]);
                    let out = run(&s, inp);
                    assert_eq!(read(out, w, 0..n), x);
                    assert_eq!(read(out, w, n..w), (y + modulus - x) % modulus);
                    assert_eq!(read(run(&a, inp), w, n..w), (x + y) % modulus);
                    assert_eq!(run(&a, out), inp);
                }
            }
        }
        // a = 2, b = 5 gives b - a = 3
        let w = 6;
        let out = run(&subtractor(3), write(w, &[(2, 0..3), (5, 3..6)]));
        assert_eq!(read(out, w, 3..6), 3);
    }

    #[test]
    fn bank_layout() {
        assert_eq!(catalyst_bank(1), vec![StatePrep::Minus]);
        assert_eq!(catalyst_bank(2), vec![StatePrep::PlusI, StatePrep::Minus]);
        assert!(catalyst_bank(3).contains(&StatePrep::T));
    }

    #[test]
    fn adder_catalysis_holds() {
        for n in 1..=5 {
            let r = verify_adder_catalysis(n).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(verify_adder_catalysis(0).is_err());
        assert!(verify_adder_catalysis(7).is_err());
    }

    #[test]
    fn reversed_bank_fails() {
        let mut bank = catalyst_bank(2);
        bank.reverse();
        assert!(!verify_adder_catalysis_with_bank(2, &bank).unwrap().passed);
    }

    #[test]
    fn small_phase_all_m() {
        for k in 1..=3u32 {
            for m in 1..1u64 << k {
                let r = verify_synth_small_phase(k, m).unwrap();
                assert!(r.passed, "{r}");
            }
        }
        assert!(synth_small_phase(3, 0).is_err());
        assert!(synth_small_phase(3, 8).is_err());
    }

    #[test]
    fn eleven_pi_over_eight() {
        let c = synth_small_phase(4, 11).unwrap();
        // 11 = 1011b: copies onto ancillas 0, 1 and 3
        assert_eq!(
            &c.gates()[..3],
            &[Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(0, 4)]
        );
        assert!(verify_synth_small_phase(4, 11).unwrap().passed);
    }

    #[test]
    fn pass_shares_one_bank() {
        let mut c = Circuit::new(2);
        c.extend([
            Gate::h(0),
            Gate::t(0),
            Gate::cx(0, 1),
            Gate::phase_k(4, -1, 1),
            Gate::tdg(1),
        ]);
        let out = synth_phase_pass(&c).unwrap();
        assert_eq!(out.width(), 2 + 8);
        assert_eq!(out.t_count(), 0);
        let r = verify_synth_phase_pass(&c).unwrap();
        assert!(r.passed, "{r}");
    }
}
