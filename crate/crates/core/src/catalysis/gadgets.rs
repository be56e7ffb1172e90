use super::{verify_catalytic_contract, CatalysisError, VerificationReport};
use crate::circuit::{prep_vector, simulate, Circuit, Gate, StatePrep, StateVector};
use crate::ring::Tower;

/// Catalyses `T` with one CX and one CS: data on qubit 0, `|T>` on qubit 1.
pub fn t_gadget() -> Circuit {
    phase_gadget(3).expect("k = 3 is valid")
}

/// Catalyses `Z(2 pi / 2^k)` on qubit 0 using the catalyst
/// `|Z(2 pi / 2^k)>` on qubit 1 and one controlled `Z(2 pi / 2^(k-1))`.
pub fn phase_gadget(k: u32) -> Result<Circuit, CatalysisError> {
    if k < 2 {
        return Err(CatalysisError::InvalidParameter(format!(
            "phase gadget needs k >= 2, got {k}"
        )));
    }
    controlled_phase_gadget(k, 0)
}

/// `m`-controlled version of [`phase_gadget`]. Controls are qubits `0..m`,
/// data is qubit `m`, the catalyst is qubit `m + 1`.
///
/// The data/catalyst pair is first XOR-ed into the catalyst so that the
/// catalyst holds `x XOR y`; a controlled phase of twice the angle then
/// restores `|Z(alpha)>` up to exactly the phase `alpha` on `x = 1`.
/// For `k = 1` the doubled angle is trivial and only the flip remains.
pub fn controlled_phase_gadget(k: u32, m: usize) -> Result<Circuit, CatalysisError> {
    if k == 0 || (m == 0 && k < 2) {
        return Err(CatalysisError::InvalidParameter(format!(
            "controlled phase gadget needs k >= 1 (k >= 2 without controls), got k = {k}, m = {m}"
        )));
    }
    let cat = m + 1;
    let mut c = Circuit::new(m + 2);
    c.set_prep(cat, catalyst_prep(k))?;
    let active: Vec<usize> = (0..=m).collect();
    c.push(Gate::mcx(&active, cat));
    if k >= 2 {
        let mut qs = active.clone();
        qs.push(cat);
        c.push(Gate::phase_on(k - 1, 1, qs));
    }
    Ok(c)
}

pub(crate) fn catalyst_prep(k: u32) -> StatePrep {
    match k {
        1 => StatePrep::Minus,
        2 => StatePrep::PlusI,
        3 => StatePrep::T,
        _ => StatePrep::Zk { k, sign: 1 },
    }
}

fn catalyst_state(k: u32, tower: &Tower) -> Result<StateVector, CatalysisError> {
    let mut c = Circuit::new(1);
    c.set_prep(0, catalyst_prep(k))?;
    Ok(prep_vector(&c, tower)?)
}

pub fn verify_phase_gadget(k: u32) -> Result<VerificationReport, CatalysisError> {
    verify_controlled_phase_gadget(k, 0)
}

/// Exact catalytic-contract check of [`controlled_phase_gadget`] on every basis input.
pub fn verify_controlled_phase_gadget(
    k: u32,
    m: usize,
) -> Result<VerificationReport, CatalysisError> {
    let gadget = controlled_phase_gadget(k, m)?;
    let tower = Tower::for_phase_depth(k);
    let mut target = Circuit::new(m + 1);
    target.push(Gate::phase_on(k, 1, (0..=m).collect()));
    let name = if m == 0 {
        format!("phase_gadget(k={k})")
    } else {
        format!("controlled_phase_gadget(k={k}, m={m})")
    };
    let mut report = verify_catalytic_contract(
        &name,
        &gadget.without_preps(),
        &target,
        &catalyst_state(k, &tower)?,
        &tower,
    )?;
    report.note("gates", gadget.gates().len().to_string());
    Ok(report)
}

/// Turns `CCZ|+++>` into `|T>|T>|T>` with Cliffords and a single `T` gate.
///
/// Found by a breadth-first search over Clifford orbits of the two states;
/// the result holds up to a global phase recorded by [`verify_ccz_to_3t`].
pub fn ccz_to_3t() -> Circuit {
    let mut c = Circuit::new(3);
    c.add_ccz_block([0, 1, 2]).expect("fresh circuit");
    c.extend([
        Gate::s(0),
        Gate::h(0),
        Gate::t(0),
        Gate::cx(1, 0),
        Gate::cx(2, 1),
        Gate::cx(0, 2),
        Gate::sdg(1),
        Gate::sdg(1),
        Gate::cx(0, 1),
        Gate::sdg(1),
        Gate::sdg(0),
    ]);
    c
}

pub fn verify_ccz_to_3t() -> Result<VerificationReport, CatalysisError> {
    let tower = Tower::clifford_t();
    let c = ccz_to_3t();
    let out = simulate(&c, &tower)?;
    let mut ttt = Circuit::new(3);
    for q in 0..3 {
        ttt.set_prep(q, StatePrep::T)?;
    }
    let target = prep_vector(&ttt, &tower)?;
    let mut report = VerificationReport::new("ccz_to_3t");
    let phase = out.proportionality(&target);
    let unit = phase.as_ref().is_some_and(|p| p.norm_sqr().is_one());
    report.record(unit, || "output is not a unit multiple of |T>^3".into());
    report.record(c.t_count() == 1, || format!("T-count {}", c.t_count()));
    report.global_phase = phase;
    report.note("t_count", c.t_count().to_string());
    Ok(report)
}

/// Runs [`ccz_to_3t`] on every `CCZ|+++>` block before the circuit's own
/// gates, so each block then holds `|T>^3` up to a global phase.
pub fn convert_ccz_blocks(c: &Circuit) -> Result<Circuit, CatalysisError> {
    let conv = ccz_to_3t();
    let mut out = c.without_gates();
    for b in c.ccz_blocks() {
        out.append_mapped(&conv, b)?;
    }
    out.extend(c.gates().iter().cloned());
    Ok(out)
}

/// Compares [`convert_ccz_blocks`] with the same circuit started from
/// `|T>` preparations in place of the blocks.
pub fn verify_convert_ccz_blocks(c: &Circuit) -> Result<VerificationReport, CatalysisError> {
    let out = convert_ccz_blocks(c)?;
    let mut reference = Circuit::new(c.width());
    for (q, p) in c.preps().iter().enumerate() {
        let in_block = c.ccz_blocks().iter().any(|b| b.contains(&q));
        reference.set_prep(q, if in_block { StatePrep::T } else { *p })?;
    }
    reference.extend(c.gates().iter().cloned());
    let tower = Tower::for_phase_depth(out.root_depth().max(reference.root_depth()));
    let got = simulate(&out, &tower)?;
    let want = simulate(&reference, &tower)?;
    let mut report = VerificationReport::new("ccz-to-3t");
    let phase = got.proportionality(&want);
    let unit = phase.as_ref().is_some_and(|p| p.norm_sqr().is_one());
    report.record(unit, || {
        "output is not a unit multiple of the |T> reference".into()
    });
    report.global_phase = phase;
    report.note("blocks", c.ccz_blocks().len().to_string());
    report.note("t_count", out.t_count().to_string());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{basis_state, simulate_from};

    #[test]
    fn t_gadget_examples() {
        let t = Tower::clifford_t();
        let g = t_gadget().without_preps();
        let tstate = catalyst_state(3, &t).unwrap();
        let zero_in = basis_state(&t, 1, 0).kron(&tstate);
        assert_eq!(simulate_from(&g, zero_in.clone()).unwrap(), zero_in);
        let one_in = basis_state(&t, 1, 1).kron(&tstate);
        let out = simulate_from(&g, one_in.clone()).unwrap();
        assert_eq!(out, one_in.scale(&t.generator(1)));
        assert_eq!(g.gates(), &[Gate::cx(0, 1), Gate::cs(0, 1)]);
    }

    #[test]
    fn gadgets_satisfy_contract() {
        for k in 2..=5 {
            assert!(verify_phase_gadget(k).unwrap().passed, "k = {k}");
        }
        for (k, m) in [(2, 1), (1, 2), (3, 1), (3, 2), (4, 1), (1, 1)] {
            let r = verify_controlled_phase_gadget(k, m).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(phase_gadget(1).is_err());
    }

    #[test]
    fn ccz_conversion() {
        let r = verify_ccz_to_3t().unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn ccz_blocks_in_a_circuit() {
        let mut c = Circuit::new(4);
        c.set_prep(0, StatePrep::One).unwrap();
        c.add_ccz_block([3, 1, 2]).unwrap();
        c.extend([Gate::cx(0, 3), Gate::h(1)]);
        let r = verify_convert_ccz_blocks(&c).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(convert_ccz_blocks(&c).unwrap().t_count(), 1);
    }
}
