use catalyst_core::catalysis::{
    catalyst_bank, decompose_t_dm, real_embedding, t_embedding, verify_adder_catalysis,
    verify_adder_catalysis_with_bank, verify_ccz_to_3t, verify_controlled_phase_gadget,
    verify_embedding, verify_phase_gadget, verify_synth_small_phase, VerificationReport,
};
use catalyst_core::StatePrep;

use crate::Scope;

const ADDER_MAX: usize = 4;
const SYNTH_MAX: u32 = 4;

fn suite(scope: Scope, inject_fault: bool) -> anyhow::Result<Vec<VerificationReport>> {
    let on = |s: Scope| scope == Scope::All || scope == s;
    let mut out = Vec::new();
    if on(Scope::T) {
        out.extend(verify_embedding(&t_embedding())?);
    }
    if on(Scope::Phase) {
        for k in 2..=5 {
            out.push(verify_phase_gadget(k)?);
        }
        for (k, m) in [(1, 1), (1, 2), (2, 1), (3, 1), (3, 2), (4, 1)] {
            out.push(verify_controlled_phase_gadget(k, m)?);
        }
    }
    if on(Scope::Ccz) {
        out.push(verify_ccz_to_3t()?);
    }
    if on(Scope::Mixed) {
        out.push(decompose_t_dm().verify()?);
    }
    if on(Scope::Real) {
        out.extend(verify_embedding(&real_embedding())?);
    }
    if on(Scope::Adder) {
        for n in 1..=ADDER_MAX {
            if inject_fault {
                // the depth-1 slot must hold |->; |+> breaks the kickback
                let mut bank = catalyst_bank(n);
                bank[n - 1] = StatePrep::Plus;
                out.push(verify_adder_catalysis_with_bank(n, &bank)?);
            } else {
                out.push(verify_adder_catalysis(n)?);
            }
        }
    }
    if on(Scope::Synth) {
        for k in 1..=SYNTH_MAX {
            for m in 1..1u64 << k {
                out.push(verify_synth_small_phase(k, m)?);
            }
        }
    }
    Ok(out)
}

pub fn verify(scope: Scope, machine: bool, inject_fault: bool) -> anyhow::Result<bool> {
    let reports = suite(scope, inject_fault)?;
    for r in &reports {
        if machine {
            println!("{}", r.machine_lines());
        } else {
            print!("{r}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", reports.len() - failed);
    Ok(failed == 0)
}
