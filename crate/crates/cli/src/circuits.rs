use std::path::Path;

use anyhow::{bail, Context};

use catalyst_core::catalysis::{
    convert_ccz_blocks, real_encode_circuit, real_encode_matrix, synth_phase_pass,
    transpile_t_to_cs, verify_catalytic_contract, verify_convert_ccz_blocks,
    verify_synth_phase_pass, VerificationReport,
};
use catalyst_core::circuit::{
    expectation, parse_circuit, prep_vector, serialize_circuit, simulate as run_circuit, unitary_of,
};
use catalyst_core::estimator::{build_ensemble, convergence, exact_value, qp_estimate, Allocation};
use catalyst_core::{Circuit, Observable, RingElement, StatePrep, Tower};

use crate::{read_input, write_output, Pass};

fn load(path: &Path) -> anyhow::Result<Circuit> {
    parse_circuit(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Ring text and float embedding side by side.
fn show(x: &RingElement) -> String {
    let f = x.embed_float();
    if f.im.abs() < 1e-15 {
        format!("{x}  (~ {:.12})", f.re)
    } else {
        format!("{x}  (~ {:.12} {:+.12}i)", f.re, f.im)
    }
}

fn tower_for(c: &Circuit) -> Tower {
    Tower::for_phase_depth(c.root_depth())
}

pub fn transpile(
    input: &Path,
    pass: Pass,
    out: Option<&Path>,
    verify: bool,
) -> anyhow::Result<bool> {
    let c = load(input)?;
    let result = match pass {
        Pass::TToCs => transpile_t_to_cs(&c)?,
        Pass::RealEncode => real_encode_circuit(&c)?,
        Pass::CczTo3t => convert_ccz_blocks(&c)?,
        Pass::SynthPhase => synth_phase_pass(&c)?,
    };
    write_output(out, &serialize_circuit(&result))?;
    if !verify {
        return Ok(true);
    }
    let report = match pass {
        Pass::TToCs => verify_t_to_cs(&c, &result)?,
        Pass::RealEncode => verify_real_encode(&c, &result)?,
        Pass::CczTo3t => verify_convert_ccz_blocks(&c)?,
        Pass::SynthPhase => verify_synth_phase_pass(&c)?,
    };
    eprint!("{report}");
    Ok(report.passed)
}

fn verify_t_to_cs(c: &Circuit, out: &Circuit) -> anyhow::Result<VerificationReport> {
    let tower = tower_for(c);
    let mut cat = Circuit::new(1);
    cat.set_prep(0, StatePrep::T)?;
    let cat = prep_vector(&cat, &tower)?;
    Ok(verify_catalytic_contract(
        "t-to-cs",
        &out.without_preps(),
        &c.without_preps(),
        &cat,
        &tower,
    )?)
}

fn verify_real_encode(c: &Circuit, out: &Circuit) -> anyhow::Result<VerificationReport> {
    let tower = tower_for(c);
    let u = unitary_of(&c.without_preps(), &tower)?;
    let enc = unitary_of(&out.without_preps(), &tower)?;
    let mut r = VerificationReport::new("real-encode");
    r.record(enc == real_encode_matrix(&u)?, || {
        "encoded unitary differs from [[Re U, -Im U], [Im U, Re U]]".into()
    });
    r.record(enc.entries().iter().all(RingElement::is_real), || {
        "encoded unitary has complex entries".into()
    });
    r.record(enc.is_unitary(), || {
        "encoded unitary is not orthogonal".into()
    });
    Ok(r)
}

pub fn simulate(input: &Path, obs: Option<&str>) -> anyhow::Result<bool> {
    let c = load(input)?;
    let tower = tower_for(&c);
    let psi = run_circuit(&c, &tower)?;
    let n = c.width();
    for (i, a) in psi.amps().iter().enumerate() {
        if !a.is_zero() {
            println!("|{i:0n$b}>  {}", show(a));
        }
    }
    if let Some(o) = obs {
        let o = parse_obs(o, n)?;
        println!("<{o}> = {}", show(&expectation(&psi, &o)?));
    }
    Ok(true)
}

fn parse_obs(s: &str, width: usize) -> anyhow::Result<Observable> {
    let o: Observable = s.parse()?;
    if o.len() != width {
        bail!(
            "observable {s} has {} letters for a {width}-qubit circuit",
            o.len()
        );
    }
    Ok(o)
}

pub fn estimate(
    input: &Path,
    obs: &str,
    shots: u64,
    seed: u64,
    allocation: Allocation,
    csv_path: Option<&Path>,
) -> anyhow::Result<bool> {
    let c = load(input)?;
    let o = parse_obs(obs, c.width())?;
    let e = build_ensemble(&c, &o)?;
    let report = qp_estimate(&e, shots, seed, allocation)?;
    println!("estimate={:.12}", report.estimate);
    println!("stderr={:.12}", report.stderr);
    println!("shots={shots}");
    println!("seed={seed}");
    println!("one_norm={:.12}", e.one_norm);
    println!("terms={}", e.terms.len());
    // the exact value needs a full simulation, which is capped by width
    if let Ok(x) = exact_value(&e) {
        println!("exact={}", show(&x));
        let dev = (report.estimate - x.embed_float().re).abs();
        println!(
            "deviation_in_stderr={:.3}",
            dev / report.stderr.max(f64::MIN_POSITIVE)
        );
    }
    if let Some(p) = csv_path {
        let mut w =
            csv::Writer::from_path(p).with_context(|| format!("writing {}", p.display()))?;
        w.write_record(["shots", "estimate", "stderr", "exact"])?;
        for r in convergence(&e, shots, seed)? {
            w.write_record([
                r.shots.to_string(),
                format!("{:.12}", r.estimate),
                format!("{:.12}", r.stderr),
                r.exact_value
                    .map(|x| format!("{x:.12}"))
                    .unwrap_or_default(),
            ])?;
        }
        w.flush()?;
    }
    Ok(true)
}
