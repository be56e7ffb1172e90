use std::path::Path;

use anyhow::Context;

use catalyst_core::zh::{
    catalysis_rule, euler_rule, eval_tensor, extract_catalyst, multiply_rule, parse_diagram,
    register_rule, scalar_intro_rule, semantic_equal, serialize_diagram, serialize_trace, Family,
    RuleBook, ZhDiagram,
};
use catalyst_core::Tower;

use crate::{read_input, write_output};

fn load(path: &Path, tower: &Tower) -> anyhow::Result<ZhDiagram> {
    parse_diagram(&read_input(path)?, tower).with_context(|| format!("parsing {}", path.display()))
}

pub fn eval(input: &Path, tower: &Tower) -> anyhow::Result<bool> {
    let d = load(input, tower)?;
    let m = eval_tensor(&d, tower)?;
    println!(
        "# {}x{} (rows: outputs, columns: inputs)",
        m.rows(),
        m.cols()
    );
    print!("{m}");
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if !x.is_zero() {
                let f = x.embed_float();
                println!("# [{r},{c}] ~ {:.12} {:+.12}i", f.re, f.im);
            }
        }
    }
    Ok(true)
}

pub fn rules(max_degree: usize, tower: &Tower) -> anyhow::Result<bool> {
    let mut candidates = Vec::new();
    for f in Family::ALL {
        candidates.extend(f.instances(tower, max_degree));
    }
    let mut labels = vec![
        tower.from_int(-1),
        tower.from_int(2),
        tower.one().div_pow2(1),
    ];
    labels.extend((0..tower.len()).map(|j| tower.generator(j)));
    for a in &labels {
        for b in &labels {
            for n in 0..max_degree {
                candidates.push(multiply_rule(a, b, n)?);
            }
        }
    }
    for j in 0..tower.len() {
        let a = tower.generator(j);
        candidates.push(catalysis_rule(&a)?);
        candidates.push(scalar_intro_rule(&a)?);
        candidates.push(euler_rule(&a)?);
    }
    let mut book = RuleBook::new(tower);
    let mut rejected = 0;
    for r in candidates {
        let name = r.name.clone();
        match register_rule(&mut book, r) {
            Ok(()) => println!("admitted {name}"),
            Err(e) => {
                rejected += 1;
                println!("rejected {name}: {e}");
            }
        }
    }
    println!("{} admitted, {rejected} rejected", book.len());
    Ok(rejected == 0)
}

pub fn extract(
    input: &Path,
    label: &str,
    tower: &Tower,
    out: Option<&Path>,
    trace_path: Option<&Path>,
) -> anyhow::Result<bool> {
    let d = load(input, tower)?;
    let a = tower.parse(label)?;
    let (e, trace) = extract_catalyst(&d, &a)?;
    let trace_text = serialize_trace(&trace);
    let mut text = serialize_diagram(&e);
    match trace_path {
        Some(p) => {
            std::fs::write(p, &trace_text).with_context(|| format!("writing {}", p.display()))?
        }
        None => {
            for line in trace_text.lines() {
                text.push_str(&format!("# {line}\n"));
            }
        }
    }
    write_output(out, &text)?;
    eprintln!("steps={}", trace.steps.len());
    Ok(true)
}

pub fn equal(left: &Path, right: &Path, tower: &Tower) -> anyhow::Result<bool> {
    let a = load(left, tower)?;
    let b = load(right, tower)?;
    let eq = semantic_equal(&a, &b, tower)?;
    println!("{eq}");
    Ok(eq)
}
