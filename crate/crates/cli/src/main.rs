//! `catalyst`: command-line front end for the catalysis passes, the exact
//! simulator, the quasi-probability estimator and the ZH tools.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

mod circuits;
mod gadgets;
mod zh;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use catalyst_core::estimator::Allocation;
use catalyst_core::ring::Tower;

#[derive(Parser, Debug)]
#[command(
    name = "catalyst",
    version,
    about = "Exact catalysis compiler and ZH toolkit"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a transpiler pass over a circuit file.
    Transpile {
        /// Circuit file, `-` for stdin.
        input: PathBuf,
        #[arg(long, value_enum)]
        pass: Pass,
        /// Output path (stdout when absent).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Check the result against the exact simulator.
        #[arg(long)]
        verify: bool,
    },
    /// Exact statevector of a circuit, optionally with a Pauli expectation.
    Simulate {
        input: PathBuf,
        /// Pauli string such as `XIZ`, one letter per qubit.
        #[arg(long)]
        obs: Option<String>,
    },
    /// Quasi-probability estimate of a Pauli expectation.
    Estimate {
        input: PathBuf,
        #[arg(long)]
        obs: String,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = AllocArg::Sampled)]
        allocation: AllocArg,
        /// Write the convergence table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact verification of the gadget suite.
    VerifyGadgets {
        #[arg(long, value_enum, default_value_t = Scope::All)]
        scope: Scope,
        /// Print key=value lines instead of the summary text.
        #[arg(long)]
        machine: bool,
        /// Test hook: run the adder check with a deliberately wrong bank.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// ZH-diagram tools.
    Zh {
        #[command(subcommand)]
        cmd: ZhCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ZhCmd {
    /// Print the exact matrix of a diagram.
    Eval {
        input: PathBuf,
        #[arg(long, default_value = "clifford-t", value_parser = parse_tower)]
        tower: Tower,
    },
    /// Run the soundness gate over the rule library.
    Rules {
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
        #[arg(long, default_value = "clifford-t", value_parser = parse_tower)]
        tower: Tower,
    },
    /// Merge all unary `a`-boxes into one and print the diagram and trace.
    Extract {
        input: PathBuf,
        /// The generator to extract, in ring text (e.g. `i`, `w`).
        #[arg(long)]
        label: String,
        #[arg(long, default_value = "clifford-t", value_parser = parse_tower)]
        tower: Tower,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Trace path; appended to the output as comments when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exact semantic equality of two diagrams (exit 1 when different).
    Equal {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "clifford-t", value_parser = parse_tower)]
        tower: Tower,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pass {
    TToCs,
    RealEncode,
    #[value(name = "ccz-to-3t")]
    CczTo3t,
    SynthPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AllocArg {
    Sampled,
    Proportional,
}

impl From<AllocArg> for Allocation {
    fn from(a: AllocArg) -> Self {
        match a {
            AllocArg::Sampled => Allocation::Sampled,
            AllocArg::Proportional => Allocation::Proportional,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Scope {
    All,
    T,
    Phase,
    Ccz,
    Mixed,
    Real,
    Adder,
    Synth,
}

/// `dyadic`, `clifford-t` or `cyclotomic:N` for `Z[1/2, zeta_{2^N}]`.
fn parse_tower(s: &str) -> Result<Tower, String> {
    match s {
        "dyadic" => Ok(Tower::dyadic()),
        "clifford-t" => Ok(Tower::clifford_t()),
        _ => {
            let n = s
                .strip_prefix("cyclotomic:")
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| format!("unknown tower `{s}`"))?;
            Tower::cyclotomic(n).map_err(|e| e.to_string())
        }
    }
}

pub(crate) fn read_input(path: &Path) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("CATALYST_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("CATALYST_THREADS must be a positive integer, got `{v}`"))?;
    if rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_err()
    {
        bail!("thread pool already initialised");
    }
    Ok(())
}

/// `Ok(true)` when every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    match cli.cmd {
        Cmd::Transpile {
            input,
            pass,
            out,
            verify,
        } => circuits::transpile(&input, pass, out.as_deref(), verify),
        Cmd::Simulate { input, obs } => circuits::simulate(&input, obs.as_deref()),
        Cmd::Estimate {
            input,
            obs,
            shots,
            seed,
            allocation,
            csv,
        } => circuits::estimate(&input, &obs, shots, seed, allocation.into(), csv.as_deref()),
        Cmd::VerifyGadgets {
            scope,
            machine,
            inject_fault,
        } => gadgets::verify(scope, machine, inject_fault),
        Cmd::Zh { cmd } => match cmd {
            ZhCmd::Eval { input, tower } => zh::eval(&input, &tower),
            ZhCmd::Rules { max_degree, tower } => zh::rules(max_degree, &tower),
            ZhCmd::Extract {
                input,
                label,
                tower,
                out,
                trace,
            } => zh::extract(&input, &label, &tower, out.as_deref(), trace.as_deref()),
            ZhCmd::Equal { left, right, tower } => zh::equal(&left, &right, &tower),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
