//! Command-line front end.
//!
//! Exit codes: 0 secure (or success), 1 insecure with a witness on stdout,
//! 2 no violation up to the bounded depth, 3 usage or input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench;
use crate::format::{parse_system, serialize_system, WitnessJson};
use crate::gen::{self, GenParams};
use crate::model::System;
use crate::notion::Notion;
use crate::oracle::{self, BoundedVerdict};
use crate::reduction::{augment_final, build_pcp_system, pcp_witness, PcpInstance};
use crate::verifier::{self, Verdict, Witness};

pub const EXIT_SECURE: i32 = 0;
pub const EXIT_INSECURE: i32 = 1;
pub const EXIT_NO_VIOLATION: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "nisec", version, about = "Noninterference checks for finite-state systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide P-, IP- or TA-security.
    Check {
        #[arg(long)]
        notion: Notion,
        /// System file, or `-` for stdin.
        file: PathBuf,
    },
    /// Search all traces up to a depth for a violation (any notion).
    Bounded {
        #[arg(long)]
        notion: Notion,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u64,
        file: PathBuf,
    },
    /// Print the PCP machine of an instance.
    ReducePcp {
        /// Alphabet letters, e.g. `ab`.
        #[arg(long)]
        sigma: String,
        /// Comma-separated U words.
        #[arg(long)]
        u: String,
        /// Comma-separated W words.
        #[arg(long)]
        w: String,
        /// Comma-separated 1-based solution indices.
        #[arg(long)]
        solution: Option<String>,
        /// Where to write the TO witness built from the solution.
        #[arg(long, requires = "solution")]
        witness: Option<PathBuf>,
    },
    /// Print the final-action augmentation of a system.
    AugmentFinal { file: PathBuf },
    /// Print a seeded random system.
    Gen {
        #[arg(long, default_value_t = 6)]
        states: usize,
        #[arg(long, default_value_t = 4)]
        actions: usize,
        #[arg(long, default_value_t = 3)]
        domains: usize,
        #[arg(long, default_value_t = 3)]
        obs: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a built-in example system (fig5, fig6, fig7, fig8, pcp_demo).
    Fixture { name: String },
    /// Time a decider on generated systems and fit a line.
    Bench {
        #[arg(long, default_value = "p")]
        notion: Notion,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// Re-check a witness JSON file against a system file.
    Verify { file: PathBuf, witness: PathBuf },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<System, Failure> {
    let text = read_input(path)?;
    parse_system(&text).map_err(|d| Failure(format!("{}:\n{d}", path.display())))
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect()
}

fn emit_witness(out: &mut dyn Write, sys: &System, notion: Notion, w: &Witness) -> io::Result<()> {
    writeln!(out, "{}", WitnessJson::new(sys, notion, w).to_json())
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_SECURE
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Check { notion, file } => {
            let sys = load(&file)?;
            let verdict = verifier::decide(&sys, notion).ok_or_else(|| {
                Failure(format!("{notion}-security is undecidable; use `bounded` instead"))
            })?;
            match verdict {
                Verdict::Secure => {
                    writeln!(out, "secure")?;
                    Ok(EXIT_SECURE)
                }
                Verdict::Insecure(w) => {
                    emit_witness(out, &sys, notion, &w)?;
                    Ok(EXIT_INSECURE)
                }
            }
        }
        Command::Bounded { notion, depth, budget, file } => {
            let sys = load(&file)?;
            match oracle::bounded_check_with_budget(&sys, notion, depth, budget)? {
                BoundedVerdict::Insecure(w) => {
                    emit_witness(out, &sys, notion, &w)?;
                    Ok(EXIT_INSECURE)
                }
                BoundedVerdict::NoViolationUpTo(k) => {
                    writeln!(out, "no violation up to depth {k}")?;
                    Ok(EXIT_NO_VIOLATION)
                }
            }
        }
        Command::ReducePcp { sigma, u, w, solution, witness } => {
            let inst = PcpInstance::new(&sigma, &split_list(&u), &split_list(&w))?;
            let sys = build_pcp_system(&inst);
            if let Some(sol) = solution {
                let indices = split_list(&sol)
                    .iter()
                    .map(|s| s.parse::<usize>().map_err(|_| Failure(format!("bad solution index `{s}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let pair = pcp_witness(&inst, &indices)?;
                let (alpha, beta) = pair.resolve(&sys);
                let d = sys.domain("D").expect("PCP machine has domain D");
                let json = WitnessJson::new(&sys, Notion::To, &Witness { domain: d, alpha, beta });
                match witness {
                    Some(path) => fs::write(&path, json.to_json() + "\n")
                        .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
                    None => writeln!(err, "{}", json.to_json())?,
                }
            }
            write!(out, "{}", serialize_system(&sys))?;
            Ok(EXIT_SECURE)
        }
        Command::AugmentFinal { file } => {
            let sys = load(&file)?;
            write!(out, "{}", serialize_system(&augment_final(&sys).system))?;
            Ok(EXIT_SECURE)
        }
        Command::Gen { states, actions, domains, obs, density, seed } => {
            let sys = gen::gen_random_system(&GenParams::new(states, actions, domains, obs, density, seed))?;
            write!(out, "{}", serialize_system(&sys))?;
            Ok(EXIT_SECURE)
        }
        Command::Fixture { name } => {
            write!(out, "{}", serialize_system(&gen::fixture(&name)?))?;
            Ok(EXIT_SECURE)
        }
        Command::Bench { notion, sizes, seed, repeats } => {
            let points = bench::run_bench(notion, &sizes, seed, repeats);
            let fit = bench::fit_linear(&points);
            writeln!(out, "size\tbest_ms\tmean_ms\tunions\tratio")?;
            for (p, r) in points.iter().zip(&fit.ratios) {
                writeln!(
                    out,
                    "{}\t{:.3}\t{:.3}\t{}\t{:.2}",
                    p.size,
                    p.best.as_secs_f64() * 1e3,
                    p.mean.as_secs_f64() * 1e3,
                    p.unions,
                    r
                )?;
            }
            let status = if fit.within(bench::LINEAR_TOLERANCE) { "within" } else { "outside" };
            writeln!(
                out,
                "fit: {:.3} ns/state, {status} {}x of linear",
                fit.slope * 1e9,
                bench::LINEAR_TOLERANCE
            )?;
            Ok(EXIT_SECURE)
        }
        Command::Verify { file, witness } => {
            let sys = load(&file)?;
            let json = WitnessJson::from_json(&read_input(&witness)?)?;
            let (notion, w) = json.resolve(&sys)?;
            if oracle::check_witness_pair(&sys, notion, w.domain, &w.alpha, &w.beta) {
                writeln!(out, "valid {notion} violation for {}", json.domain)?;
                Ok(EXIT_INSECURE)
            } else {
                writeln!(out, "not a violation")?;
                Ok(EXIT_SECURE)
            }
        }
    }
}
