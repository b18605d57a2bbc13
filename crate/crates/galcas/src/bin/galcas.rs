//! Thin command-line front end over the library. Subcommands map one to one
//! onto library calls; all heavy lifting lives in the crate so the same
//! operations are scriptable from Rust.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 for
//! usage problems (bad arguments, unreadable or malformed input).

use clap::{Parser, Subcommand, ValueEnum};
use galcas::envelope::Envelope;
use galcas::galilean::{BasisLabel, StructureConstants};
use galcas::invariants::{generator_names, generator_set};
use galcas::orbitreduce::{closed_form_invariants, reduce, FloatDual};
use galcas::polyring::VarTable;
use galcas::ratmat::{fmt_rat, Rat};
use galcas::verify::{run_suite, VerifyOptions};
use num_traits::{One, Signed};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "galcas", version, about = "Invariant generators and center of gal(n)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StructureFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generators of the invariant algebra on gal(n)*
    Gen {
        /// Spatial dimension (construction above n = 9 gets combinatorially heavy)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        n: u8,
        #[arg(long, value_enum, default_value_t = GenFormat::Text)]
        format: GenFormat,
    },
    /// Run the verification suite and report per-check results
    Verify {
        /// Spatial dimension
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        n: u8,
        /// Random trials for the sampled checks
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for all randomized checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the report as JSON on stdout
        #[arg(long)]
        json: bool,
        /// Also run the exact centrality check at n = 4
        #[arg(long)]
        force_centrality_n4: bool,
    },
    /// Reduce a dual element (JSON file) to its transversal normal form
    Reduce {
        /// Path to the dual element, in the documented JSON shape
        #[arg(long)]
        input: PathBuf,
        /// Degeneracy threshold on the norms that the reduction divides by
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Symmetrized generators as elements of the enveloping algebra
    Center {
        /// Spatial dimension (exact enveloping-algebra arithmetic, so small n)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        n: u8,
        /// Keep only elements of at most this degree
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Structure constants of the basis, every ordered pair
    Structure {
        /// Spatial dimension
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        n: u8,
        #[arg(long, value_enum, default_value_t = StructureFormat::Text)]
        format: StructureFormat,
    },
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, so `galcas structure --n 8 | head`
    // would panic on the failed write; restore the quiet unix exit.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    galcas::configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> galcas::Result<ExitCode> {
    match cli.cmd {
        Command::Gen { n, format } => cmd_gen(n as usize, format),
        Command::Verify { n, trials, seed, json, force_centrality_n4 } => {
            cmd_verify(n as usize, trials, seed, json, force_centrality_n4)
        }
        Command::Reduce { input, tol } => cmd_reduce(&input, tol),
        Command::Center { n, max_degree } => cmd_center(n as usize, max_degree),
        Command::Structure { n, format } => cmd_structure(n as usize, format),
    }
}

fn cmd_gen(n: usize, format: GenFormat) -> galcas::Result<ExitCode> {
    let table = VarTable::new(n);
    let gens = generator_set(&table);
    let names = generator_names(n);
    match format {
        GenFormat::Text => {
            for (gen, name) in gens.iter().zip(&names) {
                println!("{} = {}", name, gen);
            }
        }
        GenFormat::Latex => {
            for (gen, name) in gens.iter().zip(&names) {
                println!("{} = {}", name, gen.to_latex());
            }
        }
        GenFormat::Json => {
            let items: Vec<Value> = gens
                .iter()
                .zip(&names)
                .map(|(gen, name)| {
                    json!({
                        "name": name,
                        "degree": gen.degree(),
                        "polynomial": gen.to_json(),
                    })
                })
                .collect();
            let doc = json!({"schema": "v1", "n": n, "generators": items});
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    n: usize,
    trials: usize,
    seed: u64,
    as_json: bool,
    force_centrality_n4: bool,
) -> galcas::Result<ExitCode> {
    let opts = VerifyOptions { trials, seed, force_centrality_n4 };
    let report = run_suite(n, &opts)?;
    for c in &report.checks {
        eprintln!("{} finished in {:?}", c.name, c.runtime);
    }
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_reduce(input: &std::path::Path, tol: f64) -> galcas::Result<ExitCode> {
    let raw = std::fs::read_to_string(input)?;
    let value: Value = serde_json::from_str(&raw)?;
    let xi = FloatDual::from_json(&value)?;
    let n = xi.n();
    let table = VarTable::new(n);
    let gens = generator_set(&table);
    let red = reduce(&xi, tol);
    let before: Vec<f64> = gens
        .iter()
        .map(|g| g.evaluate_f64(&xi.to_point()))
        .collect::<galcas::Result<_>>()?;
    let after: Vec<f64> = gens
        .iter()
        .map(|g| g.evaluate_f64(&red.reduced.to_point()))
        .collect::<galcas::Result<_>>()?;
    let closed = if red.form.degenerate {
        Value::Null
    } else {
        json!(closed_form_invariants(&red.form)?)
    };
    let doc = json!({
        "schema": "v1",
        "n": n,
        "A": red.form.a,
        "B": red.form.b,
        "thetas": red.form.thetas,
        "degenerate": red.form.degenerate,
        "steps": red.trace.steps.iter().map(|s| s.label.as_str()).collect::<Vec<_>>(),
        "invariants_before": before,
        "invariants_after": after,
        "closed_form": closed,
        "residual": red.residual,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_center(n: usize, max_degree: Option<u32>) -> galcas::Result<ExitCode> {
    let table = VarTable::new(n);
    let gens = generator_set(&table);
    let names = generator_names(n);
    let env = Envelope::new(n)?;
    let dim = table.dim();
    let mut elements = Vec::new();
    for (gen, name) in gens.iter().zip(&names) {
        if let Some(cap) = max_degree {
            if gen.degree().unwrap_or(0) > cap {
                continue;
            }
        }
        let lam = env.symmetrize(gen)?;
        let (central, _) = env.is_central(&lam)?;
        let terms: Vec<Value> = lam
            .terms()
            .map(|(mono, coeff)| {
                let exps: Vec<u16> = (0..dim).map(|idx| mono.exponent_of(idx)).collect();
                json!({"coeff": fmt_rat(coeff), "pbw": exps})
            })
            .collect();
        elements.push(json!({
            "name": format!("lambda({})", name),
            "degree": lam.degree(),
            "central": central,
            "terms": terms,
        }));
    }
    let basis: Vec<String> = BasisLabel::all(n).iter().map(|l| l.display()).collect();
    let doc = json!({
        "schema": "v1",
        "n": n,
        "basis": basis,
        "elements": elements,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(ExitCode::SUCCESS)
}

/// Renders a bracket value like `-B_2` or `1/2*P_1 + K_{1,2}`.
fn format_bracket(terms: &[(usize, Rat)], labels: &[BasisLabel]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, coeff)) in terms.iter().enumerate() {
        let name = labels[*c].display();
        let mag = if coeff.abs().is_one() {
            name
        } else {
            format!("{}*{}", fmt_rat(&coeff.abs()), name)
        };
        if i == 0 {
            if coeff.is_negative() {
                out.push('-');
            }
        } else if coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&mag);
    }
    out
}

fn cmd_structure(n: usize, format: StructureFormat) -> galcas::Result<ExitCode> {
    let sc = StructureConstants::new(n)?;
    let labels = BasisLabel::all(n);
    let dim = sc.dim();
    match format {
        StructureFormat::Text => {
            for a in 0..dim {
                for b in 0..dim {
                    if a == b {
                        continue;
                    }
                    let terms = sc.bracket(a, b);
                    if terms.is_empty() {
                        continue;
                    }
                    println!(
                        "[{}, {}] = {}",
                        labels[a].display(),
                        labels[b].display(),
                        format_bracket(&terms, &labels)
                    );
                }
            }
        }
        StructureFormat::Json => {
            let mut brackets = Vec::new();
            for a in 0..dim {
                for b in 0..dim {
                    if a == b {
                        continue;
                    }
                    let terms = sc.bracket(a, b);
                    if terms.is_empty() {
                        continue;
                    }
                    let parts: Vec<Value> = terms
                        .iter()
                        .map(|(c, coeff)| {
                            json!({"basis": labels[*c].display(), "coeff": fmt_rat(coeff)})
                        })
                        .collect();
                    brackets.push(json!({
                        "a": labels[a].display(),
                        "b": labels[b].display(),
                        "terms": parts,
                    }));
                }
            }
            let basis: Vec<String> = labels.iter().map(|l| l.display()).collect();
            let doc = json!({
                "schema": "v1",
                "n": n,
                "dim": dim,
                "basis": basis,
                "brackets": brackets,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}
