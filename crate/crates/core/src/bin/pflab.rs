//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on invalid input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pflab::batch::{run_batch, ModeChoice, RunConfig, SCHEMA};
use pflab::field::MERSENNE_61;
use pflab::partition::enumerate_special;
use pflab::pencil::{build_pencil, Coeff};
use pflab::somatrix::{build_nilpotent, lego_nilpotent, Nilpotent};
use pflab::witness::{verify, witness, Route, Status, WitnessReport};
use pflab::{Error, Partition};

const NUMERIC_HELP: &str = "\
Numeric mode evaluates each identity at random points of F_p. A false identity \
of degree d survives one trial with probability at most d/p, so with the \
default prime 2^61-1 and 20 trials the chance of a wrong pass is negligible.";

#[derive(Parser)]
#[command(name = "pflab", version, about = "Square-root structure of characteristic polynomial coefficients on nilpotent orbits of so(2N)", after_help = NUMERIC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check c_{k_j} = sign * witness^2 at one or all conjecture indices.
    Verify(VerifyArgs),
    /// Print the witness polynomial for (P, j).
    Sqrt(SqrtArgs),
    /// Print the coefficients c_{2k} with their chi_{2k}.
    Charpoly(CharpolyArgs),
    /// Print the nilpotent representative X of a partition.
    Nilpotent(NilpotentArgs),
    /// Print the Lego set and augmented partition.
    Lego(LegoArgs),
    /// List the special D-partitions of 2N.
    Enumerate(EnumerateArgs),
    /// Verify every special partition of the given sizes.
    Batch(BatchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// auto, exact or numeric. Auto is exact up to --exact-cap.
    #[arg(long, default_value = "auto")]
    mode: ModeChoice,
    /// Random points per identity in numeric mode.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Field modulus for numeric mode.
    #[arg(long, default_value_t = MERSENNE_61)]
    prime: u64,
    /// Largest 2N handled exactly in auto mode.
    #[arg(long, default_value_t = 8)]
    exact_cap: usize,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            mode: self.mode,
            trials: self.trials,
            seed: self.seed,
            prime: self.prime,
            exact_size_cap: self.exact_cap,
            timing: false,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    partition: Partition,
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    j: Option<usize>,
    /// Every conjecture index.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SqrtArgs {
    #[arg(long)]
    partition: Partition,
    #[arg(long)]
    j: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CharpolyArgs {
    #[arg(long)]
    partition: Partition,
    /// Only c_{2k}.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct NilpotentArgs {
    #[arg(long)]
    partition: Partition,
    /// Use the Lego realisation (Jordan type of the augmented partition).
    #[arg(long)]
    lego: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct LegoArgs {
    #[arg(long)]
    partition: Partition,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// 2N.
    #[arg(long)]
    size: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BatchArgs {
    /// Comma-separated values of 2N.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[command(flatten)]
    run: RunArgs,
    /// Add per-item wall-clock milliseconds to the report.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    json: bool,
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) if e.is_verification_failure() => {
            eprintln!("verification failed: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> pflab::Result<Outcome> {
    match cmd {
        Command::Verify(a) => cmd_verify(a),
        Command::Sqrt(a) => cmd_sqrt(a),
        Command::Charpoly(a) => cmd_charpoly(a),
        Command::Nilpotent(a) => cmd_nilpotent(a),
        Command::Lego(a) => cmd_lego(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Batch(a) => cmd_batch(a),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serialises"));
}

fn cmd_verify(a: VerifyArgs) -> pflab::Result<Outcome> {
    let p = a.partition;
    if !p.is_special() {
        return Err(Error::NotSpecial(p.parts().to_vec()));
    }
    let mode = a.run.config().mode_for(p.total())?;
    let indices = match a.j {
        Some(j) => vec![j],
        None => p.conjecture_indices()?,
    };
    let reports = indices
        .into_iter()
        .map(|j| verify(&p, j, &mode))
        .collect::<pflab::Result<Vec<WitnessReport>>>()?;
    let ok = reports.iter().all(WitnessReport::passed);
    if a.json {
        print_json(&json!({ "schema": SCHEMA, "reports": reports }));
    } else {
        for r in &reports {
            print_report(r);
        }
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::Lego => "lego",
        Route::Pfaffian => "pfaffian",
    }
}

fn print_report(r: &WitnessReport) {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    println!(
        "{status} {} j={} k_j={} b_j={} route={} mode={} size={} sign={} det_sign={}",
        r.partition,
        r.j,
        r.k_j,
        r.b_j,
        route_name(r.route),
        r.mode,
        r.size,
        opt(&r.sign),
        opt(&r.det_sign),
    );
    if let Some(w) = &r.witness {
        println!("  witness: {w}");
    }
    if let Some(f) = &r.failure {
        println!("  failed identity: {f}");
    }
}

fn cmd_sqrt(a: SqrtArgs) -> pflab::Result<Outcome> {
    let w = witness(&a.partition, a.j)?;
    if a.json {
        print_json(&json!({
            "schema": SCHEMA,
            "partition": a.partition,
            "j": a.j,
            "witness": w,
        }));
    } else {
        println!("{w}");
    }
    Ok(Outcome::Pass)
}

fn cmd_charpoly(a: CharpolyArgs) -> pflab::Result<Outcome> {
    let p = a.partition;
    let mode = a.run.config().mode_for(p.total())?;
    let pencil = build_pencil(&p, &mode)?;
    let entries: Vec<(usize, usize, Coeff)> = match a.k {
        Some(k) => {
            if k == 0 || k > p.half() {
                return Err(Error::OutOfRange { index: k, max: p.half() });
            }
            vec![(k, p.chi(k)?, pencil.extract_c(k)?)]
        }
        None => pencil
            .coefficient_table()?
            .entries
            .into_iter()
            .map(|e| (e.k, e.chi, e.c))
            .collect(),
    };
    if a.json {
        let list: Vec<_> = entries
            .iter()
            .map(|(k, chi, c)| match c {
                Coeff::Exact(poly) => json!({ "k": k, "chi": chi, "c": poly }),
                Coeff::Field(v) => json!({ "k": k, "chi": chi, "c": v }),
            })
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "partition": p,
            "mode": if mode.is_exact() { "exact" } else { "numeric" },
            "coefficients": list,
        }));
    } else {
        for (k, chi, c) in &entries {
            println!("c_{} (chi = {chi}): {c}", 2 * k);
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_nilpotent(a: NilpotentArgs) -> pflab::Result<Outcome> {
    let x: Nilpotent = if a.lego {
        lego_nilpotent(&a.partition.lego_set()?)
    } else {
        build_nilpotent(&a.partition)?
    };
    if a.json {
        let entries: Vec<[i64; 3]> = x
            .nonzeros()
            .into_iter()
            .map(|(i, j, v)| [i as i64, j as i64, v])
            .collect();
        print_json(&json!({
            "schema": SCHEMA,
            "n": x.matrix.rows(),
            "entries": entries,
        }));
    } else {
        for i in 0..x.matrix.rows() {
            let row: Vec<String> = x.matrix.row(i).iter().map(i64::to_string).collect();
            println!("{}", row.join(" "));
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_lego(a: LegoArgs) -> pflab::Result<Outcome> {
    let lego = a.partition.lego_set()?;
    if a.json {
        let blocks: Vec<String> = lego.blocks.iter().map(ToString::to_string).collect();
        print_json(&json!({
            "schema": SCHEMA,
            "partition": lego.original,
            "blocks": blocks,
            "augmented": lego.augmented,
        }));
    } else {
        println!("blocks: {lego}");
        println!("augmented: {}", lego.augmented);
    }
    Ok(Outcome::Pass)
}

fn cmd_enumerate(a: EnumerateArgs) -> pflab::Result<Outcome> {
    let list = enumerate_special(a.size)?;
    if a.json {
        print_json(&json!({ "schema": SCHEMA, "size": a.size, "partitions": list }));
    } else {
        for p in &list {
            println!("{p}");
        }
    }
    Ok(Outcome::Pass)
}

fn cmd_batch(a: BatchArgs) -> pflab::Result<Outcome> {
    let config = RunConfig {
        timing: a.timing,
        ..a.run.config()
    };
    let report = run_batch(&config, &a.sizes)?;
    if a.json {
        println!("{}", report.to_json());
    } else {
        for item in &report.items {
            let status = if item.status == Status::Pass { "PASS" } else { "FAIL" };
            print!("{status} {} j={} mode={} sign={}", item.partition, item.j, item.mode, opt(&item.sign));
            if let Some(ms) = item.time_ms {
                print!(" {ms}ms");
            }
            println!();
            if let Some(f) = &item.failure {
                println!("  failed identity: {f}");
            }
        }
        let s = report.summary;
        println!("total: {}, passed: {}, failed: {}", s.total, s.passed, s.failed);
    }
    Ok(if report.all_passed() { Outcome::Pass } else { Outcome::Fail })
}
