//! `surgery-calc`: run surgery pipelines and inspect blow-down
//! configurations.
//!
//! Exit codes: 0 success, 1 assertion failure (with `--verify`),
//! 2 parse/validation/execution error.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use surgery_core::dsl::{execute, load_script_file, nondiffeo_certificate, Report};
use surgery_core::{is_negative_definite, lens_label, LinearPlumbing};

#[derive(Parser)]
#[command(name = "surgery-calc", about = "surgery calculus for smooth 4-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a pipeline script for one or more twist parameters.
    Run {
        /// Path to the .surg script.
        script: PathBuf,
        /// Twist parameter: a single value `3` or an inclusive range `1..10`.
        #[arg(long, default_value = "1")]
        n: String,
        /// Also write the full output to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Exit nonzero when any assert_* statement fails.
        #[arg(long)]
        verify: bool,
    },
    /// Print the blow-down configuration for a coprime pair p > q > 0.
    CheckConfig { p: u64, q: u64 },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { script, n, emit, verify } => run(script, &n, emit, verify),
        Command::CheckConfig { p, q } => check_config(p, q),
    }
}

fn parse_range(spec: &str) -> Result<Vec<i64>, String> {
    if let Some((a, b)) = spec.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
        if a > b {
            return Err(format!("empty range `{spec}`"));
        }
        Ok((a..=b).collect())
    } else {
        let v: i64 = spec.trim().parse().map_err(|_| format!("bad parameter `{spec}`"))?;
        Ok(vec![v])
    }
}

fn run(script_path: PathBuf, n_spec: &str, emit: Option<PathBuf>, verify: bool) -> ExitCode {
    let ns = match parse_range(n_spec) {
        Ok(ns) => ns,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let (script, dataset) = match load_script_file(&script_path) {
        Ok(loaded) => loaded,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let mut reports: Vec<Report> = Vec::new();
    let mut out = String::new();
    for &n in &ns {
        match execute(&script, &dataset, n) {
            Ok(report) => {
                out.push_str(&report.render());
                out.push('\n');
                reports.push(report);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if reports.len() >= 2 {
        let refs: Vec<&Report> = reports.iter().collect();
        out.push_str(&nondiffeo_certificate(&refs).to_string());
    }

    print!("{out}");
    if let Some(path) = emit {
        if let Err(e) = std::fs::write(&path, &out) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if verify && reports.iter().any(|r| !r.all_assertions_pass()) {
        eprintln!("verification failed: some assertions did not hold");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn check_config(p: u64, q: u64) -> ExitCode {
    use num_traits::Signed;

    let plumbing = match LinearPlumbing::from_pq(p, q) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let matrix = plumbing.intersection_matrix();
    let det = matrix.det().expect("square matrix");
    let definite = is_negative_definite(&matrix).expect("symmetric matrix");
    let boundary = lens_label(p, q).expect("valid pair");

    println!("configuration C_{{{p},{q}}}");
    println!("plumbing:          {}", plumbing.tuple_string());
    println!("vertices:          {}", plumbing.len());
    println!("boundary:          {boundary}");
    println!("det:               {det}");
    println!("|det|:             {}", det.abs());
    println!("negative definite: {}", if definite { "yes" } else { "no" });
    ExitCode::SUCCESS
}
