use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use radlab::campaign::{run_campaign, CampaignConfig};
use radlab::fmt::{format_complex, parse_matrix};
use radlab::report::to_json;
use radlab::search::{run_search, search_report, SearchConfig};
use radlab_core::catalogue::{list_cases, CaseId};
use radlab_core::numrad::{radius_rayleigh, radius_theta_scan};
use radlab_core::linalg::op_norm;

#[derive(Parser)]
#[command(
    name = "radlab",
    version,
    about = "Verification lab for numerical-radius inequalities on 2x2 operator matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RadiusMethod {
    ThetaScan,
    Rayleigh,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized verification trials for catalogue cases.
    Verify {
        /// Comma-separated case IDs, or `all`.
        #[arg(long, default_value = "all")]
        cases: String,
        /// Random instances per case.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest block dimension drawn.
        #[arg(long = "dim-max", default_value_t = 3)]
        dim_max: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Restarts for best-found extrema (w_p, inf zeta).
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Probe: relax I10's `p >= q > 1` ordering and sweep p = 1.2.
        #[arg(long = "relax-pq", default_value_t = false)]
        relax_pq: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hill-climb for tightness or counterexamples on one or more cases.
    Search {
        /// Comma-separated case IDs, or `all`.
        #[arg(long)]
        cases: String,
        /// Evaluation budget per case.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long = "dim-max", default_value_t = 3)]
        dim_max: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the numerical radius of a matrix from a text file.
    Radius {
        /// Matrix file (line 1: `rows cols`; then row entries `a`,
        /// `a+bi`, or `a-bi`; `#` comments and blank lines ignored).
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RadiusMethod::ThetaScan)]
        method: RadiusMethod,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the case catalogue.
    Cases,
}

fn parse_case_list(spec: &str) -> Result<Vec<CaseId>> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(CaseId::ALL.to_vec());
    }
    spec.split(',')
        .map(|tok| {
            CaseId::from_str(tok.trim()).map_err(|e| anyhow::anyhow!("{e}"))
        })
        .collect()
}

fn write_or_print(out: &Option<PathBuf>, json: &str) -> Result<()> {
    if let Some(path) = out {
        std::fs::write(path, json)
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    Ok(())
}

fn cmd_verify(
    cases: String,
    trials: usize,
    dim_max: usize,
    seed: u64,
    restarts: usize,
    relax_pq: bool,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    if dim_max == 0 {
        bail!("--dim-max must be at least 1");
    }
    let cfg = CampaignConfig {
        cases: parse_case_list(&cases)?,
        trials,
        dim_max,
        seed,
        threads: 0,
        restarts,
        relax_p_ordering: relax_pq,
    };
    let outcome = run_campaign(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;

    println!(
        "{:<6} {:>7} {:>11} {:>13} {:>14} {:>12}",
        "case", "trials", "violations", "inconclusive", "min_slack", "max_ratio"
    );
    for case in &outcome.report.cases {
        println!(
            "{:<6} {:>7} {:>11} {:>13} {:>14.6e} {:>12.6e}",
            case.case_id,
            case.trials,
            case.violations,
            case.inconclusive,
            case.min_slack,
            case.max_ratio
        );
    }
    for finding in &outcome.findings {
        println!("{finding}");
    }
    println!(
        "wall time: {:.2}s (seed {})",
        outcome.report.wall_time_seconds, outcome.report.master_seed
    );

    write_or_print(&out, &to_json(&outcome.report))?;

    if outcome.unexpected_violations {
        eprintln!("FAIL: unexpected violations recorded");
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_search(
    cases: String,
    budget: usize,
    dim_max: usize,
    seed: u64,
    restarts: usize,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    if dim_max == 0 {
        bail!("--dim-max must be at least 1");
    }
    let started = std::time::Instant::now();
    let ids = parse_case_list(&cases)?;
    let mut outcomes = Vec::new();
    for case in ids {
        let cfg = SearchConfig {
            case,
            budget,
            dim_max,
            seed,
            restarts,
        };
        let outcome = run_search(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
        println!(
            "{}: {} evaluations, best objective {:.9e}, violations {}",
            outcome.case, outcome.evaluations, outcome.best_objective, outcome.violations
        );
        outcomes.push(outcome);
    }
    let report = search_report(seed, &outcomes, started.elapsed().as_secs_f64());
    write_or_print(&out, &to_json(&report))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_radius(input: PathBuf, method: RadiusMethod, tol: f64) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&input)
        .with_context(|| format!("reading {}", input.display()))?;
    let matrix = parse_matrix(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
    let estimate = match method {
        RadiusMethod::ThetaScan => radius_theta_scan(&matrix, tol),
        RadiusMethod::Rayleigh => radius_rayleigh(&matrix, 32, tol, 0x7261_6469_7573),
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;

    println!("w(T)    = {:.17e}", estimate.value);
    println!("||T||   = {:.17e}", op_norm(&matrix));
    if let Some(theta) = estimate.witness_theta {
        println!("theta   = {:.17e}", theta);
    }
    if let Some(x) = &estimate.witness_vector {
        let entries: Vec<String> = x.iter().map(|&z| format_complex(z)).collect();
        println!("witness = [{}]", entries.join(", "));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cases() -> ExitCode {
    for case in list_cases() {
        println!("{:<5} [{}]", case.id, case.relation);
        println!("      {}", case.statement);
        println!("      inputs: {}", case.input_shape);
        if !case.constraints.is_empty() {
            println!("      constraints: {}", case.constraints.join(", "));
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    // Die quietly when a pipe reader (e.g. `head`) closes stdout.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            cases,
            trials,
            dim_max,
            seed,
            restarts,
            relax_pq,
            out,
        } => cmd_verify(cases, trials, dim_max, seed, restarts, relax_pq, out),
        Command::Search {
            cases,
            budget,
            dim_max,
            seed,
            restarts,
            out,
        } => cmd_search(cases, budget, dim_max, seed, restarts, out),
        Command::Radius { input, method, tol } => cmd_radius(input, method, tol),
        Command::Cases => Ok(cmd_cases()),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
