//! `hopelab` — solve, sweep, and verify scenarios of the lab/assistant/
//! admissions equilibrium model.
//!
//! Exit codes: 0 success, 1 verification failures, 2 validation or I/O
//! problems, 3 nothing to sweep.

mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hopelab_core::contract;
use hopelab_core::equilibrium::{market_fixed_point, FixedPointOpts, GoodSignalProbs};
use hopelab_core::optimizer::SolveOptions;
use hopelab_core::statics::{self, proposition_suite, scenario_hash, PropositionReport};
use hopelab_core::tournament::{self, default_good_signal_prob};

use output::{fmt_f64, to_canonical_json, to_csv};
use scenario::ScenarioFile;

#[derive(Parser)]
#[command(
    name = "hopelab",
    about = "Numerical equilibrium laboratory for the lab/assistant/admissions game",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the market fixed point and write equilibrium files.
    Solve(RunArgs),
    /// Run the scenario's parameter sweeps, one CSV per sweep.
    Sweep(RunArgs),
    /// Run the proposition verdict suite and print the verdict table.
    Verify(RunArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (versioned JSON).
    scenario: PathBuf,
    /// Output directory; defaults to $HOPELAB_OUT, then the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `json` suppresses the human-readable verdict table.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the stage-1 solver's seed-grid resolution (>= 8); applies
    /// to solve and sweep. The verdict suite pins its own resolutions.
    #[arg(long)]
    grid_resolution: Option<usize>,
    /// Also write the normalized scenario back out as config.json.
    #[arg(long)]
    dump_config: bool,
}

impl RunArgs {
    fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os("HOPELAB_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    fn solve_options(&self) -> Result<SolveOptions, String> {
        let mut opts = SolveOptions::default();
        if let Some(res) = self.grid_resolution {
            if res < 8 {
                return Err(format!("--grid-resolution must be at least 8, got {res}"));
            }
            opts.seed_resolution = res;
        }
        Ok(opts)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match code {
        Ok(code) => code,
        Err(message) => {
            eprintln!("hopelab: {message}");
            ExitCode::from(2)
        }
    }
}

/// Buffered output files: nothing touches the filesystem until every
/// computation has succeeded, so failures leave no partial artifacts.
struct OutFiles {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl OutFiles {
    fn new(dir: PathBuf) -> Self {
        OutFiles { dir, files: Vec::new() }
    }

    fn push(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn write(self) -> Result<Vec<PathBuf>, String> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| format!("cannot create {}: {e}", self.dir.display()))?;
        let mut written = Vec::new();
        for (name, contents) in self.files {
            let path = self.dir.join(&name);
            std::fs::write(&path, contents)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn load(args: &RunArgs) -> Result<(ScenarioFile, SolveOptions), String> {
    let scenario = ScenarioFile::load(&args.scenario)?;
    let opts = args.solve_options()?;
    Ok((scenario, opts))
}

fn maybe_dump_config(
    args: &RunArgs,
    scenario: &ScenarioFile,
    files: &mut OutFiles,
) -> Result<(), String> {
    if args.dump_config {
        files.push("config.json", to_canonical_json(&scenario.normalized()?)?);
    }
    Ok(())
}

fn cmd_solve(args: &RunArgs) -> Result<ExitCode, String> {
    let (scenario, solve) = load(args)?;
    let econ = &scenario.economy;
    let tech = &scenario.tech;
    let g = GoodSignalProbs::uniform(default_good_signal_prob(&scenario.signal, econ));
    let fp = market_fixed_point(econ, tech, g, FixedPointOpts { solve, ..Default::default() })
        .map_err(|e| format!("fixed point failed: {e}"))?;
    let market = tournament::clear_market(fp.m_good, econ)
        .map_err(|e| format!("market clearing failed: {e}"))?;

    let arms = scenario.arms_race_config()?;
    let hash = scenario_hash(econ, tech, &scenario.signal, &arms);

    let wage = |k: f64| contract::pc_wage(k, fp.admission_prob, econ, tech);
    let (w_q, s_q) = wage(fp.strategies.quality.k_total()).map_err(|e| e.to_string())?;
    let (w_n, s_n) = wage(fp.strategies.quantity.k_total()).map_err(|e| e.to_string())?;

    let doc = json!({
        "scenario_hash": hash,
        "seed": scenario.seed,
        "admission_prob": fp.admission_prob,
        "converged": fp.converged,
        "iterations": fp.iterations,
        "residual": fp.residual,
        "m_good": fp.m_good,
        "market": market,
        "strategies": {
            "quality_max": fp.strategies.quality,
            "quantity_max": fp.strategies.quantity,
        },
        "wages": { "quality_max": w_q, "quantity_max": w_n },
        "pc_slack": { "quality_max": s_q, "quantity_max": s_n },
    });

    // flat key/value rows, sorted for byte determinism
    let mut kv: Vec<(String, String)> = vec![
        ("admission_prob".into(), fmt_f64(fp.admission_prob)),
        ("converged".into(), fmt_f64(f64::from(fp.converged))),
        ("iterations".into(), format!("{}", fp.iterations)),
        ("residual".into(), fmt_f64(fp.residual)),
        ("m_good".into(), fmt_f64(fp.m_good)),
        ("p_admit".into(), fmt_f64(market.p_admit)),
        ("congestion_derivative".into(), fmt_f64(market.congestion_derivative)),
        ("wage_quality".into(), fmt_f64(w_q)),
        ("wage_quantity".into(), fmt_f64(w_n)),
        ("pc_slack_quality".into(), fmt_f64(s_q)),
        ("pc_slack_quantity".into(), fmt_f64(s_n)),
    ];
    for (label, s) in
        [("quality", &fp.strategies.quality), ("quantity", &fp.strategies.quantity)]
    {
        kv.push((format!("k_a_{label}"), fmt_f64(s.k_a)));
        kv.push((format!("k_g_{label}"), fmt_f64(s.k_g)));
        kv.push((format!("n_ra_{label}"), fmt_f64(s.n_ra)));
        kv.push((format!("n_int_{label}"), format!("{}", s.n_ra_int)));
        kv.push((format!("utility_{label}"), fmt_f64(s.utility)));
        kv.push((format!("scale_unbounded_{label}"), format!("{}", s.scale_unbounded)));
    }
    kv.sort();
    let csv_rows: Vec<Vec<String>> = kv.into_iter().map(|(k, v)| vec![k, v]).collect();

    let mut files = OutFiles::new(args.out_dir());
    files.push("equilibrium.json", to_canonical_json(&doc)?);
    files.push("equilibrium.csv", to_csv(&["key".into(), "value".into()], &csv_rows));
    maybe_dump_config(args, &scenario, &mut files)?;
    files.write()?;
    if !fp.converged {
        eprintln!(
            "hopelab: fixed point did not converge (residual {:.3e} after {} iterations); \
             best iterate written",
            fp.residual, fp.iterations
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &RunArgs) -> Result<ExitCode, String> {
    let (scenario, solve) = load(args)?;
    if scenario.sweeps.is_empty() {
        eprintln!("hopelab: nothing to sweep (scenario lists no sweeps)");
        return Ok(ExitCode::from(3));
    }
    let mut files = OutFiles::new(args.out_dir());
    for spec in &scenario.sweeps {
        let table = statics::run_sweep_with(
            spec,
            &scenario.economy,
            &scenario.tech,
            &scenario.signal,
            solve,
        )
        .map_err(|e| format!("sweep over `{}` failed: {e}", spec.parameter))?;
        let rows: Vec<Vec<String>> =
            table.rows.iter().map(|r| r.iter().map(|v| fmt_f64(*v)).collect()).collect();
        files.push(&format!("sweep_{}.csv", table.parameter), to_csv(&table.columns, &rows));
    }
    maybe_dump_config(args, &scenario, &mut files)?;
    files.write()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &RunArgs) -> Result<ExitCode, String> {
    let (scenario, _solve) = load(args)?;
    let arms = scenario.arms_race_config()?;
    let reports = proposition_suite(&scenario.economy, &scenario.tech, &scenario.signal, &arms)
        .map_err(|e| format!("verdict suite failed: {e}"))?;

    let all_pass = reports.iter().all(PropositionReport::non_conditional_pass);
    let doc = json!({
        "all_non_conditional_pass": all_pass,
        "reports": reports,
    });
    let mut files = OutFiles::new(args.out_dir());
    files.push("verdicts.json", to_canonical_json(&doc)?);
    maybe_dump_config(args, &scenario, &mut files)?;
    files.write()?;

    if args.format == Format::Csv {
        print_verdict_table(&reports);
        println!(
            "\noverall: {}",
            if all_pass { "PASS (all non-conditional checks)" } else { "FAIL" }
        );
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn clip(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        format!("{s:<width$}")
    } else {
        let cut: String = s.chars().take(width - 3).collect();
        format!("{cut}...")
    }
}

fn print_verdict_table(reports: &[PropositionReport]) {
    let header = format!(
        "{:<5} {:<52} {:<34} {:<44} STATUS",
        "PROP", "CLAIM", "EXPECTED", "COMPUTED"
    );
    println!("{header}");
    println!("{}", "-".repeat(150));
    for report in reports {
        for c in &report.checks {
            let status = match (c.pass, c.conditional, c.boundary) {
                (true, true, _) => "COND-PASS",
                (false, true, _) => "COND-FAIL",
                (false, false, true) => "FAIL-boundary",
                (true, false, _) => "PASS",
                (false, false, false) => "FAIL",
            };
            println!(
                "{:<5} {} {} {} {}",
                report.proposition_id.label(),
                clip(&c.claim, 52),
                clip(&c.expected, 34),
                clip(&c.computed, 44),
                status
            );
        }
    }
}
