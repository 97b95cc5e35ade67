use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use apobs::abstraction::SystemSpec;
use apobs::automata::to_dot;
use apobs::report::Report;
use apobs::scenario::{drone, RMode, BENCH_FORMULAS, DRONE_PATROL, REFERENCE_ROWS};
use apobs::verify::{verify, VerifyOptions};

#[derive(Parser)]
#[command(name = "apobs", version, about = "Verify sampled continuous-time systems against continuous-time LTL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one formula against a system; exit 0 when verified, 2 when
    /// inconclusive, 1 on error.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        formula: String,
        /// Override the grid spacing.
        #[arg(long)]
        eta: Option<f64>,
        /// Override the sampling period.
        #[arg(long)]
        tau: Option<f64>,
        /// Runs per stage whose times are averaged.
        #[arg(long, default_value_t = 10)]
        repeat: usize,
        /// Write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the automaton in DOT format.
        #[arg(long)]
        export_automaton: Option<PathBuf>,
        /// Write the game graph and its solution as JSON.
        #[arg(long)]
        export_game: Option<PathBuf>,
        /// Build the model even when the sampling period does not separate
        /// the formula's regions.
        #[arg(long)]
        allow_unsound_tau: bool,
    },
    /// Write a built-in system description.
    Scenario {
        name: String,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Reading of the r region: "or" or "and".
        #[arg(long, default_value = "or")]
        r_mode: RMode,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a list of formulas and print a size and timing table.
    Bench {
        #[arg(long)]
        system: PathBuf,
        /// One formula per line; the benchmark formulas when absent.
        #[arg(long)]
        formulas: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        repeat: usize,
        /// Also write all reports as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        allow_unsound_tau: bool,
    },
}

fn load_spec(path: &Path) -> Result<SystemSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: SystemSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    spec.validate().context("system")?;
    Ok(spec)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn system_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "system".into(), |s| s.to_string_lossy().into_owned())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    system: &Path,
    formula: &str,
    eta: Option<f64>,
    tau: Option<f64>,
    repeat: usize,
    out: Option<&Path>,
    export_automaton: Option<&Path>,
    export_game: Option<&Path>,
    allow_unsound_tau: bool,
) -> Result<ExitCode> {
    let mut spec = load_spec(system)?;
    if let Some(e) = eta {
        spec.eta = e;
    }
    if let Some(t) = tau {
        spec.tau = t;
    }
    spec.validate().context("system")?;
    let mut opts = VerifyOptions {
        repeat,
        ..VerifyOptions::default()
    };
    opts.model.allow_unsound_tau = allow_unsound_tau;
    let v = verify(&spec, formula, &system_name(system), &opts)?;
    let r = &v.report;
    if r.unsound_tau {
        log::warn!("sampling period {} does not separate the regions; the verdict is not backed by the abstraction", r.tau);
    }
    println!("{}", r.verdict);
    println!(
        "automaton {} states, model {} states, game {} Player + {} Opponent, {:.2} s total",
        r.automaton_states, r.model_states, r.game_player, r.game_opponent, r.total_seconds
    );
    if let Some(p) = out {
        write(p, &r.to_json()?)?;
    }
    if let Some(p) = export_automaton {
        write(p, &to_dot(&v.translation.nba))?;
    }
    if let Some(p) = export_game {
        write(p, &serde_json::to_string_pretty(&v.game.to_json(Some(&v.solution)))?)?;
    }
    Ok(ExitCode::from(r.verdict.exit_code() as u8))
}

fn cmd_scenario(name: &str, eta: f64, r_mode: RMode, out: Option<&Path>) -> Result<()> {
    let spec = match name {
        "drone" => drone(eta, r_mode, DRONE_PATROL),
        _ => bail!("unknown scenario {:?}; available: drone", name),
    };
    spec.validate().context("system")?;
    let json = serde_json::to_string_pretty(&spec)?;
    match out {
        Some(p) => write(p, &json)?,
        None => println!("{}", json),
    }
    eprintln!("{}: {} grid cells", name, spec.grid().len());
    Ok(())
}

fn read_formulas(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn bench_rows(spec: &SystemSpec, system: &str, formulas: &[String], opts: &VerifyOptions) -> Result<Vec<Report>> {
    let run = |f: &String| verify(spec, f, system, opts).map(|v| v.report).with_context(|| format!("formula {:?}", f));
    if opts.repeat > 1 {
        // Averaged timings are measured one row at a time.
        return formulas.iter().map(run).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = formulas.iter().map(|f| s.spawn(move || run(f))).collect();
        handles.into_iter().map(|h| h.join().expect("bench row panicked")).collect()
    })
}

fn cmd_bench(system: &Path, formulas: Option<&Path>, repeat: usize, csv: Option<&Path>, allow_unsound_tau: bool) -> Result<()> {
    let spec = load_spec(system)?;
    let (list, with_reference) = match formulas {
        Some(p) => (read_formulas(p)?, false),
        None => (BENCH_FORMULAS.iter().map(|s| s.to_string()).collect(), true),
    };
    if list.is_empty() {
        bail!("no formulas to run");
    }
    let mut opts = VerifyOptions {
        repeat,
        ..VerifyOptions::default()
    };
    opts.model.allow_unsound_tau = allow_unsound_tau;
    let reports = bench_rows(&spec, &system_name(system), &list, &opts)?;

    let timing = if repeat > 1 {
        format!("times averaged over {} runs", repeat)
    } else {
        "single-run times, not averaged".to_string()
    };
    println!("{} ({} model states, {})", system.display(), reports[0].model_states, timing);
    let mut header = format!(
        "{:<22} {:>6} {:>8} {:>14} {:>8} {:>8} {:>8} {:>13}",
        "formula", "|B|", "B s", "game P+O", "game s", "solve s", "total s", "verdict"
    );
    if with_reference {
        header.push_str(&format!("  | {:>13} {:>14} {:>8}", "reference |B|", "reference P+O", "ref s"));
    }
    println!("{}", header);
    for (i, r) in reports.iter().enumerate() {
        let mut line = format!(
            "{:<22} {:>6} {:>8.2} {:>14} {:>8.2} {:>8.2} {:>8.2} {:>13}",
            r.formula,
            r.automaton_states,
            r.automaton_seconds,
            format!("{}+{}", r.game_player, r.game_opponent),
            r.game_seconds,
            r.solve_seconds,
            r.total_seconds,
            r.verdict.to_string()
        );
        if with_reference {
            let p = &REFERENCE_ROWS[i];
            line.push_str(&format!(
                "  | {:>13} {:>14} {:>8.2}",
                p.automaton_states,
                format!("{}+{}", p.game_player, p.game_opponent),
                p.total_seconds
            ));
        }
        println!("{}", line);
    }
    if let Some(p) = csv {
        write(p, &Report::to_csv(&reports)?)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            system,
            formula,
            eta,
            tau,
            repeat,
            out,
            export_automaton,
            export_game,
            allow_unsound_tau,
        } => cmd_verify(
            &system,
            &formula,
            eta,
            tau,
            repeat,
            out.as_deref(),
            export_automaton.as_deref(),
            export_game.as_deref(),
            allow_unsound_tau,
        ),
        Command::Scenario { name, eta, r_mode, out } => cmd_scenario(&name, eta, r_mode, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Bench {
            system,
            formulas,
            repeat,
            csv,
            allow_unsound_tau,
        } => cmd_bench(&system, formulas.as_deref(), repeat, csv.as_deref(), allow_unsound_tau).map(|_| ExitCode::SUCCESS),
    }
}

/// Error chain joined by ": ", skipping causes already spelled out by the
/// message that wraps them.
fn message(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let m = cause.to_string();
        if !out.ends_with(&m) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&m);
        }
    }
    out
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", message(&e));
            ExitCode::from(1)
        }
    }
}
