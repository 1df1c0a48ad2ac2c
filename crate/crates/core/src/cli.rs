//! Command-line entry point, kept in the library so it can be driven from tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::approx::approx_gain;
use crate::channel::build_cascade;
use crate::error::Error;
use crate::exec::Execution;
use crate::geometry::{build_positions, SceneConfig};
use crate::oracle::{exhaustive_best, gain_cap, random_restart_best, QuantizedSearchSpec, Target};
use crate::schemes::{solve_joint, solve_ris_only};
use crate::sim::{run_plan_with, write_csv, SimulationPlan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "riscap",
    version,
    about = "RIS-assisted mmWave capacity simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write per-scheme mean capacities as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the plan's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the plan's trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Worker threads (0 = all cores, 1 = sequential).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Check the closed-form solvers against brute-force oracles on toy scenes.
    Validate,
    /// Compare the exact RIS-only gain with its array-factor approximation.
    ApproxCheck {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_CONFIG,
            };
        }
    };

    let result = match cli.command {
        Command::Simulate {
            config,
            out: csv_path,
            seed,
            trials,
            threads,
        } => simulate(&config, &csv_path, seed, trials, threads, out),
        Command::Validate => return validate(out),
        Command::ApproxCheck { config } => approx_check(&config, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err((code, e)) => {
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}

type CliResult = Result<(), (i32, Error)>;

fn load_plan(path: &Path) -> Result<SimulationPlan, (i32, Error)> {
    // an unreadable config is a config problem, not a runtime one
    SimulationPlan::from_file(path).map_err(|e| (EXIT_CONFIG, e))
}

fn runtime(e: Error) -> (i32, Error) {
    let code = if e.is_config_error() {
        EXIT_CONFIG
    } else {
        EXIT_RUNTIME
    };
    (code, e)
}

fn simulate(
    config: &Path,
    csv_path: &Path,
    seed: Option<u64>,
    trials: Option<usize>,
    threads: usize,
    out: &mut dyn Write,
) -> CliResult {
    let mut plan = load_plan(config)?;
    if let Some(s) = seed {
        plan.seed = s;
    }
    if let Some(t) = trials {
        plan.trials = t;
    }
    plan.validate().map_err(|e| (EXIT_CONFIG, e))?;

    let table = with_threads(threads, |exec| run_plan_with(&plan, exec)).map_err(runtime)?;
    write_csv(&table, csv_path).map_err(runtime)?;
    let meta_path = csv_path.with_extension("meta");
    std::fs::write(&meta_path, table.metadata_text()).map_err(|source| {
        runtime(Error::Io {
            path: meta_path.clone(),
            source,
        })
    })?;
    let _ = writeln!(
        out,
        "wrote {} rows ({} trials, seed {}) to {}",
        table.rows.len(),
        plan.trials,
        plan.seed,
        csv_path.display()
    );
    Ok(())
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    match threads {
        0 => f(Execution::Parallel),
        1 => f(Execution::Sequential),
        n => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| f(Execution::Parallel)),
            Err(_) => f(Execution::Parallel),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: usize, f: impl FnOnce(Execution) -> T + Send) -> T {
    f(Execution::Sequential)
}

fn approx_error(plan: &SimulationPlan, h_t: f64, h_r: f64) -> Result<(f64, f64, f64), Error> {
    let cfg = plan.scene(h_t, h_r);
    let pos = build_positions(&cfg)?;
    let exact = solve_ris_only(&build_cascade(&pos, &cfg)?).b_gain;
    let approx = approx_gain(&pos, &cfg)?;
    Ok((exact, approx, (approx - exact).abs() / exact))
}

fn approx_check(config: &Path, out: &mut dyn Write) -> CliResult {
    let plan = load_plan(config)?;
    let (h_t, h_r) = (plan.h_t_grid.mean(), plan.h_r_grid.mean());
    let (exact, approx, rel) = approx_error(&plan, h_t, h_r).map_err(runtime)?;
    let _ = writeln!(
        out,
        "mean heights h_t = {h_t:.2} m, h_r = {h_r:.2} m: exact B = {exact:.6}, approx B = {approx:.6}, relative error = {rel:.3e}"
    );

    let mut worst = (0.0, h_t, h_r);
    for i in 0..plan.h_t_grid.len() {
        for j in 0..plan.h_r_grid.len() {
            let (h_t, h_r) = (plan.h_t_grid.value(i), plan.h_r_grid.value(j));
            let (_, _, rel) = approx_error(&plan, h_t, h_r).map_err(runtime)?;
            if rel > worst.0 {
                worst = (rel, h_t, h_r);
            }
        }
    }
    let _ = writeln!(
        out,
        "worst relative error over the height grid: {:.3e} at h_t = {:.2} m, h_r = {:.2} m",
        worst.0, worst.1, worst.2
    );
    Ok(())
}

/// One oracle comparison on a toy scene.
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn oracle_checks() -> Result<Vec<Check>, Error> {
    let exec = Execution::default();
    let mut checks = Vec::new();
    let q = (std::f64::consts::PI / 64.0).cos();

    // Closed-form RIS-only phases versus a 64-level exhaustive search.
    let cfg = SceneConfig::paper(2, 2, 3);
    let ch = build_cascade(&build_positions(&cfg)?, &cfg)?;
    let closed = solve_ris_only(&ch).b_gain;
    let best = exhaustive_best(&ch, &QuantizedSearchSpec::new(64, Target::RisOnly), exec)?.gain;
    checks.push(Check {
        name: "ris_only sandwich 2x2x3, 64 levels".into(),
        pass: closed >= best && best >= closed * q,
        detail: format!(
            "closed form {closed:.9} >= exhaustive {best:.9} >= {:.9}",
            closed * q
        ),
    });

    let cfg = SceneConfig::paper(1, 1, 3);
    let ch = build_cascade(&build_positions(&cfg)?, &cfg)?;
    let best = exhaustive_best(&ch, &QuantizedSearchSpec::new(64, Target::RisOnly), exec)?.gain;
    let bound = ch.k_norm * 3.0 * q;
    checks.push(Check {
        name: "quantization loss 1x1x3, 64 levels".into(),
        pass: best >= bound,
        detail: format!("exhaustive {best:.9} >= k N_ris cos(pi/64) = {bound:.9}"),
    });

    let cfg = SceneConfig::paper(4, 2, 10).with_heights(2.2, 1.1);
    let ch = build_cascade(&build_positions(&cfg)?, &cfg)?;
    let closed = solve_ris_only(&ch).b_gain;
    let local = random_restart_best(&ch, Target::RisOnly, 4, 7, exec)?.gain;
    checks.push(Check {
        name: "ris_only coordinate ascent 4x2x10".into(),
        pass: (local - closed).abs() <= 1e-9,
        detail: format!("ascent {local:.12} vs closed form {closed:.12}"),
    });

    let cfg = SceneConfig::paper(2, 2, 4);
    let ch = build_cascade(&build_positions(&cfg)?, &cfg)?;
    let sol = solve_joint(&ch);
    let heuristic = crate::oracle::target_gain(&ch, Target::Joint, &sol.phi)?;
    let local = random_restart_best(&ch, Target::Joint, 32, 7, exec)?.gain;
    let cap = gain_cap(&ch);
    checks.push(Check {
        name: "joint global co-phasing gap 2x2x4".into(),
        pass: heuristic <= local * (1.0 + 1e-12) && local <= cap * (1.0 + 1e-12),
        detail: format!(
            "global co-phasing {heuristic:.9} <= ascent {local:.9} <= cap {cap:.9} (gap {:.2}%)",
            100.0 * (1.0 - heuristic / local)
        ),
    });
    Ok(checks)
}

fn validate(out: &mut dyn Write) -> i32 {
    match oracle_checks() {
        Ok(checks) => {
            let mut ok = true;
            for c in &checks {
                ok &= c.pass;
                let _ = writeln!(
                    out,
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_RUNTIME
            }
        }
        Err(e) => {
            let _ = writeln!(out, "FAIL oracle suite: {e}");
            EXIT_RUNTIME
        }
    }
}
