//! Monte Carlo capacity sweeps.
//!
//! Each trial samples antenna heights, builds the scene and cascade channel,
//! solves every requested scheme once, and evaluates its capacity at every
//! SNR point. Trials are independent and are reduced in trial order, so a
//! table depends only on the plan, never on the thread count.

mod csv;
mod plan;
pub(crate) mod rng;

use std::fmt;
use std::str::FromStr;

pub use csv::{format_sig, to_csv_string, write_csv, HEADER};
pub use plan::{HeightGrid, SimulationPlan};

use crate::approx::approx_gain;
use crate::channel::build_cascade;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::build_positions;
use crate::schemes::{
    bilinear_gain, capacity_from_gain, precoded_gain, solve_cophasing_mimo, solve_joint,
    solve_ris_only, SnrPoint,
};

/// Schemes a plan can evaluate. Ordered by name, which is also the CSV row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Basic,
    Cophasing,
    Joint,
    RisOnly,
    RisOnlyApprox,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Basic,
        Scheme::Cophasing,
        Scheme::Joint,
        Scheme::RisOnly,
        Scheme::RisOnlyApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Basic => "basic",
            Scheme::Cophasing => "cophasing",
            Scheme::Joint => "joint",
            Scheme::RisOnly => "ris_only",
            Scheme::RisOnlyApprox => "ris_only_approx",
        }
    }
}

impl PartialOrd for Scheme {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheme {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name().cmp(other.name())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

/// Per-trial record: realized heights and `capacity[scheme][snr]` in bits,
/// with schemes in plan order.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub h_t: f64,
    pub h_r: f64,
    pub capacity: Vec<Vec<f64>>,
}

impl TrialOutcome {
    pub fn get(&self, plan: &SimulationPlan, scheme: Scheme) -> Option<&[f64]> {
        plan.schemes
            .iter()
            .position(|&s| s == scheme)
            .map(|i| self.capacity[i].as_slice())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub mean_capacity_bits: f64,
    pub stderr_bits: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    /// Config echo, seed and crate version.
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn row(&self, scheme: Scheme, snr_db: f64) -> Option<&ResultRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.snr_db == snr_db)
    }

    /// Row means of one scheme, in SNR order.
    pub fn means(&self, scheme: Scheme) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme)
            .map(|r| r.mean_capacity_bits)
            .collect()
    }

    pub fn metadata_text(&self) -> String {
        self.metadata
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

pub fn run_trial(plan: &SimulationPlan, trial: usize) -> Result<TrialOutcome> {
    let ((h_t, h_r), mut rng) = plan.sample_trial(trial);
    let cfg = plan.scene(h_t, h_r);
    let pos = build_positions(&cfg)?;
    let ch = build_cascade(&pos, &cfg)?;

    let needs_benchmark =
        plan.schemes.contains(&Scheme::Basic) || plan.schemes.contains(&Scheme::Cophasing);
    let benchmark_h = if needs_benchmark {
        let phi = plan.benchmark_ris_phase.phases(cfg.n_ris, &mut rng);
        Some(ch.assemble_h(&phi)?)
    } else {
        None
    };

    let snrs: Vec<SnrPoint> = plan
        .snr_db
        .iter()
        .map(|&db| SnrPoint::from_db(db))
        .collect::<Result<_>>()?;

    let mut capacity = Vec::with_capacity(plan.schemes.len());
    for &scheme in &plan.schemes {
        let gain = match scheme {
            Scheme::RisOnly => solve_ris_only(&ch).b_gain,
            Scheme::RisOnlyApprox => approx_gain(&pos, &cfg)?,
            Scheme::Joint => {
                let sol = solve_joint(&ch);
                precoded_gain(&ch.assemble_h(&sol.phi)?, &sol.beta)?
            }
            Scheme::Cophasing => {
                let h = benchmark_h.as_ref().expect("benchmark channel built");
                bilinear_gain(&solve_cophasing_mimo(h), h)?
            }
            Scheme::Basic => benchmark_h
                .as_ref()
                .expect("benchmark channel built")
                .0
                .total()
                .norm(),
        };
        capacity.push(
            snrs.iter()
                .map(|&snr| capacity_from_gain(gain, cfg.n_t, cfg.n_r, snr))
                .collect(),
        );
    }
    Ok(TrialOutcome {
        trial,
        h_t,
        h_r,
        capacity,
    })
}

/// Runs every trial of the plan, in trial order.
pub fn run_trials(plan: &SimulationPlan, exec: Execution) -> Result<Vec<TrialOutcome>> {
    plan.validate()?;
    exec.map_indexed(plan.trials, |trial| {
        run_trial(plan, trial).map_err(|e| Error::Trial {
            trial,
            source: Box::new(e),
        })
    })
    .into_iter()
    .collect()
}

/// Mean and standard error per (scheme, SNR), rows sorted by scheme name then SNR.
pub fn aggregate(plan: &SimulationPlan, outcomes: &[TrialOutcome]) -> ResultTable {
    let n = outcomes.len();
    let mut rows = Vec::with_capacity(plan.schemes.len() * plan.snr_db.len());
    for (si, &scheme) in plan.schemes.iter().enumerate() {
        for (ji, &snr_db) in plan.snr_db.iter().enumerate() {
            let values = outcomes.iter().map(|o| o.capacity[si][ji]);
            let mean = values.clone().sum::<f64>() / n as f64;
            let stderr = if n > 1 {
                let ss: f64 = values.map(|v| (v - mean).powi(2)).sum();
                (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
            } else {
                0.0
            };
            rows.push(ResultRow {
                scheme,
                snr_db,
                mean_capacity_bits: mean,
                stderr_bits: stderr,
                trials: n,
            });
        }
    }
    rows.sort_by(|a, b| a.scheme.cmp(&b.scheme).then(a.snr_db.total_cmp(&b.snr_db)));

    let mut metadata: Vec<(String, String)> = plan
        .to_config_string()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    metadata.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
    ResultTable { rows, metadata }
}

pub fn run_plan(plan: &SimulationPlan) -> Result<ResultTable> {
    run_plan_with(plan, Execution::default())
}

pub fn run_plan_with(plan: &SimulationPlan, exec: Execution) -> Result<ResultTable> {
    let outcomes = run_trials(plan, exec)?;
    Ok(aggregate(plan, &outcomes))
}
