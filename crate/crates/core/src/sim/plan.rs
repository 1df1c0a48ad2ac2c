//! Simulation plans and their `key = value` file format.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use super::csv::format_sig;
use super::rng::trial_rng;
use super::Scheme;
use crate::error::{Error, Result};
use crate::geometry::{build_positions, SceneConfig};
use crate::schemes::BenchmarkRisPhase;

/// Inclusive uniform grid `min, min + step, ..., max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl HeightGrid {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let grid = Self { min, max, step };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.min, self.max, self.step]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::InvalidConfig(
                "height grid values must be finite".into(),
            ));
        }
        if self.step <= 0.0 || self.min > self.max {
            return Err(Error::InvalidConfig(format!(
                "height grid needs min <= max and step > 0, got {} .. {} step {}",
                self.min, self.max, self.step
            )));
        }
        let intervals = (self.max - self.min) / self.step;
        if (intervals - intervals.round()).abs() > 1e-9 * intervals.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "height grid step {} does not divide the range {} .. {}",
                self.step, self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid point `i`; the endpoints are hit exactly.
    pub fn value(&self, i: usize) -> f64 {
        let n = self.len();
        if n == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
        }
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.min + self.max)
    }
}

/// Everything needed to reproduce one Monte Carlo sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    /// Scene template; realized heights are overwritten per trial and the
    /// mean heights are taken from the grid midpoints.
    pub base: SceneConfig,
    pub h_t_grid: HeightGrid,
    pub h_r_grid: HeightGrid,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub schemes: BTreeSet<Scheme>,
    pub benchmark_ris_phase: BenchmarkRisPhase,
}

impl Default for SimulationPlan {
    /// 8 x 4 antennas, 50 RIS elements, heights 2-3 m and 0.8-1.8 m on 2 cm grids.
    fn default() -> Self {
        Self::paper(8, 4, 50)
    }
}

impl SimulationPlan {
    pub fn paper(n_t: usize, n_r: usize, n_ris: usize) -> Self {
        Self {
            base: SceneConfig::paper(n_t, n_r, n_ris),
            h_t_grid: HeightGrid {
                min: 2.0,
                max: 3.0,
                step: 0.02,
            },
            h_r_grid: HeightGrid {
                min: 0.8,
                max: 1.8,
                step: 0.02,
            },
            snr_db: (0..=6).map(|i| 5.0 * i as f64).collect(),
            trials: 1000,
            seed: 1,
            schemes: Scheme::ALL.into_iter().collect(),
            benchmark_ris_phase: BenchmarkRisPhase::Zero,
        }
    }

    /// Scene for the given heights, with mean heights from the grids.
    pub fn scene(&self, h_t: f64, h_r: f64) -> SceneConfig {
        SceneConfig {
            h_t,
            h_r,
            h_t_mean: self.h_t_grid.mean(),
            h_r_mean: self.h_r_grid.mean(),
            ..self.base.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.h_t_grid.validate()?;
        self.h_r_grid.validate()?;
        if self.snr_db.is_empty() {
            return Err(Error::InvalidConfig(
                "snr_db must list at least one value".into(),
            ));
        }
        if let Some(bad) = self.snr_db.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "snr_db value {bad} is not finite"
            )));
        }
        let mut sorted = self.snr_db.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(
                "snr_db contains duplicate values".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        // The lowest heights bound every realization from below.
        build_positions(&self.scene(self.h_t_grid.min, self.h_r_grid.min))?;
        Ok(())
    }

    /// Antenna heights for one trial, uniform over each inclusive grid.
    pub fn sample_heights(&self, trial: usize) -> (f64, f64) {
        self.sample_trial(trial).0
    }

    /// Heights plus the generator positioned after them, for any further
    /// per-trial draws.
    pub(crate) fn sample_trial(&self, trial: usize) -> ((f64, f64), rand_chacha::ChaCha8Rng) {
        let mut rng = trial_rng(self.seed, trial as u64);
        let i = rng.random_range(0..self.h_t_grid.len());
        let j = rng.random_range(0..self.h_r_grid.len());
        ((self.h_t_grid.value(i), self.h_r_grid.value(j)), rng)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses a plan file. Missing keys keep their [`Default`] values;
    /// unknown or repeated keys are rejected.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut plan = Self::default();
        let mut seen = BTreeSet::new();
        let err = |line: usize, msg: String| Error::Parse {
            path: source.to_string(),
            line,
            msg,
        };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(line_no, format!("duplicate key `{key}`")));
            }
            let parsed: std::result::Result<(), String> = match key {
                "lambda_m" => num(value).map(|v| plan.base.lambda = v),
                "n_t" => num(value).map(|v| plan.base.n_t = v),
                "n_r" => num(value).map(|v| plan.base.n_r = v),
                "n_ris" => num(value).map(|v| plan.base.n_ris = v),
                "s_t_m" => num(value).map(|v| plan.base.s_t = v),
                "s_r_m" => num(value).map(|v| plan.base.s_r = v),
                "s_ris_m" => num(value).map(|v| plan.base.s_ris = v),
                "d_wall_m" => num(value).map(|v| plan.base.d_wall = v),
                "d_ris_m" => num(value).map(|v| plan.base.d_ris = v),
                "h_t_min_m" => num(value).map(|v| plan.h_t_grid.min = v),
                "h_t_max_m" => num(value).map(|v| plan.h_t_grid.max = v),
                "h_t_step_m" => num(value).map(|v| plan.h_t_grid.step = v),
                "h_r_min_m" => num(value).map(|v| plan.h_r_grid.min = v),
                "h_r_max_m" => num(value).map(|v| plan.h_r_grid.max = v),
                "h_r_step_m" => num(value).map(|v| plan.h_r_grid.step = v),
                "snr_db" => list(value, num).map(|v| plan.snr_db = v),
                "trials" => num(value).map(|v| plan.trials = v),
                "seed" => num(value).map(|v| plan.seed = v),
                "schemes" => list(value, |s| s.parse::<Scheme>())
                    .map(|v| plan.schemes = v.into_iter().collect()),
                "benchmark_ris_phase" => match value {
                    "zero" => Ok(BenchmarkRisPhase::Zero),
                    "random" => Ok(BenchmarkRisPhase::Random),
                    other => Err(format!("expected `zero` or `random`, got `{other}`")),
                }
                .map(|v| plan.benchmark_ris_phase = v),
                other => Err(format!("unknown key `{other}`")),
            };
            parsed.map_err(|msg| err(line_no, format!("{key}: {msg}")))?;
        }

        let (h_t, h_r) = (plan.h_t_grid.mean(), plan.h_r_grid.mean());
        plan.base = plan.scene(h_t, h_r);
        plan.validate()?;
        Ok(plan)
    }

    /// Canonical `key = value` rendering; parses back to an equal plan.
    pub fn to_config_string(&self) -> String {
        let b = &self.base;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("lambda_m", format_sig(b.lambda));
        put("n_t", b.n_t.to_string());
        put("n_r", b.n_r.to_string());
        put("n_ris", b.n_ris.to_string());
        put("s_t_m", format_sig(b.s_t));
        put("s_r_m", format_sig(b.s_r));
        put("s_ris_m", format_sig(b.s_ris));
        put("d_wall_m", format_sig(b.d_wall));
        put("d_ris_m", format_sig(b.d_ris));
        put("h_t_min_m", format_sig(self.h_t_grid.min));
        put("h_t_max_m", format_sig(self.h_t_grid.max));
        put("h_t_step_m", format_sig(self.h_t_grid.step));
        put("h_r_min_m", format_sig(self.h_r_grid.min));
        put("h_r_max_m", format_sig(self.h_r_grid.max));
        put("h_r_step_m", format_sig(self.h_r_grid.step));
        put(
            "snr_db",
            self.snr_db
                .iter()
                .map(|&v| format_sig(v))
                .collect::<Vec<_>>()
                .join(", "),
        );
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put(
            "schemes",
            self.schemes
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(", "),
        );
        put(
            "benchmark_ris_phase",
            match self.benchmark_ris_phase {
                BenchmarkRisPhase::Zero => "zero",
                BenchmarkRisPhase::Random => "random",
            }
            .to_string(),
        );
        out
    }
}

fn num<T: FromStr>(s: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>()
        .map_err(|e| format!("cannot parse `{s}`: {e}"))
}

fn list<T>(
    s: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> std::result::Result<Vec<T>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|p| item(p.trim())).collect()
}
