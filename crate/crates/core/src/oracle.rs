//! Brute-force validators for the closed-form phase solvers.
//!
//! Both searches maximize one of two gain functionals over RIS phases:
//!
//! - [`Target::RisOnly`]: `|sum_r sum_t H(r,t)|` with no precoding.
//! - [`Target::Joint`]: `|sum_r sum_t H(r,t) exp(j beta_t)|` with the transmit
//!   phases re-derived optimally for every candidate, which collapses to
//!   `sum_t |sum_r H(r,t)|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{cis, principal_arg, wrap_phase, CascadeChannel, RisPhaseVector};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::matrix::Matrix;
use crate::sim::rng::mix_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    RisOnly,
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizedSearchSpec {
    /// Phase grid `{2 pi m / levels}`.
    pub levels: usize,
    /// Refuse channels with more RIS elements than this.
    pub max_elements: usize,
    pub target: Target,
    /// Maximum number of enumerated candidates.
    pub budget: u64,
}

impl QuantizedSearchSpec {
    pub fn new(levels: usize, target: Target) -> Self {
        Self {
            levels,
            max_elements: 4,
            target,
            budget: 1 << 24,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub phi: RisPhaseVector,
    pub gain: f64,
}

/// Gain functional with the channel-dependent coefficients folded in.
struct Objective {
    k: f64,
    /// RisOnly: one coefficient per element. Joint: `(l, t)` coefficients.
    coeffs: Matrix<Complex64>,
}

impl Objective {
    fn new(ch: &CascadeChannel, target: Target) -> Self {
        let coeffs = match target {
            Target::RisOnly => {
                let sums = ch.element_sums();
                Matrix::from_fn(ch.n_ris(), 1, |l, _| sums[l])
            }
            Target::Joint => {
                let rx = ch.v_mat.column_sums();
                Matrix::from_fn(ch.n_ris(), ch.n_t(), |l, t| rx[l] * ch.u_mat[(l, t)])
            }
        };
        Self {
            k: ch.k_norm,
            coeffs,
        }
    }

    fn n_ris(&self) -> usize {
        self.coeffs.rows()
    }

    /// Per-column sums `sum_l coeffs[l][c] exp(j phi_l)`.
    fn column_sums(&self, rot: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.cols()];
        for (l, r) in rot.iter().enumerate() {
            for (acc, c) in out.iter_mut().zip(self.coeffs.row(l)) {
                *acc += c * r;
            }
        }
        out
    }

    fn eval_rot(&self, rot: &[Complex64]) -> f64 {
        // RisOnly has a single column, so both targets reduce to a sum of magnitudes.
        self.k * self.column_sums(rot).iter().map(|z| z.norm()).sum::<f64>()
    }

    fn eval(&self, phi: &[f64]) -> f64 {
        let rot: Vec<Complex64> = phi.iter().map(|&p| cis(p)).collect();
        self.eval_rot(&rot)
    }

    /// Closed-form best phase for element `l` with the others (and, for the
    /// joint target, the transmit phases) held fixed.
    fn coordinate_step(&self, phi: &[f64], l: usize) -> Option<f64> {
        let rot: Vec<Complex64> = phi.iter().map(|&p| cis(p)).collect();
        let cols = self.column_sums(&rot);
        // transmit phases co-phasing each column; trivial for RisOnly
        let precode: Vec<Complex64> = cols.iter().map(|&z| cis(-principal_arg(z))).collect();
        let own: Complex64 = self
            .coeffs
            .row(l)
            .iter()
            .zip(&precode)
            .map(|(c, p)| c * p)
            .sum();
        let total: Complex64 = cols.iter().zip(&precode).map(|(c, p)| c * p).sum();
        let rest = total - own * rot[l];
        if own.norm() == 0.0 || rest.norm() == 0.0 {
            return None;
        }
        Some(wrap_phase(principal_arg(rest) - principal_arg(own)))
    }
}

/// Upper bound `k N_ris N_t N_r` on any combined gain.
pub fn gain_cap(ch: &CascadeChannel) -> f64 {
    ch.k_norm * (ch.n_ris() * ch.n_t() * ch.n_r()) as f64
}

/// Value of the target functional for arbitrary RIS phases.
pub fn target_gain(ch: &CascadeChannel, target: Target, phi: &RisPhaseVector) -> Result<f64> {
    if phi.len() != ch.n_ris() {
        return Err(Error::DimensionMismatch {
            expected: ch.n_ris(),
            got: phi.len(),
        });
    }
    Ok(Objective::new(ch, target).eval(phi.as_slice()))
}

fn candidate_count(levels: usize, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(levels as u128))
}

fn decode(mut index: u64, levels: usize, out: &mut [Complex64], phases: &[Complex64]) {
    for slot in out.iter_mut() {
        *slot = phases[(index % levels as u64) as usize];
        index /= levels as u64;
    }
}

/// Exact maximum of the target over the quantized phase grid. Ties resolve
/// to the lowest enumeration index, so the result does not depend on
/// scheduling.
pub fn exhaustive_best(
    ch: &CascadeChannel,
    spec: &QuantizedSearchSpec,
    exec: Execution,
) -> Result<OracleResult> {
    if spec.levels < 2 {
        return Err(Error::InvalidConfig(format!(
            "quantized search needs at least 2 levels, got {}",
            spec.levels
        )));
    }
    let n = ch.n_ris();
    if n > spec.max_elements {
        return Err(Error::InvalidConfig(format!(
            "exhaustive search is limited to {} RIS elements, channel has {n}",
            spec.max_elements
        )));
    }
    let candidates = candidate_count(spec.levels, n);
    if candidates > spec.budget as u128 {
        return Err(Error::BudgetExceeded {
            candidates,
            budget: spec.budget,
        });
    }
    let total = candidates as u64;
    let objective = Objective::new(ch, spec.target);
    let grid: Vec<f64> = (0..spec.levels)
        .map(|m| wrap_phase(2.0 * PI * m as f64 / spec.levels as f64))
        .collect();
    let grid_rot: Vec<Complex64> = grid.iter().map(|&p| cis(p)).collect();

    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK) as usize;
    let bests = exec.map_indexed(chunks, |c| {
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut rot = vec![Complex64::new(0.0, 0.0); n];
        let mut best = (f64::NEG_INFINITY, start);
        for idx in start..end {
            decode(idx, spec.levels, &mut rot, &grid_rot);
            let g = objective.eval_rot(&rot);
            if g > best.0 {
                best = (g, idx);
            }
        }
        best
    });
    let (gain, mut idx) =
        bests.into_iter().fold(
            (f64::NEG_INFINITY, 0),
            |acc, b| if b.0 > acc.0 { b } else { acc },
        );

    let mut phi = Vec::with_capacity(n);
    for _ in 0..n {
        phi.push(grid[(idx % spec.levels as u64) as usize]);
        idx /= spec.levels as u64;
    }
    Ok(OracleResult {
        phi: RisPhaseVector::new(phi)?,
        gain,
    })
}

const ASCENT_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 10_000;

fn coordinate_ascent(objective: &Objective, phi: &mut [f64]) -> f64 {
    let mut value = objective.eval(phi);
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        for l in 0..objective.n_ris() {
            let Some(candidate) = objective.coordinate_step(phi, l) else {
                continue;
            };
            let old = phi[l];
            phi[l] = candidate;
            let v = objective.eval(phi);
            if v > value + ASCENT_TOL * value.max(1.0) {
                value = v;
                improved = true;
            } else {
                phi[l] = old;
            }
        }
        if !improved {
            break;
        }
    }
    value
}

/// Best of `restarts` coordinate-ascent runs from uniform random phases.
/// Each restart draws from its own stream derived from `(seed, restart)`.
pub fn random_restart_best(
    ch: &CascadeChannel,
    target: Target,
    restarts: usize,
    seed: u64,
    exec: Execution,
) -> Result<OracleResult> {
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let objective = Objective::new(ch, target);
    let runs = exec.map_indexed(restarts, |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, r as u64));
        let mut phi: Vec<f64> = (0..ch.n_ris()).map(|_| rng.random_range(-PI..PI)).collect();
        let gain = coordinate_ascent(&objective, &mut phi);
        (gain, phi)
    });
    let (gain, phi) = runs
        .into_iter()
        .reduce(|best, run| if run.0 > best.0 { run } else { best })
        .expect("at least one restart");
    Ok(OracleResult {
        phi: RisPhaseVector::new(phi)?,
        gain,
    })
}
