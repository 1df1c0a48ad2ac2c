//! Phase-optimization schemes and their single-stream capacities.
//!
//! Every scheme reduces to `C = log2(1 + G^2 / (N_t N_r) * Es/N0)` for a
//! scheme-specific combined amplitude `G`:
//!
//! | scheme      | RIS phases          | transmit phases       | receive phases |
//! |-------------|---------------------|-----------------------|----------------|
//! | RIS-only    | co-phased per element | none                | none           |
//! | joint       | global co-phasing   | co-phased column sums | none           |
//! | co-phasing  | fixed               | global co-phasing     | co-phased rows |
//! | basic       | fixed               | none                  | none           |

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{cis, principal_arg, CascadeChannel, ChannelMatrix, RisPhaseVector};
use crate::error::{Error, Result};
use crate::geometry::SceneConfig;
use crate::matrix::Matrix;

/// Ratio `Es/N0`, kept linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    es_over_n0: f64,
}

impl SnrPoint {
    pub fn from_linear(es_over_n0: f64) -> Result<Self> {
        if !(es_over_n0.is_finite() && es_over_n0 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "Es/N0 must be finite and positive, got {es_over_n0}"
            )));
        }
        Ok(Self { es_over_n0 })
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::from_linear(10f64.powf(db / 10.0))
    }

    pub fn linear(self) -> f64 {
        self.es_over_n0
    }

    pub fn db(self) -> f64 {
        10.0 * self.es_over_n0.log10()
    }
}

/// `log2(1 + gain^2 / (n_t n_r) * Es/N0)`.
pub fn capacity_from_gain(gain: f64, n_t: usize, n_r: usize, snr: SnrPoint) -> f64 {
    let rx_snr = gain * gain / (n_t * n_r) as f64 * snr.linear();
    (1.0 + rx_snr).log2()
}

/// RIS state used by the two benchmarks, which leave the surface unoptimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BenchmarkRisPhase {
    #[default]
    Zero,
    /// Independent uniform phases per element, redrawn every trial.
    Random,
}

impl BenchmarkRisPhase {
    pub fn phases<R: Rng + ?Sized>(self, n_ris: usize, rng: &mut R) -> RisPhaseVector {
        match self {
            BenchmarkRisPhase::Zero => RisPhaseVector::zeros(n_ris),
            BenchmarkRisPhase::Random => {
                RisPhaseVector::new((0..n_ris).map(|_| rng.random_range(-PI..PI)).collect())
                    .expect("uniform draws are finite")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RisOnlySolution {
    pub phi: RisPhaseVector,
    /// Combined amplitude `B = k sum_l |sum_r sum_t V(r,l) U(l,t)|`.
    pub b_gain: f64,
}

/// Rotates every element's combined contribution onto the positive real axis.
pub fn solve_ris_only(ch: &CascadeChannel) -> RisOnlySolution {
    let sums = ch.element_sums();
    let phi = sums.iter().map(|&z| -principal_arg(z)).collect();
    let b_gain = ch.k_norm * sums.iter().map(|z| z.norm()).sum::<f64>();
    RisOnlySolution {
        phi: RisPhaseVector::new(phi).expect("principal arguments are finite"),
        b_gain,
    }
}

pub fn capacity_ris_only(sol: &RisOnlySolution, cfg: &SceneConfig, snr: SnrPoint) -> f64 {
    capacity_from_gain(sol.b_gain, cfg.n_t, cfg.n_r, snr)
}

#[derive(Debug, Clone)]
pub struct JointSolution {
    pub phi: RisPhaseVector,
    /// Transmit precoder phases.
    pub beta: Vec<f64>,
    /// `delta[(l, t)] = arg{(sum_r V(r,l)) U(l,t)}`, principal values.
    pub delta: Matrix<f64>,
    /// Elements whose receive-side sum vanished; their phase is left at 0.
    pub degenerate: Vec<usize>,
}

impl JointSolution {
    /// Unit-modulus precoder `p_t = exp(j beta_t)`.
    pub fn precoder(&self) -> Vec<Complex64> {
        self.beta.iter().map(|&b| cis(b)).collect()
    }

    /// `sum_t (delta[l][t] + phi_l)` per element; zero up to rounding for
    /// non-degenerate elements.
    pub fn residuals(&self) -> Vec<f64> {
        let n_t = self.delta.cols();
        self.phi
            .as_slice()
            .iter()
            .enumerate()
            .map(|(l, &p)| self.delta.row(l).iter().sum::<f64>() + n_t as f64 * p)
            .collect()
    }
}

/// RIS phases by global co-phasing, then transmit phases that co-phase the
/// receive-summed columns of the resulting channel.
pub fn solve_joint(ch: &CascadeChannel) -> JointSolution {
    let (n_t, n_ris) = (ch.n_t(), ch.n_ris());
    let rx_sums = ch.v_mat.column_sums();

    let mut degenerate = Vec::new();
    let delta = Matrix::from_fn(n_ris, n_t, |l, t| {
        principal_arg(rx_sums[l] * ch.u_mat[(l, t)])
    });
    let phi: Vec<f64> = (0..n_ris)
        .map(|l| {
            if rx_sums[l] == Complex64::new(0.0, 0.0) {
                degenerate.push(l);
                0.0
            } else {
                -delta.row(l).iter().sum::<f64>() / n_t as f64
            }
        })
        .collect();
    let phi = RisPhaseVector::new(phi).expect("means of principal arguments are finite");

    let h = ch
        .assemble_h(&phi)
        .expect("phase vector sized from the channel");
    let beta =
        h.0.column_sums()
            .iter()
            .map(|&z| -principal_arg(z))
            .collect();

    JointSolution {
        phi,
        beta,
        delta,
        degenerate,
    }
}

/// `|sum_r sum_t H(r,t) exp(j beta_t)|`.
pub fn precoded_gain(h: &ChannelMatrix, beta: &[f64]) -> Result<f64> {
    if beta.len() != h.n_t() {
        return Err(Error::DimensionMismatch {
            expected: h.n_t(),
            got: beta.len(),
        });
    }
    Ok(h.0
        .column_sums()
        .iter()
        .zip(beta)
        .map(|(z, &b)| z * cis(b))
        .sum::<Complex64>()
        .norm())
}

pub fn capacity_joint(
    sol: &JointSolution,
    ch: &CascadeChannel,
    cfg: &SceneConfig,
    snr: SnrPoint,
) -> Result<f64> {
    let h = ch.assemble_h(&sol.phi)?;
    let gain = precoded_gain(&h, &sol.beta)?;
    Ok(capacity_from_gain(gain, cfg.n_t, cfg.n_r, snr))
}

#[derive(Debug, Clone)]
pub struct CoPhasingSolution {
    /// Receive phases.
    pub alpha: Vec<f64>,
    /// Transmit phases.
    pub gamma: Vec<f64>,
}

impl CoPhasingSolution {
    pub fn rx_vector(&self) -> Vec<Complex64> {
        self.alpha.iter().map(|&a| cis(a)).collect()
    }

    pub fn tx_vector(&self) -> Vec<Complex64> {
        self.gamma.iter().map(|&g| cis(g)).collect()
    }
}

/// Transmit phases by global co-phasing over each column, then receive phases
/// that co-phase the precoded rows.
///
/// The transmit phase is `-(1/N_t) sum_r arg H(r,t)`, normalized by `N_t`
/// exactly as the benchmark is defined.
pub fn solve_cophasing_mimo(h: &ChannelMatrix) -> CoPhasingSolution {
    let (n_r, n_t) = (h.n_r(), h.n_t());
    let gamma: Vec<f64> = (0..n_t)
        .map(|t| -(0..n_r).map(|r| principal_arg(h.get(r, t))).sum::<f64>() / n_t as f64)
        .collect();
    let tx: Vec<Complex64> = gamma.iter().map(|&g| cis(g)).collect();
    let alpha = (0..n_r)
        .map(|r| {
            let z: Complex64 = h.0.row(r).iter().zip(&tx).map(|(a, b)| a * b).sum();
            -principal_arg(z)
        })
        .collect();
    CoPhasingSolution { alpha, gamma }
}

/// `|r^T H t|`.
pub fn bilinear_gain(sol: &CoPhasingSolution, h: &ChannelMatrix) -> Result<f64> {
    if sol.alpha.len() != h.n_r() {
        return Err(Error::DimensionMismatch {
            expected: h.n_r(),
            got: sol.alpha.len(),
        });
    }
    if sol.gamma.len() != h.n_t() {
        return Err(Error::DimensionMismatch {
            expected: h.n_t(),
            got: sol.gamma.len(),
        });
    }
    let (rx, tx) = (sol.rx_vector(), sol.tx_vector());
    let mut acc = Complex64::new(0.0, 0.0);
    for (r, rv) in rx.iter().enumerate() {
        for (t, tv) in tx.iter().enumerate() {
            acc += rv * h.get(r, t) * tv;
        }
    }
    Ok(acc.norm())
}

pub fn capacity_cophasing(
    sol: &CoPhasingSolution,
    h: &ChannelMatrix,
    cfg: &SceneConfig,
    snr: SnrPoint,
) -> Result<f64> {
    Ok(capacity_from_gain(
        bilinear_gain(sol, h)?,
        cfg.n_t,
        cfg.n_r,
        snr,
    ))
}

pub fn capacity_basic(h: &ChannelMatrix, cfg: &SceneConfig, snr: SnrPoint) -> f64 {
    capacity_from_gain(h.0.total().norm(), cfg.n_t, cfg.n_r, snr)
}
