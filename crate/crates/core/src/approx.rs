//! Array-factor approximation of the RIS-only gain.
//!
//! For arrays much shorter than the distance to the RIS, the combined
//! response of element `l` is the product of two uniform-array factors
//! evaluated at the element's departure and arrival angles.

use std::f64::consts::PI;

use crate::channel::normalization_constant;
use crate::error::Result;
use crate::geometry::{SceneConfig, ScenePositions};

const SINGULAR_SIN: f64 = 1e-9;

/// `g(n, x) = |sin(n x) / sin(x)|`, the magnitude of an `n`-element array
/// factor. Returns the limit `n` at multiples of `pi`.
pub fn aux_g(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let s = x.sin();
    let g = if s.abs() < SINGULAR_SIN {
        // L'Hopital: ratio of derivatives near the lobe center
        (nf * (nf * x).cos() / x.cos()).abs()
    } else {
        ((nf * x).sin() / s).abs()
    };
    g.min(nf)
}

/// `B^ = k sum_l g(N_t, pi s_t cos(theta_t,l) / lambda) g(N_r, pi s_r cos(theta_r,l) / lambda)`.
pub fn approx_gain(pos: &ScenePositions, cfg: &SceneConfig) -> Result<f64> {
    let k = normalization_constant(pos, cfg)?;
    let sum: f64 = pos
        .cos_theta_t
        .iter()
        .zip(&pos.cos_theta_r)
        .map(|(&ct, &cr)| {
            aux_g(cfg.n_t, PI * cfg.s_t * ct / cfg.lambda)
                * aux_g(cfg.n_r, PI * cfg.s_r * cr / cfg.lambda)
        })
        .sum();
    Ok(k * sum)
}

/// Half-width of the main lobe of `g(n, .)` at `x = 0`, measured where it
/// first drops to `n / 2`, found by bisection on `(0, pi/n]`.
pub fn main_lobe_half_width(n: usize) -> f64 {
    let level = n as f64 / 2.0;
    // g is monotone decreasing from the center to the first null at pi/n
    let (mut lo, mut hi) = (0.0, PI / n as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if aux_g(n, mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
