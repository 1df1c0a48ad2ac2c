//! Side-view scene geometry.
//!
//! The transmit array hangs on the wall at `x = 0`, the receive array on the
//! parallel wall at `x = D`, and the RIS lies along the floor (`y = 0`). All
//! three are uniform linear arrays centered on their midpoints; element 0 is
//! the lowest antenna, or the RIS element closest to the transmit wall.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Physical setup for one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    /// Carrier wavelength, m.
    pub lambda: f64,
    pub n_t: usize,
    pub n_r: usize,
    pub n_ris: usize,
    /// Transmit inter-antenna spacing, m.
    pub s_t: f64,
    /// Receive inter-antenna spacing, m.
    pub s_r: f64,
    /// RIS inter-element spacing, m.
    pub s_ris: f64,
    /// Wall separation `D`, m.
    pub d_wall: f64,
    /// Horizontal offset of the RIS midpoint from the transmit wall, m.
    pub d_ris: f64,
    /// Transmit array midpoint height, m.
    pub h_t: f64,
    /// Receive array midpoint height, m.
    pub h_r: f64,
    /// Mean transmit height, used only for channel normalization.
    pub h_t_mean: f64,
    /// Mean receive height, used only for channel normalization.
    pub h_r_mean: f64,
}

impl SceneConfig {
    /// 60 GHz setup with half-wavelength spacings, 5 m between walls, the RIS
    /// centered between them, and both arrays at their mean heights.
    pub fn paper(n_t: usize, n_r: usize, n_ris: usize) -> Self {
        let lambda = 0.005;
        Self {
            lambda,
            n_t,
            n_r,
            n_ris,
            s_t: lambda / 2.0,
            s_r: lambda / 2.0,
            s_ris: lambda / 2.0,
            d_wall: 5.0,
            d_ris: 2.5,
            h_t: 2.5,
            h_r: 1.3,
            h_t_mean: 2.5,
            h_r_mean: 1.3,
        }
    }

    pub fn with_heights(&self, h_t: f64, h_r: f64) -> Self {
        Self {
            h_t,
            h_r,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("lambda", self.lambda),
            ("s_t", self.s_t),
            ("s_r", self.s_r),
            ("s_ris", self.s_ris),
            ("d_wall", self.d_wall),
            ("d_ris", self.d_ris),
            ("h_t", self.h_t),
            ("h_r", self.h_r),
            ("h_t_mean", self.h_t_mean),
            ("h_r_mean", self.h_r_mean),
        ];
        for (name, v) in lengths {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        for (name, n) in [("n_t", self.n_t), ("n_r", self.n_r), ("n_ris", self.n_ris)] {
            if n == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be at least 1")));
            }
        }
        if self.d_ris >= self.d_wall {
            return Err(Error::InvalidConfig(format!(
                "d_ris ({}) must lie strictly between 0 and d_wall ({})",
                self.d_ris, self.d_wall
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Element coordinates, pairwise distances and midpoint angles of a scene.
#[derive(Debug, Clone)]
pub struct ScenePositions {
    pub tx_pos: Vec<Point>,
    pub rx_pos: Vec<Point>,
    pub ris_pos: Vec<Point>,
    /// `d1[(r, l)]`: RIS element `l` to receive antenna `r`.
    pub d1: Matrix<f64>,
    /// `d2[(l, t)]`: transmit antenna `t` to RIS element `l`.
    pub d2: Matrix<f64>,
    /// Transmit-array midpoint to each RIS element.
    pub d_t_mid: Vec<f64>,
    /// Each RIS element to the receive-array midpoint.
    pub d_r_mid: Vec<f64>,
    /// Cosine between the upward transmit array axis and the direction to each element.
    pub cos_theta_t: Vec<f64>,
    /// Cosine between the upward receive array axis and the direction to each element.
    pub cos_theta_r: Vec<f64>,
}

/// Offset of element `i` (0-based) of an `n`-element array from its midpoint.
fn centered_offset(i: usize, n: usize, spacing: f64) -> f64 {
    (i as f64 - (n as f64 - 1.0) / 2.0) * spacing
}

pub fn build_positions(cfg: &SceneConfig) -> Result<ScenePositions> {
    cfg.validate()?;

    let tx_pos: Vec<Point> = (0..cfg.n_t)
        .map(|t| Point {
            x: 0.0,
            y: cfg.h_t + centered_offset(t, cfg.n_t, cfg.s_t),
        })
        .collect();
    let rx_pos: Vec<Point> = (0..cfg.n_r)
        .map(|r| Point {
            x: cfg.d_wall,
            y: cfg.h_r + centered_offset(r, cfg.n_r, cfg.s_r),
        })
        .collect();
    let ris_pos: Vec<Point> = (0..cfg.n_ris)
        .map(|l| Point {
            x: cfg.d_ris + centered_offset(l, cfg.n_ris, cfg.s_ris),
            y: 0.0,
        })
        .collect();

    if tx_pos[0].y <= 0.0 {
        return Err(Error::Geometry(format!(
            "lowest transmit antenna at y = {} m is not above the floor",
            tx_pos[0].y
        )));
    }
    if rx_pos[0].y <= 0.0 {
        return Err(Error::Geometry(format!(
            "lowest receive antenna at y = {} m is not above the floor",
            rx_pos[0].y
        )));
    }
    let (first, last) = (ris_pos[0].x, ris_pos[cfg.n_ris - 1].x);
    if first <= 0.0 || last >= cfg.d_wall {
        return Err(Error::Geometry(format!(
            "RIS spans x = {first} .. {last} m, outside the open interval (0, {})",
            cfg.d_wall
        )));
    }

    let d1 = Matrix::from_fn(cfg.n_r, cfg.n_ris, |r, l| ris_pos[l].distance(rx_pos[r]));
    let d2 = Matrix::from_fn(cfg.n_ris, cfg.n_t, |l, t| tx_pos[t].distance(ris_pos[l]));

    let tx_mid = Point { x: 0.0, y: cfg.h_t };
    let rx_mid = Point {
        x: cfg.d_wall,
        y: cfg.h_r,
    };
    let d_t_mid: Vec<f64> = ris_pos.iter().map(|p| tx_mid.distance(*p)).collect();
    let d_r_mid: Vec<f64> = ris_pos.iter().map(|p| rx_mid.distance(*p)).collect();
    // Vertical component of the unit vector from each array midpoint to the element.
    let cos_theta_t = ris_pos
        .iter()
        .zip(&d_t_mid)
        .map(|(p, d)| (p.y - tx_mid.y) / d)
        .collect();
    let cos_theta_r = ris_pos
        .iter()
        .zip(&d_r_mid)
        .map(|(p, d)| (p.y - rx_mid.y) / d)
        .collect();

    Ok(ScenePositions {
        tx_pos,
        rx_pos,
        ris_pos,
        d1,
        d2,
        d_t_mid,
        d_r_mid,
        cos_theta_t,
        cos_theta_r,
    })
}

/// Center-path distances `(d1_c, d2_c)` from the mean array heights via the
/// RIS midpoint. These fix the free-space loss every channel is normalized by.
pub fn normalization_reference(cfg: &SceneConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let d1_c = cfg.h_r_mean.hypot(cfg.d_wall - cfg.d_ris);
    let d2_c = cfg.h_t_mean.hypot(cfg.d_ris);
    Ok((d1_c, d2_c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_element_distances() {
        let cfg = SceneConfig::paper(1, 1, 1);
        let pos = build_positions(&cfg).unwrap();
        assert_relative_eq!(pos.d2[(0, 0)], 12.5_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(pos.d1[(0, 0)], 7.94_f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(pos.d2[(0, 0)], 3.5355339, epsilon = 1e-7);
        assert_relative_eq!(pos.d1[(0, 0)], 2.8178006, epsilon = 1e-7);
    }

    #[test]
    fn two_antenna_heights_straddle_midpoint() {
        let mut cfg = SceneConfig::paper(2, 1, 1);
        cfg.s_t = 0.0025;
        let pos = build_positions(&cfg).unwrap();
        assert_relative_eq!(pos.tx_pos[0].y, 2.49875, epsilon = 1e-12);
        assert_relative_eq!(pos.tx_pos[1].y, 2.50125, epsilon = 1e-12);
    }

    #[test]
    fn ris_span_at_paper_scale() {
        let pos = build_positions(&SceneConfig::paper(8, 4, 50)).unwrap();
        assert_relative_eq!(pos.ris_pos[0].x, 2.5 - 0.06125, epsilon = 1e-12);
        assert_relative_eq!(pos.ris_pos[49].x, 2.5 + 0.06125, epsilon = 1e-12);
        for w in pos.ris_pos.windows(2) {
            assert_relative_eq!(w[1].x - w[0].x, 0.0025, epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_reference_values() {
        let (d1_c, d2_c) = normalization_reference(&SceneConfig::paper(8, 4, 50)).unwrap();
        assert_relative_eq!(d1_c, 2.8178006, epsilon = 1e-7);
        assert_relative_eq!(d2_c, 3.5355339, epsilon = 1e-7);

        let mut sym = SceneConfig::paper(1, 1, 1);
        sym.h_r_mean = sym.h_t_mean;
        let (a, b) = normalization_reference(&sym).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normalization_ignores_realized_heights() {
        let cfg = SceneConfig::paper(8, 4, 50);
        assert_eq!(
            normalization_reference(&cfg).unwrap(),
            normalization_reference(&cfg.with_heights(3.0, 0.8)).unwrap()
        );
    }

    #[test]
    fn rejects_degenerate_configs() {
        let mut cfg = SceneConfig::paper(1, 1, 1);
        cfg.d_ris = cfg.d_wall;
        assert!(matches!(
            build_positions(&cfg),
            Err(Error::InvalidConfig(_))
        ));

        let mut cfg = SceneConfig::paper(1, 1, 1);
        cfg.h_r_mean = 0.0;
        assert!(normalization_reference(&cfg).is_err());

        let mut cfg = SceneConfig::paper(0, 1, 1);
        assert!(build_positions(&cfg).is_err());
        cfg.n_t = 1;
        cfg.lambda = f64::NAN;
        assert!(build_positions(&cfg).is_err());
    }

    #[test]
    fn rejects_array_through_floor() {
        let mut cfg = SceneConfig::paper(8, 1, 1);
        cfg.h_t = 0.005;
        assert!(matches!(build_positions(&cfg), Err(Error::Geometry(_))));
    }

    #[test]
    fn rejects_ris_outside_walls() {
        let mut cfg = SceneConfig::paper(1, 1, 100);
        cfg.d_ris = 0.1;
        assert!(matches!(build_positions(&cfg), Err(Error::Geometry(_))));
    }

    #[test]
    fn distances_match_coordinates_exactly() {
        let cfg = SceneConfig::paper(8, 4, 50).with_heights(2.72, 0.94);
        let pos = build_positions(&cfg).unwrap();
        for l in 0..cfg.n_ris {
            let x = pos.ris_pos[l].x;
            for t in 0..cfg.n_t {
                let y = pos.tx_pos[t].y;
                assert_relative_eq!(pos.d2[(l, t)].powi(2), x * x + y * y, max_relative = 1e-14);
            }
            assert!(pos.cos_theta_t[l].abs() <= 1.0 && pos.cos_theta_r[l].abs() <= 1.0);
            let tx_half = (cfg.n_t - 1) as f64 * cfg.s_t / 2.0;
            let rx_half = (cfg.n_r - 1) as f64 * cfg.s_r / 2.0;
            let ris_half = (cfg.n_ris - 1) as f64 * cfg.s_ris / 2.0;
            for t in 0..cfg.n_t {
                assert!((pos.d2[(l, t)] - pos.d_t_mid[l]).abs() <= tx_half + ris_half);
            }
            for r in 0..cfg.n_r {
                assert!((pos.d1[(r, l)] - pos.d_r_mid[l]).abs() <= rx_half + ris_half);
            }
        }
    }

    #[test]
    fn mirrored_scene_swaps_hops() {
        let cfg = SceneConfig::paper(8, 4, 50).with_heights(2.3, 1.1);
        let mut mirror = cfg.clone();
        std::mem::swap(&mut mirror.n_t, &mut mirror.n_r);
        std::mem::swap(&mut mirror.s_t, &mut mirror.s_r);
        std::mem::swap(&mut mirror.h_t, &mut mirror.h_r);
        std::mem::swap(&mut mirror.h_t_mean, &mut mirror.h_r_mean);
        mirror.d_ris = cfg.d_wall - cfg.d_ris;

        let a = build_positions(&cfg).unwrap();
        let b = build_positions(&mirror).unwrap();
        let n = cfg.n_ris;
        for r in 0..cfg.n_r {
            for l in 0..n {
                assert_relative_eq!(b.d2[(n - 1 - l, r)], a.d1[(r, l)], max_relative = 1e-12);
            }
        }
        for t in 0..cfg.n_t {
            for l in 0..n {
                assert_relative_eq!(b.d1[(t, n - 1 - l)], a.d2[(l, t)], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn height_shift_moves_only_vertical_offsets() {
        let cfg = SceneConfig::paper(4, 2, 10);
        let shifted = cfg.with_heights(cfg.h_t + 0.3, cfg.h_r + 0.3);
        let a = build_positions(&cfg).unwrap();
        let b = build_positions(&shifted).unwrap();
        for t in 0..cfg.n_t {
            assert_relative_eq!(b.tx_pos[t].y - a.tx_pos[t].y, 0.3, epsilon = 1e-12);
        }
        for l in 0..cfg.n_ris {
            assert_eq!(a.ris_pos[l], b.ris_pos[l]);
            let x = b.ris_pos[l].x;
            assert_relative_eq!(b.d_t_mid[l], x.hypot(cfg.h_t + 0.3), max_relative = 1e-14);
        }
    }
}
