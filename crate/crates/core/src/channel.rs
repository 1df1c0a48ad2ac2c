//! Normalized cascade channel `H = k V F U`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{normalization_reference, SceneConfig, ScenePositions};
use crate::matrix::Matrix;

/// Principal argument in `(-pi, pi]`, with `arg(0) = 0`.
pub fn principal_arg(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    wrap_phase(z.im.atan2(z.re))
}

/// Maps any finite angle into `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Unit phasor `exp(j x)`.
pub(crate) fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// RIS phase shifts in radians, one per element.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseVector(Vec<f64>);

impl RisPhaseVector {
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if let Some(bad) = phi.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "RIS phase {bad} is not finite"
            )));
        }
        Ok(Self(phi))
    }

    pub fn zeros(n_ris: usize) -> Self {
        Self(vec![0.0; n_ris])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Same phases mapped into `(-pi, pi]`.
    pub fn normalized(&self) -> Self {
        Self(self.0.iter().map(|&p| wrap_phase(p)).collect())
    }
}

/// An `N_r x N_t` channel matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix(pub Matrix<Complex64>);

impl ChannelMatrix {
    pub fn n_r(&self) -> usize {
        self.0.rows()
    }

    pub fn n_t(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, r: usize, t: usize) -> Complex64 {
        self.0[(r, t)]
    }

    pub fn matrix(&self) -> &Matrix<Complex64> {
        &self.0
    }
}

/// Steering matrices and normalization constant of one scene.
#[derive(Debug, Clone)]
pub struct CascadeChannel {
    /// `N_ris x N_t`, entries `exp(-j 2 pi d2 / lambda)`.
    pub u_mat: Matrix<Complex64>,
    /// `N_r x N_ris`, entries `exp(-j 2 pi d1 / lambda)`.
    pub v_mat: Matrix<Complex64>,
    pub k_norm: f64,
}

/// `k = d1_c d2_c / (d1[0][0] d2[0][0])`.
pub fn normalization_constant(pos: &ScenePositions, cfg: &SceneConfig) -> Result<f64> {
    let (d1_c, d2_c) = normalization_reference(cfg)?;
    Ok(d1_c * d2_c / (pos.d1[(0, 0)] * pos.d2[(0, 0)]))
}

/// Free-space amplitude `lambda^2 / (16 pi^2 d1_c d2_c)` of the center path.
pub fn reference_fspl(cfg: &SceneConfig) -> Result<f64> {
    let (d1_c, d2_c) = normalization_reference(cfg)?;
    Ok(cfg.lambda.powi(2) / (16.0 * PI * PI * d1_c * d2_c))
}

pub fn build_cascade(pos: &ScenePositions, cfg: &SceneConfig) -> Result<CascadeChannel> {
    let wavenumber = 2.0 * PI / cfg.lambda;
    let u_mat = Matrix::from_fn(pos.d2.rows(), pos.d2.cols(), |l, t| {
        cis(-wavenumber * pos.d2[(l, t)])
    });
    let v_mat = Matrix::from_fn(pos.d1.rows(), pos.d1.cols(), |r, l| {
        cis(-wavenumber * pos.d1[(r, l)])
    });
    Ok(CascadeChannel {
        u_mat,
        v_mat,
        k_norm: normalization_constant(pos, cfg)?,
    })
}

impl CascadeChannel {
    pub fn n_t(&self) -> usize {
        self.u_mat.cols()
    }

    pub fn n_r(&self) -> usize {
        self.v_mat.rows()
    }

    pub fn n_ris(&self) -> usize {
        self.u_mat.rows()
    }

    fn check_phases(&self, phi: &RisPhaseVector) -> Result<()> {
        if phi.len() != self.n_ris() {
            return Err(Error::DimensionMismatch {
                expected: self.n_ris(),
                got: phi.len(),
            });
        }
        Ok(())
    }

    /// `H(r,t) = k sum_l V(r,l) exp(j phi_l) U(l,t)`, summed term by term.
    pub fn assemble_h(&self, phi: &RisPhaseVector) -> Result<ChannelMatrix> {
        self.check_phases(phi)?;
        let rot: Vec<Complex64> = phi.as_slice().iter().map(|&p| cis(p)).collect();
        let h = Matrix::from_fn(self.n_r(), self.n_t(), |r, t| {
            let acc: Complex64 = (0..self.n_ris())
                .map(|l| self.v_mat[(r, l)] * rot[l] * self.u_mat[(l, t)])
                .sum();
            acc * self.k_norm
        });
        Ok(ChannelMatrix(h))
    }

    /// `k V F U` by explicit matrix products. Same value as [`Self::assemble_h`].
    pub fn factorized_h(&self, phi: &RisPhaseVector) -> Result<ChannelMatrix> {
        self.check_phases(phi)?;
        let n = self.n_ris();
        let f = Matrix::from_fn(n, n, |a, b| {
            if a == b {
                cis(phi.as_slice()[a])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let vfu = self.v_mat.matmul(&f)?.matmul(&self.u_mat)?;
        Ok(ChannelMatrix(vfu.scale(self.k_norm)))
    }

    /// `sum_r sum_t V(r,l) U(l,t)` for every RIS element `l`.
    pub fn element_sums(&self) -> Vec<Complex64> {
        let v_cols = self.v_mat.column_sums();
        (0..self.n_ris())
            .map(|l| v_cols[l] * self.u_mat.row(l).iter().sum::<Complex64>())
            .collect()
    }
}

/// Channel without the common-distance approximation: each path keeps its
/// own free-space amplitude `lambda^2 / (16 pi^2 d1 d2)`.
pub fn unnormalized_h(
    pos: &ScenePositions,
    cfg: &SceneConfig,
    phi: &RisPhaseVector,
) -> Result<ChannelMatrix> {
    let n_ris = pos.d2.rows();
    if phi.len() != n_ris {
        return Err(Error::DimensionMismatch {
            expected: n_ris,
            got: phi.len(),
        });
    }
    let scale = cfg.lambda.powi(2) / (16.0 * PI * PI);
    let wavenumber = 2.0 * PI / cfg.lambda;
    let h = Matrix::from_fn(pos.d1.rows(), pos.d2.cols(), |r, t| {
        (0..n_ris)
            .map(|l| {
                let (d1, d2) = (pos.d1[(r, l)], pos.d2[(l, t)]);
                Complex64::from_polar(
                    scale / (d1 * d2),
                    -(wavenumber * (d1 + d2) - phi.as_slice()[l]),
                )
            })
            .sum()
    });
    Ok(ChannelMatrix(h))
}
