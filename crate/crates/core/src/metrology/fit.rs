use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centralizers::{CentralizerSpec, MatrixMap};
use crate::error::{LabError, Result};
use crate::matcore::{hermitian_eigen, Mat, NumericConfig, PIndex, C64};

/// Relative eigenvalue cutoff of the normal matrix.
const RANK_CUTOFF: f64 = 1e-13;

/// Which module structure the fitted morphism respects.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `f ↦ fG`, a morphism of left modules.
    Left,
    /// `f ↦ Lf`, a morphism of right modules.
    #[default]
    Right,
}

impl std::str::FromStr for Side {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(LabError::Input(format!("unknown side {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub side: Side,
    /// `L` (right side) or `G` (left side).
    pub morphism: Mat,
    /// `max_i ‖Φ(f_i) - M(f_i)‖_q / ‖f_i‖_p`.
    pub residual: f64,
    pub worst_index: usize,
    pub samples: usize,
    /// The normal equations were singular; the minimum-norm solution was
    /// used.
    pub rank_deficient: bool,
}

impl FitReport {
    pub fn apply(&self, f: &Mat) -> Result<Mat> {
        match self.side {
            Side::Right => self.morphism.compose(f),
            Side::Left => f.compose(&self.morphism),
        }
    }

    pub fn as_spec(&self) -> CentralizerSpec {
        match self.side {
            Side::Right => CentralizerSpec::LeftComposition {
                l: self.morphism.clone(),
            },
            Side::Left => CentralizerSpec::RightMultiplication {
                g: self.morphism.clone(),
            },
        }
    }
}

/// Pseudo-inverse of a Hermitian positive semidefinite matrix.
fn psd_pinv(a: DMatrix<C64>) -> Result<(DMatrix<C64>, bool)> {
    let n = a.nrows();
    let (values, vectors) = hermitian_eigen(&a)
        .ok_or_else(|| LabError::Input("normal equations did not diagonalize".into()))?;
    let top = values.iter().copied().fold(0.0, f64::max);
    let mut out = DMatrix::<C64>::zeros(n, n);
    let mut deficient = false;
    for k in 0..n {
        let lambda = values[k];
        if lambda <= RANK_CUTOFF * top || lambda <= 0.0 {
            deficient = true;
            continue;
        }
        let v = vectors.column(k);
        out += (v * v.adjoint()) * C64::new(1.0 / lambda, 0.0);
    }
    Ok((out, deficient))
}

/// Least-squares morphism closest to `map` on `samples` in the summed
/// Frobenius metric, with the worst relative residual re-measured from
/// `S^p` to `S^q`.
pub fn fit_morphism(
    map: &dyn MatrixMap,
    side: Side,
    samples: &[Mat],
    p: PIndex,
    q: PIndex,
) -> Result<FitReport> {
    let first = samples
        .first()
        .ok_or_else(|| LabError::Input("fit_morphism needs at least one sample".into()))?;
    let shape = first.shape();
    if let Some(bad) = samples.iter().position(|f| f.shape() != shape) {
        return Err(LabError::Dimension(format!("sample {bad} has a different shape")));
    }
    let images: Vec<Mat> = samples.par_iter().map(|f| map.apply(f)).collect::<Result<_>>()?;
    let out_shape = images[0].shape();
    if images.iter().any(|m| m.shape() != out_shape) {
        return Err(LabError::Dimension("images have different shapes".into()));
    }

    let (morphism, rank_deficient) = match side {
        Side::Right => {
            // minimize Σ ‖Φ(f) - L f‖²: L = (Σ Φ(f) fᴴ)(Σ f fᴴ)⁺
            let mut gram = DMatrix::<C64>::zeros(shape.0, shape.0);
            let mut cross = DMatrix::<C64>::zeros(out_shape.0, shape.0);
            for (f, img) in samples.iter().zip(&images) {
                let fm = f.as_matrix();
                gram += fm * fm.adjoint();
                cross += img.as_matrix() * fm.adjoint();
            }
            let (pinv, deficient) = psd_pinv(gram)?;
            (Mat::from_matrix(cross * pinv)?, deficient)
        }
        Side::Left => {
            // minimize Σ ‖Φ(f) - f G‖²: G = (Σ fᴴ f)⁺ (Σ fᴴ Φ(f))
            let mut gram = DMatrix::<C64>::zeros(shape.1, shape.1);
            let mut cross = DMatrix::<C64>::zeros(shape.1, out_shape.1);
            for (f, img) in samples.iter().zip(&images) {
                let fm = f.as_matrix();
                gram += fm.adjoint() * fm;
                cross += fm.adjoint() * img.as_matrix();
            }
            let (pinv, deficient) = psd_pinv(gram)?;
            (Mat::from_matrix(pinv * cross)?, deficient)
        }
    };

    let mut report = FitReport {
        side,
        morphism,
        residual: 0.0,
        worst_index: 0,
        samples: samples.len(),
        rank_deficient,
    };
    let cfg = NumericConfig::default();
    let ratios: Vec<f64> = samples
        .par_iter()
        .zip(images.par_iter())
        .map(|(f, img)| {
            let diff = img - &report.apply(f)?;
            let den = cfg.schatten_norm(f, p)?;
            Ok(if den == 0.0 {
                0.0
            } else {
                cfg.schatten_norm(&diff, q)? / den
            })
        })
        .collect::<Result<_>>()?;
    for (i, &r) in ratios.iter().enumerate() {
        if r > report.residual || i == 0 {
            report.residual = r;
            report.worst_index = i;
        }
    }
    Ok(report)
}
