use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{EstimateKind, EstimateReport};
use super::random::complex_normal;
use crate::centralizers::QuasilinearMap;
use crate::error::{LabError, Result};
use crate::matcore::{Mat, Vector};

/// Below this many draws the standard error itself is unreliable.
pub const MIN_RELIABLE_SAMPLES: usize = 100;

/// Quasinormed space receiving the Gaussian sums.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaTarget {
    /// `ℂᵐ` with the Euclidean norm.
    Hilbert,
    /// `ℂᵐ ⊕_φ ℂᵐ` stored as stacked vectors `(g, f)` of length `2m`, with
    /// `‖(g, f)‖ = ‖g - φ(f)‖ + ‖f‖`.
    Twisted { map: QuasilinearMap },
}

impl GammaTarget {
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        match self {
            GammaTarget::Hilbert => Ok(v.norm()),
            GammaTarget::Twisted { map } => {
                if v.len() % 2 != 0 {
                    return Err(LabError::Dimension(
                        "twisted target needs vectors of even length".into(),
                    ));
                }
                let m = v.len() / 2;
                let g: Vector = v.rows(0, m).into_owned();
                let f: Vector = v.rows(m, m).into_owned();
                Ok((g - map.apply(&f)?).norm() + f.norm())
            }
        }
    }
}

/// Monte Carlo estimate of `(E‖Σ_k g_k v(e_k)‖²)^{1/2}` where the columns
/// of `columns` are `v(e_k)` and `g_k` are independent standard complex
/// Gaussians. The standard error comes from the delta method.
pub fn gamma_summing_mc(
    columns: &Mat,
    target: &GammaTarget,
    count: usize,
    seed: u64,
) -> Result<EstimateReport> {
    if count == 0 {
        return Err(LabError::Input("sample count must be at least 1".into()));
    }
    let k = columns.cols();
    let squares: Vec<f64> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let g = Vector::from_iterator(k, (0..k).map(|_| complex_normal(&mut rng)));
            let n = target.norm(&columns.apply(&g))?;
            Ok(n * n)
        })
        .collect::<Result<_>>()?;
    let nf = count as f64;
    let mean = squares.iter().sum::<f64>() / nf;
    let var = if count > 1 {
        squares.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0)
    } else {
        0.0
    };
    let value = mean.sqrt();
    let std_error = if mean > 0.0 {
        (var / nf).sqrt() / (2.0 * value)
    } else {
        0.0
    };
    let mut warnings = Vec::new();
    if count < MIN_RELIABLE_SAMPLES {
        warnings.push(format!(
            "only {count} draws; the standard error is unreliable below {MIN_RELIABLE_SAMPLES}"
        ));
    }
    Ok(EstimateReport {
        kind: EstimateKind::Gamma,
        value,
        samples: count,
        seed,
        witness: None,
        std_error: Some(std_error),
        note: "Monte Carlo mean of the squared norm, square-rooted".to_string(),
        warnings,
    })
}
