use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::matcore::{op_norm, Mat, PIndex, Vector, C64};
use crate::seqcore::{kp_phi, LipschitzFn, Seq};

/// Homogeneous map `φ : ℂⁿ → ℂⁿ`, described in closed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuasilinearMap {
    /// `y ↦ kp_phi(y, ϕ, 2)` in the canonical basis. With `ϕ(s,t) = s`
    /// this is the map behind the Kalton–Peck space `Z₂`.
    KpOnH { phi: LipschitzFn },
    Linear { l: Mat },
    Scaled {
        factor: C64,
        inner: Box<QuasilinearMap>,
    },
    Sum { terms: Vec<QuasilinearMap> },
}

impl QuasilinearMap {
    pub fn kalton_peck() -> Self {
        QuasilinearMap::KpOnH {
            phi: LipschitzFn::S,
        }
    }

    pub fn apply(&self, y: &Vector) -> Result<Vector> {
        match self {
            QuasilinearMap::KpOnH { phi } => {
                Ok(kp_phi(&Seq::from_vector(y), phi, PIndex::TWO)?.to_vector())
            }
            QuasilinearMap::Linear { l } => {
                if l.cols() != y.len() {
                    return Err(LabError::Dimension(format!(
                        "linear map with {} columns applied to a vector of length {}",
                        l.cols(),
                        y.len()
                    )));
                }
                Ok(l.apply(y))
            }
            QuasilinearMap::Scaled { factor, inner } => Ok(inner.apply(y)? * *factor),
            QuasilinearMap::Sum { terms } => {
                let mut out = Vector::zeros(y.len());
                for t in terms {
                    let v = t.apply(y)?;
                    if v.len() != out.len() {
                        return Err(LabError::Dimension(
                            "summands of a quasilinear map disagree in length".into(),
                        ));
                    }
                    out += v;
                }
                Ok(out)
            }
        }
    }

    /// An upper bound for `sup ‖φ(y)‖ / ‖y‖` when the map is bounded by
    /// construction, `None` otherwise.
    pub fn bound(&self) -> Result<Option<f64>> {
        Ok(match self {
            QuasilinearMap::KpOnH { phi } => phi.sup_abs(),
            QuasilinearMap::Linear { l } => Some(op_norm(l)?),
            QuasilinearMap::Scaled { factor, inner } => inner.bound()?.map(|b| b * factor.norm()),
            QuasilinearMap::Sum { terms } => {
                let mut total = 0.0;
                for t in terms {
                    match t.bound()? {
                        Some(b) => total += b,
                        None => return Ok(None),
                    }
                }
                Some(total)
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            QuasilinearMap::KpOnH { phi } => phi.validate(),
            QuasilinearMap::Linear { l } => {
                if l.is_square() {
                    Ok(())
                } else {
                    Err(LabError::Input("linear map on H must be square".into()))
                }
            }
            QuasilinearMap::Scaled { inner, .. } => inner.validate(),
            QuasilinearMap::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
        }
    }
}
