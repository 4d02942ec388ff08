use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::estimate::{estimate_constant, EstimateKind};
use super::fit::{fit_morphism, Side};
use super::random::ginibre;
use super::sampler::{Sampler, SamplerTag};
use crate::centralizers::{Centralizer, CentralizerSpec};
use crate::error::{LabError, Result};
use crate::matcore::{Mat, NumericConfig, PIndex};
use crate::seqcore::{kp_phi, lp_norm, LipschitzFn, Seq};

/// A spec, or a recipe producing one per dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpecFamily {
    Fixed { spec: CentralizerSpec },
    /// `f ↦ fg` with `g` a Ginibre matrix scaled to operator norm about 1.
    RandomRightMultiplication { seed: u64 },
    /// `f ↦ Lf` with `L` a scaled Ginibre matrix.
    RandomLeftComposition { seed: u64 },
}

impl SpecFamily {
    pub fn at(&self, n: usize) -> Result<CentralizerSpec> {
        let scaled = |seed: u64| -> Mat {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n as u64);
            ginibre(&mut rng, n, n).scale_real(1.0 / (2.0 * (n as f64).sqrt()))
        };
        Ok(match self {
            SpecFamily::Fixed { spec } => {
                if let Some(d) = spec.dimension() {
                    if d != n {
                        return Err(LabError::Dimension(format!(
                            "spec is fixed to dimension {d}, asked for {n}"
                        )));
                    }
                }
                spec.clone()
            }
            SpecFamily::RandomRightMultiplication { seed } => {
                CentralizerSpec::RightMultiplication { g: scaled(*seed) }
            }
            SpecFamily::RandomLeftComposition { seed } => {
                CentralizerSpec::LeftComposition { l: scaled(*seed) }
            }
        })
    }
}

impl From<CentralizerSpec> for SpecFamily {
    fn from(spec: CentralizerSpec) -> Self {
        SpecFamily::Fixed { spec }
    }
}

/// Sampling parameters shared by every dimension of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub seed: u64,
    pub p: PIndex,
    pub q: PIndex,
    #[serde(default)]
    pub tag: SamplerTag,
    pub samples: usize,
    /// Use `samples · n` draws at dimension `n`.
    #[serde(default)]
    pub per_dim: bool,
    #[serde(default)]
    pub gapped: bool,
    /// Configuration used to evaluate the specs.
    #[serde(default)]
    pub numeric: NumericConfig,
}

impl SweepParams {
    pub fn centralizer(&self, spec: CentralizerSpec) -> Centralizer {
        Centralizer::with_config(spec, self.numeric)
    }

    pub fn sampler(&self, n: usize) -> Sampler {
        Sampler {
            seed: self.seed,
            n,
            cols: None,
            p: self.p,
            tag: self.tag,
            gapped: self.gapped,
        }
    }

    pub fn count(&self, n: usize) -> usize {
        if self.per_dim {
            self.samples * n
        } else {
            self.samples
        }
    }
}

/// Named construction measured per dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GrowthExperiment {
    /// `‖kp_phi(1_{[n]}/n^{1/p}, ϕ)‖_p`, exactly `(log n)/p` for `ϕ(s,t) = s`.
    KpWitness {
        #[serde(default = "default_symbol")]
        phi: LipschitzFn,
    },
    /// A centralizer constant of the family.
    Constant {
        family: SpecFamily,
        kind: EstimateKind,
    },
    /// Worst residual of the least-squares morphism fit.
    FitResidual {
        family: SpecFamily,
        #[serde(default)]
        side: Side,
    },
}

fn default_symbol() -> LipschitzFn {
    LipschitzFn::S
}

impl GrowthExperiment {
    pub fn kind_label(&self) -> &'static str {
        match self {
            GrowthExperiment::KpWitness { .. } => "kp_witness",
            GrowthExperiment::Constant { kind, .. } => kind.as_str(),
            GrowthExperiment::FitResidual { .. } => "residual",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub dim: usize,
    pub kind: String,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

pub fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(LabError::Input("dims must be nonempty".into()));
    }
    if dims[0] == 0 || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::Input(format!(
            "dims must be positive and strictly ascending, got {dims:?}"
        )));
    }
    Ok(())
}

/// `‖kp_phi(1_{[n]}/n^{1/p}, ϕ)‖_p`.
pub fn kp_growth_witness(n: usize, phi: &LipschitzFn, p: PIndex) -> Result<f64> {
    let p_val = p.finite("kp_growth_witness")?;
    let x = Seq::from_real(&vec![(n as f64).powf(-1.0 / p_val); n]);
    Ok(lp_norm(&kp_phi(&x, phi, p)?, p))
}

/// One row per dimension.
pub fn growth_profile(
    experiment: &GrowthExperiment,
    dims: &[usize],
    params: &SweepParams,
) -> Result<Vec<GrowthRow>> {
    check_dims(dims)?;
    let mut rows = Vec::with_capacity(dims.len());
    for &n in dims {
        let (value, samples) = match experiment {
            GrowthExperiment::KpWitness { phi } => (kp_growth_witness(n, phi, params.p)?, 1),
            GrowthExperiment::Constant { family, kind } => {
                let map = params.centralizer(family.at(n)?);
                let count = params.count(n);
                let report = estimate_constant(&map, *kind, &params.sampler(n), count, params.q)?;
                (report.value, count)
            }
            GrowthExperiment::FitResidual { family, side } => {
                let map = params.centralizer(family.at(n)?);
                let count = params.count(n);
                let samples = params.sampler(n).samples(count)?;
                let fit = fit_morphism(&map, *side, &samples, params.p, params.q)?;
                (fit.residual, count)
            }
        };
        rows.push(GrowthRow {
            dim: n,
            kind: experiment.kind_label().to_string(),
            value,
            samples,
            seed: params.seed,
        });
    }
    Ok(rows)
}

/// Scientific notation with 17 significant digits, enough to round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("dim,kind,value,samples,seed\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.dim,
            r.kind,
            fmt_f64(r.value),
            r.samples,
            r.seed
        ));
    }
    out
}
