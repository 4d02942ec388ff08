use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::random::contraction;
use super::sampler::Sampler;
use crate::centralizers::MatrixMap;
use crate::error::{LabError, Result};
use crate::matcore::{Mat, NumericConfig, PIndex};

/// Which defining inequality a report measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimateKind {
    /// Quasilinearity `‖Φ(f+g) - Φf - Φg‖_q ≤ Q(‖f‖_p + ‖g‖_p)`.
    Q,
    /// Left centralizer `‖Φ(af) - aΦ(f)‖_q ≤ L‖a‖_∞‖f‖_p`.
    L,
    /// Right centralizer `‖Φ(fa) - Φ(f)a‖_q ≤ R‖f‖_p‖a‖_∞`.
    R,
    /// Bicentralizer `‖Φ(afb) - aΦ(f)b‖_q ≤ B‖a‖_∞‖f‖_p‖b‖_∞`.
    B,
    #[serde(rename = "distance")]
    Distance,
    #[serde(rename = "gamma")]
    Gamma,
    /// Concavity modulus of a twisted quasinorm.
    #[serde(rename = "modulus")]
    Modulus,
    /// Worst relative residual of a morphism fit.
    #[serde(rename = "residual")]
    Residual,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::Q => "Q",
            EstimateKind::L => "L",
            EstimateKind::R => "R",
            EstimateKind::B => "B",
            EstimateKind::Distance => "distance",
            EstimateKind::Gamma => "gamma",
            EstimateKind::Modulus => "modulus",
            EstimateKind::Residual => "residual",
        }
    }

    /// Inequalities that [`estimate_constant`] measures.
    pub fn is_centralizer_constant(self) -> bool {
        matches!(self, EstimateKind::Q | EstimateKind::L | EstimateKind::R | EstimateKind::B)
    }
}

impl fmt::Display for EstimateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimateKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| LabError::Input(format!("unknown estimate kind {s:?}")))
    }
}

/// The sample that attained the reported maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    /// Inputs of the defining ratio, in the order the ratio consumes them.
    pub inputs: Vec<Mat>,
    pub ratio: f64,
}

/// Result of a sampled measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub kind: EstimateKind,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
    pub witness: Option<Witness>,
    /// Standard error, for Monte Carlo means.
    #[serde(default)]
    pub std_error: Option<f64>,
    pub note: String,
    #[serde(default)]
    pub warnings: Vec<String>,
}

pub(crate) const SUP_NOTE: &str =
    "maximum over the sampled stream; a lower bound for the true supremum";

/// Evaluates `sample(i)` for every index in parallel and keeps the largest
/// ratio, the lowest index winning ties.
pub(crate) fn max_over_stream<F>(
    kind: EstimateKind,
    count: usize,
    seed: u64,
    sample: F,
) -> Result<EstimateReport>
where
    F: Fn(u64) -> Result<(f64, Vec<Mat>)> + Sync,
{
    if count == 0 {
        return Err(LabError::Input("sample count must be at least 1".into()));
    }
    let results: Vec<(f64, Vec<Mat>)> = (0..count as u64)
        .into_par_iter()
        .map(&sample)
        .collect::<Result<_>>()?;
    let mut best: Option<Witness> = None;
    for (i, (ratio, inputs)) in results.into_iter().enumerate() {
        if ratio.is_nan() {
            return Err(LabError::Input(format!("sample {i} produced a NaN ratio")));
        }
        if best.as_ref().is_none_or(|b| ratio > b.ratio) {
            best = Some(Witness {
                index: i as u64,
                inputs,
                ratio,
            });
        }
    }
    let witness = best.expect("count >= 1");
    Ok(EstimateReport {
        kind,
        value: witness.ratio,
        samples: count,
        seed,
        witness: Some(witness),
        std_error: None,
        note: SUP_NOTE.to_string(),
        warnings: Vec::new(),
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// The defining ratio of a centralizer constant on explicit inputs:
/// `[f, g]` for `Q`, `[a, f]` for `L`, `[f, a]` for `R`, `[a, f, b]` for `B`.
pub fn defining_ratio(
    map: &dyn MatrixMap,
    kind: EstimateKind,
    inputs: &[Mat],
    p: PIndex,
    q: PIndex,
) -> Result<f64> {
    let cfg = NumericConfig::default();
    let norm = |m: &Mat, r: PIndex| cfg.schatten_norm(m, r);
    let arity = match kind {
        EstimateKind::Q | EstimateKind::L | EstimateKind::R => 2,
        EstimateKind::B => 3,
        other => {
            return Err(LabError::Input(format!(
                "{other} is not a centralizer constant"
            )))
        }
    };
    if inputs.len() != arity {
        return Err(LabError::Input(format!(
            "{kind} takes {arity} inputs, got {}",
            inputs.len()
        )));
    }
    match kind {
        EstimateKind::Q => {
            let (f, g) = (&inputs[0], &inputs[1]);
            let defect = map.apply(&(f + g))? - map.apply(f)? - map.apply(g)?;
            Ok(ratio(norm(&defect, q)?, norm(f, p)? + norm(g, p)?))
        }
        EstimateKind::L => {
            let (a, f) = (&inputs[0], &inputs[1]);
            let defect = map.apply(&a.compose(f)?)? - a.compose(&map.apply(f)?)?;
            Ok(ratio(norm(&defect, q)?, norm(a, PIndex::INF)? * norm(f, p)?))
        }
        EstimateKind::R => {
            let (f, a) = (&inputs[0], &inputs[1]);
            let defect = map.apply(&f.compose(a)?)? - map.apply(f)?.compose(a)?;
            Ok(ratio(norm(&defect, q)?, norm(f, p)? * norm(a, PIndex::INF)?))
        }
        _ => {
            let (a, f, b) = (&inputs[0], &inputs[1], &inputs[2]);
            let defect = map.apply(&a.compose(f)?.compose(b)?)?
                - a.compose(&map.apply(f)?)?.compose(b)?;
            Ok(ratio(
                norm(&defect, q)?,
                norm(a, PIndex::INF)? * norm(f, p)? * norm(b, PIndex::INF)?,
            ))
        }
    }
}

/// Draws the inputs of sample `index` for a centralizer constant.
pub fn draw_inputs(sampler: &Sampler, kind: EstimateKind, index: u64) -> Result<Vec<Mat>> {
    let mut rng = sampler.rng(index);
    let (r, c) = sampler.shape();
    Ok(match kind {
        EstimateKind::Q => {
            let f = sampler.draw_unit(&mut rng)?;
            let t = 1.0 - rng.random::<f64>();
            let g = sampler.draw_unit(&mut rng)?.scale_real(t);
            vec![f, g]
        }
        EstimateKind::L => {
            let a = contraction(&mut rng, r);
            let f = sampler.draw_unit(&mut rng)?;
            vec![a, f]
        }
        EstimateKind::R => {
            let a = contraction(&mut rng, c);
            let f = sampler.draw_unit(&mut rng)?;
            vec![f, a]
        }
        EstimateKind::B => {
            let a = contraction(&mut rng, r);
            let b = contraction(&mut rng, c);
            let f = sampler.draw_unit(&mut rng)?;
            vec![a, f, b]
        }
        other => {
            return Err(LabError::Input(format!(
                "{other} is not a centralizer constant"
            )))
        }
    })
}

/// Max-over-samples estimate of `Q`, `L`, `R` or `B` from `S^p` to `S^q`,
/// with `p` taken from the sampler.
pub fn estimate_constant(
    map: &dyn MatrixMap,
    kind: EstimateKind,
    sampler: &Sampler,
    count: usize,
    q: PIndex,
) -> Result<EstimateReport> {
    sampler.validate()?;
    if !kind.is_centralizer_constant() {
        return Err(LabError::Input(format!("{kind} is not a centralizer constant")));
    }
    max_over_stream(kind, count, sampler.seed, |i| {
        let inputs = draw_inputs(sampler, kind, i)?;
        let r = defining_ratio(map, kind, &inputs, sampler.p, q)?;
        Ok((r, inputs))
    })
}

/// `‖a(f) - b(f)‖_q / ‖f‖_p`.
pub fn distance_ratio(
    a: &dyn MatrixMap,
    b: &dyn MatrixMap,
    f: &Mat,
    p: PIndex,
    q: PIndex,
) -> Result<f64> {
    let cfg = NumericConfig::default();
    let diff = a.apply(f)? - b.apply(f)?;
    Ok(ratio(cfg.schatten_norm(&diff, q)?, cfg.schatten_norm(f, p)?))
}

/// Max-over-samples estimate of the distance between two maps.
pub fn distance_estimate(
    a: &dyn MatrixMap,
    b: &dyn MatrixMap,
    sampler: &Sampler,
    count: usize,
    q: PIndex,
) -> Result<EstimateReport> {
    sampler.validate()?;
    max_over_stream(EstimateKind::Distance, count, sampler.seed, |i| {
        let f = sampler.sample(i)?;
        let r = distance_ratio(a, b, &f, sampler.p, q)?;
        Ok((r, vec![f]))
    })
}

/// Re-evaluates the witness of a centralizer-constant report.
pub fn replay_witness(
    map: &dyn MatrixMap,
    report: &EstimateReport,
    p: PIndex,
    q: PIndex,
) -> Result<f64> {
    let w = report
        .witness
        .as_ref()
        .ok_or_else(|| LabError::Input("report has no witness".into()))?;
    defining_ratio(map, report.kind, &w.inputs, p, q)
}
