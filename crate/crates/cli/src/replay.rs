use std::path::Path;

use centralab::metrology::{defining_ratio, replay_witness};
use centralab::twisted::modulus_ratio;
use centralab::{Centralizer, EstimateKind, TwistedVec};
use serde::Serialize;

use crate::experiments::{Artifact, WitnessRecord};
use crate::failure::Failure;

const REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ReplayLine {
    pub entry: usize,
    pub dim: usize,
    pub kind: EstimateKind,
    pub recorded: Option<f64>,
    pub replayed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub status: &'static str,
    pub config_hash: String,
    pub entries: Vec<ReplayLine>,
}

fn agree(a: f64, b: f64) -> bool {
    a.to_bits() == b.to_bits() || (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

fn replay_record(entry: usize, rec: &WitnessRecord) -> ReplayLine {
    let map = Centralizer::with_config(rec.spec.clone(), rec.numeric);
    let report = &rec.report;
    let replayed = match report.kind {
        EstimateKind::Modulus => match report.witness.as_ref().map(|w| w.inputs.as_slice()) {
            Some([uy, ux, vy, vx]) => modulus_ratio(
                &map,
                &TwistedVec::new(uy.clone(), ux.clone()),
                &TwistedVec::new(vy.clone(), vx.clone()),
                rec.q,
                rec.p,
            ),
            _ => Err(centralab::LabError::Input("modulus witness needs four inputs".into())),
        },
        _ => replay_witness(&map, report, rec.p, rec.q),
    };
    let (replayed, error) = match replayed {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ReplayLine {
        entry,
        dim: rec.dim,
        kind: report.kind,
        recorded: Some(report.value),
        matches: replayed.is_some_and(|v| agree(v, report.value)),
        replayed,
        error,
    }
}

/// Re-evaluates recorded witnesses, or the failing sample of a failure file.
pub fn replay(path: &Path, entry: Option<usize>) -> Result<ReplayReport, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    let artifact: Artifact = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{} is not a witness file: {e}", path.display())))?;

    let mut lines = Vec::new();
    if let Some(f) = &artifact.failure {
        let map = Centralizer::with_config(f.spec.clone(), f.numeric);
        let outcome = defining_ratio(&map, f.kind, &f.inputs, f.p, f.q);
        let (replayed, error) = match outcome {
            Ok(v) if !v.is_nan() => (Some(v), None),
            Ok(_) => (None, Some("ratio is NaN".to_string())),
            Err(e) => (None, Some(e.to_string())),
        };
        // a failure replays faithfully when it fails again
        lines.push(ReplayLine {
            entry: f.index as usize,
            dim: f.dim,
            kind: f.kind,
            recorded: None,
            matches: replayed.is_none(),
            replayed,
            error,
        });
    } else {
        if artifact.records.is_empty() {
            return Err(Failure::config(format!("{} holds no witnesses", path.display())));
        }
        let picked: Vec<usize> = match entry {
            Some(i) if i < artifact.records.len() => vec![i],
            Some(i) => {
                return Err(Failure::config(format!(
                    "entry {i} out of range, file has {}",
                    artifact.records.len()
                )))
            }
            None => (0..artifact.records.len()).collect(),
        };
        for i in picked {
            let rec = &artifact.records[i];
            if rec.report.witness.is_none() {
                continue;
            }
            lines.push(replay_record(i, rec));
        }
    }
    let report = ReplayReport {
        status: if lines.iter().all(|l| l.matches) { "ok" } else { "mismatch" },
        config_hash: artifact.config_hash,
        entries: lines,
    };
    Ok(report)
}
