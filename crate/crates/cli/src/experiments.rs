use std::path::{Path, PathBuf};

use centralab::centralizers::{Centralizer, CentralizerSpec};
use centralab::matcore::NumericConfig;
use centralab::metrology::{
    defining_ratio, draw_inputs, estimate_constant, fit_morphism, gamma_summing_mc, growth_csv,
    growth_profile, FitReport, GammaTarget, GrowthExperiment, GrowthRow, SpecFamily, SweepParams,
};
use centralab::twisted::{quasinorm_modulus_probe_with, splitting_csv, splitting_distance};
use centralab::{EstimateKind, EstimateReport, Mat, PIndex, VERSION};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, ExperimentConfig, Resolved};
use crate::failure::Failure;

/// A measured report together with everything needed to re-evaluate its
/// witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub dim: usize,
    pub spec: CentralizerSpec,
    pub numeric: NumericConfig,
    /// Domain index (the `X` slot for the concavity probe).
    pub p: PIndex,
    /// Target index (the `Y` slot for the concavity probe).
    pub q: PIndex,
    pub report: EstimateReport,
}

/// The first sample on which a measurement failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub dim: usize,
    pub spec: CentralizerSpec,
    pub numeric: NumericConfig,
    pub p: PIndex,
    pub q: PIndex,
    pub kind: EstimateKind,
    pub seed: u64,
    pub index: u64,
    pub inputs: Vec<Mat>,
    pub error: String,
}

/// JSON artifact layout shared by every experiment.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Artifact {
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<DimReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<DimFit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimReport {
    pub dim: usize,
    pub report: EstimateReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimFit {
    pub dim: usize,
    pub spec_hash: String,
    pub fit: FitReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub experiment: Experiment,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_hash: Option<String>,
    pub artifacts: Vec<String>,
    pub notes: Vec<String>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub status: &'static str,
    pub config_hash: String,
    pub output: String,
    pub artifacts: Vec<String>,
}

struct Writer<'a> {
    dir: &'a Path,
    stem: String,
    written: Vec<String>,
}

impl Writer<'_> {
    fn name(&self, prefix: &str, ext: &str) -> String {
        format!("{prefix}-{}.{ext}", self.stem)
    }

    fn write(&mut self, name: String, contents: &str) -> Result<PathBuf, Failure> {
        let path = self.dir.join(&name);
        std::fs::write(&path, contents)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name);
        Ok(path)
    }

    fn json<T: Serialize>(&mut self, name: String, value: &T) -> Result<PathBuf, Failure> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::io(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, &text)
    }
}

fn numeric_failure(e: centralab::LabError) -> Failure {
    Failure::numeric(e.to_string())
}

pub fn run(resolved: &Resolved) -> Result<RunSummary, Failure> {
    let cfg = &resolved.config;
    std::fs::create_dir_all(&resolved.output).map_err(|e| {
        Failure::io(format!("cannot create {}: {e}", resolved.output.display()))
    })?;
    let mut w = Writer {
        dir: &resolved.output,
        stem: resolved.hash[..16].to_string(),
        written: Vec::new(),
    };
    let exp = cfg.experiment.as_str();
    let mut artifact = Artifact {
        config_hash: resolved.hash.clone(),
        ..Artifact::default()
    };
    let mut notes = Vec::new();
    let mut spec_hash = None;

    match cfg.experiment {
        Experiment::Constants => {
            let family = cfg.family()?;
            spec_hash = fixed_hash(&family)?;
            let sweep = cfg.sweep()?;
            let mut rows = Vec::new();
            for &n in &cfg.dims {
                let spec = family.at(n).map_err(Failure::from_lab_config)?;
                let map = sweep.centralizer(spec.clone());
                let sampler = sweep.sampler(n);
                let count = sweep.count(n);
                for kind in cfg.kinds() {
                    let report = match estimate_constant(&map, kind, &sampler, count, sweep.q) {
                        Ok(r) => r,
                        Err(e) => {
                            return Err(record_failure(&mut w, &mut artifact, &sweep, n, &map, kind, count, e))
                        }
                    };
                    rows.push(row(n, kind.as_str(), &report, count));
                    artifact.records.push(WitnessRecord {
                        dim: n,
                        spec: spec.clone(),
                        numeric: sweep.numeric,
                        p: sweep.p,
                        q: sweep.q,
                        report,
                    });
                }
            }
            notes.push(centralab_sup_note());
            w.write(w.name(exp, "csv"), &growth_csv(&rows))?;
            w.json(w.name(exp, "json"), &artifact)?;
        }
        Experiment::Growth => {
            let sweep = cfg.sweep()?;
            let construction = match &cfg.construction {
                Some(c) => c.clone(),
                None => GrowthExperiment::Constant {
                    family: cfg.family()?,
                    kind: cfg.kinds()[0],
                },
            };
            if let GrowthExperiment::Constant { family, .. } | GrowthExperiment::FitResidual { family, .. } =
                &construction
            {
                spec_hash = fixed_hash(family)?;
                notes.push(centralab_sup_note());
            }
            let rows = growth_profile(&construction, &cfg.dims, &sweep).map_err(numeric_failure)?;
            w.write(w.name(exp, "csv"), &growth_csv(&rows))?;
        }
        Experiment::Gamma => {
            let target = cfg.target.clone().unwrap_or(GammaTarget::Hilbert);
            let tables: Vec<Mat> = match &cfg.columns {
                Some(m) => vec![m.clone()],
                None => cfg.dims.iter().map(|&k| Mat::identity(k)).collect(),
            };
            let mut rows = Vec::new();
            for table in tables {
                let report =
                    gamma_summing_mc(&table, &target, cfg.samples, cfg.seed).map_err(numeric_failure)?;
                rows.push(row(table.cols(), "gamma", &report, cfg.samples));
                artifact.reports.push(DimReport {
                    dim: table.cols(),
                    report,
                });
            }
            notes.push("gamma values are Monte Carlo means with delta-method standard errors".into());
            w.write(w.name(exp, "csv"), &growth_csv(&rows))?;
            w.json(w.name(exp, "json"), &artifact)?;
        }
        Experiment::Splitting => {
            let family = cfg.family()?;
            spec_hash = fixed_hash(&family)?;
            let rows = splitting_distance(&family, cfg.side.unwrap_or_default(), &cfg.dims, &cfg.sweep()?)
                .map_err(numeric_failure)?;
            notes.push("splitting residuals are trend data, never a verdict".into());
            w.write(w.name(exp, "csv"), &splitting_csv(&rows))?;
        }
        Experiment::Fit => {
            let family = cfg.family()?;
            spec_hash = fixed_hash(&family)?;
            let sweep = cfg.sweep()?;
            let side = cfg.side.unwrap_or_default();
            let mut rows = Vec::new();
            for &n in &cfg.dims {
                let spec = family.at(n).map_err(Failure::from_lab_config)?;
                let map = sweep.centralizer(spec.clone());
                let count = sweep.count(n);
                let samples = sweep.sampler(n).samples(count).map_err(numeric_failure)?;
                let fit = fit_morphism(&map, side, &samples, sweep.p, sweep.q).map_err(numeric_failure)?;
                rows.push(GrowthRow {
                    dim: n,
                    kind: EstimateKind::Residual.as_str().to_string(),
                    value: fit.residual,
                    samples: count,
                    seed: sweep.seed,
                });
                artifact.fits.push(DimFit {
                    dim: n,
                    spec_hash: spec.hash().map_err(numeric_failure)?,
                    fit,
                });
            }
            w.write(w.name(exp, "csv"), &growth_csv(&rows))?;
            w.json(w.name(exp, "json"), &artifact)?;
        }
        Experiment::Probe => {
            let family = cfg.family()?;
            spec_hash = fixed_hash(&family)?;
            let sweep = cfg.sweep()?;
            let mut rows = Vec::new();
            for &n in &cfg.dims {
                let spec = family.at(n).map_err(Failure::from_lab_config)?;
                let map = sweep.centralizer(spec.clone());
                let count = sweep.count(n);
                let report = quasinorm_modulus_probe_with(&map, sweep.q, sweep.p, &sweep.sampler(n), count)
                    .map_err(numeric_failure)?;
                rows.push(row(n, EstimateKind::Modulus.as_str(), &report, count));
                artifact.records.push(WitnessRecord {
                    dim: n,
                    spec,
                    numeric: sweep.numeric,
                    p: sweep.p,
                    q: sweep.q,
                    report,
                });
            }
            notes.push(centralab_sup_note());
            w.write(w.name(exp, "csv"), &growth_csv(&rows))?;
            w.json(w.name(exp, "json"), &artifact)?;
        }
    }

    let manifest_name = w.name("manifest", "json");
    let mut artifacts = w.written.clone();
    artifacts.push(manifest_name.clone());
    let manifest = Manifest {
        version: VERSION,
        experiment: cfg.experiment,
        config_hash: resolved.hash.clone(),
        spec_hash,
        artifacts: artifacts.clone(),
        notes,
        config: cfg.clone(),
    };
    w.json(manifest_name, &manifest)?;
    Ok(RunSummary {
        status: "ok",
        config_hash: resolved.hash.clone(),
        output: resolved.output.display().to_string(),
        artifacts,
    })
}

fn centralab_sup_note() -> String {
    "constants are maxima over the sampled stream and bound the true suprema from below".into()
}

fn row(dim: usize, kind: &str, report: &EstimateReport, samples: usize) -> GrowthRow {
    GrowthRow {
        dim,
        kind: kind.to_string(),
        value: report.value,
        samples,
        seed: report.seed,
    }
}

fn fixed_hash(family: &SpecFamily) -> Result<Option<String>, Failure> {
    match family {
        SpecFamily::Fixed { spec } => Ok(Some(spec.hash().map_err(numeric_failure)?)),
        _ => Ok(None),
    }
}

/// Finds the first failing sample of a constant estimate, writes it out for
/// replay and returns the error report pointing at it.
#[allow(clippy::too_many_arguments)]
fn record_failure(
    w: &mut Writer<'_>,
    artifact: &mut Artifact,
    sweep: &SweepParams,
    dim: usize,
    map: &Centralizer,
    kind: EstimateKind,
    count: usize,
    error: centralab::LabError,
) -> Failure {
    let sampler = sweep.sampler(dim);
    let mut failure = Failure::numeric(format!("{kind} at dimension {dim}: {error}"));
    for index in 0..count as u64 {
        let Ok(inputs) = draw_inputs(&sampler, kind, index) else {
            continue;
        };
        let message = match defining_ratio(map, kind, &inputs, sweep.p, sweep.q) {
            Ok(r) if r.is_nan() => "ratio is NaN".to_string(),
            Ok(_) => continue,
            Err(e) => e.to_string(),
        };
        artifact.failure = Some(FailureRecord {
            dim,
            spec: map.spec.clone(),
            numeric: map.cfg,
            p: sweep.p,
            q: sweep.q,
            kind,
            seed: sweep.seed,
            index,
            inputs,
            error: message,
        });
        let name = w.name("failure", "json");
        if let Ok(path) = w.json(name, &*artifact) {
            failure.failing_sample = Some(path.display().to_string());
        }
        break;
    }
    failure
}
