use std::fmt;
use std::path::{Path, PathBuf};

use centralab::centralizers::CentralizerSpec;
use centralab::matcore::{NumericConfig, SchmidtBackend, Tolerances};
use centralab::metrology::{check_dims, GammaTarget, GrowthExperiment, Side, SpecFamily, SweepParams};
use centralab::{EstimateKind, Mat, PIndex, SamplerTag};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Constants,
    Growth,
    Gamma,
    Splitting,
    Fit,
    Probe,
}

impl Experiment {
    pub const ALL: [(Experiment, &'static str); 6] = [
        (Experiment::Constants, "max-over-samples Q, L, R, B per dimension"),
        (Experiment::Growth, "one named construction measured across dimensions"),
        (Experiment::Gamma, "Monte Carlo gamma-summing norm of an operator table"),
        (Experiment::Splitting, "residual of the best linear section of the twisted sum"),
        (Experiment::Fit, "least-squares morphism fit and its worst residual"),
        (Experiment::Probe, "sampled concavity modulus of the twisted quasinorm"),
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::Growth => "growth",
            Experiment::Gamma => "gamma",
            Experiment::Splitting => "splitting",
            Experiment::Fit => "fit",
            Experiment::Probe => "probe",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A spec given inline or as a path to a JSON file, relative to the config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecRef {
    Path(String),
    Inline(CentralizerSpec),
}

fn one() -> PIndex {
    PIndex::ONE
}

fn default_samples() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecRef>,
    /// Dimension-dependent spec recipe, used instead of `spec`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<SpecFamily>,
    #[serde(default)]
    pub dims: Vec<usize>,
    /// Domain index; for `probe` the index of the `X` slot.
    #[serde(default = "one")]
    pub p: PIndex,
    /// Target index, `p` when absent; for `probe` the index of the `Y` slot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<PIndex>,
    /// When present the centralizer spec is lowered: it runs as `Ψ_(s)` with `p₂ = p`
    /// and inputs are drawn in `S^{p₁}`, `1/p₁ = 1/p + 1/s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<PIndex>,
    pub seed: u64,
    #[serde(default)]
    pub tag: SamplerTag,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub per_dim: bool,
    #[serde(default)]
    pub gapped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinds: Option<Vec<EstimateKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    /// Named construction for `growth`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<GrowthExperiment>,
    /// Operator table for `gamma`; when absent, `diag(1,…,1)` of size `k`
    /// for every `k` in `dims`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Mat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GammaTarget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<SchmidtBackend>,
}

/// Command-line overrides of config fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub output: Option<String>,
}

pub const OUTPUT_ENV: &str = "CENTRALAB_OUT";
const DEFAULT_OUTPUT: &str = "centralab-out";

/// A config with its spec inlined and every default made explicit.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub output: PathBuf,
    pub hash: String,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
        let raw: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        if let Some(inline @ serde_json::Value::Object(_)) = raw.get("spec") {
            // the untagged reference hides the inline spec's own parse error
            CentralizerSpec::deserialize(inline)
                .map_err(|e| Failure::config(format!("{}: spec: {e}", path.display())))?;
        }
        let mut config: ExperimentConfig = serde_json::from_value(raw)
            .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        if let Some(SpecRef::Path(rel)) = &config.spec {
            let spec_path = path.parent().unwrap_or(Path::new(".")).join(rel);
            let text = std::fs::read_to_string(&spec_path)
                .map_err(|e| Failure::io(format!("cannot read spec {}: {e}", spec_path.display())))?;
            let spec = CentralizerSpec::from_json(&text)
                .map_err(|e| Failure::config(format!("spec {}: {e}", spec_path.display())))?;
            config.spec = Some(SpecRef::Inline(spec));
        }
        Ok(config)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(samples) = o.samples {
            self.samples = samples;
        }
        if let Some(dims) = &o.dims {
            self.dims = dims.clone();
        }
        if let Some(output) = &o.output {
            self.output = Some(output.clone());
        }
        self
    }

    pub fn q(&self) -> PIndex {
        self.q.unwrap_or(self.p)
    }

    /// Index the inputs are drawn from: `p`, or `p₁` for lowered specs.
    pub fn input_index(&self) -> Result<PIndex, Failure> {
        match self.s {
            Some(s) => self.p.harmonic_sum(s).map_err(Failure::from_lab_config),
            None => Ok(self.p),
        }
    }

    pub fn numeric(&self) -> NumericConfig {
        NumericConfig {
            tol: self.tolerances.unwrap_or_default(),
            backend: self.backend.unwrap_or_default(),
        }
    }

    fn base_spec(&self) -> Option<&CentralizerSpec> {
        match &self.spec {
            Some(SpecRef::Inline(spec)) => Some(spec),
            _ => None,
        }
    }

    fn lowered(&self, spec: CentralizerSpec) -> CentralizerSpec {
        match self.s {
            Some(s) => CentralizerSpec::Lowered {
                inner: Box::new(spec),
                p2: self.p,
                s,
            },
            None => spec,
        }
    }

    /// Spec recipe for the run, with lowering applied.
    pub fn family(&self) -> Result<SpecFamily, Failure> {
        match (&self.family, self.base_spec()) {
            (Some(_), Some(_)) => Err(Failure::config("give either spec or family, not both")),
            (Some(family), None) => {
                if self.s.is_some() {
                    return Err(Failure::config("s applies to a fixed spec only"));
                }
                Ok(family.clone())
            }
            (None, Some(spec)) => Ok(SpecFamily::Fixed {
                spec: self.lowered(spec.clone()),
            }),
            (None, None) => Err(Failure::config(format!(
                "experiment {} needs a spec or a family",
                self.experiment
            ))),
        }
    }

    pub fn sweep(&self) -> Result<SweepParams, Failure> {
        Ok(SweepParams {
            seed: self.seed,
            p: self.input_index()?,
            q: self.q(),
            tag: self.tag,
            samples: self.samples,
            per_dim: self.per_dim,
            gapped: self.gapped,
            numeric: self.numeric(),
        })
    }

    pub fn kinds(&self) -> Vec<EstimateKind> {
        self.kinds.clone().unwrap_or_else(|| {
            vec![EstimateKind::Q, EstimateKind::L, EstimateKind::R, EstimateKind::B]
        })
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if self.samples == 0 {
            return Err(Failure::config("samples must be at least 1"));
        }
        self.input_index()?;
        if let Some(t) = &self.tolerances {
            let all = [t.zero_threshold, t.reconstruction, t.slack, t.gap];
            if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Failure::config("tolerances must be finite and nonnegative"));
            }
        }
        if let Some(spec) = self.base_spec() {
            spec.validate().map_err(Failure::from_lab_config)?;
        }
        let needs_dims = !(self.experiment == Experiment::Gamma && self.columns.is_some());
        if needs_dims {
            check_dims(&self.dims).map_err(Failure::from_lab_config)?;
        }
        match self.experiment {
            Experiment::Constants => {
                self.family()?;
                if let Some(bad) = self.kinds().iter().find(|k| !k.is_centralizer_constant()) {
                    return Err(Failure::config(format!(
                        "kind {bad} is not a centralizer constant"
                    )));
                }
            }
            Experiment::Growth => {
                if self.construction.is_none() {
                    self.family()?;
                    if self.kinds().len() != 1 {
                        return Err(Failure::config(
                            "growth without a construction takes exactly one kind",
                        ));
                    }
                }
            }
            Experiment::Gamma => {
                if self.samples < 2 {
                    return Err(Failure::config("gamma needs at least 2 samples"));
                }
                let twisted = matches!(self.target, Some(GammaTarget::Twisted { .. }));
                if twisted && self.columns.is_none() && self.dims.iter().any(|k| k % 2 != 0) {
                    return Err(Failure::config(
                        "a twisted target stacks (g, f), so every dimension must be even",
                    ));
                }
            }
            Experiment::Splitting | Experiment::Fit => {
                self.family()?;
            }
            Experiment::Probe => {
                self.family()?;
                if self.samples < 2 {
                    return Err(Failure::config("probe needs at least 2 samples"));
                }
            }
        }
        Ok(())
    }

    /// Validates and fixes the output directory and the config hash.
    ///
    /// The hash covers everything except `output`, so the same experiment
    /// written to two places carries the same hash.
    pub fn resolve(self) -> Result<Resolved, Failure> {
        self.validate()?;
        let output = PathBuf::from(
            self.output
                .clone()
                .or_else(|| std::env::var(OUTPUT_ENV).ok().filter(|s| !s.is_empty()))
                .unwrap_or_else(|| DEFAULT_OUTPUT.to_string()),
        );
        let mut hashed = self.clone();
        hashed.output = None;
        let text = serde_json::to_string(&hashed)
            .map_err(|e| Failure::config(format!("config does not serialize: {e}")))?;
        let hash = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(Resolved {
            config: hashed,
            output,
            hash,
        })
    }
}
