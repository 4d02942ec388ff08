//! Centralizer constructions as closed, serializable descriptions.
//!
//! A [`CentralizerSpec`] names a homogeneous map on matrices built from the
//! Kalton–Peck bicentralizer, lifts of quasilinear maps on `ℂⁿ`, the lowering
//! transform `Ψ ↦ Ψ_(s)`, localization, one-sided multiplications, scalar
//! multiples and sums. [`Centralizer`] pairs a spec with the numeric
//! configuration used to evaluate it.

mod ops;
mod quasilinear;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::matcore::{Mat, NumericConfig, PIndex, Vector, C64};
use crate::seqcore::{kp_phi, LipschitzFn, Seq};

pub use ops::{
    kp_bicentralizer, lift_quasilinear, localization_defect, localize, lower_s, m1_constant,
    rank_one_expansion_defect, represent_functional, spatial_part, trace_functional, SpatialPart,
};
pub use quasilinear::QuasilinearMap;

/// Closed description of a homogeneous map on matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CentralizerSpec {
    /// `f ↦ Σ s_n ϕ(-log(s_n/‖f‖_p), log n) x_n ⊗ y_n`.
    KpBicentralizer { phi: LipschitzFn, p: PIndex },
    /// `u ↦ Σ s_k x_k ⊗ φ(y_k)`. The right-centralizer guarantee needs
    /// `0 < p < 2`; other indices evaluate but are flagged.
    LiftedQuasilinear {
        map: QuasilinearMap,
        p: PIndex,
        q: PIndex,
    },
    /// `h ↦ Ψ(u|h|^{p₁/p₂}) |h|^{p₁/s}` with `1/p₁ = 1/p₂ + 1/s`.
    Lowered {
        inner: Box<CentralizerSpec>,
        p2: PIndex,
        s: PIndex,
    },
    /// `f ↦ Φ(fe)` for an orthogonal projection `e`.
    Localized {
        inner: Box<CentralizerSpec>,
        projection: Mat,
    },
    /// `f ↦ fg`, a morphism of left modules.
    RightMultiplication { g: Mat },
    /// `f ↦ Lf`, a morphism of right modules.
    LeftComposition { l: Mat },
    Scaled {
        factor: C64,
        inner: Box<CentralizerSpec>,
    },
    /// The empty sum is the zero map.
    Sum { terms: Vec<CentralizerSpec> },
}

impl CentralizerSpec {
    pub fn zero() -> Self {
        CentralizerSpec::Sum { terms: Vec::new() }
    }

    pub fn kalton_peck(p: PIndex) -> Self {
        CentralizerSpec::KpBicentralizer {
            phi: LipschitzFn::S,
            p,
        }
    }

    pub fn scaled(self, factor: C64) -> Self {
        CentralizerSpec::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn plus(self, other: CentralizerSpec) -> Self {
        match self {
            CentralizerSpec::Sum { mut terms } => {
                terms.push(other);
                CentralizerSpec::Sum { terms }
            }
            first => CentralizerSpec::Sum {
                terms: vec![first, other],
            },
        }
    }

    /// Structural checks that do not depend on the input matrix.
    pub fn validate(&self) -> Result<()> {
        match self {
            CentralizerSpec::KpBicentralizer { phi, p } => {
                p.finite("kp_bicentralizer")?;
                phi.validate()?;
                if !phi.vanishes_at_origin() {
                    return Err(LabError::Input("symbol must vanish at the origin".into()));
                }
                Ok(())
            }
            CentralizerSpec::LiftedQuasilinear { map, .. } => map.validate(),
            CentralizerSpec::Lowered { inner, p2, s } => {
                p2.harmonic_sum(*s)?.finite("lower_s")?;
                inner.validate()
            }
            CentralizerSpec::Localized { inner, projection } => {
                ops::check_projection(projection, NumericConfig::default().tol.slack)?;
                inner.validate()
            }
            CentralizerSpec::RightMultiplication { g } => square("right factor", g),
            CentralizerSpec::LeftComposition { l } => square("left factor", l),
            CentralizerSpec::Scaled { factor, inner } => {
                if !(factor.re.is_finite() && factor.im.is_finite()) {
                    return Err(LabError::Input("non-finite scale factor".into()));
                }
                inner.validate()
            }
            CentralizerSpec::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
        }
    }

    /// Matrix size fixed by this spec, if any of its parts carries a matrix.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            CentralizerSpec::KpBicentralizer { .. } => None,
            CentralizerSpec::LiftedQuasilinear { map, .. } => map_dimension(map),
            CentralizerSpec::Lowered { inner, .. } | CentralizerSpec::Scaled { inner, .. } => {
                inner.dimension()
            }
            CentralizerSpec::Localized { projection, .. } => Some(projection.rows()),
            CentralizerSpec::RightMultiplication { g } => Some(g.rows()),
            CentralizerSpec::LeftComposition { l } => Some(l.rows()),
            CentralizerSpec::Sum { terms } => terms.iter().find_map(|t| t.dimension()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CentralizerSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Hex SHA-256 of the compact JSON document.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_json()?.as_bytes())))
    }
}

fn square(what: &str, m: &Mat) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LabError::Input(format!("{what} must be square")))
    }
}

fn map_dimension(map: &QuasilinearMap) -> Option<usize> {
    match map {
        QuasilinearMap::KpOnH { .. } => None,
        QuasilinearMap::Linear { l } => Some(l.rows()),
        QuasilinearMap::Scaled { inner, .. } => map_dimension(inner),
        QuasilinearMap::Sum { terms } => terms.iter().find_map(map_dimension),
    }
}

/// Anything that maps matrices to matrices.
pub trait MatrixMap: Sync {
    fn apply(&self, f: &Mat) -> Result<Mat>;
}

impl<F> MatrixMap for F
where
    F: Fn(&Mat) -> Result<Mat> + Sync,
{
    fn apply(&self, f: &Mat) -> Result<Mat> {
        self(f)
    }
}

/// Value of a spec together with the caveats collected on the way.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: Mat,
    /// Some Schmidt expansion used had clustered singular values.
    pub frame_ambiguous: bool,
    /// A lift was evaluated at an index outside `0 < p < 2`.
    pub outside_guarantee: bool,
}

#[derive(Default)]
struct Flags {
    frame_ambiguous: bool,
    outside_guarantee: bool,
}

/// A spec bound to the numeric configuration that evaluates it.
#[derive(Clone, Debug, PartialEq)]
pub struct Centralizer {
    pub spec: CentralizerSpec,
    pub cfg: NumericConfig,
}

impl Centralizer {
    pub fn new(spec: CentralizerSpec) -> Self {
        Centralizer {
            spec,
            cfg: NumericConfig::default(),
        }
    }

    pub fn with_config(spec: CentralizerSpec, cfg: NumericConfig) -> Self {
        Centralizer { spec, cfg }
    }

    pub fn evaluate(&self, f: &Mat) -> Result<Evaluation> {
        let mut flags = Flags::default();
        let value = eval(&self.spec, &self.cfg, f, &mut flags)?;
        Ok(Evaluation {
            value,
            frame_ambiguous: flags.frame_ambiguous,
            outside_guarantee: flags.outside_guarantee,
        })
    }
}

impl MatrixMap for Centralizer {
    fn apply(&self, f: &Mat) -> Result<Mat> {
        let mut flags = Flags::default();
        eval(&self.spec, &self.cfg, f, &mut flags)
    }
}

fn eval(spec: &CentralizerSpec, cfg: &NumericConfig, f: &Mat, flags: &mut Flags) -> Result<Mat> {
    match spec {
        CentralizerSpec::KpBicentralizer { phi, p } => {
            let sf = cfg.schmidt(f)?;
            flags.frame_ambiguous |= sf.frame_ambiguous;
            let t = kp_phi(&Seq::from_real(&sf.values), phi, *p)?;
            Ok(sf.expand(&t.0))
        }
        CentralizerSpec::LiftedQuasilinear { map, p, .. } => {
            let sf = cfg.schmidt(f)?;
            flags.frame_ambiguous |= sf.frame_ambiguous;
            flags.outside_guarantee |= p.value() >= 2.0;
            let mut out: Option<nalgebra::DMatrix<C64>> = None;
            for ((&s, x), y) in sf.values.iter().zip(&sf.x).zip(&sf.y) {
                let image: Vector = map.apply(y)? * C64::new(s, 0.0);
                let term = image * x.adjoint();
                match out.as_mut() {
                    Some(acc) if acc.shape() == term.shape() => *acc += term,
                    Some(_) => {
                        return Err(LabError::Dimension("lift images disagree in length".into()))
                    }
                    None => out = Some(term),
                }
            }
            match out {
                Some(m) => Mat::from_matrix(m),
                None => Ok(Mat::zeros(f.rows(), f.cols())),
            }
        }
        CentralizerSpec::Lowered { inner, p2, s } => {
            let p1 = p2.harmonic_sum(*s)?.finite("lower_s")?;
            let sf = cfg.schmidt(f)?;
            flags.frame_ambiguous |= sf.frame_ambiguous;
            let inner_exp = p1 * p2.recip();
            let outer_exp = p1 * s.recip();
            let arg = sf.expand(
                &sf.values
                    .iter()
                    .map(|&v| C64::new(v.powf(inner_exp), 0.0))
                    .collect::<Vec<_>>(),
            );
            let right = sf.initial_calculus(|v| v.powf(outer_exp));
            eval(inner, cfg, &arg, flags)?.compose(&right)
        }
        CentralizerSpec::Localized { inner, projection } => {
            ops::check_projection(projection, cfg.tol.slack)?;
            eval(inner, cfg, &f.compose(projection)?, flags)
        }
        CentralizerSpec::RightMultiplication { g } => f.compose(g),
        CentralizerSpec::LeftComposition { l } => l.compose(f),
        CentralizerSpec::Scaled { factor, inner } => Ok(eval(inner, cfg, f, flags)?.scale(*factor)),
        CentralizerSpec::Sum { terms } => {
            let mut acc = Mat::zeros(f.rows(), f.cols());
            for t in terms {
                let v = eval(t, cfg, f, flags)?;
                acc.same_shape(&v)?;
                acc = acc + v;
            }
            Ok(acc)
        }
    }
}

