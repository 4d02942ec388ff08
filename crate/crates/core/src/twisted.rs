//! Twisted sums `Y ⊕_Φ X` with quasinorm `‖(g, f)‖_Φ = ‖g - Φf‖_Y + ‖f‖_X`,
//! their concavity probes, and splitting residuals across dimensions.
//!
//! `Z₂` at dimension `n` is the twisted sum of `n × 1` matrices under the
//! lift of the Kalton–Peck map on `ℂⁿ`: on a column `y` the lift is `φ(y)`
//! and every Schatten norm is the Euclidean norm.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::centralizers::{Centralizer, CentralizerSpec, MatrixMap, QuasilinearMap};
use crate::error::{LabError, Result};
use crate::matcore::{Mat, NumericConfig, PIndex, C64};
use crate::metrology::{
    check_dims, fit_morphism, fmt_f64, max_over_stream, EstimateKind, EstimateReport, Sampler,
    Side, SpecFamily, SweepParams,
};

/// A point `(g, f)` of a twisted sum; `g` lives in `Y`, `f` in `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedVec {
    pub g: Mat,
    pub f: Mat,
}

impl TwistedVec {
    pub fn new(g: Mat, f: Mat) -> Self {
        TwistedVec { g, f }
    }

    /// `(g, 0)`, the image of the inclusion of `Y`.
    pub fn from_y(g: Mat) -> Self {
        let f = Mat::zeros(g.rows(), g.cols());
        TwistedVec { g, f }
    }

    /// `(Φf, f)`, the canonical lift of `f`.
    pub fn lift(map: &dyn MatrixMap, f: Mat) -> Result<Self> {
        Ok(TwistedVec { g: map.apply(&f)?, f })
    }

    pub fn scale(&self, c: C64) -> Self {
        TwistedVec {
            g: self.g.scale(c),
            f: self.f.scale(c),
        }
    }

    pub fn add(&self, other: &TwistedVec) -> Result<Self> {
        self.g.same_shape(&other.g)?;
        self.f.same_shape(&other.f)?;
        Ok(TwistedVec {
            g: &self.g + &other.g,
            f: &self.f + &other.f,
        })
    }
}

/// `‖g - Φf‖_{p_Y} + ‖f‖_{p_X}` for any matrix map.
pub fn twisted_quasinorm_with(
    v: &TwistedVec,
    map: &dyn MatrixMap,
    p_y: PIndex,
    p_x: PIndex,
) -> Result<f64> {
    let image = map.apply(&v.f)?;
    if image.shape() != v.g.shape() {
        return Err(LabError::Dimension(format!(
            "Y slot is {}x{} but the map sends X into {}x{}",
            v.g.rows(),
            v.g.cols(),
            image.rows(),
            image.cols()
        )));
    }
    let cfg = NumericConfig::default();
    Ok(cfg.schatten_norm(&(&v.g - &image), p_y)? + cfg.schatten_norm(&v.f, p_x)?)
}

pub fn twisted_quasinorm(
    v: &TwistedVec,
    spec: &CentralizerSpec,
    p_y: PIndex,
    p_x: PIndex,
) -> Result<f64> {
    twisted_quasinorm_with(v, &Centralizer::new(spec.clone()), p_y, p_x)
}

/// The `Z₂` spec on columns: the lift of the Kalton–Peck map at `p = 2`.
pub fn z2_spec() -> CentralizerSpec {
    CentralizerSpec::LiftedQuasilinear {
        map: QuasilinearMap::kalton_peck(),
        p: PIndex::TWO,
        q: PIndex::TWO,
    }
}

/// `û = Σ s_k x_k ⊗ (φ(y_k), y_k)` as a `2n × n` matrix whose columns are
/// `û(e_j)` stacked as `(g, f)`.
pub fn lifted_operator(map: &QuasilinearMap, u: &Mat) -> Result<Mat> {
    let sf = NumericConfig::default().schmidt(u)?;
    let n = u.rows();
    let mut out = Mat::zeros(2 * n, u.cols());
    for ((&s, x), y) in sf.values.iter().zip(&sf.x).zip(&sf.y) {
        let top = map.apply(y)?;
        if top.len() != n {
            return Err(LabError::Dimension("quasilinear map changes length".into()));
        }
        let mut stacked = crate::matcore::Vector::zeros(2 * n);
        stacked.rows_mut(0, n).copy_from(&top);
        stacked.rows_mut(n, n).copy_from(y);
        let term = Mat::from_matrix((stacked * C64::new(s, 0.0)) * x.adjoint())?;
        out = out + term;
    }
    Ok(out)
}

/// Max over samples of `‖u + v‖_Φ / (‖u‖_Φ + ‖v‖_Φ)` with `u = (Φf₁ + t₁h₁, f₁)`
/// and `v = (Φf₂ + t₂h₂, t f₂)`, `f_i` from the sampler and `h_i` from the
/// same family normalized in `S^{p_Y}`.
pub fn quasinorm_modulus_probe(
    spec: &CentralizerSpec,
    p_y: PIndex,
    p_x: PIndex,
    sampler: &Sampler,
    count: usize,
) -> Result<EstimateReport> {
    quasinorm_modulus_probe_with(&Centralizer::new(spec.clone()), p_y, p_x, sampler, count)
}

pub fn quasinorm_modulus_probe_with(
    map: &dyn MatrixMap,
    p_y: PIndex,
    p_x: PIndex,
    sampler: &Sampler,
    count: usize,
) -> Result<EstimateReport> {
    if count < 2 {
        return Err(LabError::Input("the concavity probe needs at least 2 samples".into()));
    }
    sampler.validate()?;
    let x_sampler = sampler.clone().with_p(p_x);
    let y_sampler = sampler.clone().with_p(p_y);
    let mut report = max_over_stream(EstimateKind::Modulus, count, sampler.seed, |i| {
        let mut rng = x_sampler.rng(i);
        let f1 = x_sampler.draw_unit(&mut rng)?;
        let scale = 1.0 - rng.random::<f64>();
        let f2 = x_sampler.draw_unit(&mut rng)?.scale_real(scale);
        let t1 = rng.random::<f64>();
        let t2 = rng.random::<f64>();
        let h1 = y_sampler.draw_unit(&mut rng)?;
        let h2 = y_sampler.draw_unit(&mut rng)?;
        let u = TwistedVec::new(map.apply(&f1)? + h1.scale_real(t1), f1);
        let v = TwistedVec::new(map.apply(&f2)? + h2.scale_real(t2), f2);
        let r = modulus_ratio(map, &u, &v, p_y, p_x)?;
        Ok((r, vec![u.g, u.f, v.g, v.f]))
    })?;
    report.note = format!(
        "{}; concavity ratio |u+v| / (|u| + |v|)",
        crate::metrology::SUP_NOTE
    );
    Ok(report)
}

/// `‖u + v‖_Φ / (‖u‖_Φ + ‖v‖_Φ)`.
pub fn modulus_ratio(
    map: &dyn MatrixMap,
    u: &TwistedVec,
    v: &TwistedVec,
    p_y: PIndex,
    p_x: PIndex,
) -> Result<f64> {
    let num = twisted_quasinorm_with(&u.add(v)?, map, p_y, p_x)?;
    let den = twisted_quasinorm_with(u, map, p_y, p_x)? + twisted_quasinorm_with(v, map, p_y, p_x)?;
    Ok(if den == 0.0 { 0.0 } else { num / den })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitRow {
    pub dim: usize,
    pub residual: f64,
    pub seed: u64,
    pub spec_hash: String,
}

/// Per dimension: fit the closest morphism `M` and report
/// `max_i ‖(M f_i, f_i)‖_Φ / ‖f_i‖_p - 1`, the distance of the linear
/// section `f ↦ (Mf, f)` from being isometric in the twisted quasinorm.
pub fn splitting_distance(
    family: &SpecFamily,
    side: Side,
    dims: &[usize],
    params: &SweepParams,
) -> Result<Vec<SplitRow>> {
    check_dims(dims)?;
    let cfg = NumericConfig::default();
    let mut rows = Vec::with_capacity(dims.len());
    for &n in dims {
        let spec = family.at(n)?;
        let map = params.centralizer(spec.clone());
        let samples = params.sampler(n).samples(params.count(n))?;
        let fit = fit_morphism(&map, side, &samples, params.p, params.q)?;
        let mut residual: f64 = 0.0;
        for f in &samples {
            let section = TwistedVec::new(fit.apply(f)?, f.clone());
            let norm = twisted_quasinorm_with(&section, &map, params.q, params.p)?;
            let base = cfg.schatten_norm(f, params.p)?;
            if base > 0.0 {
                residual = residual.max(norm / base - 1.0);
            }
        }
        rows.push(SplitRow {
            dim: n,
            residual,
            seed: params.seed,
            spec_hash: spec.hash()?,
        });
    }
    Ok(rows)
}

pub fn splitting_csv(rows: &[SplitRow]) -> String {
    let mut out = String::from("dim,residual,seed,spec-hash\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.dim,
            fmt_f64(r.residual),
            r.seed,
            r.spec_hash
        ));
    }
    out
}
