use crate::error::{LabError, Result};
use crate::matcore::{basis_vector, rank_one, trace, Mat, NumericConfig, PIndex, Vector, C64};
use crate::seqcore::LipschitzFn;

use super::{Centralizer, CentralizerSpec, MatrixMap, QuasilinearMap};

/// Kalton–Peck bicentralizer on `S^p` evaluated on the prescribed expansion.
pub fn kp_bicentralizer(f: &Mat, phi: &LipschitzFn, p: PIndex) -> Result<Mat> {
    Centralizer::new(CentralizerSpec::KpBicentralizer {
        phi: phi.clone(),
        p,
    })
    .apply(f)
}

/// `φ̃(u) = Σ s_k x_k ⊗ φ(y_k)`.
pub fn lift_quasilinear(map: &QuasilinearMap, u: &Mat, p: PIndex) -> Result<Mat> {
    Centralizer::new(CentralizerSpec::LiftedQuasilinear {
        map: map.clone(),
        p,
        q: p,
    })
    .apply(u)
}

/// `Ψ_(s)(h) = Ψ(u|h|^{p₁/p₂}) |h|^{p₁/s}` where `u` is the phase of `h`.
pub fn lower_s(spec: &CentralizerSpec, p2: PIndex, s: PIndex, h: &Mat) -> Result<Mat> {
    Centralizer::new(CentralizerSpec::Lowered {
        inner: Box::new(spec.clone()),
        p2,
        s,
    })
    .apply(h)
}

/// `φ_η(y)` read off from `Φ(η ⊗ y) = η ⊗ φ_η(y)`.
#[derive(Clone, Debug)]
pub struct SpatialPart {
    pub value: Vector,
    /// `‖Φ(η ⊗ y)(1 - η ⊗ η)‖_F`, the part of the image not of the form
    /// `η ⊗ z`.
    pub residual: f64,
    pub eta: Vector,
    /// Residual above the configured slack relative to `‖Φ(η ⊗ y)‖_F`.
    pub warning: bool,
}

/// Spatial part of a centralizer at `η` (default `e₁`).
pub fn spatial_part(
    spec: &CentralizerSpec,
    eta: Option<&Vector>,
    y: &Vector,
) -> Result<SpatialPart> {
    let n = y.len();
    let eta = match eta {
        Some(e) => {
            let norm = e.norm();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(LabError::Input(format!("eta has norm {norm}, expected 1")));
            }
            e.clone()
        }
        None => basis_vector(n, 0),
    };
    let image = Centralizer::new(spec.clone()).apply(&rank_one(&eta, y)?)?;
    if image.cols() != eta.len() {
        return Err(LabError::Dimension("image does not act on the eta slot".into()));
    }
    let value = image.apply(&eta);
    let proj = Mat::identity(n) - rank_one(&eta, &eta)?;
    let residual = image.compose(&proj)?.frobenius();
    let slack = NumericConfig::default().tol.slack;
    Ok(SpatialPart {
        value,
        residual,
        eta,
        warning: residual > slack * (1.0 + image.frobenius()),
    })
}

/// `tr(u |f|^{1/2} Φ(|f|^{1/2}))` with `u` the phase of `f`.
pub fn trace_functional(spec: &CentralizerSpec, f: &Mat) -> Result<C64> {
    if !f.is_square() {
        return Err(LabError::Input("trace functional needs a square matrix".into()));
    }
    let cfg = NumericConfig::default();
    let sf = cfg.schmidt(f)?;
    let root = sf.initial_calculus(f64::sqrt);
    let left = sf.partial_isometry().compose(&root)?;
    let image = Centralizer::new(spec.clone()).apply(&root)?;
    trace(&left.compose(&image)?)
}

pub(crate) fn check_projection(e: &Mat, tol: f64) -> Result<()> {
    if !e.is_square() {
        return Err(LabError::Input("projection must be square".into()));
    }
    let scale = 1.0 + e.frobenius();
    let hermitian = (e - &e.adjoint()).frobenius();
    let idempotent = (&(e * e) - e).frobenius();
    if hermitian > tol * scale || idempotent > tol * scale {
        return Err(LabError::Input(format!(
            "not an orthogonal projection (|e - e*| = {hermitian:.3e}, |e^2 - e| = {idempotent:.3e})"
        )));
    }
    Ok(())
}

/// `Φ_e(f) = Φ(fe)`.
pub fn localize(spec: &CentralizerSpec, e: &Mat, f: &Mat) -> Result<Mat> {
    Centralizer::new(CentralizerSpec::Localized {
        inner: Box::new(spec.clone()),
        projection: e.clone(),
    })
    .apply(f)
}

/// `‖Φ(fe) - fΦ(e)‖_q / ‖f‖_p`, the defect that makes `Φ_e` trivial.
pub fn localization_defect(
    spec: &CentralizerSpec,
    e: &Mat,
    f: &Mat,
    p: PIndex,
    q: PIndex,
) -> Result<f64> {
    let cfg = NumericConfig::default();
    let phi = Centralizer::new(spec.clone());
    let lhs = localize(spec, e, f)?;
    let rhs = f.compose(&phi.apply(e)?)?;
    let denom = cfg.schatten_norm(f, p)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(cfg.schatten_norm(&(lhs - rhs), q)? / denom)
}

/// Matrix `L` with `ℓ(f) = tr(Lf)`, read off as `L_ij = ℓ(e_i ⊗ e_j)`.
pub fn represent_functional<F>(n: usize, ell: F) -> Result<Mat>
where
    F: Fn(&Mat) -> Result<C64>,
{
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let probe = rank_one(&basis_vector(n, i), &basis_vector(n, j))?;
            entries.push(ell(&probe)?);
        }
    }
    Mat::new(n, n, entries)
}

/// `‖Φ(f) - Σ s_n Φ(x_n ⊗ y_n)‖_q` over the prescribed expansion of `f`.
pub fn rank_one_expansion_defect(map: &dyn MatrixMap, f: &Mat, q: PIndex) -> Result<f64> {
    let cfg = NumericConfig::default();
    let sf = cfg.schmidt(f)?;
    let mut acc = map.apply(f)?;
    for ((&s, x), y) in sf.values.iter().zip(&sf.x).zip(&sf.y) {
        let term = map.apply(&rank_one(x, y)?)?;
        acc.same_shape(&term)?;
        acc = acc - term.scale_real(s);
    }
    cfg.schatten_norm(&acc, q)
}

/// `(Σ_{k≤terms} (2/k)^{r/p})^{1/p}` with `r = min(1, q)`; multiplied by
/// `Q(Φ)` this bounds the rank-one expansion defect for `p < min(1, q)`.
pub fn m1_constant(p: PIndex, q: PIndex, terms: usize) -> Result<f64> {
    let p = p.finite("m1_constant")?;
    let r = q.value().min(1.0);
    if p >= r {
        return Err(LabError::Index(format!("need p < min(1, q), got p = {p}")));
    }
    let exponent = r / p;
    // smallest terms first
    let sum: f64 = (1..=terms).rev().map(|k| (2.0 / k as f64).powf(exponent)).sum();
    Ok(sum.powf(1.0 / p))
}
