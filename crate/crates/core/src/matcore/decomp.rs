use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::lapack_ffi;
use super::mat::{Mat, Vector, C64};
use super::pindex::PIndex;
use crate::error::{LabError, Result};

/// Coordinates of a singular vector smaller than this are treated as zero
/// when fixing the phase of a Schmidt pair.
const PHASE_FLOOR: f64 = 1e-8;

/// The Gram backend squares singular values, so anything below
/// `sqrt(eps) * s_1` is indistinguishable from rounding.
const GRAM_FLOOR: f64 = 1e-7;



#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Singular values `<= zero_threshold * s_1` are dropped.
    pub zero_threshold: f64,
    /// Relative reconstruction tolerance.
    pub reconstruction: f64,
    /// Absolute slack granted to measured inequalities.
    pub slack: f64,
    /// Relative gap `(s_n - s_{n+1}) / s_1` below which Schmidt frames are
    /// considered ambiguous.
    pub gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_threshold: 1e-12,
            reconstruction: 1e-10,
            slack: 1e-8,
            gap: 1e-6,
        }
    }
}

/// How the singular system is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SchmidtBackend {
    /// Golub–Kahan SVD of `f` itself.
    #[default]
    Svd,
    /// Hermitian eigendecomposition of `fᴴf`, with `y_n = f x_n / s_n`.
    /// Less accurate for small singular values; used as an independent
    /// second route.
    Gram,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct NumericConfig {
    pub tol: Tolerances,
    pub backend: SchmidtBackend,
}

/// Prescribed Schmidt expansion `f = Σ s_n x_n ⊗ y_n`, where `x ⊗ y` is the
/// rank-one map `h ↦ ⟨h|x⟩ y` (the matrix `y xᴴ`).
///
/// `x` holds the initial vectors (in the domain, length `cols`), `y` the
/// final vectors (in the range, length `rows`). Each pair is rotated so that
/// the first nonvanishing coordinate of `x_n` is real positive, which makes
/// the expansion of `λf` equal to `Σ |λ| s_n x_n ⊗ (σ y_n)` for `λ = σ|λ|`.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    pub values: Vec<f64>,
    pub x: Vec<Vector>,
    pub y: Vec<Vector>,
    pub rows: usize,
    pub cols: usize,
    /// Set when two retained singular values are closer than the gap
    /// tolerance; the frames are then not determined by `f`.
    pub frame_ambiguous: bool,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `Σ c_n x_n ⊗ y_n` for arbitrary coefficients.
    pub fn expand(&self, coeffs: &[C64]) -> Mat {
        let mut out = DMatrix::<C64>::zeros(self.rows, self.cols);
        for ((c, x), y) in coeffs.iter().zip(&self.x).zip(&self.y) {
            out += (y * x.adjoint()) * *c;
        }
        Mat::wrap(out)
    }

    pub fn reconstruct(&self) -> Mat {
        let coeffs: Vec<C64> = self.values.iter().map(|&s| C64::new(s, 0.0)).collect();
        self.expand(&coeffs)
    }

    /// `Σ w_n x_n ⊗ x_n`, a Hermitian matrix on the domain.
    pub fn initial_calculus(&self, weights: impl Fn(f64) -> f64) -> Mat {
        let mut out = DMatrix::<C64>::zeros(self.cols, self.cols);
        for (&s, x) in self.values.iter().zip(&self.x) {
            out += (x * x.adjoint()) * C64::new(weights(s), 0.0);
        }
        Mat::wrap(out)
    }

    /// `Σ x_n ⊗ y_n`, the phase.
    pub fn partial_isometry(&self) -> Mat {
        self.expand(&vec![C64::new(1.0, 0.0); self.rank()])
    }

    pub fn schatten_norm(&self, p: PIndex) -> f64 {
        lp_of_moduli(&self.values, p)
    }
}

/// Polar decomposition `f = phase · modulus`.
#[derive(Clone, Debug)]
pub struct PolarForm {
    pub phase: Mat,
    pub modulus: Mat,
}

/// `h = (fᴴf + gᴴg)^{1/2}` with `f = a h`, `g = b h` and contractive `a, b`.
#[derive(Clone, Debug)]
pub struct JointRoot {
    pub h: Mat,
    pub a: Mat,
    pub b: Mat,
}

/// `ℓ^p` quasinorm of a list of moduli, summed in increasing order so the
/// result does not depend on the order of the input.
pub(crate) fn lp_of_moduli(moduli: &[f64], p: PIndex) -> f64 {
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    if !p.is_finite() {
        return top;
    }
    let p = p.value();
    let mut scaled: Vec<f64> = moduli.iter().map(|m| m / top).collect();
    scaled.sort_by(f64::total_cmp);
    let sum: f64 = scaled.iter().map(|m| m.powf(p)).sum();
    top * sum.powf(1.0 / p)
}

fn no_convergence(f: &Mat) -> LabError {
    LabError::NoConvergence {
        rows: f.rows(),
        cols: f.cols(),
        frobenius: f.frobenius(),
        max_abs: f.max_abs(),
    }
}

fn check_finite(f: &Mat) -> Result<()> {
    if f
        .as_matrix()
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(LabError::Input("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Singular triples `(s, x, y)` of `m`.
fn svd_triples(m: &DMatrix<C64>) -> Option<Vec<(f64, Vector, Vector)>> {
    let (s, u, vt) = lapack_ffi::svd(m)?;
    Some(
        s.iter()
            .enumerate()
            .map(|(j, &sv)| (sv, vt.row(j).adjoint(), u.column(j).into_owned()))
            .collect(),
    )
}

fn fix_phase(x: &mut Vector, y: &mut Vector) {
    if let Some(lead) = x.iter().copied().find(|z| z.norm() > PHASE_FLOOR) {
        let c = lead.conj() / lead.norm();
        *x *= c;
        *y *= c;
    }
}

impl NumericConfig {
    /// Raw singular triples `(s, x, y)` sorted nonincreasing, before
    /// truncation.
    fn singular_triples(&self, f: &Mat) -> Result<Vec<(f64, Vector, Vector)>> {
        check_finite(f)?;
        let m = f.as_matrix();
        let mut triples = match self.backend {
            SchmidtBackend::Svd => svd_triples(m).ok_or_else(|| no_convergence(f))?,
            SchmidtBackend::Gram => {
                let gram = m.adjoint() * m;
                let (values, vectors) =
                    lapack_ffi::hermitian_eigen(&gram).ok_or_else(|| no_convergence(f))?;
                let top = values.iter().copied().fold(0.0, f64::max).max(0.0);
                let floor = GRAM_FLOOR * top.sqrt();
                let mut out = Vec::new();
                for k in 0..values.len() {
                    let s = values[k].max(0.0).sqrt();
                    if s <= floor || s == 0.0 {
                        continue;
                    }
                    let x: Vector = vectors.column(k).into_owned();
                    let y: Vector = (m * &x) / C64::new(s, 0.0);
                    out.push((s, x, y));
                }
                out
            }
        };
        triples.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(triples)
    }

    /// Singular values, nonincreasing, after zero-threshold truncation.
    pub fn singular_values(&self, f: &Mat) -> Result<Vec<f64>> {
        Ok(self.schmidt(f)?.values)
    }

    pub fn schmidt(&self, f: &Mat) -> Result<SchmidtForm> {
        let triples = self.singular_triples(f)?;
        let top = triples.first().map_or(0.0, |t| t.0);
        let cut = self.tol.zero_threshold * top;
        let mut values = Vec::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (s, mut x, mut y) in triples {
            if s <= cut || s == 0.0 {
                continue;
            }
            fix_phase(&mut x, &mut y);
            values.push(s);
            xs.push(x);
            ys.push(y);
        }
        let frame_ambiguous = values
            .windows(2)
            .any(|w| w[0] - w[1] <= self.tol.gap * top);
        Ok(SchmidtForm {
            values,
            x: xs,
            y: ys,
            rows: f.rows(),
            cols: f.cols(),
            frame_ambiguous,
        })
    }

    pub fn schatten_norm(&self, f: &Mat, p: PIndex) -> Result<f64> {
        Ok(self.schmidt(f)?.schatten_norm(p))
    }

    pub fn polar(&self, f: &Mat) -> Result<PolarForm> {
        let sf = self.schmidt(f)?;
        Ok(PolarForm {
            phase: sf.partial_isometry(),
            modulus: sf.initial_calculus(|s| s),
        })
    }

    /// `|f|^α`. For `α = 0` this is the support projection of `|f|`.
    pub fn modulus_power(&self, f: &Mat, alpha: f64) -> Result<Mat> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(LabError::Input(format!("exponent {alpha} must be >= 0")));
        }
        let sf = self.schmidt(f)?;
        Ok(sf.initial_calculus(|s| if alpha == 0.0 { 1.0 } else { s.powf(alpha) }))
    }

    /// Sharp Hölder factorization `h = f g` with `‖h‖_q = ‖f‖_p ‖g‖_s`,
    /// where `1/q = 1/p + 1/s`: `f = u|h|^{q/p}`, `g = |h|^{q/s}`.
    pub fn holder_factor(&self, h: &Mat, p: PIndex, s: PIndex) -> Result<(Mat, Mat)> {
        let q = p.harmonic_sum(s)?;
        let q = q.finite("holder_factor")?;
        let sf = self.schmidt(h)?;
        if sf.rank() == 0 {
            return Ok((Mat::zeros(h.rows(), h.cols()), Mat::zeros(h.cols(), h.cols())));
        }
        let left_exp = q * p.recip();
        let right_exp = q * s.recip();
        let coeffs: Vec<C64> = sf
            .values
            .iter()
            .map(|&v| C64::new(v.powf(left_exp), 0.0))
            .collect();
        let f = sf.expand(&coeffs);
        let g = sf.initial_calculus(|v| v.powf(right_exp));
        Ok((f, g))
    }

    /// Joint square root of `fᴴf + gᴴg`.
    ///
    /// Computed from the SVD of the stacked matrix `[f; g] = W Σ Vᴴ`:
    /// `h = V Σ Vᴴ` and `[a; b] = W Vᴴ` on the retained singular directions,
    /// so `a` and `b` vanish on `ker h` and `‖[a; b]‖_∞ ≤ 1` by construction.
    pub fn joint_root(&self, f: &Mat, g: &Mat) -> Result<JointRoot> {
        f.same_shape(g)?;
        let (m, n) = f.shape();
        let mut stacked = DMatrix::<C64>::zeros(2 * m, n);
        stacked.rows_mut(0, m).copy_from(f.as_matrix());
        stacked.rows_mut(m, m).copy_from(g.as_matrix());
        let sf = self.schmidt(&Mat::wrap(stacked))?;
        let h = sf.initial_calculus(|s| s);
        let mut a = DMatrix::<C64>::zeros(m, n);
        let mut b = DMatrix::<C64>::zeros(m, n);
        for (x, y) in sf.x.iter().zip(&sf.y) {
            let top: Vector = y.rows(0, m).into_owned();
            let bottom: Vector = y.rows(m, m).into_owned();
            a += &top * x.adjoint();
            b += &bottom * x.adjoint();
        }
        Ok(JointRoot {
            h,
            a: Mat::wrap(a),
            b: Mat::wrap(b),
        })
    }
}

pub fn schmidt(f: &Mat) -> Result<SchmidtForm> {
    NumericConfig::default().schmidt(f)
}

/// `(Σ s_n^p)^{1/p}`, or `s_1` for `p = ∞`.
pub fn schatten_norm(f: &Mat, p: PIndex) -> Result<f64> {
    NumericConfig::default().schatten_norm(f, p)
}

pub fn op_norm(f: &Mat) -> Result<f64> {
    schatten_norm(f, PIndex::INF)
}

pub fn polar(f: &Mat) -> Result<PolarForm> {
    NumericConfig::default().polar(f)
}

pub fn modulus_power(f: &Mat, alpha: f64) -> Result<Mat> {
    NumericConfig::default().modulus_power(f, alpha)
}

pub fn holder_factor(h: &Mat, p: PIndex, s: PIndex) -> Result<(Mat, Mat)> {
    NumericConfig::default().holder_factor(h, p, s)
}

pub fn joint_root(f: &Mat, g: &Mat) -> Result<JointRoot> {
    NumericConfig::default().joint_root(f, g)
}

/// The rank-one operator `x ⊗ y : h ↦ ⟨h|x⟩ y`, i.e. the matrix `y xᴴ`.
pub fn rank_one(x: &Vector, y: &Vector) -> Result<Mat> {
    if x.len() != y.len() {
        return Err(LabError::Dimension(format!(
            "rank_one of vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Mat::from_matrix(y * x.adjoint())
}

pub fn trace(f: &Mat) -> Result<C64> {
    if !f.is_square() {
        return Err(LabError::Input(format!(
            "trace of a non-square {}x{} matrix",
            f.rows(),
            f.cols()
        )));
    }
    Ok(f.as_matrix().trace())
}
