//! Commutative building blocks: finitely supported sequences, rank
//! sequences and the Kalton–Peck maps
//! `x ↦ x · ϕ(log(‖x‖_p / |x|), log r_x)` on `ℓ^p`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};
use crate::matcore::{lp_of_moduli, PIndex, Vector, C64};

/// Finitely supported complex sequence. Serializes as `[[re, im], ...]`.
#[derive(Clone, PartialEq, Default)]
pub struct Seq(pub Vec<C64>);

impl Seq {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LabError::Input("sequence has non-finite entries".into()));
        }
        Ok(Seq(entries))
    }

    pub fn from_real(values: &[f64]) -> Self {
        Seq(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn from_vector(v: &Vector) -> Self {
        Seq(v.iter().copied().collect())
    }

    pub fn to_vector(&self) -> Vector {
        Vector::from_column_slice(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    pub fn scale(&self, c: C64) -> Seq {
        Seq(self.0.iter().map(|z| z * c).collect())
    }

    /// Pointwise product, the `ℓ^∞`-module action.
    pub fn pointwise(&self, other: &Seq) -> Result<Seq> {
        if self.len() != other.len() {
            return Err(LabError::Dimension(format!(
                "pointwise product of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Seq(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect()))
    }

    /// `x ∘ σ`, i.e. entry `i` of the result is `x[perm[i]]`.
    pub fn permute(&self, perm: &[usize]) -> Seq {
        Seq(perm.iter().map(|&i| self.0[i]).collect())
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Serialize for Seq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Seq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Seq::new(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Lipschitz symbol `ϕ : ℝ²₊ → ℂ` with `ϕ(0,0) = 0`.
///
/// Closed set of families so that every construction built on a symbol
/// can be serialized and replayed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum LipschitzFn {
    /// `ϕ(s,t) = s`, the Kalton–Peck symbol.
    S,
    /// `ϕ(s,t) = t`.
    T,
    /// `ϕ(s,t) = min(s, cap)`; bounded, hence trivial.
    ClampedS { cap: f64 },
    /// `ϕ(s,t) = sin s`; bounded.
    SinS,
    /// `ϕ(s,t) = a·s + b·t`.
    Linear { a: C64, b: C64 },
}

impl LipschitzFn {
    /// Built-in symbols by short name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "s" => Some(LipschitzFn::S),
            "t" => Some(LipschitzFn::T),
            "min_s_1" => Some(LipschitzFn::ClampedS { cap: 1.0 }),
            "sin_s" => Some(LipschitzFn::SinS),
            _ => None,
        }
    }

    pub fn builtin_names() -> &'static [(&'static str, &'static str)] {
        &[
            ("s", "phi(s,t) = s, the Kalton-Peck symbol"),
            ("t", "phi(s,t) = t, logarithm of the rank"),
            ("min_s_1", "phi(s,t) = min(s, 1), bounded"),
            ("sin_s", "phi(s,t) = sin(s), bounded"),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LipschitzFn::ClampedS { cap } if !(cap.is_finite() && *cap >= 0.0) => Err(
                LabError::Input(format!("clamp level {cap} must be finite and >= 0")),
            ),
            LipschitzFn::Linear { a, b }
                if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) =>
            {
                Err(LabError::Input("linear symbol has non-finite coefficients".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, s: f64, t: f64) -> C64 {
        match self {
            LipschitzFn::S => C64::new(s, 0.0),
            LipschitzFn::T => C64::new(t, 0.0),
            LipschitzFn::ClampedS { cap } => C64::new(s.min(*cap), 0.0),
            LipschitzFn::SinS => C64::new(s.sin(), 0.0),
            LipschitzFn::Linear { a, b } => a * s + b * t,
        }
    }

    /// Lipschitz constant for the Euclidean metric on `ℝ²`.
    pub fn lipschitz(&self) -> f64 {
        match self {
            LipschitzFn::S | LipschitzFn::T | LipschitzFn::SinS => 1.0,
            LipschitzFn::ClampedS { .. } => 1.0,
            LipschitzFn::Linear { a, b } => (a.norm_sqr() + b.norm_sqr()).sqrt(),
        }
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.eval(0.0, 0.0) == C64::new(0.0, 0.0)
    }

    /// `sup |ϕ|` over `ℝ²₊` when finite.
    pub fn sup_abs(&self) -> Option<f64> {
        match self {
            LipschitzFn::ClampedS { cap } => Some(*cap),
            LipschitzFn::SinS => Some(1.0),
            LipschitzFn::Linear { a, b } if a.norm() == 0.0 && b.norm() == 0.0 => Some(0.0),
            _ => None,
        }
    }
}

/// `r_x(n) = #{k : |x(k)| > |x(n)|, or |x(k)| = |x(n)| and k ≤ n}`, 1-based.
pub fn rank_sequence(x: &Seq) -> Vec<usize> {
    let moduli = x.moduli();
    let mut order: Vec<usize> = (0..x.len()).collect();
    // stable: ties keep index order
    order.sort_by(|&i, &j| moduli[j].total_cmp(&moduli[i]));
    let mut ranks = vec![0; x.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// `(Σ |x_n|^p)^{1/p}`, or `max |x_n|` for `p = ∞`.
pub fn lp_norm(x: &Seq, p: PIndex) -> f64 {
    lp_of_moduli(&x.moduli(), p)
}

/// Kalton–Peck map `x · ϕ(log(‖x‖_p / |x|), log r_x)` for finite `p`.
///
/// Coordinates with `x_n = 0` map to 0, and so does `x = 0`.
pub fn kp_phi(x: &Seq, phi: &LipschitzFn, p: PIndex) -> Result<Seq> {
    let p = PIndex::new(p.finite("kp_phi")?)?;
    let moduli = x.moduli();
    let norm = lp_of_moduli(&moduli, p);
    if norm == 0.0 {
        return Ok(Seq(vec![C64::new(0.0, 0.0); x.len()]));
    }
    let ranks = rank_sequence(x);
    let out = x
        .0
        .iter()
        .zip(&moduli)
        .zip(&ranks)
        .map(|((&z, &m), &r)| {
            if m == 0.0 {
                C64::new(0.0, 0.0)
            } else {
                z * phi.eval((norm / m).ln(), (r as f64).ln())
            }
        })
        .collect();
    Ok(Seq(out))
}
