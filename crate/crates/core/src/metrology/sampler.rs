use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::random::{ginibre, haar_unitary, unit_vector};
use crate::error::{LabError, Result};
use crate::matcore::{Mat, NumericConfig, PIndex, Vector, C64};

const MAX_REDRAWS: usize = 1000;
/// Relative norm below which a draw is rejected before normalization.
const DEGENERATE_NORM: f64 = 1e-12;
/// Minimal relative gap `(s_k - s_{k+1}) / s_1` for gapped draws.
const GAPPED_MIN: f64 = 1e-2;

/// Distribution family of a [`Sampler`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerTag {
    /// `u · diag(s) · v` with Haar unitaries and i.i.d. exponential `s`.
    #[default]
    HaarSpectral,
    /// i.i.d. complex Gaussian entries.
    Ginibre,
    /// `x ⊗ y` with independent uniform unit vectors.
    RankOne,
    /// `x ⊗ y` with `x` uniform and `y` flat with random phases on a random
    /// support whose size is log-uniform in `1..=n`.
    Sparse,
}

impl std::str::FromStr for SamplerTag {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| LabError::Input(format!("unknown sampler tag {s:?}")))
    }
}

/// Seeded source of matrices on the unit sphere of `S^p`.
///
/// Sample `i` is drawn from its own ChaCha stream (`seed`, stream `i`), so
/// any subset of samples can be regenerated independently and in any order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub seed: u64,
    /// Number of rows.
    pub n: usize,
    /// Number of columns, `n` when absent.
    #[serde(default)]
    pub cols: Option<usize>,
    pub p: PIndex,
    #[serde(default)]
    pub tag: SamplerTag,
    /// Redraw until all singular values are separated.
    #[serde(default)]
    pub gapped: bool,
}

impl Sampler {
    pub fn new(seed: u64, n: usize, p: PIndex, tag: SamplerTag) -> Self {
        Sampler {
            seed,
            n,
            cols: None,
            p,
            tag,
            gapped: false,
        }
    }

    pub fn gapped(mut self) -> Self {
        self.gapped = true;
        self
    }

    pub fn with_cols(mut self, cols: usize) -> Self {
        self.cols = Some(cols);
        self
    }

    pub fn with_p(mut self, p: PIndex) -> Self {
        self.p = p;
        self
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n, self.cols.unwrap_or(self.n))
    }

    pub fn validate(&self) -> Result<()> {
        let (r, c) = self.shape();
        if r == 0 || c == 0 {
            return Err(LabError::Input(format!("sampler shape {r}x{c} is empty")));
        }
        Ok(())
    }

    /// Generator for sample `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// One draw from the tagged family, not normalized.
    pub fn draw_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        let (r, c) = self.shape();
        Ok(match self.tag {
            SamplerTag::HaarSpectral => {
                let k = r.min(c);
                let spectrum: Vec<f64> = (0..k)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let u = haar_unitary(rng, r);
                let v = haar_unitary(rng, c);
                let d = Mat::from_fn(r, c, |i, j| {
                    if i == j {
                        C64::new(spectrum[i], 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                });
                u.compose(&d)?.compose(&v)?
            }
            SamplerTag::Ginibre => ginibre(rng, r, c),
            SamplerTag::RankOne => {
                let x = unit_vector(rng, c);
                let y = unit_vector(rng, r);
                Mat::from_matrix(y * x.adjoint())?
            }
            SamplerTag::Sparse => {
                let x = unit_vector(rng, c);
                let y = sparse_flat(rng, r);
                Mat::from_matrix(y * x.adjoint())?
            }
        })
    }

    /// A draw normalized to `‖f‖_p = 1`, redrawn while degenerate (or, for
    /// gapped samplers, while two singular values are close).
    pub fn draw_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mat> {
        let cfg = NumericConfig::default();
        for _ in 0..MAX_REDRAWS {
            let f = self.draw_raw(rng)?;
            let sf = cfg.schmidt(&f)?;
            let top = sf.values.first().copied().unwrap_or(0.0);
            if top <= DEGENERATE_NORM {
                continue;
            }
            if self.gapped {
                let k = self.shape().0.min(self.shape().1);
                let full_rank = sf.rank() == k || matches!(self.tag, SamplerTag::RankOne | SamplerTag::Sparse);
                let separated = sf
                    .values
                    .windows(2)
                    .all(|w| w[0] - w[1] >= GAPPED_MIN * top);
                let bottom = sf.values.last().copied().unwrap_or(0.0);
                if !(full_rank && separated && bottom >= GAPPED_MIN * top) {
                    continue;
                }
            }
            let norm = sf.schatten_norm(self.p);
            return Ok(f.scale_real(1.0 / norm));
        }
        Err(LabError::Input(format!(
            "sampler {:?} produced no admissible draw in {MAX_REDRAWS} attempts",
            self.tag
        )))
    }

    /// Sample `index` of the stream.
    pub fn sample(&self, index: u64) -> Result<Mat> {
        self.draw_unit(&mut self.rng(index))
    }

    pub fn samples(&self, count: usize) -> Result<Vec<Mat>> {
        use rayon::prelude::*;
        (0..count as u64)
            .into_par_iter()
            .map(|i| self.sample(i))
            .collect()
    }
}

fn sparse_flat<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    let u: f64 = rng.random();
    let k = ((n as f64 + 1.0).powf(u).floor() as usize).clamp(1, n);
    let support = sample_indices(rng, n, k);
    let amp = 1.0 / (k as f64).sqrt();
    let mut y = Vector::zeros(n);
    for i in support.iter() {
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        y[i] = C64::from_polar(amp, theta);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::schatten_norm;

    #[test]
    fn streams_are_reproducible_and_independent_of_order() {
        let s = Sampler::new(42, 5, PIndex::HALF, SamplerTag::HaarSpectral);
        let a = s.sample(7).unwrap();
        let _ = s.sample(3).unwrap();
        assert_eq!(a, s.sample(7).unwrap());
        assert_ne!(a, s.sample(8).unwrap());
        let batch = s.samples(10).unwrap();
        assert_eq!(batch[7], a);
    }

    #[test]
    fn draws_lie_on_the_unit_sphere() {
        for tag in [
            SamplerTag::HaarSpectral,
            SamplerTag::Ginibre,
            SamplerTag::RankOne,
            SamplerTag::Sparse,
        ] {
            for p in [PIndex::HALF, PIndex::ONE, PIndex::TWO, PIndex::INF] {
                let s = Sampler::new(1, 6, p, tag);
                for i in 0..5 {
                    let f = s.sample(i).unwrap();
                    assert!((schatten_norm(&f, p).unwrap() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rectangular_and_gapped_draws() {
        let s = Sampler::new(3, 4, PIndex::ONE, SamplerTag::HaarSpectral)
            .with_cols(2)
            .gapped();
        let f = s.sample(0).unwrap();
        assert_eq!(f.shape(), (4, 2));
        let sf = crate::matcore::schmidt(&f).unwrap();
        assert!(!sf.frame_ambiguous);
        assert_eq!(sf.rank(), 2);
    }

    #[test]
    fn sparse_draws_are_rank_one_with_flat_final_vector() {
        let s = Sampler::new(9, 16, PIndex::ONE, SamplerTag::Sparse);
        for i in 0..20 {
            let sf = crate::matcore::schmidt(&s.sample(i).unwrap()).unwrap();
            assert_eq!(sf.rank(), 1);
            let moduli: Vec<f64> = sf.y[0].iter().map(|z| z.norm()).filter(|&m| m > 1e-12).collect();
            let first = moduli[0];
            assert!(moduli.iter().all(|m| (m - first).abs() < 1e-12));
        }
    }

    #[test]
    fn tags_parse() {
        assert_eq!("sparse".parse::<SamplerTag>().unwrap(), SamplerTag::Sparse);
        assert!("nope".parse::<SamplerTag>().is_err());
    }
}
