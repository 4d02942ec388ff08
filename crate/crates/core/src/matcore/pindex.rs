use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

/// Summability index `p ∈ (0, ∞]`. `∞` selects the operator norm.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct PIndex(f64);

impl PIndex {
    pub const INF: PIndex = PIndex(f64::INFINITY);
    pub const ONE: PIndex = PIndex(1.0);
    pub const TWO: PIndex = PIndex(2.0);
    pub const HALF: PIndex = PIndex(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return Err(LabError::Index(format!("{p} is not in (0, inf]")));
        }
        Ok(PIndex(p))
    }

    /// Index whose reciprocal is `r`; `r = 0` gives `∞`.
    pub fn from_recip(r: f64) -> Result<Self> {
        if r.is_nan() || r < 0.0 || r.is_infinite() {
            return Err(LabError::Index(format!("reciprocal {r} out of range")));
        }
        if r == 0.0 {
            Ok(Self::INF)
        } else {
            Self::new(1.0 / r)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn recip(self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// The finite value, or an error naming `what` when `p = ∞`.
    pub fn finite(self, what: &str) -> Result<f64> {
        if self.is_finite() {
            Ok(self.0)
        } else {
            Err(LabError::Index(format!("{what} needs a finite index")))
        }
    }

    /// `q` with `1/q = 1/self + 1/other`.
    pub fn harmonic_sum(self, other: PIndex) -> Result<PIndex> {
        PIndex::from_recip(self.recip() + other.recip())
    }
}

impl fmt::Debug for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Accepts decimals, `inf`/`infinity`, and fractions such as `1/2` or `2/3`.
impl FromStr for PIndex {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Self::INF);
        }
        let bad = || LabError::Index(format!("cannot parse index {s:?}"));
        let value = match t.split_once('/') {
            Some((num, den)) => {
                let num: f64 = num.trim().parse().map_err(|_| bad())?;
                let den: f64 = den.trim().parse().map_err(|_| bad())?;
                num / den
            }
            None => t.parse().map_err(|_| bad())?,
        };
        PIndex::new(value)
    }
}

impl Serialize for PIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for PIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => PIndex::new(v).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Modulus of concavity `Δ_r` of `S^r`: `2^{1/r - 1}` for `r < 1`, else `1`.
pub fn concavity_modulus(r: PIndex) -> f64 {
    if r.value() < 1.0 {
        2f64.powf(1.0 / r.value() - 1.0)
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_infinity() {
        assert_eq!("1/2".parse::<PIndex>().unwrap().value(), 0.5);
        assert_eq!("inf".parse::<PIndex>().unwrap(), PIndex::INF);
        assert_eq!(" 3 ".parse::<PIndex>().unwrap().value(), 3.0);
        assert!("0".parse::<PIndex>().is_err());
        assert!("-1".parse::<PIndex>().is_err());
        assert!("abc".parse::<PIndex>().is_err());
    }

    #[test]
    fn json_forms() {
        let p: PIndex = serde_json::from_str("\"2/3\"").unwrap();
        assert!((p.value() - 2.0 / 3.0).abs() < 1e-15);
        let inf: PIndex = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(serde_json::to_string(&inf).unwrap(), "\"inf\"");
        assert!(serde_json::from_str::<PIndex>("-2.0").is_err());
    }

    #[test]
    fn concavity_modulus_values() {
        assert_eq!(concavity_modulus(PIndex::ONE), 1.0);
        assert_eq!(concavity_modulus(PIndex::HALF), 2.0);
        assert_eq!(concavity_modulus(PIndex::TWO), 1.0);
        assert_eq!(concavity_modulus(PIndex::new(0.25).unwrap()), 8.0);
        assert_eq!(concavity_modulus(PIndex::INF), 1.0);
    }

    #[test]
    fn harmonic_sum() {
        let q = PIndex::TWO.harmonic_sum(PIndex::TWO).unwrap();
        assert_eq!(q.value(), 1.0);
        let q = PIndex::INF.harmonic_sum(PIndex::TWO).unwrap();
        assert_eq!(q.value(), 2.0);
    }
}
