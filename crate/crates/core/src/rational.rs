//! Exact positive rationals for the deformation parameter `k = p/q`.
//!
//! `k` is never stored as a float: the exponents of the composite constants
//! are built directly from `p` and `q`, so the pair must stay exact. The
//! wire format is the string `"p/q"` (or just `"p"` for integers).

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};

/// A positive rational in lowest terms, `p >= 1`, `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalK {
    p: u32,
    q: u32,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalK {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(CoreError::BadRational);
        }
        let d = gcd(p, q);
        Ok(Self { p: p / d, q: q / d })
    }

    pub fn integer(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn numer(&self) -> u32 {
        self.p
    }

    pub fn denom(&self) -> u32 {
        self.q
    }

    pub fn as_f64(&self) -> f64 {
        f64::from(self.p) / f64::from(self.q)
    }

    /// `2k` in lowest terms (the angular reparameterization doubles k).
    pub fn doubled(&self) -> Self {
        // gcd(2p, q) = 2 when q is even, else 1, since gcd(p, q) = 1
        if self.q % 2 == 0 {
            Self { p: self.p, q: self.q / 2 }
        } else {
            Self { p: 2 * self.p, q: self.q }
        }
    }
}

impl fmt::Display for RationalK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for RationalK {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<u32>().map_err(|_| CoreError::BadRational)?,
                b.trim().parse::<u32>().map_err(|_| CoreError::BadRational)?,
            ),
            None => (s.parse::<u32>().map_err(|_| CoreError::BadRational)?, 1),
        };
        Self::new(p, q)
    }
}

impl Serialize for RationalK {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalK {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|_| {
            de::Error::invalid_value(de::Unexpected::Str(&s), &"a positive rational like \"3/2\"")
        })
    }
}
