//! Weight families for ladder tails.
//!
//! A family is given by its step factor `s(k) = slope·k + intercept`, so that
//! `w(0) = 1` and `w(k+1) = w(k)·s(k)`. Because `w(k)` divides `w(k+1)`, a tail
//! term `r·w(k)` that is integral at one index stays integral from there on.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightFamily {
    slope: u64,
    intercept: u64,
}

impl WeightFamily {
    pub fn new(slope: u64, intercept: u64) -> Result<Self> {
        if intercept == 0 {
            return Err(Error::Parse {
                pos: 0,
                msg: "weight step factor must be positive at k = 0".into(),
            });
        }
        Ok(WeightFamily { slope, intercept })
    }

    /// `w(k) = 1`.
    pub fn one() -> Self {
        WeightFamily { slope: 0, intercept: 1 }
    }

    /// `w(k) = b^k`.
    pub fn pow(b: u64) -> Result<Self> {
        Self::new(0, b)
    }

    /// `w(k) = k!`.
    pub fn factorial() -> Self {
        WeightFamily { slope: 1, intercept: 1 }
    }

    /// `w(k) = b^k · k!`.
    pub fn factorial_pow(b: u64) -> Result<Self> {
        Self::new(b, b)
    }

    pub fn step(&self, k: u64) -> BigInt {
        BigInt::from(self.slope) * k + self.intercept
    }

    pub fn at(&self, k: u64) -> BigInt {
        let mut w = BigInt::one();
        for i in 0..k {
            w *= self.step(i);
        }
        w
    }

    /// First index from which `self.step(k) >= other.step(k)` holds for good.
    fn steps_dominate_from(&self, other: &WeightFamily) -> u64 {
        if self.slope == other.slope {
            return 0;
        }
        if self.slope < other.slope {
            return u64::MAX;
        }
        let need = other.intercept.saturating_sub(self.intercept);
        need.div_ceil(self.slope - other.slope)
    }

    /// Eventual domination order: `Greater` means `self(k)/other(k) → ∞`.
    pub fn domination(&self, other: &WeightFamily) -> Ordering {
        (self.slope, self.intercept).cmp(&(other.slope, other.intercept))
    }
}

impl PartialOrd for WeightFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeightFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        self.domination(other)
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope, self.intercept) {
            (0, 1) => write!(f, "one"),
            (0, b) => write!(f, "pow({b})"),
            (1, 1) => write!(f, "factorial"),
            (a, b) if a == b => write!(f, "factorial_pow({b})"),
            (a, b) => write!(f, "step({a},{b})"),
        }
    }
}

impl FromStr for WeightFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("unknown weight family `{s}`"),
        };
        let args = |inner: &str| -> Result<Vec<u64>> {
            inner
                .split(',')
                .map(|a| a.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        match s {
            "one" => return Ok(Self::one()),
            "factorial" => return Ok(Self::factorial()),
            _ => {}
        }
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let a = args(inner)?;
        match (name.trim(), a.as_slice()) {
            ("pow", [b]) => Self::pow(*b),
            ("factorial_pow", [b]) => Self::factorial_pow(*b),
            ("step", [x, y]) => Self::new(*x, *y),
            _ => Err(bad()),
        }
    }
}

impl Serialize for WeightFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for WeightFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Value of `Σ coeffs[i]·families[i](k)`.
pub fn tail_value(families: &[WeightFamily], coeffs: &[BigRational], k: u64) -> BigRational {
    families
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| c * BigRational::from_integer(w.at(k)))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Whether every term `coeffs[i]·families[i](k)` is an integer.
pub fn terms_integral(families: &[WeightFamily], coeffs: &[BigRational], k: u64) -> bool {
    families
        .iter()
        .zip(coeffs)
        .all(|(w, c)| c.is_zero() || (c * BigRational::from_integer(w.at(k))).is_integer())
}

/// Eventual sign of `Σ coeffs[i]·families[i](k)` and an index `K` from which
/// the sign is constant. Families must be pairwise distinct.
pub fn settle(families: &[WeightFamily], coeffs: &[BigRational]) -> (Ordering, u64) {
    let Some(lead) = (0..coeffs.len())
        .filter(|&i| !coeffs[i].is_zero())
        .max_by(|&a, &b| families[a].cmp(&families[b]))
    else {
        return (Ordering::Equal, 0);
    };
    let sign = if coeffs[lead].is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    let others: Vec<usize> = (0..coeffs.len())
        .filter(|&i| i != lead && !coeffs[i].is_zero())
        .collect();
    // Past k0 every ratio w_i/w_lead is nonincreasing, so the first index where
    // the leading term outweighs the rest works for all later ones too.
    let mut k = others
        .iter()
        .map(|&i| families[lead].steps_dominate_from(&families[i]))
        .max()
        .unwrap_or(0);
    let lead_abs = coeffs[lead].abs();
    loop {
        let big = &lead_abs * BigRational::from_integer(families[lead].at(k));
        let rest = others
            .iter()
            .map(|&i| coeffs[i].abs() * BigRational::from_integer(families[i].at(k)))
            .fold(BigRational::zero(), |a, b| a + b);
        if big > rest {
            return (sign, k);
        }
        k += 1;
    }
}
