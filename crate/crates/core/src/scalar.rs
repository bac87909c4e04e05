//! Scalar types usable as discharging charges.
//!
//! Charges are exact rationals in every shipped pipeline; `f64` is supported
//! for quick experiments, where conservation checks become approximate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

/// A signed field-like scalar that can represent the fractions used by the
/// discharging rules.
pub trait Charge:
    Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static
{
    fn from_frac(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_frac(n, 1)
    }

    /// Whether sums of this type are exact (used to decide how conservation is
    /// compared).
    fn is_exact() -> bool;

    /// Equality up to the type's precision.
    fn same_as(&self, other: &Self) -> bool {
        if Self::is_exact() {
            self == other
        } else {
            (self.clone() - other.clone()).abs() <= Self::from_frac(1, 1_000_000_000)
        }
    }
}

impl Charge for BigRational {
    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn is_exact() -> bool {
        true
    }
}

impl Charge for Ratio<i64> {
    fn from_frac(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Charge for f64 {
    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_exact() -> bool {
        false
    }
}

impl Charge for f32 {
    fn from_frac(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
    fn is_exact() -> bool {
        false
    }
}

/// A small fraction `num/den` with `den > 0`, in lowest terms. Used for rule
/// amounts and thresholds read from files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Frac {
    pub num: i64,
    pub den: i64,
}

impl Frac {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let r = Ratio::new(num, den);
        Frac {
            num: *r.numer(),
            den: *r.denom(),
        }
    }

    pub fn to_charge<S: Charge>(self) -> S {
        S::from_frac(self.num, self.den)
    }

    pub fn is_positive(self) -> bool {
        self.num > 0
    }
}

impl Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Frac {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("expected a fraction \"p/q\", found {s:?}");
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q == 0 {
            return Err(bad());
        }
        Ok(Frac::new(p, q))
    }
}

impl TryFrom<String> for Frac {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Frac> for String {
    fn from(f: Frac) -> String {
        f.to_string()
    }
}

/// Formats an exact or floating charge the way reports print it.
pub fn format_charge<S: Charge>(c: &S) -> String {
    if c.is_zero() {
        "0".to_string()
    } else {
        c.to_string()
    }
}
