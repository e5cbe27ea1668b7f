//! Game-style functions `S(p, r)` used to rank pass options.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::network::{is_probability, MAX_RISK};

/// Any scoring rule over a pass option's completion probability and the
/// receiver's risk. Inputs are assumed already validated.
pub trait StyleFunction: Send + Sync {
    fn score(&self, p: f64, r: u8) -> f64;

    /// Key used to pick the best option. Must order options exactly like
    /// [`StyleFunction::score`] up to rounding; implementations may override
    /// it to make the ordering independent of an overall weight scale.
    fn ranking_key(&self, p: f64, r: u8) -> f64 {
        self.score(p, r)
    }
}

/// `S(p, r) = x * 10p + y * r` with nonnegative integer weights, not both zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LinearStyle {
    x: u32,
    y: u32,
}

/// Which weight dominates a linear style.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StyleClass {
    /// `x > y`: completion probability outweighs risk.
    Possession,
    /// `x < y`: risk outweighs completion probability.
    Direct,
    /// `x == y`.
    Balanced,
}

impl LinearStyle {
    pub fn new(x: u32, y: u32) -> Result<Self> {
        if x == 0 && y == 0 {
            return Err(ModelError::InvalidStyle(
                format!("{x}:{y}"),
                "weights must not both be zero",
            ));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn y(&self) -> u32 {
        self.y
    }

    /// Checked evaluation of `x * 10p + y * r`.
    pub fn evaluate(&self, p: f64, r: u8) -> Result<f64> {
        if !is_probability(p) {
            return Err(ModelError::ValueOutOfRange {
                field: "p",
                value: p,
            });
        }
        if r > MAX_RISK {
            return Err(ModelError::ValueOutOfRange {
                field: "r",
                value: f64::from(r),
            });
        }
        Ok(self.score(p, r))
    }

    /// `(x / (x + y), y / (x + y))`.
    pub fn importance(&self) -> (f64, f64) {
        let total = f64::from(self.x) + f64::from(self.y);
        (f64::from(self.x) / total, f64::from(self.y) / total)
    }

    pub fn classify(&self) -> StyleClass {
        match self.x.cmp(&self.y) {
            std::cmp::Ordering::Greater => StyleClass::Possession,
            std::cmp::Ordering::Less => StyleClass::Direct,
            std::cmp::Ordering::Equal => StyleClass::Balanced,
        }
    }

    /// The same style with weights divided by their gcd.
    pub fn reduced(&self) -> Self {
        let g = gcd(self.x, self.y);
        Self {
            x: self.x / g,
            y: self.y / g,
        }
    }

    fn linear(x: u32, y: u32, p: f64, r: u8) -> f64 {
        f64::from(x) * 10.0 * p + f64::from(y) * f64::from(r)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl StyleFunction for LinearStyle {
    fn score(&self, p: f64, r: u8) -> f64 {
        Self::linear(self.x, self.y, p, r)
    }

    // Scaling both weights by c scales every score by c, but floating-point
    // rounding can reorder near-ties. Ranking on the gcd-reduced weights makes
    // the argmax exactly scale invariant.
    fn ranking_key(&self, p: f64, r: u8) -> f64 {
        let red = self.reduced();
        Self::linear(red.x, red.y, p, r)
    }
}

impl fmt::Display for LinearStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.x, self.y)
    }
}

impl FromStr for LinearStyle {
    type Err = ModelError;

    /// Parses `"x:y"`, e.g. `"3:1"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why| ModelError::InvalidStyle(s.to_string(), why);
        let (x, y) = s.split_once(':').ok_or_else(|| bad("expected x:y"))?;
        let parse = |part: &str| {
            let part = part.trim();
            if part.starts_with('-') {
                return Err(bad("weights must be nonnegative"));
            }
            part.parse::<u32>()
                .map_err(|_| bad("weights must be nonnegative integers"))
        };
        let (x, y) = (parse(x)?, parse(y)?);
        LinearStyle::new(x, y).map_err(|_| bad("weights must not both be zero"))
    }
}

impl TryFrom<String> for LinearStyle {
    type Error = ModelError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LinearStyle> for String {
    fn from(style: LinearStyle) -> String {
        style.to_string()
    }
}
