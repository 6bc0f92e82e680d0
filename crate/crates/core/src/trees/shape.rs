use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bracket::Shape;
use crate::error::{Error, Result};

/// Height `n` or `n.5`, with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Height {
    n: u32,
    half: bool,
}

impl Height {
    pub fn new(n: u32, half: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("height must be at least 1".into()));
        }
        if n > 20 {
            return Err(Error::Precondition(format!("height {n} is too large")));
        }
        Ok(Height { n, half })
    }

    pub fn whole(n: u32) -> Result<Self> {
        Height::new(n, false)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_half(&self) -> bool {
        self.half
    }

    /// Degree (grope class) of the symmetric tree of this height:
    /// `2^n`, or `2^n + 2^(n-1)` for `n.5`.
    pub fn class(&self) -> usize {
        let full = 1usize << self.n;
        if self.half {
            full + full / 2
        } else {
            full
        }
    }

    /// Heights in increasing order: 1, 1.5, 2, 2.5, ...
    pub fn ladder(max_n: u32) -> impl Iterator<Item = Height> {
        (1..=max_n).flat_map(|n| [Height { n, half: false }, Height { n, half: true }])
    }
}

impl PartialOrd for Height {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Height {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.half).cmp(&(other.n, other.half))
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.half {
            write!(f, "{}.5", self.n)
        } else {
            write!(f, "{}", self.n)
        }
    }
}

impl FromStr for Height {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("invalid height {s:?}"));
        let (whole, half) = match s.strip_suffix(".5") {
            Some(w) => (w, true),
            None => (s, false),
        };
        let n: u32 = whole.parse().map_err(|_| bad())?;
        Height::new(n, half)
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Y^level`: the chord for level 0, then `Y^(k+1) = Y^k * Y^k`.
pub fn y_level(level: u32) -> Shape {
    (0..level).fold(Shape::Leaf, |s, _| Shape::pair(s.clone(), s))
}

/// The symmetric shape of a given height. `Y^(n.5) = Y^(n-1) * Y^n`.
pub fn y_tree(h: Height) -> Shape {
    if h.half {
        Shape::pair(y_level(h.n - 1), y_level(h.n))
    } else {
        y_level(h.n)
    }
}
