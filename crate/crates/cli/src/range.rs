use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on points per range axis.
pub const MAX_COUNT: usize = 10_000;

/// `start:stop:count`, evenly spaced and inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RangeError {
    #[error("expected start:stop:count")]
    Shape,
    #[error("invalid number {0:?}")]
    Number(String),
    #[error("count must be an integer in 1..={MAX_COUNT}, got {0:?}")]
    Count(String),
    #[error("a single-point range needs start == stop")]
    SinglePoint,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        fracbvp::regime::linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for Range {
    type Err = RangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        let (Some(a), Some(b), Some(c), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(RangeError::Shape);
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| RangeError::Number(t.to_string()))
        };
        let (start, stop) = (num(a)?, num(b)?);
        let count = c
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| (1..=MAX_COUNT).contains(n))
            .ok_or_else(|| RangeError::Count(c.to_string()))?;
        if count == 1 && start != stop {
            return Err(RangeError::SinglePoint);
        }
        Ok(Range { start, stop, count })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{}", self.start, self.stop, self.count)
    }
}
