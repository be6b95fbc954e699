use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::numbers::{binomial_row, numbers, Family};
use crate::error::Result;

/// Polynomial with exact coefficients of `t^0, t^1, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRational {
    coeffs: Vec<BigRational>,
}

impl PolyRational {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyRational { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> PolyRational {
        PolyRational::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> PolyRational {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, k: &BigRational) -> PolyRational {
        PolyRational::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for PolyRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `P^{(l)}_m(t) = Σ_k C(m,k) c^{(l)}_{m-k} t^k`.
pub fn polynomial(family: Family, l: usize, m: usize) -> Result<PolyRational> {
    let c = numbers(family, l, m)?.values;
    let row = binomial_row(m);
    Ok(PolyRational::new(
        (0..=m)
            .map(|k| BigRational::from_integer(row[k].clone()) * &c[m - k])
            .collect(),
    ))
}
