use std::fmt;

/// Finite sum `Σ c_k t^{e_k}` with real exponents `e_k ≥ 0`.
///
/// Terms are kept sorted by exponent, without duplicates or zero coefficients;
/// the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FracPoly {
    terms: Vec<(f64, f64)>,
}

/// Exponents closer than this are merged.
const EXPONENT_EPS: f64 = 1e-12;

impl FracPoly {
    pub fn zero() -> Self {
        FracPoly { terms: Vec::new() }
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::from_terms(vec![(coeff, exponent)])
    }

    /// Builds a normalized polynomial from `(coeff, exponent)` pairs.
    ///
    /// Panics on negative or non-finite exponents.
    pub fn from_terms(mut terms: Vec<(f64, f64)>) -> Self {
        for &(_, e) in &terms {
            assert!(e.is_finite() && e >= 0.0, "invalid exponent {e}");
        }
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            match merged.last_mut() {
                Some(last) if (last.1 - e).abs() <= EXPONENT_EPS => last.0 += c,
                _ => merged.push((c, e)),
            }
        }
        merged.retain(|&(c, _)| c != 0.0);
        FracPoly { terms: merged }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = f64> + '_ {
        self.terms.iter().map(|t| t.1)
    }

    /// `Σ c t^e`; `0^e` is taken as 0 for `e > 0` and 1 for `e = 0`.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| {
                if e == 0.0 {
                    c
                } else if t == 0.0 {
                    0.0
                } else {
                    c * t.powf(e)
                }
            })
            .sum()
    }

    pub fn add(&self, other: &FracPoly) -> FracPoly {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        FracPoly::from_terms(terms)
    }

    pub fn scale(&self, k: f64) -> FracPoly {
        FracPoly::from_terms(self.terms.iter().map(|&(c, e)| (c * k, e)).collect())
    }
}

/// Evaluates `fp` at `t ≥ 0`.
pub fn frac_poly_eval(fp: &FracPoly, t: f64) -> f64 {
    fp.eval(t)
}

impl fmt::Display for FracPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, e)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*t^{e}")?;
        }
        Ok(())
    }
}
