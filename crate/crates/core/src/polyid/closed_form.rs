use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::numbers::{binomial_row, numbers, Family};
use super::poly::PolyRational;
use crate::error::{Error, Result};
use crate::fraccore::{caputo_power, gamma_fn, FracPoly, Order};

/// Keeps `m!` and the Γ denominators inside f64 range.
const MAX_CLOSED_FORM_INDEX: usize = 100;

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact parts of the image: `(k, m!/(m-n)! · k! · C(m-n,k) · c^{(l)}_{m-n-k})`
/// for `k = 0..=m-n`, the coefficient of `t^{k+n-α} / Γ(n+k-α+1)`.
fn rational_parts(family: Family, l: usize, m: usize, n: usize) -> Result<Vec<(usize, BigRational)>> {
    if m > MAX_CLOSED_FORM_INDEX {
        return Err(Error::Resource(format!(
            "closed form limited to m ≤ {MAX_CLOSED_FORM_INDEX}"
        )));
    }
    if m < n {
        return Ok(Vec::new());
    }
    let c = numbers(family, l, m - n)?.values;
    let lead = BigRational::new(factorial(m), factorial(m - n));
    let row = binomial_row(m - n);
    Ok((0..=m - n)
        .map(|k| {
            let w = BigRational::from_integer(factorial(k) * &row[k]);
            (k, &lead * w * &c[m - n - k])
        })
        .filter(|(_, v)| !v.is_zero())
        .collect())
}

/// Caputo derivative of order α of `P^{(l)}_m(t)`:
/// `Σ_k [m!/(m-n)!] k! C(m-n,k) c^{(l)}_{m-n-k} t^{k+n-α} / Γ(n+k-α+1)`.
///
/// The bracket is accumulated exactly; only the Γ division is done in f64.
pub fn caputo_closed_form(family: Family, l: usize, m: usize, alpha: Order) -> Result<FracPoly> {
    let n = alpha.n() as usize;
    let a = alpha.value();
    let mut terms = Vec::new();
    for (k, exact) in rational_parts(family, l, m, n)? {
        let num = exact.to_f64().filter(|v| v.is_finite()).ok_or_else(|| {
            Error::Resource(format!("coefficient of t^{k} overflows f64"))
        })?;
        let e = (n + k) as f64 - a;
        terms.push((num / gamma_fn(e + 1.0)?, e));
    }
    Ok(FracPoly::from_terms(terms))
}

/// The closed form at integer order `n`, kept exact: `Γ(k+1) = k!`, so the
/// result is the polynomial `Σ_k [m!/(m-n)!] C(m-n,k) c_{m-n-k} t^k`.
pub fn closed_form_integer(family: Family, l: usize, m: usize, n: usize) -> Result<PolyRational> {
    let parts = rational_parts(family, l, m, n)?;
    let mut coeffs = vec![BigRational::zero(); parts.last().map_or(0, |(k, _)| k + 1)];
    for (k, v) in parts {
        coeffs[k] = v / BigRational::from_integer(factorial(k));
    }
    Ok(PolyRational::new(coeffs))
}

/// Termwise power rule on an exact polynomial; the reference for
/// [`caputo_closed_form`].
pub fn power_rule_oracle(poly: &PolyRational, alpha: Order) -> Result<FracPoly> {
    let mut out = FracPoly::zero();
    for (k, c) in poly.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cf = c.to_f64().unwrap_or(f64::NAN);
        out = out.add(&caputo_power(k as f64, alpha)?.scale(cf));
    }
    Ok(out)
}
