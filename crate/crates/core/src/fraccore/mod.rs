//! Fractional operators and the scalar machinery shared by the other modules.

mod caputo;
mod fracpoly;
mod gamma;
mod grid;
pub mod quad;
mod rl;

pub use caputo::{caputo_grid, caputo_power};
pub use fracpoly::{frac_poly_eval, FracPoly};
pub use gamma::gamma_fn;
pub use grid::GridFunction;
pub use rl::{linear_power_moment, rl_integral, rl_integral_at, RlKernel};

use crate::error::{domain, invalid, Result};

/// A positive fractional order together with `n = ⌈value⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order {
    value: f64,
    n: u32,
}

impl Order {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return invalid(format!("order must be finite and positive, got {value}"));
        }
        if value > 4.0 {
            return invalid(format!("orders above 4 are not supported, got {value}"));
        }
        let n = value.ceil() as u32;
        Ok(Order { value, n })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Smallest integer `n` with `n - 1 < value <= n`.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_integer(&self) -> bool {
        self.value == f64::from(self.n)
    }
}

/// A p-Laplacian exponent `p > 1` and its conjugate `q = p / (p - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PExponent {
    p: f64,
    q: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return invalid(format!("p must be finite and > 1, got {p}"));
        }
        let q = p / (p - 1.0);
        if !q.is_finite() {
            return invalid(format!("conjugate exponent of p = {p} is not finite"));
        }
        Ok(PExponent { p, q })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `φ_p(s) = |s|^{p-2} s`.
    #[inline]
    pub fn phi(&self, s: f64) -> f64 {
        phi_raw(s, self.p)
    }

    /// `φ_q`, the inverse of [`PExponent::phi`].
    #[inline]
    pub fn phi_inv(&self, s: f64) -> f64 {
        phi_raw(s, self.q)
    }
}

#[inline]
pub(crate) fn phi_raw(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        return s;
    }
    s.signum() * s.abs().powf(p - 1.0)
}

/// The p-Laplacian map `φ_p(s) = |s|^{p-2} s`.
///
/// `phi(phi(x, p), q) == x` up to rounding when `1/p + 1/q = 1`.
pub fn phi(s: f64, p: f64) -> Result<f64> {
    if !s.is_finite() {
        return domain(format!("phi argument must be finite, got {s}"));
    }
    if !p.is_finite() || p <= 1.0 {
        return invalid(format!("p must be finite and > 1, got {p}"));
    }
    Ok(phi_raw(s, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_ceiling() {
        let o = Order::new(1.5).unwrap();
        assert_eq!(o.n(), 2);
        assert_eq!(Order::new(2.0).unwrap().n(), 2);
        assert_eq!(Order::new(3.0001).unwrap().n(), 4);
        assert!(Order::new(0.0).is_err());
        assert!(Order::new(-1.0).is_err());
        assert!(Order::new(f64::NAN).is_err());
        assert!(Order::new(4.5).is_err());
    }

    #[test]
    fn phi_examples() {
        for x in [-3.0, -0.2, 0.0, 1.0, 7.5] {
            assert_eq!(phi(x, 2.0).unwrap(), x);
        }
        assert_eq!(phi(-2.0, 3.0).unwrap(), -4.0);
        assert!((phi(4.0, 1.5).unwrap() - 2.0).abs() < 1e-15);
        assert!(phi(f64::INFINITY, 2.0).is_err());
        assert!(phi(1.0, 1.0).is_err());
        assert!(PExponent::new(0.5).is_err());
    }

    #[test]
    fn conjugate_exponent() {
        let pq = PExponent::new(3.0).unwrap();
        assert!((1.0 / pq.p() + 1.0 / pq.q() - 1.0).abs() <= 1e-14);
        assert_eq!(pq.q(), 1.5);
    }

    proptest! {
        #[test]
        fn phi_round_trip(x in -1e3f64..1e3, p in 1.0001f64..5.0) {
            let pq = PExponent::new(p).unwrap();
            let back = pq.phi_inv(pq.phi(x));
            prop_assert!((back - x).abs() <= 1e-12 * (1.0 + x.abs()));
        }

        #[test]
        fn phi_is_odd(x in -1e3f64..1e3, p in 1.0001f64..5.0) {
            prop_assert_eq!(phi(-x, p).unwrap(), -phi(x, p).unwrap());
        }
    }
}
