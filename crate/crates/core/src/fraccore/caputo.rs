use super::gamma::gamma_unchecked;
use super::rl::rl_integral;
use super::{FracPoly, GridFunction, Order};
use crate::error::{domain, invalid, Result};

/// Caputo derivative of the monomial `t^μ`:
/// `μ(μ-1)…(μ-n+1) Γ(1+μ-n) / Γ(1+μ-α) · t^{μ-α}`, zero for `μ ∈ {0, …, n-1}`.
pub fn caputo_power(mu: f64, alpha: Order) -> Result<FracPoly> {
    if !mu.is_finite() || mu < 0.0 {
        return domain(format!("power must be finite and >= 0, got {mu}"));
    }
    let n = alpha.n();
    let nf = f64::from(n);
    if mu.fract() == 0.0 && mu < nf {
        return Ok(FracPoly::zero());
    }
    if mu < nf - 1.0 {
        return domain(format!(
            "D^{} t^{mu} is not defined: the {n}-th derivative is not integrable at 0",
            alpha.value()
        ));
    }
    let falling: f64 = (0..n).map(|j| mu - f64::from(j)).product();
    let num_arg = 1.0 + mu - nf;
    let den_arg = 1.0 + mu - alpha.value();
    let ratio = if num_arg < 170.0 && den_arg < 170.0 {
        gamma_unchecked(num_arg) / gamma_unchecked(den_arg)
    } else {
        (libm::lgamma(num_arg) - libm::lgamma(den_arg)).exp()
    };
    let exponent = (mu - alpha.value()).max(0.0);
    Ok(FracPoly::monomial(falling * ratio, exponent))
}

/// Minimum number of intervals accepted by [`caputo_grid`].
pub const CAPUTO_GRID_MIN_INTERVALS: usize = 64;

/// Grid Caputo derivative `I^{n-α} y^{(n)}`, with `y^{(n)}` from repeated
/// second-order differences. First-order accurate; verification use only.
pub fn caputo_grid(y: &GridFunction, alpha: Order) -> Result<GridFunction> {
    if y.intervals() < CAPUTO_GRID_MIN_INTERVALS {
        return invalid(format!(
            "caputo_grid needs at least {CAPUTO_GRID_MIN_INTERVALS} intervals, got {}",
            y.intervals()
        ));
    }
    let mut d = y.values().to_vec();
    for _ in 0..alpha.n() {
        d = gradient(&d, y.step());
    }
    let deriv = GridFunction::new(d)?;
    if alpha.is_integer() {
        return Ok(deriv);
    }
    let rest = Order::new(f64::from(alpha.n()) - alpha.value())?;
    Ok(rl_integral(&deriv, rest))
}

/// Centered differences inside, second-order one-sided at both ends.
fn gradient(v: &[f64], h: f64) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccore::gamma_fn;

    fn ord(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn power_examples() {
        assert!(caputo_power(1.0, ord(1.5)).unwrap().is_zero());
        assert!(caputo_power(0.0, ord(0.5)).unwrap().is_zero());
        let p = caputo_power(2.0, ord(1.5)).unwrap();
        let want = 2.0 / gamma_fn(1.5).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert!((p.terms()[0].0 - want).abs() < 1e-14);
        assert!((p.terms()[0].0 - 2.256_758_334_191_025).abs() < 1e-12);
        assert_eq!(p.terms()[0].1, 0.5);
        let p = caputo_power(3.0, ord(2.0)).unwrap();
        assert!((p.terms()[0].0 - 6.0).abs() < 1e-13);
        assert_eq!(p.terms()[0].1, 1.0);
        assert!(caputo_power(-1.0, ord(1.0)).is_err());
        assert!(caputo_power(0.5, ord(2.5)).is_err());
    }

    #[test]
    fn continuity_in_order() {
        // As α -> n from below, the coefficient tends to μ!/(μ-n)!.
        for (mu, n) in [(3.0, 2u32), (2.5, 1), (4.0, 3), (5.0, 4), (3.3, 2)] {
            let a = ord(f64::from(n) - 1e-8);
            let c = caputo_power(mu, a).unwrap().terms()[0].0;
            let exact: f64 = (0..n).map(|j| mu - f64::from(j)).product();
            assert!(((c - exact) / exact).abs() < 1e-6, "mu={mu} c={c} exact={exact}");
        }
    }

    #[test]
    fn grid_derivative_of_square() {
        // second differences of t^2 are exact, so only round-off remains
        let y = GridFunction::from_fn(128, |t| t * t).unwrap();
        let d = caputo_grid(&y, ord(1.5)).unwrap();
        let c = 2.0 / gamma_fn(1.5).unwrap();
        for (t, v) in y.nodes().zip(d.values()) {
            assert!((v - c * t.sqrt()).abs() < 1e-9, "t={t}");
        }
    }

    #[test]
    fn grid_derivative_converges_under_refinement() {
        let img = caputo_power(3.5, ord(1.5)).unwrap();
        let err = |n: usize| {
            let y = GridFunction::from_fn(n, |t| t.powf(3.5)).unwrap();
            let d = caputo_grid(&y, ord(1.5)).unwrap();
            y.nodes()
                .zip(d.values())
                .fold(0.0f64, |m, (t, v)| m.max((v - img.eval(t)).abs()))
        };
        let (e1, e2, e3) = (err(64), err(128), err(256));
        assert!(e3 < e2 && e2 < e1 && e3 < 0.05, "{e1} {e2} {e3}");
    }

    #[test]
    fn grid_derivative_of_constant_and_cubic() {
        let y = GridFunction::constant(64, 3.0).unwrap();
        for a in [0.4, 1.5, 2.7] {
            assert!(caputo_grid(&y, ord(a)).unwrap().sup_norm() < 1e-10);
        }
        let y = GridFunction::from_fn(128, |t| t.powi(3)).unwrap();
        let d = caputo_grid(&y, ord(2.0)).unwrap();
        for (t, v) in y.nodes().zip(d.values()) {
            assert!((v - 6.0 * t).abs() < 0.05, "t={t} v={v}");
        }
        assert!(caputo_grid(&GridFunction::constant(32, 1.0).unwrap(), ord(0.5)).is_err());
    }
}
