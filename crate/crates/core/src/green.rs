//! Green kernel of the β-order sub-problem
//!
//! ```text
//! H(t,s) = [t(β-1)(1-s)^{β-2} - (t-s)^{β-1}] / Γ(β),   0 ≤ s ≤ t ≤ 1,
//! H(t,s) =  t(β-1)(1-s)^{β-2} / Γ(β),                  0 ≤ t ≤ s ≤ 1,
//! ```
//!
//! for `3 < β ≤ 4`, together with the integrals of `H` that the solver and the
//! hypothesis checks need.

use crate::error::{domain, invalid, Result};
use crate::fraccore::quad::{integrate_graded, GRADED_TOL};
use crate::fraccore::{gamma_fn, linear_power_moment, GridFunction, Order, PExponent, RlKernel};

/// Order β of the outer problem, restricted to `3 < β ≤ 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    beta: Order,
    gamma_beta: f64,
}

impl KernelSpec {
    pub fn new(beta: Order) -> Result<Self> {
        let b = beta.value();
        if !(b > 3.0 && b <= 4.0) {
            return invalid(format!("kernel order must satisfy 3 < beta <= 4, got {b}"));
        }
        Ok(KernelSpec {
            beta,
            gamma_beta: gamma_fn(b)?,
        })
    }

    pub fn beta(&self) -> Order {
        self.beta
    }

    /// Both branch formulas at `(t, s)`, ignoring which one applies.
    pub fn branches(&self, t: f64, s: f64) -> (f64, f64) {
        let b = self.beta.value();
        let upper = t * (b - 1.0) * (1.0 - s).powf(b - 2.0) / self.gamma_beta;
        let lower = upper - (t - s).max(0.0).powf(b - 1.0) / self.gamma_beta;
        (lower, upper)
    }

    /// `H(t, s)` without range checks.
    #[inline]
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let (lower, upper) = self.branches(t, s);
        if s <= t {
            lower
        } else {
            upper
        }
    }

    /// `H(1, τ) = [(β-1)(1-τ)^{β-2} - (1-τ)^{β-1}] / Γ(β)`.
    #[inline]
    pub fn at_one(&self, tau: f64) -> f64 {
        let b = self.beta.value();
        let x = (1.0 - tau).max(0.0);
        ((b - 1.0) * x.powf(b - 2.0) - x.powf(b - 1.0)) / self.gamma_beta
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("{name} must lie in [0, 1], got {x}"));
    }
    Ok(())
}

/// `H(t, s)` for `t, s ∈ [0, 1]`.
pub fn green_eval(t: f64, s: f64, beta: Order) -> Result<f64> {
    check_unit("t", t)?;
    check_unit("s", s)?;
    Ok(KernelSpec::new(beta)?.eval(t, s))
}

/// `∫_0^1 H(s, τ) w(τ) dτ` with `w` replaced by its piecewise-linear interpolant.
///
/// The kernel is integrated exactly against each linear piece, and the piece
/// containing `s` is split there, so the result is exact for linear `w`.
pub fn green_inner_integral(s: f64, w: &GridFunction, beta: Order) -> Result<f64> {
    check_unit("s", s)?;
    let k = KernelSpec::new(beta)?;
    let b = beta.value();
    let h = w.step();
    let v = w.values();
    let mut tail = 0.0; // ∫_0^1 (1-τ)^{β-2} w
    let mut head = 0.0; // ∫_0^s (s-τ)^{β-1} w
    for j in 0..w.intervals() {
        let (a, c) = (j as f64 * h, (j + 1) as f64 * h);
        tail += linear_power_moment(1.0, b - 2.0, a, c, v[j], v[j + 1]);
        if a < s {
            let (end, y_end) = if c <= s { (c, v[j + 1]) } else { (s, w.interpolate(s)) };
            head += linear_power_moment(s, b - 1.0, a, end, v[j], y_end);
        }
    }
    Ok((s * (b - 1.0) * tail - head) / k.gamma_beta)
}

/// Row integrals `g(t_i) = ∫_0^1 H(t_i, τ) w(τ) dτ` at every node.
///
/// Uses `g(t) = t · I^{β-1}w(1) - I^β w(t)` with precomputed product-trapezoid
/// weights, so one application costs two Riemann-Liouville sweeps.
#[derive(Debug, Clone)]
pub struct GreenOperator {
    full: RlKernel,
    reduced: RlKernel,
}

impl GreenOperator {
    pub fn new(kernel: KernelSpec, intervals: usize) -> Result<Self> {
        let b = kernel.beta().value();
        Ok(GreenOperator {
            full: RlKernel::new(kernel.beta(), intervals),
            reduced: RlKernel::new(Order::new(b - 1.0)?, intervals),
        })
    }

    pub fn apply(&self, w: &[f64]) -> Vec<f64> {
        let slope = self.reduced.apply_at_end(w);
        let n = self.full.intervals() as f64;
        let mut out = self.full.apply(w);
        for (i, v) in out.iter_mut().enumerate() {
            *v = i as f64 / n * slope - *v;
        }
        out
    }
}

/// Value of the (H1) integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct H1Integral {
    pub value: f64,
    pub satisfied: bool,
}

/// `∫_δ^1 H(1, τ) a(τ) dτ` by graded quadrature (δ = 0 gives the (H1) integral).
pub fn h1_tail_integral(a: &dyn Fn(f64) -> f64, beta: Order, delta: f64) -> Result<f64> {
    check_unit("delta", delta)?;
    let k = KernelSpec::new(beta)?;
    integrate_graded(|tau| k.at_one(tau) * a(tau), delta, 1.0, GRADED_TOL)
}

/// The (H1) integral `∫_0^1 H(1, τ) a(τ) dτ`; satisfied iff it is positive and finite.
pub fn h1_integral(a: &dyn Fn(f64) -> f64, beta: Order) -> Result<H1Integral> {
    let value = h1_tail_integral(a, beta, 0.0)?;
    Ok(H1Integral {
        value,
        satisfied: value > 0.0 && value.is_finite(),
    })
}

/// Lower-bound constant `c_δ = ∫_0^δ α(1-s)^{α-2} φ_q(s^{β-1}) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDelta {
    pub value: f64,
    /// False when the value falls outside `(0, 1)`.
    pub in_unit_interval: bool,
}

pub fn c_delta(alpha: Order, beta: Order, q: f64, delta: f64) -> Result<CDelta> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta must lie in (0, 1), got {delta}"));
    }
    let pq = PExponent::new(q / (q - 1.0))?;
    let (a, b) = (alpha.value(), beta.value());
    let value = integrate_graded(
        |s| a * (1.0 - s).powf(a - 2.0) * pq.phi_inv(s.powf(b - 1.0)),
        0.0,
        delta,
        GRADED_TOL,
    )?;
    Ok(CDelta {
        value,
        in_unit_interval: value > 0.0 && value < 1.0,
    })
}

/// Sampled check of the kernel bounds `0 ≤ H(t,s) ≤ H(1,s)` and
/// `H(t,s) ≥ t^{β-1} H(1,s)`, plus branch agreement on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelReport {
    pub beta: f64,
    pub grid: usize,
    /// `min H(t,s)` over the grid.
    pub min_value: f64,
    /// `max H(t,s) - H(1,s)` over the grid.
    pub max_domination_excess: f64,
    /// `min H(t,s) - t^{β-1} H(1,s)` over interior grid points.
    pub min_lower_margin: f64,
    /// `max |branch1(t,t) - branch2(t,t)|` over 101 diagonal points.
    pub max_branch_gap: f64,
}

impl KernelReport {
    pub const SLACK: f64 = 1e-12;
    pub const BRANCH_TOL: f64 = 1e-14;

    pub fn nonnegative(&self) -> bool {
        self.min_value >= -Self::SLACK
    }

    pub fn dominated(&self) -> bool {
        self.max_domination_excess <= Self::SLACK
    }

    pub fn lower_bound(&self) -> bool {
        self.min_lower_margin >= -Self::SLACK
    }

    pub fn continuous(&self) -> bool {
        self.max_branch_gap <= Self::BRANCH_TOL
    }

    pub fn passed(&self) -> bool {
        self.nonnegative() && self.dominated() && self.lower_bound() && self.continuous()
    }
}

/// Evaluates the kernel on a `grid × grid` lattice of `[0, 1]²`.
pub fn kernel_properties(beta: Order, grid: usize) -> Result<KernelReport> {
    if grid < 3 {
        return invalid("kernel check grid needs at least 3 points per axis");
    }
    let k = KernelSpec::new(beta)?;
    let b = beta.value();
    let last = (grid - 1) as f64;
    let mut min_value = f64::INFINITY;
    let mut max_excess = f64::NEG_INFINITY;
    let mut min_margin = f64::INFINITY;
    for j in 0..grid {
        let s = j as f64 / last;
        let top = k.eval(1.0, s);
        for i in 0..grid {
            let t = i as f64 / last;
            let v = k.eval(t, s);
            min_value = min_value.min(v);
            max_excess = max_excess.max(v - top);
            if i > 0 && i + 1 < grid && j > 0 && j + 1 < grid {
                min_margin = min_margin.min(v - t.powf(b - 1.0) * top);
            }
        }
    }
    let max_branch_gap = (0..=100)
        .map(|i| {
            let t = f64::from(i) / 100.0;
            let (lower, upper) = k.branches(t, t);
            (lower - upper).abs()
        })
        .fold(0.0f64, f64::max);
    Ok(KernelReport {
        beta: b,
        grid,
        min_value,
        max_domination_excess: max_excess,
        min_lower_margin: min_margin,
        max_branch_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccore::quad::integrate_graded;

    fn ord(v: f64) -> Order {
        Order::new(v).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert!((green_eval(1.0, 0.0, ord(4.0)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(green_eval(0.0, s, ord(3.5)).unwrap(), 0.0);
        }
        assert!((green_eval(0.5, 0.5, ord(4.0)).unwrap() - 0.0625).abs() < 1e-15);
        assert!(green_eval(1.2, 0.5, ord(4.0)).is_err());
        assert!(green_eval(0.5, -0.1, ord(4.0)).is_err());
        assert!(green_eval(0.5, 0.5, ord(2.5)).is_err());
    }

    #[test]
    fn inner_integral_closed_form() {
        let one = GridFunction::constant(64, 1.0).unwrap();
        for s in [0.0f64, 0.25, 0.6, 1.0] {
            let want = s / 6.0 - s.powi(4) / 24.0;
            assert!((green_inner_integral(s, &one, ord(4.0)).unwrap() - want).abs() < 1e-14);
        }
        assert!((green_inner_integral(1.0, &one, ord(4.0)).unwrap() - 0.125).abs() < 1e-14);
        let zero = GridFunction::constant(64, 0.0).unwrap();
        assert_eq!(green_inner_integral(0.4, &zero, ord(3.3)).unwrap(), 0.0);
    }

    #[test]
    fn operator_matches_pointwise_integral() {
        let w = GridFunction::from_fn(50, |t| (2.0 * t).cos() + t * t).unwrap();
        for b in [3.1, 3.5, 4.0] {
            let op = GreenOperator::new(KernelSpec::new(ord(b)).unwrap(), 50).unwrap();
            let fast = op.apply(w.values());
            for (i, s) in w.nodes().enumerate() {
                let slow = green_inner_integral(s, &w, ord(b)).unwrap();
                assert!((fast[i] - slow).abs() < 1e-13, "b={b} s={s}");
            }
        }
    }

    #[test]
    fn h1_examples() {
        let r = h1_integral(&|_| 1.0, ord(4.0)).unwrap();
        assert!((r.value - 0.125).abs() < 1e-12);
        assert!(r.satisfied);
        let r = h1_integral(&|_| 0.0, ord(4.0)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.satisfied);
        // ∫ τ (3(1-τ)^2 - (1-τ)^3)/6 dτ = (3·B(2,3) - B(2,4))/6 = (1/4 - 1/20)/6 = 1/30
        let r = h1_integral(&|t| t, ord(4.0)).unwrap();
        assert!((r.value - 1.0 / 30.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn h1_with_endpoint_singular_weight() {
        // a(τ) = τ^{-1/2}, β = 4: (3·B(1/2,3) - B(1/2,4))/6
        let b = |x: f64, y: f64| {
            gamma_fn(x).unwrap() * gamma_fn(y).unwrap() / gamma_fn(x + y).unwrap()
        };
        let want = (3.0 * b(0.5, 3.0) - b(0.5, 4.0)) / 6.0;
        let r = h1_integral(&|t: f64| t.powf(-0.5), ord(4.0)).unwrap();
        assert!((r.value - want).abs() < 1e-8, "{} vs {want}", r.value);
    }

    #[test]
    fn c_delta_examples() {
        let c = c_delta(ord(2.0), ord(4.0), 2.0, 0.5).unwrap();
        assert!((c.value - 0.03125).abs() < 1e-14);
        assert!(c.in_unit_interval);
        let c = c_delta(ord(2.0), ord(4.0), 2.0, 0.999).unwrap();
        assert!((c.value - 0.999f64.powi(4) / 2.0).abs() < 1e-12);
        let c = c_delta(ord(2.0), ord(4.0), 2.0, 1e-6).unwrap();
        assert!(c.value < 1e-20);
        assert!(c_delta(ord(2.0), ord(4.0), 2.0, 1.0).is_err());
        assert!(c_delta(ord(2.0), ord(4.0), 2.0, 0.0).is_err());
    }

    #[test]
    fn c_delta_singular_factor() {
        // α = 1.5, q = 2: 1.5 ∫_0^δ (1-s)^{-1/2} s^{β-1} ds, cross-checked with x = 1-s
        let (a, b, d) = (1.5, 3.5, 0.9);
        let c = c_delta(ord(a), ord(b), 2.0, d).unwrap();
        let alt = integrate_graded(
            |x: f64| a * x.powf(a - 2.0) * (1.0 - x).powf(b - 1.0),
            1.0 - d,
            1.0,
            1e-12,
        )
        .unwrap();
        assert!((c.value - alt).abs() < 1e-9, "{} {alt}", c.value);
    }

    #[test]
    fn kernel_properties_hold() {
        for b in [3.1, 3.5, 4.0] {
            let r = kernel_properties(ord(b), 201).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
