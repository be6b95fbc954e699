//! Product-trapezoidal Riemann-Liouville integration.
//!
//! The integrand is replaced by its piecewise-linear interpolant on the uniform
//! grid and the weakly singular kernel `(t - s)^{α-1}` is integrated exactly
//! against each hat function.

use super::gamma::gamma_unchecked;
use super::{GridFunction, Order};

/// `(1 + x)^r - 1` without cancellation for small `x`.
#[inline]
fn pow1p_m1(x: f64, r: f64) -> f64 {
    (r * x.ln_1p()).exp_m1()
}

/// Interior weight `(k+1)^r - 2k^r + (k-1)^r` for `k >= 1`, `r = α + 1`.
fn interior_weight(k: usize, r: f64) -> f64 {
    if k == 1 {
        return 2f64.powf(r) - 2.0;
    }
    let kf = k as f64;
    let inv = 1.0 / kf;
    kf.powf(r) * (pow1p_m1(inv, r) + pow1p_m1(-inv, r))
}

/// Weight of `y_0` in the row for node `i >= 1`: `(i-1)^r - (i-1-α) i^α`.
fn start_weight(i: usize, alpha: f64) -> f64 {
    if i == 1 {
        return alpha;
    }
    let r = alpha + 1.0;
    let fi = i as f64;
    fi.powf(r) * (pow1p_m1(-1.0 / fi, r) + r / fi)
}

/// Precomputed product-trapezoid weights for `I^α` on a grid with a fixed
/// number of intervals. Reusable across many integrands.
#[derive(Debug, Clone)]
pub struct RlKernel {
    alpha: f64,
    intervals: usize,
    scale: f64,
    interior: Vec<f64>,
    start: Vec<f64>,
}

impl RlKernel {
    pub fn new(alpha: Order, intervals: usize) -> Self {
        let a = alpha.value();
        let h = 1.0 / intervals as f64;
        let r = a + 1.0;
        let interior = (0..=intervals)
            .map(|k| if k == 0 { 1.0 } else { interior_weight(k, r) })
            .collect();
        let start = (0..=intervals)
            .map(|i| if i == 0 { 0.0 } else { start_weight(i, a) })
            .collect();
        RlKernel {
            alpha: a,
            intervals,
            scale: h.powf(a) / gamma_unchecked(a + 2.0),
            interior,
            start,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// `I^α y` at every grid node; `y.len()` must be `intervals + 1`.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.intervals + 1, "grid size mismatch");
        std::iter::once(0.0)
            .chain((1..y.len()).map(|i| self.scale * self.row(y, i)))
            .collect()
    }

    /// `I^α y` at the last node only.
    pub fn apply_at_end(&self, y: &[f64]) -> f64 {
        assert_eq!(y.len(), self.intervals + 1, "grid size mismatch");
        self.scale * self.row(y, self.intervals)
    }

    #[inline]
    fn row(&self, y: &[f64], i: usize) -> f64 {
        // interior[i - j] pairs with y[j] for 0 < j < i
        let conv: f64 = y[1..i]
            .iter()
            .zip(self.interior[1..i].iter().rev())
            .map(|(v, w)| v * w)
            .sum();
        self.start[i] * y[0] + y[i] + conv
    }
}

/// Riemann-Liouville integral `I^α y` at every grid node.
pub fn rl_integral(y: &GridFunction, alpha: Order) -> GridFunction {
    let kernel = RlKernel::new(alpha, y.intervals());
    GridFunction::from_vec_unchecked(kernel.apply(y.values()))
}

/// `∫_a^b (c - τ)^e L(τ) dτ` for `a ≤ b ≤ c`, where `L` is linear with
/// `L(a) = ya`, `L(b) = yb`, and `e > -1`.
pub fn linear_power_moment(c: f64, e: f64, a: f64, b: f64, ya: f64, yb: f64) -> f64 {
    debug_assert!(a <= b && b <= c + 1e-15);
    let w = b - a;
    if w <= 0.0 {
        return 0.0;
    }
    let x_lo = (c - b).max(0.0);
    let x_hi = c - a;
    let pw = |x: f64, k: f64| if x == 0.0 { 0.0 } else { x.powf(k) };
    let d1 = (pw(x_hi, e + 1.0) - pw(x_lo, e + 1.0)) / (e + 1.0);
    let d2 = (pw(x_hi, e + 2.0) - pw(x_lo, e + 2.0)) / (e + 2.0);
    // τ = a <-> x = x_hi, τ = b <-> x = x_lo
    (ya * (d2 - x_lo * d1) + yb * (x_hi * d1 - d2)) / w
}

/// `I^α y` at an arbitrary `t ∈ [0, 1]` using the same piecewise-linear rule.
pub fn rl_integral_at(y: &GridFunction, alpha: Order, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    if t == 0.0 {
        return 0.0;
    }
    let e = alpha.value() - 1.0;
    let h = y.step();
    let v = y.values();
    let mut acc = 0.0;
    for j in 0..y.intervals() {
        let a = j as f64 * h;
        if a >= t {
            break;
        }
        let b_full = (j + 1) as f64 * h;
        let (b, yb) = if b_full <= t {
            (b_full, v[j + 1])
        } else {
            (t, y.interpolate(t))
        };
        acc += linear_power_moment(t, e, a, b, v[j], yb);
    }
    acc / gamma_unchecked(alpha.value())
}
