use std::fmt;

/// Behaviour of `f(x) / φ_p(x)` at `0⁺` or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitClass {
    Zero,
    Finite(f64),
    Infinite,
    Indeterminate,
}

impl fmt::Display for LimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitClass::Zero => write!(f, "zero"),
            LimitClass::Finite(v) => write!(f, "finite({v:.16e})"),
            LimitClass::Infinite => write!(f, "infinite"),
            LimitClass::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

const DECADES: i32 = 8;
const STABLE_REL: f64 = 0.01;

/// Classifies a ratio sequence ordered toward the limit point.
fn classify_sequence(r: &[f64]) -> LimitClass {
    if r.iter().any(|v| v.is_nan()) {
        return LimitClass::Indeterminate;
    }
    let n = r.len();
    let tail = &r[n - 3..];
    if tail.iter().all(|v| *v == 0.0) {
        return LimitClass::Zero;
    }
    if r[n - 1].is_infinite() {
        return if r[n - 1] > 0.0 {
            LimitClass::Infinite
        } else {
            LimitClass::Indeterminate
        };
    }
    let last = r[n - 1];
    if tail.iter().all(|v| (v - last).abs() <= STABLE_REL * last.abs()) {
        return LimitClass::Finite(last);
    }
    let decreasing = r.windows(2).all(|w| w[1] < w[0]);
    let increasing = r.windows(2).all(|w| w[1] > w[0]);
    if decreasing && last >= 0.0 {
        LimitClass::Zero
    } else if increasing && last > 0.0 {
        LimitClass::Infinite
    } else {
        LimitClass::Indeterminate
    }
}

/// `(f₀, f_∞)` from the ratios `f(x)/φ_p(x)` at `x = 10^{∓k}`, `k = 1..8`.
///
/// A limit is finite when the last three ratios agree within 1%; otherwise a
/// sequence strictly monotone over all decades decides between zero and infinity.
pub fn estimate_limits(f: &dyn Fn(f64) -> f64, p: f64) -> (LimitClass, LimitClass) {
    let ratio = |x: f64| f(x) / super::checks::phi_p(x, p);
    let at_zero: Vec<f64> = (1..=DECADES).map(|k| ratio(10f64.powi(-k))).collect();
    let at_inf: Vec<f64> = (1..=DECADES).map(|k| ratio(10f64.powi(k))).collect();
    (classify_sequence(&at_zero), classify_sequence(&at_inf))
}
