use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::fraccore::{Order, PExponent};
use crate::green::KernelSpec;

/// Shared scalar function, used for the weight `a(t)` and nonlinearity `f(u)`.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Data of the two-point conditions `u(0) = γ u(h) + λ`, `u'(0) = μ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub gamma: f64,
    pub h: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl BoundaryData {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return invalid(format!("gamma must lie in [0, 1), got {}", self.gamma));
        }
        if !(0.0..=1.0).contains(&self.h) {
            return invalid(format!("h must lie in [0, 1], got {}", self.h));
        }
        if !self.lambda.is_finite() || !self.mu.is_finite() {
            return invalid("lambda and mu must be finite");
        }
        Ok(())
    }

    /// `(λ + γμh) / (1 - γ)`, the constant part of the solution.
    pub fn offset(&self) -> f64 {
        (self.lambda + self.gamma * self.mu * self.h) / (1.0 - self.gamma)
    }

    /// `λ + γμh`, the quantity compared against the existence thresholds.
    pub fn load(&self) -> f64 {
        self.lambda + self.gamma * self.mu * self.h
    }
}

/// Raw numeric parameters, validated by [`ProblemSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub gamma: f64,
    pub h: f64,
    pub lambda: f64,
    pub mu: f64,
}

/// Number of points used to validate `a` and `f`.
const VALIDATION_SAMPLES: usize = 1000;

/// A fully validated instance of the boundary-value problem.
#[derive(Clone)]
pub struct ProblemSpec {
    alpha: Order,
    kernel: KernelSpec,
    pq: PExponent,
    bc: BoundaryData,
    a: ScalarFn,
    f: ScalarFn,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha.value())
            .field("beta", &self.kernel.beta().value())
            .field("p", &self.pq.p())
            .field("bc", &self.bc)
            .finish_non_exhaustive()
    }
}

/// Sample points for `a` on `(0, 1)`: cell midpoints.
pub(crate) fn weight_samples() -> impl Iterator<Item = f64> {
    (0..VALIDATION_SAMPLES).map(|i| (i as f64 + 0.5) / VALIDATION_SAMPLES as f64)
}

/// Sample points for `f` on `[0, ∞)`: zero plus a log grid over `[1e-6, 1e6]`.
pub(crate) fn nonlinearity_samples() -> impl Iterator<Item = f64> {
    let m = VALIDATION_SAMPLES - 1;
    std::iter::once(0.0).chain((0..m).map(move |i| 10f64.powf(-6.0 + 12.0 * i as f64 / (m - 1) as f64)))
}

impl ProblemSpec {
    pub fn new(
        params: Parameters,
        a: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::from_arcs(params, Arc::new(a), Arc::new(f))
    }

    pub fn from_arcs(params: Parameters, a: ScalarFn, f: ScalarFn) -> Result<Self> {
        let alpha = Order::new(params.alpha)?;
        if !(params.alpha > 1.0 && params.alpha <= 2.0) {
            return invalid(format!("alpha must satisfy 1 < alpha <= 2, got {}", params.alpha));
        }
        let kernel = KernelSpec::new(Order::new(params.beta)?)?;
        let pq = PExponent::new(params.p)?;
        let bc = BoundaryData {
            gamma: params.gamma,
            h: params.h,
            lambda: params.lambda,
            mu: params.mu,
        };
        bc.validate()?;
        if !(params.lambda > 0.0 && params.mu > 0.0) {
            return invalid(format!(
                "lambda and mu must be positive, got lambda={} mu={}",
                params.lambda, params.mu
            ));
        }
        for t in weight_samples() {
            let v = a(t);
            if !(v.is_finite() && v >= 0.0) {
                return invalid(format!("a({t}) = {v} is not a finite nonnegative value"));
            }
        }
        for x in nonlinearity_samples() {
            let v = f(x);
            if !(v.is_finite() && v >= 0.0) {
                return invalid(format!("f({x}) = {v} is not a finite nonnegative value"));
            }
        }
        Ok(ProblemSpec {
            alpha,
            kernel,
            pq,
            bc,
            a,
            f,
        })
    }

    /// Same problem with different `(λ, μ)`.
    pub fn with_lambda_mu(&self, lambda: f64, mu: f64) -> Result<Self> {
        let mut params = self.parameters();
        params.lambda = lambda;
        params.mu = mu;
        Self::from_arcs(params, self.a.clone(), self.f.clone())
    }

    pub fn parameters(&self) -> Parameters {
        Parameters {
            alpha: self.alpha.value(),
            beta: self.kernel.beta().value(),
            p: self.pq.p(),
            gamma: self.bc.gamma,
            h: self.bc.h,
            lambda: self.bc.lambda,
            mu: self.bc.mu,
        }
    }

    pub fn alpha(&self) -> Order {
        self.alpha
    }

    pub fn beta(&self) -> Order {
        self.kernel.beta()
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn exponent(&self) -> PExponent {
        self.pq
    }

    pub fn boundary(&self) -> BoundaryData {
        self.bc
    }

    pub fn a(&self) -> &ScalarFn {
        &self.a
    }

    pub fn f(&self) -> &ScalarFn {
        &self.f
    }

    /// Sampled monotonicity of `f`, used to pick the default damping.
    pub fn f_nondecreasing(&self) -> bool {
        sampled_nondecreasing(&*self.f)
    }
}

/// Checks `f(x_{i+1}) ≥ f(x_i)` on 10⁴ consecutive pairs from `0` and a log
/// grid over `[1e-8, 1e8]`, with a relative slack of `1e-12`.
pub fn sampled_nondecreasing(f: &dyn Fn(f64) -> f64) -> bool {
    const PAIRS: usize = 10_000;
    let mut prev = f(0.0);
    for i in 0..PAIRS {
        let x = 10f64.powf(-8.0 + 16.0 * i as f64 / (PAIRS - 1) as f64);
        let v = f(x);
        if v < prev - 1e-12 * prev.abs().max(1.0) {
            return false;
        }
        prev = v;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Parameters {
        Parameters {
            alpha: 1.5,
            beta: 3.5,
            p: 2.0,
            gamma: 0.5,
            h: 0.5,
            lambda: 0.1,
            mu: 0.1,
        }
    }

    #[test]
    fn valid_problem() {
        let spec = ProblemSpec::new(params(), |_| 1.0, f64::sqrt).unwrap();
        assert_eq!(spec.alpha().n(), 2);
        assert!((spec.boundary().offset() - (0.1 + 0.025) / 0.5).abs() < 1e-15);
        assert!(spec.f_nondecreasing());
    }

    #[test]
    fn range_violations() {
        let bad = [
            Parameters { alpha: 2.5, ..params() },
            Parameters { alpha: 1.0, ..params() },
            Parameters { beta: 3.0, ..params() },
            Parameters { p: 1.0, ..params() },
            Parameters { gamma: 1.0, ..params() },
            Parameters { h: 1.5, ..params() },
            Parameters { lambda: 0.0, ..params() },
            Parameters { mu: -1.0, ..params() },
        ];
        for p in bad {
            assert!(ProblemSpec::new(p, |_| 1.0, f64::sqrt).is_err(), "{p:?}");
        }
    }

    #[test]
    fn negative_functions_rejected() {
        let e = ProblemSpec::new(params(), |t| t - 0.5, f64::sqrt).unwrap_err();
        assert!(e.to_string().contains("a(0.0005)"), "{e}");
        assert!(ProblemSpec::new(params(), |_| 1.0, |x| 1.0 - x).is_err());
        assert!(ProblemSpec::new(params(), |_| 1.0, |x| 1.0 / x).is_err());
    }

    #[test]
    fn monotonicity_sampler() {
        assert!(sampled_nondecreasing(&|x| x * x));
        assert!(sampled_nondecreasing(&|_| 3.0));
        assert!(!sampled_nondecreasing(&|x: f64| (x - 1.0).abs()));
    }
}
