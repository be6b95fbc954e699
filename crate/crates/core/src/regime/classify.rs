use std::fmt;

use super::checks::HypothesisReport;
use crate::bvp::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ExistsSmallParam,
    ExistsAllLambda,
    Unique,
    NoSolution,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ExistsSmallParam => "exists_small_param",
            Verdict::ExistsAllLambda => "exists_all_lambda",
            Verdict::Unique => "unique",
            Verdict::NoSolution => "no_solution",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeVerdict {
    pub lambda: f64,
    pub mu: f64,
    pub verdict: Verdict,
    /// `(1-γ)(1-φ_q(σ))c - γμh`: largest λ covered by the small-parameter
    /// existence result, using `λ + γμh` as in the operator constant.
    pub lambda_exist_bound: Option<f64>,
    /// Same bound with the `λ + γμ` combination.
    pub lambda_exist_bound_stated: Option<f64>,
    /// `(1-γ)e - γμh`: λ above this has no positive solution.
    pub lambda_nonexist_bound: Option<f64>,
    /// Set when both the all-λ existence and the nonexistence results apply,
    /// which cannot both be true; the verdict is then kept as computed.
    pub consistency_warning: bool,
}

/// Applies the existence, uniqueness and nonexistence results in the order
/// NoSolution, Unique, ExistsAllLambda, ExistsSmallParam.
pub fn classify(spec: &ProblemSpec, report: &HypothesisReport) -> RegimeVerdict {
    let bc = spec.boundary();
    let (lambda, mu) = (bc.lambda, bc.mu);
    let load = bc.load();
    let h1 = report.h1.satisfied;
    let q = spec.exponent();

    let band = report.h2.map(|w| (1.0 - bc.gamma) * (1.0 - q.phi_inv(w.sigma)) * w.c);
    let lambda_exist_bound = band.map(|b| b - bc.gamma * mu * bc.h);
    let lambda_exist_bound_stated = band.map(|b| b - bc.gamma * mu);
    let lambda_nonexist_bound = report.h4.map(|w| (1.0 - bc.gamma) * w.e - bc.gamma * mu * bc.h);

    let no_solution = h1 && report.h4.is_some_and(|w| load > (1.0 - bc.gamma) * w.e);
    let unique = h1 && report.h5 && report.h6.is_some();
    let exists_all = h1 && report.h3.is_some();
    let exists_small = h1 && band.is_some_and(|b| load <= b);

    let verdict = if no_solution {
        Verdict::NoSolution
    } else if unique {
        Verdict::Unique
    } else if exists_all {
        Verdict::ExistsAllLambda
    } else if exists_small {
        Verdict::ExistsSmallParam
    } else {
        Verdict::Indeterminate
    };

    RegimeVerdict {
        lambda,
        mu,
        verdict,
        lambda_exist_bound,
        lambda_exist_bound_stated,
        lambda_nonexist_bound,
        consistency_warning: h1 && report.h3.is_some() && report.h4.is_some(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp::Parameters;
    use crate::regime::DEFAULT_DELTA;

    fn spec(f: fn(f64) -> f64, lambda: f64, mu: f64) -> ProblemSpec {
        let params = Parameters {
            alpha: 1.5,
            beta: 3.5,
            p: 2.0,
            gamma: 0.5,
            h: 0.5,
            lambda,
            mu,
        };
        ProblemSpec::new(params, |_| 1.0, f).unwrap()
    }

    #[test]
    fn square_bands() {
        let s = spec(|x| x * x, 1e-3, 0.1);
        let r = HypothesisReport::compute(&s, DEFAULT_DELTA).unwrap();
        let v = classify(&s, &r);
        assert_eq!(v.verdict, Verdict::ExistsSmallParam);
        let bound = v.lambda_exist_bound.unwrap();
        assert!(bound > 1e-3);
        assert!(v.lambda_exist_bound_stated.unwrap() <= bound);
        assert!(!v.consistency_warning);

        let e = r.h4.unwrap().e;
        let lam = 2.0 * 0.5 * e - 0.5 * 0.1 * 0.5;
        let v = classify(&s.with_lambda_mu(lam, 0.1).unwrap(), &r);
        assert_eq!(v.verdict, Verdict::NoSolution);
        let nb = v.lambda_nonexist_bound.unwrap();
        assert!(lam > nb);
        assert!(bound < nb);
    }

    #[test]
    fn sqrt_unique() {
        for lam in [1e-3, 1.0, 1e3] {
            let s = spec(f64::sqrt, lam, 0.2);
            let r = HypothesisReport::compute(&s, DEFAULT_DELTA).unwrap();
            assert_eq!(classify(&s, &r).verdict, Verdict::Unique);
        }
    }

    #[test]
    fn middle_band_is_indeterminate() {
        let s = spec(|x| x * x, 1.0, 0.1);
        let r = HypothesisReport::compute(&s, DEFAULT_DELTA).unwrap();
        let v = classify(&s, &r);
        let (lo, hi) = (v.lambda_exist_bound.unwrap(), v.lambda_nonexist_bound.unwrap());
        let mid = 0.5 * (lo + hi);
        let v = classify(&s.with_lambda_mu(mid, 0.1).unwrap(), &r);
        assert_eq!(v.verdict, Verdict::Indeterminate);
    }
}
