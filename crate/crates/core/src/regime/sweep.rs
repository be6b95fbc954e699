use rayon::prelude::*;

use super::checks::HypothesisReport;
use super::classify::{classify, RegimeVerdict};
use crate::bvp::{solve_fixed_point, ProblemSpec, Solution, SolverOptions};
use crate::error::{invalid, Error, Result};

/// `count` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            (0..count)
                .map(|i| if i + 1 == count { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

/// What happened when the fixed-point solver was run on a cell.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Converged { iterations: usize, residual: f64 },
    MaxIterExceeded { iterations: usize, last_increment: f64 },
    Diverged { iteration: usize },
    Failed(String),
}

impl SolveOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SolveOutcome::Converged { .. } => "converged",
            SolveOutcome::MaxIterExceeded { .. } => "max_iter",
            SolveOutcome::Diverged { .. } => "diverged",
            SolveOutcome::Failed(_) => "failed",
        }
    }
}

impl From<Result<Solution>> for SolveOutcome {
    fn from(r: Result<Solution>) -> Self {
        match r {
            Ok(s) => SolveOutcome::Converged {
                iterations: s.iterations,
                residual: s.fp_residual,
            },
            Err(Error::MaxIterExceeded {
                iterations,
                last_increment,
                ..
            }) => SolveOutcome::MaxIterExceeded {
                iterations,
                last_increment,
            },
            Err(Error::Diverged { iteration, .. }) => SolveOutcome::Diverged { iteration },
            Err(e) => SolveOutcome::Failed(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub verdict: RegimeVerdict,
    pub solve: Option<SolveOutcome>,
}

/// Classifies every `(λ, μ)` cell, λ outer and μ inner. The hypothesis report
/// does not depend on λ or μ, so one report serves the whole grid. Cells run
/// in parallel; the output order is fixed.
pub fn sweep(
    template: &ProblemSpec,
    lambdas: &[f64],
    mus: &[f64],
    report: &HypothesisReport,
    solve: Option<&SolverOptions>,
) -> Result<Vec<SweepRow>> {
    if lambdas.is_empty() || mus.is_empty() {
        return invalid("sweep needs at least one λ and one μ");
    }
    if let Some(opts) = solve {
        opts.validate()?;
    }
    let cells: Vec<ProblemSpec> = lambdas
        .iter()
        .flat_map(|&l| mus.iter().map(move |&m| (l, m)))
        .map(|(l, m)| template.with_lambda_mu(l, m))
        .collect::<Result<_>>()?;
    Ok(cells
        .par_iter()
        .map(|spec| SweepRow {
            verdict: classify(spec, report),
            solve: solve.map(|o| SolveOutcome::from(solve_fixed_point(spec, o))),
        })
        .collect())
}
