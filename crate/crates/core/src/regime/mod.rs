//! Sampling-based hypothesis checks, limit classification and theorem-based
//! verdicts over the `(λ, μ)` parameter plane.
//!
//! Every witness returned here is numerical evidence, not a proof: it holds on
//! the sampled points and on a ten times denser re-check.

mod checks;
mod classify;
mod limits;
mod sweep;

pub use checks::{
    check_h2, check_h3, check_h4, check_h5_h6, h4_threshold, H2Witness, H3Witness, H4Witness, HypothesisReport,
    ShapeCheck,
};
pub use classify::{classify, RegimeVerdict, Verdict};
pub use limits::{estimate_limits, LimitClass};
pub use sweep::{linspace, sweep, SolveOutcome, SweepRow};

/// Default δ for (H4) and the lower-bound check.
pub const DEFAULT_DELTA: f64 = 0.5;
