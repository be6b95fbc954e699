//! Numerical toolkit for the Caputo p-Laplacian boundary-value problem
//!
//! ```text
//! D^β(φ_p(D^α u(t))) + a(t) f(u(t)) = 0,   0 < t < 1,
//! u(0) = γ u(h) + λ,  u'(0) = μ,
//! φ_p(D^α u(0)) = (φ_p(D^α u(1)))' = (φ_p(D^α u(0)))'' = (φ_p(D^α u(0)))''' = 0,
//! ```
//!
//! with `1 < α ≤ 2`, `3 < β ≤ 4`.
//!
//! * [`fraccore`]: gamma function, φ_p, Riemann-Liouville integral and Caputo derivative.
//! * [`green`]: the Green kernel `H(t,s)` of the β-order sub-problem and its integrals.
//! * [`bvp`]: linear α-order solver, the composite fixed-point operator and its iteration.
//! * [`regime`]: hypothesis checkers, limit classification and (λ, μ) verdicts.
//! * [`polyid`]: exact Bernoulli/Euler/Genocchi numbers and closed-form Caputo images.

pub mod bvp;
pub mod error;
pub mod fraccore;
pub mod green;
pub mod polyid;
pub mod regime;

pub use error::{Error, Result};
pub use fraccore::{FracPoly, GridFunction, Order, PExponent};
