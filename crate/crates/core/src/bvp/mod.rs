//! The α-order linear solver, the composite fixed-point operator `T_λ`, and
//! damped Picard iteration for the full nonlinear problem.

mod problem;
mod solver;

pub use problem::{sampled_nondecreasing, BoundaryData, Parameters, ProblemSpec, ScalarFn};
pub use solver::{
    apply_t, apply_w, bc_residuals, evaluate_linear_at, lower_bound_check, solve_fixed_point,
    solve_linear, FixedPointOperator, LowerBoundReport, Solution, SolverOptions, Start,
};
