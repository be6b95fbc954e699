use super::problem::{BoundaryData, ProblemSpec};
use crate::error::{invalid, Error, Result};
use crate::fraccore::{rl_integral_at, GridFunction, Order, PExponent, RlKernel};
use crate::green::{c_delta, GreenOperator, KernelSpec};

/// Solves `D^α u = y`, `u(0) = γ u(h) + λ`, `u'(0) = μ`:
///
/// `u(t) = I^α y(t) + μt + [γ I^α y(h) + λ + γμh] / (1 - γ)`.
pub fn solve_linear(y: &GridFunction, alpha: Order, bc: &BoundaryData) -> Result<GridFunction> {
    bc.validate()?;
    let kernel = RlKernel::new(alpha, y.intervals());
    let iy = kernel.apply(y.values());
    let constant = linear_constant(y, alpha, bc);
    let n = y.intervals() as f64;
    GridFunction::new(
        iy.iter()
            .enumerate()
            .map(|(i, v)| v + bc.mu * i as f64 / n + constant)
            .collect(),
    )
}

fn linear_constant(y: &GridFunction, alpha: Order, bc: &BoundaryData) -> f64 {
    let iy_h = rl_integral_at(y, alpha, bc.h);
    (bc.gamma * iy_h) / (1.0 - bc.gamma) + bc.offset()
}

/// The linear solution evaluated off-grid at `t`, with the same quadrature.
pub fn evaluate_linear_at(y: &GridFunction, alpha: Order, bc: &BoundaryData, t: f64) -> f64 {
    rl_integral_at(y, alpha, t) + bc.mu * t + linear_constant(y, alpha, bc)
}

/// `(u(0) - γ u(h) - λ, u'(0) - μ)`, with `u'(0)` from the second-order
/// one-sided difference `(-3u_0 + 4u_1 - u_2) / (2Δt)`.
pub fn bc_residuals(u: &GridFunction, u_at_h: f64, bc: &BoundaryData) -> (f64, f64) {
    let v = u.values();
    let slope = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * u.step());
    (v[0] - bc.gamma * u_at_h - bc.lambda, slope - bc.mu)
}

/// `w(t) = ∫_0^1 H(t,τ) y(τ) dτ` at every node.
pub fn apply_w(y: &GridFunction, beta: Order) -> Result<GridFunction> {
    let op = GreenOperator::new(KernelSpec::new(beta)?, y.intervals())?;
    GridFunction::new(op.apply(y.values()))
}

/// The composite operator
/// `T u = I^α φ_q(g) + μt + γ/(1-γ) I^α φ_q(g)(h) + (λ+γμh)/(1-γ)`,
/// `g(s) = ∫_0^1 H(s,τ) a(τ) f(u(τ)) dτ`, prepared for one grid size.
pub struct FixedPointOperator {
    spec: ProblemSpec,
    intervals: usize,
    weight: Vec<f64>,
    green: GreenOperator,
    rl: RlKernel,
}

impl FixedPointOperator {
    pub fn new(spec: &ProblemSpec, intervals: usize) -> Result<Self> {
        let n = intervals as f64;
        let a = spec.a();
        let weight: Vec<f64> = (0..=intervals).map(|i| a(i as f64 / n)).collect();
        if let Some(i) = weight.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return invalid(format!(
                "a({}) = {} must be finite and nonnegative at grid nodes",
                i as f64 / n,
                weight[i]
            ));
        }
        Ok(FixedPointOperator {
            spec: spec.clone(),
            intervals,
            weight,
            green: GreenOperator::new(spec.kernel(), intervals)?,
            rl: RlKernel::new(spec.alpha(), intervals),
        })
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// `φ_q(g)` for the given iterate.
    fn inner(&self, u: &[f64]) -> Result<Vec<f64>> {
        let f = self.spec.f();
        let mut w = Vec::with_capacity(u.len());
        for (i, (&ui, &ai)) in u.iter().zip(&self.weight).enumerate() {
            let fu = f(ui.max(0.0));
            if fu.is_nan() || fu < 0.0 {
                return invalid(format!("f({ui}) = {fu} at node {i} is not nonnegative"));
            }
            if !fu.is_finite() {
                return Err(Error::Numeric(format!("f({ui}) is not finite at node {i}")));
            }
            w.push(ai * fu);
        }
        let pq: PExponent = self.spec.exponent();
        Ok(self.green.apply(&w).into_iter().map(|g| pq.phi_inv(g)).collect())
    }

    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(self.apply_with_h(u)?.0)
    }

    /// `T u` on the grid together with the continuous value `(T u)(h)`.
    pub fn apply_with_h(&self, u: &[f64]) -> Result<(Vec<f64>, f64)> {
        assert_eq!(u.len(), self.intervals + 1, "grid size mismatch");
        let y = self.inner(u)?;
        let bc = self.spec.boundary();
        let alpha = self.spec.alpha();
        let iy = self.rl.apply(&y);
        let yg = GridFunction::new(y)?;
        let iy_h = rl_integral_at(&yg, alpha, bc.h);
        let constant = bc.gamma / (1.0 - bc.gamma) * iy_h + bc.offset();
        let n = self.intervals as f64;
        let out: Vec<f64> = iy
            .iter()
            .enumerate()
            .map(|(i, v)| v + bc.mu * i as f64 / n + constant)
            .collect();
        let at_h = iy_h + bc.mu * bc.h + constant;
        Ok((out, at_h))
    }
}

/// One application of the fixed-point operator.
pub fn apply_t(u: &GridFunction, spec: &ProblemSpec) -> Result<GridFunction> {
    if let Some(v) = u.values().iter().find(|v| **v < 0.0) {
        return invalid(format!("operator input must be nonnegative, found {v}"));
    }
    let op = FixedPointOperator::new(spec, u.intervals())?;
    GridFunction::new(op.apply(u.values())?)
}

/// Initial iterate.
#[derive(Debug, Clone, PartialEq)]
pub enum Start {
    Zero,
    Constant(f64),
    Grid(GridFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Number of grid nodes (intervals + 1).
    pub nodes: usize,
    pub tol: f64,
    pub max_iter: usize,
    /// `None` selects 1.0 when `f` is nondecreasing and 0.5 otherwise.
    pub damping: Option<f64>,
    pub start: Start,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            nodes: 257,
            tol: 1e-10,
            max_iter: 500,
            damping: None,
            start: Start::Zero,
        }
    }
}

impl SolverOptions {
    pub const MIN_INTERVALS: usize = 64;

    pub fn validate(&self) -> Result<()> {
        if self.nodes < Self::MIN_INTERVALS + 1 {
            return invalid(format!(
                "grid needs at least {} nodes, got {}",
                Self::MIN_INTERVALS + 1,
                self.nodes
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return invalid(format!("tolerance must be positive, got {}", self.tol));
        }
        if self.max_iter < 1 {
            return invalid("max_iter must be at least 1");
        }
        if let Some(d) = self.damping {
            if !(d > 0.0 && d <= 1.0) {
                return invalid(format!("damping must lie in (0, 1], got {d}"));
            }
        }
        match &self.start {
            Start::Constant(c) if !(c.is_finite() && *c >= 0.0) => {
                invalid(format!("start value must be finite and nonnegative, got {c}"))
            }
            Start::Grid(g) if g.node_count() != self.nodes => invalid(format!(
                "start grid has {} nodes, expected {}",
                g.node_count(),
                self.nodes
            )),
            Start::Grid(g) if g.values().iter().any(|v| *v < 0.0) => {
                invalid("start grid must be nonnegative")
            }
            _ => Ok(()),
        }
    }
}

/// A converged fixed point of `T_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub u: GridFunction,
    /// `‖u - T u‖_∞`.
    pub fp_residual: f64,
    /// `(u(0) - γu(h) - λ, u'(0) - μ)`.
    pub bc_residuals: (f64, f64),
    pub iterations: usize,
    pub converged: bool,
    pub damping: f64,
    /// Sup-norm increments `‖u_{k+1} - u_k‖_∞`, one per iteration.
    pub increments: Vec<f64>,
}

/// Iterates above this sup norm count as divergence.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// Damped Picard iteration `u_{k+1} = (1-d) u_k + d T u_k`, stopped when the
/// sup-norm increment drops below `opts.tol`.
pub fn solve_fixed_point(spec: &ProblemSpec, opts: &SolverOptions) -> Result<Solution> {
    opts.validate()?;
    let intervals = opts.nodes - 1;
    let op = FixedPointOperator::new(spec, intervals)?;
    let damping = opts
        .damping
        .unwrap_or(if spec.f_nondecreasing() { 1.0 } else { 0.5 });
    let mut u = match &opts.start {
        Start::Zero => vec![0.0; opts.nodes],
        Start::Constant(c) => vec![*c; opts.nodes],
        Start::Grid(g) => g.values().to_vec(),
    };
    let mut increments = Vec::new();
    for k in 1..=opts.max_iter {
        let tu = match op.apply(&u) {
            Ok(v) => v,
            Err(Error::Numeric(_)) => {
                return Err(Error::Diverged {
                    iteration: k,
                    norm: f64::INFINITY,
                })
            }
            Err(e) => return Err(e),
        };
        let mut inc = 0.0f64;
        let mut norm = 0.0f64;
        for (ui, ti) in u.iter_mut().zip(&tu) {
            let next = (1.0 - damping) * *ui + damping * ti;
            inc = inc.max((next - *ui).abs());
            norm = norm.max(next.abs());
            *ui = next;
        }
        increments.push(inc);
        if !norm.is_finite() || norm > DIVERGENCE_NORM {
            return Err(Error::Diverged { iteration: k, norm });
        }
        if inc < opts.tol {
            let (tu, tu_h) = op.apply_with_h(&u)?;
            let fp_residual = u
                .iter()
                .zip(&tu)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            let u = GridFunction::new(u)?;
            let bc_residuals = bc_residuals(&u, tu_h, &spec.boundary());
            return Ok(Solution {
                u,
                fp_residual,
                bc_residuals,
                iterations: k,
                converged: true,
                damping,
                increments,
            });
        }
    }
    Err(Error::MaxIterExceeded {
        iterations: opts.max_iter,
        last_increment: increments.last().copied().unwrap_or(f64::NAN),
        history: increments,
    })
}

/// Result of checking `u(t) ≥ c_δ ‖u‖_∞` on `[δ, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundReport {
    pub delta: f64,
    pub c_delta: f64,
    /// `min_{t ∈ [δ,1]} u(t) - c_δ ‖u‖_∞`.
    pub min_margin: f64,
    pub passed: bool,
}

impl LowerBoundReport {
    pub const SLACK: f64 = 1e-9;
}

pub fn lower_bound_check(
    u: &GridFunction,
    delta: f64,
    alpha: Order,
    beta: Order,
    q: f64,
) -> Result<LowerBoundReport> {
    let c = c_delta(alpha, beta, q, delta)?.value;
    let norm = u.sup_norm();
    let min_margin = u
        .nodes()
        .zip(u.values())
        .filter(|(t, _)| *t >= delta - 1e-15)
        .map(|(_, v)| v - c * norm)
        .fold(f64::INFINITY, f64::min);
    Ok(LowerBoundReport {
        delta,
        c_delta: c,
        min_margin,
        passed: min_margin >= -LowerBoundReport::SLACK,
    })
}
