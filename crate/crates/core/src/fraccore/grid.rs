use crate::error::{invalid, Result};

/// Samples of a function on the uniform mesh `t_i = i / N`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    /// Minimum number of intervals.
    pub const MIN_INTERVALS: usize = 2;

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < Self::MIN_INTERVALS + 1 {
            return invalid(format!(
                "grid function needs at least {} nodes, got {}",
                Self::MIN_INTERVALS + 1,
                values.len()
            ));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("grid value at node {i} is not finite"));
        }
        Ok(GridFunction { values })
    }

    /// Samples `f` on `intervals + 1` nodes.
    pub fn from_fn(intervals: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if intervals < Self::MIN_INTERVALS {
            return invalid(format!("need at least {} intervals", Self::MIN_INTERVALS));
        }
        let n = intervals as f64;
        Self::new((0..=intervals).map(|i| f(i as f64 / n)).collect())
    }

    pub fn constant(intervals: usize, c: f64) -> Result<Self> {
        Self::from_fn(intervals, |_| c)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.len() > Self::MIN_INTERVALS);
        GridFunction { values }
    }

    /// Number of intervals `N`.
    #[inline]
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / self.intervals() as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.intervals() as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.intervals() as f64;
        (0..self.values.len()).map(move |i| i as f64 / n)
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Sup-norm distance; both grids must have the same size.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "grid size mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Piecewise-linear interpolant at `t ∈ [0, 1]`.
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.intervals();
        let x = (t.clamp(0.0, 1.0)) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Restriction to every `factor`-th node of a finer grid.
    pub fn coarsen(&self, factor: usize) -> Result<GridFunction> {
        if factor == 0 || !self.intervals().is_multiple_of(factor) {
            return invalid(format!(
                "cannot coarsen {} intervals by {factor}",
                self.intervals()
            ));
        }
        GridFunction::new(self.values.iter().step_by(factor).copied().collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_guards() {
        assert!(GridFunction::new(vec![0.0, 1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, f64::NAN, 1.0]).is_err());
        assert!(GridFunction::from_fn(1, |t| t).is_err());
        let g = GridFunction::from_fn(4, |t| t * t).unwrap();
        assert_eq!(g.intervals(), 4);
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.values()[2], 0.25);
    }

    #[test]
    fn interpolation_and_coarsening() {
        let g = GridFunction::from_fn(8, |t| 3.0 * t - 1.0).unwrap();
        assert!((g.interpolate(0.3) - (-0.1)).abs() < 1e-15);
        assert_eq!(g.interpolate(1.0), 2.0);
        let c = g.coarsen(2).unwrap();
        assert_eq!(c.intervals(), 4);
        assert_eq!(c.values()[1], g.values()[2]);
        assert!(g.coarsen(3).is_err());
    }
}
