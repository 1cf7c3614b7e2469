//! Uniform time grids for wave-packet discretization.

use crate::error::{ensure_finite, Error, Result};

/// A uniform grid of `n_points` times from `t_min` to `t_max` inclusive,
/// spacing `(t_max - t_min)/(n_points - 1)`. Times are in ps.
///
/// Grids compare equal only when all three fields match exactly; operations
/// that combine two discretized objects require equal grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_min: f64,
    t_max: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, n_points: usize) -> Result<Self> {
        ensure_finite(t_min, "t_min")?;
        ensure_finite(t_max, "t_max")?;
        if n_points < 64 {
            return Err(Error::Domain(format!(
                "time grid needs at least 64 points, got {n_points}"
            )));
        }
        if t_max <= t_min {
            return Err(Error::Domain(format!(
                "time grid needs t_max > t_min, got [{t_min}, {t_max}]"
            )));
        }
        Ok(TimeGrid { t_min, t_max, n_points })
    }

    /// Grid of `n_points` starting at 0 spanning 20 lifetimes — enough that
    /// the truncated tail of an exponential decay carries < 1e-8 probability.
    pub fn for_lifetime(max_lifetime: f64, n_points: usize) -> Result<Self> {
        ensure_finite(max_lifetime, "lifetime")?;
        if max_lifetime <= 0.0 {
            return Err(Error::Domain(format!(
                "lifetime must be positive, got {max_lifetime}"
            )));
        }
        TimeGrid::new(0.0, 20.0 * max_lifetime, n_points)
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn span(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn spacing(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }
}
