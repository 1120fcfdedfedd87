//! Screen-position grids and sampled probability curves.

use crate::paths::{classical_constants, PhysicalParams};
use crate::{Error, Result};

/// A uniform symmetric grid of screen positions, um.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub xs: Vec<f64>,
}

impl Grid {
    pub fn symmetric(halfwidth: f64, points: usize) -> Self {
        assert!(points >= 2 && halfwidth > 0.0);
        let n = points as f64 - 1.0;
        Self {
            xs: (0..points)
                .map(|i| -halfwidth + 2.0 * halfwidth * i as f64 / n)
                .collect(),
        }
    }

    /// Half-width chosen so the classical envelope falls below 1e-6 of its
    /// peak at the grid edge.
    pub fn auto_halfwidth(params: &PhysicalParams) -> f64 {
        let c = classical_constants(params);
        let a = -2.0 * c.c2.re;
        let peak_offset = (c.c1.re / a).abs();
        peak_offset + (1e6_f64.ln() / a).sqrt()
    }

    pub fn auto(params: &PhysicalParams, points: usize) -> Self {
        Self::symmetric(Self::auto_halfwidth(params), points)
    }

    pub fn step(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }
}

/// A sampled non-negative function of screen position together with its
/// normalization constant (the trapezoid integral of the raw values).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCurve {
    pub xs: Vec<f64>,
    /// Raw (un-normalized) values.
    pub values: Vec<f64>,
    /// `integral raw dx`; `values / norm_constant` integrates to 1.
    pub norm_constant: f64,
}

impl ProbabilityCurve {
    pub fn from_raw(xs: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(xs.len(), values.len());
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        let norm_constant = trapezoid(&xs, &values);
        Self {
            xs,
            values,
            norm_constant,
        }
    }

    /// Values rescaled to unit trapezoid integral.
    pub fn normalized_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v / self.norm_constant).collect()
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.xs, &self.values)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Value at the grid point closest to x = 0.
    pub fn value_at_center(&self) -> f64 {
        let i = self
            .xs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap();
        self.values[i]
    }

    /// Counts strict interior local maxima above `floor_rel` of the peak;
    /// the floor keeps tail noise out of fringe counts.
    pub fn count_interior_maxima(&self, floor_rel: f64) -> usize {
        let floor = self.max_value() * floor_rel;
        let v = &self.values;
        (1..v.len() - 1)
            .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > floor)
            .count()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.xs == other.xs
    }

    pub fn check_shared_grid<'a>(curves: impl IntoIterator<Item = &'a Self>) -> Result<()> {
        let mut iter = curves.into_iter();
        let first = match iter.next() {
            Some(c) => c,
            None => return Ok(()),
        };
        for c in iter {
            if !first.same_grid(c) {
                return Err(Error::GridMismatch);
            }
        }
        Ok(())
    }
}

pub fn trapezoid(xs: &[f64], values: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..xs.len() {
        acc += 0.5 * (values[i] + values[i - 1]) * (xs[i] - xs[i - 1]);
    }
    acc
}
