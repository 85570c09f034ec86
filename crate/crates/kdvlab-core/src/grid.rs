use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Minimum node count: the third-derivative stencils need this much support.
pub const MIN_POINTS: usize = 8;

/// Uniform discretization of the truncated half-line `[0, L]`.
///
/// Nodes are `x_i = i * dx` with `dx = L / (N - 1)`, so `x_0 = 0` and
/// `x_{N-1} = L` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    length: f64,
    point_count: usize,
    spacing: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn new(length: f64, point_count: usize) -> Result<Self, CoreError> {
        if !length.is_finite() || length <= 0.0 {
            return Err(CoreError::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if point_count < MIN_POINTS {
            return Err(CoreError::InvalidGrid(format!(
                "point count must be at least {MIN_POINTS}, got {point_count}"
            )));
        }
        let denom = (point_count - 1) as f64;
        let spacing = length / denom;
        let nodes = (0..point_count)
            .map(|i| length * i as f64 / denom)
            .collect();
        Ok(Self {
            length,
            point_count,
            spacing,
            nodes,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    /// Number of interior unknowns after eliminating `u(0)` and `u(L)`.
    pub fn interior_count(&self) -> usize {
        self.point_count - 2
    }

    /// Samples a scalar function at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}
