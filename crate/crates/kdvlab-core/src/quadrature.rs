//! Trapezoid quadrature, plain and weighted. Second-order accurate, matching
//! the spatial accuracy of the difference stencils.

use crate::error::CoreError;
use crate::grid::Grid;
use crate::weight::WeightSpec;

/// Trapezoid rule of the node values over the whole grid.
pub fn trapezoid(grid: &Grid, values: &[f64]) -> f64 {
    assert_eq!(values.len(), grid.point_count());
    let n = values.len();
    let inner: f64 = values[1..n - 1].iter().sum();
    grid.spacing() * (0.5 * values[0] + inner + 0.5 * values[n - 1])
}

/// Trapezoid rule of `phi_i * values_i` over the grid.
pub fn quadrature(grid: &Grid, values: &[f64], weight: &WeightSpec) -> Result<f64, CoreError> {
    if values.len() != grid.point_count() {
        return Err(CoreError::SizeMismatch(format!(
            "quadrature values ({}) vs grid ({})",
            values.len(),
            grid.point_count()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::NonFinite("quadrature input".into()));
    }
    let phi = weight.phi();
    let n = values.len();
    let mut acc = 0.5 * (phi[0] * values[0] + phi[n - 1] * values[n - 1]);
    for i in 1..n - 1 {
        acc += phi[i] * values[i];
    }
    Ok(acc * grid.spacing())
}

/// Weighted squared L2 norm: trapezoid of `phi * v^2`.
pub fn weighted_l2_sq(grid: &Grid, values: &[f64], weight: &WeightSpec) -> f64 {
    assert_eq!(values.len(), grid.point_count());
    let phi = weight.phi();
    let n = values.len();
    let mut acc = 0.5 * (phi[0] * values[0] * values[0] + phi[n - 1] * values[n - 1] * values[n - 1]);
    for i in 1..n - 1 {
        acc += phi[i] * values[i] * values[i];
    }
    acc * grid.spacing()
}

/// Trapezoid rule restricted to nodes with `x_i >= x_start`.
pub fn trapezoid_from(grid: &Grid, values: &[f64], x_start: f64) -> f64 {
    assert_eq!(values.len(), grid.point_count());
    let start = grid
        .nodes()
        .iter()
        .position(|&x| x >= x_start)
        .unwrap_or(grid.point_count() - 1);
    let n = values.len();
    if start >= n - 1 {
        return 0.0;
    }
    let inner: f64 = values[start + 1..n - 1].iter().sum();
    grid.spacing() * (0.5 * values[start] + inner + 0.5 * values[n - 1])
}
