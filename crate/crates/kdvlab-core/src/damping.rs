use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grid::Grid;

/// Shape of the damping coefficient `a(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DampingShape {
    /// `a = 0` below the activation point, `a = a0` at and beyond it.
    Step,
    /// `C^1` cubic blend from 0 to `a0` across `[x0, x0 + ramp_width]`.
    SmoothRamp,
    /// User-supplied nonnegative samples.
    Custom,
}

/// Localized damping coefficient sampled on a grid, with the hypothesis
/// metadata (`a >= a0 > 0` beyond the activation point `x0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DampingProfile {
    values: Vec<f64>,
    floor: f64,
    activation: f64,
    ramp_width: f64,
    shape: DampingShape,
    /// Whether `a(x_i) >= a0` holds at every node with `x_i >= x0 + ramp_width`.
    hypothesis_holds: bool,
}

impl DampingProfile {
    /// Builds a step or smooth-ramp profile.
    pub fn build(
        grid: &Grid,
        a0: f64,
        x0: f64,
        shape: DampingShape,
        ramp_width: f64,
    ) -> Result<Self, CoreError> {
        if !a0.is_finite() || a0 <= 0.0 {
            return Err(CoreError::InvalidDamping(format!(
                "floor a0 must be positive, got {a0}"
            )));
        }
        if !x0.is_finite() || x0 <= 0.0 || x0 >= grid.length() {
            return Err(CoreError::InvalidDamping(format!(
                "activation point x0 must lie in (0, L), got {x0} with L = {}",
                grid.length()
            )));
        }
        let values = match shape {
            DampingShape::Step => grid.sample(|x| if x >= x0 { a0 } else { 0.0 }),
            DampingShape::SmoothRamp => {
                if ramp_width < 0.0 || x0 + ramp_width >= grid.length() {
                    return Err(CoreError::InvalidDamping(format!(
                        "ramp width must satisfy 0 <= w and x0 + w < L, got w = {ramp_width}"
                    )));
                }
                grid.sample(|x| {
                    if x <= x0 {
                        0.0
                    } else if x >= x0 + ramp_width {
                        a0
                    } else {
                        let s = (x - x0) / ramp_width;
                        a0 * s * s * (3.0 - 2.0 * s)
                    }
                })
            }
            DampingShape::Custom => {
                return Err(CoreError::InvalidDamping(
                    "custom profiles are built with from_samples".into(),
                ))
            }
        };
        let ramp = if shape == DampingShape::SmoothRamp {
            ramp_width
        } else {
            0.0
        };
        Ok(Self {
            values,
            floor: a0,
            activation: x0,
            ramp_width: ramp,
            shape,
            hypothesis_holds: true,
        })
    }

    /// Wraps user-supplied samples, recording whether the damping hypothesis
    /// (`a >= a0` beyond `x0`) actually holds for them.
    pub fn from_samples(
        grid: &Grid,
        values: Vec<f64>,
        a0: f64,
        x0: f64,
    ) -> Result<Self, CoreError> {
        if values.len() != grid.point_count() {
            return Err(CoreError::SizeMismatch(format!(
                "damping samples ({}) do not match grid ({})",
                values.len(),
                grid.point_count()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("damping samples".into()));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(CoreError::InvalidDamping(
                "damping samples must be nonnegative".into(),
            ));
        }
        if !a0.is_finite() || a0 <= 0.0 || !x0.is_finite() || x0 <= 0.0 || x0 >= grid.length() {
            return Err(CoreError::InvalidDamping(
                "custom profile metadata requires a0 > 0 and x0 in (0, L)".into(),
            ));
        }
        let hypothesis_holds = grid
            .nodes()
            .iter()
            .zip(&values)
            .all(|(&x, &a)| x < x0 || a >= a0);
        Ok(Self {
            values,
            floor: a0,
            activation: x0,
            ramp_width: 0.0,
            shape: DampingShape::Custom,
            hypothesis_holds,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn activation(&self) -> f64 {
        self.activation
    }

    pub fn ramp_width(&self) -> f64 {
        self.ramp_width
    }

    pub fn shape(&self) -> DampingShape {
        self.shape
    }

    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_holds
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}
