//! Spatial weight families for the weighted norms and energy identities:
//! `(x+1)^m`, `e^{2bx}`, the plain `x` multiplier, and user-defined weights.
//!
//! Sampled derivatives are always analytic evaluations of the family's closed
//! form, never finite differences; the residual engine relies on exact
//! `phi'` and `phi'''` to isolate the discretization error of the solution.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grid::Grid;

/// Weight family tag with its parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WeightFamily {
    /// `phi = 1`.
    Unit,
    /// `phi = x` (vanishes at the origin, so the trace term drops).
    LinearX,
    /// `phi = (x+1)^m`, integer `m >= 0`.
    Polynomial { m: u32 },
    /// `phi = e^{2bx}`, `b > 0`.
    Exponential { b: f64 },
    /// User-supplied samples, identified by label.
    Custom { label: String },
}

impl WeightFamily {
    /// Canonical label used to key residual accumulators and CSV columns.
    pub fn label(&self) -> String {
        match self {
            WeightFamily::Unit => "unit".into(),
            WeightFamily::LinearX => "x".into(),
            WeightFamily::Polynomial { m } => format!("poly{m}"),
            WeightFamily::Exponential { b } => format!("exp{b}"),
            WeightFamily::Custom { label } => format!("custom:{label}"),
        }
    }
}

/// A weight sampled on a grid together with its first and third derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    family: WeightFamily,
    phi: Vec<f64>,
    dphi: Vec<f64>,
    d3phi: Vec<f64>,
    phi0: f64,
}

impl WeightSpec {
    pub fn build(grid: &Grid, family: WeightFamily) -> Result<Self, CoreError> {
        let (phi, dphi, d3phi) = match &family {
            WeightFamily::Unit => (
                vec![1.0; grid.point_count()],
                vec![0.0; grid.point_count()],
                vec![0.0; grid.point_count()],
            ),
            WeightFamily::LinearX => (
                grid.nodes().to_vec(),
                vec![1.0; grid.point_count()],
                vec![0.0; grid.point_count()],
            ),
            WeightFamily::Polynomial { m } => {
                let m = *m as i32;
                let p = |x: f64, k: i32| (x + 1.0).powi(k);
                (
                    grid.sample(|x| p(x, m)),
                    grid.sample(|x| m as f64 * p(x, m - 1)),
                    grid.sample(|x| (m * (m - 1) * (m - 2)) as f64 * p(x, m - 3)),
                )
            }
            WeightFamily::Exponential { b } => {
                let b = *b;
                if !b.is_finite() || b <= 0.0 {
                    return Err(CoreError::InvalidWeight(format!(
                        "exponential weight requires b > 0, got {b}"
                    )));
                }
                (
                    grid.sample(|x| (2.0 * b * x).exp()),
                    grid.sample(|x| 2.0 * b * (2.0 * b * x).exp()),
                    grid.sample(|x| 8.0 * b * b * b * (2.0 * b * x).exp()),
                )
            }
            WeightFamily::Custom { .. } => {
                return Err(CoreError::InvalidWeight(
                    "custom weights are built with from_samples".into(),
                ))
            }
        };
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::NonFinite("weight overflows f64 on this grid".into()));
        }
        let phi0 = phi[0];
        Ok(Self {
            family,
            phi,
            dphi,
            d3phi,
            phi0,
        })
    }

    /// Wraps explicit samples of `phi`, `phi'`, `phi'''`.
    pub fn from_samples(
        grid: &Grid,
        label: &str,
        phi: Vec<f64>,
        dphi: Vec<f64>,
        d3phi: Vec<f64>,
    ) -> Result<Self, CoreError> {
        let n = grid.point_count();
        if phi.len() != n || dphi.len() != n || d3phi.len() != n {
            return Err(CoreError::SizeMismatch(
                "weight samples do not match grid".into(),
            ));
        }
        if phi.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(CoreError::InvalidWeight(
                "custom weight must be nonnegative and finite".into(),
            ));
        }
        let phi0 = phi[0];
        Ok(Self {
            family: WeightFamily::Custom {
                label: label.to_string(),
            },
            phi,
            dphi,
            d3phi,
            phi0,
        })
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn dphi(&self) -> &[f64] {
        &self.dphi
    }

    pub fn d3phi(&self) -> &[f64] {
        &self.d3phi
    }

    pub fn phi_origin(&self) -> f64 {
        self.phi0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(50.0, 101).unwrap()
    }

    #[test]
    fn unit_weight_is_poly_zero() {
        let g = grid();
        let u = WeightSpec::build(&g, WeightFamily::Unit).unwrap();
        let p = WeightSpec::build(&g, WeightFamily::Polynomial { m: 0 }).unwrap();
        assert_eq!(u.phi(), p.phi());
        assert!(u.phi().iter().all(|&v| v == 1.0));
        assert!(u.dphi().iter().all(|&v| v == 0.0));
        assert!(u.d3phi().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exponential_at_origin() {
        let g = grid();
        let w = WeightSpec::build(&g, WeightFamily::Exponential { b: 0.5 }).unwrap();
        assert_eq!(w.phi()[0], 1.0);
        assert_eq!(w.dphi()[0], 1.0);
        assert_eq!(w.d3phi()[0], 1.0);
        assert_eq!(w.phi_origin(), 1.0);
    }

    #[test]
    fn polynomial_at_one() {
        let g = Grid::new(50.0, 51).unwrap(); // spacing 1.0, node 1 at x = 1
        let w = WeightSpec::build(&g, WeightFamily::Polynomial { m: 2 }).unwrap();
        assert_eq!(w.phi()[1], 4.0);
        assert_eq!(w.dphi()[1], 4.0);
        assert_eq!(w.d3phi()[1], 0.0);
    }

    #[test]
    fn linear_x_weight() {
        let g = grid();
        let w = WeightSpec::build(&g, WeightFamily::LinearX).unwrap();
        assert_eq!(w.phi_origin(), 0.0);
        assert_eq!(w.phi()[10], g.node(10));
        assert!(w.dphi().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn monotone_positive_families() {
        let g = grid();
        for fam in [
            WeightFamily::Polynomial { m: 3 },
            WeightFamily::Exponential { b: 0.4 },
        ] {
            let w = WeightSpec::build(&g, fam).unwrap();
            assert!(w.phi().iter().all(|&v| v > 0.0));
            assert!(w.phi().windows(2).all(|p| p[1] >= p[0]));
        }
    }

    #[test]
    fn rejects_nonpositive_b() {
        let g = grid();
        assert!(WeightSpec::build(&g, WeightFamily::Exponential { b: 0.0 }).is_err());
        assert!(WeightSpec::build(&g, WeightFamily::Exponential { b: -0.1 }).is_err());
    }
}
