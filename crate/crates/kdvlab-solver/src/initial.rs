//! Initial-datum library. Sampled data are clamped to zero at both boundary
//! nodes; the clamping perturbation (relative to the sup norm) is reported
//! and flagged when it exceeds `1e-8`.

use kdvlab_core::Grid;
use serde::{Deserialize, Serialize};

use crate::error::SolverError;
use crate::state::State;

/// Threshold above which the boundary clamp is considered a real perturbation.
pub const CLAMP_REPORT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialDatum {
    Gaussian { center: f64, width: f64, amplitude: f64 },
    Sech2 { center: f64, width: f64, amplitude: f64 },
    Hat { center: f64, width: f64, amplitude: f64 },
    Bump { center: f64, width: f64, amplitude: f64 },
    CustomSamples { values: Vec<f64> },
}

/// Sampled datum plus the relative boundary-clamp perturbation.
#[derive(Debug, Clone)]
pub struct SampledDatum {
    pub state: State,
    pub clamp_perturbation: f64,
    pub clamp_flagged: bool,
}

impl InitialDatum {
    pub fn sample(&self, grid: &Grid) -> Result<SampledDatum, SolverError> {
        let values = match self {
            InitialDatum::Gaussian {
                center,
                width,
                amplitude,
            } => {
                check_shape(*width, *amplitude)?;
                grid.sample(|x| amplitude * (-((x - center) / width).powi(2)).exp())
            }
            InitialDatum::Sech2 {
                center,
                width,
                amplitude,
            } => {
                check_shape(*width, *amplitude)?;
                grid.sample(|x| {
                    let s = (x - center) / width;
                    amplitude / s.cosh().powi(2)
                })
            }
            InitialDatum::Hat {
                center,
                width,
                amplitude,
            } => {
                check_shape(*width, *amplitude)?;
                grid.sample(|x| amplitude * (1.0 - ((x - center) / width).abs()).max(0.0))
            }
            InitialDatum::Bump {
                center,
                width,
                amplitude,
            } => {
                check_shape(*width, *amplitude)?;
                grid.sample(|x| {
                    let s = (x - center) / width;
                    if s.abs() < 1.0 {
                        // normalized so the peak value is `amplitude`
                        amplitude * (1.0 - 1.0 / (1.0 - s * s)).exp()
                    } else {
                        0.0
                    }
                })
            }
            InitialDatum::CustomSamples { values } => {
                if values.len() != grid.point_count() {
                    return Err(SolverError::InvalidState(format!(
                        "custom samples ({}) do not match grid ({})",
                        values.len(),
                        grid.point_count()
                    )));
                }
                values.clone()
            }
        };
        let (state, clamp) = State::from_samples_clamped(0.0, values)?;
        Ok(SampledDatum {
            state,
            clamp_perturbation: clamp,
            clamp_flagged: clamp > CLAMP_REPORT_THRESHOLD,
        })
    }
}

fn check_shape(width: f64, amplitude: f64) -> Result<(), SolverError> {
    if !(width > 0.0 && width.is_finite() && amplitude.is_finite()) {
        return Err(SolverError::InvalidState(format!(
            "datum needs positive finite width and finite amplitude, got w={width} a={amplitude}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_clamp_reported() {
        let grid = Grid::new(50.0, 1001).unwrap();
        let d = InitialDatum::Gaussian {
            center: 5.0,
            width: 1.5,
            amplitude: 0.5,
        };
        let s = d.sample(&grid).unwrap();
        assert_eq!(s.state.values()[0], 0.0);
        // exp(-(5/1.5)^2) ~ 1.5e-5 relative clamp at the left boundary
        assert!(s.clamp_flagged);
        assert!((s.clamp_perturbation - (-(5.0f64 / 1.5).powi(2)).exp()).abs() < 1e-9);
    }

    #[test]
    fn hat_is_triangular() {
        let grid = Grid::new(10.0, 1001).unwrap();
        let d = InitialDatum::Hat {
            center: 3.0,
            width: 1.0,
            amplitude: 2.0,
        };
        let s = d.sample(&grid).unwrap();
        let at = |x: f64| s.state.values()[(x / grid.spacing()).round() as usize];
        assert_eq!(at(3.0), 2.0);
        assert_eq!(at(2.0), 0.0);
        assert_eq!(at(4.0), 0.0);
        assert!((at(2.5) - 1.0).abs() < 1e-12);
        assert!(!s.clamp_flagged);
    }

    #[test]
    fn sech2_peak_and_symmetry() {
        let grid = Grid::new(20.0, 2001).unwrap();
        let d = InitialDatum::Sech2 {
            center: 10.0,
            width: 1.5,
            amplitude: 0.8,
        };
        let s = d.sample(&grid).unwrap();
        let at = |x: f64| s.state.values()[(x / grid.spacing()).round() as usize];
        assert!((at(10.0) - 0.8).abs() < 1e-12);
        assert!((at(8.0) - at(12.0)).abs() < 1e-12);
        assert!(at(8.0) > 0.0 && at(8.0) < 0.8);
    }

    #[test]
    fn bump_compact_support_peak_amplitude() {
        let grid = Grid::new(10.0, 2001).unwrap();
        let d = InitialDatum::Bump {
            center: 5.0,
            width: 2.0,
            amplitude: 0.7,
        };
        let s = d.sample(&grid).unwrap();
        let at = |x: f64| s.state.values()[(x / grid.spacing()).round() as usize];
        assert!((at(5.0) - 0.7).abs() < 1e-12);
        assert_eq!(at(7.5), 0.0);
        assert_eq!(at(2.5), 0.0);
    }
}
