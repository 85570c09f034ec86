//! Weighted L2 and H1 norms.

use kdvlab_core::{derivative_full, weighted_l2_sq, Grid, WeightFamily, WeightSpec};
use kdvlab_solver::State;

use crate::error::DiagError;

/// `int phi u^2 dx` by trapezoid.
pub fn weighted_norm_sq(grid: &Grid, state: &State, weight: &WeightSpec) -> f64 {
    weighted_l2_sq(grid, state.values(), weight)
}

/// Weighted squared H1 norm. The polynomial family weighs the `i`-th
/// derivative with `(x+1)^{m-i}`; the exponential family uses `e^{2bx}` on
/// both the function and its derivative; the unit family is the plain H1
/// squared norm.
pub fn weighted_h1_norm_sq(
    grid: &Grid,
    state: &State,
    family: &WeightFamily,
) -> Result<f64, DiagError> {
    let (w0, w1) = h1_weights(grid, family)?;
    let ux = derivative_full(grid, state.values());
    Ok(weighted_l2_sq(grid, state.values(), &w0) + weighted_l2_sq(grid, &ux, &w1))
}

/// Weight pair (function weight, derivative weight) for the H1 norm of a family.
pub fn h1_weights(grid: &Grid, family: &WeightFamily) -> Result<(WeightSpec, WeightSpec), DiagError> {
    match family {
        WeightFamily::Unit => {
            let w = WeightSpec::build(grid, WeightFamily::Unit)?;
            Ok((w.clone(), w))
        }
        WeightFamily::Polynomial { m } => {
            let w0 = WeightSpec::build(grid, WeightFamily::Polynomial { m: *m })?;
            let w1 = WeightSpec::build(
                grid,
                WeightFamily::Polynomial {
                    m: m.saturating_sub(1),
                },
            )?;
            Ok((w0, w1))
        }
        WeightFamily::Exponential { b } => {
            let w = WeightSpec::build(grid, WeightFamily::Exponential { b: *b })?;
            Ok((w.clone(), w))
        }
        other => Err(DiagError::Config(format!(
            "H1 norm is defined for unit, polynomial and exponential families, got {}",
            other.label()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kdvlab_core::Grid;

    fn state_of(grid: &Grid, f: impl Fn(f64) -> f64) -> State {
        State::from_samples_clamped(0.0, grid.sample(f)).unwrap().0
    }

    #[test]
    fn zero_state_vanishes() {
        let grid = Grid::new(50.0, 101).unwrap();
        let w = WeightSpec::build(&grid, WeightFamily::Unit).unwrap();
        let s = State::zero(&grid);
        assert_eq!(weighted_norm_sq(&grid, &s, &w), 0.0);
        assert_eq!(
            weighted_h1_norm_sq(&grid, &s, &WeightFamily::Unit).unwrap(),
            0.0
        );
    }

    #[test]
    fn unit_weight_is_twice_energy() {
        let grid = Grid::new(50.0, 1001).unwrap();
        let w = WeightSpec::build(&grid, WeightFamily::Unit).unwrap();
        let s = state_of(&grid, |x| (x * 0.3).sin() * (-0.1 * x).exp());
        let nsq = weighted_norm_sq(&grid, &s, &w);
        let energy = 0.5 * kdvlab_core::weighted_l2_sq(&grid, s.values(), &w);
        assert!((nsq - 2.0 * energy).abs() < 1e-14 * nsq.abs().max(1.0));
    }

    #[test]
    fn exponential_weight_closed_form() {
        // u = e^{-x}, weight e^{2bx}, b = 1/4: int e^{-1.5 x} dx = 2/3
        let grid = Grid::new(50.0, 4001).unwrap();
        let w = WeightSpec::build(&grid, WeightFamily::Exponential { b: 0.25 }).unwrap();
        let s = state_of(&grid, |x| (-x).exp());
        // boundary clamp at x=0 perturbs one node; compare against raw samples
        let raw = grid.sample(|x| (-x).exp());
        let v = kdvlab_core::weighted_l2_sq(&grid, &raw, &w);
        assert!((v - 2.0 / 3.0).abs() < 1e-4, "value {v}");
        let _ = s;
    }

    #[test]
    fn h1_norm_closed_form() {
        // u = x e^{-x}: int u^2 = 1/4, int (u')^2 = 1/4 with unit weights
        let grid = Grid::new(50.0, 4001).unwrap();
        let s = state_of(&grid, |x| x * (-x).exp());
        let v = weighted_h1_norm_sq(&grid, &s, &WeightFamily::Unit).unwrap();
        assert!((v - 0.5).abs() < 1e-4, "H1^2 value {v}");
    }

    #[test]
    fn polynomial_h1_uses_reduced_weight_on_derivative() {
        let grid = Grid::new(50.0, 2001).unwrap();
        let s = state_of(&grid, |x| x * (-x).exp());
        // m = 1: int (x+1) u^2 + int u_x^2
        let v = weighted_h1_norm_sq(&grid, &s, &WeightFamily::Polynomial { m: 1 }).unwrap();
        // int (x+1) x^2 e^{-2x} = int x^3 e^{-2x} + int x^2 e^{-2x} = 6/16 + 2/8 = 5/8
        let expected = 0.625 + 0.25;
        assert!((v - expected).abs() < 1e-3, "value {v} vs {expected}");
    }
}
