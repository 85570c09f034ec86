//! Interior higher-derivative norms `int_eps^L (x+1)^{m-k} |d^k u|^2 dx`,
//! evaluated away from the boundary where repeated stencils lose accuracy.

use kdvlab_core::{derivative_full, trapezoid_from, Grid, WeightFamily, WeightSpec};
use kdvlab_solver::State;

use crate::error::DiagError;

/// For `k = 1..=k_max`, the trapezoid value of
/// `int_{x >= eps} (x+1)^{m-k} |D^k u|^2 dx`.
pub fn higher_derivative_norms(
    grid: &Grid,
    state: &State,
    eps: f64,
    k_max: usize,
    m: u32,
) -> Result<Vec<f64>, DiagError> {
    if eps < 4.0 * grid.spacing() {
        return Err(DiagError::Config(format!(
            "eps = {eps} must be at least 4 dx = {}",
            4.0 * grid.spacing()
        )));
    }
    if k_max > (m as usize).min(4) {
        return Err(DiagError::Config(format!(
            "k_max = {k_max} exceeds min(m, 4) = {}",
            (m as usize).min(4)
        )));
    }
    let mut out = Vec::with_capacity(k_max);
    let mut d = state.values().to_vec();
    for k in 1..=k_max {
        d = derivative_full(grid, &d);
        let w = WeightSpec::build(
            grid,
            WeightFamily::Polynomial {
                m: m - k as u32,
            },
        )?;
        let integrand: Vec<f64> = d
            .iter()
            .zip(w.phi())
            .map(|(v, p)| p * v * v)
            .collect();
        out.push(trapezoid_from(grid, &integrand, eps));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_all_zero() {
        let grid = Grid::new(50.0, 1001).unwrap();
        let v = higher_derivative_norms(&grid, &State::zero(&grid), 1.0, 2, 2).unwrap();
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn closed_form_first_derivative() {
        // u = e^{-x}, m = 2, k = 1, eps = 1:
        // int_1^inf (x+1) e^{-2x} dx = (5/4) e^{-2}; the L = 50 truncation
        // correction is below 1e-6
        let grid = Grid::new(50.0, 4001).unwrap();
        let raw = grid.sample(|x| (-x).exp());
        let s = State::from_samples_clamped(0.0, raw).unwrap().0;
        let v = higher_derivative_norms(&grid, &s, 1.0, 1, 2).unwrap();
        let exact = 1.25 * (-2.0f64).exp();
        assert!(
            (v[0] - exact).abs() < 1e-4,
            "got {} vs closed form {exact}",
            v[0]
        );
    }

    #[test]
    fn preconditions_enforced() {
        let grid = Grid::new(50.0, 101).unwrap();
        let s = State::zero(&grid);
        assert!(higher_derivative_norms(&grid, &s, grid.spacing(), 1, 2).is_err());
        assert!(higher_derivative_norms(&grid, &s, 5.0, 3, 2).is_err());
        assert!(higher_derivative_norms(&grid, &s, 5.0, 5, 6).is_err());
    }
}
