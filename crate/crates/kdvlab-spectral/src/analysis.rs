//! Generator analysis bundle and the comparison of the abscissa-predicted
//! rate against a time-domain decay fit.

use serde::{Deserialize, Serialize};

use kdvlab_diagnostics::DecayFit;

/// Abscissa analysis of the conjugated generator at one `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorAnalysis {
    pub b: f64,
    /// Numerical abscissa of the discrete generator.
    pub omega: f64,
    /// The dissipativity bound `b^3 + b` (shifted by `-a0` for constant damping).
    pub bound: f64,
    /// Leading eigenvalue real-part estimate, when separately computed.
    pub lambda_max: Option<f64>,
    pub iterations: usize,
}

impl GeneratorAnalysis {
    /// The abscissa dominates the spectral abscissa whenever both exist.
    pub fn consistent(&self) -> bool {
        match self.lambda_max {
            Some(l) => self.omega >= l - 1e-10 * (1.0 + l.abs()),
            None => true,
        }
    }
}

/// Comparison of the abscissa guarantee with a fitted decay rate for the
/// corresponding weighted norm on a linear run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub omega: f64,
    pub fitted_nu: f64,
    /// `omega < 0` guarantees decay at rate `-omega`; otherwise no guarantee.
    pub decay_guaranteed: bool,
    /// For linear runs: fitted decay must be at least as fast as the
    /// abscissa guarantees, `nu >= -omega - tolerance`. Vacuously true when
    /// no decay is guaranteed.
    pub consistent: bool,
    pub tolerance: f64,
}

pub fn predicted_vs_fitted(
    analysis: &GeneratorAnalysis,
    fit: &DecayFit,
    tolerance: f64,
) -> ComparisonReport {
    let decay_guaranteed = analysis.omega < 0.0;
    let consistent = if decay_guaranteed {
        fit.nu >= -analysis.omega - tolerance
    } else {
        true
    };
    ComparisonReport {
        omega: analysis.omega,
        fitted_nu: fit.nu,
        decay_guaranteed,
        consistent,
        tolerance,
    }
}
