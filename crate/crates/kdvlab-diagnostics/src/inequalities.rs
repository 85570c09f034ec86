//! Standalone inequality checks with the constants the analysis provides:
//! the Moser bound (`sqrt(2)`), the weighted sup bound (`2 + 2b`), the
//! weighted Poincare bound (`1/b^2`) and the weighted-cubic bound
//! (`2 sqrt(2) / 3`), plus the interpolation estimate
//! `int |u|^3 <= eps ||u_x||^2 + c_eps ||u||^{10/3}` whose constant is only
//! determined empirically.
//!
//! Discrete analogues may infringe by quadrature error, so each pass flag
//! carries a 1.05 slack factor.

use serde::{Deserialize, Serialize};

use kdvlab_core::{derivative_full, trapezoid, weighted_l2_sq, Grid, WeightFamily, WeightSpec};
use kdvlab_solver::State;

use crate::error::DiagError;

/// Slack factor on pass flags: quadrature and one-sided stencils perturb
/// both sides by O(dx^2), 5% is far above that at default resolution.
pub const SLACK: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityMargin {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative means the inequality holds as stated.
    pub margin: f64,
    /// `lhs <= SLACK * rhs`.
    pub pass: bool,
}

impl InequalityMargin {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            margin: rhs - lhs,
            pass: lhs <= SLACK * rhs,
        }
    }
}

/// Empirical constant sample for the interpolation estimate at one `eps`:
/// the smallest `c_eps` making the inequality hold for this state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationSample {
    pub eps: f64,
    pub required_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub margins: Vec<InequalityMargin>,
    pub interpolation: Vec<InterpolationSample>,
    pub all_pass: bool,
}

/// Evaluates both sides of each inequality with discrete norms.
pub fn check_inequalities(grid: &Grid, state: &State, b: f64) -> Result<InequalityReport, DiagError> {
    if !(b > 0.0) {
        return Err(DiagError::Config(format!("b must be positive, got {b}")));
    }
    let u = state.values();
    let ux = derivative_full(grid, u);
    let unit = WeightSpec::build(grid, WeightFamily::Unit)?;
    let expw = WeightSpec::build(grid, WeightFamily::Exponential { b })?;
    let poly1 = WeightSpec::build(grid, WeightFamily::Polynomial { m: 1 })?;
    let poly2 = WeightSpec::build(grid, WeightFamily::Polynomial { m: 2 })?;

    let sup = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let l2 = weighted_l2_sq(grid, u, &unit).sqrt();
    let l2_ux = weighted_l2_sq(grid, &ux, &unit).sqrt();

    // Moser: ||u||_inf <= sqrt(2) ||u_x||^{1/2} ||u||^{1/2}
    let moser = InequalityMargin::new(
        "moser",
        sup,
        (2.0f64).sqrt() * l2_ux.sqrt() * l2.sqrt(),
    );

    // weighted sup bound: sup u^2 e^{2bx} <= (2 + 2b) ||u||_b ||u||_{H1_b}
    let sup_w = u
        .iter()
        .zip(expw.phi())
        .fold(0.0f64, |m, (v, p)| m.max(v * v * p));
    let l2b_sq = weighted_l2_sq(grid, u, &expw);
    let h1b = (l2b_sq + weighted_l2_sq(grid, &ux, &expw)).sqrt();
    let claim1 = InequalityMargin::new("weighted-sup", sup_w, (2.0 + 2.0 * b) * l2b_sq.sqrt() * h1b);

    // weighted Poincare: int u^2 e^{2bx} <= (1/b^2) int u_x^2 e^{2bx}
    let poincare = InequalityMargin::new(
        "weighted-poincare",
        l2b_sq,
        weighted_l2_sq(grid, &ux, &expw) / (b * b),
    );

    // weighted cubic bound:
    // (2/3) int (x+1)|u|^3 <= (2 sqrt 2 / 3) ||u_x||^{1/2} ||u||^{3/2} ||(x+1)u||
    let cubic_lhs = {
        let integrand: Vec<f64> = u
            .iter()
            .zip(poly1.phi())
            .map(|(v, p)| p * v.abs().powi(3))
            .collect();
        (2.0 / 3.0) * trapezoid(grid, &integrand)
    };
    let xw_norm = weighted_l2_sq(grid, u, &poly2).sqrt();
    let c6 = InequalityMargin::new(
        "weighted-cubic",
        cubic_lhs,
        (2.0 * (2.0f64).sqrt() / 3.0) * l2_ux.sqrt() * l2.powf(1.5) * xw_norm,
    );

    // interpolation estimate: report the empirical c_eps per state
    let cubic_unweighted = {
        let integrand: Vec<f64> = u.iter().map(|v| v.abs().powi(3)).collect();
        trapezoid(grid, &integrand)
    };
    let interpolation = [0.5, 1.0]
        .iter()
        .map(|&eps| {
            let denom = l2.powf(10.0 / 3.0);
            let required_c = if denom > 0.0 {
                ((cubic_unweighted - eps * l2_ux * l2_ux) / denom).max(0.0)
            } else {
                0.0
            };
            InterpolationSample { eps, required_c }
        })
        .collect();

    let margins = vec![moser, claim1, poincare, c6];
    let all_pass = margins.iter().all(|m| m.pass);
    Ok(InequalityReport {
        margins,
        interpolation,
        all_pass,
    })
}

/// Empirical `c_eps` over a corpus: the maximum per-state requirement.
pub fn corpus_interpolation_constants(reports: &[InequalityReport]) -> Vec<InterpolationSample> {
    let mut out: Vec<InterpolationSample> = Vec::new();
    for r in reports {
        for s in &r.interpolation {
            match out.iter_mut().find(|o| o.eps == s.eps) {
                Some(o) => o.required_c = o.required_c.max(s.required_c),
                None => out.push(s.clone()),
            }
        }
    }
    out
}
