//! Exponential decay-rate estimation by least squares on `(t, log norm)`.

use serde::{Deserialize, Serialize};

use crate::error::DiagError;

/// Floor below which samples are excluded (relative to the initial value).
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// Minimum usable samples for a fit.
pub const MIN_SAMPLES: usize = 10;

/// Result of a log-linear decay fit: `norm(t) ~ C e^{-nu t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub norm_tag: String,
    pub window: (f64, f64),
    pub nu: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    /// Samples at or below `RESIDUAL_FLOOR * initial` were excluded.
    pub floor_flagged: bool,
    /// Constant series: slope 0, `R^2` reported as 0 by convention.
    pub degenerate: bool,
    pub samples_used: usize,
}

impl DecayFit {
    pub fn tagged(mut self, tag: &str) -> Self {
        self.norm_tag = tag.to_string();
        self
    }
}

/// Least-squares line through `(t, log norm)` over the window; slope is
/// `-nu`, intercept `log C`. Nonpositive samples and samples below the
/// residual floor are excluded and flagged.
pub fn fit_decay(
    times: &[f64],
    norm_values: &[f64],
    window: (f64, f64),
) -> Result<DecayFit, DiagError> {
    if times.len() != norm_values.len() {
        return Err(DiagError::Config(
            "times and values must have equal length".into(),
        ));
    }
    let (ta, tb) = window;
    if !(ta < tb) {
        return Err(DiagError::Config(format!("window [{ta}, {tb}] is empty")));
    }
    let initial = norm_values.first().copied().unwrap_or(0.0);
    let floor = RESIDUAL_FLOOR * initial;
    let mut floor_flagged = false;
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(norm_values) {
        if t < ta || t > tb {
            continue;
        }
        if !(v > 0.0) || v <= floor {
            floor_flagged = true;
            continue;
        }
        ts.push(t);
        ys.push(v.ln());
    }
    let n = ts.len();
    if n < MIN_SAMPLES {
        return Err(DiagError::InsufficientData {
            needed: MIN_SAMPLES,
            got: n,
        });
    }
    let nf = n as f64;
    let mean_t = ts.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut stt = 0.0;
    let mut sty = 0.0;
    let mut syy = 0.0;
    for (t, y) in ts.iter().zip(&ys) {
        let dt = t - mean_t;
        let dy = y - mean_y;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    // a constant series leaves only summation roundoff in syy
    let degenerate_floor = 1e-24 * nf * (1.0 + mean_y * mean_y);
    let slope = if stt > 0.0 && syy > degenerate_floor {
        sty / stt
    } else {
        0.0
    };
    let intercept = mean_y - slope * mean_t;
    let (r_squared, degenerate) = if syy > degenerate_floor {
        let mut ss_res = 0.0;
        for (t, y) in ts.iter().zip(&ys) {
            let r = y - (intercept + slope * t);
            ss_res += r * r;
        }
        ((1.0 - ss_res / syy).clamp(0.0, 1.0), false)
    } else {
        // constant series: R^2 undefined, reported as 0 by convention
        (0.0, true)
    };
    Ok(DecayFit {
        norm_tag: String::new(),
        window,
        nu: -slope,
        prefactor: intercept.exp(),
        r_squared,
        floor_flagged,
        degenerate,
        samples_used: n,
    })
}
