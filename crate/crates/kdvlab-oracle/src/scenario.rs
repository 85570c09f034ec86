//! Analytic scenario descriptions: everything needed to reproduce a run is
//! hashed into the cache key.

use kdvlab_core::{DampingProfile, DampingShape, Grid, OperatorSet};
use kdvlab_solver::InitialDatum;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;

/// Which spatial operators the run uses; `DecayOnly` zeroes the transport
/// and dispersion, leaving the pure-decay ODE limit used by the convergence
/// harness to check the time integrator in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorMode {
    Full,
    DecayOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceScenario {
    pub label: String,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub final_time: f64,
    pub damping_a0: f64,
    pub damping_x0: f64,
    pub damping_shape: DampingShape,
    pub ramp_width: f64,
    /// `a = a0` at every node (overrides the shape).
    pub constant_damping: bool,
    pub datum: InitialDatum,
    pub include_nonlinearity: bool,
    pub operator_mode: OperatorMode,
}

impl ReferenceScenario {
    pub fn grid(&self) -> Result<Grid, OracleError> {
        Ok(Grid::new(self.length, self.points)?)
    }

    pub fn damping(&self, grid: &Grid) -> Result<DampingProfile, OracleError> {
        if self.constant_damping {
            let vals = vec![self.damping_a0; grid.point_count()];
            Ok(DampingProfile::from_samples(
                grid,
                vals,
                self.damping_a0,
                self.damping_x0,
            )?)
        } else {
            Ok(DampingProfile::build(
                grid,
                self.damping_a0,
                self.damping_x0,
                self.damping_shape,
                self.ramp_width,
            )?)
        }
    }

    pub fn operators(&self, grid: &Grid, damping: &DampingProfile) -> Result<OperatorSet, OracleError> {
        Ok(match self.operator_mode {
            OperatorMode::Full => OperatorSet::build(grid, damping)?,
            OperatorMode::DecayOnly => OperatorSet::decay_only(grid, damping)?,
        })
    }

    /// Resolution-independent copy, for refinement studies.
    pub fn with_resolution(&self, points: usize, dt: f64) -> Self {
        Self {
            points,
            dt,
            ..self.clone()
        }
    }

    /// FNV-1a hash of the canonical textual form; the cache key.
    pub fn hash(&self) -> u64 {
        let canon = format!(
            "{}|{:.17e}|{}|{:.17e}|{:.17e}|{:.17e}|{:.17e}|{:?}|{:.17e}|{}|{:?}|{}|{:?}",
            self.label,
            self.length,
            self.points,
            self.dt,
            self.final_time,
            self.damping_a0,
            self.damping_x0,
            self.damping_shape,
            self.ramp_width,
            self.constant_damping,
            self.datum,
            self.include_nonlinearity,
            self.operator_mode,
        );
        fnv1a(canon.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ReferenceScenario {
        ReferenceScenario {
            label: "t".into(),
            length: 50.0,
            points: 8001,
            dt: 2e-4,
            final_time: 1.0,
            damping_a0: 1.5,
            damping_x0: 10.0,
            damping_shape: DampingShape::Step,
            ramp_width: 0.0,
            constant_damping: false,
            datum: InitialDatum::Gaussian {
                center: 5.0,
                width: 1.5,
                amplitude: 0.5,
            },
            include_nonlinearity: true,
            operator_mode: OperatorMode::Full,
        }
    }

    #[test]
    fn hash_sensitive_to_parameters() {
        let a = base();
        let mut b = base();
        b.dt = 1e-4;
        assert_ne!(a.hash(), b.hash());
        let mut c = base();
        c.include_nonlinearity = false;
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash(), base().hash());
    }
}
