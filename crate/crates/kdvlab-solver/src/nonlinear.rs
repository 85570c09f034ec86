//! Skew-symmetric discretization of the convective term `u u_x`.
//!
//! The 1/3-split `N(u) = -(1/3) (u . D1 u + D1(u . u))` is orthogonal to `u`
//! in the interior inner product whenever `D1` is skew, which our centered
//! `D1` with eliminated boundary values is. The cubic term therefore drops
//! out of the discrete energy law exactly, mirroring the continuum
//! cancellation.

use kdvlab_core::OperatorSet;

use crate::state::State;

/// Applies the split nonlinearity to an interior vector.
pub(crate) fn nonlinear_interior(ops: &OperatorSet, u: &[f64], out: &mut Vec<f64>) {
    let d1u = ops.d1().matvec(u);
    let usq: Vec<f64> = u.iter().map(|v| v * v).collect();
    let d1usq = ops.d1().matvec(&usq);
    out.clear();
    out.extend(
        u.iter()
            .zip(&d1u)
            .zip(&d1usq)
            .map(|((ui, d1i), dsqi)| -(ui * d1i + dsqi) / 3.0),
    );
}

/// `N(u)` on the full grid; boundary rows are zero.
pub fn nonlinear_term(ops: &OperatorSet, state: &State) -> Vec<f64> {
    let mut out = Vec::new();
    nonlinear_interior(ops, state.interior(), &mut out);
    kdvlab_core::embed_interior(&out, state.values().len())
}
