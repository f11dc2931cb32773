use serde::{Deserialize, Serialize};

use super::{evolve, SnapshotSchedule, SolverConfig};
use crate::spectral::{FieldState, SpectralGrid};
use crate::{Real, Result};

/// Mismatch between a run and its rescaled twin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingDiscrepancy {
    pub lambda: f64,
    pub t_end: f64,
    /// `max_j |u_λ(T, x_j) − λ u(λ⁵T, λx_j)|`.
    pub max_abs: f64,
    /// `max_abs / max|u_λ(T)|`.
    pub relative: f64,
}

/// Exploits the exact symmetry `u ↦ λ u(λ⁵t, λx)`.
///
/// Evolves `u0` to `λ⁵T` on its own grid, and `λ u0(λx)` to `T` on the grid
/// of half length `L/λ` with the same node count, so the nodes correspond
/// one to one. Step sizes are rescaled by `λ⁵`. `cfg.t_end` is `T`.
pub fn scaling_symmetry_check<T: Real>(u0: &FieldState<T>, lambda: T, cfg: &SolverConfig<T>) -> Result<ScalingDiscrepancy> {
    let l5 = lambda.powi(5);
    let grid_a = u0.grid().clone();
    let grid_b = SpectralGrid::with_dealias(grid_a.half_length() / lambda, grid_a.len(), grid_a.dealias_factor())?.shared();

    let mut cfg_a = cfg.clone();
    cfg_a.dt0 = cfg.dt0 * l5;
    cfg_a.t_end = cfg.t_end * l5;
    cfg_a.schedule = SnapshotSchedule::explicit(vec![]);
    let mut cfg_b = cfg.clone();
    cfg_b.schedule = SnapshotSchedule::explicit(vec![]);

    let a0 = FieldState::from_physical(&grid_a, T::zero(), u0.physical_view().into_owned())?;
    let b0 = FieldState::from_physical(&grid_b, T::zero(), u0.physical_view().iter().map(|&v| lambda * v).collect())?;
    let a = evolve(&a0, &cfg_a)?.final_state;
    let b = evolve(&b0, &cfg_b)?.final_state;
    let (ua, ub) = (a.physical_view(), b.physical_view());
    let mut max_abs = T::zero();
    let mut big = T::zero();
    for (&p, &q) in ua.iter().zip(ub.iter()) {
        max_abs = max_abs.max((q - lambda * p).abs());
        big = big.max(q.abs());
    }
    Ok(ScalingDiscrepancy {
        lambda: lambda.as_f64(),
        t_end: cfg.t_end.as_f64(),
        max_abs: max_abs.as_f64(),
        relative: if big > T::zero() { (max_abs / big).as_f64() } else { max_abs.as_f64() },
    })
}
