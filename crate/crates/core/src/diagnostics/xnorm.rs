use serde::{Deserialize, Serialize};

use super::ProfileSnapshot;
use crate::spectral::FieldState;
use crate::{Error, Real, Result};

/// The three parts of the a-priori norm at one time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XNormReport {
    pub t: f64,
    /// `‖u(t)‖_{H²}`.
    pub sobolev: f64,
    /// `‖x f(t)‖_{L²}`, unweighted in time.
    pub xf: f64,
    /// `t^{−1/10} ‖x f(t)‖_{L²}`.
    pub weighted: f64,
    /// `‖f̂(t)‖_{L^∞}`.
    pub flat: f64,
    /// Sum of `sobolev`, `weighted` and `flat`.
    pub total: f64,
    /// Share of `∫f²` in the outer fifth of the box on each side.
    pub edge_share: f64,
    /// Set when `edge_share` is large enough for the periodic `x` weight to matter.
    pub boundary_warning: bool,
}

/// Edge share above which the weighted norm is flagged.
pub const EDGE_SHARE_ALARM: f64 = 1e-10;

/// `‖∂ξ f̂‖_{L²}` by fourth-order centred differences on the frequency grid,
/// with `f̂` taken as zero past the resolved band. Equals `‖x f‖_{L²}`.
pub fn weighted_norm_spectral<T: Real>(snap: &ProfileSnapshot<T>) -> T {
    let order = snap.grid.ascending_order();
    let v: Vec<_> = order.iter().map(|&i| snap.fhat[i]).collect();
    let n = v.len() as isize;
    let at = |k: isize| if k < 0 || k >= n { num_complex::Complex::new(T::zero(), T::zero()) } else { v[k as usize] };
    let h = snap.grid.dxi();
    let c8 = T::lit(8.0);
    let c12 = T::lit(12.0);
    let mut s = T::zero();
    for k in 0..n {
        let d = (at(k - 2) - at(k - 1) * c8 + at(k + 1) * c8 - at(k + 2)) / (c12 * h);
        s = s + d.norm_sqr();
    }
    (s * h).sqrt()
}

/// `‖x f‖_{L²}` evaluated directly on the physical nodes.
pub fn weighted_norm_physical<T: Real>(snap: &ProfileSnapshot<T>) -> T {
    let f = snap.grid.inverse(&snap.fhat);
    let s = f.iter().zip(snap.grid.nodes()).fold(T::zero(), |s, (&v, &x)| s + x * x * v * v);
    (s * snap.grid.dx()).sqrt()
}

fn edge_share<T: Real>(snap: &ProfileSnapshot<T>) -> f64 {
    let f = snap.grid.inverse(&snap.fhat);
    let cut = T::lit(0.8) * snap.grid.half_length();
    let (mut edge, mut all) = (0.0, 0.0);
    for (&v, &x) in f.iter().zip(snap.grid.nodes()) {
        let e = (v * v).as_f64();
        all += e;
        if x.abs() > cut {
            edge += e;
        }
    }
    if all > 0.0 {
        edge / all
    } else {
        0.0
    }
}

/// The a-priori norm `‖u‖_{H²} + t^{−1/10}‖xf‖_{L²} + ‖f̂‖_{L^∞}` at one
/// snapshot. `state` must be the field the profile was taken from.
pub fn x_norm<T: Real>(snap: &ProfileSnapshot<T>, state: &FieldState<T>) -> Result<XNormReport> {
    let t = snap.t.as_f64();
    if !(t >= 1.0) {
        return Err(Error::InvalidInput(format!("the weighted norm is defined for t ≥ 1, got {t}")));
    }
    if **state.grid() != *snap.grid {
        return Err(Error::GridMismatch);
    }
    let sobolev = state.h2_norm().as_f64();
    let xf = weighted_norm_spectral(snap).as_f64();
    let weighted = t.powf(-0.1) * xf;
    let flat = snap.sup_norm().as_f64();
    let edge_share = edge_share(snap);
    Ok(XNormReport {
        t,
        sobolev,
        xf,
        weighted,
        flat,
        total: sobolev + weighted + flat,
        edge_share,
        boundary_warning: edge_share > EDGE_SHARE_ALARM,
    })
}
