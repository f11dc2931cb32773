use num_complex::Complex;

use super::{BoundaryPolicy, ConservedLedger, LedgerEntry, SolverConfig, Stepper};
use crate::diagnostics::{extract_profile, ProfileSnapshot};
use crate::spectral::FieldState;
use crate::{Error, Real, Result};

/// The field and its profile at a scheduled time.
#[derive(Clone, Debug)]
pub struct Snapshot<T: Real> {
    pub state: FieldState<T>,
    pub profile: ProfileSnapshot<T>,
    pub step: usize,
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct Evolution<T: Real> {
    pub snapshots: Vec<Snapshot<T>>,
    pub ledger: ConservedLedger,
    pub final_state: FieldState<T>,
    pub steps: usize,
}

/// `‖u‖_{H²} + ‖x u‖_{L²}`, the size of the initial data.
pub fn data_norm<T: Real>(state: &FieldState<T>) -> T {
    let u = state.physical_view();
    let grid = state.grid();
    let xu = u.iter().zip(grid.nodes()).fold(T::zero(), |s, (&v, &x)| s + x * x * v * v);
    state.h2_norm() + (xu * grid.dx()).sqrt()
}

/// Runs to `cfg.t_end`, keeping every scheduled snapshot.
pub fn evolve<T: Real>(u0: &FieldState<T>, cfg: &SolverConfig<T>) -> Result<Evolution<T>> {
    evolve_with(u0, cfg, true, &mut |_| Ok(()))
}

/// Runs to `cfg.t_end`, handing each scheduled snapshot to `observer`.
/// Snapshots are kept in the result only when `keep` is set. Running
/// backwards (`t_end` below the start time) is supported.
pub fn evolve_with<T: Real>(
    u0: &FieldState<T>,
    cfg: &SolverConfig<T>,
    keep: bool,
    observer: &mut dyn FnMut(&Snapshot<T>) -> Result<()>,
) -> Result<Evolution<T>> {
    if !(cfg.dt0 > T::zero()) || !cfg.t_end.is_finite() {
        return Err(Error::InvalidInput("need dt0 > 0 and a finite end time".into()));
    }
    if let Some(limit) = cfg.smallness {
        let size = data_norm(u0);
        if size > limit {
            return Err(Error::InvalidInput(format!("data norm {size} exceeds the smallness gate {limit}")));
        }
    }
    let grid = u0.grid().clone();
    let alpha = T::lit(cfg.nonlinearity.alpha());
    let t0 = u0.time();
    let dir = if cfg.t_end >= t0 { T::one() } else { -T::one() };
    let tiny = T::lit(1e-12) * (t0.abs() + cfg.t_end.abs() + T::one());

    // Scheduled times strictly ahead of the start, in the direction of travel.
    let mut targets: Vec<T> = cfg
        .schedule
        .times
        .iter()
        .map(|&t| T::lit(t))
        .filter(|&t| (t - t0) * dir > tiny && (cfg.t_end - t) * dir >= -tiny)
        .collect();
    if dir < T::zero() {
        targets.reverse();
    }
    if targets.last().is_none_or(|&t| (cfg.t_end - t).abs() > tiny) {
        targets.push(cfg.t_end);
    }
    let scheduled = |t: T| cfg.schedule.times.iter().any(|&s| (T::lit(s) - t).abs() <= tiny);

    let mut stepper = Stepper::new(&grid, cfg.nonlinearity);
    let mut uhat = u0.spectral_view().into_owned();
    let mut ledger = ConservedLedger::default();
    let mut snapshots = Vec::new();
    let mut t = t0;
    let mut steps = 0usize;
    let xi_max = grid.max_frequency();

    let mut emit = |uhat: &[Complex<T>], t: T, steps: usize, snapshots: &mut Vec<Snapshot<T>>| -> Result<()> {
        let state = FieldState::from_spectral(&grid, t, uhat.to_vec())?;
        let profile = extract_profile(&state).with_provenance(&cfg.run_id, steps);
        let snap = Snapshot { state, profile, step: steps };
        observer(&snap)?;
        if keep {
            snapshots.push(snap);
        }
        Ok(())
    };

    let fine0 = grid.inverse(&uhat);
    let (sup0, edge0) = monitor(&fine0, cfg.boundary_zone);
    record(&mut ledger, &mut stepper, &uhat, t, 0, T::zero(), alpha, sup0, edge0, &grid);
    if scheduled(t0) {
        emit(&uhat, t, 0, &mut snapshots)?;
    }
    let mut sup = sup0;

    for target in targets {
        loop {
            let remaining = (target - t) * dir;
            if remaining <= tiny {
                break;
            }
            let mut h = cfg.dt0;
            if cfg.adaptive && sup > T::zero() && alpha != T::zero() {
                let s2 = sup * sup;
                h = h.min(cfg.safety * cfg.stability / (xi_max * s2 * s2));
            }
            let pieces = (remaining / h - T::lit(1e-9)).ceil().max(T::one());
            let h = remaining / pieces;
            stepper.advance(&mut uhat, h * dir).map_err(|e| match e {
                Error::NumericalAbort { reason, .. } => Error::NumericalAbort { t: t.as_f64(), reason },
                other => other,
            })?;
            steps += 1;
            t = if pieces <= T::one() { target } else { t + h * dir };

            // Monitors use the padded samples at the start of the step.
            let (s, edge) = if stepper.start_samples().is_empty() {
                monitor(&grid.inverse(&uhat), cfg.boundary_zone)
            } else {
                monitor(stepper.start_samples(), cfg.boundary_zone)
            };
            sup = s;
            if edge > cfg.boundary_threshold {
                let msg = format!("boundary: |u| at the box edge reached {:.3e} of its maximum near t = {}", edge.as_f64(), t);
                match cfg.boundary {
                    BoundaryPolicy::Off => {}
                    BoundaryPolicy::Warn => ledger.raise(msg),
                    BoundaryPolicy::Abort => return Err(Error::NumericalAbort { t: t.as_f64(), reason: msg }),
                }
            }
            if steps.is_multiple_of(cfg.ledger_every.max(1)) || t == target {
                record(&mut ledger, &mut stepper, &uhat, t, steps, h, alpha, s, edge, &grid);
                let last = *ledger.entries.last().expect("just recorded");
                let first = ledger.entries[0];
                if ConservedLedger::relative_drift(last.mass, first.mass) > cfg.mass_alarm.as_f64() {
                    ledger.raise(format!("mass: relative drift {:.3e} at t = {}", ConservedLedger::relative_drift(last.mass, first.mass), last.t));
                }
                if ConservedLedger::relative_drift(last.hamiltonian, first.hamiltonian) > cfg.hamiltonian_alarm.as_f64() {
                    ledger.raise(format!(
                        "hamiltonian: relative drift {:.3e} at t = {}",
                        ConservedLedger::relative_drift(last.hamiltonian, first.hamiltonian),
                        last.t
                    ));
                }
            }
        }
        if scheduled(target) {
            emit(&uhat, t, steps, &mut snapshots)?;
        }
    }
    let final_state = FieldState::from_spectral(&grid, t, uhat)?;
    Ok(Evolution { snapshots, ledger, final_state, steps })
}

/// `(max|u|, edge ratio)` from samples on a uniform grid over the box.
fn monitor<T: Real>(samples: &[T], zone: T) -> (T, T) {
    let m = samples.len();
    let width = (zone * T::from_usize_lossy(m) / T::lit(2.0)).to_usize().unwrap_or(0).max(1);
    let sup = samples.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let edge = samples[..width].iter().chain(&samples[m - width..]).fold(T::zero(), |a, &v| a.max(v.abs()));
    (sup, if sup > T::zero() { edge / sup } else { T::zero() })
}

#[allow(clippy::too_many_arguments)]
fn record<T: Real>(
    ledger: &mut ConservedLedger,
    stepper: &mut Stepper<T>,
    uhat: &[Complex<T>],
    t: T,
    step: usize,
    dt: T,
    alpha: T,
    sup: T,
    edge: T,
    grid: &crate::spectral::SpectralGrid<T>,
) {
    let dxi = grid.dxi();
    let (mut mass, mut curv) = (T::zero(), T::zero());
    for (c, &xi) in uhat.iter().zip(grid.frequencies()) {
        let p = c.norm_sqr();
        let x2 = xi * xi;
        mass = mass + p;
        curv = curv + x2 * x2 * p;
    }
    let six = if alpha != T::zero() { stepper.sixth_moment(uhat) } else { T::zero() };
    let hamiltonian = curv * dxi / T::lit(2.0) + alpha * six / T::lit(30.0);
    ledger.entries.push(LedgerEntry {
        t: t.as_f64(),
        step,
        dt: dt.as_f64(),
        mass: (mass * dxi).as_f64(),
        hamiltonian: hamiltonian.as_f64(),
        sup_norm: sup.as_f64(),
        edge_ratio: edge.as_f64(),
    });
}
