//! The acceptance table: one row per criterion, each computed from scratch
//! (or from a supplied reference run) by an independent route.

use std::path::Path;

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::manifest::{CheckRow, LedgerSummary};
use super::run::{analyze, run};
use crate::asymptotics::{phase_strength, scattering_limit, ScatteringOptions};
use crate::diagnostics::{edge_tapered, vector_field_identity_check};
use super::run::IDENTITY_TAPER;
use crate::fit::power_law;
use crate::linear::{dispersive_envelope_check, free_evolve, stationary_phase_error_fit, EnvelopeOptions, QuadratureOptions};
use crate::resonance::{
    coefficient_oracle, derive_resonance_coefficients, exact_catalog, find_stationary_points, integrated_residuals, ode_residual,
    Normalization, PointGroup, ProfileEquation, SaddleOptions, SearchOptions,
};
use crate::solver::{evolve, SnapshotSchedule};
use crate::spectral::{quintic_product, SpectralGrid};
use crate::{Field, Grid, Profile, Rational, Result, Solver};

fn failed(id: &str, title: &str, err: crate::Error) -> CheckRow {
    CheckRow::new(id, title, false, format!("error: {err}"), "")
}

fn guard(id: &str, title: &str, f: impl FnOnce() -> Result<CheckRow>) -> CheckRow {
    f().unwrap_or_else(|e| failed(id, title, e))
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A fitted exponent, or `none` when the fit had too few points.
pub(crate) fn exponent(e: Option<f64>) -> String {
    e.map_or_else(|| "none".into(), |v| format!("{v:.3}"))
}

pub const C1: &str = "resonance catalog golden values at ξ = 1";

/// Exact catalog against the closed forms, and the floating-point
/// multistart catalog against the exact one.
pub fn catalog_check() -> Result<CheckRow> {
    let r = |n: i128, d: i128| Rational::new(n, d);
    let exact = exact_catalog(r(1, 1));
    let golden = |g: PointGroup| match g {
        PointGroup::Fifth => (r(624, 625), r(256, 78_125)),
        PointGroup::Third => (r(80, 81), r(256 * 625, 177_147)),
        PointGroup::ZeroPhase => (r(0, 1), r(256 * 625, 1)),
    };
    let mut exact_ok = exact.len() == 16;
    for p in &exact {
        let (psi, delta) = golden(p.group);
        let abs = if p.determinant < r(0, 1) { -p.determinant } else { p.determinant };
        exact_ok &= p.psi == psi && abs == delta;
    }
    let float = find_stationary_points(1.0, &SearchOptions::default())?;
    let mut worst = 0.0f64;
    for (p, e) in float.points.iter().zip(&exact) {
        let (psi, delta) = (to_f64(&e.psi), to_f64(&e.determinant).abs());
        worst = worst.max((p.psi - psi).abs());
        worst = worst.max((p.delta - delta).abs() / delta);
        for i in 0..4 {
            worst = worst.max((p.point[i] - to_f64(&e.point[i])).abs());
        }
    }
    let pass = exact_ok && float.points.len() == 16 && worst <= 1e-12;
    Ok(CheckRow::new(
        "C1",
        C1,
        pass,
        format!(
            "exact rationals match: {exact_ok}; {} roots from {} starts; worst float deviation {worst:.1e}",
            float.search.distinct_roots, float.search.multistarts
        ),
        "exact match, 16 points, ≤ 1e-12",
    ))
}

pub const C2: &str = "effective-equation coefficients";

/// `c₀ = −i/40` from the formula, and `|c₁|`, `|c₂|` from the steepest-descent
/// quadrature at `λ = 10³` within 1%. The values at `λ = 10⁴` are reported
/// alongside to show the trend.
pub fn coefficient_check(opts: &SaddleOptions) -> Result<CheckRow> {
    let cat = find_stationary_points(1.0, &SearchOptions::default())?;
    let bare = derive_resonance_coefficients(&cat, Normalization::Bare)?;
    let c0_err = (bare.c0 - Complex64::new(0.0, -1.0 / 40.0)).norm();
    let o3 = coefficient_oracle(&cat, 1e3, opts)?;
    let o4 = coefficient_oracle(&cat, 1e4, opts)?;
    let pass = c0_err <= 1e-12 && o3.c1_relative_error() < 0.01 && o3.c2_relative_error() < 0.01;
    Ok(CheckRow::new(
        "C2",
        C2,
        pass,
        format!(
            "|c0 + i/40| = {c0_err:.1e}; at λ=1e3 |c1| off {:.2}% (±{:.2}%), |c2| off {:.2}% (±{:.2}%); at λ=1e4 {:.3}% and {:.3}%",
            100.0 * o3.c1_relative_error(),
            100.0 * o3.c1_uncertainty / o3.c1_formula,
            100.0 * o3.c2_relative_error(),
            100.0 * o3.c2_uncertainty / o3.c2_formula,
            100.0 * o4.c1_relative_error(),
            100.0 * o4.c2_relative_error(),
        ),
        "c0 to 1e-12; |c1|, |c2| within 1% at λ=1e3",
    ))
}

pub const C3: &str = "linear decay rates";

fn gaussian_hat(xi: f64) -> Complex64 {
    Complex64::new((-xi * xi / 2.0).exp(), 0.0)
}

/// Time decay of the supremum over `t ∈ [10, 10⁴]`, right-side spatial
/// decay, and the error exponent of the leading stationary-phase term, all
/// from the quadrature oracle.
pub fn linear_check() -> Result<CheckRow> {
    let times = [10.0, 31.6, 100.0, 316.0, 1000.0, 3162.0, 10000.0];
    let fit = dispersive_envelope_check(&gaussian_hat, &times, 0.0, &EnvelopeOptions::default())?;
    let time = fit.time_fit.map(|f| f.slope);
    let space = fit.spatial_fit.map(|f| f.slope);
    let (err, _) = stationary_phase_error_fit(&gaussian_hat, 100.0, 2.0, 50.0, 240, 12, &QuadratureOptions::default())?;
    let err = err.map(|f| f.slope);
    let pass = time.is_some_and(|s| (s + 0.2).abs() <= 0.02)
        && space.is_some_and(|s| s <= -7.0 / 8.0 + 0.05)
        && err.is_some_and(|s| s <= -0.45 + 0.05);
    Ok(CheckRow::new(
        "C3",
        C3,
        pass,
        format!("time exponent {}, spatial exponent {}, stationary-phase error exponent {}", exponent(time), exponent(space), exponent(err)),
        "−0.2 ± 0.02, ≤ −0.825, ≤ −0.40",
    ))
}

pub const C4: &str = "solver conservation, order and identity residual";

/// Order of the time stepper from three step sizes against a fine
/// reference, on a wide bump where the scheme is in its asymptotic regime.
pub fn self_convergence_order() -> Result<f64> {
    let w = 16.0;
    let g = Grid::new(16.0 * w, 256)?.shared();
    let u0 = Field::from_fn(&g, 0.0, |x| (-x * x / (2.0 * w * w)).exp() * (1.0 + 0.3 * x / w));
    let terminal = |dt: f64| -> Result<Field> {
        let cfg = Solver::new(dt, 5.0).fixed().with_schedule(SnapshotSchedule::explicit(vec![]));
        Ok(evolve(&u0, &cfg)?.final_state)
    };
    let reference = terminal(0.4 / 64.0)?;
    let dts = [0.2, 0.1, 0.05];
    let mut errs = Vec::new();
    for &dt in &dts {
        let u = terminal(dt)?;
        let e = u.physical_view().iter().zip(reference.physical_view().iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        errs.push(e);
    }
    Ok(power_law(&dts, &errs).map_or(f64::NAN, |f| f.slope))
}

pub fn solver_check(cfg: &ExperimentConfig, states: &[Field], ledger: &LedgerSummary) -> Result<CheckRow> {
    let (mass, ham) = (ledger.mass_drift, ledger.hamiltonian_drift);
    let (mut identity, mut full_box) = (0.0f64, 0.0f64);
    for s in states.iter().filter(|s| s.time() >= 1.0) {
        let tapered = edge_tapered(s, IDENTITY_TAPER)?;
        identity = identity.max(vector_field_identity_check(&tapered, cfg.solver.nonlinearity)?.relative);
        full_box = full_box.max(vector_field_identity_check(s, cfg.solver.nonlinearity)?.relative);
    }
    let order = self_convergence_order()?;
    let pass = mass < 1e-10 && ham < 1e-8 && (order - 4.0).abs() <= 0.2 && identity < 1e-6;
    Ok(CheckRow::new(
        "C4",
        C4,
        pass,
        format!(
            "mass drift {mass:.1e}, hamiltonian drift {ham:.1e}, order {order:.3}, identity residual {identity:.1e} (untapered box {full_box:.1e})"
        ),
        "< 1e-10, < 1e-8, 4 ± 0.2, < 1e-6",
    ))
}

/// The three packet runs at `ε₀ ∈ {0.05, 0.1, 0.2}`.
pub const SWEEP: [f64; 3] = [0.05, 0.1, 0.2];

/// Runs the packet sweep, at most `workers` runs at a time.
pub fn packet_sweep(workers: usize) -> Result<Vec<(f64, Vec<Profile>)>> {
    let job = |eps: f64| -> Result<(f64, Vec<Profile>)> {
        let cfg = ExperimentConfig::packet(eps);
        let grid = cfg.build_grid()?;
        let ev = evolve(&cfg.initial_field(&grid)?, &cfg.solver_config())?;
        Ok((eps, ev.snapshots.into_iter().map(|s| s.profile).collect()))
    };
    let mut out = Vec::new();
    for chunk in SWEEP.chunks(workers.max(1)) {
        let results: Vec<Result<(f64, Vec<Profile>)>> = std::thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|&e| s.spawn(move || job(e))).collect();
            handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
        });
        for r in results {
            out.push(r?);
        }
    }
    Ok(out)
}

/// Snapshots from `t = 450` on: the packet has separated from the origin
/// and `|ξ|t^{1/5} ≥ 10` on its band.
const SWEEP_FROM: f64 = 450.0;

/// Positive-frequency band where the final `|f̂|` is at least half its
/// maximum.
fn packet_band(last: &Profile) -> (f64, f64) {
    let peak = last.fhat.iter().zip(last.grid.frequencies()).filter(|(_, &x)| x > 0.0).map(|(f, _)| f.norm()).fold(0.0, f64::max);
    let sel: Vec<f64> = last.fhat.iter().zip(last.grid.frequencies()).filter(|(f, &x)| x > 0.0 && f.norm() >= 0.5 * peak).map(|(_, &x)| x).collect();
    let lo = sel.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = sel.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Per-frequency time-integrated residuals `(ξ, with, without)` of the
/// profile equation.
fn sweep_residuals(profiles: &[Profile], eq: &ProfileEquation) -> Result<Vec<(f64, f64, f64)>> {
    let late: Vec<&Profile> = profiles.iter().filter(|p| p.t >= SWEEP_FROM).collect();
    let band = packet_band(late.last().expect("snapshots"));
    let mut records = Vec::new();
    for w in late.windows(2) {
        records.push(ode_residual(w[0], w[1], band, eq)?);
    }
    Ok(integrated_residuals(&records))
}

pub const C5: &str = "profile equation: resonant term and ε₀⁵ scaling";

/// Improvement factor of the resonant term (worst frequency of the band)
/// and the `ε₀` exponent of the largest residual, per normalisation.
fn ode_summary(sweep: &[(f64, Vec<Profile>)], norm: Normalization) -> Result<(f64, f64, f64)> {
    let eq = ProfileEquation::new(norm)?;
    let mut eps = Vec::new();
    let mut mags = Vec::new();
    let mut worst_gain = f64::INFINITY;
    let mut min_scaled = f64::INFINITY;
    for (e, profiles) in sweep {
        let res = sweep_residuals(profiles, &eq)?;
        for &(xi, with, without) in &res {
            worst_gain = worst_gain.min(without / with);
            min_scaled = min_scaled.min(xi * SWEEP_FROM.powf(0.2));
        }
        eps.push(*e);
        mags.push(res.iter().map(|r| r.1).fold(0.0, f64::max));
    }
    let exponent = power_law(&eps, &mags).map_or(f64::NAN, |f| f.slope);
    Ok((worst_gain, exponent, min_scaled))
}

/// With the coefficient `c₀ = −i/40`: the resonant term must cut the
/// integrated residual by more than 2 at every band frequency, and the
/// residual must scale like `ε₀^{5 ± 0.5}`. The same numbers with the
/// coefficient the equation implies (`−i/200`) are reported alongside.
pub fn profile_equation_check(sweep: &[(f64, Vec<Profile>)]) -> Result<CheckRow> {
    let (gain, exponent, scaled) = ode_summary(sweep, Normalization::Bare)?;
    let (gain_eq, exponent_eq, _) = ode_summary(sweep, Normalization::Equation)?;
    let pass = gain > 2.0 && (exponent - 5.0).abs() <= 0.5 && scaled >= 10.0;
    Ok(CheckRow::new(
        "C5",
        C5,
        pass,
        format!(
            "with c0 = -i/40: worst gain {gain:.3}, exponent {exponent:.3}; with c0 = -i/200: worst gain {gain_eq:.3}, exponent {exponent_eq:.3}; min |ξ|t^(1/5) {scaled:.2}"
        ),
        "gain > 2, exponent 5 ± 0.5",
    ))
}

pub const C6: &str = "modified scattering signature";

/// Cauchy rate of `w̃ = e^{iB}f̂` and the raw-to-modified phase drift ratio
/// on the `ε₀ = 0.1` packet, with `B` built from the equation's own
/// coefficient. The ratio for the `−i/40` coefficient is reported too.
pub fn scattering_check(profiles: &[Profile]) -> Result<CheckRow> {
    let late: Vec<Profile> = profiles.iter().filter(|p| p.t >= SWEEP_FROM).cloned().collect();
    let kappa = phase_strength(Normalization::Equation, crate::solver::Nonlinearity::Defocusing);
    let lim = scattering_limit(&late, &ScatteringOptions::new(kappa, (0.0, 10.0)))?;
    let bare = scattering_limit(&late, &ScatteringOptions::new(1.0, (0.0, 10.0)))?;
    let pass = lim.rate_consistent() && lim.drift_ratio > 3.0 && lim.non_cauchy.is_empty();
    Ok(CheckRow::new(
        "C6",
        C6,
        pass,
        format!(
            "{} band frequencies; w̃ differences ~ t^{:.2}; drift ratio {:.2} (with the -i/40 coefficient {:.2})",
            lim.band_xi.len(),
            lim.fitted_exponent.unwrap_or(f64::NAN),
            lim.drift_ratio,
            bare.drift_ratio
        ),
        &format!("exponent ≤ {:.2}, ratio > 3", lim.predicted_exponent),
    ))
}

/// Pulls one region row out of [`analyze`] on the reference run.
fn region_row(id: &str, title: &str, key: &str, cfg: &ExperimentConfig, states: &[Field], ledger: &LedgerSummary) -> Result<CheckRow> {
    let mut only = cfg.clone();
    only.diagnostics.identity = false;
    only.diagnostics.scattering_band = None;
    let analysis = analyze(&only, states, ledger)?;
    let mut row = analysis
        .checks
        .into_iter()
        .find(|c| c.id == key)
        .ok_or_else(|| crate::Error::InvalidInput(format!("no {key} row")))?;
    row.id = id.into();
    row.title = title.into();
    Ok(row)
}

pub const C7: &str = "oscillatory-region prediction";
pub const C8: &str = "self-similar region";

pub const C9: &str = "infrastructure";

/// Spectral round trip, Parseval, unimodular multipliers, dealiased quintic
/// product against an unaliased fine-grid product, and a byte-identical
/// rerun of a small configuration in `scratch`.
pub fn infrastructure_check(scratch: &Path) -> Result<CheckRow> {
    let g = Grid::new(40.0, 256)?.shared();
    let u = Field::from_fn(&g, 0.0, |x| (-x * x / 6.0).exp() * (1.0 + 0.5 * (0.7 * x).sin()));
    let samples = u.physical_view().into_owned();
    let back = g.inverse(&g.forward(&samples));
    let round = samples.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let parseval = ((u.mass_physical() - u.mass_spectral()) / u.mass_physical()).abs();
    let moved = free_evolve(&u, 123.4);
    let unimodular = ((moved.l2_norm() - u.l2_norm()) / u.l2_norm()).abs();

    // Band-limited data on 64 modes; the unpadded product on 8× the nodes is exact.
    let coarse = SpectralGrid::new(10.0, 64)?.shared();
    let fine = SpectralGrid::with_dealias(10.0, 512, 1)?.shared();
    let kmax = coarse.max_frequency();
    let spec = |xi: f64| if xi.abs() < kmax { Complex64::new((-xi * xi / 8.0).exp(), 0.3 * xi * (-xi * xi / 8.0).exp()) } else { Complex64::new(0.0, 0.0) };
    let a = Field::from_spectrum(&coarse, 0.0, spec);
    let b = Field::from_spectrum(&fine, 0.0, spec);
    let pa = quintic_product([&a, &a, &a, &a, &a])?;
    let pb = quintic_product([&b, &b, &b, &b, &b])?;
    let (sa, sb) = (pa.spectral_view(), pb.spectral_view());
    let mut dealias = 0.0f64;
    for i in 0..coarse.len() {
        let k = coarse.wavenumber(i);
        if i == coarse.nyquist_index() {
            continue;
        }
        if let Some(j) = fine.index_of(k) {
            dealias = dealias.max((sa[i] - sb[j]).norm());
        }
    }

    let mut small = ExperimentConfig::reference();
    small.name = "determinism".into();
    small.grid = super::config::GridConfig { half_length: 64.0, n: 128, dealias: 3 };
    small.solver.t_end = 4.0;
    small.diagnostics.regions = false;
    let (d1, d2) = (scratch.join("first"), scratch.join("second"));
    let _ = std::fs::remove_dir_all(&d1);
    let _ = std::fs::remove_dir_all(&d2);
    let (m1, _) = run(&small, &d1)?;
    let (m2, _) = run(&small, &d2)?;
    let mut identical = m1 == m2;
    for f in m1.files() {
        identical &= std::fs::read(d1.join(&f.path))? == std::fs::read(d2.join(&f.path))?;
    }
    identical &= std::fs::read(d1.join("manifest.json"))? == std::fs::read(d2.join("manifest.json"))?;

    let pass = round < 1e-13 && parseval < 1e-13 && unimodular < 1e-13 && dealias < 1e-12 && identical;
    Ok(CheckRow::new(
        "C9",
        C9,
        pass,
        format!(
            "round trip {round:.1e}, Parseval {parseval:.1e}, unimodular {unimodular:.1e}, dealiasing {dealias:.1e}, byte-identical rerun {identical}"
        ),
        "< 1e-13, < 1e-13, < 1e-13, < 1e-12, true",
    ))
}

/// All nine rows. `states` (snapshot fields in time order) and `ledger`
/// come from the run the solver and region rows are measured on; the packet
/// sweep and the small determinism runs are done here, the latter inside
/// `scratch`.
pub fn acceptance_table(cfg: &ExperimentConfig, states: &[Field], ledger: &LedgerSummary, scratch: &Path) -> Vec<CheckRow> {
    let mut rows = vec![
        guard("C1", C1, catalog_check),
        guard("C2", C2, || coefficient_check(&SaddleOptions::default())),
        guard("C3", C3, linear_check),
        guard("C4", C4, || solver_check(cfg, states, ledger)),
    ];
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    match packet_sweep(workers) {
        Ok(sweep) => {
            rows.push(guard("C5", C5, || profile_equation_check(&sweep)));
            let mid = sweep.iter().find(|(e, _)| *e == 0.1).map(|(_, p)| p.as_slice()).unwrap_or(&[]);
            rows.push(guard("C6", C6, || scattering_check(mid)));
        }
        Err(e) => {
            rows.push(failed("C5", C5, crate::Error::InvalidInput(format!("packet sweep: {e}"))));
            rows.push(failed("C6", C6, e));
        }
    }
    rows.push(guard("C7", C7, || region_row("C7", C7, "oscillatory", cfg, states, ledger)));
    rows.push(guard("C8", C8, || region_row("C8", C8, "self_similar", cfg, states, ledger)));
    rows.push(guard("C9", C9, || infrastructure_check(scratch)));
    rows
}
