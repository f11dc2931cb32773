use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::asymptotics::{gamma, GAMMA_CONSTANT};
use crate::resonance::Normalization;
use crate::solver::{BoundaryPolicy, Nonlinearity, SnapshotSchedule};
use crate::spectral::SpectralGrid;
use crate::{Error, Field, Grid, Result, Solver};

/// Prefix of environment variables that override configuration fields.
pub const ENV_PREFIX: &str = "QKDV_";

/// Periodic box `[−L, L)` with `n` nodes and padding factor `dealias`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub half_length: f64,
    pub n: usize,
    #[serde(default = "default_dealias")]
    pub dealias: usize,
}

fn default_dealias() -> usize {
    3
}

/// Initial data families. `amplitude` is `ε₀`: the supremum of the data for
/// the analytic families, and the nominal size used in error budgets for
/// sampled data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `ε₀ e^{−(x−c)²/(2w²)}`.
    Gaussian { amplitude: f64, width: f64, center: f64 },
    /// `ε₀ sech²((x−c)/w)`.
    Sech2 { amplitude: f64, width: f64, center: f64 },
    /// Spectrum `e^{−(ξ/cutoff)^order}`, scaled so that `max|u₀| = ε₀`.
    FlatBand { amplitude: f64, cutoff: f64, order: i32 },
    /// `ε₀ cos(k(x−c)) e^{−(x−c)²/(2w²)}`.
    Packet { amplitude: f64, width: f64, center: f64, carrier: f64 },
    /// Node values from a JSON array of `n` numbers, used as they are.
    Samples { path: PathBuf, amplitude: f64 },
}

impl InitialData {
    pub fn amplitude(&self) -> f64 {
        match *self {
            InitialData::Gaussian { amplitude, .. }
            | InitialData::Sech2 { amplitude, .. }
            | InitialData::FlatBand { amplitude, .. }
            | InitialData::Packet { amplitude, .. }
            | InitialData::Samples { amplitude, .. } => amplitude,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub dt0: f64,
    pub t_end: f64,
    #[serde(default = "yes")]
    pub adaptive: bool,
    #[serde(default)]
    pub nonlinearity: Nonlinearity,
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default)]
    pub boundary: BoundaryPolicy,
    /// Reject data with `‖u₀‖_{H²} + ‖xu₀‖_{L²}` above this.
    #[serde(default)]
    pub smallness: Option<f64>,
}

fn yes() -> bool {
    true
}

fn default_safety() -> f64 {
    0.8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleConfig {
    Geometric { t0: f64, per_octave: u32 },
    Uniform { start: f64, step: f64 },
    Explicit { times: Vec<f64> },
}

impl ScheduleConfig {
    pub fn times(&self, t_end: f64) -> SnapshotSchedule {
        match self {
            ScheduleConfig::Geometric { t0, per_octave } => SnapshotSchedule::geometric(*t0, t_end, *per_octave),
            ScheduleConfig::Uniform { start, step } => SnapshotSchedule::uniform(*start, *step, t_end),
            ScheduleConfig::Explicit { times } => SnapshotSchedule::explicit(times.clone()),
        }
    }
}

/// `s = |x|/t^{1/5}` range with a station count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl StationRange {
    pub fn stations(&self) -> crate::asymptotics::ScaledStations {
        crate::asymptotics::ScaledStations::new(self.lo, self.hi, self.count)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationConfig {
    /// Oscillatory region, `x = −s t^{1/5}`.
    pub oscillatory: StationRange,
    /// Decaying region, `x = s t^{1/5}`.
    pub decay: StationRange,
    /// Derivative envelopes on the oscillatory side.
    pub derivative: StationRange,
}

impl Default for StationConfig {
    fn default() -> Self {
        Self {
            oscillatory: StationRange { lo: 5.0, hi: 50.0, count: 40 },
            decay: StationRange { lo: 2.0, hi: 30.0, count: 40 },
            derivative: StationRange { lo: 5.0, hi: 30.0, count: 60 },
        }
    }
}

/// What to compute after the run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Vector-field identity residual at every snapshot with `t ≥ 1`.
    pub identity: bool,
    /// Region checks (oscillatory, self-similar, decaying).
    pub regions: bool,
    pub normalization: Normalization,
    /// `C` in `γ = (1/10 − Cε₀^{2/5})/5`.
    pub gamma_constant: f64,
    /// Snapshot times used by the oscillatory check.
    pub oscillatory_times: [f64; 2],
    /// Earliest snapshot used by the self-similar check.
    pub self_similar_from: f64,
    /// Frequency band for scattering certificates; skipped when absent.
    pub scattering_band: Option<[f64; 2]>,
    /// Earliest snapshot used by the scattering certificates.
    pub scattering_from: f64,
    /// Append the full acceptance table (extra runs; minutes).
    pub acceptance: bool,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            identity: true,
            regions: true,
            normalization: Normalization::Equation,
            gamma_constant: GAMMA_CONSTANT,
            oscillatory_times: [100.0, 1000.0],
            self_similar_from: 50.0,
            scattering_band: None,
            scattering_from: 1.0,
            acceptance: false,
        }
    }
}

/// One experiment: grid, data, solver, schedule, diagnostics and output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub grid: GridConfig,
    pub initial: InitialData,
    pub solver: SolverSettings,
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub stations: StationConfig,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    20_240_517
}

/// Overridable fields: environment suffix or flag name, and JSON pointer.
const OVERRIDES: &[(&str, &str)] = &[
    ("name", "/name"),
    ("seed", "/seed"),
    ("out", "/output"),
    ("t_end", "/solver/t_end"),
    ("dt0", "/solver/dt0"),
    ("adaptive", "/solver/adaptive"),
    ("nonlinearity", "/solver/nonlinearity"),
    ("amplitude", "/initial/amplitude"),
    ("n", "/grid/n"),
    ("half_length", "/grid/half_length"),
    ("normalization", "/diagnostics/normalization"),
    ("acceptance", "/diagnostics/acceptance"),
];

impl ExperimentConfig {
    /// The reference run: flat band `|ξ| ≲ 0.45` with `ε₀ = 0.1` to `t = 1000`,
    /// snapshots at `2^{k/4}`.
    pub fn reference() -> Self {
        Self {
            name: "reference".into(),
            grid: GridConfig { half_length: 2048.0, n: 4096, dealias: 3 },
            initial: InitialData::FlatBand { amplitude: 0.1, cutoff: 0.45, order: 8 },
            solver: SolverSettings {
                dt0: 0.5,
                t_end: 1000.0,
                adaptive: true,
                nonlinearity: Nonlinearity::Defocusing,
                safety: 0.8,
                boundary: BoundaryPolicy::Warn,
                smallness: None,
            },
            schedule: ScheduleConfig::Geometric { t0: 1.0, per_octave: 4 },
            diagnostics: DiagnosticsConfig::default(),
            stations: StationConfig::default(),
            output: None,
            seed: default_seed(),
        }
    }

    /// A narrow wave packet at carrier 3 on a long box, sampled every 25 time
    /// units from `t = 400`; used for the profile-equation and modified
    /// scattering checks.
    pub fn packet(eps0: f64) -> Self {
        Self {
            name: format!("packet-{eps0}"),
            grid: GridConfig { half_length: 16384.0, n: 36864, dealias: 3 },
            initial: InitialData::Packet { amplitude: eps0, width: 200.0, center: 0.0, carrier: 3.0 },
            solver: SolverSettings { adaptive: false, ..Self::reference().solver },
            schedule: ScheduleConfig::Uniform { start: 400.0, step: 25.0 },
            diagnostics: DiagnosticsConfig {
                identity: false,
                regions: false,
                scattering_band: Some([0.0, 10.0]),
                scattering_from: 450.0,
                ..DiagnosticsConfig::default()
            },
            stations: StationConfig::default(),
            output: None,
            seed: default_seed(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// SHA-256 of the compact JSON form.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(serde_json::to_vec(self)?)))
    }

    pub fn gamma(&self) -> f64 {
        gamma(self.initial.amplitude(), self.diagnostics.gamma_constant)
    }

    /// Sets one overridable field from text. The value is read as JSON when
    /// it parses, otherwise as a string.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim_start_matches("--").replace('-', "_").to_lowercase();
        let pointer = OVERRIDES
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::Config(format!("unknown override {key:?}")))?;
        let mut doc = serde_json::to_value(&*self)?;
        let slot = doc.pointer_mut(pointer).ok_or_else(|| Error::Config(format!("{key} does not apply to this configuration")))?;
        *slot = serde_json::from_str(value).unwrap_or_else(|_| Value::String(value.to_string()));
        let next: Self = serde_json::from_value(doc).map_err(|e| Error::Config(format!("{key}: {e}")))?;
        next.validate()?;
        *self = next;
        Ok(())
    }

    /// Applies `QKDV_*` variables, e.g. `QKDV_T_END=500`. Unknown names
    /// under the prefix are errors.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<()> {
        let mut vars: Vec<(String, String)> = vars.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
        vars.sort();
        for (k, v) in vars {
            self.set(&k[ENV_PREFIX.len()..], &v)?;
        }
        Ok(())
    }

    /// Checks positivity of the physical parameters and that every station
    /// range lies inside its region at every scheduled time `≥ 1`.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let g = &self.grid;
        if !(g.half_length > 0.0) || g.n < 16 || !g.n.is_multiple_of(2) || g.dealias == 0 {
            return bad(format!("grid needs L > 0, even n ≥ 16 and dealias ≥ 1, got {g:?}"));
        }
        let eps = self.initial.amplitude();
        if !(eps >= 0.0) || !eps.is_finite() {
            return bad(format!("amplitude must be finite and nonnegative, got {eps}"));
        }
        match &self.initial {
            InitialData::Gaussian { width, .. } | InitialData::Sech2 { width, .. } | InitialData::Packet { width, .. } if !(*width > 0.0) => {
                return bad(format!("width must be positive, got {width}"));
            }
            InitialData::FlatBand { cutoff, order, .. } if !(*cutoff > 0.0) || *order < 2 => {
                return bad("flat band needs cutoff > 0 and order ≥ 2".into());
            }
            _ => {}
        }
        let s = &self.solver;
        if !(s.dt0 > 0.0) || !(s.t_end > 0.0) || !s.t_end.is_finite() || !(s.safety > 0.0) {
            return bad("dt0, t_end and safety must be positive".into());
        }
        let times: Vec<f64> = self.schedule.times(s.t_end).times.into_iter().filter(|&t| t >= 1.0 && t <= s.t_end).collect();
        let st = &self.stations;
        for (name, r) in [("oscillatory", &st.oscillatory), ("decay", &st.decay), ("derivative", &st.derivative)] {
            if !(r.lo > 0.0 && r.hi >= r.lo) || r.count == 0 {
                return bad(format!("{name} stations need 0 < lo ≤ hi and a positive count"));
            }
        }
        let gam = self.gamma();
        for &t in &times {
            let edge = t.powf(4.0 * gam);
            if st.oscillatory.lo < edge || st.derivative.lo < edge {
                return bad(format!("oscillatory stations start at s = {} but the region begins at s = {edge:.3} at t = {t}", st.oscillatory.lo.min(st.derivative.lo)));
            }
        }
        if st.decay.lo < 1.0 {
            return bad("decay stations must satisfy x ≥ t^(1/5)".into());
        }
        Ok(())
    }

    pub fn build_grid(&self) -> Result<Arc<Grid>> {
        Ok(SpectralGrid::with_dealias(self.grid.half_length, self.grid.n, self.grid.dealias)?.shared())
    }

    /// The initial field on the configured grid.
    pub fn initial_field(&self, grid: &Arc<Grid>) -> Result<Field> {
        let u = match &self.initial {
            &InitialData::Gaussian { amplitude, width, center } => {
                Field::from_fn(grid, 0.0, |x| amplitude * (-(x - center).powi(2) / (2.0 * width * width)).exp())
            }
            &InitialData::Sech2 { amplitude, width, center } => {
                Field::from_fn(grid, 0.0, |x| amplitude / ((x - center) / width).cosh().powi(2))
            }
            &InitialData::Packet { amplitude, width, center, carrier } => Field::from_fn(grid, 0.0, |x| {
                let y = x - center;
                amplitude * (carrier * y).cos() * (-y * y / (2.0 * width * width)).exp()
            }),
            &InitialData::FlatBand { amplitude, cutoff, order } => {
                let shape = Field::from_spectrum(grid, 0.0, |xi| num_complex::Complex64::new((-(xi / cutoff).powi(order)).exp(), 0.0));
                let m = shape.sup_norm();
                let scale = if m > 0.0 { amplitude / m } else { 0.0 };
                shape.apply_multiplier(|_| num_complex::Complex64::new(scale, 0.0))
            }
            InitialData::Samples { path, .. } => {
                let values: Vec<f64> = serde_json::from_str(&std::fs::read_to_string(path)?)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                if values.len() != grid.len() {
                    return Err(Error::Config(format!("{} holds {} samples, grid has {}", path.display(), values.len(), grid.len())));
                }
                Field::from_physical(grid, 0.0, values)?
            }
        };
        Ok(u.synced())
    }

    pub fn solver_config(&self) -> Solver {
        let s = &self.solver;
        let mut cfg = Solver::new(s.dt0, s.t_end).with_schedule(self.schedule.times(s.t_end)).with_nonlinearity(s.nonlinearity);
        cfg.adaptive = s.adaptive;
        cfg.safety = s.safety;
        cfg.boundary = s.boundary;
        cfg.smallness = s.smallness;
        cfg.run_id = self.name.clone();
        cfg
    }
}
