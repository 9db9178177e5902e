//! Scenario descriptions and the noise-budget runner.
//!
//! A scenario is a JSON document (see [`ScenarioFile`]) naming one fiber, one
//! quantum channel, a classical channel plan, leakage sources, and optionally
//! a parameter sweep. [`ScenarioFile::resolve`] turns it into a typed
//! [`Scenario`], collecting *every* validation problem instead of stopping at
//! the first; [`Scenario::run_budget`] and [`Scenario::run_sweep`] then
//! evaluate the per-mechanism noise budget, and [`Scenario::oracle_check`]
//! re-derives each closed-form entry by numerical quadrature.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{Direction, LeakageSource, PumpChannel, QuantumChannel};
use crate::fwm::{self, EfficiencyMode, FwmError};
use crate::leakage::{self, LeakageError};
use crate::oracle::{self, OracleError, QuadratureConfig};
use crate::profiles::{
    AttenuationProfile, FiberSpec, ProfileError, SprsEfficiencyProfile, SprsRow,
};
use crate::sprs::{self, SprsError, DEFAULT_ASE_SLICE_GHZ};
use crate::units::{self, Frequency, Power, PowerDensity, UnitsError};

/// Version tag expected in scenario JSON documents.
pub const SCHEMA_VERSION: u32 = 1;

/// Default half-width of the model-uncertainty band, dB.
pub const DEFAULT_UNCERTAINTY_DB: f64 = 1.0;

/// One validation problem, addressed by JSON field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub field: String,
    pub message: String,
}

fn format_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  - {}: {}", i.field, i.message))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("scenario validation failed:\n{}", format_issues(.0))]
    Invalid(Vec<ValidationIssue>),
    #[error("scenario has no sweep section; run a single budget instead or add `sweep`")]
    NoSweepAxis,
    #[error("sweep failed at {} point(s):\n{}", .0.len(),
            .0.iter().map(|(v, m)| format!("  - axis {v}: {m}")).collect::<Vec<_>>().join("\n"))]
    SweepFailed(Vec<(f64, String)>),
    #[error(transparent)]
    Sprs(#[from] SprsError),
    #[error(transparent)]
    Fwm(#[from] FwmError),
    #[error(transparent)]
    Leakage(#[from] LeakageError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

// ---------------------------------------------------------------------------
// JSON document model
// ---------------------------------------------------------------------------

/// The on-disk scenario document. Field names carry their units.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub fiber: FiberConfig,
    pub quantum: QuantumConfig,
    #[serde(default)]
    pub plan: Vec<ChannelConfig>,
    #[serde(default)]
    pub leakage: Vec<LeakageConfig>,
    /// Receiver/background floor; defaults to zero and must be set explicitly
    /// to model a detector noise plateau.
    #[serde(default)]
    pub background_psd_w_per_hz: f64,
    #[serde(default)]
    pub fwm_mode: FwmMode,
    #[serde(default = "default_ase_slice")]
    pub ase_slice_ghz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

fn default_ase_slice() -> f64 {
    DEFAULT_ASE_SLICE_GHZ
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub length_km: f64,
    pub attenuation: TableSource,
    pub sprs_efficiency: TableSource,
    #[serde(default = "default_rayleigh")]
    pub rayleigh_db_per_km: f64,
    pub beta2_ps2_per_km: f64,
    pub gamma_per_w_km: f64,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
}

fn default_rayleigh() -> f64 {
    FiberSpec::DEFAULT_RAYLEIGH_DB_PER_KM
}

fn default_temperature() -> f64 {
    295.0
}

/// A tabulated profile, either inline or referenced as a CSV file (path
/// relative to the scenario file). Inline attenuation rows are
/// `[wavelength_nm, db_per_km]`; inline SpRS rows are
/// `[pump_wavelength_nm, shift_ghz, efficiency_per_km_ghz]` (linear units so a
/// zero-efficiency table is expressible).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_db_per_km: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_per_km_ghz: Option<Vec<(f64, f64, f64)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelConfig {
    Cw {
        frequency_thz: f64,
        power_dbm: f64,
        direction: Direction,
    },
    Ase {
        center_frequency_thz: f64,
        psd_dbm_per_ghz: f64,
        bandwidth_ghz: f64,
        direction: Direction,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakageConfig {
    pub psd_w_per_hz: f64,
    pub direction: Direction,
}

/// Which FWM efficiency the budget's `fwm` entry uses. `Both` budgets carry
/// the exact value in `fwm` (and in the total) plus a supplementary
/// `fwm_averaged` entry excluded from the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FwmMode {
    #[default]
    Exact,
    Averaged,
    Both,
}

/// Partial quadrature overrides; unset fields keep engine defaults.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_refinements: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_panels: Option<usize>,
}

impl OracleSettings {
    pub fn to_config(self) -> QuadratureConfig {
        let d = QuadratureConfig::default();
        QuadratureConfig {
            initial_panels: self.initial_panels.unwrap_or(d.initial_panels),
            rel_tolerance: self.rel_tolerance.unwrap_or(d.rel_tolerance),
            max_refinements: self.max_refinements.unwrap_or(d.max_refinements),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    /// Fiber length, km.
    Length,
    /// Quantum channel frequency, THz.
    QuantumFrequency,
    /// Dimensionless linear scale factor applied to every classical channel
    /// power/PSD and leakage PSD (1.0 = nominal). Background is a receiver
    /// property and is not scaled.
    ClassicalPower,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Length => "length",
            SweepAxis::QuantumFrequency => "quantum-frequency",
            SweepAxis::ClassicalPower => "classical-power",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepConfig {
    /// The inclusive, ordered grid start, start+step, … up to stop (the last
    /// point may fall short of `stop` when the range is not a multiple of the
    /// step).
    pub fn values(&self) -> Vec<f64> {
        let span = (self.stop - self.start) / self.step;
        let n = (span + 1e-9).floor().max(0.0) as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumConfig {
    pub frequency_thz: f64,
    pub bandwidth_ghz: f64,
}

// ---------------------------------------------------------------------------
// Resolution & validation
// ---------------------------------------------------------------------------

impl ScenarioFile {
    pub fn from_json_str(text: &str) -> Result<Self, ScenarioError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    /// Reads, parses and resolves a scenario file; CSV profile paths resolve
    /// relative to the scenario's directory.
    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let file = Self::from_json_str(&text)?;
        let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
        file.resolve(base_dir)
    }

    /// Validates and builds the typed scenario, collecting every problem
    /// found rather than stopping at the first.
    pub fn resolve(&self, base_dir: &Path) -> Result<Scenario, ScenarioError> {
        let mut issues: Vec<ValidationIssue> = Vec::new();
        let mut issue = |field: &str, message: String| {
            issues.push(ValidationIssue {
                field: field.to_string(),
                message,
            });
        };

        if self.schema_version != SCHEMA_VERSION {
            issue(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            );
        }

        let attenuation = match resolve_attenuation(&self.fiber.attenuation, base_dir) {
            Ok(p) => Some(p),
            Err(m) => {
                issue("fiber.attenuation", m);
                None
            }
        };
        let sprs_profile = match resolve_sprs(&self.fiber.sprs_efficiency, base_dir) {
            Ok(p) => Some(p),
            Err(m) => {
                issue("fiber.sprs_efficiency", m);
                None
            }
        };
        let fiber = match (attenuation, sprs_profile) {
            (Some(a), Some(s)) => match FiberSpec::new(
                self.fiber.length_km,
                a,
                s,
                self.fiber.rayleigh_db_per_km,
                self.fiber.beta2_ps2_per_km,
                self.fiber.gamma_per_w_km,
                self.fiber.temperature_k,
            ) {
                Ok(f) => Some(f),
                Err(e) => {
                    issue("fiber", e.to_string());
                    None
                }
            },
            _ => None,
        };

        let quantum = match Frequency::from_thz(self.quantum.frequency_thz)
            .map_err(|e| e.to_string())
            .and_then(|f| {
                QuantumChannel::new(f, self.quantum.bandwidth_ghz).map_err(|e| e.to_string())
            }) {
            Ok(q) => Some(q),
            Err(m) => {
                issue("quantum", m);
                None
            }
        };

        let mut plan = Vec::with_capacity(self.plan.len());
        for (i, ch) in self.plan.iter().enumerate() {
            match resolve_channel(ch) {
                Ok(c) => plan.push(c),
                Err(m) => issue(&format!("plan[{i}]"), m),
            }
        }

        let mut leak = Vec::with_capacity(self.leakage.len());
        for (i, l) in self.leakage.iter().enumerate() {
            match PowerDensity::from_w_per_hz(l.psd_w_per_hz) {
                Ok(psd) => leak.push(LeakageSource {
                    psd,
                    direction: l.direction,
                }),
                Err(e) => issue(&format!("leakage[{i}]"), e.to_string()),
            }
        }

        if !(self.background_psd_w_per_hz.is_finite() && self.background_psd_w_per_hz >= 0.0) {
            issue(
                "background_psd_w_per_hz",
                format!(
                    "must be finite and non-negative, got {}",
                    self.background_psd_w_per_hz
                ),
            );
        }
        if !(self.ase_slice_ghz.is_finite() && self.ase_slice_ghz > 0.0) {
            issue(
                "ase_slice_ghz",
                format!("must be positive, got {}", self.ase_slice_ghz),
            );
        }

        let oracle_cfg = self.oracle.unwrap_or_default().to_config();
        if let Err(e) = oracle_cfg.validate() {
            issue("oracle", e.to_string());
        }

        if let Some(sweep) = &self.sweep {
            if !(sweep.start.is_finite() && sweep.start > 0.0) {
                issue(
                    "sweep.start",
                    format!("must be positive, got {}", sweep.start),
                );
            }
            if !(sweep.stop.is_finite() && sweep.stop >= sweep.start) {
                issue(
                    "sweep.stop",
                    format!("must be ≥ start ({}), got {}", sweep.start, sweep.stop),
                );
            }
            if !(sweep.step.is_finite() && sweep.step > 0.0) {
                issue(
                    "sweep.step",
                    format!("must be positive, got {}", sweep.step),
                );
            }
        }

        // Coverage checks: every lookup the nominal budget will perform must
        // fall inside the tabulated profile domains.
        if let (Some(fiber), Some(quantum)) = (&fiber, &quantum) {
            if let Err(e) = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength()) {
                issue("quantum", e.to_string());
            }
            for (i, ch) in plan.iter().enumerate() {
                let slices = ch.cw_slices(self.ase_slice_ghz);
                // Slice frequencies span an interval, so checking the extreme
                // slices covers the interior ones too.
                let extremes: Vec<_> = if slices.len() <= 1 {
                    slices
                } else {
                    vec![slices[0], *slices.last().expect("non-empty")]
                };
                for (f, _) in extremes {
                    if let Err(e) = fiber.alpha_np_per_km_at(f.to_wavelength()) {
                        issue(&format!("plan[{i}]"), e.to_string());
                    }
                    if let Err(e) = sprs::resolve_efficiency(fiber, f, quantum.frequency()) {
                        issue(&format!("plan[{i}]"), e.to_string());
                    }
                }
            }
            for p in fwm::enumerate_products(&plan, quantum, fiber) {
                if let Err(e) = fiber.alpha_np_per_km_at(p.frequency.to_wavelength()) {
                    issue(
                        &format!("plan (fwm product {},{},{})", p.i, p.j, p.k),
                        e.to_string(),
                    );
                }
            }
        }

        if !issues.is_empty() {
            return Err(ScenarioError::Invalid(issues));
        }
        Ok(Scenario {
            fiber: fiber.expect("no issues recorded"),
            quantum: quantum.expect("no issues recorded"),
            plan,
            leakage: leak,
            background_psd_w_per_hz: self.background_psd_w_per_hz,
            fwm_mode: self.fwm_mode,
            ase_slice_ghz: self.ase_slice_ghz,
            oracle: oracle_cfg,
            sweep: self.sweep,
        })
    }
}

fn exactly_one_of(source: &TableSource) -> Result<(), String> {
    let set = [
        source.csv.is_some(),
        source.samples_db_per_km.is_some(),
        source.samples_per_km_ghz.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if set == 1 {
        Ok(())
    } else {
        Err(format!(
            "give exactly one of `csv`, `samples_db_per_km`, `samples_per_km_ghz` ({set} given)"
        ))
    }
}

fn resolve_attenuation(
    source: &TableSource,
    base_dir: &Path,
) -> Result<AttenuationProfile, String> {
    exactly_one_of(source)?;
    if let Some(path) = &source.csv {
        return AttenuationProfile::from_csv_path(&base_dir.join(path)).map_err(|e| e.to_string());
    }
    if let Some(samples) = &source.samples_db_per_km {
        return AttenuationProfile::new(samples.clone()).map_err(|e| e.to_string());
    }
    Err("attenuation tables use `csv` or `samples_db_per_km`".into())
}

fn resolve_sprs(source: &TableSource, base_dir: &Path) -> Result<SprsEfficiencyProfile, String> {
    exactly_one_of(source)?;
    if let Some(path) = &source.csv {
        return SprsEfficiencyProfile::from_csv_path(&base_dir.join(path))
            .map_err(|e| e.to_string());
    }
    if let Some(rows) = &source.samples_per_km_ghz {
        let rows = rows
            .iter()
            .map(
                |&(pump_wavelength_nm, shift_ghz, efficiency_per_km_ghz)| SprsRow {
                    pump_wavelength_nm,
                    shift_ghz,
                    efficiency_per_km_ghz,
                },
            )
            .collect();
        return SprsEfficiencyProfile::from_rows(rows).map_err(|e| e.to_string());
    }
    Err("SpRS tables use `csv` or `samples_per_km_ghz`".into())
}

fn resolve_channel(ch: &ChannelConfig) -> Result<PumpChannel, String> {
    match *ch {
        ChannelConfig::Cw {
            frequency_thz,
            power_dbm,
            direction,
        } => {
            let f = Frequency::from_thz(frequency_thz).map_err(|e| e.to_string())?;
            let p = Power::from_dbm(power_dbm).map_err(|e| e.to_string())?;
            Ok(PumpChannel::cw(f, p, direction))
        }
        ChannelConfig::Ase {
            center_frequency_thz,
            psd_dbm_per_ghz,
            bandwidth_ghz,
            direction,
        } => {
            let f = Frequency::from_thz(center_frequency_thz).map_err(|e| e.to_string())?;
            let psd = PowerDensity::from_dbm_per_ghz(psd_dbm_per_ghz).map_err(|e| e.to_string())?;
            PumpChannel::ase(f, psd, bandwidth_ghz, direction).map_err(|e| e.to_string())
        }
    }
}

// ---------------------------------------------------------------------------
// Budgets
// ---------------------------------------------------------------------------

/// One mechanism's contribution expressed three equivalent ways: PSD across
/// the quantum filter, in-band power, and photon arrival rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetEntry {
    pub psd_w_per_hz: f64,
    pub power_w: f64,
    pub photons_per_s: f64,
}

impl BudgetEntry {
    pub const ZERO: BudgetEntry = BudgetEntry {
        psd_w_per_hz: 0.0,
        power_w: 0.0,
        photons_per_s: 0.0,
    };

    fn from_power_w(power_w: f64, quantum: &QuantumChannel) -> Self {
        BudgetEntry {
            psd_w_per_hz: power_w / (quantum.bandwidth_ghz() * 1e9),
            power_w,
            photons_per_s: power_w / quantum.frequency().photon_energy_j(),
        }
    }

    fn from_psd(psd_w_per_hz: f64, quantum: &QuantumChannel) -> Self {
        Self::from_power_w(psd_w_per_hz * quantum.bandwidth_ghz() * 1e9, quantum)
    }

    fn plus(&self, other: &BudgetEntry) -> BudgetEntry {
        BudgetEntry {
            psd_w_per_hz: self.psd_w_per_hz + other.psd_w_per_hz,
            power_w: self.power_w + other.power_w,
            photons_per_s: self.photons_per_s + other.photons_per_s,
        }
    }

    fn scaled(&self, factor: f64) -> BudgetEntry {
        BudgetEntry {
            psd_w_per_hz: self.psd_w_per_hz * factor,
            power_w: self.power_w * factor,
            photons_per_s: self.photons_per_s * factor,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.power_w == 0.0 && self.psd_w_per_hz == 0.0 && self.photons_per_s == 0.0
    }
}

/// The per-mechanism noise budget at the quantum receiver. `total` is the
/// component-wise sum of the six mechanism entries; `fwm_averaged` (present
/// in `both` mode) is a supplementary diagnostic excluded from the total.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseBudget {
    pub sprs_co: BudgetEntry,
    pub sprs_counter: BudgetEntry,
    pub rayleigh_ase: BudgetEntry,
    pub co_leakage: BudgetEntry,
    pub fwm: BudgetEntry,
    pub background: BudgetEntry,
    pub total: BudgetEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwm_averaged: Option<BudgetEntry>,
    /// True if any SpRS lookup was thermally synthesized from a one-sided
    /// efficiency table.
    pub synthesized_sprs: bool,
}

impl NoiseBudget {
    /// Mechanism entries in canonical output order, with their names.
    pub fn entries(&self) -> Vec<(&'static str, BudgetEntry)> {
        let mut out = vec![
            ("sprs_co", self.sprs_co),
            ("sprs_counter", self.sprs_counter),
            ("rayleigh_ase", self.rayleigh_ase),
            ("co_leakage", self.co_leakage),
            ("fwm", self.fwm),
        ];
        if let Some(avg) = self.fwm_averaged {
            out.push(("fwm_averaged", avg));
        }
        out.push(("background", self.background));
        out
    }

    fn scaled(&self, factor: f64) -> NoiseBudget {
        NoiseBudget {
            sprs_co: self.sprs_co.scaled(factor),
            sprs_counter: self.sprs_counter.scaled(factor),
            rayleigh_ase: self.rayleigh_ase.scaled(factor),
            co_leakage: self.co_leakage.scaled(factor),
            fwm: self.fwm.scaled(factor),
            background: self.background.scaled(factor),
            total: self.total.scaled(factor),
            fwm_averaged: self.fwm_averaged.map(|e| e.scaled(factor)),
            synthesized_sprs: self.synthesized_sprs,
        }
    }
}

/// Converts an in-band PSD to a photon arrival rate:
/// rate = psd · B / (h·f), with B the filter bandwidth.
pub fn psd_to_photon_rate(
    psd_w_per_hz: f64,
    frequency: Frequency,
    bandwidth_ghz: f64,
) -> Result<f64, UnitsError> {
    if !(psd_w_per_hz.is_finite() && psd_w_per_hz >= 0.0) {
        return Err(UnitsError::Negative {
            quantity: "spectral density (W/Hz)",
            value: psd_w_per_hz,
        });
    }
    if !(bandwidth_ghz.is_finite() && bandwidth_ghz > 0.0) {
        return Err(UnitsError::NotPositive {
            quantity: "bandwidth (GHz)",
            value: bandwidth_ghz,
        });
    }
    Ok(psd_w_per_hz * bandwidth_ghz * 1e9 / frequency.photon_energy_j())
}

/// Scales a budget by ±`half_width_db` to bracket model uncertainty, giving
/// `(lower, upper)`. Every entry keeps the exact ratio 10^(half_width/10)
/// between the two bounds.
pub fn model_uncertainty_band(
    budget: &NoiseBudget,
    half_width_db: f64,
) -> Result<(NoiseBudget, NoiseBudget), UnitsError> {
    if !(half_width_db.is_finite() && half_width_db >= 0.0) {
        return Err(UnitsError::Negative {
            quantity: "uncertainty half-width (dB)",
            value: half_width_db,
        });
    }
    let up = units::db_to_linear(half_width_db);
    Ok((budget.scaled(1.0 / up), budget.scaled(up)))
}

/// A fully resolved, validated scenario ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    fiber: FiberSpec,
    quantum: QuantumChannel,
    plan: Vec<PumpChannel>,
    leakage: Vec<LeakageSource>,
    background_psd_w_per_hz: f64,
    fwm_mode: FwmMode,
    ase_slice_ghz: f64,
    oracle: QuadratureConfig,
    sweep: Option<SweepConfig>,
}

/// One sweep sample.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub axis_value: f64,
    pub budget: NoiseBudget,
}

/// An ordered sweep, one budget per axis value.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

#[derive(Clone, Copy)]
enum PointOverride {
    None,
    Length(f64),
    QuantumFrequency(f64),
    ClassicalPower(f64),
}

impl Scenario {
    pub fn fiber(&self) -> &FiberSpec {
        &self.fiber
    }

    pub fn quantum(&self) -> &QuantumChannel {
        &self.quantum
    }

    pub fn plan(&self) -> &[PumpChannel] {
        &self.plan
    }

    pub fn leakage(&self) -> &[LeakageSource] {
        &self.leakage
    }

    pub fn fwm_mode(&self) -> FwmMode {
        self.fwm_mode
    }

    pub fn oracle_config(&self) -> &QuadratureConfig {
        &self.oracle
    }

    pub fn sweep(&self) -> Option<&SweepConfig> {
        self.sweep.as_ref()
    }

    /// Evaluates the nominal (un-swept) noise budget.
    pub fn run_budget(&self) -> Result<NoiseBudget, ScenarioError> {
        self.budget_with(PointOverride::None)
    }

    /// Evaluates the configured sweep, in parallel, preserving axis order.
    /// Point failures are gathered and reported together.
    pub fn run_sweep(&self) -> Result<SweepResult, ScenarioError> {
        let sweep = self.sweep.ok_or(ScenarioError::NoSweepAxis)?;
        let values = sweep.values();
        let results: Vec<(f64, Result<NoiseBudget, ScenarioError>)> = values
            .par_iter()
            .map(|&v| {
                let ov = match sweep.axis {
                    SweepAxis::Length => PointOverride::Length(v),
                    SweepAxis::QuantumFrequency => PointOverride::QuantumFrequency(v),
                    SweepAxis::ClassicalPower => PointOverride::ClassicalPower(v),
                };
                (v, self.budget_with(ov))
            })
            .collect();

        let mut points = Vec::with_capacity(results.len());
        let mut failures = Vec::new();
        for (axis_value, result) in results {
            match result {
                Ok(budget) => points.push(SweepPoint { axis_value, budget }),
                Err(e) => failures.push((axis_value, e.to_string())),
            }
        }
        if !failures.is_empty() {
            return Err(ScenarioError::SweepFailed(failures));
        }
        Ok(SweepResult {
            axis: sweep.axis,
            points,
        })
    }

    fn budget_with(&self, ov: PointOverride) -> Result<NoiseBudget, ScenarioError> {
        let fiber = match ov {
            PointOverride::Length(l) => self.fiber.with_length(l)?,
            _ => self.fiber.clone(),
        };
        let quantum = match ov {
            PointOverride::QuantumFrequency(f) => {
                self.quantum.with_frequency(Frequency::from_thz(f)?)
            }
            _ => self.quantum,
        };
        let scale = match ov {
            PointOverride::ClassicalPower(s) => s,
            _ => 1.0,
        };
        let plan: Vec<PumpChannel> = if scale == 1.0 {
            self.plan.clone()
        } else {
            self.plan
                .iter()
                .map(|ch| scale_channel(ch, scale))
                .collect::<Result<_, _>>()?
        };
        let leakage: Vec<LeakageSource> = if scale == 1.0 {
            self.leakage.clone()
        } else {
            self.leakage
                .iter()
                .map(|l| {
                    Ok::<_, UnitsError>(LeakageSource {
                        psd: PowerDensity::from_w_per_hz(l.psd.w_per_hz() * scale)?,
                        direction: l.direction,
                    })
                })
                .collect::<Result<_, _>>()?
        };

        let sprs_totals = sprs::total(&plan, &quantum, &fiber, self.ase_slice_ghz)?;

        let products = fwm::enumerate_products(&plan, &quantum, &fiber);
        let fwm_sum = |mode: EfficiencyMode| -> Result<f64, ScenarioError> {
            products
                .iter()
                .map(|p| fwm::product_power(p, &plan, &fiber, mode).map_err(ScenarioError::from))
                .sum()
        };
        let (fwm_w, fwm_averaged_w) = match self.fwm_mode {
            FwmMode::Exact => (fwm_sum(EfficiencyMode::Exact)?, None),
            FwmMode::Averaged => (fwm_sum(EfficiencyMode::Averaged)?, None),
            FwmMode::Both => (
                fwm_sum(EfficiencyMode::Exact)?,
                Some(fwm_sum(EfficiencyMode::Averaged)?),
            ),
        };

        let mut rayleigh_psd = 0.0;
        let mut co_psd = 0.0;
        for source in &leakage {
            match source.direction {
                Direction::Counter => {
                    rayleigh_psd +=
                        leakage::rayleigh_backscatter(source, &quantum, &fiber)?.w_per_hz();
                }
                Direction::Co => {
                    co_psd += leakage::copropagated_leakage(source, &quantum, &fiber)?.w_per_hz();
                }
            }
        }

        let sprs_co = BudgetEntry::from_power_w(sprs_totals.co_w, &quantum);
        let sprs_counter = BudgetEntry::from_power_w(sprs_totals.counter_w, &quantum);
        let rayleigh_ase = BudgetEntry::from_psd(rayleigh_psd, &quantum);
        let co_leakage = BudgetEntry::from_psd(co_psd, &quantum);
        let fwm_entry = BudgetEntry::from_power_w(fwm_w, &quantum);
        let background = BudgetEntry::from_psd(self.background_psd_w_per_hz, &quantum);
        let total = sprs_co
            .plus(&sprs_counter)
            .plus(&rayleigh_ase)
            .plus(&co_leakage)
            .plus(&fwm_entry)
            .plus(&background);
        Ok(NoiseBudget {
            sprs_co,
            sprs_counter,
            rayleigh_ase,
            co_leakage,
            fwm: fwm_entry,
            background,
            total,
            fwm_averaged: fwm_averaged_w.map(|w| BudgetEntry::from_power_w(w, &quantum)),
            synthesized_sprs: sprs_totals.synthesized,
        })
    }

    /// Re-derives every closed-form mechanism entry by numerical quadrature
    /// and reports the relative error per entry. A row fails if it exceeds
    /// `tolerance` or its quadrature did not converge.
    pub fn oracle_check(&self, tolerance: f64) -> Result<Vec<OracleCheckRow>, ScenarioError> {
        let mut rows = Vec::new();
        for (i, ch) in self.plan.iter().enumerate() {
            let direction = ch.direction();
            let closed = match direction {
                Direction::Co => sprs::power_co(ch, &self.quantum, &self.fiber, self.ase_slice_ghz),
                Direction::Counter => {
                    sprs::power_counter(ch, &self.quantum, &self.fiber, self.ase_slice_ghz)
                }
            }?
            .power_w;
            let mechanism = format!("sprs_{direction}_ch{i}");
            rows.push(check_row(mechanism, closed, tolerance, || {
                oracle::integrate_sprs(
                    ch,
                    &self.quantum,
                    &self.fiber,
                    direction,
                    self.ase_slice_ghz,
                    &self.oracle,
                )
            })?);
        }
        for (i, source) in self.leakage.iter().enumerate() {
            // Co-propagating leakage is pure algebra (one exponential), not an
            // integral; there is nothing independent to compare it against.
            if source.direction != Direction::Counter {
                continue;
            }
            let closed =
                leakage::rayleigh_backscatter(source, &self.quantum, &self.fiber)?.w_per_hz();
            rows.push(check_row(
                format!("rayleigh_ch{i}"),
                closed,
                tolerance,
                || oracle::integrate_rayleigh(source, &self.quantum, &self.fiber, &self.oracle),
            )?);
        }
        for p in fwm::enumerate_products(&self.plan, &self.quantum, &self.fiber) {
            let closed = fwm::product_power(&p, &self.plan, &self.fiber, EfficiencyMode::Exact)?;
            let mechanism = format!("fwm_{}_{}_{}", p.i, p.j, p.k);
            rows.push(check_row(mechanism, closed, tolerance, || {
                oracle::integrate_fwm_field(&p, &self.plan, &self.fiber, &self.oracle)
            })?);
        }
        Ok(rows)
    }
}

fn scale_channel(ch: &PumpChannel, scale: f64) -> Result<PumpChannel, UnitsError> {
    Ok(match ch {
        PumpChannel::Cw {
            frequency,
            power,
            direction,
        } => PumpChannel::cw(
            *frequency,
            Power::from_watts(power.watts() * scale)?,
            *direction,
        ),
        PumpChannel::Ase {
            center,
            psd,
            bandwidth_ghz,
            direction,
        } => PumpChannel::ase(
            *center,
            PowerDensity::from_w_per_hz(psd.w_per_hz() * scale)?,
            *bandwidth_ghz,
            *direction,
        )?,
    })
}

/// Verdict for one oracle-check row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Ok,
    ToleranceExceeded,
    NonConvergent,
}

/// One closed-form-vs-quadrature comparison.
#[derive(Debug, Clone, Serialize)]
pub struct OracleCheckRow {
    pub mechanism: String,
    pub closed_form: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_error: Option<f64>,
    pub status: CheckStatus,
}

impl OracleCheckRow {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Ok
    }
}

fn check_row(
    mechanism: String,
    closed_form: f64,
    tolerance: f64,
    oracle_value: impl FnOnce() -> Result<f64, OracleError>,
) -> Result<OracleCheckRow, ScenarioError> {
    match oracle_value() {
        Ok(oracle) => {
            let scale = closed_form.abs().max(oracle.abs()).max(f64::MIN_POSITIVE);
            let rel_error = (closed_form - oracle).abs() / scale;
            Ok(OracleCheckRow {
                mechanism,
                closed_form,
                oracle: Some(oracle),
                rel_error: Some(rel_error),
                status: if rel_error <= tolerance {
                    CheckStatus::Ok
                } else {
                    CheckStatus::ToleranceExceeded
                },
            })
        }
        Err(OracleError::NonConvergence { .. }) => Ok(OracleCheckRow {
            mechanism,
            closed_form,
            oracle: None,
            rel_error: None,
            status: CheckStatus::NonConvergent,
        }),
        Err(other) => Err(other.into()),
    }
}
