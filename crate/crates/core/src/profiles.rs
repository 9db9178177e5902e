//! Wavelength-dependent fiber data: attenuation and spontaneous-Raman
//! efficiency tables, plus the [`FiberSpec`] bundle the models consume.
//!
//! Lookups interpolate piecewise-linearly in linear units and never
//! extrapolate: a query outside the tabulated domain is an error carrying the
//! domain bounds, so a scenario that references uncovered wavelengths fails
//! loudly instead of inventing data.

use std::io::Read;
use std::path::{Path, PathBuf};

use crate::units::{self, Frequency, UnitsError, Wavelength};
use thiserror::Error;

/// Which lookup axis a domain error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileAxis {
    /// Attenuation-profile wavelength, nm.
    Wavelength,
    /// Raman pump wavelength, nm.
    PumpWavelength,
    /// Raman frequency shift (quantum minus pump), GHz.
    Shift,
}

impl ProfileAxis {
    fn label(self) -> &'static str {
        match self {
            ProfileAxis::Wavelength => "wavelength (nm)",
            ProfileAxis::PumpWavelength => "pump wavelength (nm)",
            ProfileAxis::Shift => "frequency shift (GHz)",
        }
    }
}

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("{table} table needs at least {min} rows, got {got}")]
    TooFewRows {
        table: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{table} table: {axis} must be strictly increasing at row {row}", axis = axis.label())]
    NotSorted {
        table: &'static str,
        axis: ProfileAxis,
        row: usize,
    },
    #[error("duplicate SpRS sample for pump {pump_nm} nm, shift {shift_ghz} GHz")]
    DuplicateSample { pump_nm: f64, shift_ghz: f64 },
    #[error("{table} table row {row}: {what} must be finite and non-negative, got {value}")]
    BadValue {
        table: &'static str,
        row: usize,
        what: &'static str,
        value: f64,
    },
    #[error(
        "{axis} {value} outside tabulated range [{min}, {max}]",
        axis = axis.label()
    )]
    OutOfRange {
        axis: ProfileAxis,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error(
        "SpRS table violates detailed balance for pump {pump_nm} nm at |shift| {shift_ghz} GHz: \
         Stokes side {stokes} < anti-Stokes side {anti_stokes}"
    )]
    StokesWeakerThanAntiStokes {
        pump_nm: f64,
        shift_ghz: f64,
        stokes: f64,
        anti_stokes: f64,
    },
    #[error("CSV header must contain column `{column}`{hint}")]
    MissingColumn { column: &'static str, hint: String },
    #[error("CSV row {row}, column `{column}`: cannot parse `{value}` as a number")]
    BadNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("CSV parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Units(#[from] UnitsError),
}

/// Piecewise-linear interpolation over strictly increasing `xs`.
/// Exact at sample points; `None` outside the domain.
fn lerp(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let (&first, &last) = (xs.first()?, xs.last()?);
    if !(x >= first && x <= last) {
        return None;
    }
    match xs.binary_search_by(|probe| probe.partial_cmp(&x).expect("sorted finite samples")) {
        Ok(i) => Some(ys[i]),
        Err(i) => {
            let (x0, x1) = (xs[i - 1], xs[i]);
            let t = (x - x0) / (x1 - x0);
            Some(ys[i - 1] * (1.0 - t) + ys[i] * t)
        }
    }
}

fn check_row_value(
    table: &'static str,
    row: usize,
    what: &'static str,
    value: f64,
) -> Result<f64, ProfileError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ProfileError::BadValue {
            table,
            row,
            what,
            value,
        })
    }
}

/// Fiber attenuation vs wavelength, stored as dB/km samples and interpolated
/// linearly in dB/km.
#[derive(Debug, Clone, PartialEq)]
pub struct AttenuationProfile {
    wavelength_nm: Vec<f64>,
    db_per_km: Vec<f64>,
}

impl AttenuationProfile {
    /// Builds from `(wavelength_nm, attenuation_db_per_km)` rows, which must
    /// be ordered by strictly increasing wavelength.
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, ProfileError> {
        const TABLE: &str = "attenuation";
        if samples.len() < 2 {
            return Err(ProfileError::TooFewRows {
                table: TABLE,
                min: 2,
                got: samples.len(),
            });
        }
        let mut wavelength_nm = Vec::with_capacity(samples.len());
        let mut db_per_km = Vec::with_capacity(samples.len());
        for (row, &(nm, db)) in samples.iter().enumerate() {
            if !(nm.is_finite() && nm > 0.0) {
                return Err(ProfileError::BadValue {
                    table: TABLE,
                    row,
                    what: "wavelength (nm)",
                    value: nm,
                });
            }
            check_row_value(TABLE, row, "attenuation (dB/km)", db)?;
            if let Some(&prev) = wavelength_nm.last() {
                if nm <= prev {
                    return Err(ProfileError::NotSorted {
                        table: TABLE,
                        axis: ProfileAxis::Wavelength,
                        row,
                    });
                }
            }
            wavelength_nm.push(nm);
            db_per_km.push(db);
        }
        Ok(Self {
            wavelength_nm,
            db_per_km,
        })
    }

    /// Reads the two-column CSV format `wavelength_nm,attenuation_db_per_km`.
    /// Lines starting with `#` are comments.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self, ProfileError> {
        let mut rdr = csv_reader(reader);
        let headers = rdr.headers()?.clone();
        let col_nm = find_column(&headers, "wavelength_nm")?;
        let col_db = find_column(&headers, "attenuation_db_per_km")?;
        let mut samples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            samples.push((
                parse_field(&record, col_nm, &headers, row)?,
                parse_field(&record, col_db, &headers, row)?,
            ));
        }
        Self::new(samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self, ProfileError> {
        let file = std::fs::File::open(path).map_err(|source| ProfileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file)
    }

    /// Tabulated wavelength domain `(min_nm, max_nm)`.
    pub fn domain_nm(&self) -> (f64, f64) {
        (
            *self
                .wavelength_nm
                .first()
                .expect("non-empty by construction"),
            *self
                .wavelength_nm
                .last()
                .expect("non-empty by construction"),
        )
    }

    pub fn db_per_km_at(&self, at: Wavelength) -> Result<f64, ProfileError> {
        lerp(&self.wavelength_nm, &self.db_per_km, at.nm()).ok_or(ProfileError::OutOfRange {
            axis: ProfileAxis::Wavelength,
            value: at.nm(),
            min: self.wavelength_nm[0],
            max: *self.wavelength_nm.last().expect("non-empty"),
        })
    }

    /// Power attenuation coefficient in nepers/km (power ∝ e^{-αz}).
    pub fn nepers_per_km_at(&self, at: Wavelength) -> Result<f64, ProfileError> {
        Ok(units::db_per_km_to_nepers(self.db_per_km_at(at)?))
    }
}

/// One pump's Raman-efficiency curve vs frequency shift.
#[derive(Debug, Clone, PartialEq)]
struct PumpCurve {
    shift_ghz: Vec<f64>,
    /// Linear scattering efficiency, km⁻¹·GHz⁻¹.
    per_km_ghz: Vec<f64>,
}

/// A raw SpRS table row in canonical linear units.
///
/// `shift_ghz` is the quantum-channel offset from the pump,
/// f_quantum − f_pump: negative shifts are the Stokes side (quantum below the
/// pump), positive shifts the anti-Stokes side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprsRow {
    pub pump_wavelength_nm: f64,
    pub shift_ghz: f64,
    pub efficiency_per_km_ghz: f64,
}

/// Spontaneous-Raman scattering efficiency ρ(λ_pump, Δν), tabulated on a grid
/// of pump wavelengths each carrying a curve vs frequency shift.
///
/// Lookup interpolates along the shift axis within each bracketing pump curve,
/// then linearly across pump wavelength. All interpolation happens in linear
/// units (km⁻¹·GHz⁻¹).
#[derive(Debug, Clone, PartialEq)]
pub struct SprsEfficiencyProfile {
    pump_nm: Vec<f64>,
    curves: Vec<PumpCurve>,
}

impl SprsEfficiencyProfile {
    /// Builds from flat rows in canonical linear units. Rows may arrive in any
    /// order; they are grouped by pump wavelength and sorted. Duplicate
    /// (pump, shift) keys are rejected, as is any tabulated pair where the
    /// anti-Stokes side exceeds its mirrored Stokes side (thermal occupation
    /// can only reduce anti-Stokes scattering).
    pub fn from_rows(rows: Vec<SprsRow>) -> Result<Self, ProfileError> {
        const TABLE: &str = "SpRS efficiency";
        if rows.is_empty() {
            return Err(ProfileError::TooFewRows {
                table: TABLE,
                min: 2,
                got: 0,
            });
        }
        for (row, r) in rows.iter().enumerate() {
            if !(r.pump_wavelength_nm.is_finite() && r.pump_wavelength_nm > 0.0) {
                return Err(ProfileError::BadValue {
                    table: TABLE,
                    row,
                    what: "pump wavelength (nm)",
                    value: r.pump_wavelength_nm,
                });
            }
            if !r.shift_ghz.is_finite() {
                return Err(ProfileError::BadValue {
                    table: TABLE,
                    row,
                    what: "frequency shift (GHz)",
                    value: r.shift_ghz,
                });
            }
            check_row_value(
                TABLE,
                row,
                "efficiency (1/(km·GHz))",
                r.efficiency_per_km_ghz,
            )?;
        }

        let mut rows = rows;
        rows.sort_by(|a, b| {
            (a.pump_wavelength_nm, a.shift_ghz)
                .partial_cmp(&(b.pump_wavelength_nm, b.shift_ghz))
                .expect("finite keys")
        });

        let mut pump_nm: Vec<f64> = Vec::new();
        let mut curves: Vec<PumpCurve> = Vec::new();
        for r in rows {
            let same_pump = pump_nm.last() == Some(&r.pump_wavelength_nm);
            if !same_pump {
                pump_nm.push(r.pump_wavelength_nm);
                curves.push(PumpCurve {
                    shift_ghz: Vec::new(),
                    per_km_ghz: Vec::new(),
                });
            }
            let curve = curves.last_mut().expect("just pushed");
            if curve.shift_ghz.last() == Some(&r.shift_ghz) {
                return Err(ProfileError::DuplicateSample {
                    pump_nm: r.pump_wavelength_nm,
                    shift_ghz: r.shift_ghz,
                });
            }
            curve.shift_ghz.push(r.shift_ghz);
            curve.per_km_ghz.push(r.efficiency_per_km_ghz);
        }

        for (pump, curve) in pump_nm.iter().zip(&curves) {
            if curve.shift_ghz.len() < 2 {
                return Err(ProfileError::TooFewRows {
                    table: TABLE,
                    min: 2,
                    got: curve.shift_ghz.len(),
                });
            }
            // Detailed balance on exactly mirrored tabulated pairs.
            for (&s, &anti) in curve.shift_ghz.iter().zip(&curve.per_km_ghz) {
                if s <= 0.0 {
                    continue;
                }
                if let Some(stokes) = lerp_exact(&curve.shift_ghz, &curve.per_km_ghz, -s) {
                    if stokes < anti {
                        return Err(ProfileError::StokesWeakerThanAntiStokes {
                            pump_nm: *pump,
                            shift_ghz: s,
                            stokes,
                            anti_stokes: anti,
                        });
                    }
                }
            }
        }

        Ok(Self { pump_nm, curves })
    }

    /// Reads the three-column CSV format with columns `pump_wavelength_nm`,
    /// `shift_ghz` and one efficiency column naming its own units:
    /// `efficiency_db_per_km_ghz` (canonical), `efficiency_per_km_ghz`,
    /// `efficiency_db_per_km_nm` or `efficiency_per_km_nm`. Per-nm forms are
    /// converted using the scattered-light wavelength implied by
    /// pump + shift. Lines starting with `#` are comments.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self, ProfileError> {
        let mut rdr = csv_reader(reader);
        let headers = rdr.headers()?.clone();
        let col_pump = find_column(&headers, "pump_wavelength_nm")?;
        let col_shift = find_column(&headers, "shift_ghz")?;
        let (col_eff, unit) = find_efficiency_column(&headers)?;

        let mut rows = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let pump_nm = parse_field(&record, col_pump, &headers, row)?;
            let shift_ghz = parse_field(&record, col_shift, &headers, row)?;
            let raw = parse_field(&record, col_eff, &headers, row)?;
            let efficiency_per_km_ghz = unit.to_linear_per_km_ghz(raw, pump_nm, shift_ghz)?;
            rows.push(SprsRow {
                pump_wavelength_nm: pump_nm,
                shift_ghz,
                efficiency_per_km_ghz,
            });
        }
        Self::from_rows(rows)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self, ProfileError> {
        let file = std::fs::File::open(path).map_err(|source| ProfileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_reader(file)
    }

    /// Tabulated pump-wavelength domain `(min_nm, max_nm)`.
    pub fn pump_domain_nm(&self) -> (f64, f64) {
        (
            *self.pump_nm.first().expect("non-empty by construction"),
            *self.pump_nm.last().expect("non-empty by construction"),
        )
    }

    /// ρ(λ_pump, Δν) in km⁻¹·GHz⁻¹. Errors carry which axis fell outside the
    /// table so callers can distinguish an uncovered pump from an uncovered
    /// shift.
    pub fn efficiency_at(&self, pump: Wavelength, shift_ghz: f64) -> Result<f64, ProfileError> {
        let nm = pump.nm();
        let (min, max) = self.pump_domain_nm();
        if !(nm >= min && nm <= max) {
            return Err(ProfileError::OutOfRange {
                axis: ProfileAxis::PumpWavelength,
                value: nm,
                min,
                max,
            });
        }
        let at_curve = |curve: &PumpCurve| -> Result<f64, ProfileError> {
            lerp(&curve.shift_ghz, &curve.per_km_ghz, shift_ghz).ok_or(ProfileError::OutOfRange {
                axis: ProfileAxis::Shift,
                value: shift_ghz,
                min: curve.shift_ghz[0],
                max: *curve.shift_ghz.last().expect("non-empty"),
            })
        };
        match self
            .pump_nm
            .binary_search_by(|probe| probe.partial_cmp(&nm).expect("sorted finite pumps"))
        {
            Ok(i) => at_curve(&self.curves[i]),
            Err(i) => {
                let (n0, n1) = (self.pump_nm[i - 1], self.pump_nm[i]);
                let v0 = at_curve(&self.curves[i - 1])?;
                let v1 = at_curve(&self.curves[i])?;
                let t = (nm - n0) / (n1 - n0);
                Ok(v0 * (1.0 - t) + v1 * t)
            }
        }
    }
}

/// Exact-sample lookup only (no interpolation); used for the detailed-balance
/// check on mirrored tabulated shifts.
fn lerp_exact(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    xs.binary_search_by(|probe| probe.partial_cmp(&x).expect("sorted finite samples"))
        .ok()
        .map(|i| ys[i])
}

/// Units an SpRS CSV efficiency column may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EfficiencyUnit {
    DbPerKmGhz,
    LinearPerKmGhz,
    DbPerKmNm,
    LinearPerKmNm,
}

impl EfficiencyUnit {
    const COLUMNS: [(&'static str, EfficiencyUnit); 4] = [
        ("efficiency_db_per_km_ghz", EfficiencyUnit::DbPerKmGhz),
        ("efficiency_per_km_ghz", EfficiencyUnit::LinearPerKmGhz),
        ("efficiency_db_per_km_nm", EfficiencyUnit::DbPerKmNm),
        ("efficiency_per_km_nm", EfficiencyUnit::LinearPerKmNm),
    ];

    fn to_linear_per_km_ghz(
        self,
        raw: f64,
        pump_nm: f64,
        shift_ghz: f64,
    ) -> Result<f64, ProfileError> {
        let linear = match self {
            EfficiencyUnit::DbPerKmGhz | EfficiencyUnit::DbPerKmNm => units::db_to_linear(raw),
            EfficiencyUnit::LinearPerKmGhz | EfficiencyUnit::LinearPerKmNm => raw,
        };
        match self {
            EfficiencyUnit::DbPerKmGhz | EfficiencyUnit::LinearPerKmGhz => Ok(linear),
            EfficiencyUnit::DbPerKmNm | EfficiencyUnit::LinearPerKmNm => {
                // Per-nm densities refer to the scattered light's wavelength.
                let pump = Wavelength::from_nm(pump_nm)?;
                let scattered_thz = pump.to_frequency().thz() + shift_ghz / 1e3;
                let scattered = Frequency::from_thz(scattered_thz)?.to_wavelength();
                Ok(linear / scattered.ghz_per_nm())
            }
        }
    }
}

fn csv_reader(reader: impl Read) -> csv::Reader<impl Read> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn find_column(headers: &csv::StringRecord, name: &'static str) -> Result<usize, ProfileError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| ProfileError::MissingColumn {
            column: name,
            hint: format!(", found columns: {:?}", headers.iter().collect::<Vec<_>>()),
        })
}

fn find_efficiency_column(
    headers: &csv::StringRecord,
) -> Result<(usize, EfficiencyUnit), ProfileError> {
    for (name, unit) in EfficiencyUnit::COLUMNS {
        if let Some(i) = headers.iter().position(|h| h == name) {
            return Ok((i, unit));
        }
    }
    Err(ProfileError::MissingColumn {
        column: "efficiency_db_per_km_ghz",
        hint: format!(
            " (or one of {:?}), found columns: {:?}",
            EfficiencyUnit::COLUMNS.map(|(n, _)| n),
            headers.iter().collect::<Vec<_>>()
        ),
    })
}

fn parse_field(
    record: &csv::StringRecord,
    index: usize,
    headers: &csv::StringRecord,
    row: usize,
) -> Result<f64, ProfileError> {
    let value = record.get(index).unwrap_or("");
    value.parse().map_err(|_| ProfileError::BadNumber {
        // +2: one for the header line, one for 1-based numbering.
        row: row + 2,
        column: headers.get(index).unwrap_or("?").to_string(),
        value: value.to_string(),
    })
}

/// Everything the noise models need to know about one fiber span.
#[derive(Debug, Clone)]
pub struct FiberSpec {
    length_km: f64,
    attenuation: AttenuationProfile,
    sprs: SprsEfficiencyProfile,
    rayleigh_db_per_km: f64,
    beta2_ps2_per_km: f64,
    gamma_per_w_km: f64,
    temperature_k: f64,
}

impl FiberSpec {
    /// Default Rayleigh backscatter efficiency for standard single-mode fiber,
    /// dB/km.
    pub const DEFAULT_RAYLEIGH_DB_PER_KM: f64 = -42.32;

    #[allow(clippy::too_many_arguments)]
    pub fn new(
        length_km: f64,
        attenuation: AttenuationProfile,
        sprs: SprsEfficiencyProfile,
        rayleigh_db_per_km: f64,
        beta2_ps2_per_km: f64,
        gamma_per_w_km: f64,
        temperature_k: f64,
    ) -> Result<Self, UnitsError> {
        units::require_positive("fiber length (km)", length_km)?;
        units::require_finite("Rayleigh efficiency (dB/km)", rayleigh_db_per_km)?;
        units::require_finite("group-velocity dispersion β₂ (ps²/km)", beta2_ps2_per_km)?;
        units::require_non_negative("nonlinear coefficient γ (1/(W·km))", gamma_per_w_km)?;
        units::require_positive("temperature (K)", temperature_k)?;
        Ok(Self {
            length_km,
            attenuation,
            sprs,
            rayleigh_db_per_km,
            beta2_ps2_per_km,
            gamma_per_w_km,
            temperature_k,
        })
    }

    /// Same fiber cut to a different length; used by length sweeps.
    pub fn with_length(&self, length_km: f64) -> Result<Self, UnitsError> {
        units::require_positive("fiber length (km)", length_km)?;
        let mut out = self.clone();
        out.length_km = length_km;
        Ok(out)
    }

    pub fn length_km(&self) -> f64 {
        self.length_km
    }

    pub fn attenuation(&self) -> &AttenuationProfile {
        &self.attenuation
    }

    pub fn sprs(&self) -> &SprsEfficiencyProfile {
        &self.sprs
    }

    pub fn rayleigh_db_per_km(&self) -> f64 {
        self.rayleigh_db_per_km
    }

    /// Rayleigh efficiency as a linear per-km recapture-and-return rate.
    pub fn rayleigh_linear_per_km(&self) -> f64 {
        units::db_to_linear(self.rayleigh_db_per_km)
    }

    pub fn beta2_ps2_per_km(&self) -> f64 {
        self.beta2_ps2_per_km
    }

    pub fn gamma_per_w_km(&self) -> f64 {
        self.gamma_per_w_km
    }

    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }

    /// Attenuation in nepers/km at a wavelength.
    pub fn alpha_np_per_km_at(&self, at: Wavelength) -> Result<f64, ProfileError> {
        self.attenuation.nepers_per_km_at(at)
    }
}
