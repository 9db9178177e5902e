//! Unit-safe quantities and conversions.
//!
//! Frequencies are carried in THz and wavelengths in nm because channel plans
//! and fiber datasheets quote them that way; powers are watts internally with
//! dBm only at the boundaries. Spectral densities are W/Hz internally, with
//! per-nm forms converted at the boundary using the local frequency-per-
//! wavelength slope c/λ².

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;
/// Planck constant, J·s (exact, 2019 SI).
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
/// Boltzmann constant, J/K (exact, 2019 SI).
pub const BOLTZMANN_J_PER_K: f64 = 1.380_649e-23;

/// ln(10)/10, the factor between dB/km and nepers/km.
const DB_TO_NEPER: f64 = core::f64::consts::LN_10 / 10.0;

/// Rejected quantity values. Carries what was being built and the offending
/// number so error text can point at the field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("{quantity} must be finite, got {value}")]
    NotFinite { quantity: &'static str, value: f64 },
    #[error("{quantity} must be positive, got {value}")]
    NotPositive { quantity: &'static str, value: f64 },
    #[error("{quantity} must be non-negative, got {value}")]
    Negative { quantity: &'static str, value: f64 },
}

pub(crate) fn require_finite(quantity: &'static str, value: f64) -> Result<f64, UnitsError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(UnitsError::NotFinite { quantity, value })
    }
}

pub(crate) fn require_positive(quantity: &'static str, value: f64) -> Result<f64, UnitsError> {
    let value = require_finite(quantity, value)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(UnitsError::NotPositive { quantity, value })
    }
}

pub(crate) fn require_non_negative(quantity: &'static str, value: f64) -> Result<f64, UnitsError> {
    let value = require_finite(quantity, value)?;
    if value >= 0.0 {
        Ok(value)
    } else {
        Err(UnitsError::Negative { quantity, value })
    }
}

/// Optical frequency in THz. Always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(f64);

impl Frequency {
    pub fn from_thz(thz: f64) -> Result<Self, UnitsError> {
        require_positive("frequency (THz)", thz).map(Self)
    }

    pub fn thz(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 * 1e12
    }

    /// Photon energy h·f in joules.
    pub fn photon_energy_j(self) -> f64 {
        PLANCK_J_S * self.hz()
    }

    pub fn to_wavelength(self) -> Wavelength {
        // c/f with c in m/s and f in THz gives µm·1e-6; express in nm.
        Wavelength(SPEED_OF_LIGHT_M_PER_S / (self.0 * 1e12) * 1e9)
    }
}

/// Vacuum wavelength in nm. Always finite and positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Wavelength(f64);

impl Wavelength {
    pub fn from_nm(nm: f64) -> Result<Self, UnitsError> {
        require_positive("wavelength (nm)", nm).map(Self)
    }

    pub fn nm(self) -> f64 {
        self.0
    }

    pub fn meters(self) -> f64 {
        self.0 * 1e-9
    }

    pub fn to_frequency(self) -> Frequency {
        Frequency(SPEED_OF_LIGHT_M_PER_S / self.meters() / 1e12)
    }

    /// Local frequency span of a 1 nm wavelength interval centered here, in
    /// GHz/nm: |dν/dλ| = c/λ².
    pub fn ghz_per_nm(self) -> f64 {
        SPEED_OF_LIGHT_M_PER_S / (self.0 * self.0)
    }
}

/// Optical power in watts. Always finite and non-negative (zero is a valid
/// pump power; dBm of zero power is -inf and never stored).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Power(f64);

impl Power {
    pub fn from_watts(watts: f64) -> Result<Self, UnitsError> {
        require_non_negative("power (W)", watts).map(Self)
    }

    pub fn from_dbm(dbm: f64) -> Result<Self, UnitsError> {
        let dbm = require_finite("power (dBm)", dbm)?;
        Ok(Self(1e-3 * 10f64.powf(dbm / 10.0)))
    }

    pub fn watts(self) -> f64 {
        self.0
    }

    /// Returns -inf for zero power.
    pub fn dbm(self) -> f64 {
        10.0 * (self.0 / 1e-3).log10()
    }
}

/// Power spectral density in W/Hz. Always finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerDensity(f64);

impl PowerDensity {
    pub fn from_w_per_hz(value: f64) -> Result<Self, UnitsError> {
        require_non_negative("spectral density (W/Hz)", value).map(Self)
    }

    /// Density quoted as dBm in a 1 GHz reference bandwidth.
    pub fn from_dbm_per_ghz(dbm: f64) -> Result<Self, UnitsError> {
        let dbm = require_finite("spectral density (dBm/GHz)", dbm)?;
        Ok(Self(1e-3 * 10f64.powf(dbm / 10.0) / 1e9))
    }

    /// Density quoted per nm of wavelength at `at`; converts with the local
    /// slope c/λ².
    pub fn from_w_per_nm(value: f64, at: Wavelength) -> Result<Self, UnitsError> {
        let value = require_non_negative("spectral density (W/nm)", value)?;
        Ok(Self(value / (at.ghz_per_nm() * 1e9)))
    }

    pub fn w_per_hz(self) -> f64 {
        self.0
    }

    pub fn w_per_nm(self, at: Wavelength) -> f64 {
        self.0 * at.ghz_per_nm() * 1e9
    }

    /// Returns -inf for zero density.
    pub fn dbm_per_ghz(self) -> f64 {
        10.0 * (self.0 * 1e9 / 1e-3).log10()
    }

    /// In-band power over `bandwidth_ghz`.
    pub fn over_bandwidth_ghz(self, bandwidth_ghz: f64) -> f64 {
        self.0 * bandwidth_ghz * 1e9
    }
}

/// dB ratio → linear ratio: 10^(dB/10).
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear ratio → dB: 10·log10(x). Returns -inf at 0.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Attenuation coefficient dB/km → nepers/km (power decays as e^{-αz}).
pub fn db_per_km_to_nepers(db_per_km: f64) -> f64 {
    db_per_km * DB_TO_NEPER
}
