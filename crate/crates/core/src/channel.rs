//! Channel-plan types: the classical pumps sharing the fiber, the quantum
//! channel being protected, and residual leakage sources.

use crate::units::{Frequency, Power, PowerDensity, UnitsError};
use serde::{Deserialize, Serialize};

/// Propagation direction relative to the quantum channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Same direction as the quantum channel.
    Co,
    /// Opposite direction.
    Counter,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Co => "co",
            Direction::Counter => "counter",
        })
    }
}

/// One classical channel in the plan: either a CW tone or a block of
/// broadband ASE-like loading described by its flat spectral density.
#[derive(Debug, Clone, PartialEq)]
pub enum PumpChannel {
    Cw {
        frequency: Frequency,
        power: Power,
        direction: Direction,
    },
    Ase {
        center: Frequency,
        psd: PowerDensity,
        bandwidth_ghz: f64,
        direction: Direction,
    },
}

impl PumpChannel {
    pub fn cw(frequency: Frequency, power: Power, direction: Direction) -> Self {
        PumpChannel::Cw {
            frequency,
            power,
            direction,
        }
    }

    /// Broadband loading. `bandwidth_ghz` must be positive and the band must
    /// not reach zero frequency.
    pub fn ase(
        center: Frequency,
        psd: PowerDensity,
        bandwidth_ghz: f64,
        direction: Direction,
    ) -> Result<Self, UnitsError> {
        if !(bandwidth_ghz.is_finite() && bandwidth_ghz > 0.0) {
            return Err(UnitsError::NotPositive {
                quantity: "ASE bandwidth (GHz)",
                value: bandwidth_ghz,
            });
        }
        let lower_edge_thz = center.thz() - bandwidth_ghz / 2.0 * 1e-3;
        if lower_edge_thz <= 0.0 {
            return Err(UnitsError::NotPositive {
                quantity: "ASE band lower edge (THz)",
                value: lower_edge_thz,
            });
        }
        Ok(PumpChannel::Ase {
            center,
            psd,
            bandwidth_ghz,
            direction,
        })
    }

    pub fn direction(&self) -> Direction {
        match self {
            PumpChannel::Cw { direction, .. } | PumpChannel::Ase { direction, .. } => *direction,
        }
    }

    /// Total optical power carried by this channel, in watts.
    pub fn total_power_w(&self) -> f64 {
        match self {
            PumpChannel::Cw { power, .. } => power.watts(),
            PumpChannel::Ase {
                psd, bandwidth_ghz, ..
            } => psd.over_bandwidth_ghz(*bandwidth_ghz),
        }
    }

    /// Decomposes the channel into CW-equivalent slices `(frequency, watts)`.
    ///
    /// A CW tone is a single slice. An ASE block is cut into uniform slices no
    /// wider than `max_slice_ghz`, each represented by its center frequency
    /// and in-slice power; the slice count is rounded up so the band is always
    /// covered exactly. This is shared input preparation — both the closed
    /// -form models and the quadrature oracle consume the same slices.
    pub fn cw_slices(&self, max_slice_ghz: f64) -> Vec<(Frequency, f64)> {
        match *self {
            PumpChannel::Cw {
                frequency, power, ..
            } => vec![(frequency, power.watts())],
            PumpChannel::Ase {
                center,
                psd,
                bandwidth_ghz,
                ..
            } => {
                let slices = (bandwidth_ghz / max_slice_ghz).ceil().max(1.0) as usize;
                let width_ghz = bandwidth_ghz / slices as f64;
                let power_w = psd.over_bandwidth_ghz(width_ghz);
                let lower_thz = center.thz() - bandwidth_ghz / 2.0 * 1e-3;
                (0..slices)
                    .map(|i| {
                        let center_thz = lower_thz + (i as f64 + 0.5) * width_ghz * 1e-3;
                        (
                            Frequency::from_thz(center_thz)
                                .expect("band edge positivity checked at construction"),
                            power_w,
                        )
                    })
                    .collect()
            }
        }
    }
}

/// The single-photon-level channel whose in-band noise is being budgeted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumChannel {
    frequency: Frequency,
    bandwidth_ghz: f64,
}

impl QuantumChannel {
    pub fn new(frequency: Frequency, bandwidth_ghz: f64) -> Result<Self, UnitsError> {
        if !(bandwidth_ghz.is_finite() && bandwidth_ghz > 0.0) {
            return Err(UnitsError::NotPositive {
                quantity: "quantum channel bandwidth (GHz)",
                value: bandwidth_ghz,
            });
        }
        Ok(Self {
            frequency,
            bandwidth_ghz,
        })
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn bandwidth_ghz(&self) -> f64 {
        self.bandwidth_ghz
    }

    pub fn with_frequency(&self, frequency: Frequency) -> Self {
        Self { frequency, ..*self }
    }
}

/// In-band classical light already at the quantum frequency when it enters the
/// fiber (imperfectly filtered transmitter noise), described by its PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageSource {
    pub psd: PowerDensity,
    pub direction: Direction,
}
