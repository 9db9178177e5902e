//! Spontaneous Raman scattering (SpRS) into the quantum channel.
//!
//! A classical pump at frequency f_p scatters light into the quantum band at
//! f_q with tabulated efficiency ρ(λ_p, Δν), Δν = f_q − f_p. The in-band
//! noise power collected over a span of length L is a single z-integral with
//! a closed form for both geometries (α in nepers/km, B_q the quantum filter
//! bandwidth):
//!
//! * co-propagating:      P = P_p ρ B_q e^{-α_q L} ∫₀ᴸ e^{-(α_p-α_q) z} dz
//! * counter-propagating: P = P_p ρ B_q ∫₀ᴸ e^{-(α_p+α_q) u} du
//!
//! The co form peaks at intermediate lengths (noise generated early still has
//! to survive to the far end); the counter form saturates once the span
//! exceeds a few attenuation lengths, at P_p ρ B_q/(α_p+α_q).
//!
//! Broadband (ASE-shaped) pumps are cut into CW-equivalent spectral slices
//! and summed. One-sided efficiency tables are completed to the missing side
//! through the thermal phonon-occupation factor [`antistokes_scale`]; any
//! budget that relied on that synthesis says so in its metadata.

use crate::channel::{Direction, PumpChannel, QuantumChannel};
use crate::numeric::decay_integral;
use crate::profiles::{FiberSpec, ProfileAxis, ProfileError};
use crate::units::{Frequency, BOLTZMANN_J_PER_K, PLANCK_J_S};
use thiserror::Error;

/// Default spectral slice width for ASE-shaped channels, GHz.
pub const DEFAULT_ASE_SLICE_GHZ: f64 = 100.0;

#[derive(Debug, Error)]
pub enum SprsError {
    #[error("classical channel {index}: {source}")]
    Channel {
        index: usize,
        #[source]
        source: ProfileError,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("ASE slice width (GHz) must be positive, got {0}")]
    BadSliceWidth(f64),
}

/// Anti-Stokes/Stokes efficiency ratio at shift magnitude `shift_thz` (THz)
/// and temperature `temperature_k` (K): e^{-hΔν/(k_B T)}.
///
/// Anti-Stokes scattering needs a thermal phonon to annihilate, so the ratio
/// is the Bose occupation factor n/(n+1); it is 1 at zero shift and falls
/// monotonically with shift. Callers pass Δν ≥ 0 and T > 0.
pub fn antistokes_scale(shift_thz: f64, temperature_k: f64) -> f64 {
    debug_assert!(shift_thz >= 0.0, "shift magnitude must be non-negative");
    debug_assert!(temperature_k > 0.0, "temperature must be positive");
    (-PLANCK_J_S * shift_thz * 1e12 / (BOLTZMANN_J_PER_K * temperature_k)).exp()
}

/// One mechanism contribution, with a note on whether any efficiency lookup
/// had to be synthesized from the mirrored side of a one-sided table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprsContribution {
    pub power_w: f64,
    pub synthesized: bool,
}

/// Plan-wide SpRS totals, split by pump direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SprsTotals {
    pub co_w: f64,
    pub counter_w: f64,
    /// True if any contributing lookup used a thermally synthesized
    /// efficiency (one-sided table completed via [`antistokes_scale`]).
    pub synthesized: bool,
}

/// Resolves ρ(λ_pump, f_q − f_p) in km⁻¹GHz⁻¹, completing one-sided tables
/// through the thermal factor. Returns `(efficiency, synthesized)`.
///
/// Shared by the closed forms and the quadrature oracle so that their
/// comparison exercises only the z-integral, not table lookup.
pub(crate) fn resolve_efficiency(
    fiber: &FiberSpec,
    pump: Frequency,
    quantum: Frequency,
) -> Result<(f64, bool), ProfileError> {
    let lambda_p = pump.to_wavelength();
    let shift_ghz = (quantum.thz() - pump.thz()) * 1e3;
    match fiber.sprs().efficiency_at(lambda_p, shift_ghz) {
        Ok(rho) => Ok((rho, false)),
        Err(
            original @ ProfileError::OutOfRange {
                axis: ProfileAxis::Shift,
                ..
            },
        ) => {
            let mirrored = fiber.sprs().efficiency_at(lambda_p, -shift_ghz);
            let Ok(rho_mirror) = mirrored else {
                return Err(original);
            };
            let scale = antistokes_scale(shift_ghz.abs() / 1e3, fiber.temperature_k());
            if shift_ghz > 0.0 {
                // Asked for anti-Stokes; table holds the Stokes side.
                Ok((rho_mirror * scale, true))
            } else {
                // Asked for Stokes; table holds the anti-Stokes side.
                Ok((rho_mirror / scale, true))
            }
        }
        Err(other) => Err(other),
    }
}

fn tone_power(
    direction: Direction,
    pump_frequency: Frequency,
    pump_power_w: f64,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
) -> Result<SprsContribution, ProfileError> {
    let (rho, synthesized) = resolve_efficiency(fiber, pump_frequency, quantum.frequency())?;
    let alpha_p = fiber.alpha_np_per_km_at(pump_frequency.to_wavelength())?;
    let alpha_q = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength())?;
    let l = fiber.length_km();
    let geometry = match direction {
        Direction::Co => (-alpha_q * l).exp() * decay_integral(alpha_p - alpha_q, l),
        Direction::Counter => decay_integral(alpha_p + alpha_q, l),
    };
    Ok(SprsContribution {
        power_w: pump_power_w * rho * quantum.bandwidth_ghz() * geometry,
        synthesized,
    })
}

fn channel_power(
    direction: Direction,
    pump: &PumpChannel,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    ase_slice_ghz: f64,
) -> Result<SprsContribution, SprsError> {
    if !(ase_slice_ghz.is_finite() && ase_slice_ghz > 0.0) {
        return Err(SprsError::BadSliceWidth(ase_slice_ghz));
    }
    let mut power_w = 0.0;
    let mut synthesized = false;
    for (f, p) in pump.cw_slices(ase_slice_ghz) {
        let c = tone_power(direction, f, p, quantum, fiber)?;
        power_w += c.power_w;
        synthesized |= c.synthesized;
    }
    Ok(SprsContribution {
        power_w,
        synthesized,
    })
}

/// In-band SpRS power from one pump in the co-propagating geometry.
/// The pump's own direction tag is ignored; the caller picks the geometry.
pub fn power_co(
    pump: &PumpChannel,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    ase_slice_ghz: f64,
) -> Result<SprsContribution, SprsError> {
    channel_power(Direction::Co, pump, quantum, fiber, ase_slice_ghz)
}

/// In-band SpRS power from one pump in the counter-propagating geometry.
/// The pump's own direction tag is ignored; the caller picks the geometry.
pub fn power_counter(
    pump: &PumpChannel,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    ase_slice_ghz: f64,
) -> Result<SprsContribution, SprsError> {
    channel_power(Direction::Counter, pump, quantum, fiber, ase_slice_ghz)
}

/// Sums SpRS over a whole channel plan, routing each channel through the
/// geometry matching its direction tag. Errors name the offending channel by
/// plan index.
pub fn total(
    plan: &[PumpChannel],
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    ase_slice_ghz: f64,
) -> Result<SprsTotals, SprsError> {
    let mut totals = SprsTotals::default();
    for (index, pump) in plan.iter().enumerate() {
        let c =
            channel_power(pump.direction(), pump, quantum, fiber, ase_slice_ghz).map_err(|e| {
                match e {
                    SprsError::Profile(source) => SprsError::Channel { index, source },
                    other => other,
                }
            })?;
        match pump.direction() {
            Direction::Co => totals.co_w += c.power_w,
            Direction::Counter => totals.counter_w += c.power_w,
        }
        totals.synthesized |= c.synthesized;
    }
    Ok(totals)
}
