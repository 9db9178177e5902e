//! Linear in-band leakage: classical light already at the quantum frequency
//! when it enters the fiber.
//!
//! A counter-propagating source returns to the quantum receiver through
//! distributed Rayleigh backscatter, picking up the round-trip geometry
//! S_RB = S₀ · r · (1 − e^{-2αL})/(2α) with r the linear per-km backscatter
//! efficiency; it saturates at S₀·r/(2α) once the span exceeds a few
//! attenuation lengths. A co-propagating source simply arrives attenuated:
//! S = S₀ · e^{-αL}. Both use α at the quantum wavelength — this light is in
//! band by definition.

use crate::channel::{Direction, LeakageSource, QuantumChannel};
use crate::numeric::decay_integral;
use crate::profiles::{FiberSpec, ProfileError};
use crate::units::PowerDensity;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LeakageError {
    #[error(
        "{mechanism} applies to {expected}-propagating sources, but the source is {got}-propagating"
    )]
    WrongDirection {
        mechanism: &'static str,
        expected: Direction,
        got: Direction,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// In-band PSD returned to the receiver by Rayleigh backscatter of a
/// counter-propagating leakage source.
pub fn rayleigh_backscatter(
    source: &LeakageSource,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
) -> Result<PowerDensity, LeakageError> {
    if source.direction != Direction::Counter {
        return Err(LeakageError::WrongDirection {
            mechanism: "Rayleigh backscatter",
            expected: Direction::Counter,
            got: source.direction,
        });
    }
    let alpha = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength())?;
    let geometry = decay_integral(2.0 * alpha, fiber.length_km());
    let psd = source.psd.w_per_hz() * fiber.rayleigh_linear_per_km() * geometry;
    Ok(PowerDensity::from_w_per_hz(psd).expect("product of non-negative factors"))
}

/// In-band PSD delivered by a co-propagating leakage source after span
/// attenuation.
pub fn copropagated_leakage(
    source: &LeakageSource,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
) -> Result<PowerDensity, LeakageError> {
    if source.direction != Direction::Co {
        return Err(LeakageError::WrongDirection {
            mechanism: "co-propagated leakage",
            expected: Direction::Co,
            got: source.direction,
        });
    }
    let alpha = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength())?;
    let psd = source.psd.w_per_hz() * (-alpha * fiber.length_km()).exp();
    Ok(PowerDensity::from_w_per_hz(psd).expect("attenuated non-negative input"))
}
