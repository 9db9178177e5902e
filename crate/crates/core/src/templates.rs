//! Built-in example scenarios.
//!
//! Templates are complete, runnable [`ScenarioFile`]s meant as starting
//! points: realistic shapes and orders of magnitude, but placeholder tables —
//! substitute measured fiber data before drawing conclusions. Each template
//! validates, runs, and passes its own oracle check out of the box.

use crate::scenario::{
    ChannelConfig, FiberConfig, FwmMode, LeakageConfig, QuantumConfig, ScenarioFile, SweepAxis,
    SweepConfig, TableSource, SCHEMA_VERSION,
};
use crate::sprs::antistokes_scale;

/// Available template names, alphabetical (the `example` CLI command accepts
/// any of these).
pub const NAMES: [&str; 2] = ["fwm-length-sweep", "multiband-sprs"];

/// Looks a template up by name.
pub fn by_name(name: &str) -> Option<ScenarioFile> {
    match name {
        "fwm-length-sweep" => Some(fwm_length_sweep()),
        "multiband-sprs" => Some(multiband_sprs()),
        _ => None,
    }
}

fn attenuation_inline(samples: &[(f64, f64)]) -> TableSource {
    TableSource {
        csv: None,
        samples_db_per_km: Some(samples.to_vec()),
        samples_per_km_ghz: None,
    }
}

fn sprs_inline(rows: Vec<(f64, f64, f64)>) -> TableSource {
    TableSource {
        csv: None,
        samples_db_per_km: None,
        samples_per_km_ghz: Some(rows),
    }
}

/// Placeholder Stokes-side Raman gain shape: a broad peak near −13.2 THz plus
/// a low-shift shoulder, in km⁻¹GHz⁻¹.
fn raman_stokes_magnitude(shift_magnitude_ghz: f64) -> f64 {
    let peak = 6.3e-10 * (-((shift_magnitude_ghz - 13_200.0) / 5_500.0).powi(2)).exp();
    let shoulder = 4e-11 * (-(shift_magnitude_ghz / 9_000.0).powi(2)).exp();
    peak + shoulder
}

/// Two-sided Raman efficiency grid for three pump wavelengths; the
/// anti-Stokes side is the Stokes magnitude damped by the 295 K thermal
/// occupation factor, so the table satisfies detailed balance exactly.
fn broadband_raman_rows() -> Vec<(f64, f64, f64)> {
    let pumps = [1528.0, 1547.0, 1566.0];
    let mut rows = Vec::with_capacity(pumps.len() * 29);
    for pump_nm in pumps {
        for i in 0..=28 {
            let shift_ghz = -35_000.0 + 2_500.0 * f64::from(i);
            let efficiency = if shift_ghz > 0.0 {
                raman_stokes_magnitude(shift_ghz) * antistokes_scale(shift_ghz / 1e3, 295.0)
            } else {
                raman_stokes_magnitude(-shift_ghz)
            };
            rows.push((pump_nm, shift_ghz, efficiency));
        }
    }
    rows
}

/// A quantum channel swept across O/E/S/L bands against counter-propagating
/// C-band ASE loading: SpRS dominates near the Raman peak (pump −13.2 THz),
/// Rayleigh-backscattered leakage sets a mid-level floor, and the receiver
/// background forms the outer plateau.
pub fn multiband_sprs() -> ScenarioFile {
    ScenarioFile {
        schema_version: SCHEMA_VERSION,
        description: Some(
            "Quantum channel frequency sweep against counter-propagating C-band ASE \
             loading. Placeholder Raman/attenuation tables with realistic shapes; \
             replace with measured fiber data."
                .into(),
        ),
        fiber: FiberConfig {
            length_km: 50.0,
            attenuation: attenuation_inline(&[
                (1350.0, 0.285),
                (1380.0, 0.32),
                (1410.0, 0.26),
                (1440.0, 0.235),
                (1470.0, 0.215),
                (1500.0, 0.203),
                (1530.0, 0.192),
                (1550.0, 0.19),
                (1565.0, 0.191),
                (1600.0, 0.21),
                (1640.0, 0.245),
                (1680.0, 0.31),
            ]),
            sprs_efficiency: sprs_inline(broadband_raman_rows()),
            rayleigh_db_per_km: -42.32,
            beta2_ps2_per_km: -21.1,
            gamma_per_w_km: 1.3,
            temperature_k: 295.0,
        },
        quantum: QuantumConfig {
            frequency_thz: 210.0,
            bandwidth_ghz: 12.5,
        },
        plan: vec![ChannelConfig::Ase {
            center_frequency_thz: 193.87,
            psd_dbm_per_ghz: -20.0,
            bandwidth_ghz: 4600.0,
            direction: crate::channel::Direction::Counter,
        }],
        leakage: vec![LeakageConfig {
            psd_w_per_hz: 1e-18,
            direction: crate::channel::Direction::Counter,
        }],
        background_psd_w_per_hz: 1e-22,
        fwm_mode: FwmMode::Exact,
        ase_slice_ghz: 100.0,
        oracle: None,
        sweep: Some(SweepConfig {
            axis: SweepAxis::QuantumFrequency,
            start: 180.25,
            stop: 221.75,
            step: 0.25,
        }),
    }
}

/// Four co-propagating CW tones placed ±50/±100 GHz around the quantum
/// channel so that four mixing products land exactly in band; swept in fiber
/// length, the exact-efficiency FWM entry beats with a ≈3 km period while the
/// phase-averaged diagnostic decays smoothly. Attenuation is flat so the
/// oracle's per-wave treatment coincides with the closed form.
pub fn fwm_length_sweep() -> ScenarioFile {
    let tone = |frequency_thz: f64| ChannelConfig::Cw {
        frequency_thz,
        power_dbm: 6.0,
        direction: crate::channel::Direction::Co,
    };
    ScenarioFile {
        schema_version: SCHEMA_VERSION,
        description: Some(
            "Fiber length sweep of four-wave mixing from four co-propagating 6 dBm \
             tones at ±50/±100 GHz around the quantum channel; `both` mode also \
             reports the phase-averaged diagnostic. Placeholder tables."
                .into(),
        ),
        fiber: FiberConfig {
            length_km: 50.0,
            attenuation: attenuation_inline(&[(1500.0, 0.19), (1600.0, 0.19)]),
            sprs_efficiency: sprs_inline(vec![
                (1520.0, -500.0, 1.3e-11),
                (1520.0, -250.0, 1.2e-11),
                (1520.0, 0.0, 1.0e-11),
                (1520.0, 250.0, 1.1e-11),
                (1520.0, 500.0, 1.15e-11),
                (1560.0, -500.0, 1.3e-11),
                (1560.0, -250.0, 1.2e-11),
                (1560.0, 0.0, 1.0e-11),
                (1560.0, 250.0, 1.1e-11),
                (1560.0, 500.0, 1.15e-11),
            ]),
            rayleigh_db_per_km: -42.32,
            beta2_ps2_per_km: -21.1,
            gamma_per_w_km: 1.3,
            temperature_k: 295.0,
        },
        quantum: QuantumConfig {
            frequency_thz: 193.40,
            bandwidth_ghz: 12.5,
        },
        plan: vec![tone(193.30), tone(193.35), tone(193.45), tone(193.50)],
        leakage: vec![
            LeakageConfig {
                psd_w_per_hz: 1e-19,
                direction: crate::channel::Direction::Co,
            },
            LeakageConfig {
                psd_w_per_hz: 1e-18,
                direction: crate::channel::Direction::Counter,
            },
        ],
        background_psd_w_per_hz: 1e-22,
        fwm_mode: FwmMode::Both,
        ase_slice_ghz: 100.0,
        oracle: None,
        sweep: Some(SweepConfig {
            axis: SweepAxis::Length,
            start: 1.0,
            stop: 50.0,
            step: 0.25,
        }),
    }
}
