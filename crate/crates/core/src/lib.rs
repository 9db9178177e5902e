//! Noise-budget models for a quantum channel sharing a fiber with classical
//! WDM traffic.
//!
//! The crate predicts the in-band noise a single-photon-level channel picks up
//! from co-propagating classical light via four mechanisms:
//!
//! * spontaneous Raman scattering (co- and counter-propagating pumps),
//! * four-wave mixing among co-propagating CW channels,
//! * Rayleigh backscattering of counter-propagating broadband light,
//! * attenuated co-propagating leakage that survives imperfect filtering.
//!
//! Closed-form per-mechanism models live in [`sprs`], [`fwm`] and [`leakage`];
//! every closed form can be cross-checked against the independent numerical
//! quadrature in [`oracle`]. [`scenario`] assembles full noise budgets and
//! parameter sweeps from JSON descriptions, and [`output`] renders them as
//! CSV or JSON with byte-deterministic formatting.

pub mod channel;
pub mod fwm;
pub mod leakage;
mod numeric;
pub mod oracle;
pub mod output;
pub mod profiles;
pub mod scenario;
pub mod sprs;
pub mod templates;
pub mod units;

pub use channel::{Direction, LeakageSource, PumpChannel, QuantumChannel};
pub use profiles::{AttenuationProfile, FiberSpec, SprsEfficiencyProfile};
pub use scenario::{NoiseBudget, Scenario, ScenarioFile};
pub use units::{Frequency, Power, PowerDensity, Wavelength};
