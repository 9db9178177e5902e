//! Independent numerical check on every closed-form model in this crate.
//!
//! Each mechanism's noise power is, underneath, a one-dimensional integral
//! over fiber position. This module evaluates those integrals directly with
//! composite-trapezoid quadrature plus Richardson extrapolation (a Romberg
//! table), sharing *no* algebra with the closed forms: if the two agree to
//! tight tolerance across a parameter grid, the closed forms earn their keep.
//!
//! The engine is deterministic — fixed panel doubling, no adaptive
//! subdivision — so oracle results are bit-reproducible run to run.

use crate::channel::{Direction, LeakageSource, PumpChannel, QuantumChannel};
use crate::fwm::FwmProduct;
use crate::profiles::{FiberSpec, ProfileError};
use crate::sprs::resolve_efficiency;
use crate::units::Frequency;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(
        "quadrature did not converge after {refinements} refinements \
         (last relative step {rel_delta:.3e}, tolerance {tolerance:.3e})"
    )]
    NonConvergence {
        refinements: u32,
        rel_delta: f64,
        tolerance: f64,
    },
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(String),
    #[error("need at least two interior maxima to estimate an oscillation period, found {found}")]
    TooFewMaxima { found: usize },
    #[error("classical channel {index} is not a co-propagating CW tone")]
    NotCwCoTone { index: usize },
    #[error("Rayleigh oracle applies to counter-propagating sources only")]
    RayleighNeedsCounter,
    #[error("ASE slice width (GHz) must be positive, got {0}")]
    BadSliceWidth(f64),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Quadrature controls. Refinement doubles the panel count each step; the
/// run fails loudly if the Romberg diagonal has not settled within
/// `rel_tolerance` after `max_refinements` doublings.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadratureConfig {
    pub initial_panels: usize,
    pub rel_tolerance: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            initial_panels: 8,
            rel_tolerance: 1e-10,
            max_refinements: 24,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.initial_panels == 0 {
            return Err(OracleError::InvalidConfig(
                "initial_panels must be at least 1".into(),
            ));
        }
        if !(self.rel_tolerance.is_finite() && self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0)
        {
            return Err(OracleError::InvalidConfig(format!(
                "rel_tolerance must lie in (0, 1), got {}",
                self.rel_tolerance
            )));
        }
        if self.max_refinements == 0 {
            return Err(OracleError::InvalidConfig(
                "max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A converged quadrature value with its convergence telemetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Panel doublings performed before the tolerance was met.
    pub refinements: u32,
    /// Relative step between the last two Romberg diagonal entries.
    pub rel_delta: f64,
}

/// Composite trapezoid rule with `panels` uniform panels. Public so tests can
/// verify the O(h²) error order directly.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..n {
        sum += f(a + i as f64 * h);
    }
    sum * h
}

macro_rules! romberg_impl {
    ($name:ident, $value:ty, $zero:expr, $magnitude:expr) => {
        fn $name(
            f: impl Fn(f64) -> $value,
            a: f64,
            b: f64,
            cfg: &QuadratureConfig,
        ) -> Result<($value, u32, f64), OracleError> {
            cfg.validate()?;
            let mut panels = cfg.initial_panels;
            // Level 0 trapezoid sum.
            let h0 = (b - a) / panels as f64;
            let mut t = {
                let mut sum = (f(a) + f(b)) * 0.5;
                for i in 1..panels {
                    sum += f(a + i as f64 * h0);
                }
                sum * h0
            };
            let mut prev_row: Vec<$value> = vec![t];
            let mut rel_delta = f64::INFINITY;
            for refinement in 1..=cfg.max_refinements {
                // Halve the step: T(h/2) = T(h)/2 + (h/2)·Σ f(midpoints).
                let h = (b - a) / panels as f64;
                let mut mid: $value = $zero;
                for i in 0..panels {
                    mid += f(a + (i as f64 + 0.5) * h);
                }
                t = t * 0.5 + mid * (0.5 * h);
                panels *= 2;

                // Richardson extrapolation row.
                let mut row: Vec<$value> = Vec::with_capacity(prev_row.len() + 1);
                row.push(t);
                let mut pow4 = 1.0f64;
                for m in 0..prev_row.len() {
                    pow4 *= 4.0;
                    let refined = (row[m] * pow4 - prev_row[m]) * (1.0 / (pow4 - 1.0));
                    row.push(refined);
                }
                let current = *row.last().expect("row non-empty");
                let previous = *prev_row.last().expect("row non-empty");
                let scale = $magnitude(current).max(f64::MIN_POSITIVE);
                rel_delta = $magnitude(current - previous) / scale;
                if rel_delta <= cfg.rel_tolerance {
                    return Ok((current, refinement, rel_delta));
                }
                prev_row = row;
            }
            Err(OracleError::NonConvergence {
                refinements: cfg.max_refinements,
                rel_delta,
                tolerance: cfg.rel_tolerance,
            })
        }
    };
}

romberg_impl!(romberg_real, f64, 0.0f64, f64::abs);
romberg_impl!(
    romberg_complex,
    Complex64,
    Complex64::new(0.0, 0.0),
    Complex64::norm
);

/// Romberg integration of a real integrand over [a, b].
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature, OracleError> {
    let (value, refinements, rel_delta) = romberg_real(f, a, b, cfg)?;
    Ok(Quadrature {
        value,
        refinements,
        rel_delta,
    })
}

/// Romberg integration of a complex integrand over [a, b]; convergence is
/// measured in the complex norm.
pub fn integrate_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, u32), OracleError> {
    let (value, refinements, _) = romberg_complex(f, a, b, cfg)?;
    Ok((value, refinements))
}

/// SpRS noise power by direct quadrature of the generation-and-propagation
/// geometry, using the same table lookups as the closed form:
///
/// * co:      ∫₀ᴸ P(z)·ρB · e^{-α_q (L−z)} dz with P(z) = P₀ e^{-α_p z}
/// * counter: ∫₀ᴸ P₀ e^{-α_p (L−z)}·ρB · e^{-α_q (L−z)} dz
///
/// ASE-shaped channels are cut into the same CW slices the model uses.
pub fn integrate_sprs(
    pump: &PumpChannel,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    direction: Direction,
    ase_slice_ghz: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    if !(ase_slice_ghz.is_finite() && ase_slice_ghz > 0.0) {
        return Err(OracleError::BadSliceWidth(ase_slice_ghz));
    }
    let l = fiber.length_km();
    let alpha_q = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength())?;
    let b_ghz = quantum.bandwidth_ghz();
    let mut total = 0.0;
    for (f_p, p_w) in pump.cw_slices(ase_slice_ghz) {
        let (rho, _) = resolve_efficiency(fiber, f_p, quantum.frequency())?;
        let alpha_p = fiber.alpha_np_per_km_at(f_p.to_wavelength())?;
        let scale = p_w * rho * b_ghz;
        let result = match direction {
            Direction::Co => integrate(
                |z| (-alpha_p * z).exp() * (-alpha_q * (l - z)).exp(),
                0.0,
                l,
                cfg,
            )?,
            Direction::Counter => integrate(
                |z| (-alpha_p * (l - z)).exp() * (-alpha_q * (l - z)).exp(),
                0.0,
                l,
                cfg,
            )?,
        };
        total += scale * result.value;
    }
    Ok(total)
}

fn cw_co_tone(plan: &[PumpChannel], index: usize) -> Result<(Frequency, f64), OracleError> {
    match plan.get(index) {
        Some(PumpChannel::Cw {
            frequency,
            power,
            direction: Direction::Co,
        }) => Ok((*frequency, power.watts())),
        _ => Err(OracleError::NotCwCoTone { index }),
    }
}

/// FWM idler power by quadrature of the coupled-field growth integral, with
/// *per-wave* attenuation — each pump decays at its own wavelength's α and
/// the idler at its own, rather than the closed form's single scalar α:
///
/// P = (Dγ/3)² P_i P_j P_k e^{-α_F L} |∫₀ᴸ e^{(jΔβ − ᾱ) z} dz|²,
/// ᾱ = (α_i + α_j + α_k − α_F)/2.
///
/// On a flat attenuation profile this reduces to the closed form exactly; on
/// a sloped profile the difference quantifies the scalar-α approximation.
/// The initial panel count is raised to at least four per oscillation period
/// so phase oscillations cannot alias through coarse Romberg levels.
pub fn integrate_fwm_field(
    product: &FwmProduct,
    plan: &[PumpChannel],
    fiber: &FiberSpec,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    let (f_i, p_i) = cw_co_tone(plan, product.i)?;
    let (f_j, p_j) = cw_co_tone(plan, product.j)?;
    let (f_k, p_k) = cw_co_tone(plan, product.k)?;
    let alpha_i = fiber.alpha_np_per_km_at(f_i.to_wavelength())?;
    let alpha_j = fiber.alpha_np_per_km_at(f_j.to_wavelength())?;
    let alpha_k = fiber.alpha_np_per_km_at(f_k.to_wavelength())?;
    let alpha_f = fiber.alpha_np_per_km_at(product.frequency.to_wavelength())?;
    let l = fiber.length_km();
    let delta_beta = product.delta_beta_rad_per_km;
    let alpha_mix = (alpha_i + alpha_j + alpha_k - alpha_f) / 2.0;

    let mut cfg = *cfg;
    let phase_cycles = (delta_beta * l).abs() / (2.0 * std::f64::consts::PI);
    cfg.initial_panels = cfg.initial_panels.max((4.0 * phase_cycles).ceil() as usize);

    let (field, _) = integrate_complex(
        |z| (Complex64::new(-alpha_mix, delta_beta) * z).exp(),
        0.0,
        l,
        &cfg,
    )?;
    let d_gamma = product.degeneracy as f64 * fiber.gamma_per_w_km() / 3.0;
    Ok(d_gamma * d_gamma * (p_i * p_j * p_k) * (-alpha_f * l).exp() * field.norm_sqr())
}

/// Rayleigh-backscattered PSD by quadrature of the round-trip geometry
/// ∫₀ᴸ S₀ r e^{-2αz} dz.
pub fn integrate_rayleigh(
    source: &LeakageSource,
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    if source.direction != Direction::Counter {
        return Err(OracleError::RayleighNeedsCounter);
    }
    let alpha = fiber.alpha_np_per_km_at(quantum.frequency().to_wavelength())?;
    let r = fiber.rayleigh_linear_per_km();
    let s0 = source.psd.w_per_hz();
    let result = integrate(|z| (-2.0 * alpha * z).exp(), 0.0, fiber.length_km(), cfg)?;
    Ok(s0 * r * result.value)
}

/// Estimates the oscillation period of a sampled series as the mean spacing
/// between strict interior maxima. Needs at least two maxima; a monotone or
/// envelope-only series (e.g. averaged-efficiency FWM vs length) has none and
/// errors out, which is itself the diagnostic.
pub fn oscillation_period(series: &[(f64, f64)]) -> Result<f64, OracleError> {
    let maxima: Vec<f64> = series
        .windows(3)
        .filter_map(|w| {
            let [(_, y0), (x1, y1), (_, y2)] = *w else {
                return None;
            };
            (y1 > y0 && y1 > y2).then_some(x1)
        })
        .collect();
    if maxima.len() < 2 {
        return Err(OracleError::TooFewMaxima {
            found: maxima.len(),
        });
    }
    Ok((maxima.last().unwrap() - maxima.first().unwrap()) / (maxima.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fwm::{self, EfficiencyMode};
    use crate::profiles::{AttenuationProfile, SprsEfficiencyProfile, SprsRow};
    use crate::sprs;
    use crate::units::{Power, PowerDensity};
    use approx::assert_relative_eq;

    fn thz(x: f64) -> Frequency {
        Frequency::from_thz(x).unwrap()
    }

    fn rows_flat(rho: f64) -> Vec<SprsRow> {
        [1400.0, 1700.0]
            .iter()
            .flat_map(|&p| {
                [-40_000.0, 40_000.0].map(|s| SprsRow {
                    pump_wavelength_nm: p,
                    shift_ghz: s,
                    efficiency_per_km_ghz: rho,
                })
            })
            .collect()
    }

    fn flat_fiber(length_km: f64, alpha_db: f64) -> FiberSpec {
        FiberSpec::new(
            length_km,
            AttenuationProfile::new(vec![(1400.0, alpha_db), (1700.0, alpha_db)]).unwrap(),
            SprsEfficiencyProfile::from_rows(rows_flat(2e-9)).unwrap(),
            -42.32,
            -21.1,
            1.3,
            295.0,
        )
        .unwrap()
    }

    #[test]
    fn trapezoid_is_exact_for_linear_integrands() {
        let got = trapezoid(|x| 2.0 * x + 1.0, 0.0, 1.0, 4);
        assert_eq!(got, 2.0);
    }

    #[test]
    fn trapezoid_error_shrinks_fourfold_per_halving() {
        let exact = 1.0f64.exp() - 1.0;
        let err = |n: usize| (trapezoid(f64::exp, 0.0, 1.0, n) - exact).abs();
        let ratio = err(64) / err(128);
        assert!(
            (3.9..4.1).contains(&ratio),
            "trapezoid error should be O(h²); halving gave ratio {ratio}"
        );
    }

    #[test]
    fn romberg_converges_on_smooth_integrand() {
        let cfg = QuadratureConfig::default();
        let q = integrate(f64::exp, 0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(q.value, 1.0f64.exp() - 1.0, max_relative = 1e-12);
        assert!(q.refinements >= 1);
        assert!(q.rel_delta <= cfg.rel_tolerance);
    }

    #[test]
    fn romberg_handles_oscillatory_integrand_with_enough_panels() {
        // ∫₀^{10·2π} sin²x dx = 10π.
        let cfg = QuadratureConfig {
            initial_panels: 64,
            ..Default::default()
        };
        let b = 20.0 * std::f64::consts::PI;
        let q = integrate(|x| x.sin().powi(2), 0.0, b, &cfg).unwrap();
        assert_relative_eq!(q.value, 10.0 * std::f64::consts::PI, max_relative = 1e-10);
    }

    #[test]
    fn romberg_reports_non_convergence() {
        let cfg = QuadratureConfig {
            initial_panels: 2,
            rel_tolerance: 1e-16,
            max_refinements: 2,
        };
        let err = integrate(f64::exp, 0.0, 1.0, &cfg).unwrap_err();
        match err {
            OracleError::NonConvergence {
                refinements,
                rel_delta,
                tolerance,
            } => {
                assert_eq!(refinements, 2);
                assert!(rel_delta > tolerance);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        for cfg in [
            QuadratureConfig {
                initial_panels: 0,
                ..Default::default()
            },
            QuadratureConfig {
                rel_tolerance: 0.0,
                ..Default::default()
            },
            QuadratureConfig {
                rel_tolerance: 1.5,
                ..Default::default()
            },
            QuadratureConfig {
                max_refinements: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                cfg.validate().unwrap_err(),
                OracleError::InvalidConfig(_)
            ));
        }
    }

    #[test]
    fn complex_integral_matches_analytic_value() {
        let a = 0.046;
        let db = 2.0825;
        let l = 25.0;
        let cfg = QuadratureConfig {
            initial_panels: 64,
            ..Default::default()
        };
        let (got, _) =
            integrate_complex(|z| (Complex64::new(-a, db) * z).exp(), 0.0, l, &cfg).unwrap();
        let s = Complex64::new(-a, db);
        let expected = ((s * l).exp() - 1.0) / s;
        assert!(
            (got - expected).norm() / expected.norm() < 1e-9,
            "complex quadrature drifted: {got} vs {expected}"
        );
    }

    #[test]
    fn sprs_oracle_matches_closed_form_both_directions() {
        let fiber = flat_fiber(25.0, 0.2);
        let quantum = QuantumChannel::new(thz(200.0), 1.0).unwrap();
        let pump = PumpChannel::cw(thz(193.4), Power::from_watts(3e-3).unwrap(), Direction::Co);
        let cfg = QuadratureConfig::default();
        for direction in [Direction::Co, Direction::Counter] {
            let oracle = integrate_sprs(&pump, &quantum, &fiber, direction, 100.0, &cfg).unwrap();
            let closed = match direction {
                Direction::Co => sprs::power_co(&pump, &quantum, &fiber, 100.0),
                Direction::Counter => sprs::power_counter(&pump, &quantum, &fiber, 100.0),
            }
            .unwrap()
            .power_w;
            assert_relative_eq!(oracle, closed, max_relative = 1e-10);
        }
    }

    #[test]
    fn fwm_oracle_matches_closed_form_on_flat_profile() {
        let fiber = flat_fiber(25.0, 0.2);
        let plan = vec![
            PumpChannel::cw(
                thz(194.75),
                Power::from_watts(3.981e-3).unwrap(),
                Direction::Co,
            ),
            PumpChannel::cw(
                thz(194.80),
                Power::from_watts(3.981e-3).unwrap(),
                Direction::Co,
            ),
        ];
        let quantum = QuantumChannel::new(thz(194.70), 1.0).unwrap();
        let products = fwm::enumerate_products(&plan, &quantum, &fiber);
        assert_eq!(products.len(), 1);
        let cfg = QuadratureConfig::default();
        let oracle = integrate_fwm_field(&products[0], &plan, &fiber, &cfg).unwrap();
        let closed =
            fwm::product_power(&products[0], &plan, &fiber, EfficiencyMode::Exact).unwrap();
        assert_relative_eq!(oracle, closed, max_relative = 1e-9);
    }

    #[test]
    fn fwm_oracle_rejects_non_cw_indices() {
        let fiber = flat_fiber(25.0, 0.2);
        let plan = vec![PumpChannel::cw(
            thz(194.75),
            Power::from_watts(1e-3).unwrap(),
            Direction::Counter,
        )];
        let bogus = FwmProduct {
            i: 0,
            j: 0,
            k: 0,
            degeneracy: 3,
            frequency: thz(194.7),
            delta_beta_rad_per_km: 1.0,
        };
        assert!(matches!(
            integrate_fwm_field(&bogus, &plan, &fiber, &QuadratureConfig::default()).unwrap_err(),
            OracleError::NotCwCoTone { index: 0 }
        ));
    }

    #[test]
    fn rayleigh_oracle_matches_closed_form() {
        let fiber = flat_fiber(50.0, 0.2);
        let quantum = QuantumChannel::new(thz(194.7), 1.0).unwrap();
        let source = LeakageSource {
            psd: PowerDensity::from_w_per_hz(1e-15).unwrap(),
            direction: Direction::Counter,
        };
        let cfg = QuadratureConfig::default();
        let oracle = integrate_rayleigh(&source, &quantum, &fiber, &cfg).unwrap();
        let closed = crate::leakage::rayleigh_backscatter(&source, &quantum, &fiber)
            .unwrap()
            .w_per_hz();
        assert_relative_eq!(oracle, closed, max_relative = 1e-10);

        let co_source = LeakageSource {
            direction: Direction::Co,
            ..source
        };
        assert!(matches!(
            integrate_rayleigh(&co_source, &quantum, &fiber, &cfg).unwrap_err(),
            OracleError::RayleighNeedsCounter
        ));
    }

    #[test]
    fn oscillation_period_recovers_synthetic_period() {
        let period = 3.0172;
        let series: Vec<(f64, f64)> = (0..=600)
            .map(|i| {
                let x = 0.05 * i as f64;
                let y = (-0.05 * x).exp() * (std::f64::consts::PI * x / period).sin().powi(2);
                (x, y)
            })
            .collect();
        let got = oscillation_period(&series).unwrap();
        assert_relative_eq!(got, period, max_relative = 0.05);
    }

    #[test]
    fn oscillation_period_rejects_monotone_series() {
        let series: Vec<(f64, f64)> = (0..100)
            .map(|i| (i as f64, (-0.1 * i as f64).exp()))
            .collect();
        assert!(matches!(
            oscillation_period(&series).unwrap_err(),
            OracleError::TooFewMaxima { found: 0 }
        ));
    }
}
