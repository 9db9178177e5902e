//! Four-wave mixing (FWM) among co-propagating CW channels.
//!
//! Any two co-propagating tones i, j (possibly the same tone) mixing against a
//! third tone k generate an idler at f_i + f_j − f_k. Idlers landing inside
//! the quantum filter are enumerated as [`FwmProduct`]s and carry power
//!
//! P = (D γ / 3)² · P_i P_j P_k · e^{-αL} · L_eff² · η,
//!
//! with degeneracy D = 3 for i = j and D = 6 otherwise, L_eff the usual
//! effective length (1 − e^{-αL})/α, and η the phase-matching efficiency
//! driven by the mismatch Δβ = β₂ (2π)² (f_i − f_k)(f_j − f_k).
//!
//! η comes in two flavors: the exact form, whose sin²(ΔβL/2) term makes power
//! oscillate in fiber length with period 2π/|Δβ|, and its length-averaged
//! approximation (sin² → ½), which tracks the mean of those oscillations and
//! is the right comparison for measurements that cannot resolve them.
//!
//! Broadband (ASE-shaped) and counter-propagating channels do not form
//! narrowband idlers in this model and are skipped by enumeration.

use crate::channel::{Direction, PumpChannel, QuantumChannel};
use crate::numeric::decay_integral;
use crate::profiles::{FiberSpec, ProfileError};
use crate::units::{Frequency, UnitsError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FwmError {
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("classical channel {index} is not a co-propagating CW tone; FWM products only form among those")]
    NotCwCoTone { index: usize },
    #[error("series lengths differ: total has {total_len} points, linear has {linear_len}")]
    SeriesLengthMismatch { total_len: usize, linear_len: usize },
    #[error(
        "series axes differ at point {index}: total axis {total_axis}, linear axis {linear_axis}"
    )]
    AxisMismatch {
        index: usize,
        total_axis: f64,
        linear_axis: f64,
    },
}

/// Which phase-matching efficiency to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyMode {
    /// Full oscillatory efficiency.
    Exact,
    /// Length-averaged envelope (sin² → ½).
    Averaged,
}

/// One idler landing inside the quantum filter. Indices refer to positions in
/// the originating channel plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwmProduct {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// 3 for degenerate (i = j), 6 otherwise.
    pub degeneracy: u8,
    /// Idler frequency f_i + f_j − f_k.
    pub frequency: Frequency,
    /// Signed phase mismatch, rad/km.
    pub delta_beta_rad_per_km: f64,
}

/// Phase mismatch Δβ = β₂ (2π)² (f_i − f_k)(f_j − f_k) in rad/km, signed.
/// Frequencies in THz against β₂ in ps²/km need no unit factors
/// (THz = 1/ps).
pub fn phase_mismatch(f_i: Frequency, f_j: Frequency, f_k: Frequency, fiber: &FiberSpec) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    fiber.beta2_ps2_per_km() * two_pi * two_pi * (f_i.thz() - f_k.thz()) * (f_j.thz() - f_k.thz())
}

/// Enumerates all FWM products from co-propagating CW tones in `plan` whose
/// idler lands within the quantum filter (|f − f_q| ≤ B_q/2). Unordered pump
/// pairs are visited once (i ≤ j), and k must differ from both.
pub fn enumerate_products(
    plan: &[PumpChannel],
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
) -> Vec<FwmProduct> {
    let tones: Vec<(usize, Frequency)> = plan
        .iter()
        .enumerate()
        .filter_map(|(index, ch)| match ch {
            PumpChannel::Cw {
                frequency,
                direction: Direction::Co,
                ..
            } => Some((index, *frequency)),
            _ => None,
        })
        .collect();

    let half_band_thz = quantum.bandwidth_ghz() / 2.0 * 1e-3;
    let mut products = Vec::new();
    for (a, &(i, f_i)) in tones.iter().enumerate() {
        for &(j, f_j) in &tones[a..] {
            for &(k, f_k) in &tones {
                if k == i || k == j {
                    continue;
                }
                let f_thz = f_i.thz() + f_j.thz() - f_k.thz();
                if (f_thz - quantum.frequency().thz()).abs() > half_band_thz {
                    continue;
                }
                let Ok(frequency) = Frequency::from_thz(f_thz) else {
                    continue;
                };
                products.push(FwmProduct {
                    i,
                    j,
                    k,
                    degeneracy: if i == j { 3 } else { 6 },
                    frequency,
                    delta_beta_rad_per_km: phase_mismatch(f_i, f_j, f_k, fiber),
                });
            }
        }
    }
    products
}

fn check_alpha_length(alpha_np_per_km: f64, length_km: f64) -> Result<(), FwmError> {
    if !(alpha_np_per_km.is_finite() && alpha_np_per_km > 0.0) {
        return Err(UnitsError::NotPositive {
            quantity: "attenuation α (np/km)",
            value: alpha_np_per_km,
        }
        .into());
    }
    if !(length_km.is_finite() && length_km > 0.0) {
        return Err(UnitsError::NotPositive {
            quantity: "fiber length (km)",
            value: length_km,
        }
        .into());
    }
    Ok(())
}

/// Exact phase-matching efficiency
/// η = α²/(α²+Δβ²) · [1 + 4 e^{-αL} sin²(ΔβL/2)/(1−e^{-αL})²].
/// Equals 1 exactly at Δβ = 0 and oscillates in L with period 2π/|Δβ|.
pub fn efficiency_exact(
    delta_beta_rad_per_km: f64,
    alpha_np_per_km: f64,
    length_km: f64,
) -> Result<f64, FwmError> {
    check_alpha_length(alpha_np_per_km, length_km)?;
    let a2 = alpha_np_per_km * alpha_np_per_km;
    let db = delta_beta_rad_per_km;
    let u = (-alpha_np_per_km * length_km).exp();
    let one_minus_u = -(-alpha_np_per_km * length_km).exp_m1();
    let s = (db * length_km / 2.0).sin();
    Ok(a2 / (a2 + db * db) * (1.0 + 4.0 * u * s * s / (one_minus_u * one_minus_u)))
}

/// Length-averaged efficiency: the exact form with its oscillation replaced by
/// its mean (sin² → ½). Monotone in L — it carries no oscillation.
pub fn efficiency_averaged(
    delta_beta_rad_per_km: f64,
    alpha_np_per_km: f64,
    length_km: f64,
) -> Result<f64, FwmError> {
    check_alpha_length(alpha_np_per_km, length_km)?;
    let a2 = alpha_np_per_km * alpha_np_per_km;
    let db = delta_beta_rad_per_km;
    let u = (-alpha_np_per_km * length_km).exp();
    let one_minus_u = -(-alpha_np_per_km * length_km).exp_m1();
    Ok(a2 / (a2 + db * db) * (1.0 + 2.0 * u / (one_minus_u * one_minus_u)))
}

fn cw_power_w(plan: &[PumpChannel], index: usize) -> Result<f64, FwmError> {
    match plan.get(index) {
        Some(PumpChannel::Cw {
            power,
            direction: Direction::Co,
            ..
        }) => Ok(power.watts()),
        _ => Err(FwmError::NotCwCoTone { index }),
    }
}

/// Idler power for one product, with the scalar attenuation evaluated at the
/// product's own wavelength (indistinguishable from the quantum wavelength at
/// filter scale, but the product is where the light actually is).
pub fn product_power(
    product: &FwmProduct,
    plan: &[PumpChannel],
    fiber: &FiberSpec,
    mode: EfficiencyMode,
) -> Result<f64, FwmError> {
    let p_i = cw_power_w(plan, product.i)?;
    let p_j = cw_power_w(plan, product.j)?;
    let p_k = cw_power_w(plan, product.k)?;
    let alpha = fiber.alpha_np_per_km_at(product.frequency.to_wavelength())?;
    let l = fiber.length_km();
    let eta = match mode {
        EfficiencyMode::Exact => efficiency_exact(product.delta_beta_rad_per_km, alpha, l)?,
        EfficiencyMode::Averaged => efficiency_averaged(product.delta_beta_rad_per_km, alpha, l)?,
    };
    let d_gamma = product.degeneracy as f64 * fiber.gamma_per_w_km() / 3.0;
    let l_eff = decay_integral(alpha, l);
    Ok(d_gamma * d_gamma * (p_i * p_j * p_k) * (-alpha * l).exp() * l_eff * l_eff * eta)
}

/// Total in-band FWM power: enumerate products and sum their powers.
pub fn total_power(
    plan: &[PumpChannel],
    quantum: &QuantumChannel,
    fiber: &FiberSpec,
    mode: EfficiencyMode,
) -> Result<f64, FwmError> {
    enumerate_products(plan, quantum, fiber)
        .iter()
        .map(|p| product_power(p, plan, fiber, mode))
        .sum()
}

/// Result of subtracting a linear-mechanism series from a total-noise series.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtractedSeries {
    /// `(axis, total − linear)` with negatives clamped to zero.
    pub points: Vec<(f64, f64)>,
    /// Indices where the difference came out negative and was clamped —
    /// measurement noise or model mismatch ate the whole margin there.
    pub clamped: Vec<usize>,
}

/// Point-wise `total − linear` for two series on the same axis, the standard
/// move for isolating FWM from a measured total. Axes must agree point by
/// point to within 1e-12 relative.
pub fn subtract_linear_contribution(
    total: &[(f64, f64)],
    linear: &[(f64, f64)],
) -> Result<SubtractedSeries, FwmError> {
    if total.len() != linear.len() {
        return Err(FwmError::SeriesLengthMismatch {
            total_len: total.len(),
            linear_len: linear.len(),
        });
    }
    let mut points = Vec::with_capacity(total.len());
    let mut clamped = Vec::new();
    for (index, (&(xt, yt), &(xl, yl))) in total.iter().zip(linear).enumerate() {
        let scale = xt.abs().max(xl.abs()).max(f64::MIN_POSITIVE);
        if (xt - xl).abs() > 1e-12 * scale {
            return Err(FwmError::AxisMismatch {
                index,
                total_axis: xt,
                linear_axis: xl,
            });
        }
        let diff = yt - yl;
        if diff < 0.0 {
            clamped.push(index);
            points.push((xt, 0.0));
        } else {
            points.push((xt, diff));
        }
    }
    Ok(SubtractedSeries { points, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{AttenuationProfile, SprsEfficiencyProfile, SprsRow};
    use crate::units::{db_per_km_to_nepers, Power};
    use approx::assert_relative_eq;

    fn thz(x: f64) -> Frequency {
        Frequency::from_thz(x).unwrap()
    }

    fn cw_co(f_thz: f64, watts: f64) -> PumpChannel {
        PumpChannel::cw(thz(f_thz), Power::from_watts(watts).unwrap(), Direction::Co)
    }

    fn flat_fiber(length_km: f64, alpha_db: f64) -> FiberSpec {
        let attenuation =
            AttenuationProfile::new(vec![(1400.0, alpha_db), (1700.0, alpha_db)]).unwrap();
        let sprs = SprsEfficiencyProfile::from_rows(vec![
            SprsRow {
                pump_wavelength_nm: 1400.0,
                shift_ghz: -40_000.0,
                efficiency_per_km_ghz: 1e-10,
            },
            SprsRow {
                pump_wavelength_nm: 1400.0,
                shift_ghz: 40_000.0,
                efficiency_per_km_ghz: 1e-10,
            },
            SprsRow {
                pump_wavelength_nm: 1700.0,
                shift_ghz: -40_000.0,
                efficiency_per_km_ghz: 1e-10,
            },
            SprsRow {
                pump_wavelength_nm: 1700.0,
                shift_ghz: 40_000.0,
                efficiency_per_km_ghz: 1e-10,
            },
        ])
        .unwrap();
        FiberSpec::new(length_km, attenuation, sprs, -42.32, -21.1, 1.3, 295.0).unwrap()
    }

    /// The four-tone plan: ±50 and ±100 GHz around a 194.7 THz quantum
    /// channel, all co-propagating CW.
    fn four_tone_plan() -> (Vec<PumpChannel>, QuantumChannel) {
        let plan = vec![
            cw_co(194.60, 3.981e-3),
            cw_co(194.65, 3.981e-3),
            cw_co(194.75, 3.981e-3),
            cw_co(194.80, 3.981e-3),
        ];
        let quantum = QuantumChannel::new(thz(194.70), 1.0).unwrap();
        (plan, quantum)
    }

    #[test]
    fn four_tone_plan_yields_exactly_four_products() {
        let fiber = flat_fiber(10.0, 0.2);
        let (plan, quantum) = four_tone_plan();
        let mut got: Vec<(usize, usize, usize, u8)> = enumerate_products(&plan, &quantum, &fiber)
            .iter()
            .map(|p| (p.i, p.j, p.k, p.degeneracy))
            .collect();
        got.sort_unstable();
        assert_eq!(
            got,
            vec![(0, 2, 1, 6), (1, 1, 0, 3), (1, 3, 2, 6), (2, 2, 3, 3)],
            "expected two degenerate and two non-degenerate in-band products"
        );
    }

    #[test]
    fn enumeration_skips_ase_counter_and_single_tones() {
        let fiber = flat_fiber(10.0, 0.2);
        let (mut plan, quantum) = four_tone_plan();
        assert!(enumerate_products(&plan[..1], &quantum, &fiber).is_empty());

        // Adding a counter tone and an ASE block must not change anything,
        // and product indices must still point into the full plan.
        plan.push(PumpChannel::cw(
            thz(194.70),
            Power::from_watts(1e-3).unwrap(),
            Direction::Counter,
        ));
        plan.push(
            PumpChannel::ase(
                thz(193.0),
                crate::units::PowerDensity::from_w_per_hz(1e-14).unwrap(),
                1000.0,
                Direction::Co,
            )
            .unwrap(),
        );
        let products = enumerate_products(&plan, &quantum, &fiber);
        assert_eq!(products.len(), 4);
        assert!(products.iter().all(|p| p.i < 4 && p.j < 4 && p.k < 4));
    }

    #[test]
    fn two_tone_plan_yields_one_degenerate_product() {
        let fiber = flat_fiber(10.0, 0.2);
        let plan = vec![cw_co(194.75, 3.981e-3), cw_co(194.80, 3.981e-3)];
        let quantum = QuantumChannel::new(thz(194.70), 1.0).unwrap();
        let products = enumerate_products(&plan, &quantum, &fiber);
        assert_eq!(products.len(), 1);
        let p = products[0];
        assert_eq!((p.i, p.j, p.k, p.degeneracy), (0, 0, 1, 3));
        assert_relative_eq!(p.frequency.thz(), 194.70, max_relative = 1e-12);
    }

    #[test]
    fn phase_mismatch_reference_values() {
        let fiber = flat_fiber(10.0, 0.2);
        // Degenerate spacing 50 GHz: |Δβ| = |β₂|(2π)²(0.05 THz)² ≈ 2.08 rad/km.
        let deg = phase_mismatch(thz(194.65), thz(194.65), thz(194.60), &fiber);
        assert_relative_eq!(deg.abs(), 2.082_487, max_relative = 1e-5);
        // β₂ < 0 with (f_i−f_k)(f_j−f_k) > 0 makes it negative.
        assert!(deg < 0.0);
        // Non-degenerate (−100, +50 | −50): (−0.05)(+0.10) flips the sign.
        let nondeg = phase_mismatch(thz(194.60), thz(194.75), thz(194.65), &fiber);
        assert_relative_eq!(nondeg.abs(), 4.164_974, max_relative = 1e-5);
        assert!(nondeg > 0.0);
        // Zero spacing → zero mismatch.
        assert_eq!(
            phase_mismatch(thz(194.7), thz(194.7), thz(194.7), &fiber),
            0.0
        );
    }

    #[test]
    fn exact_efficiency_is_one_at_zero_mismatch() {
        for alpha_db in [0.17, 0.2, 0.35] {
            for l in [1.0, 10.0, 100.0] {
                let alpha = db_per_km_to_nepers(alpha_db);
                assert_eq!(
                    efficiency_exact(0.0, alpha, l).unwrap(),
                    1.0,
                    "η(Δβ=0) must be exactly 1 at α={alpha_db} dB/km, L={l} km"
                );
            }
        }
    }

    #[test]
    fn exact_efficiency_lossless_limit() {
        // α → 0: η → 4 sin²(ΔβL/2)/(ΔβL)².
        let alpha = 1e-9;
        for (db, l) in [(0.5, 1.0), (0.5, 10.0), (2.0825, 1.0), (2.0825, 10.0)] {
            let got = efficiency_exact(db, alpha, l).unwrap();
            let s = (db * l / 2.0_f64).sin();
            let expected = 4.0 * s * s / (db * db * l * l);
            assert_relative_eq!(got, expected, max_relative = 1e-6);
        }
    }

    #[test]
    fn averaged_efficiency_sits_inside_the_oscillation_envelope() {
        let alpha = db_per_km_to_nepers(0.2);
        let db = 2.0825;
        let period = 2.0 * std::f64::consts::PI / db;
        // Scan one full oscillation around L = 25 km.
        let values: Vec<f64> = (0..=100)
            .map(|i| {
                let l = 25.0 + period * i as f64 / 100.0;
                efficiency_exact(db, alpha, l).unwrap()
            })
            .collect();
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(0.0f64, f64::max);
        let avg = efficiency_averaged(db, alpha, 25.0 + period / 2.0).unwrap();
        assert!(
            min < avg && avg < max,
            "averaged efficiency {avg} should lie within [{min}, {max}]"
        );
    }

    #[test]
    fn efficiency_rejects_non_positive_alpha_or_length() {
        assert!(efficiency_exact(1.0, 0.0, 10.0).is_err());
        assert!(efficiency_exact(1.0, -0.1, 10.0).is_err());
        assert!(efficiency_exact(1.0, 0.05, 0.0).is_err());
        assert!(efficiency_averaged(1.0, f64::NAN, 10.0).is_err());
        assert!(efficiency_averaged(1.0, 0.05, -5.0).is_err());
    }

    #[test]
    fn product_power_scales_cubically_and_exactly() {
        let fiber = flat_fiber(25.0, 0.2);
        let (plan, quantum) = four_tone_plan();
        let doubled: Vec<PumpChannel> = plan
            .iter()
            .map(|ch| match ch {
                PumpChannel::Cw {
                    frequency,
                    power,
                    direction,
                } => PumpChannel::cw(
                    *frequency,
                    Power::from_watts(2.0 * power.watts()).unwrap(),
                    *direction,
                ),
                other => other.clone(),
            })
            .collect();
        let products = enumerate_products(&plan, &quantum, &fiber);
        for p in &products {
            let base = product_power(p, &plan, &fiber, EfficiencyMode::Exact).unwrap();
            let up = product_power(p, &doubled, &fiber, EfficiencyMode::Exact).unwrap();
            assert_eq!(
                up,
                8.0 * base,
                "doubling all pump powers must scale ×8 exactly"
            );
        }
        let base_total = total_power(&plan, &quantum, &fiber, EfficiencyMode::Exact).unwrap();
        let up_total = total_power(&doubled, &quantum, &fiber, EfficiencyMode::Exact).unwrap();
        assert_eq!(up_total, 8.0 * base_total);
    }

    #[test]
    fn product_power_uses_attenuation_at_the_product_wavelength() {
        // Steeply sloped attenuation + a wide quantum filter so the product
        // sits measurably off the quantum frequency.
        let attenuation = AttenuationProfile::new(vec![(1400.0, 0.1), (1700.0, 3.1)]).unwrap();
        let sprs = SprsEfficiencyProfile::from_rows(vec![
            SprsRow {
                pump_wavelength_nm: 1400.0,
                shift_ghz: -1000.0,
                efficiency_per_km_ghz: 0.0,
            },
            SprsRow {
                pump_wavelength_nm: 1400.0,
                shift_ghz: 1000.0,
                efficiency_per_km_ghz: 0.0,
            },
            SprsRow {
                pump_wavelength_nm: 1700.0,
                shift_ghz: -1000.0,
                efficiency_per_km_ghz: 0.0,
            },
            SprsRow {
                pump_wavelength_nm: 1700.0,
                shift_ghz: 1000.0,
                efficiency_per_km_ghz: 0.0,
            },
        ])
        .unwrap();
        let fiber = FiberSpec::new(25.0, attenuation, sprs, -42.32, -21.1, 1.3, 295.0).unwrap();
        // Product lands at 194.66 THz, 40 GHz below a 194.70 THz quantum
        // channel with an 100 GHz filter.
        let plan = vec![cw_co(194.71, 2e-3), cw_co(194.76, 2e-3)];
        let quantum = QuantumChannel::new(thz(194.70), 100.0).unwrap();
        let products = enumerate_products(&plan, &quantum, &fiber);
        assert_eq!(products.len(), 1);
        let p = products[0];
        assert_relative_eq!(p.frequency.thz(), 194.66, max_relative = 1e-12);

        let got = product_power(&p, &plan, &fiber, EfficiencyMode::Exact).unwrap();
        let alpha = fiber
            .alpha_np_per_km_at(p.frequency.to_wavelength())
            .unwrap();
        let l = fiber.length_km();
        let l_eff = (1.0 - (-alpha * l).exp()) / alpha;
        let eta = efficiency_exact(p.delta_beta_rad_per_km, alpha, l).unwrap();
        let expected =
            (1.3f64).powi(2) * (2e-3f64).powi(3) * (-alpha * l).exp() * l_eff * l_eff * eta;
        assert_relative_eq!(got, expected, max_relative = 1e-12);

        let alpha_q = fiber
            .alpha_np_per_km_at(quantum.frequency().to_wavelength())
            .unwrap();
        assert!(
            (alpha - alpha_q).abs() / alpha > 1e-5,
            "test setup should make the two attenuations distinguishable"
        );
    }

    #[test]
    fn zero_power_tone_kills_its_products() {
        let fiber = flat_fiber(25.0, 0.2);
        let plan = vec![cw_co(194.75, 0.0), cw_co(194.80, 3.981e-3)];
        let quantum = QuantumChannel::new(thz(194.70), 1.0).unwrap();
        assert_eq!(
            total_power(&plan, &quantum, &fiber, EfficiencyMode::Exact).unwrap(),
            0.0
        );
    }

    #[test]
    fn product_power_rejects_non_cw_indices() {
        let fiber = flat_fiber(25.0, 0.2);
        let plan = vec![
            PumpChannel::ase(
                thz(194.75),
                crate::units::PowerDensity::from_w_per_hz(1e-14).unwrap(),
                100.0,
                Direction::Co,
            )
            .unwrap(),
            cw_co(194.80, 3.981e-3),
        ];
        let bogus = FwmProduct {
            i: 0,
            j: 0,
            k: 1,
            degeneracy: 3,
            frequency: thz(194.70),
            delta_beta_rad_per_km: 2.0825,
        };
        let err = product_power(&bogus, &plan, &fiber, EfficiencyMode::Exact).unwrap_err();
        assert!(matches!(err, FwmError::NotCwCoTone { index: 0 }), "{err}");
    }

    #[test]
    fn subtraction_recovers_a_known_component() {
        let axis: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let fwm: Vec<f64> = axis
            .iter()
            .map(|l| 1e-9 * (0.3 * l).sin().powi(2))
            .collect();
        let linear: Vec<f64> = axis.iter().map(|l| 5e-9 * (-0.046 * l).exp()).collect();
        let total: Vec<(f64, f64)> = axis
            .iter()
            .zip(fwm.iter().zip(&linear))
            .map(|(&x, (&f, &lin))| (x, f + lin))
            .collect();
        let linear_series: Vec<(f64, f64)> =
            axis.iter().zip(&linear).map(|(&x, &y)| (x, y)).collect();
        let out = subtract_linear_contribution(&total, &linear_series).unwrap();
        assert!(out.clamped.is_empty());
        for ((_, got), expected) in out.points.iter().zip(&fwm) {
            assert_relative_eq!(*got, *expected, max_relative = 1e-9, epsilon = 1e-24);
        }
    }

    #[test]
    fn subtraction_of_identical_series_is_zero_without_clamps() {
        let series: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, 1e-9 * i as f64)).collect();
        let out = subtract_linear_contribution(&series, &series).unwrap();
        assert!(out.clamped.is_empty());
        assert!(out.points.iter().all(|&(_, y)| y == 0.0));
    }

    #[test]
    fn subtraction_clamps_negative_differences_and_flags_them() {
        let total = vec![(1.0, 1e-9), (2.0, 2e-9)];
        let linear = vec![(1.0, 1.5e-9), (2.0, 1e-9)];
        let out = subtract_linear_contribution(&total, &linear).unwrap();
        assert_eq!(out.clamped, vec![0]);
        assert_eq!(out.points[0], (1.0, 0.0));
        assert_relative_eq!(out.points[1].1, 1e-9, max_relative = 1e-12);
    }

    #[test]
    fn subtraction_rejects_mismatched_series() {
        let total = vec![(1.0, 1e-9), (2.0, 2e-9)];
        assert!(matches!(
            subtract_linear_contribution(&total, &total[..1]).unwrap_err(),
            FwmError::SeriesLengthMismatch { .. }
        ));
        let shifted = vec![(1.0, 1e-9), (2.1, 2e-9)];
        assert!(matches!(
            subtract_linear_contribution(&total, &shifted).unwrap_err(),
            FwmError::AxisMismatch { index: 1, .. }
        ));
    }
}
