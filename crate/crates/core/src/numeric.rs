//! Small shared numerics for the closed-form models.
//!
//! Deliberately *not* used by the quadrature oracle, which must stay an
//! independent check on the closed forms.

/// |x|·L below which `decay_integral` switches to its series form.
pub(crate) const DEGENERATE_EXPONENT_THRESHOLD: f64 = 1e-6;

/// ∫₀ᴸ e^{-x z} dz, stable for x of either sign and for x → 0.
///
/// Uses (1 - e^{-xL})/x via `expm1` when the exponent is appreciable and the
/// series L·(1 - xL/2 + (xL)²/6) when |x|·L < 1e-6, where the direct quotient
/// loses precision to cancellation.
pub(crate) fn decay_integral(x: f64, length_km: f64) -> f64 {
    let exponent = x * length_km;
    if exponent.abs() < DEGENERATE_EXPONENT_THRESHOLD {
        length_km * (1.0 - exponent / 2.0 + exponent * exponent / 6.0)
    } else {
        -(-exponent).exp_m1() / x
    }
}
