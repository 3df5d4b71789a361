//! Physical constants and numerical constants shared across the crate.

/// Speed of light in vacuum (m/s, exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Positive root of sinc^2(x) = 1/2.
///
/// Sets the time-bandwidth relation of a box spectrum: a flat spectral
/// amplitude of full width W has intensity FWHM = 4*X_HALF/W.
pub const SINC_SQ_HALF_ARG: f64 = 1.391_557_378_251_51;

/// FWHM . bandwidth product of the box/sinc^2 pair, 4 * SINC_SQ_HALF_ARG.
pub const BOX_TIME_BANDWIDTH: f64 = 4.0 * SINC_SQ_HALF_ARG;

/// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
///
/// This is the convention used throughout: the crystal amplitude is
/// sinc(delta/2) and the box-window correlation profile is
/// sinc^2(W*dt/2) in this convention.
pub fn sinc(x: f64) -> f64 {
    // below ~1e-4 the quadratic term is at rounding level
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_basics() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(std::f64::consts::PI)).abs() < 1e-15);
        assert!((sinc(1e-5) - (1.0 - 1e-10 / 6.0)).abs() < 1e-16);
        // continuity across the small-x switch
        let a = sinc(1e-4 * 0.999_999);
        let b = sinc(1e-4 * 1.000_001);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn half_power_root() {
        let s = sinc(SINC_SQ_HALF_ARG);
        assert!((s * s - 0.5).abs() < 1e-12);
    }
}
