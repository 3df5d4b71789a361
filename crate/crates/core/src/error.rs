//! Error types for the simulation crate.

use crate::fit::SincFit;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("wavelength {got_nm:.4} nm outside dispersion validity range [{min_nm:.1}, {max_nm:.1}] nm ({bound} bound violated)")]
    WavelengthOutOfRange {
        got_nm: f64,
        min_nm: f64,
        max_nm: f64,
        /// which bound was violated: "lower" or "upper"
        bound: &'static str,
    },

    #[error("evanescent mode: q = {q:.6e} rad/m exceeds k1 = {k:.6e} rad/m; exclude such modes from the grid")]
    EvanescentMode { q: f64, k: f64 },

    #[error("defocus phase undefined: |omega offset| = {omega:.6e} rad/s must stay below the carrier {omega1:.6e} rad/s")]
    DefocusDomain { omega: f64, omega1: f64 },

    #[error("pinhole geometry requires positive diameter and distance (got d = {diameter:.3e} m, L = {distance:.3e} m)")]
    PinholeGeometry { diameter: f64, distance: f64 },

    #[error("pinhole half-angle {angle:.6} rad outside (0, pi/2)")]
    PinholeAngle { angle: f64 },

    #[error("effective bandwidth requires a pinhole in the transfer spec")]
    NoPinhole,

    #[error("grid too coarse: {axis} count {n} < 16")]
    GridTooCoarse { axis: &'static str, n: usize },

    #[error("grid q_max = {q_max:.6e} rad/m reaches evanescent modes (min k1 over the grid = {k_min:.6e} rad/m)")]
    GridEvanescent { q_max: f64, k_min: f64 },

    #[error("grid omega_max = {omega_max:.6e} rad/s not below the carrier frequency {omega1:.6e} rad/s")]
    GridOmegaRange { omega_max: f64, omega1: f64 },

    #[error("FFT check needs a power-of-two omega count, got {n}")]
    FftGridNotPowerOfTwo { n: usize },

    #[error("delay list must be nonempty and strictly increasing")]
    BadDelays,

    #[error("profile has no structure above the baseline (flat or all-equal)")]
    FlatProfile,

    #[error("profile maximum is not unique; width extraction would be ambiguous")]
    AmbiguousPeak,

    #[error("profile maximum sits at the sweep edge; width is unreliable")]
    EdgeMaximum,

    #[error("profile too short: need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("fit did not converge within {iterations} iterations (best residual norm {residual_norm:.6e})")]
    FitDidNotConverge {
        iterations: usize,
        residual_norm: f64,
        /// best iterate reached when the cap was hit
        best: SincFit,
    },

    #[error("transmission must lie in [0, 1], got {0}")]
    BadTransmission(f64),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
