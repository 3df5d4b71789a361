//! Simulator of the twin-beam down-conversion / sum-frequency correlation
//! measurement.
//!
//! A nonlinear crystal splits pump photons into broadband twin beams; a
//! second, identical crystal recombines them, and the coherent part of the
//! up-converted intensity versus the relative delay between the twin
//! components traces their temporal correlation. Because phase matching
//! ties the transverse wave vector to the frequency offset (diffraction
//! compensating dispersion), the correlation stays femtosecond-narrow over
//! a huge bandwidth as long as the imaging between the crystals is ideal --
//! and degrades in specific ways under spatial filtering or defocus, which
//! the scenario layer reproduces.
//!
//! Module map:
//!
//! - [`dispersion`]: Sellmeier model, wave numbers, group-velocity
//!   dispersion, pump tuning;
//! - [`phasematch`]: phase mismatch and the complex pair amplitudes of the
//!   two crystals;
//! - [`propagation`]: the two-arm optical transfer product (delay, window,
//!   pinhole, gap, defocus);
//! - [`correlator`]: midpoint quadrature of the correlation integrals,
//!   delay sweeps, FFT cross-check;
//! - [`fit`]: peak-width extraction and the sinc^2 profile fit;
//! - [`experiments`]: the three measurement scenarios and their summaries.
//!
//! Conventions, fixed crate-wide: SI units everywhere (rad/s, rad/m, m,
//! s); unnormalized sinc(x) = sin(x)/x; ordinary-polarized signal and
//! extraordinary pump (type-I, negative uniaxial); spectral jacobian
//! d^3w/(2pi)^3 with the radial reduction int q dq / (2pi).

pub mod bessel;
pub mod constants;
pub mod correlator;
pub mod dispersion;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod phasematch;
pub mod propagation;

pub use constants::{BOX_TIME_BANDWIDTH, SINC_SQ_HALF_ARG, SPEED_OF_LIGHT};
pub use correlator::{
    AmplitudeModel, CorrelationProfile, Correlator, FftCheckReport, Grid, Reduction,
};
pub use dispersion::{
    DispersionModel, FieldParams, Polarization, PumpMode, Sellmeier, SignalDispersion,
};
pub use error::{Error, Result};
pub use experiments::{
    default_delays, scenario_fig2, scenario_fig3, scenario_fig4, ExperimentConfig, ScenarioResult,
};
pub use fit::{extract_fwhm, fit_sinc_squared, fit_sinc_squared_fixed_baseline, SincFit};
pub use phasematch::{
    CrystalSpec, MismatchModel, Setup, SfgConvention, SfgPhase, SincArgument, SpectralMode,
};
pub use propagation::{
    pinhole_half_angle_from_geometry, SpectralWindow, TransferSpec, WindowEdge,
};
