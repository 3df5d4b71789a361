//! Scenario layer: the three measurement configurations and their
//! quantitative summaries.
//!
//! - `scenario_fig2`: ideal imaging, box spectral window. The delay
//!   profile is close to the box Fourier pair sinc^2(W dt / 2); a
//!   GVD-scale dip of the joint amplitude at degeneracy (only half the
//!   phase-matching ridge exists at omega = 0) narrows it by a few
//!   percent relative to the pure pair.
//! - `scenario_fig3`: a far-field pinhole clips the transverse modes;
//!   phase matching then survives only inside a reduced temporal band and
//!   the delay profile broadens accordingly.
//! - `scenario_fig4`: the second crystal sits off the image plane; the
//!   defocus propagation phase acts like temporal chirp, broadening the
//!   profile and suppressing the peak.

use crate::correlator::{AmplitudeModel, CorrelationProfile, Correlator, Grid, Reduction};
use crate::dispersion::{DispersionModel, FieldParams, SignalDispersion};
use crate::error::Result;
use crate::fit::{extract_fwhm, fit_sinc_squared, fit_sinc_squared_fixed_baseline, SincFit};
use crate::phasematch::{CrystalSpec, Setup, SfgConvention};
use crate::propagation::{pinhole_half_angle_from_geometry, SpectralWindow, TransferSpec};

/// Everything a scenario needs: physics, sampling, path and sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub setup: Setup,
    pub grid: Grid,
    pub transfer: TransferSpec,
    pub delays: Vec<f64>,
    /// image-plane displacements for the defocus family
    pub defocus_list: Vec<f64>,
    /// additive background level added to every swept intensity
    pub baseline: f64,
    pub amplitude: AmplitudeModel,
    pub workers: Option<usize>,
}

/// Default delay sweep: -60 fs to +60 fs in 0.5 fs steps (241 points).
pub fn default_delays() -> Vec<f64> {
    (0..=240).map(|k| (-60.0 + 0.5 * k as f64) * 1e-15).collect()
}

impl ExperimentConfig {
    /// The as-built configuration: 527.5 nm pump, two tuned 4 mm BBO
    /// crystals, 0.9e15 rad/s transmission window, ideal imaging.
    pub fn paper_defaults() -> Self {
        let setup = Setup {
            signal: SignalDispersion::new(
                DispersionModel::bbo_kato_1986(),
                FieldParams::degenerate(527.5e-9),
            ),
            pdc: CrystalSpec::tuned(4e-3, 0.01),
            sfg: CrystalSpec::tuned(4e-3, 1.0),
            convention: SfgConvention::default(),
        };
        ExperimentConfig {
            setup,
            grid: Grid {
                q_max: 4e5,
                n_q: 512,
                omega_max: 0.45e15,
                n_omega: 1024,
                reduction: Reduction::Radial,
            },
            transfer: TransferSpec {
                window: Some(SpectralWindow::hard(0.9e15)),
                ..Default::default()
            },
            delays: default_delays(),
            defocus_list: vec![0.0, 100e-6, 200e-6, 400e-6],
            baseline: 0.0,
            amplitude: AmplitudeModel::Physical,
            workers: None,
        }
    }

    pub fn correlator(&self) -> Result<Correlator> {
        Ok(Correlator::new(self.setup.clone(), self.grid.clone(), self.amplitude)?
            .with_workers(self.workers))
    }
}

/// One sweep plus its extracted observables.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub profile: CorrelationProfile,
    pub fwhm: f64,
    pub fit: SincFit,
    /// peak height above the configured baseline
    pub peak_intensity: f64,
    /// pinhole-limited phase-matching band, when a pinhole is present
    pub effective_bandwidth: Option<f64>,
    /// image-plane displacement this sweep was run at
    pub defocus: f64,
}

fn run_sweep(
    cfg: &ExperimentConfig,
    transfer: &TransferSpec,
    fixed_fit_baseline: Option<f64>,
) -> Result<ScenarioResult> {
    let corr = cfg.correlator()?;
    let profile = corr.delay_sweep(&cfg.delays, transfer, cfg.baseline)?;
    let fwhm = extract_fwhm(&profile.delays, &profile.intensity, cfg.baseline)?;
    let fit = match fixed_fit_baseline {
        Some(b) => fit_sinc_squared_fixed_baseline(&profile.delays, &profile.intensity, b)?,
        None => fit_sinc_squared(&profile.delays, &profile.intensity)?,
    };
    let peak_intensity = profile.peak() - cfg.baseline;
    let effective_bandwidth = if transfer.pinhole_half_angle.is_some() {
        Some(cfg.setup.effective_bandwidth(transfer)?)
    } else {
        None
    };
    Ok(ScenarioResult {
        profile,
        fwhm,
        fit,
        peak_intensity,
        effective_bandwidth,
        defocus: transfer.defocus,
    })
}

/// Ideal-path transfer for this configuration: the configured window and
/// transmission, no pinhole, no defocus.
fn ideal_transfer(cfg: &ExperimentConfig) -> TransferSpec {
    TransferSpec {
        pinhole_half_angle: None,
        defocus: 0.0,
        defocus_as_chirp: false,
        ..cfg.transfer.clone()
    }
}

/// Temporal correlation of the twin beams through the ideal imaging path.
pub fn scenario_fig2(cfg: &ExperimentConfig) -> Result<ScenarioResult> {
    run_sweep(cfg, &ideal_transfer(cfg), None)
}

/// Spatial filtering: the ideal path plus a far-field pinhole (the
/// configured one, or the as-built 4 mm aperture at 29 cm).
pub fn scenario_fig3(cfg: &ExperimentConfig) -> Result<ScenarioResult> {
    let mut t = ideal_transfer(cfg);
    t.pinhole_half_angle = match cfg.transfer.pinhole_half_angle {
        Some(a) => Some(a),
        None => Some(pinhole_half_angle_from_geometry(4e-3, 0.29)?),
    };
    run_sweep(cfg, &t, None)
}

/// Imaging error: one sweep per configured displacement of the second
/// crystal. The fit baseline is shared across the family (taken from the
/// in-focus fit).
pub fn scenario_fig4(cfg: &ExperimentConfig) -> Result<Vec<ScenarioResult>> {
    let mut out = Vec::with_capacity(cfg.defocus_list.len());
    let mut shared_baseline: Option<f64> = None;
    for &dz in &cfg.defocus_list {
        let mut t = ideal_transfer(cfg);
        t.defocus = dz;
        t.defocus_as_chirp = cfg.transfer.defocus_as_chirp;
        let r = run_sweep(cfg, &t, shared_baseline)?;
        if shared_baseline.is_none() {
            shared_baseline = Some(r.fit.baseline);
        }
        out.push(r);
    }
    Ok(out)
}
