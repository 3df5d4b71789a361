//! Scenario orchestration: run the configured scenario, write the profile
//! CSV(s), the summary JSON and the effective configuration.

use crate::config::{RunConfig, Scenario};
use crate::output::{fmt9, profile_csv, sig9, write_atomic};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use twinbeam_core::{
    scenario_fig2, scenario_fig3, scenario_fig4, ExperimentConfig, ScenarioResult, SincFit,
};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config: {0}")]
    Config(#[from] crate::config::ConfigError),
    #[error("{0}")]
    Core(#[from] twinbeam_core::Error),
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl AppError {
    pub fn kind(&self) -> &'static str {
        match self {
            AppError::Config(_) => "config",
            AppError::Core(_) => "model",
            AppError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
    move |source| AppError::Io { path: path.to_path_buf(), source }
}

fn fit_json(fit: &SincFit) -> Value {
    json!({
        "amplitude": sig9(fit.amplitude),
        "delta_omega_rad_per_s": sig9(fit.delta_omega),
        "center_fs": sig9(fit.center * 1e15),
        "baseline": sig9(fit.baseline),
        "residual_norm": sig9(fit.residual_norm),
        "iterations": fit.iterations,
        "converged": fit.converged,
    })
}

fn result_json(r: &ScenarioResult, csv_name: &str) -> Value {
    json!({
        "defocus_um": sig9(r.defocus * 1e6),
        "fwhm_fs": sig9(r.fwhm * 1e15),
        "peak_intensity": sig9(r.peak_intensity),
        "effective_bandwidth_rad_per_s": r.effective_bandwidth.map(sig9),
        "fit": fit_json(&r.fit),
        "profile_csv": csv_name,
    })
}

/// Re-run the swept transfer on a doubled grid and report the worst
/// peak-relative intensity change.
fn convergence_check(exp: &ExperimentConfig, r: &ScenarioResult) -> Result<Value, AppError> {
    let mut dense = exp.clone();
    dense.grid.n_q *= 2;
    dense.grid.n_omega *= 2;
    let corr = dense.correlator()?;
    let fine = corr.delay_sweep(&exp.delays, &r.profile.transfer_used, exp.baseline)?;
    let peak = fine.peak().max(f64::MIN_POSITIVE);
    let drift = r
        .profile
        .intensity
        .iter()
        .zip(&fine.intensity)
        .map(|(a, b)| (a - b).abs() / peak)
        .fold(0.0, f64::max);
    Ok(json!({
        "max_rel_change": sig9(drift),
        "within_tolerance": drift <= 1e-3,
    }))
}

pub fn run(
    cfg: &RunConfig,
    out_dir: &Path,
    grid_check: bool,
    workers: Option<usize>,
) -> Result<(), AppError> {
    let exp = cfg.to_experiment(workers)?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let mut results: Vec<(ScenarioResult, String)> = Vec::new();
    match cfg.scenario {
        Scenario::Fig2 => {
            results.push((scenario_fig2(&exp)?, "profile_fig2.csv".to_string()));
        }
        Scenario::Fig3 => {
            results.push((scenario_fig3(&exp)?, "profile_fig3.csv".to_string()));
        }
        Scenario::Fig4 => {
            for r in scenario_fig4(&exp)? {
                let name = format!("profile_fig4_dz{}um.csv", (r.defocus * 1e6).round() as i64);
                results.push((r, name));
            }
        }
        Scenario::Sweep => {
            // the configured transfer as-is, delay swept
            let corr = exp.correlator()?;
            let profile = corr.delay_sweep(&exp.delays, &exp.transfer, exp.baseline)?;
            let fwhm =
                twinbeam_core::extract_fwhm(&profile.delays, &profile.intensity, exp.baseline)?;
            let fit = twinbeam_core::fit_sinc_squared(&profile.delays, &profile.intensity)?;
            let peak_intensity = profile.peak() - exp.baseline;
            let effective_bandwidth = match exp.transfer.pinhole_half_angle {
                Some(_) => Some(exp.setup.effective_bandwidth(&exp.transfer)?),
                None => None,
            };
            results.push((
                ScenarioResult {
                    profile,
                    fwhm,
                    fit,
                    peak_intensity,
                    effective_bandwidth,
                    defocus: exp.transfer.defocus,
                },
                "profile_sweep.csv".to_string(),
            ));
        }
    }

    for (r, name) in &results {
        let path = out_dir.join(name);
        write_atomic(&path, &profile_csv(&r.profile)).map_err(io_err(&path))?;
        println!(
            "{}: fwhm = {} fs, fitted width = {} rad/s, peak = {} -> {}",
            cfg.scenario.name(),
            fmt9(r.fwhm * 1e15),
            fmt9(r.fit.delta_omega),
            fmt9(r.peak_intensity),
            path.display()
        );
    }

    let convergence = convergence_check(&exp, &results[0].0)?;
    println!(
        "grid convergence: max relative change under doubling = {} (within 1e-3: {})",
        convergence["max_rel_change"], convergence["within_tolerance"]
    );

    let mut summary = json!({
        "scenario": cfg.scenario.name(),
        "baseline": sig9(exp.baseline),
        "grid": {
            "q_max_rad_per_m": sig9(exp.grid.q_max),
            "n_q": exp.grid.n_q,
            "omega_max_rad_per_s": sig9(exp.grid.omega_max),
            "n_omega": exp.grid.n_omega,
        },
        "grid_convergence": convergence,
    });
    if results.len() == 1 {
        let (r, name) = &results[0];
        summary["fwhm_fs"] = json!(sig9(r.fwhm * 1e15));
        summary["fit"] = fit_json(&r.fit);
        summary["peak_intensity"] = json!(sig9(r.peak_intensity));
        if let Some(bw) = r.effective_bandwidth {
            summary["effective_bandwidth_rad_per_s"] = json!(sig9(bw));
        }
        summary["profile_csv"] = json!(name);
    } else {
        summary["members"] = Value::Array(
            results
                .iter()
                .map(|(r, name)| result_json(r, name))
                .collect(),
        );
    }

    if grid_check {
        let corr = exp.correlator()?;
        let report = corr.fft_backend_check()?;
        println!(
            "fft check: fft vs direct {} (n = {}); box vs analytic sinc: fft {}, direct {} (n = {})",
            fmt9(report.max_rel_fft_vs_direct),
            report.n_omega,
            fmt9(report.max_rel_box_fft_vs_analytic),
            fmt9(report.max_rel_box_direct_vs_analytic),
            report.n_box,
        );
        summary["fft_check"] = json!({
            "n_omega": report.n_omega,
            "n_box": report.n_box,
            "max_rel_fft_vs_direct": sig9(report.max_rel_fft_vs_direct),
            "max_rel_box_fft_vs_analytic": sig9(report.max_rel_box_fft_vs_analytic),
            "max_rel_box_direct_vs_analytic": sig9(report.max_rel_box_direct_vs_analytic),
        });
    }

    let summary_path = out_dir.join(format!("summary_{}.json", cfg.scenario.name()));
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_atomic(&summary_path, &(text + "\n")).map_err(io_err(&summary_path))?;

    let echo_path = out_dir.join("effective_config.txt");
    write_atomic(&echo_path, &cfg.echo()).map_err(io_err(&echo_path))?;
    println!("wrote {} and {}", summary_path.display(), echo_path.display());
    Ok(())
}
