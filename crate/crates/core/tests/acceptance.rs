//! Acceptance suite: each test runs one release criterion at its stated
//! tolerance and prints one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Criterion 2 asserts the widely quoted pinhole figures as stated; with
//! standard published BBO dispersion the computed effective bandwidth and
//! profile width land well outside those gates (the quoted bandwidth is
//! consistent with the measured width, not with the aperture geometry),
//! so that test documents the discrepancy and fails honestly rather than
//! fitting the dispersion data to the target.

use twinbeam_core::*;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("[{criterion}] {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion}: {detail}");
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target.abs()
}

fn defaults() -> ExperimentConfig {
    ExperimentConfig::paper_defaults()
}

#[test]
fn criterion_1_ideal_profile_reproduction() {
    let cfg = defaults();
    let r = scenario_fig2(&cfg).unwrap();
    let fwhm_fs = r.fwhm * 1e15;
    let fit_dev = (r.fit.delta_omega - 0.9e15).abs() / 0.9e15;

    // regression against the independent oracle (same discretization)
    assert!((fwhm_fs - 5.99719196).abs() < 5e-3, "oracle drift: {fwhm_fs}");
    assert!(
        within(r.fit.delta_omega, 9.27182966576e14, 1e-3),
        "oracle drift: fitted width {:.6e}",
        r.fit.delta_omega
    );

    // the recording the sinc-argument switch asks for: the half-argument
    // convention misses both gates by a hair
    let mut half = defaults();
    half.setup.convention.sinc_argument = SincArgument::Half;
    let rh = scenario_fig2(&half).unwrap();
    println!(
        "[criterion 1] recording: sinc argument `full` reproduces the ideal profile; \
         `half` gives fwhm = {:.4} fs, fitted width dev {:+.2}%",
        rh.fwhm * 1e15,
        (rh.fit.delta_omega - 0.9e15) / 0.9e15 * 100.0
    );

    let pass = (5.9e-15..=6.5e-15).contains(&r.fwhm) && fit_dev <= 0.05;
    report(
        "criterion 1",
        pass,
        &format!(
            "ideal path: fwhm = {fwhm_fs:.4} fs (gate 6.2 +/- 0.3), fitted width = {:.5e} rad/s \
             ({:+.2}% vs 0.9e15, gate 5%), fit residual = {:.3e}",
            r.fit.delta_omega,
            fit_dev * 100.0,
            r.fit.residual_norm
        ),
    );
}

#[test]
fn criterion_2_pinhole_figures_as_stated() {
    let cfg = defaults();
    let r = scenario_fig3(&cfg).unwrap();
    let bw = r.effective_bandwidth.unwrap();
    let fwhm_fs = r.fwhm * 1e15;

    // regression against the oracle values for the honest computation
    assert!(within(bw, 2.089760815206382e14, 1e-9), "oracle drift: {bw:.6e}");
    assert!((fwhm_fs - 21.9031).abs() < 0.05, "oracle drift: {fwhm_fs}");

    let bw_ok = within(bw, 0.34e15, 0.20);
    let fwhm_ok = within(r.fwhm, 16.4e-15, 0.15);
    report(
        "criterion 2",
        bw_ok && fwhm_ok,
        &format!(
            "pinhole 4 mm at 29 cm: effective bandwidth = {bw:.4e} rad/s \
             (gate 0.34e15 +/- 20%: {}), fwhm = {fwhm_fs:.3} fs (gate 16.4 +/- 15%: {}); \
             standard BBO dispersion (k1'' = 4.29e-26 s^2/m at 1055 nm) cannot reach the \
             quoted bandwidth, which matches the measured width instead of the stated geometry",
            if bw_ok { "ok" } else { "violated" },
            if fwhm_ok { "ok" } else { "violated" },
        ),
    );
}

#[test]
fn criterion_3_defocus_trends() {
    let cfg = defaults();
    let family = scenario_fig4(&cfg).unwrap();
    assert_eq!(family.len(), 4);

    let widths: Vec<f64> = family.iter().map(|r| r.fwhm * 1e15).collect();
    let peaks: Vec<f64> = family.iter().map(|r| r.peak_intensity).collect();
    let widths_ok = widths.windows(2).all(|w| w[1] >= w[0]);
    let peaks_ok = peaks.windows(2).all(|p| p[1] < p[0]);

    // in-focus member must equal the ideal-path sweep bit for bit
    let fig2 = scenario_fig2(&cfg).unwrap();
    let bitwise = fig2
        .profile
        .intensity
        .iter()
        .zip(&family[0].profile.intensity)
        .all(|(a, b)| a.to_bits() == b.to_bits());

    report(
        "criterion 3",
        widths_ok && peaks_ok && bitwise,
        &format!(
            "defocus 0/100/200/400 um: fwhm = {widths:.3?} fs (nondecreasing: {widths_ok}), \
             peaks decreasing: {peaks_ok}, in-focus run bit-identical to the ideal path: {bitwise}"
        ),
    );
}

#[test]
fn criterion_4_fft_cross_validation() {
    let cfg = defaults();
    let corr = cfg.correlator().unwrap();
    let r = corr.fft_backend_check().unwrap();
    let pass = r.max_rel_fft_vs_direct < 1e-6
        && r.max_rel_box_fft_vs_analytic < 1e-9
        && r.max_rel_box_direct_vs_analytic < 1e-9;
    report(
        "criterion 4",
        pass,
        &format!(
            "fft vs direct on the default grid: {:.2e} (gate 1e-6); box spectrum vs analytic \
             sinc on {} samples: fft {:.2e}, direct {:.2e} (gate 1e-9)",
            r.max_rel_fft_vs_direct, r.n_box, r.max_rel_box_fft_vs_analytic,
            r.max_rel_box_direct_vs_analytic
        ),
    );
}

#[test]
fn criterion_5a_short_crystal_convolution_limit() {
    // with the second crystal cut to 1/100 length its amplitude is flat
    // over the band and the sweep collapses onto the squared biphoton
    // correlation at zero transverse separation
    let mut cfg = defaults();
    cfg.setup.sfg.length = cfg.setup.pdc.length / 100.0;
    let sweep = scenario_fig2(&cfg).unwrap();
    let swept = sweep.profile.normalized();

    let corr = defaults().correlator().unwrap();
    let psi = corr.biphoton_profile(0.0, &cfg.delays).unwrap();
    let psi_sq: Vec<f64> = psi.iter().map(|c| c.norm_sqr()).collect();
    let m = psi_sq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let max_dev = swept
        .iter()
        .zip(&psi_sq)
        .map(|(a, b)| (a - b / m).abs())
        .fold(0.0, f64::max);
    report(
        "criterion 5a",
        max_dev <= 0.02,
        &format!(
            "short-crystal limit (length/100): max pointwise deviation of the normalized sweep \
             from |psi(0, dt)|^2 = {max_dev:.4} (gate 0.02)"
        ),
    );
}

#[test]
fn criterion_5b_box_time_bandwidth_constant() {
    // flat joint amplitude: the sweep is the exact box pair and the
    // width-bandwidth product must sit on 4 * 1.3916 across the sweep
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for w in [0.45e15, 0.6e15, 0.75e15, 0.9e15, 1.05e15] {
        let mut cfg = defaults();
        cfg.amplitude = AmplitudeModel::Flat;
        cfg.transfer.window = Some(SpectralWindow::hard(w));
        cfg.grid.omega_max = w / 2.0;
        cfg.delays = (0..=960).map(|k| (-120.0 + 0.25 * k as f64) * 1e-15).collect();
        let r = scenario_fig2(&cfg).unwrap();
        let product = r.fwhm * w;
        worst = worst.max((product - BOX_TIME_BANDWIDTH).abs() / BOX_TIME_BANDWIDTH);
        lines.push(format!("{:.3e}:{:.4}", w, product));
    }
    report(
        "criterion 5b",
        worst <= 0.02,
        &format!(
            "time-bandwidth products over the window sweep [{}] vs {:.4} (gate 2%), worst \
             deviation {:.3e}",
            lines.join(", "),
            BOX_TIME_BANDWIDTH,
            worst
        ),
    );
}

#[test]
fn criterion_5c_defocus_chirp_substitution() {
    // literal q^2 defocus phase vs its on-locus chirp substitution, run in
    // the quadratic mismatch model that defines the substitution
    let run = |quadratic: bool, chirp: bool| -> Vec<f64> {
        let mut cfg = defaults();
        if quadratic {
            cfg.setup.pdc.mismatch_model = MismatchModel::Quadratic;
            cfg.setup.sfg.mismatch_model = MismatchModel::Quadratic;
        }
        cfg.transfer.defocus_as_chirp = chirp;
        scenario_fig4(&cfg)
            .unwrap()
            .iter()
            .map(|r| r.fwhm)
            .collect()
    };
    let lit = run(true, false);
    let chp = run(true, true);
    let devs: Vec<f64> = lit
        .iter()
        .zip(&chp)
        .map(|(a, b)| (a - b).abs() / b)
        .collect();
    let worst = devs.iter().cloned().fold(0.0, f64::max);

    // recorded observation: under the full mismatch model the substitution
    // ignores the ridge width and drifts beyond the gate at larger offsets
    let lit_f = run(false, false);
    let chp_f = run(false, true);
    let worst_full = lit_f
        .iter()
        .zip(&chp_f)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    println!(
        "[criterion 5c] recording: full-model comparison deviates up to {:.1}% \
         (literal {:?} fs vs chirp {:?} fs)",
        worst_full * 100.0,
        lit_f.iter().map(|v| (v * 1e15 * 1e3).round() / 1e3).collect::<Vec<_>>(),
        chp_f.iter().map(|v| (v * 1e15 * 1e3).round() / 1e3).collect::<Vec<_>>()
    );

    report(
        "criterion 5c",
        worst <= 0.10,
        &format!(
            "defocus literal vs chirp substitution (quadratic mismatch): fwhm deviations \
             {:?} over 0/100/200/400 um (gate 10% each)",
            devs.iter().map(|v| format!("{:.2}%", v * 100.0)).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_6_numerical_hygiene() {
    let cfg = defaults();

    // grid doubling moves no reported intensity by more than 0.1% of peak
    let base = scenario_fig2(&cfg).unwrap();
    let mut dense = defaults();
    dense.grid.n_q *= 2;
    dense.grid.n_omega *= 2;
    let fine = scenario_fig2(&dense).unwrap();
    let peak = fine.profile.peak();
    let drift = base
        .profile
        .intensity
        .iter()
        .zip(&fine.profile.intensity)
        .map(|(a, b)| (a - b).abs() / peak)
        .fold(0.0, f64::max);

    // dispersion identities
    let gvd = cfg.setup.signal.gvd().unwrap();
    let gvd_fd = cfg.setup.signal.gvd_finite_difference(1e12).unwrap();
    let gvd_dev = (gvd - gvd_fd).abs() / gvd;
    let mut kz_dev: f64 = 0.0;
    for &(q, om) in &[(1e5, 1e14), (3e5, -4e14), (3.9e5, 4.4e14), (2e5, 0.0)] {
        let k = cfg.setup.signal.wavenumber(om).unwrap();
        let kz = cfg.setup.signal.kz(q, om).unwrap();
        kz_dev = kz_dev.max(((kz * kz + q * q) / (k * k) - 1.0).abs());
    }

    // worker-count independence, bit for bit
    let mut one = defaults();
    one.workers = Some(1);
    let mut four = defaults();
    four.workers = Some(4);
    let a = scenario_fig2(&one).unwrap();
    let b = scenario_fig2(&four).unwrap();
    let deterministic = a
        .profile
        .intensity
        .iter()
        .zip(&b.profile.intensity)
        .all(|(x, y)| x.to_bits() == y.to_bits());

    let pass = drift <= 1e-3 && gvd_dev < 1e-6 && kz_dev < 1e-12 && deterministic;
    report(
        "criterion 6",
        pass,
        &format!(
            "grid doubling drift {drift:.2e} (gate 1e-3); gvd analytic/fd {gvd_dev:.2e} \
             (gate 1e-6); kz identity {kz_dev:.2e} (gate 1e-12); worker-count bitwise \
             determinism: {deterministic}"
        ),
    );
}
