//! Peak-width extraction and the sinc^2 profile fit.

use crate::constants::{sinc, BOX_TIME_BANDWIDTH};
use crate::error::{Error, Result};

/// Full width at half maximum above the given baseline, by linear
/// interpolation of the two crossings bracketing the (unique) peak.
pub fn extract_fwhm(delays: &[f64], intensity: &[f64], baseline: f64) -> Result<f64> {
    let n = intensity.len();
    if n < 5 || delays.len() != n {
        return Err(Error::TooFewPoints { need: 5, got: n });
    }
    let mut imax = 0;
    for (i, v) in intensity.iter().enumerate() {
        if *v > intensity[imax] {
            imax = i;
        }
    }
    let max = intensity[imax];
    let min = intensity.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(max > baseline) || max == min {
        return Err(Error::FlatProfile);
    }
    if intensity.iter().enumerate().any(|(i, v)| i != imax && *v == max) {
        return Err(Error::AmbiguousPeak);
    }
    if imax == 0 || imax == n - 1 {
        return Err(Error::EdgeMaximum);
    }
    let half = baseline + (max - baseline) / 2.0;

    let mut left = None;
    for i in (0..imax).rev() {
        if intensity[i] <= half {
            let f = (half - intensity[i]) / (intensity[i + 1] - intensity[i]);
            left = Some(delays[i] + f * (delays[i + 1] - delays[i]));
            break;
        }
    }
    let mut right = None;
    for i in imax + 1..n {
        if intensity[i] <= half {
            let f = (half - intensity[i - 1]) / (intensity[i] - intensity[i - 1]);
            right = Some(delays[i - 1] + f * (delays[i] - delays[i - 1]));
            break;
        }
    }
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        // the peak never falls to half level inside the sweep
        _ => Err(Error::EdgeMaximum),
    }
}

/// Result of the least-squares fit to
/// `baseline + amplitude * sinc^2(delta_omega (t - center)/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SincFit {
    pub amplitude: f64,
    /// fitted box full width (rad/s)
    pub delta_omega: f64,
    pub center: f64,
    pub baseline: f64,
    /// euclidean norm of the residual vector at the solution
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn model(t: f64, a: f64, w: f64, c: f64, b: f64) -> f64 {
    let u = w * (t - c) / 2.0;
    let s = sinc(u);
    b + a * s * s
}

/// d(sinc)/du, series-guarded at the origin.
fn sinc_deriv(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        -u / 3.0 + u * u * u / 30.0
    } else {
        (u.cos() - sinc(u)) / u
    }
}

const MAX_ITER: usize = 200;

/// Levenberg-Marquardt over {amplitude, delta_omega, center, baseline}.
///
/// Deterministic: the initial guess is amplitude = max - min, width from
/// the crude FWHM through the box relation, center at the arg max,
/// baseline at the min; damping follows a fixed schedule.
pub fn fit_sinc_squared(delays: &[f64], intensity: &[f64]) -> Result<SincFit> {
    fit_impl(delays, intensity, None, MAX_ITER)
}

/// Same fit with the baseline frozen to a prescribed value.
pub fn fit_sinc_squared_fixed_baseline(
    delays: &[f64],
    intensity: &[f64],
    baseline: f64,
) -> Result<SincFit> {
    fit_impl(delays, intensity, Some(baseline), MAX_ITER)
}

pub(crate) fn fit_impl(
    delays: &[f64],
    intensity: &[f64],
    fixed_baseline: Option<f64>,
    max_iter: usize,
) -> Result<SincFit> {
    let n = intensity.len();
    if n < 8 || delays.len() != n {
        return Err(Error::TooFewPoints { need: 8, got: n });
    }
    let max = intensity.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = intensity.iter().cloned().fold(f64::INFINITY, f64::min);
    let imax = intensity
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();

    // spec'd initial guess rule
    let b0 = fixed_baseline.unwrap_or(min);
    let a0 = max - min;
    let c0 = delays[imax];
    let crude = extract_fwhm(delays, intensity, min)?;
    let w0 = BOX_TIME_BANDWIDTH / crude;

    let free_b = fixed_baseline.is_none();
    let np = if free_b { 4 } else { 3 };
    let mut p = [a0, w0, c0, b0];

    let cost = |p: &[f64; 4]| -> f64 {
        delays
            .iter()
            .zip(intensity)
            .map(|(&t, &y)| {
                let r = model(t, p[0], p[1], p[2], p[3]) - y;
                r * r
            })
            .sum()
    };

    let mut lambda = 1e-3;
    let mut c_now = cost(&p);
    let mut converged = false;
    let mut iterations = 0;
    let scale = max.abs().max(1e-300);

    for it in 0..max_iter {
        iterations = it + 1;
        // normal equations J^T J + lambda diag, J^T r
        let mut jtj = [[0.0f64; 4]; 4];
        let mut jtr = [0.0f64; 4];
        for (&t, &y) in delays.iter().zip(intensity) {
            let u = p[1] * (t - p[2]) / 2.0;
            let s = sinc(u);
            let ds = 2.0 * s * sinc_deriv(u);
            let g = [
                s * s,                      // d/d amplitude
                p[0] * ds * (t - p[2]) / 2.0, // d/d width
                p[0] * ds * (-p[1] / 2.0),  // d/d center
                1.0,                        // d/d baseline
            ];
            let r = model(t, p[0], p[1], p[2], p[3]) - y;
            for i in 0..np {
                jtr[i] += g[i] * r;
                for j in 0..np {
                    jtj[i][j] += g[i] * g[j];
                }
            }
        }

        // damped solve; retry with a stiffer damping on failure/ascent
        let mut improved = false;
        for _ in 0..24 {
            let mut a = jtj;
            for i in 0..np {
                a[i][i] += lambda * jtj[i][i].max(1e-30);
            }
            let Some(step) = solve(&mut a, &jtr, np) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = p;
            for i in 0..np {
                trial[i] -= step[i];
            }
            let c_trial = cost(&trial);
            if c_trial < c_now {
                let rel_step = step
                    .iter()
                    .take(np)
                    .zip(&p)
                    .map(|(s, v)| (s / v.abs().max(1e-30)).abs())
                    .fold(0.0, f64::max);
                let rel_drop = (c_now - c_trial) / c_now.max(1e-300);
                p = trial;
                c_now = c_trial;
                lambda = (lambda / 3.0).max(1e-14);
                improved = true;
                if rel_step < 1e-12 || rel_drop < 1e-14 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            // damping saturated: nothing better in this neighborhood
            converged = c_now <= (1e-24 * scale * scale) * n as f64 || lambda > 1e12;
        }
        if converged {
            break;
        }
    }

    let fit = SincFit {
        amplitude: p[0],
        delta_omega: p[1].abs(), // the model is even in the width
        center: p[2],
        baseline: p[3],
        residual_norm: c_now.sqrt(),
        iterations,
        converged,
    };
    if !converged {
        return Err(Error::FitDidNotConverge {
            iterations,
            residual_norm: fit.residual_norm,
            best: fit,
        });
    }
    Ok(fit)
}

/// Gaussian elimination with partial pivoting on the leading np x np block.
fn solve(a: &mut [[f64; 4]; 4], b: &[f64; 4], np: usize) -> Option<[f64; 4]> {
    let mut x = *b;
    for col in 0..np {
        let mut piv = col;
        for r in col + 1..np {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..np {
            let f = a[r][col] / a[col][col];
            for c in col..np {
                a[r][c] -= f * a[col][c];
            }
            x[r] -= f * x[col];
        }
    }
    let mut out = [0.0; 4];
    for col in (0..np).rev() {
        let mut s = x[col];
        for c in col + 1..np {
            s -= a[col][c] * out[c];
        }
        out[col] = s / a[col][col];
    }
    Some(out)
}
