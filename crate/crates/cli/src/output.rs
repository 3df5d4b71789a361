//! Output files: profile CSV, summary JSON, effective config echo.
//!
//! Every floating-point value is printed with nine significant digits in
//! scientific notation, locale-independent, so golden files are stable
//! across runs and platforms. Files are written next to their final name
//! and renamed into place, so a failed run never leaves a partial file.

use std::fs;
use std::io;
use std::path::Path;
use twinbeam_core::CorrelationProfile;

/// Nine-significant-digit rendering used for all floating-point output.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Round through the nine-digit representation (for JSON numbers).
pub fn sig9(x: f64) -> f64 {
    fmt9(x).parse().expect("formatted float reparses")
}

/// Write-then-rename; the destination appears atomically.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// CSV with a fixed header: delay in femtoseconds, raw intensity,
/// max-normalized intensity.
pub fn profile_csv(profile: &CorrelationProfile) -> String {
    let normalized = profile.normalized();
    let mut out = String::with_capacity(profile.delays.len() * 48 + 64);
    out.push_str("delay_fs,intensity,intensity_normalized\n");
    for ((dt, i), n) in profile
        .delays
        .iter()
        .zip(&profile.intensity)
        .zip(&normalized)
    {
        out.push_str(&fmt9(dt * 1e15));
        out.push(',');
        out.push_str(&fmt9(*i));
        out.push(',');
        out.push_str(&fmt9(*n));
        out.push('\n');
    }
    out
}
