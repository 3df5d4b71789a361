//! Phase mismatch and the complex pair amplitudes of the two crystals.
//!
//! The dimensionless mismatch over a crystal of length `l` is
//!
//! ```text
//! delta(q, omega) = l * [ kz(q, omega) + kz(q, -omega) - k0 ] + offset
//! ```
//!
//! symmetric in `omega` by construction. Close to degeneracy it reduces to
//! the quadratic form `-q^2 l / k1 + k1'' l omega^2`, whose zero set is the
//! hyperbola `q^2 = k1 k1'' omega^2`: diffraction compensating temporal
//! dispersion. Pair generation concentrates on that locus.
//!
//! Amplitude conventions (low gain):
//!
//! - generation:    `g * sinc(delta/2) * exp(+i delta/2)`
//! - up-conversion: `s * sinc(arg) * exp(-i delta'/2)` with `arg` either
//!   `delta'` (default) or `delta'/2`, switchable.
//!
//! The up-conversion phase is the conjugate of the generation phase, so
//! that for identical, identically tuned crystals the product of the two
//! amplitudes is real and the delay profile reproduces the squared
//! correlation. A `printed` phase convention (`exp(+i delta'/2)`) exists
//! as a switch; with it the transverse integral of the product vanishes
//! over the phase-matched plateau (the integral of sinc^2(x/2) e^{ix} is
//! exactly zero) and no coherent peak survives.

use crate::constants::sinc;
use crate::dispersion::{PumpMode, SignalDispersion};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// A point of the spectral integration domain: radial transverse
/// wave-vector magnitude plus frequency offset from the carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    /// |q| >= 0, rad/m
    pub q: f64,
    /// offset from omega1, rad/s
    pub omega: f64,
}

impl SpectralMode {
    pub fn new(q: f64, omega: f64) -> Self {
        SpectralMode { q, omega }
    }

    /// The conjugate mode (-q, -omega); radial q keeps its magnitude.
    pub fn conjugate(self) -> Self {
        SpectralMode { q: self.q, omega: -self.omega }
    }
}

/// Which mismatch expression the amplitudes use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MismatchModel {
    /// exact longitudinal imbalance from the dispersion model
    Full,
    /// quadratic expansion `-q^2 l/k1 + k1'' l omega^2`
    Quadratic,
}

/// Argument of the sinc in the up-conversion amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SincArgument {
    /// sinc(delta'), as printed in the source material; reproduces the
    /// ideal-path temporal profile and is the scenario default
    Full,
    /// sinc(delta'/2), mirror of the generation amplitude
    Half,
}

/// Sign of the up-conversion phase exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfgPhase {
    /// exp(-i delta'/2): cancels the generation phase (default)
    Conjugate,
    /// exp(+i delta'/2): literal printed form, kept for comparison
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfgConvention {
    pub sinc_argument: SincArgument,
    pub phase: SfgPhase,
}

impl Default for SfgConvention {
    fn default() -> Self {
        SfgConvention { sinc_argument: SincArgument::Full, phase: SfgPhase::Conjugate }
    }
}

/// One crystal: length, gain prefactor, pump tuning, mismatch handling.
///
/// `gain` is the low-gain generation parameter g for the first crystal and
/// the dimensionless up-conversion prefactor (sigma * length) for the
/// second one.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalSpec {
    /// crystal length (m)
    pub length: f64,
    /// dimensionless amplitude prefactor
    pub gain: f64,
    pub pump_mode: PumpMode,
    /// additive dimensionless detuning of the mismatch
    pub mismatch_offset: f64,
    pub mismatch_model: MismatchModel,
}

impl CrystalSpec {
    pub fn tuned(length: f64, gain: f64) -> Self {
        CrystalSpec {
            length,
            gain,
            pump_mode: PumpMode::Tuned,
            mismatch_offset: 0.0,
            mismatch_model: MismatchModel::Full,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) {
            return Err(Error::Invalid(format!(
                "crystal length must be positive, got {:.3e} m",
                self.length
            )));
        }
        if self.gain < 0.0 {
            return Err(Error::Invalid(format!("gain must be >= 0, got {}", self.gain)));
        }
        Ok(())
    }
}

/// The two-crystal optical setup evaluated against one dispersion model.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub signal: SignalDispersion,
    pub pdc: CrystalSpec,
    pub sfg: CrystalSpec,
    pub convention: SfgConvention,
}

impl Setup {
    pub fn validate(&self) -> Result<()> {
        self.pdc.validate()?;
        self.sfg.validate()
    }

    /// Dimensionless phase mismatch of `crystal` at `mode`, per its
    /// configured mismatch model.
    pub fn mismatch(&self, crystal: &CrystalSpec, mode: SpectralMode) -> Result<f64> {
        match crystal.mismatch_model {
            MismatchModel::Full => self.mismatch_full(crystal, mode),
            MismatchModel::Quadratic => self.mismatch_quadratic(crystal, mode),
        }
    }

    /// Exact mismatch `l (kz(q,w) + kz(q,-w) - k0) + offset`.
    pub fn mismatch_full(&self, crystal: &CrystalSpec, mode: SpectralMode) -> Result<f64> {
        let kz_p = self.signal.kz(mode.q, mode.omega)?;
        let kz_m = self.signal.kz(mode.q, -mode.omega)?;
        let k0 = self.signal.pump_wavenumber(crystal.pump_mode)?;
        Ok(crystal.length * (kz_p + kz_m - k0) + crystal.mismatch_offset)
    }

    /// Quadratic expansion `-q^2 l/k1 + k1'' l omega^2 + offset` with
    /// k1 = k1(0) and k1'' the carrier GVD (override-aware).
    pub fn mismatch_quadratic(&self, crystal: &CrystalSpec, mode: SpectralMode) -> Result<f64> {
        let k1 = self.signal.wavenumber(0.0)?;
        let gvd = self.signal.gvd()?;
        Ok(crystal.length * (-mode.q * mode.q / k1 + gvd * mode.omega * mode.omega)
            + crystal.mismatch_offset)
    }

    /// Low-gain pair-generation amplitude `g sinc(d/2) exp(i d/2)`.
    pub fn pair_amplitude(&self, mode: SpectralMode) -> Result<Complex64> {
        let d = self.mismatch(&self.pdc, mode)?;
        Ok(self.pdc.gain * sinc(d / 2.0) * Complex64::from_polar(1.0, d / 2.0))
    }

    /// Pair up-conversion amplitude of the second crystal at `mode`,
    /// under the configured sinc-argument and phase conventions.
    pub fn upconversion_amplitude(&self, mode: SpectralMode) -> Result<Complex64> {
        let d = self.mismatch(&self.sfg, mode)?;
        let s = match self.convention.sinc_argument {
            SincArgument::Full => sinc(d),
            SincArgument::Half => sinc(d / 2.0),
        };
        let phase = match self.convention.phase {
            SfgPhase::Conjugate => -d / 2.0,
            SfgPhase::Printed => d / 2.0,
        };
        Ok(self.sfg.gain * s * Complex64::from_polar(1.0, phase))
    }

    /// For each frequency offset, the q >= 0 root of the full PDC
    /// mismatch, when one exists.
    ///
    /// The mismatch is strictly decreasing in q, so a sign change between
    /// q = 0 and the propagation limit brackets a unique root; bisection
    /// refines it until |delta| < 1e-9. No root (detuned crystal) is a
    /// valid empty outcome.
    pub fn phase_matching_locus(&self, omegas: &[f64]) -> Result<Vec<(f64, Option<f64>)>> {
        let mut out = Vec::with_capacity(omegas.len());
        for &om in omegas {
            let k_p = self.signal.wavenumber(om)?;
            let k_m = self.signal.wavenumber(-om)?;
            let q_hi = k_p.min(k_m) * (1.0 - 1e-12);
            let f = |q: f64| self.mismatch_full(&self.pdc, SpectralMode::new(q, om));
            let d0 = f(0.0)?;
            if d0 < 0.0 {
                out.push((om, None));
                continue;
            }
            if d0 == 0.0 {
                out.push((om, Some(0.0)));
                continue;
            }
            let d_hi = f(q_hi)?;
            if d_hi > 0.0 {
                out.push((om, None));
                continue;
            }
            let (mut lo, mut hi) = (0.0_f64, q_hi);
            let mut mid = 0.5 * (lo + hi);
            for _ in 0..200 {
                mid = 0.5 * (lo + hi);
                let dm = f(mid)?;
                if dm.abs() < 1e-10 {
                    break;
                }
                if dm > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push((om, Some(mid)));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{DispersionModel, FieldParams};
    use approx::assert_relative_eq;

    fn setup() -> Setup {
        Setup {
            signal: SignalDispersion::new(
                DispersionModel::bbo_kato_1986(),
                FieldParams::degenerate(527.5e-9),
            ),
            pdc: CrystalSpec::tuned(4e-3, 0.01),
            sfg: CrystalSpec::tuned(4e-3, 1.0),
            convention: SfgConvention::default(),
        }
    }

    #[test]
    fn collinear_degenerate_matching() {
        let s = setup();
        let d = s.mismatch(&s.pdc, SpectralMode::new(0.0, 0.0)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn mismatch_even_in_omega() {
        let s = setup();
        for &(q, om) in &[(1e4, 1e13), (2e5, 3e14), (3e5, 4.4e14), (0.0, 2.2e14)] {
            let a = s.mismatch(&s.pdc, SpectralMode::new(q, om)).unwrap();
            let b = s.mismatch(&s.pdc, SpectralMode::new(q, -om)).unwrap();
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn quadratic_form_cases() {
        let s = setup();
        let k1 = s.signal.wavenumber(0.0).unwrap();
        let gvd = s.signal.gvd().unwrap();
        // on the hyperbola the quadratic mismatch vanishes
        let om = 2e14;
        let q = (k1 * gvd).sqrt() * om;
        let d = s.mismatch_quadratic(&s.pdc, SpectralMode::new(q, om)).unwrap();
        assert!(d.abs() < 1e-9, "got {d:.3e}");
        // on axis only the temporal term remains
        let d_axis = s.mismatch_quadratic(&s.pdc, SpectralMode::new(0.0, om)).unwrap();
        assert_relative_eq!(d_axis, gvd * 4e-3 * om * om, max_relative = 1e-12);
    }

    #[test]
    fn quadratic_matches_full_near_degeneracy() {
        // within |omega| < 0.1 omega1, around the matching locus, the
        // expansion tracks the exact mismatch to a few percent
        let s = setup();
        let k1 = s.signal.wavenumber(0.0).unwrap();
        let gvd = s.signal.gvd().unwrap();
        let om1 = s.signal.field.central_frequency;
        let mut worst: f64 = 0.0;
        for i in 1..=25 {
            let om = 0.1 * om1 * i as f64 / 25.0;
            let q_pm = (k1 * gvd).sqrt() * om;
            for fac in [0.5, 0.8, 1.2, 1.5] {
                let m = SpectralMode::new(q_pm * fac, om);
                let df = s.mismatch_full(&s.pdc, m).unwrap();
                let dq = s.mismatch_quadratic(&s.pdc, m).unwrap();
                worst = worst.max(((df - dq) / df).abs());
            }
        }
        assert!(worst < 0.05, "worst relative deviation {worst:.4}");
        // independently computed: 0.0406
        assert_relative_eq!(worst, 0.04055011491288793, max_relative = 1e-3);
    }

    #[test]
    fn expansion_is_second_order_along_rays() {
        let s = setup();
        let mut prev = f64::INFINITY;
        for scale in [1.0, 0.5, 0.25] {
            let m = SpectralMode::new(1e5 * scale, 2e14 * scale);
            let df = s.mismatch_full(&s.pdc, m).unwrap();
            let dq = s.mismatch_quadratic(&s.pdc, m).unwrap();
            let rel = ((df - dq) / df).abs();
            assert!(rel < prev / 3.0, "relative error not shrinking: {prev:.3e} -> {rel:.3e}");
            prev = rel;
        }
    }

    #[test]
    fn generation_amplitude_cases() {
        let s = setup();
        // matched mode: real, maximal, equals g
        let a = s.pair_amplitude(SpectralMode::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(a.re, 0.01, max_relative = 1e-14);
        assert_eq!(a.im, 0.0);
        // sinc zero at delta = 2 pi: find a mode on the axis with that mismatch
        let gvd = s.signal.gvd().unwrap();
        let om = (2.0 * std::f64::consts::PI / (gvd * 4e-3)).sqrt();
        let mut s2 = s.clone();
        s2.pdc.mismatch_model = MismatchModel::Quadratic;
        let a = s2.pair_amplitude(SpectralMode::new(0.0, om)).unwrap();
        assert!(a.norm() < 1e-12 * 0.01);
    }

    #[test]
    fn amplitudes_even_in_omega_and_bounded() {
        let s = setup();
        for &(q, om) in &[(1e4, 1e13), (2e5, 3e14), (3.5e5, 4.4e14)] {
            let m = SpectralMode::new(q, om);
            let a = s.pair_amplitude(m).unwrap();
            let b = s.pair_amplitude(m.conjugate()).unwrap();
            assert_eq!(a, b);
            assert!(a.norm() <= s.pdc.gain * (1.0 + 1e-12));
            let u = s.upconversion_amplitude(m).unwrap();
            let v = s.upconversion_amplitude(m.conjugate()).unwrap();
            assert_eq!(u, v);
            assert!(u.norm() <= s.sfg.gain * (1.0 + 1e-12));
        }
    }

    #[test]
    fn upconversion_phase_conventions() {
        // identical crystals, same mode: conjugate convention flips the
        // argument, printed convention reproduces it
        let mut s = setup();
        s.convention.sinc_argument = SincArgument::Half;
        let m = SpectralMode::new(1.5e5, 2.5e14);
        let gen = s.pair_amplitude(m).unwrap();
        let up = s.upconversion_amplitude(m).unwrap();
        assert_relative_eq!(up.arg(), -gen.arg(), max_relative = 1e-12);

        s.convention.phase = SfgPhase::Printed;
        let up = s.upconversion_amplitude(m).unwrap();
        assert_relative_eq!(up.arg(), gen.arg(), max_relative = 1e-12);
    }

    #[test]
    fn upconversion_at_matching_is_the_prefactor() {
        let s = setup();
        let u = s.upconversion_amplitude(SpectralMode::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(u.re, 1.0, max_relative = 1e-14);
        assert_eq!(u.im, 0.0);
    }

    #[test]
    fn locus_goldens() {
        // independently computed roots of the full mismatch (Kato set)
        let s = setup();
        let loc = s.phase_matching_locus(&[1e14, 2e14, 4e14]).unwrap();
        let expected = [64900.76296870012, 128946.34375477984, 250921.93687910459];
        for ((_, q), want) in loc.iter().zip(expected) {
            let q = q.expect("root must exist");
            assert_relative_eq!(q, want, max_relative = 1e-6);
        }
    }

    #[test]
    fn locus_properties() {
        let s = setup();
        // tuned, degenerate: the locus passes through the origin
        let loc = s.phase_matching_locus(&[0.0]).unwrap();
        assert!(loc[0].1.unwrap().abs() < 1.0);
        // even in omega
        let loc = s.phase_matching_locus(&[1.7e14, -1.7e14]).unwrap();
        assert_relative_eq!(loc[0].1.unwrap(), loc[1].1.unwrap(), max_relative = 1e-9);
        // small-omega slope approaches sqrt(k1 k1'')
        let k1 = s.signal.wavenumber(0.0).unwrap();
        let gvd = s.signal.gvd().unwrap();
        let loc = s.phase_matching_locus(&[1e13]).unwrap();
        let q = loc[0].1.unwrap();
        assert_relative_eq!(q, (k1 * gvd).sqrt() * 1e13, max_relative = 1e-2);
        // residual below 1e-9 at every returned point
        for &(om, q) in &s.phase_matching_locus(&[5e13, 1.5e14, 3e14, 4.4e14]).unwrap() {
            let q = q.unwrap();
            let d = s.mismatch_full(&s.pdc, SpectralMode::new(q, om)).unwrap();
            assert!(d.abs() < 1e-9, "residual {d:.3e} at omega {om:.3e}");
        }
    }

    #[test]
    fn detuned_crystal_can_have_no_root() {
        let mut s = setup();
        s.pdc.mismatch_offset = -50.0;
        // strong negative offset pushes delta(0, small omega) below zero
        let loc = s.phase_matching_locus(&[1e12]).unwrap();
        assert!(loc[0].1.is_none());
    }

    #[test]
    fn printed_phase_product_is_not_real() {
        // under the printed convention the generation/up-conversion product
        // keeps the full exp(i delta) phase; under the default it is real
        let s = setup();
        let m = SpectralMode::new(2e5, 3e14);
        let prod = s.pair_amplitude(m).unwrap() * s.upconversion_amplitude(m).unwrap();
        assert!(prod.im.abs() < 1e-15 * prod.norm());
        let mut sp = s.clone();
        sp.convention.phase = SfgPhase::Printed;
        let prod = sp.pair_amplitude(m).unwrap() * sp.upconversion_amplitude(m).unwrap();
        assert!(prod.im.abs() > 0.0);
    }
}
