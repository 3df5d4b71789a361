//! Optical transfer between the two crystals.
//!
//! The correlator only ever needs the two-arm product H+(w) H-(-w). For
//! the elements modeled here (relative delay on one mirror arm, spectral
//! window, pinhole, mirror gap, imaging defocus) that product depends on
//! (|q|, omega) only:
//!
//! ```text
//! H+ H- = t * exp(-i omega dt)
//!           * window(omega)
//!           * [q <= k1(omega) sin(a)] * [q >= q_gap]
//!           * exp(-i q^2 c / (omega1 (1 - omega^2/omega1^2)) * dz)
//! ```
//!
//! The evaluation is split into an omega-only factor and a q-dependent
//! factor. The split is what lets the engine hoist delay and window out of
//! the transverse integral, and it makes the ideal-path evaluation (delay
//! phase applied after the q sum) agree bit for bit with the general path.
//!
//! With the defocus written as a chirp (`defocus_as_chirp`), the q^2 phase
//! is replaced by its on-locus substitution q^2 -> omega^2 k1 k1'' and
//! moves into the omega factor:
//! `exp(-i omega^2 k1'' n1 / (1 - omega^2/omega1^2) * dz)`.

use crate::dispersion::C;
use crate::error::{Error, Result};
use crate::phasematch::{Setup, SpectralMode};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowEdge {
    Hard,
    /// raised-cosine taper of the given width (rad/s) inside the nominal edge
    Smooth { width: f64 },
}

/// Box spectral window of the given full width, centered at degeneracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    pub full_width: f64,
    pub edge: WindowEdge,
}

impl SpectralWindow {
    pub fn hard(full_width: f64) -> Self {
        SpectralWindow { full_width, edge: WindowEdge::Hard }
    }

    fn transmission(&self, omega: f64) -> f64 {
        let h = self.full_width / 2.0;
        let a = omega.abs();
        match self.edge {
            WindowEdge::Hard => {
                if a <= h {
                    1.0
                } else {
                    0.0
                }
            }
            WindowEdge::Smooth { width } => {
                if a <= h - width {
                    1.0
                } else if a >= h {
                    0.0
                } else {
                    let x = (a - (h - width)) / width;
                    (std::f64::consts::FRAC_PI_2 * x).cos().powi(2)
                }
            }
        }
    }
}

/// The full optical path between the crystals.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSpec {
    /// relative delay applied to the second mirror arm (s)
    pub delay: f64,
    /// displacement of the second crystal from the image plane (m)
    pub defocus: f64,
    /// apply the defocus as the on-locus omega^2 chirp instead of the
    /// literal q^2 phase
    pub defocus_as_chirp: bool,
    pub window: Option<SpectralWindow>,
    /// pinhole half-angle (rad); transmits q <= k1(omega) sin(angle)
    pub pinhole_half_angle: Option<f64>,
    /// far-field gap cutoff; removes q below this (rad/m), 0 disables
    pub gap_q_min: f64,
    /// scalar amplitude transmission in [0, 1]
    pub transmission: f64,
}

impl Default for TransferSpec {
    /// The identity path: no delay, no filtering, unit transmission.
    fn default() -> Self {
        TransferSpec {
            delay: 0.0,
            defocus: 0.0,
            defocus_as_chirp: false,
            window: None,
            pinhole_half_angle: None,
            gap_q_min: 0.0,
            transmission: 1.0,
        }
    }
}

impl TransferSpec {
    pub fn with_delay(&self, delay: f64) -> Self {
        let mut t = self.clone();
        t.delay = delay;
        t
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.transmission) {
            return Err(Error::BadTransmission(self.transmission));
        }
        if let Some(w) = &self.window {
            if !(w.full_width > 0.0) {
                return Err(Error::Invalid(format!(
                    "spectral window width must be positive, got {:.3e}",
                    w.full_width
                )));
            }
        }
        if let Some(a) = self.pinhole_half_angle {
            if !(a > 0.0 && a < std::f64::consts::FRAC_PI_2) {
                return Err(Error::PinholeAngle { angle: a });
            }
        }
        if self.gap_q_min < 0.0 {
            return Err(Error::Invalid(format!(
                "gap cutoff must be >= 0, got {:.3e}",
                self.gap_q_min
            )));
        }
        Ok(())
    }

    /// True when the q-dependent factor is identically 1 and the
    /// transverse sum can be reused across delays.
    pub fn q_factor_is_identity(&self) -> bool {
        self.pinhole_half_angle.is_none()
            && self.gap_q_min == 0.0
            && (self.defocus == 0.0 || self.defocus_as_chirp)
    }
}

/// Pinhole half-angle subtended by a circular aperture of `diameter` at
/// `distance` from the source plane.
pub fn pinhole_half_angle_from_geometry(diameter: f64, distance: f64) -> Result<f64> {
    if !(diameter > 0.0) || !(distance > 0.0) {
        return Err(Error::PinholeGeometry { diameter, distance });
    }
    let a = (diameter / 2.0 / distance).atan();
    if a >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::PinholeAngle { angle: a });
    }
    Ok(a)
}

impl Setup {
    /// Omega-only part of the transfer product: delay phase, window,
    /// scalar transmission, and the chirp form of the defocus.
    pub fn transfer_omega_factor(&self, omega: f64, spec: &TransferSpec) -> Result<Complex64> {
        let om1 = self.signal.field.central_frequency;
        if omega.abs() >= om1 {
            return Err(Error::DefocusDomain { omega, omega1: om1 });
        }
        let mut f = Complex64::from_polar(spec.transmission, -omega * spec.delay);
        if let Some(w) = &spec.window {
            f *= w.transmission(omega);
        }
        if spec.defocus != 0.0 && spec.defocus_as_chirp {
            let gvd = self.signal.gvd()?;
            let n1 = self.signal.wavenumber(0.0)? * C / om1;
            let phase = -omega * omega * gvd * n1 / (1.0 - (omega / om1).powi(2)) * spec.defocus;
            f *= Complex64::from_polar(1.0, phase);
        }
        Ok(f)
    }

    /// q-dependent part: apertures and the literal defocus phase.
    pub fn transfer_q_factor(&self, q: f64, omega: f64, spec: &TransferSpec) -> Result<Complex64> {
        let mut f = Complex64::new(1.0, 0.0);
        if let Some(a) = spec.pinhole_half_angle {
            let k1 = self.signal.wavenumber(omega)?;
            if q > k1 * a.sin() {
                return Ok(Complex64::new(0.0, 0.0));
            }
        }
        if spec.gap_q_min > 0.0 && q < spec.gap_q_min {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if spec.defocus != 0.0 && !spec.defocus_as_chirp {
            let om1 = self.signal.field.central_frequency;
            let phase = -q * q * C / (om1 * (1.0 - (omega / om1).powi(2))) * spec.defocus;
            f = Complex64::from_polar(1.0, phase);
        }
        Ok(f)
    }

    /// Full two-arm transfer product at one spectral mode.
    pub fn transfer_product(&self, mode: SpectralMode, spec: &TransferSpec) -> Result<Complex64> {
        Ok(self.transfer_omega_factor(mode.omega, spec)?
            * self.transfer_q_factor(mode.q, mode.omega, spec)?)
    }

    /// Full width of the frequency band whose phase-matching locus the
    /// pinhole transmits: 2 omega_max with
    /// `k1 sin(a) = sqrt(k1 k1'') omega_max`, clipped by the spectral
    /// window when that is narrower.
    pub fn effective_bandwidth(&self, spec: &TransferSpec) -> Result<f64> {
        let a = spec.pinhole_half_angle.ok_or(Error::NoPinhole)?;
        let k1 = self.signal.wavenumber(0.0)?;
        let gvd = self.signal.gvd()?;
        let q_max = k1 * a.sin();
        let bw = 2.0 * q_max / (k1 * gvd).sqrt();
        Ok(match &spec.window {
            Some(w) if w.full_width < bw => w.full_width,
            _ => bw,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{DispersionModel, FieldParams, SignalDispersion};
    use crate::phasematch::{CrystalSpec, SfgConvention};
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
    fn identity_path() {
        let s = setup();
        let t = TransferSpec::default();
        for &(q, om) in &[(0.0, 0.0), (2e5, 3e14), (3e5, -4e14)] {
            let v = s.transfer_product(SpectralMode::new(q, om), &t).unwrap();
            assert_eq!(v, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn pure_delay() {
        let s = setup();
        let t = TransferSpec { delay: 7e-15, ..Default::default() };
        let om = 2.5e14;
        let v = s.transfer_product(SpectralMode::new(1e5, om), &t).unwrap();
        assert_relative_eq!(v.norm(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(v.arg(), -om * 7e-15, max_relative = 1e-12);
    }

    #[test]
    fn defocus_phase_and_chirp_substitution_agree_on_locus() {
        // on the quadratic locus q^2 = k1 k1'' omega^2 the literal phase
        // equals the chirp form identically
        let s = setup();
        let k1 = s.signal.wavenumber(0.0).unwrap();
        let gvd = s.signal.gvd().unwrap();
        let dz = 2e-4;
        let lit = TransferSpec { defocus: dz, ..Default::default() };
        let chp = TransferSpec { defocus: dz, defocus_as_chirp: true, ..Default::default() };
        for om in [5e13, 1.5e14, 3e14, 4.4e14] {
            let q = (k1 * gvd).sqrt() * om;
            let a = s.transfer_product(SpectralMode::new(q, om), &lit).unwrap();
            let b = s.transfer_product(SpectralMode::new(q, om), &chp).unwrap();
            assert_relative_eq!(a.arg(), b.arg(), max_relative = 1e-10);
            assert_relative_eq!(a.norm(), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn indicators_gate_phases_do_not() {
        let s = setup();
        let t = TransferSpec {
            delay: 3e-15,
            defocus: 1e-4,
            window: Some(SpectralWindow::hard(0.9e15)),
            pinhole_half_angle: Some(6.9e-3),
            gap_q_min: 1e4,
            transmission: 0.8,
            ..Default::default()
        };
        for &(q, om) in &[
            (5e3, 1e14),   // below the gap
            (2e4, 1e14),   // transmitted
            (9e4, 1e14),   // beyond the pinhole
            (2e4, 4.7e14), // outside the window
        ] {
            let v = s.transfer_product(SpectralMode::new(q, om), &t).unwrap();
            assert!(v.norm() <= 0.8 + 1e-12);
            assert!(v.norm() == 0.0 || (v.norm() - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn conjugate_delay_symmetry() {
        let s = setup();
        let base = TransferSpec {
            window: Some(SpectralWindow::hard(0.9e15)),
            pinhole_half_angle: Some(8e-3),
            transmission: 0.9,
            ..Default::default()
        };
        let m = SpectralMode::new(1.3e5, 2.1e14);
        let a = s.transfer_product(m, &base.with_delay(5e-15)).unwrap();
        let b = s.transfer_product(m, &base.with_delay(-5e-15)).unwrap();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-12);
    }

    #[test]
    fn domain_error_beyond_carrier() {
        let s = setup();
        let om1 = s.signal.field.central_frequency;
        let err = s
            .transfer_omega_factor(om1 * 1.01, &TransferSpec::default())
            .unwrap_err();
        assert!(matches!(err, Error::DefocusDomain { .. }));
    }

    #[test]
    fn pinhole_geometry() {
        // 4 mm aperture at 29 cm: half-angle 6.896 mrad, i.e. 0.79 deg full
        let a = pinhole_half_angle_from_geometry(4e-3, 0.29).unwrap();
        assert_relative_eq!(a, 6.896442388348462e-3, max_relative = 1e-12);
        assert_relative_eq!(2.0 * a.to_degrees(), 0.79, max_relative = 2e-3);
        // small-angle linearity
        let b = pinhole_half_angle_from_geometry(2e-3, 0.29).unwrap();
        assert_relative_eq!(b, a / 2.0, max_relative = 1e-4);
        // degenerate geometry rejected
        assert!(pinhole_half_angle_from_geometry(0.0, 0.29).is_err());
        assert!(pinhole_half_angle_from_geometry(4e-3, 0.0).is_err());
    }

    #[test]
    fn effective_bandwidth_golden() {
        let s = setup();
        let t = TransferSpec {
            pinhole_half_angle: Some(pinhole_half_angle_from_geometry(4e-3, 0.29).unwrap()),
            window: Some(SpectralWindow::hard(0.9e15)),
            ..Default::default()
        };
        let bw = s.effective_bandwidth(&t).unwrap();
        // independently computed for the Kato set; note this is well below
        // most of a widely quoted 0.34e15 figure, see the fig3 scenario
        assert_relative_eq!(bw, 2.089760815206382e14, max_relative = 1e-9);
    }

    #[test]
    fn effective_bandwidth_clipping_and_errors() {
        let s = setup();
        // very wide pinhole: the window limits the band
        let t = TransferSpec {
            pinhole_half_angle: Some(1.0),
            window: Some(SpectralWindow::hard(0.9e15)),
            ..Default::default()
        };
        assert_eq!(s.effective_bandwidth(&t).unwrap(), 0.9e15);
        // tiny pinhole: band closes
        let t = TransferSpec { pinhole_half_angle: Some(1e-9), ..Default::default() };
        assert!(s.effective_bandwidth(&t).unwrap() < 1e9);
        // no pinhole: precondition error
        assert!(matches!(
            s.effective_bandwidth(&TransferSpec::default()).unwrap_err(),
            Error::NoPinhole
        ));
    }

    #[test]
    fn effective_bandwidth_monotone_in_angle() {
        let s = setup();
        let mut prev = 0.0;
        for a in [1e-3, 3e-3, 6e-3, 1e-2, 3e-2] {
            let t = TransferSpec { pinhole_half_angle: Some(a), ..Default::default() };
            let bw = s.effective_bandwidth(&t).unwrap();
            assert!(bw >= prev);
            prev = bw;
        }
    }

    #[test]
    fn smooth_window_edges() {
        let w = SpectralWindow { full_width: 1e15, edge: WindowEdge::Smooth { width: 1e14 } };
        assert_eq!(w.transmission(0.0), 1.0);
        assert_eq!(w.transmission(3.9e14), 1.0);
        assert_eq!(w.transmission(5.1e14), 0.0);
        let mid = w.transmission(4.5e14);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn zero_transmission_darkens_everything() {
        let s = setup();
        let t = TransferSpec { transmission: 0.0, delay: 1e-15, ..Default::default() };
        let v = s.transfer_product(SpectralMode::new(1e5, 1e14), &t).unwrap();
        assert_eq!(v.norm(), 0.0);
    }
}
