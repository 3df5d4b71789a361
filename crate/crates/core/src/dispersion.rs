//! Refractive index, wave numbers and group-velocity dispersion for the
//! signal and pump fields in a uniaxial crystal.
//!
//! The index model is the common one-pole Sellmeier form
//!
//! ```text
//! n^2(lambda) = A + B / (lambda_um^2 - C) - D * lambda_um^2
//! ```
//!
//! with lambda in micrometres. Shipped coefficient sets for beta barium
//! borate (BBO):
//!
//! - Kato, IEEE J. Quantum Electron. 22, 1013 (1986) — default
//! - Eimerl et al., J. Appl. Phys. 62, 1968 (1987)
//!
//! Both fits are nominally specified to ~1.06 um; the default validity
//! range here extends to 2.3 um because the simulated twin-beam bandwidth
//! reaches ~1.4 um. The extrapolation is smooth and keeps n > 1 (BBO is
//! transparent to ~3.3 um), and it is an explicit configuration choice:
//! evaluation outside the configured range is an error, never silent.
//!
//! Polarization convention: type-I down-conversion in a negative uniaxial
//! crystal, i.e. ordinary signal/idler and extraordinary pump (ooe). All
//! signal-field quantities below use the ordinary sheet.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

pub const C: f64 = SPEED_OF_LIGHT;
const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Ordinary,
    Extraordinary,
}

/// One-pole Sellmeier coefficient set, `n^2 = a + b/(l^2 - c) - d l^2`
/// with `l` in micrometres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sellmeier {
    fn n_sq(&self, lam_um: f64) -> f64 {
        self.a + self.b / (lam_um * lam_um - self.c) - self.d * lam_um * lam_um
    }

    fn index(&self, lam_um: f64) -> f64 {
        self.n_sq(lam_um).sqrt()
    }

    /// d(n^2)/dl and d2(n^2)/dl2, l in micrometres.
    fn n_sq_derivs(&self, l: f64) -> (f64, f64) {
        let den = l * l - self.c;
        let fp = -2.0 * self.b * l / (den * den) - 2.0 * self.d * l;
        let fpp = 2.0 * self.b * (3.0 * l * l + self.c) / (den * den * den) - 2.0 * self.d;
        (fp, fpp)
    }

    /// Second wavelength derivative of n itself (per um^2).
    fn index_second_deriv(&self, l: f64) -> f64 {
        let n = self.index(l);
        let (fp, fpp) = self.n_sq_derivs(l);
        let np = fp / (2.0 * n);
        (fpp - 2.0 * np * np) / (2.0 * n)
    }
}

/// Dispersion model: both polarization sheets, validity range, optional
/// prescribed group-velocity dispersion.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionModel {
    pub ordinary: Sellmeier,
    pub extraordinary: Sellmeier,
    /// validity range in metres; evaluation outside is an error
    pub valid_wavelength_range: (f64, f64),
    /// when set, `SignalDispersion::gvd` returns this value (s^2/m)
    /// instead of the Sellmeier-derived one
    pub gvd_override: Option<f64>,
}

impl DispersionModel {
    /// BBO, Kato (1986). Shipped default.
    pub fn bbo_kato_1986() -> Self {
        DispersionModel {
            ordinary: Sellmeier { a: 2.7359, b: 0.01878, c: 0.01822, d: 0.01354 },
            extraordinary: Sellmeier { a: 2.3753, b: 0.01224, c: 0.01667, d: 0.01516 },
            valid_wavelength_range: (220e-9, 2300e-9),
            gvd_override: None,
        }
    }

    /// BBO, Eimerl et al. (1987).
    pub fn bbo_eimerl_1987() -> Self {
        DispersionModel {
            ordinary: Sellmeier { a: 2.7405, b: 0.0184, c: 0.0179, d: 0.0155 },
            extraordinary: Sellmeier { a: 2.3730, b: 0.0128, c: 0.0156, d: 0.0044 },
            valid_wavelength_range: (220e-9, 2300e-9),
            gvd_override: None,
        }
    }

    fn check_range(&self, lambda: f64) -> Result<()> {
        let (lo, hi) = self.valid_wavelength_range;
        if lambda < lo {
            return Err(Error::WavelengthOutOfRange {
                got_nm: lambda * 1e9,
                min_nm: lo * 1e9,
                max_nm: hi * 1e9,
                bound: "lower",
            });
        }
        if lambda > hi {
            return Err(Error::WavelengthOutOfRange {
                got_nm: lambda * 1e9,
                min_nm: lo * 1e9,
                max_nm: hi * 1e9,
                bound: "upper",
            });
        }
        Ok(())
    }

    /// Refractive index at vacuum wavelength `lambda` (metres).
    pub fn refractive_index(&self, lambda: f64, pol: Polarization) -> Result<f64> {
        self.check_range(lambda)?;
        let l = lambda * 1e6;
        Ok(match pol {
            Polarization::Ordinary => self.ordinary.index(l),
            Polarization::Extraordinary => self.extraordinary.index(l),
        })
    }

    /// Extraordinary-sheet index at propagation angle `theta` from the
    /// optic axis, from the uniaxial index ellipse
    /// `1/n^2 = cos^2/n_o^2 + sin^2/n_e^2`.
    pub fn index_at_angle(&self, lambda: f64, theta: f64) -> Result<f64> {
        let n_o = self.refractive_index(lambda, Polarization::Ordinary)?;
        let n_e = self.refractive_index(lambda, Polarization::Extraordinary)?;
        let (s, c) = theta.sin_cos();
        Ok(1.0 / (c * c / (n_o * n_o) + s * s / (n_e * n_e)).sqrt())
    }
}

/// Central frequencies of the degenerate configuration.
///
/// The pump at `pump_wavelength` defines `pump_frequency`, and the signal
/// carrier is exactly half of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    /// pump vacuum wavelength (m)
    pub pump_wavelength: f64,
    /// pump angular frequency omega0 (rad/s)
    pub pump_frequency: f64,
    /// signal carrier omega1 = omega0/2 (rad/s)
    pub central_frequency: f64,
}

impl FieldParams {
    pub fn degenerate(pump_wavelength: f64) -> Self {
        let pump_frequency = TAU * C / pump_wavelength;
        FieldParams {
            pump_wavelength,
            pump_frequency,
            central_frequency: pump_frequency / 2.0,
        }
    }
}

/// How the pump wave number is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpMode {
    /// crystal assumed rotated to exact collinear degenerate matching:
    /// k0 = 2 k1(0) by construction
    Tuned,
    /// extraordinary pump at a given angle from the optic axis
    Angle(f64),
}

/// Signal-field dispersion bundle: model + carrier frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalDispersion {
    pub model: DispersionModel,
    pub field: FieldParams,
}

impl SignalDispersion {
    pub fn new(model: DispersionModel, field: FieldParams) -> Self {
        SignalDispersion { model, field }
    }

    /// Signal wave number k1 at frequency offset `omega` from the carrier.
    pub fn wavenumber(&self, omega: f64) -> Result<f64> {
        let w = self.field.central_frequency + omega;
        if w <= 0.0 {
            return Err(Error::Invalid(format!(
                "frequency offset {omega:.3e} rad/s puts the signal at a nonpositive frequency"
            )));
        }
        let lambda = TAU * C / w;
        let n = self.model.refractive_index(lambda, Polarization::Ordinary)?;
        Ok(n * w / C)
    }

    /// Longitudinal component sqrt(k1^2 - q^2) of the signal wave vector.
    pub fn kz(&self, q: f64, omega: f64) -> Result<f64> {
        debug_assert!(q >= 0.0);
        let k = self.wavenumber(omega)?;
        if q > k {
            return Err(Error::EvanescentMode { q, k });
        }
        Ok((k * k - q * q).sqrt())
    }

    /// Group-velocity dispersion d2k/dw2 at the carrier (s^2/m).
    /// Honors a configured override; otherwise Sellmeier-derived.
    pub fn gvd(&self) -> Result<f64> {
        match self.model.gvd_override {
            Some(v) => Ok(v),
            None => self.gvd_computed(),
        }
    }

    /// Sellmeier-derived GVD, always ignoring the override.
    ///
    /// Uses the closed form d2k/dw2 = lambda^3 n''(lambda) / (2 pi c^2).
    pub fn gvd_computed(&self) -> Result<f64> {
        let lambda = TAU * C / self.field.central_frequency;
        self.model.check_range(lambda)?;
        let l_um = lambda * 1e6;
        let npp_um = self.model.ordinary.index_second_deriv(l_um);
        let npp = npp_um * 1e12; // per m^2
        Ok(lambda.powi(3) * npp / (TAU * C * C))
    }

    /// Five-point central second difference of `wavenumber` at the carrier.
    /// Test oracle for the analytic GVD; `h` is the frequency step (rad/s).
    pub fn gvd_finite_difference(&self, h: f64) -> Result<f64> {
        let f = |o: f64| self.wavenumber(o);
        Ok(
            (-f(-2.0 * h)? + 16.0 * f(-h)? - 30.0 * f(0.0)? + 16.0 * f(h)? - f(2.0 * h)?)
                / (12.0 * h * h),
        )
    }

    /// Pump wave number for either tuning convention.
    pub fn pump_wavenumber(&self, mode: PumpMode) -> Result<f64> {
        match mode {
            PumpMode::Tuned => Ok(2.0 * self.wavenumber(0.0)?),
            PumpMode::Angle(theta) => {
                let n = self.model.index_at_angle(self.field.pump_wavelength, theta)?;
                Ok(n * self.field.pump_frequency / C)
            }
        }
    }
}
