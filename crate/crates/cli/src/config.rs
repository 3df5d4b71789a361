//! The run configuration: a flat, line-oriented key = value format with
//! `[section]` headers, hash comments, and mandatory unit suffixes on
//! every dimensioned value.
//!
//! Design rules:
//! - unknown keys and sections are errors (with a suggestion), not
//!   warnings, so configs cannot silently drift;
//! - a dimensioned value without a unit is rejected naming the field;
//! - `parse(echo(config))` is the identity on the resolved struct, and
//!   `echo` output is itself a valid config, so effective configurations
//!   can be re-run verbatim.

use std::collections::HashSet;
use std::f64::consts::PI;
use thiserror::Error;
use twinbeam_core::{
    AmplitudeModel, CrystalSpec, DispersionModel, ExperimentConfig, FieldParams, Grid,
    MismatchModel, PumpMode, Reduction, Sellmeier, Setup, SfgConvention, SfgPhase,
    SignalDispersion, SincArgument, SpectralWindow, TransferSpec, WindowEdge,
    pinhole_half_angle_from_geometry,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key `{key}` in [{section}]{}", suggestion_text(.suggestion))]
    UnknownKey { line: usize, key: String, section: String, suggestion: Option<String> },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: field `{field}` needs a unit ({expected}), got bare `{got}`")]
    MissingUnit { line: usize, field: String, expected: &'static str, got: String },
    #[error("line {line}: field `{field}`: unit `{unit}` not accepted (expected {expected})")]
    BadUnit { line: usize, field: String, unit: String, expected: &'static str },
    #[error("line {line}: field `{field}`: {msg}")]
    BadValue { line: usize, field: String, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] twinbeam_core::Error),
}

fn suggestion_text(s: &Option<String>) -> String {
    match s {
        Some(t) => format!("; did you mean {t}?"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Fig2,
    Fig3,
    Fig4,
    Sweep,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig2 => "fig2",
            Scenario::Fig3 => "fig3",
            Scenario::Fig4 => "fig4",
            Scenario::Sweep => "sweep",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "fig2" => Some(Scenario::Fig2),
            "fig3" => Some(Scenario::Fig3),
            "fig4" => Some(Scenario::Fig4),
            "sweep" => Some(Scenario::Sweep),
            _ => None,
        }
    }
}

/// Per-crystal configuration block.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalConfig {
    pub length: f64,
    pub gain: f64,
    pub pump_mode_angle: Option<f64>, // None = tuned
    pub mismatch_offset: f64,
    pub mismatch_model: MismatchModel,
}

/// Fully resolved run configuration (SI units throughout).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub out_dir: String,

    pub sellmeier_ordinary: [f64; 4],
    pub sellmeier_extraordinary: [f64; 4],
    pub wavelength_min: f64,
    pub wavelength_max: f64,
    pub pump_wavelength: f64,
    pub gvd_override: Option<f64>,

    pub pdc: CrystalConfig,
    pub sfg: CrystalConfig,
    pub sinc_argument: SincArgument,
    pub phase_convention: SfgPhase,

    pub delay_start: f64,
    pub delay_stop: f64,
    pub delay_step: f64,
    pub window: Option<f64>,
    pub window_edge_width: Option<f64>, // smooth edge when present
    pub pinhole_half_angle: Option<f64>,
    pub gap_q_min: f64,
    pub defocus: f64,
    pub defocus_list: Vec<f64>,
    pub defocus_as_chirp: bool,
    pub transmission: f64,

    pub q_max: f64,
    pub n_q: usize,
    pub n_omega: usize,
    pub omega_max: Option<f64>, // None = derive from the window
    pub reduction: Reduction,

    pub baseline: f64,
    pub amplitude_model: AmplitudeModel,
}

impl Default for RunConfig {
    fn default() -> Self {
        let kato = DispersionModel::bbo_kato_1986();
        RunConfig {
            scenario: Scenario::Fig2,
            out_dir: "out".to_string(),
            sellmeier_ordinary: [
                kato.ordinary.a,
                kato.ordinary.b,
                kato.ordinary.c,
                kato.ordinary.d,
            ],
            sellmeier_extraordinary: [
                kato.extraordinary.a,
                kato.extraordinary.b,
                kato.extraordinary.c,
                kato.extraordinary.d,
            ],
            wavelength_min: kato.valid_wavelength_range.0,
            wavelength_max: kato.valid_wavelength_range.1,
            pump_wavelength: 527.5e-9,
            gvd_override: None,
            pdc: CrystalConfig {
                length: 4e-3,
                gain: 0.01,
                pump_mode_angle: None,
                mismatch_offset: 0.0,
                mismatch_model: MismatchModel::Full,
            },
            sfg: CrystalConfig {
                length: 4e-3,
                gain: 1.0,
                pump_mode_angle: None,
                mismatch_offset: 0.0,
                mismatch_model: MismatchModel::Full,
            },
            sinc_argument: SincArgument::Full,
            phase_convention: SfgPhase::Conjugate,
            delay_start: -60e-15,
            delay_stop: 60e-15,
            delay_step: 0.5e-15,
            window: Some(0.9e15),
            window_edge_width: None,
            pinhole_half_angle: None,
            gap_q_min: 0.0,
            defocus: 0.0,
            defocus_list: vec![0.0, 100e-6, 200e-6, 400e-6],
            defocus_as_chirp: false,
            transmission: 1.0,
            q_max: 4e5,
            n_q: 512,
            n_omega: 1024,
            omega_max: None,
            reduction: Reduction::Radial,
            baseline: 0.0,
            amplitude_model: AmplitudeModel::Physical,
        }
    }
}

// ---------------------------------------------------------------- units

type UnitTable = &'static [(&'static str, f64)];

const LENGTH: UnitTable = &[
    ("m", 1.0),
    ("cm", 1e-2),
    ("mm", 1e-3),
    ("um", 1e-6),
    ("nm", 1e-9),
];
const TIME: UnitTable = &[("s", 1.0), ("ps", 1e-12), ("fs", 1e-15)];
const ANG_FREQ: UnitTable = &[("rad/s", 1.0)];
const WAVENUMBER: UnitTable = &[("rad/m", 1.0), ("1/m", 1.0)];
const ANGLE: UnitTable = &[("rad", 1.0), ("mrad", 1e-3), ("deg", PI / 180.0)];
const GVD: UnitTable = &[("s^2/m", 1.0), ("fs^2/mm", 1e-27)];

struct Ctx<'a> {
    line: usize,
    field: &'a str,
}

fn parse_number(ctx: &Ctx, s: &str) -> Result<f64, ConfigError> {
    s.parse::<f64>().map_err(|_| ConfigError::BadValue {
        line: ctx.line,
        field: ctx.field.to_string(),
        msg: format!("`{s}` is not a number"),
    })
}

/// "VALUE UNIT" with a mandatory unit from the table.
fn parse_dimensioned(
    ctx: &Ctx,
    value: &str,
    table: UnitTable,
    expected: &'static str,
) -> Result<f64, ConfigError> {
    let mut parts = value.split_whitespace();
    let num = parts.next().ok_or_else(|| ConfigError::BadValue {
        line: ctx.line,
        field: ctx.field.to_string(),
        msg: "empty value".to_string(),
    })?;
    let x = parse_number(ctx, num)?;
    let unit = parts.collect::<Vec<_>>().join(" ");
    if unit.is_empty() {
        return Err(ConfigError::MissingUnit {
            line: ctx.line,
            field: ctx.field.to_string(),
            expected,
            got: value.to_string(),
        });
    }
    match table.iter().find(|(n, _)| *n == unit) {
        Some((_, f)) => Ok(x * f),
        None => Err(ConfigError::BadUnit {
            line: ctx.line,
            field: ctx.field.to_string(),
            unit,
            expected,
        }),
    }
}

/// A bare number; any trailing token is an error.
fn parse_plain(ctx: &Ctx, value: &str) -> Result<f64, ConfigError> {
    let mut parts = value.split_whitespace();
    let num = parts.next().unwrap_or("");
    let x = parse_number(ctx, num)?;
    if parts.next().is_some() {
        return Err(ConfigError::BadValue {
            line: ctx.line,
            field: ctx.field.to_string(),
            msg: format!("`{value}` must be a bare number (dimensionless field)"),
        });
    }
    Ok(x)
}

fn parse_count(ctx: &Ctx, value: &str) -> Result<usize, ConfigError> {
    value.trim().parse::<usize>().map_err(|_| ConfigError::BadValue {
        line: ctx.line,
        field: ctx.field.to_string(),
        msg: format!("`{value}` is not a nonnegative integer"),
    })
}

fn parse_bool(ctx: &Ctx, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(ConfigError::BadValue {
            line: ctx.line,
            field: ctx.field.to_string(),
            msg: format!("`{other}` is not a boolean (true/false)"),
        }),
    }
}

// -------------------------------------------------------------- parsing

const KNOWN: &[(&str, &[&str])] = &[
    ("run", &["scenario", "out_dir"]),
    (
        "dispersion",
        &[
            "sellmeier_ordinary",
            "sellmeier_extraordinary",
            "wavelength_min",
            "wavelength_max",
            "pump_wavelength",
            "gvd_override",
        ],
    ),
    (
        "crystal.pdc",
        &["length", "gain", "pump_mode", "pump_angle", "mismatch_offset", "mismatch_model"],
    ),
    (
        "crystal.sfg",
        &[
            "length",
            "gain",
            "pump_mode",
            "pump_angle",
            "mismatch_offset",
            "mismatch_model",
            "sinc_argument",
            "phase_convention",
        ],
    ),
    (
        "transfer",
        &[
            "delay_start",
            "delay_stop",
            "delay_step",
            "window",
            "window_edge_width",
            "pinhole_half_angle",
            "pinhole_diameter",
            "pinhole_distance",
            "gap_q_min",
            "defocus",
            "defocus_list",
            "defocus_as_chirp",
            "transmission",
        ],
    ),
    ("grid", &["q_max", "n_q", "n_omega", "omega_max", "reduction"]),
    ("output", &["baseline", "amplitude_model"]),
];

fn suggest(section: &str, key: &str) -> Option<String> {
    let keys = KNOWN.iter().find(|(s, _)| *s == section)?.1;
    let stem = key.split('_').next().unwrap_or(key);
    let near: Vec<&str> = keys
        .iter()
        .copied()
        .filter(|k| k.starts_with(stem) || k.split('_').next() == Some(stem))
        .collect();
    if near.is_empty() {
        None
    } else {
        Some(near.join(", "))
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section = String::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut pinhole_diameter: Option<f64> = None;
    let mut pinhole_distance: Option<f64> = None;
    let mut pump_mode_pdc: Option<String> = None;
    let mut pump_angle_pdc: Option<f64> = None;
    let mut pump_mode_sfg: Option<String> = None;
    let mut pump_angle_sfg: Option<f64> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stripped = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if stripped.is_empty() {
            continue;
        }
        if let Some(name) = stripped.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: "section header missing closing `]`".to_string(),
            })?;
            if !KNOWN.iter().any(|(s, _)| *s == name) {
                return Err(ConfigError::UnknownSection { line, name: name.to_string() });
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = stripped.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected `key = value`, got `{stripped}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if section.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                msg: format!("key `{key}` appears before any [section] header"),
            });
        }
        let known_keys = KNOWN.iter().find(|(s, _)| *s == section).unwrap().1;
        if !known_keys.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
                section: section.clone(),
                suggestion: suggest(&section, key),
            });
        }
        let full = format!("{section}.{key}");
        if !seen.insert(full.clone()) {
            return Err(ConfigError::DuplicateKey { line, key: full });
        }

        let ctx = Ctx { line, field: key };
        match (section.as_str(), key) {
            ("run", "scenario") => {
                cfg.scenario = Scenario::from_name(value).ok_or_else(|| ConfigError::BadValue {
                    line,
                    field: key.into(),
                    msg: format!("`{value}` is not one of fig2, fig3, fig4, sweep"),
                })?;
            }
            ("run", "out_dir") => cfg.out_dir = value.to_string(),

            ("dispersion", "sellmeier_ordinary") => {
                cfg.sellmeier_ordinary = parse_coeffs(&ctx, value)?;
            }
            ("dispersion", "sellmeier_extraordinary") => {
                cfg.sellmeier_extraordinary = parse_coeffs(&ctx, value)?;
            }
            ("dispersion", "wavelength_min") => {
                cfg.wavelength_min = parse_dimensioned(&ctx, value, LENGTH, "a length unit: m, cm, mm, um, nm")?;
            }
            ("dispersion", "wavelength_max") => {
                cfg.wavelength_max = parse_dimensioned(&ctx, value, LENGTH, "a length unit: m, cm, mm, um, nm")?;
            }
            ("dispersion", "pump_wavelength") => {
                cfg.pump_wavelength = parse_dimensioned(&ctx, value, LENGTH, "a length unit: m, cm, mm, um, nm")?;
            }
            ("dispersion", "gvd_override") => {
                cfg.gvd_override = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, GVD, "s^2/m or fs^2/mm")?)
                };
            }

            ("crystal.pdc", "length") => cfg.pdc.length = parse_dimensioned(&ctx, value, LENGTH, "a length unit")?,
            ("crystal.pdc", "gain") => cfg.pdc.gain = parse_plain(&ctx, value)?,
            ("crystal.pdc", "pump_mode") => pump_mode_pdc = Some(value.to_string()),
            ("crystal.pdc", "pump_angle") => {
                pump_angle_pdc = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANGLE, "rad, mrad or deg")?)
                };
            }
            ("crystal.pdc", "mismatch_offset") => cfg.pdc.mismatch_offset = parse_plain(&ctx, value)?,
            ("crystal.pdc", "mismatch_model") => cfg.pdc.mismatch_model = parse_mismatch(&ctx, value)?,

            ("crystal.sfg", "length") => cfg.sfg.length = parse_dimensioned(&ctx, value, LENGTH, "a length unit")?,
            ("crystal.sfg", "gain") => cfg.sfg.gain = parse_plain(&ctx, value)?,
            ("crystal.sfg", "pump_mode") => pump_mode_sfg = Some(value.to_string()),
            ("crystal.sfg", "pump_angle") => {
                pump_angle_sfg = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANGLE, "rad, mrad or deg")?)
                };
            }
            ("crystal.sfg", "mismatch_offset") => cfg.sfg.mismatch_offset = parse_plain(&ctx, value)?,
            ("crystal.sfg", "mismatch_model") => cfg.sfg.mismatch_model = parse_mismatch(&ctx, value)?,
            ("crystal.sfg", "sinc_argument") => {
                cfg.sinc_argument = match value {
                    "full" => SincArgument::Full,
                    "half" => SincArgument::Half,
                    other => {
                        return Err(ConfigError::BadValue {
                            line,
                            field: key.into(),
                            msg: format!("`{other}` is not one of full, half"),
                        })
                    }
                };
            }
            ("crystal.sfg", "phase_convention") => {
                cfg.phase_convention = match value {
                    "conjugate" => SfgPhase::Conjugate,
                    "printed" => SfgPhase::Printed,
                    other => {
                        return Err(ConfigError::BadValue {
                            line,
                            field: key.into(),
                            msg: format!("`{other}` is not one of conjugate, printed"),
                        })
                    }
                };
            }

            ("transfer", "delay_start") => cfg.delay_start = parse_dimensioned(&ctx, value, TIME, "a time unit: s, ps, fs")?,
            ("transfer", "delay_stop") => cfg.delay_stop = parse_dimensioned(&ctx, value, TIME, "a time unit: s, ps, fs")?,
            ("transfer", "delay_step") => cfg.delay_step = parse_dimensioned(&ctx, value, TIME, "a time unit: s, ps, fs")?,
            ("transfer", "window") => {
                cfg.window = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANG_FREQ, "rad/s")?)
                };
            }
            ("transfer", "window_edge_width") => {
                cfg.window_edge_width = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANG_FREQ, "rad/s")?)
                };
            }
            ("transfer", "pinhole_half_angle") => {
                cfg.pinhole_half_angle = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANGLE, "rad, mrad or deg")?)
                };
            }
            ("transfer", "pinhole_diameter") => {
                pinhole_diameter = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, LENGTH, "a length unit")?)
                };
            }
            ("transfer", "pinhole_distance") => {
                pinhole_distance = if value == "none" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, LENGTH, "a length unit")?)
                };
            }
            ("transfer", "gap_q_min") => cfg.gap_q_min = parse_dimensioned(&ctx, value, WAVENUMBER, "rad/m or 1/m")?,
            ("transfer", "defocus") => cfg.defocus = parse_dimensioned(&ctx, value, LENGTH, "a length unit")?,
            ("transfer", "defocus_list") => {
                let mut list = Vec::new();
                for item in value.split(',') {
                    list.push(parse_dimensioned(&ctx, item.trim(), LENGTH, "a length unit")?);
                }
                cfg.defocus_list = list;
            }
            ("transfer", "defocus_as_chirp") => cfg.defocus_as_chirp = parse_bool(&ctx, value)?,
            ("transfer", "transmission") => cfg.transmission = parse_plain(&ctx, value)?,

            ("grid", "q_max") => cfg.q_max = parse_dimensioned(&ctx, value, WAVENUMBER, "rad/m or 1/m")?,
            ("grid", "n_q") => cfg.n_q = parse_count(&ctx, value)?,
            ("grid", "n_omega") => cfg.n_omega = parse_count(&ctx, value)?,
            ("grid", "omega_max") => {
                cfg.omega_max = if value == "auto" {
                    None
                } else {
                    Some(parse_dimensioned(&ctx, value, ANG_FREQ, "rad/s (or `auto`)")?)
                };
            }
            ("grid", "reduction") => {
                cfg.reduction = match value {
                    "radial" => Reduction::Radial,
                    "cartesian" => Reduction::Cartesian,
                    other => {
                        return Err(ConfigError::BadValue {
                            line,
                            field: key.into(),
                            msg: format!("`{other}` is not one of radial, cartesian"),
                        })
                    }
                };
            }

            ("output", "baseline") => cfg.baseline = parse_plain(&ctx, value)?,
            ("output", "amplitude_model") => {
                cfg.amplitude_model = match value {
                    "physical" => AmplitudeModel::Physical,
                    "flat" => AmplitudeModel::Flat,
                    other => {
                        return Err(ConfigError::BadValue {
                            line,
                            field: key.into(),
                            msg: format!("`{other}` is not one of physical, flat"),
                        })
                    }
                };
            }
            _ => unreachable!("key list and dispatch table out of sync"),
        }
    }

    // pump-mode resolution per crystal
    for (mode, angle, crystal, name) in [
        (&pump_mode_pdc, &pump_angle_pdc, &mut cfg.pdc, "crystal.pdc"),
        (&pump_mode_sfg, &pump_angle_sfg, &mut cfg.sfg, "crystal.sfg"),
    ] {
        match mode.as_deref() {
            None | Some("tuned") => {
                if mode.is_some() && angle.is_some() {
                    return Err(ConfigError::Invalid(format!(
                        "[{name}] pump_angle given but pump_mode is tuned"
                    )));
                }
            }
            Some("angle") => match angle {
                Some(a) => crystal.pump_mode_angle = Some(*a),
                None => {
                    return Err(ConfigError::Invalid(format!(
                        "[{name}] pump_mode = angle requires pump_angle"
                    )))
                }
            },
            Some(other) => {
                return Err(ConfigError::Invalid(format!(
                    "[{name}] pump_mode `{other}` is not one of tuned, angle"
                )))
            }
        }
    }

    // pinhole resolution: direct half-angle or aperture geometry
    match (cfg.pinhole_half_angle, pinhole_diameter, pinhole_distance) {
        (Some(_), None, None) | (None, None, None) => {}
        (None, Some(d), Some(l)) => {
            cfg.pinhole_half_angle = Some(pinhole_half_angle_from_geometry(d, l)?);
        }
        (Some(_), _, _) => {
            return Err(ConfigError::Invalid(
                "give either pinhole_half_angle or pinhole_diameter/pinhole_distance, not both"
                    .to_string(),
            ))
        }
        _ => {
            return Err(ConfigError::Invalid(
                "pinhole geometry needs both pinhole_diameter and pinhole_distance".to_string(),
            ))
        }
    }

    validate(&cfg)?;
    Ok(cfg)
}

fn parse_coeffs(ctx: &Ctx, value: &str) -> Result<[f64; 4], ConfigError> {
    let items: Vec<&str> = value.split(',').map(str::trim).collect();
    if items.len() != 4 {
        return Err(ConfigError::BadValue {
            line: ctx.line,
            field: ctx.field.to_string(),
            msg: format!("expected 4 comma-separated coefficients, got {}", items.len()),
        });
    }
    let mut out = [0.0; 4];
    for (i, s) in items.iter().enumerate() {
        out[i] = parse_number(ctx, s)?;
    }
    Ok(out)
}

fn parse_mismatch(ctx: &Ctx, value: &str) -> Result<MismatchModel, ConfigError> {
    match value {
        "full" => Ok(MismatchModel::Full),
        "quadratic" => Ok(MismatchModel::Quadratic),
        other => Err(ConfigError::BadValue {
            line: ctx.line,
            field: ctx.field.to_string(),
            msg: format!("`{other}` is not one of full, quadratic"),
        }),
    }
}

fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    if cfg.wavelength_min >= cfg.wavelength_max {
        return Err(ConfigError::Invalid(
            "wavelength_min must be below wavelength_max".to_string(),
        ));
    }
    if !(cfg.delay_step > 0.0) || cfg.delay_stop <= cfg.delay_start {
        return Err(ConfigError::Invalid(
            "delay sweep needs delay_stop > delay_start and a positive delay_step".to_string(),
        ));
    }
    if cfg.window.is_none() && cfg.omega_max.is_none() {
        return Err(ConfigError::Invalid(
            "either a spectral window or an explicit grid omega_max is required".to_string(),
        ));
    }
    Ok(())
}

// ------------------------------------------------------------ conversion

impl RunConfig {
    pub fn delays(&self) -> Vec<f64> {
        let n = ((self.delay_stop - self.delay_start) / self.delay_step).round() as usize;
        (0..=n)
            .map(|k| self.delay_start + k as f64 * self.delay_step)
            .collect()
    }

    /// Build the engine-level configuration.
    pub fn to_experiment(&self, workers: Option<usize>) -> Result<ExperimentConfig, ConfigError> {
        let [a, b, c, d] = self.sellmeier_ordinary;
        let ordinary = Sellmeier { a, b, c, d };
        let [a, b, c, d] = self.sellmeier_extraordinary;
        let extraordinary = Sellmeier { a, b, c, d };
        let model = DispersionModel {
            ordinary,
            extraordinary,
            valid_wavelength_range: (self.wavelength_min, self.wavelength_max),
            gvd_override: self.gvd_override,
        };
        let field = FieldParams::degenerate(self.pump_wavelength);
        let to_crystal = |c: &CrystalConfig| CrystalSpec {
            length: c.length,
            gain: c.gain,
            pump_mode: match c.pump_mode_angle {
                Some(a) => PumpMode::Angle(a),
                None => PumpMode::Tuned,
            },
            mismatch_offset: c.mismatch_offset,
            mismatch_model: c.mismatch_model,
        };
        let setup = Setup {
            signal: SignalDispersion::new(model, field),
            pdc: to_crystal(&self.pdc),
            sfg: to_crystal(&self.sfg),
            convention: SfgConvention {
                sinc_argument: self.sinc_argument,
                phase: self.phase_convention,
            },
        };
        let omega_max = match (self.omega_max, self.window) {
            (Some(m), _) => m,
            (None, Some(w)) => w / 2.0,
            (None, None) => unreachable!("validated"),
        };
        let window = self.window.map(|w| SpectralWindow {
            full_width: w,
            edge: match self.window_edge_width {
                Some(width) => WindowEdge::Smooth { width },
                None => WindowEdge::Hard,
            },
        });
        Ok(ExperimentConfig {
            setup,
            grid: Grid {
                q_max: self.q_max,
                n_q: self.n_q,
                omega_max,
                n_omega: self.n_omega,
                reduction: self.reduction,
            },
            transfer: TransferSpec {
                delay: 0.0,
                defocus: self.defocus,
                defocus_as_chirp: self.defocus_as_chirp,
                window,
                pinhole_half_angle: self.pinhole_half_angle,
                gap_q_min: self.gap_q_min,
                transmission: self.transmission,
            },
            delays: self.delays(),
            defocus_list: self.defocus_list.clone(),
            baseline: self.baseline,
            amplitude: self.amplitude_model,
            workers,
        })
    }

    /// Render the effective configuration: every field explicit, SI units,
    /// nine significant digits. The output parses back to this config.
    pub fn echo(&self) -> String {
        let f = |x: f64| format!("{x:.8e}");
        let opt = |x: Option<f64>, unit: &str| match x {
            Some(v) => format!("{} {unit}", f(v)),
            None => "none".to_string(),
        };
        let mismatch = |m: MismatchModel| match m {
            MismatchModel::Full => "full",
            MismatchModel::Quadratic => "quadratic",
        };
        let crystal = |c: &CrystalConfig| {
            format!(
                "length = {} m\ngain = {}\npump_mode = {}\npump_angle = {}\nmismatch_offset = {}\nmismatch_model = {}",
                f(c.length),
                f(c.gain),
                if c.pump_mode_angle.is_some() { "angle" } else { "tuned" },
                opt(c.pump_mode_angle, "rad"),
                f(c.mismatch_offset),
                mismatch(c.mismatch_model),
            )
        };
        format!(
            "# effective configuration (defaults resolved; SI units; re-runnable)\n\
             [run]\n\
             scenario = {scenario}\n\
             out_dir = {out_dir}\n\
             \n[dispersion]\n\
             sellmeier_ordinary = {so}\n\
             sellmeier_extraordinary = {se}\n\
             wavelength_min = {wmin} m\n\
             wavelength_max = {wmax} m\n\
             pump_wavelength = {pw} m\n\
             gvd_override = {gvd}\n\
             \n[crystal.pdc]\n{pdc}\n\
             \n[crystal.sfg]\n{sfg}\n\
             sinc_argument = {sarg}\n\
             phase_convention = {phase}\n\
             \n[transfer]\n\
             delay_start = {d0} s\n\
             delay_stop = {d1} s\n\
             delay_step = {dt} s\n\
             window = {window}\n\
             window_edge_width = {edge}\n\
             pinhole_half_angle = {pin}\n\
             pinhole_diameter = none\n\
             pinhole_distance = none\n\
             gap_q_min = {gap} rad/m\n\
             defocus = {dz} m\n\
             defocus_list = {dzl}\n\
             defocus_as_chirp = {chirp}\n\
             transmission = {trans}\n\
             \n[grid]\n\
             q_max = {qmax} rad/m\n\
             n_q = {nq}\n\
             n_omega = {nom}\n\
             omega_max = {ommax}\n\
             reduction = {red}\n\
             \n[output]\n\
             baseline = {base}\n\
             amplitude_model = {amp}\n",
            scenario = self.scenario.name(),
            out_dir = self.out_dir,
            so = self.sellmeier_ordinary.map(f).join(", "),
            se = self.sellmeier_extraordinary.map(f).join(", "),
            wmin = f(self.wavelength_min),
            wmax = f(self.wavelength_max),
            pw = f(self.pump_wavelength),
            gvd = opt(self.gvd_override, "s^2/m"),
            pdc = crystal(&self.pdc),
            sfg = crystal(&self.sfg),
            sarg = match self.sinc_argument {
                SincArgument::Full => "full",
                SincArgument::Half => "half",
            },
            phase = match self.phase_convention {
                SfgPhase::Conjugate => "conjugate",
                SfgPhase::Printed => "printed",
            },
            d0 = f(self.delay_start),
            d1 = f(self.delay_stop),
            dt = f(self.delay_step),
            window = opt(self.window, "rad/s"),
            edge = opt(self.window_edge_width, "rad/s"),
            pin = opt(self.pinhole_half_angle, "rad"),
            gap = f(self.gap_q_min),
            dz = f(self.defocus),
            dzl = self
                .defocus_list
                .iter()
                .map(|v| format!("{} m", f(*v)))
                .collect::<Vec<_>>()
                .join(", "),
            chirp = self.defocus_as_chirp,
            trans = f(self.transmission),
            qmax = f(self.q_max),
            nq = self.n_q,
            nom = self.n_omega,
            ommax = match self.omega_max {
                Some(v) => format!("{} rad/s", f(v)),
                None => "auto".to_string(),
            },
            red = match self.reduction {
                Reduction::Radial => "radial",
                Reduction::Cartesian => "cartesian",
            },
            base = f(self.baseline),
            amp = match self.amplitude_model {
                AmplitudeModel::Physical => "physical",
                AmplitudeModel::Flat => "flat",
            },
        )
    }
}
