//! Line-oriented `key = value` configuration with `#` comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const CONFIG_KEYS: [&str; 14] = [
    "delta",
    "m",
    "l",
    "p",
    "cg",
    "motion",
    "gt_max_over_pi",
    "points",
    "tail_eps",
    "sweep_param",
    "sweep_values",
    "mode",
    "preset",
    "output",
];

pub const DEFAULT_TAIL_EPS: f64 = 1e-12;
pub const DEFAULT_GT_MAX_OVER_PI: f64 = 4.0;
pub const POINTS_PER_PI: f64 = 400.0;
pub const DEFAULT_VERIFY_TIMES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Series,
    Sweep2d,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Series => "series",
            Mode::Sweep2d => "sweep2d",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    GroundWeight,
    Detuning,
    Mean,
    Photons,
    Halfwaves,
}

impl SweepParam {
    pub fn key(self) -> &'static str {
        match self {
            SweepParam::GroundWeight => "cg",
            SweepParam::Detuning => "delta",
            SweepParam::Mean => "m",
            SweepParam::Photons => "l",
            SweepParam::Halfwaves => "p",
        }
    }

    /// Returns `base` with this parameter set to `value`, validated.
    pub fn apply(self, base: &ModelParams, value: f64) -> std::result::Result<ModelParams, String> {
        let mut p = *base;
        match self {
            SweepParam::GroundWeight => p.ground_weight = value,
            SweepParam::Detuning => p.detuning = value,
            SweepParam::Mean => p.mean_photons = value,
            SweepParam::Photons => p.photons = positive_integer(value)?,
            SweepParam::Halfwaves => p.mode_halfwaves = positive_integer(value)?,
        }
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

fn positive_integer(value: f64) -> std::result::Result<u32, String> {
    if value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
        Ok(value as u32)
    } else {
        Err(format!("expected an integer >= 1, got {value}"))
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cg" => Ok(SweepParam::GroundWeight),
            "delta" => Ok(SweepParam::Detuning),
            "m" => Ok(SweepParam::Mean),
            "l" => Ok(SweepParam::Photons),
            "p" => Ok(SweepParam::Halfwaves),
            other => Err(format!(
                "unknown sweep parameter `{other}` (expected cg, delta, m, l or p)"
            )),
        }
    }
}

/// Parameter sets of the published figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
    Fig5a,
    Fig5b,
    Fig5c,
}

pub const PRESETS: [Preset; 13] = [
    Preset::Fig1,
    Preset::Fig2,
    Preset::Fig2a,
    Preset::Fig2b,
    Preset::Fig2c,
    Preset::Fig3,
    Preset::Fig3a,
    Preset::Fig3b,
    Preset::Fig4,
    Preset::Fig5,
    Preset::Fig5a,
    Preset::Fig5b,
    Preset::Fig5c,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig2c => "fig2c",
            Preset::Fig3 => "fig3",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
            Preset::Fig5c => "fig5c",
        }
    }

    /// Base parameters, run mode and swept axis.
    pub fn layout(self) -> (ModelParams, Mode, Option<(SweepParam, Vec<f64>)>) {
        let moving = ModelParams {
            mean_photons: 1.0,
            detuning: 0.0,
            mode_halfwaves: 1,
            ground_weight: 0.2,
            motion: true,
            ..Default::default()
        };
        let steps =
            |count: usize, step: f64| (0..=count).map(|k| k as f64 * step).collect::<Vec<_>>();
        match self {
            Preset::Fig1 => (
                ModelParams {
                    photons: 2,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::GroundWeight, steps(10, 0.1))),
            ),
            Preset::Fig2 => (
                ModelParams {
                    photons: 1,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::Halfwaves, vec![1.0, 3.0])),
            ),
            Preset::Fig2a => (
                ModelParams {
                    photons: 1,
                    motion: false,
                    ..moving
                },
                Mode::Series,
                None,
            ),
            Preset::Fig2b => (
                ModelParams {
                    photons: 1,
                    ..moving
                },
                Mode::Series,
                None,
            ),
            Preset::Fig2c => (
                ModelParams {
                    photons: 1,
                    mode_halfwaves: 3,
                    ..moving
                },
                Mode::Series,
                None,
            ),
            Preset::Fig3 | Preset::Fig3b => (
                ModelParams {
                    photons: 2,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::Detuning, steps(10, 0.5))),
            ),
            Preset::Fig3a => (
                ModelParams {
                    photons: 2,
                    motion: false,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::Detuning, steps(10, 0.5))),
            ),
            Preset::Fig4 => (
                ModelParams {
                    photons: 2,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::Mean, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0])),
            ),
            Preset::Fig5 => (
                ModelParams {
                    photons: 1,
                    ..moving
                },
                Mode::Sweep2d,
                Some((SweepParam::Photons, vec![1.0, 3.0, 8.0])),
            ),
            Preset::Fig5a => (
                ModelParams {
                    photons: 1,
                    ..moving
                },
                Mode::Series,
                None,
            ),
            Preset::Fig5b => (
                ModelParams {
                    photons: 3,
                    ..moving
                },
                Mode::Series,
                None,
            ),
            Preset::Fig5c => (
                ModelParams {
                    photons: 8,
                    ..moving
                },
                Mode::Series,
                None,
            ),
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        PRESETS
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                format!("unknown preset `{s}` (expected fig1..fig5 or a panel such as fig2b)")
            })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    value: String,
    /// `None` for command-line overrides.
    line: Option<usize>,
}

/// Unvalidated key/value pairs from a config document and flag overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::ConfigLine {
                line: line_no,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(Error::ConfigLine {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if let Some(prev) = raw.entries.get(key) {
                return Err(Error::ConfigLine {
                    line: line_no,
                    message: format!(
                        "duplicate key `{key}` (first set on line {})",
                        prev.line.unwrap_or(0)
                    ),
                });
            }
            raw.entries.insert(
                key.to_string(),
                Entry {
                    value: value.trim().to_string(),
                    line: Some(line_no),
                },
            );
        }
        Ok(raw)
    }

    /// Command-line override; replaces any value from the document.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.into(),
                line: None,
            },
        );
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn error(&self, key: &str, message: String) -> Error {
        match self.entries.get(key).and_then(|e| e.line) {
            Some(line) => Error::ConfigLine {
                line,
                message: format!("`{key}`: {message}"),
            },
            None => Error::Config(format!("`{key}`: {message}")),
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(entry) => entry
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|e| self.error(key, format!("cannot parse `{}`: {e}", entry.value))),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(entry) => match entry.value.to_ascii_lowercase().as_str() {
                "true" | "on" | "yes" | "1" => Ok(Some(true)),
                "false" | "off" | "no" | "0" => Ok(Some(false)),
                other => Err(self.error(key, format!("expected true or false, got `{other}`"))),
            },
        }
    }

    fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(entry) => entry
                .value
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|e| self.error(key, format!("cannot parse `{}`: {e}", entry.value))),
        }
    }

    fn require(&self, key: &str, mode: &str) -> Result<()> {
        if self.contains(key) {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "missing required key `{key}` for mode {mode}"
            )))
        }
    }
}

/// A fully validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub mode: Mode,
    pub preset: Option<Preset>,
    pub sweep: Option<(SweepParam, Vec<f64>)>,
    pub gt_max_over_pi: f64,
    /// Time samples of a series, or times per combination in verify mode.
    pub points: usize,
    pub tail_eps: f64,
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        // value-level checks first so domain errors point at their line
        let delta: Option<f64> = raw.get("delta")?;
        let m: Option<f64> = raw.get("m")?;
        let l: Option<u32> = raw.get("l")?;
        let p: Option<u32> = raw.get("p")?;
        let cg: Option<f64> = raw.get("cg")?;
        let motion = raw.get_bool("motion")?;
        let gt_max: Option<f64> = raw.get("gt_max_over_pi")?;
        let points: Option<usize> = raw.get("points")?;
        let tail_eps: Option<f64> = raw.get("tail_eps")?;
        let sweep_param: Option<SweepParam> = raw.get("sweep_param")?;
        let sweep_values = raw.get_list("sweep_values")?;
        let preset: Option<Preset> = raw.get("preset")?;
        let mode_name: Option<String> = raw.get("mode")?;
        let output: Option<String> = raw.get("output")?;

        let check = |ok: bool, key: &str, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(raw.error(key, what.to_string()))
            }
        };
        if let Some(v) = delta {
            check(v.is_finite(), "delta", "must be finite")?;
        }
        if let Some(v) = m {
            check(v.is_finite() && v >= 0.0, "m", "must be >= 0")?;
        }
        if let Some(v) = l {
            check(v >= 1, "l", "must be >= 1")?;
        }
        if let Some(v) = p {
            check(v >= 1, "p", "must be >= 1")?;
        }
        if let Some(v) = cg {
            check(
                (0.0..=1.0).contains(&v),
                "cg",
                &format!("must lie in [0, 1], got {v}"),
            )?;
        }
        if let Some(v) = gt_max {
            check(
                v.is_finite() && v > 0.0,
                "gt_max_over_pi",
                "must be positive",
            )?;
        }
        if let Some(v) = points {
            check(v >= 2, "points", "must be >= 2")?;
        }
        if let Some(v) = tail_eps {
            check((0.0..1.0).contains(&v), "tail_eps", "must lie in [0, 1)")?;
        }

        let mode = match mode_name.as_deref() {
            Some("series") => Some(Mode::Series),
            Some("sweep2d") => Some(Mode::Sweep2d),
            Some("verify") => Some(Mode::Verify),
            Some("preset") => None,
            Some(other) => {
                return Err(raw.error(
                    "mode",
                    format!("expected series, sweep2d, verify or preset, got `{other}`"),
                ))
            }
            None if preset.is_some() => None,
            None => return Err(Error::Config("missing required key `mode`".into())),
        };

        let (mut base, mode, mut sweep) = match (mode, preset) {
            (None, Some(preset)) => preset.layout(),
            (None, None) => {
                return Err(Error::Config(
                    "missing required key `preset` for mode preset".into(),
                ))
            }
            (Some(mode), _) => {
                if matches!(mode, Mode::Series | Mode::Sweep2d) {
                    for key in ["delta", "m", "l", "cg"] {
                        raw.require(key, mode.name())?;
                    }
                }
                (
                    ModelParams {
                        motion: false,
                        ..Default::default()
                    },
                    mode,
                    None,
                )
            }
        };
        let preset = if mode_name.as_deref().is_some_and(|m| m != "preset") {
            None
        } else {
            preset
        };

        if let Some(v) = delta {
            base.detuning = v;
        }
        if let Some(v) = m {
            base.mean_photons = v;
        }
        if let Some(v) = l {
            base.photons = v;
        }
        if let Some(v) = p {
            base.mode_halfwaves = v;
        }
        if let Some(v) = cg {
            base.ground_weight = v;
        }
        if let Some(v) = motion {
            base.motion = v;
        }
        base.validate()?;

        match (sweep_param, sweep_values) {
            (Some(param), Some(values)) => sweep = Some((param, values)),
            (Some(_), None) => {
                return Err(raw.error("sweep_param", "requires `sweep_values`".into()))
            }
            // a preset's swept axis keeps its parameter when only the values change
            (None, Some(values)) => match sweep.as_mut() {
                Some((_, preset_values)) => *preset_values = values,
                None => return Err(raw.error("sweep_values", "requires `sweep_param`".into())),
            },
            (None, None) => {}
        }
        if mode == Mode::Sweep2d {
            let (param, values) = sweep.as_ref().ok_or_else(|| {
                Error::Config("missing required key `sweep_param` for mode sweep2d".into())
            })?;
            if values.is_empty() {
                return Err(raw.error("sweep_values", "must not be empty".into()));
            }
            for &v in values {
                if !v.is_finite() {
                    return Err(raw.error("sweep_values", format!("non-finite value {v}")));
                }
                param.apply(&base, v).map_err(|e| {
                    raw.error("sweep_values", format!("value {v} out of domain: {e}"))
                })?;
            }
        } else {
            sweep = None;
        }

        let gt_max_over_pi = gt_max.unwrap_or(DEFAULT_GT_MAX_OVER_PI);
        let points = points.unwrap_or(match mode {
            Mode::Verify => DEFAULT_VERIFY_TIMES,
            _ => (POINTS_PER_PI * gt_max_over_pi).round() as usize + 1,
        });

        Ok(SweepSpec {
            base,
            mode,
            preset,
            sweep,
            gt_max_over_pi,
            points: points.max(2),
            tail_eps: tail_eps.unwrap_or(DEFAULT_TAIL_EPS),
            output: output.map(PathBuf::from),
        })
    }

    /// Output label used for default file names.
    pub fn label(&self) -> &'static str {
        self.preset.map_or(self.mode.name(), Preset::name)
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    SweepSpec::from_raw(&RawConfig::parse(text)?)
}
