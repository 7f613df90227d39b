//! Flat `key=value` run configuration files.
//!
//! One setting per line, `#` starts a comment, blank lines are ignored.
//! Keys are the long CLI flag names without the leading dashes
//! (`kappa1`, `tau-max`, `tau-convention`, ...); underscores are accepted
//! in place of dashes.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::criteria::Sign;
use crate::error::{Error, Result};
use crate::sweep::{RunConfig, TauConvention};

impl FromStr for TauConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rate" | "ratetime" => Ok(TauConvention::RateTime),
            "maxkappa" | "maxkappatime" => Ok(TauConvention::MaxKappaTime),
            other => Err(Error::Usage(format!(
                "tau convention must be `rate` or `maxkappa`, got `{other}`"
            ))),
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            other => Err(Error::Usage(format!(
                "sign must be `plus` or `minus`, got `{other}`"
            ))),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| Error::Usage(format!("bad value `{value}` for `{key}`: {e}")))
}

/// Applies one setting. Unknown keys are rejected.
pub fn apply_setting(cfg: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    let key = key.trim().replace('_', "-");
    let value = value.trim();
    match key.as_str() {
        "kappa1" => cfg.kappa1 = parse_value(&key, value)?,
        "kappa2" => cfg.kappa2 = parse_value(&key, value)?,
        "tau-min" => cfg.tau_min = parse_value(&key, value)?,
        "tau-max" => cfg.tau_max = parse_value(&key, value)?,
        "points" => cfg.points = parse_value(&key, value)?,
        "tau-convention" => cfg.tau_convention = value.parse()?,
        "sign" => cfg.sign = value.parse()?,
        "seed" => cfg.seed = parse_value(&key, value)?,
        "mc-samples" => cfg.mc_samples = parse_value(&key, value)?,
        "rk4-steps" => cfg.rk4_steps = parse_value(&key, value)?,
        "out" => cfg.out_path = value.to_string(),
        _ => return Err(Error::Usage(format!("unknown config key `{key}`"))),
    }
    Ok(())
}

/// Applies every setting in `text` on top of `cfg`.
pub fn apply_config_text(cfg: &mut RunConfig, text: &str) -> Result<()> {
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!(
                "config line {}: expected key=value, got `{line}`",
                n + 1
            ))
        })?;
        apply_setting(cfg, key, value)
            .map_err(|e| Error::Usage(format!("config line {}: {e}", n + 1)))?;
    }
    Ok(())
}

pub fn load_config(path: &Path, base: RunConfig) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut cfg = base;
    apply_config_text(&mut cfg, &text)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let text = "\
# fig2 preset
kappa1 = 1.0
kappa2=1.8   # periodic
tau_max=6.5
points=11

tau-convention=maxkappa
sign=minus
seed=42
mc-samples=1000
out=/tmp/x.csv
";
        let mut cfg = RunConfig::default();
        apply_config_text(&mut cfg, text).unwrap();
        assert_eq!(cfg.kappa2, 1.8);
        assert_eq!(cfg.tau_max, 6.5);
        assert_eq!(cfg.points, 11);
        assert_eq!(cfg.tau_convention, TauConvention::MaxKappaTime);
        assert_eq!(cfg.sign, Sign::Minus);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.mc_samples, 1000);
        assert_eq!(cfg.out_path, "/tmp/x.csv");
        assert_eq!(cfg.tau_min, 0.0);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut cfg = RunConfig::default();
        assert!(matches!(
            apply_config_text(&mut cfg, "kappa1 1.0"),
            Err(Error::Usage(_))
        ));
        assert!(apply_config_text(&mut cfg, "colour=blue").is_err());
        assert!(apply_config_text(&mut cfg, "points=many").is_err());
        assert!(apply_config_text(&mut cfg, "sign=times").is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_config(Path::new("/nonexistent/run.cfg"), RunConfig::default()).unwrap_err();
        assert!(err.is_io());
    }
}
