//! `key = value` configuration files and the merge with flags and defaults.

use std::path::Path;

use mwstems_core::fields::{FieldSpec, DEFAULT_PRIME_BOUND};

use crate::CliError;

pub const DEFAULT_T_MAX: i32 = 15;

/// Settings read from a config file. Unset keys fall through to defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub field: Option<String>,
    pub t_max: Option<i32>,
    pub c_max: Option<i32>,
    pub prime_bound: Option<u32>,
    pub ss: Option<String>,
    pub page: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig, CliError> {
        let mut cfg = FileConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            let num = |v: &str| v.parse().map_err(|_| CliError::Config(format!("line {}: {k} wants a number", n + 1)));
            match k {
                "field" => cfg.field = Some(v),
                "t_max" => cfg.t_max = Some(num(&v)?),
                "c_max" => cfg.c_max = Some(num(&v)?),
                "prime_bound" => cfg.prime_bound = Some(num(&v)? as u32),
                "ss" => cfg.ss = Some(v),
                "page" => cfg.page = Some(v),
                _ => return Err(CliError::Config(format!("line {}: unknown key `{k}`", n + 1))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        FileConfig::parse(&text)
    }
}

/// Field and window after applying flags, then the config file, then
/// defaults. A bare `Q` picks up the configured prime bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolved {
    pub field: FieldSpec,
    pub t_max: i32,
    pub c_max: i32,
}

pub fn resolve(
    field: Option<&str>,
    t_max: Option<i32>,
    c_max: Option<i32>,
    cfg: &FileConfig,
) -> Result<Resolved, CliError> {
    let bound = cfg.prime_bound.unwrap_or(DEFAULT_PRIME_BOUND);
    let text = field.or(cfg.field.as_deref()).unwrap_or("Q");
    let text = if text.trim() == "Q" { format!("Q:{bound}") } else { text.to_string() };
    let field = FieldSpec::parse(&text).map_err(CliError::Field)?;
    let t_max = t_max.or(cfg.t_max).unwrap_or(DEFAULT_T_MAX);
    let c_max = c_max.or(cfg.c_max).unwrap_or(t_max + 5);
    if t_max < 0 || c_max < 0 {
        return Err(CliError::Config("window bounds must be non-negative".into()));
    }
    Ok(Resolved { field, t_max, c_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let r = resolve(None, None, None, &FileConfig::default()).unwrap();
        assert_eq!(r, Resolved { field: FieldSpec::Rationals(13), t_max: 15, c_max: 20 });
    }

    #[test]
    fn flags_beat_file_beats_defaults() {
        let cfg = FileConfig::parse("field = Fq:5\nt_max = 8 # comment\nprime_bound = 7\n").unwrap();
        let r = resolve(None, None, None, &cfg).unwrap();
        assert_eq!((r.field, r.t_max, r.c_max), (FieldSpec::FiniteField(5), 8, 13));
        let r = resolve(Some("Q"), Some(4), None, &cfg).unwrap();
        assert_eq!((r.field, r.t_max, r.c_max), (FieldSpec::Rationals(7), 4, 9));
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(FileConfig::parse("colour = red"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("t_max = many"), Err(CliError::Config(_))));
        assert!(matches!(FileConfig::parse("just words"), Err(CliError::Config(_))));
        assert!(matches!(resolve(Some("Fq:6"), None, None, &FileConfig::default()), Err(CliError::Field(_))));
    }
}
