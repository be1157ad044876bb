//! `key=value` run configuration files and instance selector lists.
//!
//! ```text
//! # comment
//! q = 2,3
//! m = 2,3
//! eps = -1,+1
//! family = grid(3), paley9
//! out = reports
//! seed = 20250
//! threads = 4
//! allow_large = false
//! export = exports
//! timings = false
//! ```

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::quadspace::Sign;
use crate::srg::Family;

/// Values read from a config file; `None` when the key is absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigFile {
    pub q: Option<Vec<u64>>,
    pub m: Option<Vec<usize>>,
    pub eps: Option<Vec<Sign>>,
    pub family: Option<Vec<Family>>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub allow_large: Option<bool>,
    pub export: Option<PathBuf>,
    pub timings: Option<bool>,
}

/// Splits on commas outside parentheses.
fn split_list(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_list<T>(s: &str, what: &str, item: impl Fn(&str) -> Option<T>) -> std::result::Result<Vec<T>, String> {
    let items = split_list(s);
    if items.iter().any(|x| x.is_empty()) {
        return Err(format!("empty entry in {what} list `{s}`"));
    }
    items
        .into_iter()
        .map(|x| item(x).ok_or_else(|| format!("invalid {what} `{x}`")))
        .collect()
}

pub fn parse_q_list(s: &str) -> std::result::Result<Vec<u64>, String> {
    let qs = parse_list(s, "q", |x| x.parse::<u64>().ok())?;
    match qs.iter().find(|q| !(2..=5).contains(*q)) {
        Some(q) => Err(format!("q = {q} is outside the supported range 2..=5")),
        None => Ok(qs),
    }
}

pub fn parse_m_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let ms = parse_list(s, "m", |x| x.parse::<usize>().ok())?;
    match ms.iter().find(|m| !(2..=4).contains(*m)) {
        Some(m) => Err(format!("m = {m} is outside the supported range 2..=4")),
        None => Ok(ms),
    }
}

pub fn parse_eps_list(s: &str) -> std::result::Result<Vec<Sign>, String> {
    parse_list(s, "eps", |x| match x {
        "-1" | "-" | "minus" => Some(Sign::Minus),
        "1" | "+1" | "+" | "plus" => Some(Sign::Plus),
        _ => None,
    })
}

pub fn parse_family_list(s: &str) -> std::result::Result<Vec<Family>, String> {
    split_list(s)
        .into_iter()
        .map(|x| {
            let f: Family = x.parse().map_err(|e| match e {
                Error::Parse { msg, .. } => msg,
                e => e.to_string(),
            })?;
            f.validate().map_err(|e| e.to_string())?;
            Ok(f)
        })
        .collect()
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    let mut cfg = ConfigFile::default();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let err = |msg: String| Error::parse(line_no, msg);
        let bad = |what: &str| Error::parse(line_no, format!("invalid {what} `{value}`"));
        match key {
            "q" => cfg.q = Some(parse_q_list(value).map_err(err)?),
            "m" => cfg.m = Some(parse_m_list(value).map_err(err)?),
            "eps" => cfg.eps = Some(parse_eps_list(value).map_err(err)?),
            "family" => cfg.family = Some(parse_family_list(value).map_err(err)?),
            "out" if !value.is_empty() => cfg.out = Some(value.into()),
            "export" if !value.is_empty() => cfg.export = Some(value.into()),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "threads" => {
                cfg.threads = Some(value.parse().ok().filter(|&t| t > 0).ok_or_else(|| bad("thread count"))?)
            }
            "allow_large" => cfg.allow_large = Some(parse_bool(value).ok_or_else(|| bad("boolean"))?),
            "timings" => cfg.timings = Some(parse_bool(value).ok_or_else(|| bad("boolean"))?),
            "out" | "export" => return Err(bad("path")),
            _ => return Err(Error::parse(line_no, format!("unknown key `{key}`"))),
        }
    }
    Ok(cfg)
}
