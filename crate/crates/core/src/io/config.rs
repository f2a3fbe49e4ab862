//! `key = value` configuration files, density specifications and size
//! schedules.
//!
//! A configuration file holds one `key = value` pair per line. Blank lines
//! and lines starting with `#` are ignored; a key may appear only once.
//! Lists are comma separated.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pde::{AffineFrame, RadialDensity, RadialProfile};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parsed `key = value` pairs with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, (usize, String)>,
}

pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut entries = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| parse_err(line, "expected key = value"))?;
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(parse_err(line, format!("invalid key {key:?}")));
        }
        if let Some((first, _)) = entries.get(key) {
            return Err(parse_err(line, format!("duplicate key {key:?} (first on line {first})")));
        }
        entries.insert(key.to_string(), (line, value.trim().to_string()));
    }
    Ok(KeyValues { entries })
}

impl KeyValues {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |(l, _)| *l)
    }

    /// Fail on the first key outside `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, (line, _))) => Err(parse_err(*line, format!("unknown key {k:?}"))),
            None => Ok(()),
        }
    }

    pub fn number(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_number(v).map_err(|m| parse_err(self.line(key), m))).transpose()
    }

    pub fn integer(&self, key: &str) -> Result<Option<u64>> {
        self.get(key)
            .map(|v| v.parse::<u64>().map_err(|_| parse_err(self.line(key), format!("{key}: not an integer: {v:?}"))))
            .transpose()
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key).map(|v| parse_list(v).map_err(|m| parse_err(self.line(key), format!("{key}: {m}")))).transpose()
    }

    pub fn schedule(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| parse_schedule(v).map_err(|e| parse_err(self.line(key), format!("{key}: {e}"))))
            .transpose()
    }
}

fn parse_number(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("not a finite number: {s:?}")),
    }
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_number).collect()
}

/// Longest schedule accepted by [`parse_schedule`].
pub const MAX_SCHEDULE_LEN: usize = 10_000;

/// Sizes given as `a:b:k` (k log-spaced values from `a` to `b`), as a
/// comma-separated list, or as a single number.
pub fn parse_schedule(s: &str) -> Result<Vec<f64>> {
    let bad = |m: String| Error::OutOfRange(format!("schedule {s:?}: {m}"));
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, k] = parts[..] else { return Err(bad("expected a:b:k".into())) };
        let (a, b) = (parse_number(a).map_err(bad)?, parse_number(b).map_err(bad)?);
        let k: usize = k.trim().parse().map_err(|_| bad(format!("bad count {k:?}")))?;
        if !(a > 0.0 && b > a && (2..=MAX_SCHEDULE_LEN).contains(&k)) {
            return Err(bad(format!("need 0 < a < b and 2 <= k <= {MAX_SCHEDULE_LEN}")));
        }
        let ratio = (b / a).ln();
        (0..k).map(|i| if i + 1 == k { b } else { a * (ratio * i as f64 / (k - 1) as f64).exp() }).collect()
    } else {
        parse_list(s).map_err(bad)?
    };
    if values.len() > MAX_SCHEDULE_LEN {
        return Err(bad(format!("more than {MAX_SCHEDULE_LEN} values")));
    }
    if values.iter().any(|v| !(*v > 0.0)) || values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be positive and strictly increasing".into()));
    }
    Ok(values)
}

/// Keys understood by [`density_from_key_values`].
pub const DENSITY_KEYS: &[&str] = &["kind", "dim", "radius", "r", "f", "normalize", "matrix", "offset", "mean", "covariance"];

/// Density from `kind = ball | gaussian | table` plus its parameters:
/// `radius` (ball), `r` and `f` lists with optional `normalize = true`
/// (table), `mean` and `covariance` (gaussian), and an optional frame
/// `matrix` (row-major) with `offset`.
pub fn density_from_key_values(kv: &KeyValues) -> Result<RadialDensity> {
    let kind = kv.get("kind").ok_or_else(|| parse_err(0, "missing key \"kind\""))?;
    let dim = kv.integer("dim")?.unwrap_or(2);
    if !(1..=3).contains(&dim) {
        return Err(parse_err(kv.line("dim"), format!("dim must be 1, 2 or 3, got {dim}")));
    }
    let dim = dim as usize;
    let kind_line = kv.line("kind");
    let mut density = match kind {
        "ball" | "uniform_ball" => {
            let radius = kv.number("radius")?.unwrap_or(1.0);
            RadialDensity { dim, profile: RadialProfile::UniformBall { radius }, frame: None }
        }
        "gaussian" => match (kv.list("mean")?, kv.list("covariance")?) {
            (Some(mean), Some(cov)) => RadialDensity::gaussian_with(dim, &mean, &cov)?,
            (None, None) => RadialDensity::gaussian(dim),
            _ => return Err(parse_err(kind_line, "mean and covariance must be given together")),
        },
        "table" => {
            let r = kv.list("r")?.ok_or_else(|| parse_err(kind_line, "table needs key \"r\""))?;
            let f = kv.list("f")?.ok_or_else(|| parse_err(kind_line, "table needs key \"f\""))?;
            match kv.get("normalize") {
                Some("true") => RadialDensity::table_normalized(dim, r, f)?,
                None | Some("false") => RadialDensity::table(dim, r, f)?,
                Some(other) => return Err(parse_err(kv.line("normalize"), format!("normalize: expected true or false, got {other:?}"))),
            }
        }
        other => return Err(parse_err(kind_line, format!("unknown kind {other:?}"))),
    };
    match (kv.list("matrix")?, kv.list("offset")?) {
        (None, None) => {}
        (Some(_), _) | (_, Some(_)) if density.frame.is_some() => {
            return Err(parse_err(kv.line("matrix").max(kv.line("offset")), "frame given twice"));
        }
        (matrix, offset) => {
            let matrix = matrix.unwrap_or_else(|| {
                (0..dim * dim).map(|k| if k % (dim + 1) == 0 { 1.0 } else { 0.0 }).collect()
            });
            let offset = offset.unwrap_or_else(|| vec![0.0; dim]);
            density = density.with_frame(AffineFrame { matrix, offset })?;
        }
    }
    density.validate()?;
    Ok(density)
}

/// A density specification file; unknown keys are errors.
pub fn parse_density_config(text: &str) -> Result<RadialDensity> {
    let kv = parse_key_values(text)?;
    kv.only(DENSITY_KEYS)?;
    density_from_key_values(&kv)
}
