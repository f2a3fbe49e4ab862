//! Flag, config-file and environment resolution shared by the commands.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use peelshape::io::{parse_density_config, parse_key_values, parse_schedule, KeyValues};
use peelshape::pde::RadialDensity;

use crate::cli::{Common, Format};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "PEELSHAPE_OUT_DIR";

/// Ways a command can end unsuccessfully.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, bad input files or arguments the library rejects.
    Usage(String),
    /// A verification suite found a counterexample.
    Verify(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verify(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verify(m) => f.write_str(m),
        }
    }
}

impl From<peelshape::Error> for Failure {
    fn from(e: peelshape::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

const COMMON_KEYS: &[&str] = &["seed", "out", "format", "dim", "threads"];

/// Values from the `--config` file, consulted for every flag left unset.
pub struct Layered {
    kv: KeyValues,
}

impl Layered {
    /// Read the config file of `common`, accepting the shared keys plus
    /// `keys`. Keys may use `-` or `_` between words.
    pub fn load(common: &Common, keys: &[&str]) -> Outcome<Self> {
        let kv = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                parse_key_values(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
            }
            None => KeyValues::default(),
        };
        let allowed: Vec<String> =
            COMMON_KEYS.iter().chain(keys).flat_map(|k| [k.to_string(), k.replace('-', "_")]).collect();
        let allowed: Vec<&str> = allowed.iter().map(String::as_str).collect();
        kv.only(&allowed).map_err(|e| usage(format!("config: {e}")))?;
        Ok(Layered { kv })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.kv.get(key).or_else(|| self.kv.get(&key.replace('-', "_")))
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.raw(key).map(str::to_string))
    }

    pub fn parsed<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Outcome<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .raw(key)
                .map(|v| v.parse::<T>().map_err(|_| usage(format!("config: {key}: cannot parse {v:?}"))))
                .transpose(),
        }
    }

    /// Numbers accept the float grammar, so `1e5` is a valid count.
    pub fn number(&self, flag: Option<f64>, key: &str) -> Outcome<Option<f64>> {
        self.parsed(flag, key)
    }

    pub fn count(&self, flag: Option<usize>, key: &str) -> Outcome<Option<usize>> {
        match (flag, self.raw(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(v)) => Ok(Some(as_count(v.parse::<f64>().ok(), key, v)?)),
            (None, None) => Ok(None),
        }
    }

    pub fn choice<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Outcome<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .raw(key)
                .map(|v| T::from_str(v, true).map_err(|_| usage(format!("config: {key}: unknown value {v:?}"))))
                .transpose(),
        }
    }

    pub fn switch(&self, flag: bool, key: &str) -> Outcome<bool> {
        match (flag, self.raw(key)) {
            (true, _) => Ok(true),
            (false, None) | (false, Some("false")) => Ok(false),
            (false, Some("true")) => Ok(true),
            (false, Some(v)) => Err(usage(format!("config: {key}: expected true or false, got {v:?}"))),
        }
    }

    pub fn schedule(&self, flag: Option<String>, key: &str) -> Outcome<Option<Vec<f64>>> {
        self.string(flag, key)
            .map(|s| parse_schedule(&s).map_err(|e| usage(format!("--{key}: {e}"))))
            .transpose()
    }

    pub fn path(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.raw(key).map(PathBuf::from))
    }

    /// The effective shared settings.
    pub fn common(&self, common: &Common) -> Outcome<Shared> {
        let dim = self.parsed(common.dim, "dim")?.unwrap_or(2);
        if dim != 2 {
            return Err(peelshape::Error::UnsupportedDimension(dim as usize).into());
        }
        Ok(Shared {
            seed: self.parsed(common.seed, "seed")?.unwrap_or(0),
            out: self.path(common.out.clone(), "out"),
            format: self.choice(common.format, "format")?,
            threads: self.count(common.threads, "threads")?,
        })
    }
}

/// A count given as an integer-valued float, such as `1e5`.
pub fn as_count(v: Option<f64>, key: &str, raw: &str) -> Outcome<usize> {
    match v {
        Some(x) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => Ok(x as usize),
        _ => Err(usage(format!("{key}: not a count: {raw:?}"))),
    }
}

/// Settings every command shares, after flags and config are merged.
pub struct Shared {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl Shared {
    /// The requested format, restricted to what the command can write.
    pub fn format(&self, default: Format, allowed: &[Format]) -> Outcome<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(usage(format!("--format {} is not available for this command", ext(f))))
        }
    }

    /// `--out`, else `$PEELSHAPE_OUT_DIR/<command>.<ext>`, else standard output.
    pub fn sink(&self, command: &str, format: Format) -> Outcome<Sink> {
        if let Some(path) = &self.out {
            return Ok(Sink::File(path.clone()));
        }
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => {
                let dir = PathBuf::from(dir);
                fs::create_dir_all(&dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                Ok(Sink::File(dir.join(format!("{command}.{}", ext(format)))))
            }
            _ => Ok(Sink::Stdout),
        }
    }
}

pub fn ext(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
    }
}

pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    pub fn write(&self, bytes: &[u8]) -> Outcome {
        match self {
            Sink::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(bytes)?;
                out.flush()?;
            }
            Sink::File(path) => write_file(path, bytes)?,
        }
        Ok(())
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// `ball`, `gaussian`, or the path of a density file.
pub fn density(spec: Option<&str>) -> Outcome<RadialDensity> {
    match spec.unwrap_or("ball") {
        "ball" | "uniform_ball" => Ok(RadialDensity::uniform_ball(2)),
        "gaussian" => Ok(RadialDensity::gaussian(2)),
        path => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("--density {path}: {e}")))?;
            let density = parse_density_config(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            if density.dim != 2 {
                return Err(peelshape::Error::UnsupportedDimension(density.dim).into());
            }
            Ok(density)
        }
    }
}

/// Serialize `value` followed by a newline.
pub fn json_bytes<T: serde::Serialize>(value: &T) -> Outcome<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}
