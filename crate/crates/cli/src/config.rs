//! Run configuration: flags, an optional `key=value` file, and the environment.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dioph::contfrac::CFExpansion;
use dioph::numkernel::{PrecisionPolicy, RealConst};
use dioph::rational::parse_rational;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::CliError;

/// Environment variable holding the default precision ceiling in bits.
pub const MAX_BITS_ENV: &str = "DIOPH_MAX_BITS";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSource {
    Pi,
    Sqrt2,
    Golden,
    CfFile(PathBuf),
    DecimalFile(PathBuf),
}

impl FromStr for AlphaSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pi" => Ok(AlphaSource::Pi),
            "sqrt2" => Ok(AlphaSource::Sqrt2),
            "golden" => Ok(AlphaSource::Golden),
            _ => {
                if let Some(p) = s.strip_prefix("cf-file:") {
                    Ok(AlphaSource::CfFile(p.into()))
                } else if let Some(p) = s.strip_prefix("decimal-file:") {
                    Ok(AlphaSource::DecimalFile(p.into()))
                } else {
                    Err(format!(
                        "unknown alpha {s:?} (expected pi, sqrt2, golden, cf-file:PATH or decimal-file:PATH)"
                    ))
                }
            }
        }
    }
}

impl fmt::Display for AlphaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSource::Pi => write!(f, "pi"),
            AlphaSource::Sqrt2 => write!(f, "sqrt2"),
            AlphaSource::Golden => write!(f, "golden"),
            AlphaSource::CfFile(p) => write!(f, "cf-file:{}", p.display()),
            AlphaSource::DecimalFile(p) => write!(f, "decimal-file:{}", p.display()),
        }
    }
}

impl AlphaSource {
    pub fn load(&self) -> Result<RealConst, CliError> {
        match self {
            AlphaSource::Pi => Ok(RealConst::Pi),
            AlphaSource::Sqrt2 => Ok(RealConst::Sqrt(2)),
            AlphaSource::Golden => Ok(RealConst::Golden),
            AlphaSource::CfFile(p) => Ok(RealConst::ContinuedFraction(read_cf(p)?)),
            AlphaSource::DecimalFile(p) => {
                let (center, radius) = parse_decimal_file(&read(p)?)?;
                Ok(RealConst::Decimal { center, radius })
            }
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

pub fn read_cf(path: &Path) -> Result<CFExpansion, CliError> {
    let cf: CFExpansion = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::other(format!("{}: not a continued fraction: {e}", path.display())))?;
    cf.validate()?;
    Ok(cf)
}

/// A decimal value on one line and `error <bound>` on another. The bound is
/// mandatory: digits without one are rejected.
pub fn parse_decimal_file(text: &str) -> Result<(BigRational, BigRational), CliError> {
    let mut value = None;
    let mut error = None;
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(b) = line.strip_prefix("error") {
            error = Some(parse_rational(b.trim_start_matches([' ', '\t', '=', ':']))?);
        } else if value.is_none() {
            value = Some(parse_rational(line)?);
        } else {
            return Err(CliError::other(format!("decimal file: unexpected line {line:?}")));
        }
    }
    let value = value.ok_or_else(|| CliError::other("decimal file: no value"))?;
    let error = error.ok_or_else(|| CliError::other("decimal file: missing `error <bound>` line"))?;
    if error.is_negative() {
        return Err(CliError::other("decimal file: error bound must be nonnegative"));
    }
    Ok((value, error))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?} (expected csv or json)")),
        }
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha_source: AlphaSource,
    pub precision: PrecisionPolicy,
    pub output: Format,
    /// Standard output when absent.
    pub out_path: Option<PathBuf>,
    /// Reserved for commands that generate random test data.
    #[allow(dead_code)]
    pub seed: u64,
}

/// Values given on the command line; unset ones fall back to the config file,
/// then the environment, then built-in defaults.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub alpha: Option<AlphaSource>,
    pub start_bits: Option<u32>,
    pub max_bits: Option<u32>,
    pub target_rel_width: Option<String>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

const KEYS: [&str; 7] = ["alpha", "start_bits", "max_bits", "target_rel_width", "format", "out", "seed"];

pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::other(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::other(format!("config line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_field<T: FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e| CliError::other(format!("config {key}: {e}")))
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<RunConfig, CliError> {
        let file = match &o.config {
            Some(p) => parse_config_file(&read(p)?)?,
            None => HashMap::new(),
        };
        let get = |k: &str| file.get(k).map(String::as_str);
        let alpha_source = match (&o.alpha, get("alpha")) {
            (Some(a), _) => a.clone(),
            (None, Some(v)) => parse_field("alpha", v)?,
            (None, None) => AlphaSource::Pi,
        };
        let defaults = PrecisionPolicy::default();
        let start_bits = match (o.start_bits, get("start_bits")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse_field("start_bits", v)?,
            (None, None) => defaults.start_bits,
        };
        let max_bits = match (o.max_bits, get("max_bits")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse_field("max_bits", v)?,
            (None, None) => match std::env::var(MAX_BITS_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|e| CliError::other(format!("{MAX_BITS_ENV}: {e}")))?,
                Err(_) => defaults.max_bits,
            },
        };
        let target = match (&o.target_rel_width, get("target_rel_width")) {
            (Some(t), _) => parse_rational(t)?,
            (None, Some(v)) => parse_rational(v)?,
            (None, None) => defaults.target_rel_width,
        };
        let precision = PrecisionPolicy::new(start_bits, max_bits, target)?;
        let output = match (o.format, get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => parse_field("format", v)?,
            (None, None) => Format::Json,
        };
        let out_path = o.out.clone().or_else(|| get("out").map(PathBuf::from));
        let seed = match (o.seed, get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => parse_field("seed", v)?,
            (None, None) => 0,
        };
        Ok(RunConfig {
            alpha_source,
            precision,
            output,
            out_path,
            seed,
        })
    }

    /// Write the command's main output to `out_path` or standard output.
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
        match &self.out_path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::other(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dioph::rational::rat;

    #[test]
    fn alpha_sources_parse() {
        assert_eq!("pi".parse::<AlphaSource>().unwrap(), AlphaSource::Pi);
        assert_eq!(
            "cf-file:a.json".parse::<AlphaSource>().unwrap(),
            AlphaSource::CfFile("a.json".into())
        );
        assert!("e".parse::<AlphaSource>().is_err());
        let s = AlphaSource::DecimalFile("x.txt".into());
        assert_eq!(s.to_string().parse::<AlphaSource>().unwrap(), s);
    }

    #[test]
    fn decimal_file_needs_a_bound() {
        let (v, e) = parse_decimal_file("# digits\n3.14159\nerror 1e-5\n").unwrap();
        assert_eq!(v, rat(314159, 100000));
        assert_eq!(e, rat(1, 100000));
        assert!(parse_decimal_file("3.14159\n").is_err());
        assert!(parse_decimal_file("error 1e-5\n").is_err());
    }

    #[test]
    fn config_file_keys() {
        let m = parse_config_file("alpha = golden\n# note\nmax_bits=512\n").unwrap();
        assert_eq!(m["alpha"], "golden");
        assert_eq!(m["max_bits"], "512");
        assert!(parse_config_file("colour=blue").is_err());
        assert!(parse_config_file("alpha").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("dioph-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "alpha=golden\nstart_bits=64\nmax_bits=256\nformat=csv\nseed=7\n").unwrap();
        let mut o = Overrides {
            config: Some(path),
            ..Overrides::default()
        };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!(c.alpha_source, AlphaSource::Golden);
        assert_eq!((c.precision.start_bits, c.precision.max_bits), (64, 256));
        assert_eq!(c.output, Format::Csv);
        assert_eq!(c.seed, 7);
        o.alpha = Some(AlphaSource::Sqrt2);
        o.max_bits = Some(1024);
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!(c.alpha_source, AlphaSource::Sqrt2);
        assert_eq!(c.precision.max_bits, 1024);
        o.start_bits = Some(2048);
        assert!(RunConfig::resolve(&o).is_err());
    }
}
