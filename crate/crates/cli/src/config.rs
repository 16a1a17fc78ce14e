use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quartic_core::reduce::Precision;
use quartic_core::BetaClass;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "QUARTIC_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format '{other}' (csv|json)")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub fn parse_precision(s: &str) -> Result<Precision, String> {
    match s.trim() {
        "double" | "fast" => Ok(Precision::Double),
        "compensated" | "double-double" => Ok(Precision::Compensated),
        other => Err(format!("unknown precision '{other}' (double|compensated)")),
    }
}

/// Settings shared by every subcommand. Each field is optional so that a
/// config file and the command line can be layered.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub x_max: Option<f64>,
    pub ell: Option<i64>,
    pub beta: Option<BetaClass>,
    pub u: Option<f64>,
    pub n_max: Option<u64>,
    pub threads: Option<usize>,
    pub precision: Option<Precision>,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
}

fn positive_f64(key: &str, v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("{key}: '{v}' is not a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("{key} must be positive, got {v}"))
    }
}

fn positive_int<T: FromStr + PartialOrd + Default>(key: &str, v: &str) -> Result<T, String> {
    let x: T = v.parse().map_err(|_| format!("{key}: '{v}' is not an integer"))?;
    if x > T::default() {
        Ok(x)
    } else {
        Err(format!("{key} must be positive, got {v}"))
    }
}

impl RunConfig {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut c = RunConfig::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let (key, value) = (key.trim(), value.trim());
            c.set(key, value).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "x_max" => self.x_max = Some(positive_f64(key, v)?),
            "ell" => self.ell = Some(v.parse().map_err(|_| format!("ell: '{v}' is not an integer"))?),
            "beta" => self.beta = Some(v.parse()?),
            "u" => self.u = Some(positive_f64(key, v)?),
            "n_max" => self.n_max = Some(positive_int(key, v)?),
            "threads" => self.threads = Some(positive_int(key, v)?),
            "precision" => self.precision = Some(parse_precision(v)?),
            "cache_dir" => self.cache_dir = Some(PathBuf::from(v)),
            "output" => self.output = Some(PathBuf::from(v)),
            "format" => self.format = Some(v.parse()?),
            "seed" => self.seed = Some(v.parse().map_err(|_| format!("seed: '{v}' is not an integer"))?),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// `self` with every field that `over` sets replaced.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            x_max: over.x_max.or(self.x_max),
            ell: over.ell.or(self.ell),
            beta: over.beta.or(self.beta),
            u: over.u.or(self.u),
            n_max: over.n_max.or(self.n_max),
            threads: over.threads.or(self.threads),
            precision: over.precision.or(self.precision),
            cache_dir: over.cache_dir.or(self.cache_dir),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
            seed: over.seed.or(self.seed),
        }
    }

    /// Flag values are validated like file values.
    pub fn validate(&self) -> Result<(), String> {
        let pos = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(format!("{name} must be positive")),
            _ => Ok(()),
        };
        pos("x", self.x_max)?;
        pos("u", self.u)?;
        if self.n_max == Some(0) {
            return Err("n_max must be positive".into());
        }
        if self.threads == Some(0) {
            return Err("threads must be positive".into());
        }
        Ok(())
    }

    /// Cache directory from the config, else the environment.
    pub fn resolved_cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    /// Explicit format, else the output file's extension, else CSV.
    pub fn resolved_format(&self) -> OutputFormat {
        self.format.unwrap_or_else(|| match self.output.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_layers() {
        let file = RunConfig::parse("# scan\nx_max = 1e5\nbeta=1+l3\nell = 2 # twist\nthreads=2\nprecision = compensated\n").unwrap();
        assert_eq!(file.x_max, Some(1e5));
        assert_eq!(file.beta, Some(BetaClass::OnePlusLambda3));
        assert_eq!(file.precision, Some(Precision::Compensated));
        let flags = RunConfig { ell: Some(0), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.ell, Some(0));
        assert_eq!(merged.threads, Some(2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("colour = blue").unwrap_err().contains("unknown key"));
        assert!(RunConfig::parse("x_max = -3").is_err());
        assert!(RunConfig::parse("n_max = 0").is_err());
        assert!(RunConfig::parse("beta = 3").is_err());
        assert!(RunConfig::parse("just words").is_err());
    }

    #[test]
    fn format_from_extension() {
        let c = RunConfig { output: Some("rows.json".into()), ..Default::default() };
        assert_eq!(c.resolved_format(), OutputFormat::Json);
        assert_eq!(RunConfig::default().resolved_format(), OutputFormat::Csv);
    }
}
