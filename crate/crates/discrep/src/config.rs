//! Precision profiles, argument value types and the TOML config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use discrep_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::cli::{CountArgs, FitArgs, GaussArgs, MellinArgs, SeriesArgs, VerifyArgs};
use crate::error::{HarnessError, Result};

/// Environment variable holding the default profile.
pub const PROFILE_ENV: &str = "DISCREP_PROFILE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    #[default]
    Fast,
    Oracle,
}

/// Truncation and tolerance defaults attached to a profile. Explicit flags win.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Precision {
    pub quad_rel_tol: f64,
    pub series_terms: u64,
    pub gauss_terms: u64,
    pub eps: f64,
}

impl Profile {
    pub fn precision(self) -> Precision {
        match self {
            Profile::Fast => Precision {
                quad_rel_tol: 1e-9,
                series_terms: 20_000,
                gauss_terms: 2_000,
                eps: 1e-10,
            },
            Profile::Oracle => Precision {
                quad_rel_tol: 1e-12,
                series_terms: 100_000,
                gauss_terms: 10_000,
                eps: 1e-13,
            },
        }
    }

    /// Flag, then config file, then environment, then `fast`.
    pub fn resolve(flag: Option<Profile>, file: Option<Profile>) -> Result<Profile> {
        if let Some(p) = flag.or(file) {
            return Ok(p);
        }
        match std::env::var(PROFILE_ENV) {
            Ok(v) if !v.is_empty() => Profile::from_str(&v, true)
                .map_err(|_| HarnessError::usage(format!("{PROFILE_ENV}={v} is not a profile"))),
            _ => Ok(Profile::default()),
        }
    }
}

/// A complex number written as `1.5`, `0.3+0.2i`, `-2i` or `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarOrText", into = "String")]
pub struct ComplexArg(pub Complex64);

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarOrText {
    Int(i64),
    Float(f64),
    Text(String),
}

impl TryFrom<ScalarOrText> for ComplexArg {
    type Error = String;

    fn try_from(v: ScalarOrText) -> std::result::Result<Self, String> {
        match v {
            ScalarOrText::Int(i) => Ok(ComplexArg(Complex64::new(i as f64, 0.0))),
            ScalarOrText::Float(f) => Ok(ComplexArg(Complex64::new(f, 0.0))),
            ScalarOrText::Text(t) => t.parse(),
        }
    }
}

impl From<ComplexArg> for String {
    fn from(c: ComplexArg) -> String {
        c.to_string()
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Complex64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re:?}")
        } else if im < 0.0 {
            write!(f, "{re:?}-{:?}i", -im)
        } else {
            write!(f, "{re:?}+{im:?}i")
        }
    }
}

fn parse_real(t: &str) -> std::result::Result<f64, String> {
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{t}` is not a finite number"))
}

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(ComplexArg(Complex64::new(parse_real(&t)?, 0.0)));
        };
        // split at the last sign that is not the leading one or part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(j) => (parse_real(&body[..j])?, &body[j..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        Ok(ComplexArg(Complex64::new(re, im)))
    }
}

/// Smoothing scales, written `2^a..2^b` (inclusive powers of two) or as a
/// comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    text: String,
    values: Vec<f64>,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.text
    }
}

impl TryFrom<String> for Grid {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let t = text.trim();
        let values = if let Some((lo, hi)) = t.split_once("..") {
            let exp = |p: &str| -> std::result::Result<i32, String> {
                p.trim()
                    .strip_prefix("2^")
                    .and_then(|e| e.parse().ok())
                    .ok_or_else(|| format!("`{p}` is not of the form 2^k"))
            };
            let (a, b) = (exp(lo)?, exp(hi)?);
            if a > b || !(0..=24).contains(&a) || !(0..=24).contains(&b) {
                return Err(format!(
                    "grid exponents must satisfy 0 <= a <= b <= 24, got {a}..{b}"
                ));
            }
            (a..=b).map(|e| 2f64.powi(e)).collect()
        } else {
            t.split(',')
                .map(|p| parse_real(p.trim()))
                .collect::<std::result::Result<Vec<_>, _>>()?
        };
        if values.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Grid {
            text: t.to_string(),
            values,
        })
    }
}

/// The optional config file: global keys plus one table per subcommand.
/// Unknown keys are rejected so typos surface as usage errors.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub profile: Option<Profile>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub count: CountArgs,
    #[serde(default)]
    pub series: SeriesArgs,
    #[serde(default, rename = "mellin-check")]
    pub mellin_check: MellinArgs,
    #[serde(default, rename = "gauss-check")]
    pub gauss_check: GaussArgs,
    #[serde(default)]
    pub fit: FitArgs,
    #[serde(default, rename = "verify-all")]
    pub verify_all: VerifyArgs,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config {
            path: PathBuf::from(path),
            message: e.to_string(),
        })
    }
}
