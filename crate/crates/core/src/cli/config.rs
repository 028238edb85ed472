//! Run configuration: a `key = value` file merged with command-line flags.
//!
//! Keys are the long flag names (`lambda`, `p`, `t-min`, ...). Flags win over
//! the file. Every field is validated before any computation and all problems
//! are reported together.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::geometry::{RadialProfile, Shape};

/// Where a setting came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    File { path: PathBuf, line: usize },
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag => write!(f, "command line"),
        }
    }
}

/// Raw settings before typing.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    values: BTreeMap<String, (String, Origin)>,
}

/// Keys accepted in a config file.
pub const KNOWN_KEYS: &[&str] = &[
    "profile", "lambda", "p", "a", "eps", "shape", "width", "m", "path", "cap", "t-min", "t-max", "samples", "t",
    "t-star", "route", "out", "format", "kind", "check", "tol",
];

impl Settings {
    /// Parse a config file; problems are appended to `errors`.
    pub fn from_file(path: &Path, errors: &mut Vec<String>) -> Self {
        let mut out = Self::default();
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                errors.push(format!("{}: cannot read config: {e}", path.display()));
                return out;
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = Origin::File { path: path.to_path_buf(), line: i + 1 };
            let Some((k, v)) = line.split_once('=') else {
                errors.push(format!("{origin}: expected 'key = value', got '{line}'"));
                continue;
            };
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                errors.push(format!("{origin}: unknown key '{key}'"));
                continue;
            }
            out.values.insert(key, (v.trim().to_string(), origin));
        }
        out
    }

    pub fn set_flag(&mut self, key: &str, value: Option<&str>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), (v.to_string(), Origin::Flag));
        }
    }

    fn raw(&self, key: &str) -> Option<&(String, Origin)> {
        self.values.get(key)
    }
}

/// Typed access that records every failure instead of stopping at the first.
pub struct Reader<'a> {
    settings: &'a Settings,
    pub errors: Vec<String>,
}

impl<'a> Reader<'a> {
    pub fn new(settings: &'a Settings, errors: Vec<String>) -> Self {
        Self { settings, errors }
    }

    fn fail(&mut self, key: &str, origin: &Origin, msg: String) {
        self.errors.push(format!("{origin}: field '{key}': {msg}"));
    }

    pub fn string(&mut self, key: &str) -> Option<String> {
        self.settings.raw(key).map(|(v, _)| v.clone())
    }

    pub fn f64_opt(&mut self, key: &str) -> Option<f64> {
        let (v, origin) = self.settings.raw(key)?;
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                self.fail(key, origin, format!("expected a finite number, got '{v}'"));
                None
            }
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> f64 {
        if self.settings.raw(key).is_none() {
            return default;
        }
        self.f64_opt(key).unwrap_or(default)
    }

    pub fn f64_required(&mut self, key: &str) -> f64 {
        if self.settings.raw(key).is_none() {
            self.errors.push(format!("field '{key}' is required"));
            return f64::NAN;
        }
        self.f64_opt(key).unwrap_or(f64::NAN)
    }

    /// Comma-separated list of numbers.
    pub fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let (v, origin) = self.settings.raw(key)?;
        let mut out = Vec::new();
        for part in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part.parse::<f64>() {
                Ok(x) if x.is_finite() => out.push(x),
                _ => {
                    self.fail(key, origin, format!("'{part}' is not a finite number"));
                    return None;
                }
            }
        }
        if out.is_empty() {
            self.fail(key, origin, "empty list".into());
            return None;
        }
        Some(out)
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> usize {
        let Some((v, origin)) = self.settings.raw(key) else { return default };
        match v.parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                self.fail(key, origin, format!("expected a nonnegative integer, got '{v}'"));
                default
            }
        }
    }

    pub fn choice(&mut self, key: &str, options: &[&str], default: &str) -> String {
        let Some((v, origin)) = self.settings.raw(key) else { return default.to_string() };
        if options.contains(&v.as_str()) {
            v.clone()
        } else {
            self.fail(key, origin, format!("expected one of {}, got '{v}'", options.join(", ")));
            default.to_string()
        }
    }

    /// Check that a value obeys a predicate, reporting `msg` otherwise.
    pub fn require(&mut self, ok: bool, key: &str, msg: &str) {
        if !ok {
            let origin = self.settings.raw(key).map(|(_, o)| o.to_string()).unwrap_or_else(|| "defaults".into());
            self.errors.push(format!("{origin}: field '{key}': {msg}"));
        }
    }

    pub fn finish<T>(self, value: T) -> std::result::Result<T, Vec<String>> {
        if self.errors.is_empty() {
            Ok(value)
        } else {
            Err(self.errors)
        }
    }
}

/// Profile description as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    DeSitter,
    ConstantCurvature { a: f64 },
    Perturbed { eps: f64, shape: Shape },
    Sds { m: f64 },
    Tabulated { path: PathBuf },
}

pub const PROFILE_KINDS: &[&str] = &["de-sitter", "constant-curvature", "perturbed", "sds", "tabulated"];

impl ProfileSpec {
    pub fn read(r: &mut Reader<'_>) -> Option<Self> {
        let kind = r.choice("profile", PROFILE_KINDS, "de-sitter");
        let spec = match kind.as_str() {
            "de-sitter" => ProfileSpec::DeSitter,
            "constant-curvature" => ProfileSpec::ConstantCurvature { a: r.f64_required("a") },
            "perturbed" => {
                let eps = r.f64_required("eps");
                let shape = match r.choice("shape", &["quadratic", "quartic", "bump"], "quadratic").as_str() {
                    "quartic" => Shape::Quartic,
                    "bump" => Shape::Bump { width: r.f64_or("width", 1.0) },
                    _ => Shape::Quadratic,
                };
                ProfileSpec::Perturbed { eps, shape }
            }
            "sds" => ProfileSpec::Sds { m: r.f64_required("m") },
            _ => match r.string("path") {
                Some(p) => ProfileSpec::Tabulated { path: PathBuf::from(p) },
                None => {
                    r.errors.push("field 'path' is required for a tabulated profile".into());
                    return None;
                }
            },
        };
        Some(spec)
    }

    pub fn build(&self, lambda: f64, cap: Option<f64>) -> crate::Result<RadialProfile> {
        let prof = match self {
            ProfileSpec::DeSitter => RadialProfile::de_sitter(lambda)?,
            ProfileSpec::ConstantCurvature { a } => RadialProfile::constant_curvature(*a)?,
            ProfileSpec::Perturbed { eps, shape } => RadialProfile::perturbed(lambda, *eps, *shape)?,
            ProfileSpec::Sds { m } => RadialProfile::sds_capped(lambda, *m)?,
            ProfileSpec::Tabulated { path } => RadialProfile::tabulated_from_csv(path)?,
        };
        match cap {
            Some(c) => prof.with_cap(c),
            None => Ok(prof),
        }
    }
}

/// Validated configuration shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: Option<ProfileSpec>,
    pub cap: Option<f64>,
    pub lambdas: Vec<f64>,
    pub ps: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn read(r: &mut Reader<'_>, default_ps: &[f64]) -> Self {
        let profile = ProfileSpec::read(r);
        let cap = r.f64_opt("cap");
        let lambdas = r.list("lambda").unwrap_or_else(|| vec![3.0]);
        let ps = r.list("p").unwrap_or_else(|| default_ps.to_vec());
        let t_min = r.f64_or("t-min", -10.0);
        let t_max = r.f64_or("t-max", 10.0);
        let samples = r.usize_or("samples", 41);
        r.require(ps.iter().all(|&p| p > 1.0 && p < 3.0), "p", "every p must lie in (1, 3)");
        r.require(t_min < t_max, "t-max", "t-max must exceed t-min");
        r.require(samples >= 2, "samples", "need at least 2 samples");
        let out = r.string("out").map(PathBuf::from);
        Self { profile, cap, lambdas, ps, t_min, t_max, samples, out }
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n).map(|i| self.t_min + (self.t_max - self.t_min) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn lambda(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn p(&self) -> f64 {
        self.ps[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn file_then_flags_and_collected_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# comment\nlambda = 0.3\np = 1.5, 2\nsamples = x\nbogus = 1\nt-min = 5\nt-max = 1").unwrap();
        let mut errors = Vec::new();
        let mut s = Settings::from_file(f.path(), &mut errors);
        s.set_flag("lambda", Some("3"));
        let mut r = Reader::new(&s, errors);
        let cfg = RunConfig::read(&mut r, &[2.0]);
        assert_eq!(cfg.lambdas, vec![3.0]);
        assert_eq!(cfg.ps, vec![1.5, 2.0]);
        let errs = r.finish(()).unwrap_err();
        assert_eq!(errs.len(), 3, "{errs:?}");
        assert!(errs.iter().any(|e| e.contains(":5") && e.contains("bogus")));
        assert!(errs.iter().any(|e| e.contains(":4") && e.contains("samples")));
        assert!(errs.iter().any(|e| e.contains("t-max")));
    }
}
