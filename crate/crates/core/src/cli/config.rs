use crate::characters::Character;
use crate::error::{Error, Result};
use crate::euler_sums::{CoefficientVector, SumSpec};
use crate::number_core::PrimeTable;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSelector {
    All,
    NonPrincipal,
    Indices(Vec<usize>),
}

impl FromStr for CharacterSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(Self::All),
            "non-principal" => Ok(Self::NonPrincipal),
            list => {
                let idx = list
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Config(format!("bad character selector {s:?}")))?;
                if idx.is_empty() {
                    return config_err("empty character list");
                }
                Ok(Self::Indices(idx))
            }
        }
    }
}

impl fmt::Display for CharacterSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::All => f.write_str("all"),
            Self::NonPrincipal => f.write_str("non-principal"),
            Self::Indices(v) => {
                let parts: Vec<String> = v.iter().map(usize::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl CharacterSelector {
    pub fn select(&self, group: &[Character]) -> Result<Vec<Character>> {
        match self {
            Self::All => Ok(group.to_vec()),
            Self::NonPrincipal => Ok(group.iter().filter(|c| !c.is_principal()).cloned().collect()),
            Self::Indices(idx) => idx
                .iter()
                .map(|&i| {
                    group.get(i).cloned().ok_or_else(|| {
                        Error::Config(format!("character index {i} out of range (group has {} members)", group.len()))
                    })
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSelector {
    Ones,
    RandomComplex,
    RandomReal,
    File(PathBuf),
}

impl FromStr for CoefficientSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "ones" => Self::Ones,
            "random-complex" => Self::RandomComplex,
            "random-real" => Self::RandomReal,
            "" => return config_err("empty coefficient selector"),
            path => Self::File(PathBuf::from(path)),
        })
    }
}

impl fmt::Display for CoefficientSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ones => f.write_str("ones"),
            Self::RandomComplex => f.write_str("random-complex"),
            Self::RandomReal => f.write_str("random-real"),
            Self::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl CoefficientSelector {
    /// Coefficients for trial seed `seed`.
    pub fn draw(&self, table: &PrimeTable, d: u64, x: u64, seed: u64) -> Result<CoefficientVector> {
        match self {
            Self::Ones => CoefficientVector::ones(table, d, x),
            Self::RandomComplex => CoefficientVector::random_complex(table, d, x, &mut ChaCha8Rng::seed_from_u64(seed)),
            Self::RandomReal => CoefficientVector::random_real(table, d, x, &mut ChaCha8Rng::seed_from_u64(seed)),
            Self::File(path) => {
                let pairs = read_coefficient_file(path)?;
                CoefficientVector::from_pairs(table, d, x, &pairs).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
            }
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Self::RandomComplex | Self::RandomReal)
    }
}

/// Reads `p re im` lines; blank lines and `#` comments are skipped.
pub fn read_coefficient_file(path: &Path) -> Result<Vec<(u64, Complex64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read coefficient file {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Config(format!("{}:{}: expected \"p re im\"", path.display(), n + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let p = fields[0].parse::<u64>().map_err(|_| bad())?;
        let re = fields[1].parse::<f64>().map_err(|_| bad())?;
        let im = fields[2].parse::<f64>().map_err(|_| bad())?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(bad());
        }
        out.push((p, Complex64::new(re, im)));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => config_err(format!("unknown format {other:?}")),
        }
    }
}

fn display<S: Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Fully resolved experiment settings, echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub d: u64,
    pub x: u64,
    pub b_exponent: f64,
    #[serde(serialize_with = "display")]
    pub characters: CharacterSelector,
    #[serde(serialize_with = "display")]
    pub coefficients: CoefficientSelector,
    pub trials: usize,
    pub seed: u64,
    pub c_override: Option<f64>,
    pub sigma_max: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > self.x {
            return config_err(format!("need 1 ≤ d ≤ x, got d = {}, x = {}", self.d, self.x));
        }
        if self.trials == 0 {
            return config_err("trials must be at least 1");
        }
        if !(self.b_exponent > 0.0 && self.b_exponent.is_finite()) {
            return config_err(format!("b must be positive, got {}", self.b_exponent));
        }
        if let Some(c) = self.c_override {
            if !(c >= 0.0 && c.is_finite()) {
                return config_err(format!("c must be nonnegative, got {c}"));
            }
        }
        if let Some(s) = self.sigma_max {
            if !(s >= 1.0 && s.is_finite()) {
                return config_err(format!("sigma-max must be at least 1, got {s}"));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> Result<SumSpec> {
        let spec = SumSpec::new(self.d, self.x, self.b_exponent)?;
        match self.sigma_max {
            Some(s) => spec.with_sigma_max(s),
            None => Ok(spec),
        }
    }

    /// Seed of trial `i`.
    pub fn trial_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}

/// Values from a `key = value` file, keyed by flag name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub entries: Vec<(String, String)>,
}

impl FileConfig {
    pub const KEYS: [&'static str; 11] = ["d", "x", "b", "chars", "coeffs", "trials", "seed", "c", "sigma-max", "out", "format"];

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return config_err(format!("config line {}: expected key=value", n + 1));
            };
            let key = k.trim().replace('_', "-");
            if !Self::KEYS.contains(&key.as_str()) {
                return config_err(format!("config line {}: unknown key {key:?}", n + 1));
            }
            entries.retain(|(e, _)| *e != key);
            entries.push((key, v.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.iter().find(|(k, _)| k == key) {
            None => Ok(None),
            Some((_, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::Config(format!("config key {key}: cannot parse {v:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::character_group;

    #[test]
    fn selectors_parse_and_print() {
        for s in ["all", "non-principal", "1,3,4"] {
            assert_eq!(s.parse::<CharacterSelector>().unwrap().to_string(), s);
        }
        assert!("1,x".parse::<CharacterSelector>().is_err());
        for s in ["ones", "random-complex", "random-real", "coeffs.txt"] {
            assert_eq!(s.parse::<CoefficientSelector>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn selection_against_group() {
        let g = character_group(5).unwrap();
        assert_eq!(CharacterSelector::All.select(&g).unwrap().len(), 4);
        assert_eq!(CharacterSelector::NonPrincipal.select(&g).unwrap().len(), 3);
        assert!(CharacterSelector::Indices(vec![4]).select(&g).is_err());
    }

    #[test]
    fn file_config() {
        let f = FileConfig::parse("d = 7\n# comment\nsigma_max=3.5\nx=100\nx=200\n").unwrap();
        assert_eq!(f.get::<u64>("d").unwrap(), Some(7));
        assert_eq!(f.get::<u64>("x").unwrap(), Some(200));
        assert_eq!(f.get::<f64>("sigma-max").unwrap(), Some(3.5));
        assert_eq!(f.get::<u64>("seed").unwrap(), None);
        assert!(FileConfig::parse("bogus=1").is_err());
        assert!(FileConfig::parse("d 5").is_err());
        assert!(FileConfig::parse("d=five").unwrap().get::<u64>("d").is_err());
    }

    #[test]
    fn coefficient_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        std::fs::write(&path, "7 1.0 0.5\n# skip\n\n11 -2 0\n").unwrap();
        let pairs = read_coefficient_file(&path).unwrap();
        assert_eq!(pairs, vec![(7, Complex64::new(1.0, 0.5)), (11, Complex64::new(-2.0, 0.0))]);
        std::fs::write(&path, "7 1.0\n").unwrap();
        assert!(read_coefficient_file(&path).is_err());
        assert!(read_coefficient_file(&dir.path().join("missing")).is_err());
    }
}
