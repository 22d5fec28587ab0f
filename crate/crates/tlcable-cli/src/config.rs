//! Run settings from defaults, a key-value file, the environment and flags, in rising precedence.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use tlcable::concrete_rep::AlgebraSpec;
use tlcable::suites::{parse_suites, SuiteConfig};

/// Environment variable that overrides the tensor budget of the file and defaults.
pub const BUDGET_ENV: &str = "TLCABLE_BUDGET";

/// Everything `verify` needs: the suite settings plus driver concerns.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub suites: Vec<String>,
    pub output: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: SuiteConfig::default(),
            suites: parse_suites("all").expect("all parses"),
            output: None,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()).min(4),
        }
    }
}

/// Optional overrides, one per settable key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub algebra: Option<String>,
    pub suites: Option<String>,
    pub kmax: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub trials: Option<usize>,
    pub output: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Overrides {
    /// `key = value` lines; `#` starts a comment; blank lines are ignored.
    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut o = Overrides::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}: bad value for {key}", i + 1);
            match key {
                "algebra" => o.algebra = Some(value.into()),
                "suites" => o.suites = Some(value.into()),
                "K" | "k" | "kmax" => o.kmax = Some(value.parse().with_context(ctx)?),
                "tol" => o.tol = Some(value.parse().with_context(ctx)?),
                "seed" => o.seed = Some(value.parse().with_context(ctx)?),
                "budget" => o.budget = Some(value.parse().with_context(ctx)?),
                "trials" => o.trials = Some(value.parse().with_context(ctx)?),
                "output" => o.output = Some(value.into()),
                "jobs" => o.jobs = Some(value.parse().with_context(ctx)?),
                other => bail!("line {}: unknown key {other:?}", i + 1),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse_file_text(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// The budget override from [`BUDGET_ENV`], if set.
    pub fn from_env_value(value: Option<&str>) -> Result<Self> {
        let budget = match value {
            Some(v) => Some(v.trim().parse().with_context(|| format!("{BUDGET_ENV} = {v:?} is not an integer"))?),
            None => None,
        };
        Ok(Overrides { budget, ..Overrides::default() })
    }

    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(a) = &self.algebra {
            cfg.suite.algebra = if a == "default" { None } else { Some(AlgebraSpec::parse(a)?) };
        }
        if let Some(s) = &self.suites {
            cfg.suites = parse_suites(s)?;
        }
        if let Some(k) = self.kmax {
            cfg.suite.kmax = k;
        }
        if let Some(t) = self.tol {
            cfg.suite.tol = t;
        }
        if let Some(s) = self.seed {
            cfg.suite.seed = s;
        }
        if let Some(b) = self.budget {
            cfg.suite.budget = b;
        }
        if let Some(t) = self.trials {
            cfg.suite.trials = t;
        }
        if let Some(o) = &self.output {
            cfg.output = Some(o.clone());
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        Ok(())
    }
}

/// Merges the layers and validates the result.
pub fn resolve(file: Option<&Path>, env: Option<&str>, flags: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = file {
        Overrides::from_file(path)?.apply(&mut cfg)?;
    }
    Overrides::from_env_value(env)?.apply(&mut cfg)?;
    flags.apply(&mut cfg)?;
    if cfg.jobs == 0 {
        bail!("jobs must be at least 1");
    }
    if cfg.suite.trials == 0 {
        bail!("trials must be at least 1");
    }
    cfg.suite.validate()?;
    // Without an explicit algebra the largest default is "2,2".
    if cfg.suite.algebra.is_none() && cfg.suite.budget < 64 {
        bail!("budget {} is below (dim B)^2 = 64 of the default bound algebra", cfg.suite.budget);
    }
    Ok(cfg)
}
