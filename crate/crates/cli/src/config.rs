use std::path::{Path, PathBuf};

use ipro_core::engine::{Budget, SelectionStrategy};
use ipro_core::oracle::DEFAULT_RHO;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Overrides `output_dir` from the config file.
pub const OUTPUT_DIR_ENV: &str = "IPRO_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvironmentConfig {
    /// Built-in Deep Sea Treasure.
    Dst,
    /// Tabular MOMDP document (TOML, or JSON by extension).
    Momdp { path: PathBuf },
    /// Explicit feasible set: CSV with a header row, or a JSON array of
    /// vectors.
    Vectors { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OracleConfig {
    ExactWeak,
    ExactApprox {
        /// Accept τ = 0, which turns the success test into strict dominance.
        #[serde(default)]
        allow_zero_tolerance: bool,
    },
    Noisy {
        p_fault: f64,
        /// Wrap the approximate oracle instead of the weak one.
        #[serde(default)]
        approximate: bool,
    },
    External {
        command: String,
    },
}

impl OracleConfig {
    /// Parses the `--oracle` flag: `exact-weak`, `exact-approx`,
    /// `noisy:<p>` or `external:<command>`.
    pub fn from_flag(flag: &str) -> Result<Self, CliError> {
        if let Some(cmd) = flag.strip_prefix("external:") {
            return Ok(OracleConfig::External {
                command: cmd.to_string(),
            });
        }
        if let Some(p) = flag.strip_prefix("noisy:") {
            let p_fault = p
                .parse()
                .map_err(|_| CliError::Config(format!("bad fault probability `{p}`")))?;
            return Ok(OracleConfig::Noisy {
                p_fault,
                approximate: false,
            });
        }
        match flag {
            "exact-weak" => Ok(OracleConfig::ExactWeak),
            "exact-approx" => Ok(OracleConfig::ExactApprox {
                allow_zero_tolerance: false,
            }),
            other => Err(CliError::Config(format!("unknown oracle `{other}`"))),
        }
    }
}

fn default_rho() -> f64 {
    DEFAULT_RHO
}

fn default_output() -> PathBuf {
    PathBuf::from("ipro-out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub environment: EnvironmentConfig,
    pub oracle: OracleConfig,
    #[serde(default)]
    pub tolerance: f64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default)]
    pub strategy: SelectionStrategy,
    #[serde(default)]
    pub seed: u64,
    /// Maximum oracle queries; omitted means the worst-case count for τ.
    #[serde(default)]
    pub budget: Option<u64>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Use the rectangle-queue search when there are two objectives.
    #[serde(default)]
    pub use_2d: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. Relative paths inside it resolve against the
    /// file's directory; `IPRO_OUTPUT_DIR` replaces `output_dir`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        match &mut cfg.environment {
            EnvironmentConfig::Momdp { path } | EnvironmentConfig::Vectors { path } => {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
            EnvironmentConfig::Dst => {}
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            cfg.output_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !self.tolerance.is_finite() || self.tolerance < 0.0 {
            return bad(format!("tolerance must be finite and non-negative, got {}", self.tolerance));
        }
        if !self.rho.is_finite() || self.rho < 0.0 {
            return bad(format!("rho must be finite and non-negative, got {}", self.rho));
        }
        if self.budget == Some(0) {
            return bad("budget must be at least 1".into());
        }
        if self.budget.is_none() && self.tolerance == 0.0 {
            return bad("a budget is required when tolerance is 0".into());
        }
        match &self.oracle {
            OracleConfig::ExactApprox {
                allow_zero_tolerance,
            } if self.tolerance == 0.0 && !allow_zero_tolerance => {
                bad("exact-approx needs tolerance > 0 (or allow_zero_tolerance = true)".into())
            }
            OracleConfig::Noisy { p_fault, .. } if !(0.0..1.0).contains(p_fault) => {
                bad(format!("p_fault must lie in [0, 1), got {p_fault}"))
            }
            OracleConfig::External { command } if command.trim().is_empty() => {
                bad("external oracle needs a command".into())
            }
            _ => Ok(()),
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget.map_or(Budget::Auto, Budget::Queries)
    }
}
