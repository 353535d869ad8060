use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use signlab_core::{RootFamily, SimpleSubset, CATALOG_ORDER_BOUND};

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "SIGNLAB_CACHE_DIR";

/// A rejected configuration. Reported with exit code 2 before any artifact is written.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Gl,
    Sl,
}

/// Flags shared by every subcommand. Each one may also come from the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Config file of `key = value` lines mirroring these flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Matrix group family
    #[arg(long, value_enum, global = true)]
    pub group: Option<GroupKind>,
    /// Matrix size
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Field order (a prime power)
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// transpose-inverse, identity, inner:FILE or composed:FILE
    #[arg(long, global = true)]
    pub involution: Option<String>,
    /// Simple-root subset for descent, e.g. `1,2`; empty string for ∅
    #[arg(long, global = true)]
    pub theta_subset: Option<String>,
    /// Matrix file with the shifting element h
    #[arg(long, global = true)]
    pub h: Option<PathBuf>,
    /// Number of seeded shift triples when no h is given
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Root datum family (A or B)
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Root datum rank
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Lattice involution: neg-id or a matrix file
    #[arg(long, global = true)]
    pub theta: Option<String>,
    /// Parabolic subset of simple roots, e.g. `1,2`
    #[arg(long, global = true)]
    pub parabolic: Option<String>,
    /// Chamber samples per fixture
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Cache directory for groups and character tables
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Worker threads for suites
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bound on group orders
    #[arg(long, global = true)]
    pub cap: Option<u64>,
}

/// The config file format: every flag, by its long name with `_` for `-`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    group: Option<GroupKind>,
    n: Option<usize>,
    q: Option<u32>,
    involution: Option<String>,
    theta_subset: Option<String>,
    h: Option<PathBuf>,
    count: Option<usize>,
    family: Option<String>,
    rank: Option<usize>,
    theta: Option<String>,
    parabolic: Option<String>,
    samples: Option<usize>,
    cache: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<usize>,
    seed: Option<u64>,
    cap: Option<u64>,
}

/// Validated settings. Flags override the config file; the environment
/// overrides the cache directory from either.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupKind,
    pub n: Option<usize>,
    pub q: Option<u32>,
    pub involution: Option<String>,
    pub theta_subset: Option<SimpleSubset>,
    pub h: Option<PathBuf>,
    pub count: usize,
    pub family: Option<RootFamily>,
    pub rank: Option<usize>,
    pub theta: Option<String>,
    pub parabolic: Option<SimpleSubset>,
    pub samples: usize,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub cap: u64,
}

fn read_file_config(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_error(format!("config {}: {e}", path.display())))
}

fn parse_subset(s: &str, what: &str) -> anyhow::Result<SimpleSubset> {
    s.parse()
        .map_err(|e| config_error(format!("--{what}: {e}")))
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> anyhow::Result<Self> {
        let file = match &opts.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        macro_rules! pick {
            ($f:ident) => {
                opts.$f.clone().or(file.$f.clone())
            };
        }
        let family = pick!(family)
            .map(|f| {
                f.parse::<RootFamily>()
                    .map_err(|e| config_error(format!("--family: {e}")))
            })
            .transpose()?;
        let threads = pick!(threads).unwrap_or(1);
        if threads == 0 {
            return Err(config_error("--threads must be at least 1"));
        }
        let cache = std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or(pick!(cache));
        Ok(RunConfig {
            group: pick!(group).unwrap_or(GroupKind::Gl),
            n: pick!(n),
            q: pick!(q),
            involution: pick!(involution),
            theta_subset: pick!(theta_subset)
                .map(|s| parse_subset(&s, "theta-subset"))
                .transpose()?,
            h: pick!(h),
            count: pick!(count).unwrap_or(50),
            family,
            rank: pick!(rank),
            theta: pick!(theta),
            parabolic: pick!(parabolic)
                .map(|s| parse_subset(&s, "parabolic"))
                .transpose()?,
            samples: pick!(samples).unwrap_or(1000),
            cache,
            out: pick!(out),
            format: pick!(format).unwrap_or_default(),
            threads,
            seed: pick!(seed).unwrap_or(0),
            cap: pick!(cap).unwrap_or(CATALOG_ORDER_BOUND),
        })
    }

    /// `(n, q)`, required by every `finite` subcommand.
    pub fn group_shape(&self) -> anyhow::Result<(usize, u32)> {
        match (self.n, self.q) {
            (Some(n), Some(q)) => Ok((n, q)),
            _ => Err(config_error("finite commands need both --n and --q")),
        }
    }

    /// Rejects flags that the subcommand would silently ignore.
    pub fn forbid(&self, command: &str, flags: &[(&str, bool)]) -> anyhow::Result<()> {
        match flags.iter().find(|(_, set)| *set) {
            Some((name, _)) => Err(config_error(format!(
                "--{name} is not valid for `{command}`"
            ))),
            None => Ok(()),
        }
    }

    pub fn require_format(&self, command: &str, allowed: &[Format]) -> anyhow::Result<()> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(config_error(
                format!(
                    "--format {:?} is not available for `{command}`",
                    self.format
                )
                .to_lowercase(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("n = 2\nbogus = 1\n").is_err());
        let c: FileConfig =
            toml::from_str("n = 2\nq = 3\ninvolution = \"identity\"\nformat = \"csv\"\n").unwrap();
        assert_eq!((c.n, c.q), (Some(2), Some(3)));
        assert_eq!(c.format, Some(Format::Csv));
    }

    #[test]
    fn zero_threads_is_a_config_error() {
        let opts = Options {
            threads: Some(0),
            ..Options::default()
        };
        let err = RunConfig::resolve(&opts).unwrap_err();
        assert!(err.downcast_ref::<ConfigError>().is_some());
    }
}
