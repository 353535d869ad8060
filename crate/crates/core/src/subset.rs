use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset Θ of the simple roots, by 1-based position in the simple system.
///
/// For `GL_n` and `SL_n` index `i` stands for `ε_i - ε_{i+1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleSubset(BTreeSet<usize>);

impl SimpleSubset {
    pub fn empty() -> Self {
        SimpleSubset(BTreeSet::new())
    }

    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        SimpleSubset(indices.into_iter().collect())
    }

    /// All of `{1, .., rank}`.
    pub fn full(rank: usize) -> Self {
        SimpleSubset((1..=rank).collect())
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fails unless every index lies in `1..=rank`.
    pub fn validate(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > rank) {
            Some(i) => Err(Error::InvalidSubset(format!(
                "index {i} outside 1..={rank}"
            ))),
            None => Ok(()),
        }
    }

    /// Every subset of `{1, .., rank}`, ordered by size then lexicographically.
    pub fn all(rank: usize) -> Vec<SimpleSubset> {
        let mut out: Vec<SimpleSubset> = (0u32..1 << rank)
            .map(|mask| SimpleSubset((1..=rank).filter(|i| mask >> (i - 1) & 1 == 1).collect()))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
        out
    }

    /// Block decomposition of `1..=n` induced by Θ: `block[r]` is the block of row `r` (0-based).
    pub fn blocks(&self, n: usize) -> Vec<usize> {
        let mut block = vec![0; n];
        for r in 1..n {
            block[r] = if self.contains(r) {
                block[r - 1]
            } else {
                block[r - 1] + 1
            };
        }
        block
    }
}

impl fmt::Display for SimpleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for SimpleSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(SimpleSubset::empty());
        }
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidSubset(format!("cannot parse {part:?}")))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(SimpleSubset)
    }
}
