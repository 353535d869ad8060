use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::SimpleSubset;

/// Named subgroups recorded on a family group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupTag {
    Borel,
    Torus,
    Center,
    Parabolic(SimpleSubset),
    Levi(SimpleSubset),
    Unipotent(SimpleSubset),
    OppositeUnipotent(SimpleSubset),
}

impl fmt::Display for SubgroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupTag::Borel => write!(f, "borel"),
            SubgroupTag::Torus => write!(f, "torus"),
            SubgroupTag::Center => write!(f, "center"),
            SubgroupTag::Parabolic(t) => write!(f, "parabolic:{t}"),
            SubgroupTag::Levi(t) => write!(f, "levi:{t}"),
            SubgroupTag::Unipotent(t) => write!(f, "unipotent:{t}"),
            SubgroupTag::OppositeUnipotent(t) => write!(f, "opposite-unipotent:{t}"),
        }
    }
}

impl FromStr for SubgroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let theta = || -> Result<SimpleSubset> { tail.unwrap_or("").parse() };
        match (head, tail) {
            ("borel", None) => Ok(SubgroupTag::Borel),
            ("torus", None) => Ok(SubgroupTag::Torus),
            ("center", None) => Ok(SubgroupTag::Center),
            ("parabolic", _) => Ok(SubgroupTag::Parabolic(theta()?)),
            ("levi", _) => Ok(SubgroupTag::Levi(theta()?)),
            ("unipotent", _) => Ok(SubgroupTag::Unipotent(theta()?)),
            ("opposite-unipotent", _) => Ok(SubgroupTag::OppositeUnipotent(theta()?)),
            _ => Err(Error::InvalidSubset(format!("unknown subgroup tag {s:?}"))),
        }
    }
}
