use std::path::{Path, PathBuf};

use signlab_core::{FiniteMatrixGroup, FqMatrix, GroupAutomorphism};

use crate::config::config_error;

/// A group involution named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvolutionSpec {
    Identity,
    TransposeInverse,
    /// `Int(h)`.
    Inner(PathBuf),
    /// `Int(h) ∘ transpose-inverse`.
    Composed(PathBuf),
}

impl InvolutionSpec {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        match s {
            "identity" | "id" => return Ok(InvolutionSpec::Identity),
            "transpose-inverse" => return Ok(InvolutionSpec::TransposeInverse),
            _ => {}
        }
        if let Some(path) = s.strip_prefix("inner:") {
            return Ok(InvolutionSpec::Inner(path.into()));
        }
        if let Some(path) = s.strip_prefix("composed:") {
            return Ok(InvolutionSpec::Composed(path.into()));
        }
        Err(config_error(format!(
            "unknown involution {s:?}; expected transpose-inverse, identity, inner:FILE or composed:FILE"
        )))
    }

    pub fn is_transpose_inverse(&self) -> bool {
        *self == InvolutionSpec::TransposeInverse
    }

    /// Builds the automorphism and checks that it is an involution.
    pub fn build(&self, group: &FiniteMatrixGroup) -> anyhow::Result<GroupAutomorphism> {
        let theta = match self {
            InvolutionSpec::Identity => GroupAutomorphism::identity(group),
            InvolutionSpec::TransposeInverse => transpose_inverse(group)?,
            InvolutionSpec::Inner(path) => {
                let h = read_element(group, path)?;
                GroupAutomorphism::inner(group, h)?.with_label(format!("Int({})", path.display()))
            }
            InvolutionSpec::Composed(path) => {
                let h = read_element(group, path)?;
                let inner = GroupAutomorphism::inner(group, h)?;
                GroupAutomorphism::compose(&inner, &transpose_inverse(group)?)?
                    .with_label(format!("Int({})∘transpose-inverse", path.display()))
            }
        };
        if !theta.is_involution() {
            return Err(config_error(format!(
                "{} is not an involution of {}",
                theta.label(),
                group.label()
            )));
        }
        Ok(theta)
    }
}

fn transpose_inverse(group: &FiniteMatrixGroup) -> anyhow::Result<GroupAutomorphism> {
    GroupAutomorphism::transpose_inverse(group).map_err(|e| config_error(e.to_string()))
}

/// Reads a matrix file (one row per line, whitespace-separated integers) as a group element.
pub fn read_element(group: &FiniteMatrixGroup, path: &Path) -> anyhow::Result<u32> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read matrix {}: {e}", path.display())))?;
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| {
                    config_error(format!(
                        "{}: bad matrix entry on line {l:?}",
                        path.display()
                    ))
                })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let m = FqMatrix::from_rows(group.field(), &rows)
        .map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    if m.size() != group.degree() {
        return Err(config_error(format!(
            "{}: a {}×{} matrix does not act on {}",
            path.display(),
            m.size(),
            m.size(),
            group.label()
        )));
    }
    group.index_of(&m).ok_or_else(|| {
        config_error(format!(
            "{} is not an element of {}",
            path.display(),
            group.label()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_involutions() {
        assert_eq!(
            InvolutionSpec::parse("identity").unwrap(),
            InvolutionSpec::Identity
        );
        assert_eq!(
            InvolutionSpec::parse("transpose-inverse").unwrap(),
            InvolutionSpec::TransposeInverse
        );
        assert_eq!(
            InvolutionSpec::parse("inner:h.txt").unwrap(),
            InvolutionSpec::Inner("h.txt".into())
        );
        assert_eq!(
            InvolutionSpec::parse("composed:w.txt").unwrap(),
            InvolutionSpec::Composed("w.txt".into())
        );
        assert!(InvolutionSpec::parse("frobenius").is_err());
    }
}
