use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ConjugacyClass, FiniteMatrixGroup, GroupFamily, SubgroupTag};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

pub const GROUP_CACHE_VERSION: u32 = 1;

/// Serialized form of an enumerated group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCache {
    pub version: u32,
    pub label: String,
    pub family: GroupFamily,
    pub p: u32,
    pub d: u32,
    pub modulus: Vec<u32>,
    pub n: usize,
    /// Row-major entries of every element, in index order.
    pub elements: Vec<Vec<u8>>,
    pub generators: Vec<u32>,
    pub classes: Vec<ConjugacyClass>,
    pub tags: BTreeMap<String, Vec<u32>>,
}

impl FiniteMatrixGroup {
    pub fn to_cache(&self) -> GroupCache {
        GroupCache {
            version: GROUP_CACHE_VERSION,
            label: self.label.clone(),
            family: self.family,
            p: self.field.characteristic(),
            d: self.field.degree(),
            modulus: self.field.modulus().to_vec(),
            n: self.n,
            elements: (0..self.order() as u32)
                .map(|i| self.raw(i).to_vec())
                .collect(),
            generators: self.generators.clone(),
            classes: self.classes.clone(),
            tags: self
                .tags
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    /// Rebuilds a group from its cache, re-deriving and validating index tables.
    pub fn from_cache(cache: GroupCache) -> Result<Self> {
        if cache.version != GROUP_CACHE_VERSION {
            return Err(Error::Cache(format!(
                "cache version {} (expected {GROUP_CACHE_VERSION})",
                cache.version
            )));
        }
        let field = FieldSpec::new(cache.p, cache.d)?;
        if field.modulus() != cache.modulus.as_slice() {
            return Err(Error::Cache(
                "field modulus differs from the shipped table".into(),
            ));
        }
        let nn = cache.n * cache.n;
        if cache.elements.iter().any(|e| e.len() != nn) {
            return Err(Error::Cache("element of the wrong size".into()));
        }
        let entries: Vec<u8> = cache.elements.concat();
        let mut group = Self::assemble(
            cache.label,
            cache.family,
            Arc::new(field),
            cache.n,
            entries,
            Some(cache.generators),
        )?;
        let order = group.order();
        let mut class_of = vec![u32::MAX; order];
        for (cid, class) in cache.classes.iter().enumerate() {
            for &m in &class.members {
                let slot = class_of
                    .get_mut(m as usize)
                    .ok_or_else(|| Error::Cache("class member out of range".into()))?;
                if *slot != u32::MAX {
                    return Err(Error::Cache("classes overlap".into()));
                }
                *slot = cid as u32;
            }
        }
        if class_of.contains(&u32::MAX) {
            return Err(Error::Cache("classes do not cover the group".into()));
        }
        group.classes = cache.classes;
        group.class_of = class_of;
        group.tags = cache
            .tags
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<SubgroupTag>()?, v)))
            .collect::<Result<_>>()?;
        Ok(group)
    }

    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_vec(&self.to_cache()).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(path, json).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    pub fn load_cache(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        let cache: GroupCache =
            serde_json::from_slice(&bytes).map_err(|e| Error::Cache(e.to_string()))?;
        Self::from_cache(cache)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ELEMENT_CAP;

    #[test]
    fn cache_roundtrip_preserves_group() {
        let f = Arc::new(FieldSpec::of_order(4).unwrap());
        let g = FiniteMatrixGroup::gl(2, f, DEFAULT_ELEMENT_CAP).unwrap();
        let dir = std::env::temp_dir().join(format!("signlab-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("gl-2-4.json");
        g.save_cache(&path).unwrap();
        let h = FiniteMatrixGroup::load_cache(&path).unwrap();
        assert_eq!(g.to_cache(), h.to_cache());
        assert_eq!(g.class_structure(), h.class_structure());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn rejects_wrong_version() {
        let f = Arc::new(FieldSpec::of_order(2).unwrap());
        let mut c = FiniteMatrixGroup::gl(2, f, DEFAULT_ELEMENT_CAP)
            .unwrap()
            .to_cache();
        c.version = 99;
        assert!(matches!(
            FiniteMatrixGroup::from_cache(c),
            Err(Error::Cache(_))
        ));
    }
}
