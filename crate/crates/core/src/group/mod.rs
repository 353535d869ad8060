//! Fully enumerated finite matrix groups over `F_q`.
//!
//! Elements are indexed in lexicographic order of their row-major entry
//! tuples, so index 0 is the smallest matrix and the index order is stable
//! across runs. Conjugacy classes are orbits under conjugation by a small
//! generating set and are sorted by `(size, smallest member)`.

mod automorphism;
mod cache;
mod classes;
mod matrix;
mod tags;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use automorphism::GroupAutomorphism;
pub use cache::{GroupCache, GROUP_CACHE_VERSION};
pub use classes::{ClassStructure, ConjugacyClass};
pub use matrix::FqMatrix;
pub use tags::SubgroupTag;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElement};
use crate::subset::SimpleSubset;
use matrix::{det_raw, inverse_raw, mul_raw};

/// Default bound on the number of elements of an enumerated group.
pub const DEFAULT_ELEMENT_CAP: u64 = 200_000;

/// Dense code tables are used up to this many codes.
const DENSE_LOOKUP_LIMIT: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupFamily {
    Gl,
    Sl,
    /// A subgroup cut out of a family group.
    Sub,
}

/// Closed-form order of `GL_n(F_q)`.
pub fn gl_order(n: usize, q: u64) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n).map(|i| qn - (q as u128).pow(i as u32)).product()
}

/// Closed-form order of `SL_n(F_q)`.
pub fn sl_order(n: usize, q: u64) -> u128 {
    gl_order(n, q) / (q as u128 - 1)
}

/// Default bound on `|GL_n(F_q)|` for the catalog of groups swept by default.
pub const CATALOG_ORDER_BOUND: u64 = 200_000;

fn is_prime_power(q: u32) -> bool {
    FieldSpec::of_order(q).is_ok()
}

/// Every `(n, q)` with `n ≥ 2`, `q` a prime power and `|GL_n(F_q)| ≤ bound`,
/// ordered by `n` then `q`.
pub fn gl_catalog(bound: u64) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut n = 2;
    while gl_order(n, 2) <= bound as u128 {
        let mut q = 2u32;
        while q <= crate::field::MAX_FIELD_ORDER && gl_order(n, q as u64) <= bound as u128 {
            if is_prime_power(q) {
                out.push((n, q));
            }
            q += 1;
        }
        n += 1;
    }
    out
}

#[derive(Debug, Clone)]
enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl Lookup {
    fn get(&self, code: u64) -> Option<u32> {
        match self {
            Lookup::Dense(v) => v.get(code as usize).copied().filter(|&i| i != u32::MAX),
            Lookup::Sparse(m) => m.get(&code).copied(),
        }
    }
}

/// A finite group of invertible matrices, with every element enumerated.
#[derive(Debug)]
pub struct FiniteMatrixGroup {
    label: String,
    family: GroupFamily,
    field: Arc<FieldSpec>,
    n: usize,
    entries: Vec<u8>,
    lookup: Lookup,
    identity: u32,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<u32>,
    tags: BTreeMap<SubgroupTag, Vec<u32>>,
    structure: OnceLock<Arc<ClassStructure>>,
}

fn encode(q: u64, raw: &[u8]) -> u64 {
    raw.iter().fold(0u64, |acc, &e| acc * q + e as u64)
}

impl FiniteMatrixGroup {
    /// Builds `GL_n(F_q)` or `SL_n(F_q)`, going through a cache file in `dir` when given.
    pub fn load_or_build(
        family: GroupFamily,
        n: usize,
        q: u32,
        cap: u64,
        dir: Option<&std::path::Path>,
    ) -> Result<Self> {
        let build = || {
            let field = Arc::new(FieldSpec::of_order(q)?);
            match family {
                GroupFamily::Gl => Self::gl(n, field, cap),
                GroupFamily::Sl => Self::sl(n, field, cap),
                GroupFamily::Sub => Err(Error::Precondition(
                    "subgroups cannot be built by name".into(),
                )),
            }
        };
        let Some(dir) = dir else { return build() };
        let name = match family {
            GroupFamily::Gl => "gl",
            _ => "sl",
        };
        let path = dir.join(format!("group-{name}-{n}-{q}-v{GROUP_CACHE_VERSION}.json"));
        if path.exists() {
            let group = Self::load_cache(&path)?;
            if group.order() as u64 > cap {
                return Err(Error::GroupTooLarge {
                    order: group.order() as u128,
                    cap,
                });
            }
            return Ok(group);
        }
        let group = build()?;
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        group.save_cache(&path)?;
        Ok(group)
    }

    /// `GL_n(F_q)`, fully enumerated, with standard subgroup tags.
    pub fn gl(n: usize, field: Arc<FieldSpec>, cap: u64) -> Result<Self> {
        Self::build_family(GroupFamily::Gl, n, field, cap)
    }

    /// `SL_n(F_q)`, fully enumerated, with standard subgroup tags.
    pub fn sl(n: usize, field: Arc<FieldSpec>, cap: u64) -> Result<Self> {
        Self::build_family(GroupFamily::Sl, n, field, cap)
    }

    fn build_family(
        family: GroupFamily,
        n: usize,
        field: Arc<FieldSpec>,
        cap: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRank {
                rank: n,
                reason: "matrix size must be at least 1",
            });
        }
        let q = field.order() as u64;
        let order = match family {
            GroupFamily::Gl => gl_order(n, q),
            _ => sl_order(n, q),
        };
        if order > cap as u128 {
            return Err(Error::GroupTooLarge { order, cap });
        }
        let total = (q as u128).pow((n * n) as u32);
        if total > u64::MAX as u128 / 2 {
            return Err(Error::GroupTooLarge { order, cap });
        }
        let nn = n * n;
        let mut raw = vec![0u8; nn];
        let mut entries = Vec::with_capacity(order as usize * nn);
        for code in 0..total as u64 {
            let mut c = code;
            for k in (0..nn).rev() {
                raw[k] = (c % q) as u8;
                c /= q;
            }
            let det = det_raw(&field, n, &raw);
            let keep = match family {
                GroupFamily::Gl => det != 0,
                _ => det == 1,
            };
            if keep {
                entries.extend_from_slice(&raw);
            }
        }
        let found = (entries.len() / nn) as u128;
        if found != order {
            return Err(Error::Consistency(format!(
                "enumerated {found} elements, closed form gives {order}"
            )));
        }
        let name = match family {
            GroupFamily::Gl => "GL",
            _ => "SL",
        };
        let label = format!("{name}({n},{q})");
        let gens = family_generators(family, n, &field);
        let mut group = Self::assemble(label, family, field, n, entries, None)?;
        group.generators = gens
            .iter()
            .map(|g| group.index_of_raw(g).expect("generator lies in the group"))
            .collect();
        group.check_generation()?;
        group.compute_classes();
        group.compute_tags();
        Ok(group)
    }

    /// Assembles index tables. `entries` must be sorted by code.
    fn assemble(
        label: String,
        family: GroupFamily,
        field: Arc<FieldSpec>,
        n: usize,
        entries: Vec<u8>,
        generators: Option<Vec<u32>>,
    ) -> Result<Self> {
        let nn = n * n;
        let q = field.order() as u64;
        let count = entries.len() / nn;
        let total = (q as u128).pow(nn as u32);
        let lookup = if total <= DENSE_LOOKUP_LIMIT as u128 {
            let mut dense = vec![u32::MAX; total as usize];
            for i in 0..count {
                dense[encode(q, &entries[i * nn..(i + 1) * nn]) as usize] = i as u32;
            }
            Lookup::Dense(dense)
        } else {
            Lookup::Sparse(
                (0..count)
                    .map(|i| (encode(q, &entries[i * nn..(i + 1) * nn]), i as u32))
                    .collect(),
            )
        };
        let identity_raw = FqMatrix::identity(n).raw();
        let mut group = FiniteMatrixGroup {
            label,
            family,
            field,
            n,
            entries,
            lookup,
            identity: 0,
            inverses: Vec::new(),
            generators: generators.unwrap_or_default(),
            classes: Vec::new(),
            class_of: Vec::new(),
            tags: BTreeMap::new(),
            structure: OnceLock::new(),
        };
        group.identity = group
            .index_of_raw(&identity_raw)
            .ok_or_else(|| Error::Closure {
                label: format!("{} (identity missing)", group.label),
            })?;
        let mut inverses = Vec::with_capacity(count);
        let mut buf = vec![0u8; nn];
        for i in 0..count {
            if !inverse_raw(&group.field, n, group.raw(i as u32), &mut buf) {
                return Err(Error::Consistency(format!(
                    "singular element in {}",
                    group.label
                )));
            }
            let inv = group.index_of_raw(&buf).ok_or_else(|| Error::Closure {
                label: format!("{} (inverse)", group.label),
            })?;
            inverses.push(inv);
        }
        group.inverses = inverses;
        Ok(group)
    }

    /// The subgroup formed by `members` (indices into `self`), enumerated as a group in its own right.
    pub fn subgroup(&self, label: impl Into<String>, members: &[u32]) -> Result<FiniteMatrixGroup> {
        let label = label.into();
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let nn = self.n * self.n;
        let mut entries = Vec::with_capacity(sorted.len() * nn);
        for &m in &sorted {
            entries.extend_from_slice(self.raw(m));
        }
        let mut sub = Self::assemble(
            label,
            GroupFamily::Sub,
            self.field.clone(),
            self.n,
            entries,
            None,
        )?;
        sub.generators = sub.find_generators()?;
        sub.compute_classes();
        Ok(sub)
    }

    fn checked_mul(&self, a: u32, b: u32) -> Option<u32> {
        let nn = self.n * self.n;
        let mut buf = vec![0u8; nn];
        mul_raw(&self.field, self.n, self.raw(a), self.raw(b), &mut buf);
        self.index_of_raw(&buf)
    }

    /// Deterministic small generating set: greedily adds elements from a seeded shuffle.
    ///
    /// The span of the chosen generators is built inside the element set and
    /// must exhaust it, which also proves the set is closed.
    fn find_generators(&self) -> Result<Vec<u32>> {
        let mut order: Vec<u32> = (0..self.order() as u32).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
        let mut gens = Vec::new();
        let mut span = vec![false; self.order()];
        span[self.identity as usize] = true;
        let mut spanned = 1usize;
        for g in order {
            if spanned == self.order() {
                break;
            }
            if span[g as usize] {
                continue;
            }
            gens.push(g);
            // Recompute the closure from scratch; generating sets stay tiny.
            span.fill(false);
            span[self.identity as usize] = true;
            let mut queue = VecDeque::from([self.identity]);
            spanned = 1;
            while let Some(x) = queue.pop_front() {
                for &s in &gens {
                    let y = self.checked_mul(x, s).ok_or_else(|| Error::Closure {
                        label: self.label.clone(),
                    })?;
                    if !span[y as usize] {
                        span[y as usize] = true;
                        spanned += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(gens)
    }

    fn check_generation(&self) -> Result<()> {
        let mut seen = vec![false; self.order()];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for &s in &self.generators {
                let y = self.mul(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        if count != self.order() {
            return Err(Error::Consistency(format!(
                "generators of {} span {count} of {} elements",
                self.label,
                self.order()
            )));
        }
        Ok(())
    }

    fn compute_classes(&mut self) {
        let order = self.order();
        let mut class_id = vec![u32::MAX; order];
        let mut raw_classes: Vec<Vec<u32>> = Vec::new();
        let gen_inv: Vec<(u32, u32)> = self
            .generators
            .iter()
            .map(|&s| (s, self.inverses[s as usize]))
            .collect();
        for seed in 0..order as u32 {
            if class_id[seed as usize] != u32::MAX {
                continue;
            }
            let cid = raw_classes.len() as u32;
            class_id[seed as usize] = cid;
            let mut members = vec![seed];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &(s, si) in &gen_inv {
                    let y = self.mul(self.mul(s, x), si);
                    if class_id[y as usize] == u32::MAX {
                        class_id[y as usize] = cid;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            raw_classes.push(members);
        }
        // Sort by (size, smallest member); the smallest member is the representative.
        raw_classes.sort_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])));
        let mut class_of = vec![0u32; order];
        let mut classes = Vec::with_capacity(raw_classes.len());
        for (cid, members) in raw_classes.into_iter().enumerate() {
            for &m in &members {
                class_of[m as usize] = cid as u32;
            }
            let rep = members[0];
            classes.push(ConjugacyClass {
                representative: rep,
                element_order: self.element_order(rep),
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    fn compute_tags(&mut self) {
        let n = self.n;
        let mut tags = BTreeMap::new();
        let all = |pred: &dyn Fn(&[u8]) -> bool| -> Vec<u32> {
            (0..self.order() as u32)
                .filter(|&i| pred(self.raw(i)))
                .collect()
        };
        for theta in SimpleSubset::all(n.saturating_sub(1)) {
            let block = theta.blocks(n);
            let parabolic = all(&|m: &[u8]| {
                (0..n).all(|r| (0..n).all(|c| block[r] <= block[c] || m[r * n + c] == 0))
            });
            let levi = all(&|m: &[u8]| {
                (0..n).all(|r| (0..n).all(|c| block[r] == block[c] || m[r * n + c] == 0))
            });
            let unipotent = all(&|m: &[u8]| unipotent_pattern(m, n, &block, false));
            let opposite = all(&|m: &[u8]| unipotent_pattern(m, n, &block, true));
            tags.insert(SubgroupTag::Parabolic(theta.clone()), parabolic);
            tags.insert(SubgroupTag::Levi(theta.clone()), levi);
            tags.insert(SubgroupTag::Unipotent(theta.clone()), unipotent);
            tags.insert(SubgroupTag::OppositeUnipotent(theta), opposite);
        }
        let empty = SimpleSubset::empty();
        tags.insert(
            SubgroupTag::Borel,
            tags[&SubgroupTag::Parabolic(empty.clone())].clone(),
        );
        tags.insert(SubgroupTag::Torus, tags[&SubgroupTag::Levi(empty)].clone());
        tags.insert(
            SubgroupTag::Center,
            all(&|m: &[u8]| {
                (0..n).all(|r| {
                    (0..n).all(|c| {
                        if r == c {
                            m[r * n + c] == m[0]
                        } else {
                            m[r * n + c] == 0
                        }
                    })
                })
            }),
        );
        self.tags = tags;
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// Matrix size `n`.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.entries.len() / (self.n * self.n)
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    #[inline]
    pub(crate) fn raw(&self, i: u32) -> &[u8] {
        let nn = self.n * self.n;
        &self.entries[i as usize * nn..(i as usize + 1) * nn]
    }

    pub fn element(&self, i: u32) -> FqMatrix {
        FqMatrix::from_raw(self.n, self.raw(i))
    }

    #[inline]
    pub(crate) fn index_of_raw(&self, raw: &[u8]) -> Option<u32> {
        self.lookup.get(encode(self.field.order() as u64, raw))
    }

    pub fn index_of(&self, m: &FqMatrix) -> Option<u32> {
        if m.size() != self.n {
            return None;
        }
        self.index_of_raw(&m.raw())
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let mut buf = [0u8; 64];
        let nn = self.n * self.n;
        if nn <= 64 {
            mul_raw(
                &self.field,
                self.n,
                self.raw(a),
                self.raw(b),
                &mut buf[..nn],
            );
            self.index_of_raw(&buf[..nn])
                .expect("group is closed under multiplication")
        } else {
            let mut v = vec![0u8; nn];
            mul_raw(&self.field, self.n, self.raw(a), self.raw(b), &mut v);
            self.index_of_raw(&v)
                .expect("group is closed under multiplication")
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, h: u32, g: u32) -> u32 {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, g: u32) -> u32 {
        self.class_of[g as usize]
    }

    pub fn tags(&self) -> &BTreeMap<SubgroupTag, Vec<u32>> {
        &self.tags
    }

    pub fn tag(&self, tag: &SubgroupTag) -> Option<&[u32]> {
        self.tags.get(tag).map(|v| v.as_slice())
    }

    /// Looks up a tag, failing with `InvalidSubset` for an unknown tag.
    pub fn require_tag(&self, tag: &SubgroupTag) -> Result<&[u32]> {
        self.tag(tag).ok_or_else(|| {
            Error::InvalidSubset(format!("{} has no subgroup tagged {tag}", self.label))
        })
    }

    pub fn is_central(&self, z: u32) -> bool {
        self.classes[self.class_of(z) as usize].members.len() == 1
    }

    /// Whether `members` is closed under products and inverses.
    pub fn is_subgroup(&self, members: &[u32]) -> bool {
        let mut inside = vec![false; self.order()];
        for &m in members {
            inside[m as usize] = true;
        }
        members.iter().all(|&a| inside[self.inv(a) as usize])
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| inside[self.mul(a, b) as usize]))
    }

    /// Shared class data for character computations.
    pub fn class_structure(&self) -> Arc<ClassStructure> {
        self.structure
            .get_or_init(|| Arc::new(ClassStructure::from_group(self)))
            .clone()
    }

    /// The generalized index `[K : K^m]` with `K` the unipotent radical of Θ and
    /// `K^m = m^{-1} K m`, computed as `[K : K ∩ K^m] / [K^m : K ∩ K^m]`.
    pub fn parabolic_index_ratio(&self, theta: &SimpleSubset, m: u32) -> Result<Ratio<u64>> {
        let levi = self.require_tag(&SubgroupTag::Levi(theta.clone()))?;
        if levi.binary_search(&m).is_err() {
            return Err(Error::NotAMember(format!(
                "Levi subgroup of Θ = {{{theta}}}"
            )));
        }
        let k = self.require_tag(&SubgroupTag::Unipotent(theta.clone()))?;
        let minv = self.inv(m);
        let mut km: Vec<u32> = k.iter().map(|&u| self.mul(self.mul(minv, u), m)).collect();
        km.sort_unstable();
        km.dedup();
        let common = k.iter().filter(|u| km.binary_search(u).is_ok()).count() as u64;
        let index_k = Ratio::new(k.len() as u64, common);
        let index_km = Ratio::new(km.len() as u64, common);
        Ok(index_k / index_km)
    }

    /// Levi component of a parabolic element: the block-diagonal part for Θ.
    pub fn levi_projection(&self, theta: &SimpleSubset, p: u32) -> Option<u32> {
        let n = self.n;
        let block = theta.blocks(n);
        let mut raw = self.raw(p).to_vec();
        for r in 0..n {
            for c in 0..n {
                if block[r] != block[c] {
                    raw[r * n + c] = 0;
                }
            }
        }
        self.index_of_raw(&raw)
    }

    /// The element `diag(d_1, .., d_n)`, if present.
    pub fn diagonal(&self, diag: &[FqElement]) -> Option<u32> {
        self.index_of(&FqMatrix::diagonal(diag))
    }
}

fn unipotent_pattern(m: &[u8], n: usize, block: &[usize], opposite: bool) -> bool {
    (0..n).all(|r| {
        (0..n).all(|c| {
            let v = m[r * n + c];
            if block[r] == block[c] {
                v == (r == c) as u8
            } else if (block[r] < block[c]) != opposite {
                true
            } else {
                v == 0
            }
        })
    })
}

fn family_generators(family: GroupFamily, n: usize, field: &FieldSpec) -> Vec<Vec<u8>> {
    let nn = n * n;
    let id = FqMatrix::identity(n).raw();
    let mut gens = Vec::new();
    let elementary = |r: usize, c: usize, a: u8| {
        let mut m = id.clone();
        m[r * n + c] = a;
        m
    };
    match family {
        GroupFamily::Gl => {
            let mut d = id.clone();
            d[0] = field.primitive_element().0;
            gens.push(d);
            for i in 0..n.saturating_sub(1) {
                gens.push(elementary(i, i + 1, 1));
                gens.push(elementary(i + 1, i, 1));
            }
        }
        _ => {
            // Root groups generated additively by an F_p-basis 1, x, .., x^{d-1}.
            let basis: Vec<u8> = (0..field.degree())
                .map(|k| field.characteristic().pow(k) as u8)
                .collect();
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        for &b in &basis {
                            gens.push(elementary(r, c, b));
                        }
                    }
                }
            }
        }
    }
    if gens.is_empty() {
        gens.push(vec![1u8; nn]);
    }
    gens
}
