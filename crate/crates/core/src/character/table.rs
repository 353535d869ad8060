use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::image::Embedding;
use super::{ClassFunction, ModularImage};
use crate::cyclotomic::{basis_exponents, reduce_sparse, Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{ClassStructure, FiniteMatrixGroup};
use crate::modular::{char_poly, invert, nullspace, primes_one_mod, roots, rref, Fp};

pub const TABLE_SCHEMA: &str = "signlab.character-table/1";

/// Number of primes tried before the table computation gives up.
const MAX_PRIME_ATTEMPTS: usize = 6;

/// Exact integrity facts established when a table is built or loaded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCertificate {
    pub group_order: u64,
    pub num_classes: usize,
    pub num_irreducibles: usize,
    pub degree_square_sum: u64,
    pub galois_closed: bool,
    pub row_orthogonality: bool,
    pub column_orthogonality: bool,
    /// Primes whose product exceeds twice the coordinate bound of every relation checked.
    pub moduli: Vec<u64>,
}

/// The ordinary character table of an enumerated group.
///
/// Rows are sorted by degree, then by values; the trivial character is row 0.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    structure: Arc<ClassStructure>,
    irreducibles: Vec<ClassFunction>,
    index: HashMap<Vec<Cyclotomic>, usize>,
    certificate: TableCertificate,
}

impl CharacterTable {
    /// Computes the table with the Dixon–Schneider method and certifies it.
    pub fn compute(group: &FiniteMatrixGroup) -> Result<Self> {
        let structure = group.class_structure();
        let mut last = Error::TableFailure("no suitable prime".into());
        for (attempt, ell) in primes_one_mod(structure.exponent as u64)
            .take(MAX_PRIME_ATTEMPTS)
            .enumerate()
        {
            let ds = DixonSchneider::new(group, &structure, ell, attempt as u64);
            match ds.run() {
                Ok(rows) => return Self::from_values(structure, rows),
                Err(e) => last = e,
            }
        }
        Err(last)
    }

    /// Builds a table from candidate rows, sorting and certifying them.
    pub fn from_values(
        structure: Arc<ClassStructure>,
        mut rows: Vec<Vec<Cyclotomic>>,
    ) -> Result<Self> {
        rows.sort_by(|a, b| {
            let da = a[0].as_rational();
            let db = b[0].as_rational();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        let certificate = certify(&structure, &rows)?;
        let index = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let irreducibles = rows
            .into_iter()
            .map(|values| ClassFunction::new(structure.clone(), values))
            .collect::<Result<_>>()?;
        Ok(CharacterTable {
            structure,
            irreducibles,
            index,
            certificate,
        })
    }

    pub fn structure(&self) -> &Arc<ClassStructure> {
        &self.structure
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn get(&self, i: usize) -> &ClassFunction {
        &self.irreducibles[i]
    }

    pub fn certificate(&self) -> &TableCertificate {
        &self.certificate
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.irreducibles
            .iter()
            .map(|chi| {
                chi.integer_degree()
                    .expect("certified degrees are positive integers")
            })
            .collect()
    }

    /// Row index of an irreducible character, by exact value comparison.
    pub fn position(&self, phi: &ClassFunction) -> Option<usize> {
        if phi.structure().group_label != self.structure.group_label {
            return None;
        }
        self.index.get(phi.values()).copied()
    }

    /// Exact inner products `⟨φ, χ_i⟩` against every irreducible.
    pub fn decompose(&self, phi: &ClassFunction) -> Result<Vec<Cyclotomic>> {
        self.irreducibles
            .iter()
            .map(|chi| phi.inner_product(chi))
            .collect()
    }

    /// A reduction of the table modulo a prime `≡ 1 (mod exponent)`, the `skip`-th such prime.
    pub fn modular_image(&self, skip: usize) -> Result<ModularImage> {
        let p = primes_one_mod(self.structure.exponent as u64)
            .nth(skip)
            .ok_or_else(|| Error::TableFailure("ran out of primes".into()))?;
        ModularImage::new(self, p)
    }

    pub fn to_document(&self, group: &FiniteMatrixGroup) -> TableDocument {
        TableDocument {
            schema: TABLE_SCHEMA.to_string(),
            group: self.structure.group_label.clone(),
            order: self.structure.group_order,
            classes: group
                .classes()
                .iter()
                .map(|c| ClassEntry {
                    size: c.size() as u64,
                    order: c.element_order,
                    rep: matrix_rows(group, c.representative),
                })
                .collect(),
            irreducibles: self
                .irreducibles
                .iter()
                .map(|chi| IrreducibleEntry {
                    degree: chi.integer_degree().unwrap_or(0),
                    values: chi.values().to_vec(),
                })
                .collect(),
        }
    }

    /// Rebuilds and re-certifies a table read from a document.
    pub fn from_document(group: &FiniteMatrixGroup, doc: TableDocument) -> Result<Self> {
        if doc.schema != TABLE_SCHEMA {
            return Err(Error::Cache(format!(
                "unknown table schema {:?}",
                doc.schema
            )));
        }
        if doc.group != group.label() || doc.classes.len() != group.num_classes() {
            return Err(Error::Cache(format!(
                "table for {} does not match {}",
                doc.group,
                group.label()
            )));
        }
        for (entry, class) in doc.classes.iter().zip(group.classes()) {
            if entry.size != class.size() as u64
                || entry.rep != matrix_rows(group, class.representative)
            {
                return Err(Error::Cache(
                    "class list differs from the enumerated group".into(),
                ));
            }
        }
        let rows: Vec<Vec<Cyclotomic>> = doc.irreducibles.into_iter().map(|r| r.values).collect();
        if rows.iter().any(|r| r.len() != group.num_classes()) {
            return Err(Error::Cache("row of the wrong length".into()));
        }
        Self::from_values(group.class_structure(), rows)
    }

    /// Loads the table from `dir` when cached there, otherwise computes and stores it.
    pub fn load_or_compute(group: &FiniteMatrixGroup, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir else {
            return Self::compute(group);
        };
        let path = cache_path(dir, group);
        if path.exists() {
            let bytes =
                fs::read(&path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            let doc: TableDocument = serde_json::from_slice(&bytes)
                .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            return Self::from_document(group, doc);
        }
        let table = Self::compute(group)?;
        fs::create_dir_all(dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        let json = serde_json::to_vec(&table.to_document(group))
            .map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(&path, json).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        Ok(table)
    }
}

fn cache_path(dir: &Path, group: &FiniteMatrixGroup) -> PathBuf {
    let key: String = group
        .label()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    dir.join(format!("table-{}-v1.json", key.trim_matches('-')))
}

fn matrix_rows(group: &FiniteMatrixGroup, g: u32) -> Vec<Vec<u32>> {
    let m = group.element(g);
    let n = m.size();
    (0..n)
        .map(|r| (0..n).map(|c| m.get(r, c).0 as u32).collect())
        .collect()
}

/// Serialized character table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema: String,
    pub group: String,
    pub order: u64,
    pub classes: Vec<ClassEntry>,
    pub irreducibles: Vec<IrreducibleEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub size: u64,
    pub order: u32,
    /// Representative matrix; entries are field-element indices.
    pub rep: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleEntry {
    pub degree: u64,
    pub values: Vec<Cyclotomic>,
}

/// Largest absolute Zumbroich coordinate of any `ζ_e^j` over `ℚ(ζ_e)`.
fn root_coordinate_bound(e: u32) -> i64 {
    (0..e)
        .map(|j| {
            let mut t = std::collections::BTreeMap::from([(j, 1i64)]);
            reduce_sparse(e, &mut t);
            t.values().map(|c| c.abs()).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(1)
}

/// Generators of `(ℤ/e)^×`, chosen greedily.
pub(crate) fn unit_generators(e: u32) -> Vec<u32> {
    let units: Vec<u32> = (1..e.max(2)).filter(|&k| k.gcd(&e) == 1).collect();
    let mut span = vec![false; e.max(2) as usize];
    span[1 % e.max(2) as usize] = true;
    let mut spanned = 1;
    let mut gens = Vec::new();
    for &k in &units {
        if spanned == units.len() {
            break;
        }
        if span[k as usize] {
            continue;
        }
        gens.push(k);
        let mut frontier: Vec<u32> = (0..e).filter(|&x| span[x as usize]).collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = ((x as u64 * g as u64) % e as u64) as u32;
                if !span[y as usize] {
                    span[y as usize] = true;
                    spanned += 1;
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Exact certification of a candidate table.
///
/// Checks that there is one row per class, that values are algebraic
/// integers, that degrees are positive with `Σ d² = |G|`, and that the row set
/// is stable under `Gal(ℚ(ζ_e)/ℚ)` compatibly with the power maps. Both
/// orthogonality relations are then checked modulo primes `ℓ ≡ 1 (mod e)`.
/// Galois stability makes every conjugate of each relation another checked
/// relation, so all embeddings `ℤ[ζ_e] → F_ℓ` vanish; with the product of
/// the primes above twice the coordinate bound this forces exact equality.
fn certify(s: &ClassStructure, rows: &[Vec<Cyclotomic>]) -> Result<TableCertificate> {
    let k = s.num_classes();
    let fail = |msg: String| Err(Error::TableFailure(format!("{}: {msg}", s.group_label)));
    if rows.len() != k {
        return fail(format!("{} rows for {k} classes", rows.len()));
    }
    let mut degree_square_sum = 0u64;
    let mut max_l1 = 0i64;
    for row in rows {
        if row.len() != k {
            return fail("row of the wrong length".into());
        }
        match row[0].as_integer() {
            Some(d) if d > 0 => degree_square_sum += (d * d) as u64,
            _ => return fail(format!("degree {} is not a positive integer", row[0])),
        }
        for v in row {
            if !v.is_integral() {
                return fail(format!("value {v} is not an algebraic integer"));
            }
            if s.exponent % v.order() != 0 {
                return fail(format!("value {v} outside ℚ(ζ_{})", s.exponent));
            }
            let l1: i64 = v.terms().iter().map(|(_, c)| c.numer().abs()).sum();
            max_l1 = max_l1.max(l1);
        }
    }
    if degree_square_sum != s.group_order {
        return fail(format!(
            "Σ d² = {degree_square_sum} ≠ |G| = {}",
            s.group_order
        ));
    }

    let index: HashMap<&[Cyclotomic], usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    if index.len() != k {
        return fail("repeated rows".into());
    }
    for g in unit_generators(s.exponent) {
        for row in rows {
            let permuted: Vec<Cyclotomic> = (0..k)
                .map(|c| row[s.power(c, g as i64) as usize].clone())
                .collect();
            if !index.contains_key(permuted.as_slice()) {
                return fail(format!("row set not closed under power map {g}"));
            }
            for (c, v) in row.iter().enumerate() {
                if v.galois(g as i64) != permuted[c] {
                    return fail(format!(
                        "Galois action {g} disagrees with the power map at class {c}"
                    ));
                }
            }
        }
    }

    // Coordinate bound for Σ_c |C| χ(c) ψ(c)^* - δ|G| and Σ_χ χ(c) χ(c')^* - δ|C_G(c)|.
    let rb = root_coordinate_bound(s.exponent) as u128;
    let l1 = max_l1 as u128;
    let order = s.group_order as u128;
    let bound = (order * l1 * l1 * rb).max(k as u128 * l1 * l1 * rb) + order;
    let mut moduli = Vec::new();
    let mut product = 1u128;
    let mut primes = primes_one_mod(s.exponent as u64);
    while product <= 2 * bound {
        let p = primes
            .next()
            .ok_or_else(|| Error::TableFailure("ran out of primes".into()))?;
        let emb = Embedding::new(Fp::new(p), s.exponent);
        let t: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| emb.embed_all(r))
            .collect::<Result<_>>()?;
        if let Some(msg) = check_orthogonality_mod(s, &t, emb.f) {
            return fail(msg);
        }
        moduli.push(p);
        product = product.saturating_mul(p as u128);
    }

    Ok(TableCertificate {
        group_order: s.group_order,
        num_classes: k,
        num_irreducibles: rows.len(),
        degree_square_sum,
        galois_closed: true,
        row_orthogonality: true,
        column_orthogonality: true,
        moduli,
    })
}

fn check_orthogonality_mod(s: &ClassStructure, t: &[Vec<u64>], f: Fp) -> Option<String> {
    let k = s.num_classes();
    let p = f.p;
    let order = s.group_order % p;
    // Rows: Σ_c |C_c| χ(c) ψ(c^{-1}).
    let weighted: Vec<Vec<u64>> = t
        .iter()
        .map(|row| {
            (0..k)
                .map(|c| f.mul(s.sizes[c] % p, row[s.inverse[c] as usize]))
                .collect()
        })
        .collect();
    for (i, a) in t.iter().enumerate() {
        for (j, b) in weighted.iter().enumerate() {
            let acc = a
                .iter()
                .zip(b)
                .fold(0u64, |acc, (&x, &y)| (acc + x * y) % p);
            let expected = if i == j { order } else { 0 };
            if acc != expected {
                return Some(format!("rows {i} and {j} are not orthonormal"));
            }
        }
    }
    // Columns: Σ_χ χ(c) χ(c'^{-1}).
    let cols: Vec<Vec<u64>> = (0..k)
        .map(|c| t.iter().map(|row| row[c]).collect())
        .collect();
    for c in 0..k {
        for c2 in 0..k {
            let a = &cols[c];
            let b = &cols[s.inverse[c2] as usize];
            let acc = a
                .iter()
                .zip(b)
                .fold(0u64, |acc, (&x, &y)| (acc + x * y) % p);
            let expected = if c == c2 {
                s.centralizer_order(c) % p
            } else {
                0
            };
            if acc != expected {
                return Some(format!("columns {c} and {c2} are not orthogonal"));
            }
        }
    }
    None
}

/// Dixon–Schneider: joint eigenvectors of the class matrices over `F_ℓ`,
/// lifted to cyclotomic integers.
struct DixonSchneider<'a> {
    group: &'a FiniteMatrixGroup,
    s: &'a ClassStructure,
    f: Fp,
    seed: u64,
}

struct LiftData {
    units: Vec<u32>,
    basis: Vec<u32>,
    inverse: Vec<Vec<u64>>,
    root_bound: u64,
}

impl<'a> DixonSchneider<'a> {
    fn new(group: &'a FiniteMatrixGroup, s: &'a ClassStructure, ell: u64, seed: u64) -> Self {
        DixonSchneider {
            group,
            s,
            f: Fp::new(ell),
            seed,
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(Error::TableFailure(format!(
            "{} mod {}: {msg}",
            self.s.group_label, self.f.p
        )))
    }

    /// `A[i][k] = #{x ∈ C_j : x^{-1} z_k ∈ C_i}`, so that `A ω = ω(C_j) ω`.
    fn class_matrix(&self, j: usize) -> Vec<Vec<u64>> {
        let g = self.group;
        let k = self.s.num_classes();
        let inverses: Vec<u32> = g.classes()[j].members.iter().map(|&x| g.inv(x)).collect();
        let mut a = vec![vec![0u64; k]; k];
        for (kk, class) in g.classes().iter().enumerate() {
            let z = class.representative;
            for &xi in &inverses {
                a[g.class_of(g.mul(xi, z)) as usize][kk] += 1;
            }
        }
        a
    }

    /// Splits an invariant subspace (RREF basis) into eigenspaces of `a`.
    fn split(&self, a: &[Vec<u64>], basis: Vec<Vec<u64>>) -> Result<Vec<Vec<Vec<u64>>>> {
        let f = self.f;
        let d = basis.len();
        let pivots: Vec<usize> = basis
            .iter()
            .map(|b| {
                b.iter()
                    .position(|&x| x != 0)
                    .expect("basis rows are nonzero")
            })
            .collect();
        // Coordinates of A b_c with respect to the RREF basis are its pivot entries.
        let mut r = vec![vec![0u64; d]; d];
        for (c, b) in basis.iter().enumerate() {
            for (row, &pr) in pivots.iter().enumerate() {
                r[row][c] = a[pr]
                    .iter()
                    .zip(b)
                    .fold(0u64, |acc, (&x, &y)| (acc + x * y) % f.p);
            }
        }
        let eigenvalues = roots(f, &char_poly(f, &r), self.seed ^ d as u64);
        if eigenvalues.len() == 1 {
            let lambda = eigenvalues[0];
            let scalar = (0..d).all(|i| (0..d).all(|j| r[i][j] == if i == j { lambda } else { 0 }));
            return if scalar {
                Ok(vec![basis])
            } else {
                self.fail("class matrix is not diagonalizable")
            };
        }
        let mut out = Vec::with_capacity(eigenvalues.len());
        let mut total = 0;
        for lambda in eigenvalues {
            let mut m = r.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = f.sub(row[i], lambda);
            }
            let mut vectors: Vec<Vec<u64>> = nullspace(f, m)
                .into_iter()
                .map(|y| {
                    let mut v = vec![0u64; basis[0].len()];
                    for (coef, b) in y.iter().zip(&basis) {
                        if *coef != 0 {
                            for (x, &bx) in v.iter_mut().zip(b) {
                                *x = (*x + coef * bx) % f.p;
                            }
                        }
                    }
                    v
                })
                .collect();
            rref(f, &mut vectors);
            total += vectors.len();
            out.push(vectors);
        }
        if total != d {
            return self.fail("eigenspaces do not span the invariant subspace");
        }
        Ok(out)
    }

    /// Central characters `ω_χ` modulo `ℓ`, one vector per irreducible.
    fn central_characters(&self) -> Result<Vec<Vec<u64>>> {
        let k = self.s.num_classes();
        let identity: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
            .collect();
        let mut spaces = vec![identity];
        for j in 1..k {
            if spaces.iter().all(|sp| sp.len() == 1) {
                break;
            }
            let a = self.class_matrix(j);
            let mut next = Vec::with_capacity(spaces.len());
            for basis in spaces {
                if basis.len() == 1 {
                    next.push(basis);
                } else {
                    next.extend(self.split(&a, basis)?);
                }
            }
            spaces = next;
        }
        if spaces.iter().any(|sp| sp.len() != 1) {
            return self.fail("class matrices do not separate the irreducibles");
        }
        spaces
            .into_iter()
            .map(|mut sp| {
                let v = sp.pop().unwrap();
                if v[0] == 0 {
                    return self.fail("eigenvector vanishes at the identity class");
                }
                let inv = self.f.inv(v[0]);
                Ok(v.iter().map(|&x| self.f.mul(x, inv)).collect())
            })
            .collect()
    }

    fn degree(&self, omega: &[u64]) -> Result<u64> {
        let f = self.f;
        let s = self.s;
        let mut sum = 0u64;
        for c in 0..s.num_classes() {
            let term = f.mul(omega[c], omega[s.inverse[c] as usize]);
            sum = f.add(sum, f.mul(term, f.inv(s.sizes[c] % f.p)));
        }
        if sum == 0 {
            return self.fail("degenerate degree equation");
        }
        let target = f.mul(s.group_order % f.p, f.inv(sum));
        let max = (s.group_order as f64).sqrt() as u64 + 1;
        (1..=max)
            .find(|&d| d * d % f.p == target && s.group_order % d == 0)
            .map_or_else(|| self.fail("no integer degree matches"), Ok)
    }

    fn lift_data(&self, emb: &Embedding, m: u32) -> Result<LiftData> {
        let units: Vec<u32> = (0..m).filter(|&u| u.gcd(&m) == 1).collect();
        let basis = basis_exponents(m);
        let v: Vec<Vec<u64>> = units
            .iter()
            .map(|&u| {
                basis
                    .iter()
                    .map(|&b| emb.root(m, u as u64 * b as u64))
                    .collect()
            })
            .collect();
        let inverse =
            invert(self.f, &v).map_or_else(|| self.fail("singular Vandermonde system"), Ok)?;
        Ok(LiftData {
            units,
            basis,
            inverse,
            root_bound: root_coordinate_bound(m) as u64,
        })
    }

    fn run(&self) -> Result<Vec<Vec<Cyclotomic>>> {
        let s = self.s;
        let f = self.f;
        let k = s.num_classes();
        let emb = Embedding::new(f, s.exponent);
        let omegas = self.central_characters()?;
        let mut lift_cache: HashMap<u32, LiftData> = HashMap::new();
        for &m in &s.element_orders {
            if let std::collections::hash_map::Entry::Vacant(slot) = lift_cache.entry(m) {
                slot.insert(self.lift_data(&emb, m)?);
            }
        }
        let mut rows = Vec::with_capacity(k);
        for omega in omegas {
            let d = self.degree(&omega)?;
            let chi: Vec<u64> = (0..k)
                .map(|c| f.mul(f.mul(d % f.p, omega[c]), f.inv(s.sizes[c] % f.p)))
                .collect();
            let mut values: Vec<Option<Cyclotomic>> = vec![None; k];
            for c in 0..k {
                if values[c].is_some() {
                    continue;
                }
                let m = s.element_orders[c];
                let data = &lift_cache[&m];
                let y: Vec<u64> = data
                    .units
                    .iter()
                    .map(|&u| chi[s.power(c, u as i64) as usize])
                    .collect();
                let mut terms = Vec::with_capacity(data.basis.len());
                for (row, &b) in data.inverse.iter().zip(&data.basis) {
                    let x = row
                        .iter()
                        .zip(&y)
                        .fold(0u64, |acc, (&a, &b)| (acc + a * b) % f.p);
                    let x = f.symmetric(x);
                    if x.unsigned_abs() > d * data.root_bound {
                        return self.fail("lifted coordinate exceeds the degree bound");
                    }
                    terms.push((b, Rational::from_integer(x)));
                }
                let value = Cyclotomic::from_terms(m, terms);
                for &u in &data.units {
                    let target = s.power(c, u as i64) as usize;
                    let conj = value.galois(u as i64);
                    match &values[target] {
                        Some(existing) if *existing != conj => {
                            return self.fail("lifted values are not Galois compatible");
                        }
                        Some(_) => {}
                        None => values[target] = Some(conj),
                    }
                }
            }
            rows.push(values.into_iter().map(Option::unwrap).collect());
        }
        Ok(rows)
    }
}
