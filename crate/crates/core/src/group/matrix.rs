use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, FqElement};

/// Square matrix over a finite field, entries in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqMatrix {
    n: usize,
    entries: Vec<FqElement>,
}

impl FqMatrix {
    pub fn new(n: usize, entries: Vec<FqElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(FqMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![FqElement(0); n * n];
        for i in 0..n {
            entries[i * n + i] = FqElement(1);
        }
        FqMatrix { n, entries }
    }

    pub fn diagonal(diag: &[FqElement]) -> Self {
        let n = diag.len();
        let mut m = FqMatrix {
            n,
            entries: vec![FqElement(0); n * n],
        };
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from integer rows. Integers are read as residues of
    /// the prime subfield, so `-1` becomes `p - 1`. Over an extension field
    /// an entry `c` in `0..q` is taken as the element with index `c`.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Shape {
                    expected: n,
                    found: row.len(),
                });
            }
            for &v in row {
                let e = if field.degree() == 1 || v < 0 {
                    let p = field.characteristic() as i64;
                    FqElement(v.rem_euclid(p) as u8)
                } else if (v as u64) < field.order() as u64 {
                    FqElement(v as u8)
                } else {
                    return Err(Error::InvalidField(format!(
                        "entry {v} is not an element index of F_{}",
                        field.order()
                    )));
                };
                entries.push(e);
            }
        }
        Ok(FqMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[FqElement] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> FqElement {
        self.entries[row * self.n + col]
    }

    pub(crate) fn raw(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub(crate) fn from_raw(n: usize, raw: &[u8]) -> Self {
        FqMatrix {
            n,
            entries: raw.iter().map(|&b| FqElement(b)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    pub fn mul(&self, field: &FieldSpec, other: &Self) -> Self {
        let mut out = vec![0u8; self.n * self.n];
        mul_raw(field, self.n, &self.raw(), &other.raw(), &mut out);
        Self::from_raw(self.n, &out)
    }

    pub fn determinant(&self, field: &FieldSpec) -> FqElement {
        FqElement(det_raw(field, self.n, &self.raw()))
    }

    pub fn inverse(&self, field: &FieldSpec) -> Option<Self> {
        let mut out = vec![0u8; self.n * self.n];
        inverse_raw(field, self.n, &self.raw(), &mut out).then(|| Self::from_raw(self.n, &out))
    }
}

#[inline]
pub(crate) fn mul_raw(field: &FieldSpec, n: usize, a: &[u8], b: &[u8], out: &mut [u8]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0u8;
            for k in 0..n {
                acc = field.add_raw(acc, field.mul_raw(a[i * n + k], b[k * n + j]));
            }
            out[i * n + j] = acc;
        }
    }
}

pub(crate) fn det_raw(field: &FieldSpec, n: usize, a: &[u8]) -> u8 {
    let mut m = a.to_vec();
    let mut det = 1u8;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return 0;
        };
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
            }
            det = field.neg_raw(det);
        }
        let pv = m[col * n + col];
        det = field.mul_raw(det, pv);
        let pinv = field.inv_raw(pv);
        for r in col + 1..n {
            let f = field.mul_raw(m[r * n + col], pinv);
            if f != 0 {
                let nf = field.neg_raw(f);
                for c in col..n {
                    let v = field.mul_raw(nf, m[col * n + c]);
                    m[r * n + c] = field.add_raw(m[r * n + c], v);
                }
            }
        }
    }
    det
}

/// Gauss-Jordan inversion. Returns false for singular input.
pub(crate) fn inverse_raw(field: &FieldSpec, n: usize, a: &[u8], out: &mut [u8]) -> bool {
    let mut m = a.to_vec();
    out.fill(0);
    for i in 0..n {
        out[i * n + i] = 1;
    }
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r * n + col] != 0) else {
            return false;
        };
        if pivot != col {
            for c in 0..n {
                m.swap(pivot * n + c, col * n + c);
                out.swap(pivot * n + c, col * n + c);
            }
        }
        let pinv = field.inv_raw(m[col * n + col]);
        for c in 0..n {
            m[col * n + c] = field.mul_raw(m[col * n + c], pinv);
            out[col * n + c] = field.mul_raw(out[col * n + c], pinv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r * n + col];
            if f != 0 {
                let nf = field.neg_raw(f);
                for c in 0..n {
                    let v = field.mul_raw(nf, m[col * n + c]);
                    m[r * n + c] = field.add_raw(m[r * n + c], v);
                    let w = field.mul_raw(nf, out[col * n + c]);
                    out[r * n + c] = field.add_raw(out[r * n + c], w);
                }
            }
        }
    }
    true
}

pub(crate) fn transpose_raw(n: usize, a: &[u8], out: &mut [u8]) {
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
}
