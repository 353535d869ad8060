//! Finite fields `F_q`, `q = p^d`, with table-driven arithmetic.
//!
//! Elements are stored as small integers: the polynomial `c_0 + c_1 x + ... +
//! c_{d-1} x^{d-1}` over `F_p` is encoded as `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`.
//! For a prime field this is the canonical residue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported. Elements must fit in a `u8`.
pub const MAX_FIELD_ORDER: u32 = 256;

/// Irreducible (Conway) moduli for the extension fields, low degree first.
/// Each entry is `(p, d, coefficients c_0..c_d)` of the monic modulus.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// Element of a finite field, as an index into the field's tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FqElement(pub u8);

/// A finite field with precomputed addition, multiplication and inversion tables.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    primitive: u8,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.d == other.d && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^d}`. Extension fields use the shipped Conway modulus.
    pub fn new(p: u32, d: u32) -> Result<Self> {
        if !is_prime_u64(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidField(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = (p as u64)
            .checked_pow(d)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64)
            .ok_or_else(|| {
                Error::InvalidField(format!("{p}^{d} exceeds the field cap {MAX_FIELD_ORDER}"))
            })? as u32;
        let modulus = if d == 1 {
            vec![0, 1]
        } else {
            CONWAY
                .iter()
                .find(|(cp, cd, _)| *cp == p && *cd == d)
                .map(|(_, _, c)| c.to_vec())
                .ok_or_else(|| Error::InvalidField(format!("no modulus shipped for {p}^{d}")))?
        };
        Self::with_modulus(p, d, q, modulus)
    }

    /// Builds `F_q` from its order.
    pub fn of_order(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        let p = (2..=q).find(|k| q % k == 0).unwrap();
        let mut d = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            d += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::new(p, d)
    }

    fn with_modulus(p: u32, d: u32, q: u32, modulus: Vec<u32>) -> Result<Self> {
        let size = q as usize;
        let digits = |mut a: u32| -> Vec<u32> {
            let mut v = vec![0; d as usize];
            for c in v.iter_mut() {
                *c = a % p;
                a /= p;
            }
            v
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0u8; size * size];
        let mut mul = vec![0u8; size * size];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum) as u8;

                // Schoolbook product, then reduce by the monic modulus.
                let mut prod = vec![0u32; 2 * d as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for k in (d as usize..prod.len()).rev() {
                    let c = prod[k];
                    if c != 0 {
                        for (i, m) in modulus.iter().enumerate().take(d as usize) {
                            let idx = k - d as usize + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                        prod[k] = 0;
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..d as usize]) as u8;
            }
        }

        let mut neg = vec![0u8; size];
        let mut inv = vec![0u8; size];
        for a in 0..q {
            neg[a as usize] = (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as u8;
            if a != 0 {
                let b = (1..q)
                    .find(|&b| mul[(a * q + b) as usize] == 1)
                    .ok_or_else(|| {
                        Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}"))
                    })?;
                inv[a as usize] = b as u8;
            }
        }

        let mut field = FieldSpec {
            p,
            d,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        field.primitive = (1..q)
            .map(|a| a as u8)
            .find(|&a| field.multiplicative_order(FqElement(a)) == q - 1)
            .expect("multiplicative group of a finite field is cyclic");
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients `c_0..c_d` of the monic defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElement {
        FqElement(0)
    }

    pub fn one(&self) -> FqElement {
        FqElement(1)
    }

    /// A generator of the multiplicative group (the smallest one by index).
    pub fn primitive_element(&self) -> FqElement {
        FqElement(self.primitive)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> {
        (0..self.q).map(|a| FqElement(a as u8))
    }

    /// Polynomial coefficients `c_0..c_{d-1}` of an element.
    pub fn coefficients(&self, a: FqElement) -> Vec<u32> {
        let mut a = a.0 as u32;
        (0..self.d)
            .map(|_| {
                let c = a % self.p;
                a /= self.p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        FqElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        FqElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqElement) -> FqElement {
        FqElement(self.neg[a.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FqElement) -> Option<FqElement> {
        (a.0 != 0).then(|| FqElement(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FqElement, mut e: u64) -> FqElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of a nonzero element in the multiplicative group; 0 for zero.
    pub fn multiplicative_order(&self, a: FqElement) -> u32 {
        if a.0 == 0 {
            return 0;
        }
        let mut x = a;
        let mut k = 1;
        while x != self.one() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    // Raw table access for the matrix kernels.
    #[inline]
    pub(crate) fn add_raw(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_has_two_elements() {
        let f = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.elements().count(), 2);
    }

    #[test]
    fn f3_two_squared_is_one() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f.mul(FqElement(2), FqElement(2)), f.one());
    }

    #[test]
    fn f4_x_times_x_plus_one_is_one() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x encodes as 2, x + 1 as 3.
        assert_eq!(f.mul(FqElement(2), FqElement(3)), f.one());
    }

    #[test]
    fn rejects_non_prime_and_oversized() {
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(2, 9), Err(Error::InvalidField(_))));
        assert!(matches!(FieldSpec::new(2, 0), Err(Error::InvalidField(_))));
        assert!(FieldSpec::of_order(6).is_err());
    }

    #[test]
    fn shipped_moduli_are_primitive() {
        for &(p, d, _) in CONWAY {
            let f = FieldSpec::new(p, d).unwrap();
            // x is encoded as p.
            let x = FqElement(p as u8);
            assert_eq!(f.multiplicative_order(x), f.order() - 1, "F_{p}^{d}");
        }
    }

    #[test]
    fn field_axioms_hold_exhaustively() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16] {
            let f = FieldSpec::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                if let Some(ai) = f.inv(a) {
                    assert_eq!(f.mul(a, ai), f.one());
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }
}
