use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::modular::Fp;

use super::{CharacterTable, ClassFunction};

/// A ring map `ℤ[ζ_e][1/den] → F_ℓ` fixed by `ζ_e ↦ g^{(ℓ-1)/e}`, `g` the least primitive root.
#[derive(Debug, Clone)]
pub(crate) struct Embedding {
    pub f: Fp,
    pub exponent: u32,
    powers: Vec<u64>,
}

impl Embedding {
    pub fn new(f: Fp, exponent: u32) -> Self {
        assert_eq!(
            (f.p - 1) % exponent as u64,
            0,
            "modulus must be 1 mod the exponent"
        );
        let z = f.pow(f.primitive_root(), (f.p - 1) / exponent as u64);
        let mut powers = Vec::with_capacity(exponent as usize);
        let mut x = 1u64;
        for _ in 0..exponent {
            powers.push(x);
            x = f.mul(x, z);
        }
        Embedding {
            f,
            exponent,
            powers,
        }
    }

    /// Image of `ζ_m^j` for `m | e`.
    pub fn root(&self, m: u32, j: u64) -> u64 {
        let step = (self.exponent / m) as u64;
        self.powers[((j % m as u64) * step) as usize]
    }

    pub fn embed(&self, x: &Cyclotomic) -> Result<u64> {
        if self.exponent % x.order() != 0 {
            return Err(Error::Precondition(format!(
                "value of conductor {} outside ℚ(ζ_{})",
                x.order(),
                self.exponent
            )));
        }
        let f = self.f;
        let mut acc = 0u64;
        for &(j, c) in x.terms() {
            let den = f.from_i64(*c.denom());
            if den == 0 {
                return Err(Error::Precondition(
                    "denominator divisible by the modulus".into(),
                ));
            }
            let coef = f.mul(f.from_i64(*c.numer()), f.inv(den));
            acc = f.add(acc, f.mul(coef, self.root(x.order(), j as u64)));
        }
        Ok(acc)
    }

    pub fn embed_all(&self, xs: &[Cyclotomic]) -> Result<Vec<u64>> {
        xs.iter().map(|x| self.embed(x)).collect()
    }
}

/// A character table reduced modulo a prime `ℓ ≡ 1 (mod exponent)`.
///
/// Used for exact certificates: an algebraic integer in `ℤ[ζ_e]` whose
/// Zumbroich coordinates are bounded by `B < ℓ/2` vanishes iff every Galois
/// conjugate of it vanishes modulo `ℓ`.
#[derive(Debug, Clone)]
pub struct ModularImage {
    pub(crate) embedding: Embedding,
    values: Vec<Vec<u64>>,
}

impl ModularImage {
    pub fn new(table: &CharacterTable, modulus: u64) -> Result<Self> {
        let e = table.structure().exponent;
        if modulus % e as u64 != 1 {
            return Err(Error::Precondition(format!("{modulus} is not 1 mod {e}")));
        }
        let embedding = Embedding::new(Fp::new(modulus), e);
        let values = table
            .irreducibles()
            .iter()
            .map(|chi| embedding.embed_all(chi.values()))
            .collect::<Result<_>>()?;
        Ok(ModularImage { embedding, values })
    }

    pub fn modulus(&self) -> u64 {
        self.embedding.f.p
    }

    /// Reduced values, one row per irreducible in table order.
    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn embed(&self, phi: &ClassFunction) -> Result<Vec<u64>> {
        self.embedding.embed_all(phi.values())
    }
}
