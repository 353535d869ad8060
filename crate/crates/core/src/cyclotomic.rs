//! Exact arithmetic in cyclotomic fields `ℚ(ζ_n)`.
//!
//! Values are kept in canonical form: expressed over the Zumbroich basis of
//! `ℚ(ζ_c)` where `c` is the conductor, the smallest `c` with the value in
//! `ℚ(ζ_c)`. Structural equality is therefore value equality. Roots of unity
//! are chosen compatibly: `ζ_m = ζ_n^{n/m}`
//! whenever `m | n`.
//!
//! The Zumbroich basis of `ℚ(ζ_n)` consists of the powers `ζ_n^j` such that,
//! for every prime power `p^k ∥ n`, the leading base-`p` digit of `j mod p^k`
//! is nonzero (odd `p`) or zero (`p = 2`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = Ratio<i64>;

/// Prime factorization as `(p, k)` pairs, increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Ramanujan sum `c_m(j) = Tr_{ℚ(ζ_m)/ℚ}(ζ_m^j)`.
pub fn ramanujan_sum(m: u64, j: u64) -> i64 {
    let g = (j % m).gcd(&m);
    let g = if g == 0 { m } else { g };
    let r = m / g;
    moebius(r) * (euler_phi(m) / euler_phi(r)) as i64
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i64) as u64
}

/// Whether `ζ_n^j` belongs to the Zumbroich basis of `ℚ(ζ_n)`.
pub fn in_basis(n: u32, j: u32) -> bool {
    factorize(n as u64).into_iter().all(|(p, k)| {
        let pk = p.pow(k);
        let digit = (j as u64 % pk) / (pk / p);
        if p == 2 {
            digit == 0
        } else {
            digit != 0
        }
    })
}

/// Exponents of the Zumbroich basis of `ℚ(ζ_n)`, increasing.
pub fn basis_exponents(n: u32) -> Vec<u32> {
    (0..n).filter(|&j| in_basis(n, j)).collect()
}

pub(crate) trait Coefficient:
    Clone + Zero + Neg<Output = Self> + Add<Output = Self> + AddAssign
{
}

impl<T: Clone + Zero + Neg<Output = T> + Add<Output = T> + AddAssign> Coefficient for T {}

fn bump<T: Coefficient>(terms: &mut BTreeMap<u32, T>, j: u32, c: T) {
    let slot = terms.entry(j).or_insert_with(T::zero);
    *slot += c;
}

/// Rewrites a sparse vector over all powers of `ζ_n` in the Zumbroich basis.
pub(crate) fn reduce_sparse<T: Coefficient>(n: u32, terms: &mut BTreeMap<u32, T>) {
    for (p, k) in factorize(n as u64) {
        let (p, pk) = (p as u32, p.pow(k) as u32);
        let top = pk / p;
        let step = n / p;
        let bad: Vec<u32> = terms
            .keys()
            .copied()
            .filter(|&j| {
                let d = (j % pk) / top;
                if p == 2 {
                    d != 0
                } else {
                    d == 0
                }
            })
            .collect();
        for j in bad {
            let c = terms.remove(&j).unwrap();
            if c.is_zero() {
                continue;
            }
            if p == 2 {
                bump(terms, (j + step) % n, -c);
            } else {
                for t in 1..p {
                    bump(terms, (j + t * step) % n, -c.clone());
                }
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
}

/// Dense variant of [`reduce_sparse`]; `coeffs` has length `n`.
pub(crate) fn reduce_dense<T: Coefficient>(n: u32, coeffs: &mut [T]) {
    for (p, k) in factorize(n as u64) {
        let (p, pk) = (p as u32, p.pow(k) as u32);
        let top = pk / p;
        let step = n / p;
        for j in 0..n {
            let d = (j % pk) / top;
            let bad = if p == 2 { d != 0 } else { d == 0 };
            if !bad || coeffs[j as usize].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut coeffs[j as usize], T::zero());
            if p == 2 {
                coeffs[((j + step) % n) as usize] += -c;
            } else {
                for t in 1..p {
                    coeffs[((j + t * step) % n) as usize] += -c.clone();
                }
            }
        }
    }
}

/// Descends a reduced vector to its conductor.
fn minimize(mut n: u32, mut terms: BTreeMap<u32, Rational>) -> (u32, BTreeMap<u32, Rational>) {
    'descend: loop {
        if terms.is_empty() {
            return (1, terms);
        }
        for (p, k) in factorize(n as u64) {
            let p = p as u32;
            let sub = n / p;
            if k >= 2 {
                // ℚ(ζ_n) over ℚ(ζ_{n/p}) has basis 1, ζ_n, .., ζ_n^{p-1} and the
                // trace kills every power not divisible by p.
                if terms.keys().all(|j| j % p == 0) {
                    let mut lower: BTreeMap<u32, Rational> =
                        terms.iter().map(|(j, c)| (j / p, *c)).collect();
                    reduce_sparse(sub, &mut lower);
                    n = sub;
                    terms = lower;
                    continue 'descend;
                }
            } else {
                // p ∥ n: average over Gal(ℚ(ζ_n)/ℚ(ζ_{n/p})) and test membership.
                let p_inv = mod_inverse((p % sub.max(1)) as u64, sub as u64) as u32;
                let sub_inv = mod_inverse((sub % p) as u64, p as u64) as u32;
                let scale = Rational::new(1, p as i64 - 1);
                let mut lower = BTreeMap::new();
                for (&j, &c) in &terms {
                    let a = if sub == 1 {
                        0
                    } else {
                        (j as u64 * p_inv as u64 % sub as u64) as u32
                    };
                    let b = (j as u64 * sub_inv as u64 % p as u64) as u32;
                    let weight = if b == 0 { p as i64 - 1 } else { -1 };
                    bump(&mut lower, a, c * weight * scale);
                }
                reduce_sparse(sub, &mut lower);
                let mut back: BTreeMap<u32, Rational> = BTreeMap::new();
                for (&a, &c) in &lower {
                    bump(&mut back, (a * p) % n, c);
                }
                reduce_sparse(n, &mut back);
                if back == terms {
                    n = sub;
                    terms = lower;
                    continue 'descend;
                }
            }
        }
        return (n, terms);
    }
}

/// An exact element of a cyclotomic field, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    terms: Vec<(u32, Rational)>,
}

impl Cyclotomic {
    /// Builds `Σ c_j ζ_n^j` from arbitrary (unreduced, repeated) terms.
    pub fn from_terms(n: u32, terms: impl IntoIterator<Item = (u32, Rational)>) -> Self {
        assert!(n >= 1, "cyclotomic order must be positive");
        let mut map = BTreeMap::new();
        for (j, c) in terms {
            bump(&mut map, j % n, c);
        }
        reduce_sparse(n, &mut map);
        Self::from_reduced(n, map)
    }

    fn from_reduced(n: u32, map: BTreeMap<u32, Rational>) -> Self {
        let (order, map) = minimize(n, map);
        Cyclotomic {
            order,
            terms: map.into_iter().collect(),
        }
    }

    /// Builds from a dense coefficient vector over all powers of `ζ_n`.
    pub fn from_dense(n: u32, coeffs: &[Rational]) -> Self {
        Self::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as u32, *c)),
        )
    }

    pub fn zero() -> Self {
        Cyclotomic {
            order: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v))
    }

    pub fn from_rational(v: Rational) -> Self {
        Cyclotomic {
            order: 1,
            terms: if v.is_zero() {
                Vec::new()
            } else {
                vec![(0, v)]
            },
        }
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let j = k.rem_euclid(n as i64) as u32;
        Self::from_terms(n, [(j, Rational::one())])
    }

    /// Conductor of the smallest cyclotomic field containing the value.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Zumbroich-basis coefficients over `ℚ(ζ_order)`.
    pub fn terms(&self) -> &[(u32, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.order, self.terms.as_slice()) {
            (1, []) => Some(Rational::zero()),
            (1, [(0, c)]) => Some(*c),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// True when every basis coefficient is an integer, i.e. the value is an algebraic integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Terms rewritten over powers of `ζ_m` for a multiple `m` of the order (not reduced).
    pub fn lifted_terms(&self, m: u32) -> impl Iterator<Item = (u32, Rational)> + '_ {
        assert!(
            m % self.order == 0,
            "{m} is not a multiple of {}",
            self.order
        );
        let f = m / self.order;
        self.terms.iter().map(move |&(j, c)| (j * f, c))
    }

    /// Galois automorphism `ζ ↦ ζ^k`; `k` must be coprime to the order.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.order as i64;
        assert_eq!(k.gcd(&n), 1, "Galois exponent {k} is not a unit mod {n}");
        let k = k.rem_euclid(n.max(1)) as u64;
        Self::from_terms(
            self.order,
            self.terms
                .iter()
                .map(|&(j, c)| ((j as u64 * k % self.order as u64) as u32, c)),
        )
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, s: Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            order: self.order,
            terms: self.terms.iter().map(|&(j, c)| (j, c * s)).collect(),
        }
    }

    /// Field trace down to ℚ.
    pub fn trace(&self) -> Rational {
        self.terms
            .iter()
            .map(|&(j, c)| c * ramanujan_sum(self.order as u64, j as u64))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// `Σ s_i x_i`, accumulated densely over the lcm of the orders.
    pub fn linear_combination<'a>(
        items: impl IntoIterator<Item = (&'a Cyclotomic, Rational)>,
    ) -> Self {
        let items: Vec<_> = items
            .into_iter()
            .filter(|(x, s)| !x.is_zero() && !s.is_zero())
            .collect();
        let m = items.iter().fold(1u32, |acc, (x, _)| acc.lcm(&x.order));
        let mut dense = vec![Rational::zero(); m as usize];
        for (x, s) in items {
            for (j, c) in x.lifted_terms(m) {
                dense[j as usize] += c * s;
            }
        }
        reduce_dense(m, &mut dense);
        let map = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect();
        Self::from_reduced(m, map)
    }

    /// Floating-point value `(re, im)` for display and numeric cross-checks.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.terms.iter().fold((0.0, 0.0), |(re, im), &(j, c)| {
            let a = 2.0 * std::f64::consts::PI * j as f64 / n;
            let v = *c.numer() as f64 / *c.denom() as f64;
            (re + v * a.cos(), im + v * a.sin())
        })
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let m = self.order.lcm(&rhs.order);
        Cyclotomic::from_terms(m, self.lifted_terms(m).chain(rhs.lifted_terms(m)))
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        self.scale(-Rational::one())
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let m = self.order.lcm(&rhs.order);
        let a: Vec<_> = self.lifted_terms(m).collect();
        let b: Vec<_> = rhs.lifted_terms(m).collect();
        let mut dense = vec![Rational::zero(); m as usize];
        for &(i, x) in &a {
            for &(j, y) in &b {
                dense[((i + j) % m) as usize] += x * y;
            }
        }
        Cyclotomic::from_dense(m, &dense)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl Ord for Cyclotomic {
    /// Deterministic total order: by conductor, then term by term with
    /// larger coefficients first (so `1` sorts before `-1`).
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&other.order).then_with(|| {
            for (a, b) in self.terms.iter().zip(&other.terms) {
                let o = a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.terms.len().cmp(&other.terms.len())
        })
    }
}

impl PartialOrd for Cyclotomic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (j, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -*c)
            } else {
                ("+", *c)
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if self.order == 1 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rational(&mag))?;
                }
                write!(f, "E({})^{}", self.order, j)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u32,
    coeffs: Vec<(u32, String)>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            order: self.order,
            coeffs: self
                .terms
                .iter()
                .map(|(j, c)| (*j, fmt_rational(c)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CyclotomicRepr::deserialize(d)?;
        if repr.order == 0 {
            return Err(D::Error::custom("cyclotomic order must be positive"));
        }
        let terms = repr
            .coeffs
            .into_iter()
            .map(|(j, c)| {
                let r = match c.split_once('/') {
                    Some((a, b)) => a
                        .parse::<i64>()
                        .ok()
                        .zip(b.parse::<i64>().ok().filter(|&b| b != 0))
                        .map(|(a, b)| Rational::new(a, b)),
                    None => c.parse::<i64>().ok().map(Rational::from_integer),
                };
                r.map(|r| (j, r))
                    .ok_or_else(|| D::Error::custom(format!("bad rational {c:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Cyclotomic::from_terms(repr.order, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn basis_sizes_match_phi() {
        for n in 1..200u32 {
            assert_eq!(
                basis_exponents(n).len() as u64,
                euler_phi(n as u64),
                "n = {n}"
            );
        }
    }

    #[test]
    fn sum_of_primitive_cube_roots_is_minus_one() {
        let w = Cyclotomic::root_of_unity(3, 1);
        let w2 = Cyclotomic::root_of_unity(3, 2);
        assert_eq!(&w + &w2, Cyclotomic::from_integer(-1));
    }

    #[test]
    fn conductor_is_minimized() {
        // ζ_4 squared is -1; ζ_6 = -ζ_3^2.
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_integer(-1));
        assert_eq!(Cyclotomic::root_of_unity(6, 1).order(), 3);
        assert_eq!(Cyclotomic::root_of_unity(360, 120).order(), 3);
        assert_eq!(Cyclotomic::root_of_unity(360, 0), Cyclotomic::one());
        // ζ_8 + ζ_8^7 = √2 has conductor 8.
        let s = &Cyclotomic::root_of_unity(8, 1) + &Cyclotomic::root_of_unity(8, 7);
        assert_eq!(s.order(), 8);
        assert_eq!(&s * &s, Cyclotomic::from_integer(2));
        // ζ_5 + ζ_5^4 lives in ℚ(√5) ⊂ ℚ(ζ_5); conductor stays 5.
        let g = &Cyclotomic::root_of_unity(5, 1) + &Cyclotomic::root_of_unity(5, 4);
        assert_eq!(g.order(), 5);
    }

    #[test]
    fn quadratic_gauss_sum() {
        // Σ (a/7) ζ_7^a = √-7.
        let mut acc = Cyclotomic::zero();
        for a in 1..7i64 {
            let leg = if [1, 2, 4].contains(&a) { 1 } else { -1 };
            acc = &acc + &Cyclotomic::root_of_unity(7, a).scale(r(leg));
        }
        assert_eq!(&acc * &acc, Cyclotomic::from_integer(-7));
    }

    #[test]
    fn trace_matches_ramanujan() {
        assert_eq!(Cyclotomic::root_of_unity(12, 1).trace(), r(0));
        assert_eq!(Cyclotomic::root_of_unity(3, 1).trace(), r(-1));
        assert_eq!(Cyclotomic::from_integer(5).trace(), r(5));
    }

    #[test]
    fn serde_roundtrip() {
        let x = &Cyclotomic::root_of_unity(9, 2).scale(Rational::new(3, 2)) + &Cyclotomic::one();
        let s = serde_json::to_string(&x).unwrap();
        let y: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display_uses_gap_style() {
        assert_eq!(Cyclotomic::from_integer(-3).to_string(), "-3");
        assert_eq!(Cyclotomic::root_of_unity(5, 2).to_string(), "E(5)^2");
    }

    fn arb_cyc() -> impl Strategy<Value = Cyclotomic> {
        (
            prop::sample::select(vec![1u32, 3, 4, 5, 8, 9, 12, 15, 20, 24]),
            prop::collection::vec((0u32..120, -3i64..4), 0..5),
        )
            .prop_map(|(n, ts)| Cyclotomic::from_terms(n, ts.into_iter().map(|(j, c)| (j, r(c)))))
    }

    fn numeric_eq(a: &Cyclotomic, b: (f64, f64)) -> bool {
        let (x, y) = a.to_complex();
        (x - b.0).abs() < 1e-9 && (y - b.1).abs() < 1e-9
    }

    proptest! {
        #[test]
        fn ring_ops_agree_with_complex_numbers(a in arb_cyc(), b in arb_cyc()) {
            let (ar, ai) = a.to_complex();
            let (br, bi) = b.to_complex();
            prop_assert!(numeric_eq(&(&a + &b), (ar + br, ai + bi)));
            prop_assert!(numeric_eq(&(&a * &b), (ar * br - ai * bi, ar * bi + ai * br)));
            prop_assert!(numeric_eq(&a.conj(), (ar, -ai)));
        }

        #[test]
        fn canonical_form_is_unique(a in arb_cyc(), k in 1u32..6) {
            // Re-expressing over a larger field and re-reducing gives back the same value.
            let m = a.order() * k;
            let b = Cyclotomic::from_terms(m, a.lifted_terms(m));
            prop_assert_eq!(&a, &b);
            prop_assert!(basis_exponents(a.order()).len() >= a.terms().len());
            prop_assert!(a.terms().iter().all(|&(j, _)| in_basis(a.order(), j)));
            prop_assert!((&a - &b).is_zero());
        }
    }
}
