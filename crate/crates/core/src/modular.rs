//! Linear algebra and polynomial arithmetic over prime fields `F_ℓ`, `ℓ < 2^31`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::factorize;
use crate::field::is_prime_u64;

/// Smallest prime size used for character computations; big enough that
/// every bound we lift against stays far below it.
pub(crate) const MIN_MODULUS: u64 = 1 << 30;
const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < MAX_MODULUS && is_prime_u64(p));
        Fp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    /// Residue of a signed integer.
    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn symmetric(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn primitive_root(self) -> u64 {
        let factors = factorize(self.p - 1);
        (2..self.p)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(r, _)| self.pow(g, (self.p - 1) / r) != 1)
            })
            .expect("prime fields have primitive roots")
    }
}

/// Primes `ℓ ≡ 1 (mod e)` in `[2^30, 2^31)`, increasing.
pub(crate) fn primes_one_mod(e: u64) -> impl Iterator<Item = u64> {
    let start = MIN_MODULUS.div_ceil(e).max(1);
    (start..)
        .map(move |t| t * e + 1)
        .take_while(|&p| p < MAX_MODULUS)
        .filter(|&p| is_prime_u64(p))
}

/// Row-reduces in place; returns pivot columns. Zero rows are dropped.
pub(crate) fn rref(f: Fp, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for a square or rectangular `M`.
pub(crate) fn nullspace(f: Fp, mut m: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let ncols = m.first().map_or(0, |r| r.len());
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if it exists.
pub(crate) fn invert(f: Fp, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Polynomials as coefficient vectors, lowest degree first, no trailing zeros.
pub(crate) type Poly = Vec<u64>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(f: Fp, a: &Poly, m: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = f.sub(r[idx], f.mul(c, m[i]));
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(f: Fp, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % f.p;
        }
    }
    poly_rem(f, &out, m)
}

fn poly_powmod(f: Fp, base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut result = poly_rem(f, &vec![1], m);
    let mut b = poly_rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(f, &result, &b, m);
        }
        b = poly_mulmod(f, &b, &b, m);
        e >>= 1;
    }
    result
}

fn poly_gcd(f: Fp, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead);
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

fn poly_sub(f: Fp, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = f.sub(
            a.get(i).copied().unwrap_or(0),
            b.get(i).copied().unwrap_or(0),
        );
    }
    trim(&mut out);
    out
}

fn poly_div_exact(f: Fp, a: &Poly, d: &Poly) -> Poly {
    let mut r = a.clone();
    let dd = d.len() - 1;
    let lead_inv = f.inv(d[dd]);
    let mut q = vec![0u64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + dd], lead_inv);
        q[k] = c;
        for i in 0..=dd {
            r[k + i] = f.sub(r[k + i], f.mul(c, d[i]));
        }
    }
    q
}

/// Distinct roots in `F_ℓ` of a nonzero polynomial, sorted.
pub(crate) fn roots(f: Fp, poly: &Poly, seed: u64) -> Vec<u64> {
    let mut p = poly.clone();
    trim(&mut p);
    if p.len() <= 1 {
        return Vec::new();
    }
    // gcd with x^ℓ - x isolates the product of distinct linear factors.
    let xp = poly_powmod(f, &vec![0, 1], f.p, &p);
    let split = poly_gcd(f, &p, &poly_sub(f, &xp, &vec![0, 1]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut stack = vec![split];
    while let Some(g) = stack.pop() {
        match g.len() {
            0 | 1 => {}
            2 => out.push(f.neg(f.mul(g[0], f.inv(g[1])))),
            _ => loop {
                let a = rng.gen_range(0..f.p);
                let h = poly_powmod(f, &vec![a, 1], (f.p - 1) / 2, &g);
                let d = poly_gcd(f, &g, &poly_sub(f, &h, &vec![1]));
                if d.len() > 1 && d.len() < g.len() {
                    stack.push(poly_div_exact(f, &g, &d));
                    stack.push(d);
                    break;
                }
            },
        }
    }
    out.sort_unstable();
    out
}

/// Characteristic polynomial `det(xI - M)`, monic, via Hessenberg reduction.
pub(crate) fn char_poly(f: Fp, m: &[Vec<u64>]) -> Poly {
    let n = m.len();
    let mut h: Vec<Vec<u64>> = m.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(r) = (c + 1..n).find(|&r| h[r][c] != 0) else {
            continue;
        };
        if r != c + 1 {
            h.swap(r, c + 1);
            for row in h.iter_mut() {
                row.swap(r, c + 1);
            }
        }
        let inv = f.inv(h[c + 1][c]);
        for i in c + 2..n {
            let factor = f.mul(h[i][c], inv);
            if factor == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.mul(factor, h[c + 1][j]);
                h[i][j] = f.sub(h[i][j], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(factor, row[i]);
                row[c + 1] = f.add(row[c + 1], v);
            }
        }
    }
    let mut polys: Vec<Poly> = vec![vec![1]];
    for k in 1..=n {
        // (x - h[k-1][k-1]) p_{k-1}
        let prev = &polys[k - 1];
        let mut next = vec![0u64; k + 1];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(h[k - 1][k - 1], c));
        }
        let mut t = 1u64;
        for i in (1..k).rev() {
            t = f.mul(t, h[i][i - 1]);
            if t == 0 {
                break;
            }
            let coef = f.mul(h[i - 1][k - 1], t);
            for (j, &c) in polys[i - 1].iter().enumerate() {
                next[j] = f.sub(next[j], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 1_000_000_007;

    fn f() -> Fp {
        Fp::new(P)
    }

    fn eval(f: Fp, p: &Poly, x: u64) -> u64 {
        p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    #[test]
    fn primes_are_one_mod_e() {
        let ps: Vec<u64> = primes_one_mod(6840).take(3).collect();
        assert_eq!(ps.len(), 3);
        for p in ps {
            assert!(is_prime_u64(p) && p % 6840 == 1 && p >= MIN_MODULUS);
        }
    }

    #[test]
    fn primitive_root_generates() {
        let f = Fp::new(13);
        let g = f.primitive_root();
        let mut seen: Vec<u64> = (0..12).map(|k| f.pow(g, k)).collect();
        seen.sort_unstable();
        assert_eq!(seen, (1..13).collect::<Vec<_>>());
    }

    #[test]
    fn char_poly_of_companion_matrix() {
        // Companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let f = f();
        let m = vec![vec![0, 0, 6], vec![1, 0, f.from_i64(-11)], vec![0, 1, 6]];
        let cp = char_poly(f, &m);
        assert_eq!(cp, vec![f.from_i64(-6), 11, f.from_i64(-6), 1]);
        assert_eq!(roots(f, &cp, 1), vec![1, 2, 3]);
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues_of_dense_matrix() {
        // Conjugate diag(5, 5, 7, 9) by a fixed unimodular matrix.
        let f = f();
        let s = vec![
            vec![1, 2, 0, 1],
            vec![0, 1, 3, 0],
            vec![2, 0, 1, 1],
            vec![1, 1, 1, 2],
        ];
        let si = invert(f, &s).unwrap();
        let d = [5u64, 5, 7, 9];
        let m: Vec<Vec<u64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        (0..4).fold(0, |acc, k| {
                            f.add(acc, f.mul(f.mul(s[i][k], d[k]), si[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        let cp = char_poly(f, &m);
        assert_eq!(cp.len(), 5);
        for &x in &d {
            assert_eq!(eval(f, &cp, x), 0);
        }
        assert_eq!(roots(f, &cp, 9), vec![5, 7, 9]);
    }

    #[test]
    fn nullspace_and_rref() {
        let f = f();
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ns = nullspace(f, m.clone());
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &m {
                let dot = row
                    .iter()
                    .zip(&v)
                    .fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn roots_skip_irreducible_quadratics() {
        // x^2 + 1 has no roots mod 7; (x^2 + 1)(x - 3) has just 3.
        let f = Fp::new(7);
        assert!(roots(f, &vec![1, 0, 1], 0).is_empty());
        assert_eq!(
            roots(f, &vec![f.from_i64(-3), 1, f.from_i64(-3), 1], 0),
            vec![3]
        );
    }
}
