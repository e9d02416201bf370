//! Exact arithmetic in `F_q`, `q = p^ell`.
//!
//! Elements are canonical indices in `0..q`. The base-`p` digits of an index
//! (least significant first) are the coefficients, constant term first, of the
//! element's representative modulo a fixed monic irreducible of degree `ell`.
//! Index 0 is zero and index 1 is one in every field.
//!
//! Multiplication goes through exp/log tables over a fixed generator. Addition
//! is modular for prime fields, XOR for characteristic 2 and a Zech-logarithm
//! lookup otherwise, so every operation is a handful of table reads.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order a context may be built for unless a different cap is requested.
pub const DEFAULT_FIELD_CAP: u32 = 1 << 16;

const NO_LOG: u32 = u32::MAX;

/// A field element, identified by its canonical index.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{ell} exceeds the cap {cap}")]
    CapExceeded { p: u32, ell: u32, cap: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {index} does not belong to a field of order {q}")]
    ForeignElement { index: u32, q: u32 },
    #[error("power-sum exponent {i} outside 0..={max}")]
    ExponentOutOfRange { i: u32, max: u32 },
}

/// Shared handle to an immutable field context.
pub type Field = Arc<FieldContext>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AddKind {
    Prime,
    Binary,
    Zech,
}

/// The field `F_q` with its representation and lookup tables.
#[derive(Debug)]
pub struct FieldContext {
    p: u32,
    ell: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Fe,
    add_kind: AddKind,
    /// `exp[i] = g^i` for `i < 2(q-1)`, so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    /// `zech[i] = log(1 + g^i)`, or `NO_LOG` when `1 + g^i = 0`.
    zech: Vec<u32>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

/// Builds `F_{p^ell}` with the default order cap.
pub fn make_field(p: u32, ell: u32) -> Result<Field, GfError> {
    FieldContext::with_cap(p, ell, DEFAULT_FIELD_CAP).map(Arc::new)
}

/// Builds the field of order `q`, which must be a prime power.
pub fn field_of_order(q: u64) -> Result<Field, GfError> {
    let (p, ell) = factor_prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    make_field(p, ell)
}

/// Splits `q = p^ell` with `p` prime.
pub fn factor_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|c| q.is_multiple_of(*c))?;
    let mut rest = q;
    let mut ell = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        ell += 1;
    }
    (rest == 1).then_some((u32::try_from(p).ok()?, ell))
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, constant coefficient first. Used only while
// constructing the tables.

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let factor = (top as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = a.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                let sub = (factor as u64 * bc as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        }
        a.pop();
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut index: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = index % p;
        index /= p;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Trial division against every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for dd in 1..=deg / 2 {
        for lower in 0..p.pow(dd as u32) {
            let mut divisor = digits(lower, p, dd);
            divisor.push(1);
            if poly_rem(poly.to_vec(), &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `ell` over `F_p`,
/// ordering candidates by the integer whose base-`p` digits are the lower coefficients.
fn smallest_irreducible(p: u32, ell: u32) -> Vec<u32> {
    let count = p.pow(ell);
    (0..count)
        .map(|lower| {
            let mut poly = digits(lower, p, ell as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible of every degree exists over F_p")
}

impl FieldContext {
    pub fn with_cap(p: u32, ell: u32, cap: u32) -> Result<FieldContext, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if ell == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(ell)
            .filter(|&q| q <= cap as u64)
            .ok_or(GfError::CapExceeded { p, ell, cap })? as u32;

        let modulus = if ell == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, ell)
        };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a, p, ell as usize), digits(b, p, ell as usize));
            let mut prod = vec![0u32; 2 * ell as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut rem = poly_rem(prod, &modulus, p);
            rem.resize(ell as usize, 0);
            undigits(&rem, p)
        };
        let slow_pow = |mut b: u32, mut e: u32| -> u32 {
            let mut r = 1;
            while e > 0 {
                if e & 1 == 1 {
                    r = slow_mul(r, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            r
        };

        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
            .expect("F_q^* is cyclic");

        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for i in 0..order as usize {
            exp[i] = cur;
            exp[i + order as usize] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }

        let slow_add = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a, p, ell as usize), digits(b, p, ell as usize));
            let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&sum, p)
        };
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, ell as usize)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                undigits(&d, p)
            })
            .collect();

        let add_kind = if ell == 1 {
            AddKind::Prime
        } else if p == 2 {
            AddKind::Binary
        } else {
            AddKind::Zech
        };
        let zech = if add_kind == AddKind::Zech {
            (0..order as usize)
                .map(|i| {
                    let s = slow_add(1, exp[i]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        } else {
            Vec::new()
        };

        Ok(FieldContext {
            p,
            ell,
            q,
            modulus,
            generator: Fe(generator),
            add_kind,
            exp,
            log,
            neg,
            zech,
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.ell == 1
    }

    /// Coefficients of the defining modulus, constant term first; monic of degree `ell`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.q
    }

    pub fn check(&self, a: Fe) -> Result<Fe, GfError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(GfError::ForeignElement { index: a.0, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.contains(a) && self.contains(b));
        match self.add_kind {
            AddKind::Prime => {
                let s = a.0 + b.0;
                Fe(if s >= self.p { s - self.p } else { s })
            }
            AddKind::Binary => Fe(a.0 ^ b.0),
            AddKind::Zech => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let order = self.q - 1;
                let la = self.log[a.0 as usize];
                let lb = self.log[b.0 as usize];
                let diff = if lb >= la { lb - la } else { lb + order - la };
                match self.zech[diff as usize] {
                    NO_LOG => Fe::ZERO,
                    z => Fe(self.exp[(la + z) as usize]),
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.contains(a) && self.contains(b));
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero. See [`FieldContext::try_inv`].
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn try_inv(&self, a: Fe) -> Result<Fe, GfError> {
        self.check(a)?;
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Fe(self.exp[((order - l) % order) as usize]))
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    /// `a^e` with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Fe(self.exp[(l * (e % order) % order) as usize])
    }

    /// Discrete logarithm to the base of [`FieldContext::generator`].
    pub fn log(&self, a: Fe) -> Option<u32> {
        match self.log.get(a.0 as usize) {
            Some(&NO_LOG) | None => None,
            Some(&l) => Some(l),
        }
    }

    /// `sum_{a in F_q} a^i` by the closed form: `-1` when `i = q-1`, zero otherwise.
    pub fn power_sum(&self, i: u32) -> Result<Fe, GfError> {
        if i > self.q - 1 {
            return Err(GfError::ExponentOutOfRange { i, max: self.q - 1 });
        }
        Ok(if i == self.q - 1 {
            self.neg(Fe::ONE)
        } else {
            Fe::ZERO
        })
    }

    /// The same sum, added up element by element.
    pub fn power_sum_brute(&self, i: u32) -> Result<Fe, GfError> {
        if i > self.q - 1 {
            return Err(GfError::ExponentOutOfRange { i, max: self.q - 1 });
        }
        Ok(self
            .elements()
            .fold(Fe::ZERO, |acc, a| self.add(acc, self.pow(a, i as u64))))
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orders_up_to(limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&q| factor_prime_power(q).is_some()).collect()
    }

    #[test]
    fn binary_field_of_order_two() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator(), Fe(1));
    }

    #[test]
    fn f4_modulus_and_product() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.mul(Fe(2), Fe(2)), Fe(3));
    }

    #[test]
    fn f9_modulus_is_smallest_irreducible() {
        // Independent check: degree-2 monic is irreducible iff it has no root.
        let p = 3u32;
        let first = (0..9)
            .map(|lower| (lower % p, lower / p))
            .find(|&(c0, c1)| (0..p).all(|x| (x * x + c1 * x + c0) % p != 0))
            .unwrap();
        assert_eq!(first, (1, 0));
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn inverse_in_f5() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(Fe(2)), Fe(3));
        assert_eq!(f.try_inv(Fe::ZERO), Err(GfError::ZeroInverse));
        assert!(matches!(f.try_inv(Fe(7)), Err(GfError::ForeignElement { .. })));
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        for q in [2, 3, 4, 9, 16] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, 0), Fe::ONE);
            }
            assert_eq!(f.pow(Fe::ZERO, 3), Fe::ZERO);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(make_field(2, 0).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(make_field(2, 17), Err(GfError::CapExceeded { .. })));
        assert!(FieldContext::with_cap(2, 17, 1 << 17).is_ok());
        assert_eq!(field_of_order(12).unwrap_err(), GfError::NotPrimePower(12));
    }

    #[test]
    fn power_sum_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.power_sum(2).unwrap(), Fe(2));
        let f5 = make_field(5, 1).unwrap();
        assert_eq!(f5.power_sum(3).unwrap(), Fe::ZERO);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.power_sum(0).unwrap(), Fe::ZERO);
        assert!(f2.power_sum(2).is_err());
    }

    #[test]
    fn power_sum_closed_form_matches_brute_force() {
        for q in orders_up_to(32) {
            let f = field_of_order(q).unwrap();
            for i in 0..q as u32 {
                assert_eq!(f.power_sum(i), f.power_sum_brute(i), "q={q} i={i}");
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for q in orders_up_to(1 << 10) {
            let f = field_of_order(q).unwrap();
            let g = f.generator();
            let mut cur = g;
            let mut order = 1;
            while cur != Fe::ONE {
                cur = f.mul(cur, g);
                order += 1;
            }
            assert_eq!(order, q - 1, "q={q}");
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for q in [2, 3, 4, 5, 8, 9, 25, 27, 49, 81, 121, 243, 256, 625] {
            let f = field_of_order(q).unwrap();
            let p = f.characteristic() as u64;
            for _ in 0..1000 {
                let a = Fe(rng.gen_range(0..f.order()));
                let b = Fe(rng.gen_range(0..f.order()));
                let lhs = f.pow(f.add(a, b), p);
                let rhs = f.add(f.pow(a, p), f.pow(b, p));
                assert_eq!(lhs, rhs, "q={q}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            let f = field_of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                assert_eq!(f.add(a, Fe::ZERO), a);
                assert_eq!(f.mul(a, Fe::ONE), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn odd_extension_addition_matches_digits() {
        let f = make_field(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let da = digits(a.0, 3, 3);
                let db = digits(b.0, 3, 3);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.add(a, b), Fe(undigits(&s, 3)));
            }
        }
    }
}
