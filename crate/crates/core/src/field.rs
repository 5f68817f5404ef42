//! Finite fields `F_{p^n}` with elements packed as base-`p` coordinate vectors.
//!
//! An element `c_0 + c_1 u + ... + c_{n-1} u^{n-1}` (with `u` a root of the
//! modulus) is stored as the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`.
//! This is the dense coordinate vector in a single word, so equality and
//! hashing are exact and canonical.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field size accepted; log/exp tables are built eagerly.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus has degree {found}, expected {expected}")]
    ModulusDegree { expected: usize, found: usize },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("no built-in modulus for F_{p}^{n}; supply one explicitly")]
    UnsupportedField { p: u64, n: usize },
    #[error("field of size {0} exceeds the supported maximum")]
    TooLarge(u64),
}

/// An element of a finite field, packed as base-`p` coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The packed integer; for prime fields this is the residue itself.
    pub fn packed(self) -> u32 {
        self.0
    }
}

// Conway polynomials, low degree first, monic.
const CONWAY: &[(u64, usize, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

/// Built-in modulus for `F_{p^n}`, if tabulated.
pub fn builtin_modulus(p: u64, n: usize) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, cn, _)| *cp == p && *cn == n)
        .map(|(_, _, m)| *m)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

struct Inner {
    p: u32,
    n: usize,
    q: u32,
    /// Monic, low degree first, length `n + 1`. For `n = 1` this is `[0, 1]`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A validated finite field descriptor. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.n, self.0.modulus)
        }
    }
}

/// Builds `F_{p^n}`. `modulus` is a coefficient list, low degree first.
pub fn make_field(p: u64, n: usize, modulus: Option<&[i64]>) -> Result<Field, FieldError> {
    Field::new(p, n, modulus)
}

impl Field {
    pub fn new(p: u64, n: usize, modulus: Option<&[i64]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(FieldError::TooLarge(q.min(u64::MAX as u128) as u64));
        }
        let pm = p as i64;
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                let mut m: Vec<u32> = m.iter().map(|c| c.rem_euclid(pm) as u32).collect();
                while m.last() == Some(&0) {
                    m.pop();
                }
                if m.len() != n + 1 {
                    return Err(FieldError::ModulusDegree {
                        expected: n,
                        found: m.len().saturating_sub(1),
                    });
                }
                let lead_inv = inv_mod(m[n], p as u32);
                m.iter().map(|c| mul_mod(*c, lead_inv, p as u32)).collect()
            }
            None if n == 1 => vec![0, 1],
            None => builtin_modulus(p, n)
                .ok_or(FieldError::UnsupportedField { p, n })?
                .to_vec(),
        };
        if n > 1 && !poly_irreducible(&modulus, p as u32) {
            return Err(FieldError::ReducibleModulus(p));
        }
        let mut inner = Inner {
            p: p as u32,
            n,
            q: q as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        build_tables(&mut inner);
        Ok(Field(Arc::new(inner)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Field::new(p, 1, None)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn size(&self) -> u64 {
        self.0.q as u64
    }

    /// The modulus for `n > 1`; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.0.n > 1).then_some(&self.0.modulus[..])
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Integer value of a prime-subfield element.
    pub fn to_int(&self, x: Fe) -> Option<u32> {
        (x.0 < self.0.p).then_some(x.0)
    }

    pub fn from_coords(&self, coords: &[i64]) -> Fe {
        let p = self.0.p as i64;
        let mut v = 0u32;
        for c in coords.iter().take(self.0.n).rev() {
            v = v * self.0.p + c.rem_euclid(p) as u32;
        }
        Fe(v)
    }

    pub fn coords(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.0.n)
            .map(|_| {
                let c = v % self.0.p;
                v /= self.0.p;
                c
            })
            .collect()
    }

    /// Decodes a packed integer; `None` if out of range.
    pub fn from_packed(&self, v: u32) -> Option<Fe> {
        (v < self.0.q).then_some(Fe(v))
    }

    /// The class `u` of the indeterminate; `None` for prime fields.
    pub fn generator(&self) -> Option<Fe> {
        (self.0.n > 1).then_some(Fe(self.0.p))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.n == 1 {
            return Fe((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.n == 1 {
            return Fe((p - a.0) % p);
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.0.n == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        let ord = self.0.q - 1;
        let s = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fe(self.0.exp[(if s >= ord { s - ord } else { s }) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let ord = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Some(Fe(self.0.exp[((ord - l) % ord) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let ord = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Fe(self.0.exp[((l as u128 * (e % ord) as u128) % ord as u128) as usize])
    }

    /// `x^{p^t}`; negative `t` applies the inverse Frobenius.
    pub fn frobenius(&self, x: Fe, t: i64) -> Fe {
        let n = self.0.n as i64;
        let k = t.rem_euclid(n) as u32;
        if k == 0 {
            return x;
        }
        self.pow(x, (self.0.p as u64).pow(k))
    }

    /// Scalar multiple of the unit by an integer count.
    pub fn scalar(&self, k: u64) -> Fe {
        Fe((k % self.0.p as u64) as u32)
    }

    pub fn fmt_elem(&self, x: Fe) -> String {
        if self.0.n == 1 {
            return x.0.to_string();
        }
        let c = self.coords(x);
        let mut parts = Vec::new();
        for (i, ci) in c.iter().enumerate().rev() {
            if *ci == 0 {
                continue;
            }
            let coef = if *ci == 1 && i > 0 {
                String::new()
            } else {
                ci.to_string()
            };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}u"),
                _ => format!("{coef}u^{i}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// A field embedding of `self` into `big` (same characteristic, degree dividing).
    pub fn embedding_into(&self, big: &Field) -> Option<Embedding> {
        if self.0.p != big.0.p || !big.0.n.is_multiple_of(self.0.n) {
            return None;
        }
        let image_of_u = if self.0.n == 1 {
            Fe::ONE
        } else {
            // root of our modulus inside `big`
            big.elements().find(|r| {
                let mut acc = Fe::ZERO;
                for c in self.0.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, *r), Fe(*c));
                }
                acc.is_zero()
            })?
        };
        let table = self
            .elements()
            .map(|x| {
                let mut acc = Fe::ZERO;
                for c in self.coords(x).iter().rev() {
                    acc = big.add(big.mul(acc, image_of_u), Fe(*c));
                }
                acc
            })
            .collect();
        Some(Embedding {
            small: self.clone(),
            big: big.clone(),
            table,
        })
    }
}

/// A field homomorphism `F_{p^n} -> F_{p^{nm}}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Field,
    pub big: Field,
    table: Vec<Fe>,
}

impl Embedding {
    pub fn apply(&self, x: Fe) -> Fe {
        self.table[x.0 as usize]
    }
}

fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let d = m.len() - 1;
    while r.len() > d {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let off = r.len() - d;
            for (i, mi) in m[..d].iter().enumerate() {
                let t = mul_mod(lead, *mi, p);
                r[off + i] = (r[off + i] + p - t) % p;
            }
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(*ai, *bj, p)) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Brute-force irreducibility: no monic factor of degree `1..=n/2`.
fn poly_irreducible(m: &[u32], p: u32) -> bool {
    let n = m.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|x| *x == 0) {
                return false;
            }
        }
    }
    true
}

fn pack(coords: &[u32], p: u32) -> u32 {
    coords.iter().rev().fold(0u32, |acc, c| acc * p + c)
}

fn unpack(mut v: u32, p: u32, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

fn build_tables(inner: &mut Inner) {
    let (p, n, q) = (inner.p, inner.n, inner.q);
    let ord = (q - 1) as u64;
    let factors = prime_factors(ord);
    let m = inner.modulus.clone();
    let pow = |x: &[u32], mut e: u64| -> Vec<u32> {
        let mut r = vec![0u32; n];
        r[0] = 1;
        let mut b = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = poly_mulmod(&r, &b, &m, p);
            }
            b = poly_mulmod(&b, &b, &m, p);
            e >>= 1;
        }
        r
    };
    let is_one = |v: &[u32]| v[0] == 1 && v[1..].iter().all(|c| *c == 0);
    let g = (1..q)
        .map(|v| unpack(v, p, n))
        .find(|x| factors.iter().all(|r| !is_one(&pow(x, ord / r))))
        .expect("irreducible modulus yields a cyclic unit group");
    let mut exp = vec![0u32; q as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = vec![0u32; n];
    cur[0] = 1;
    for i in 0..(q - 1) {
        let packed = pack(&cur, p);
        exp[i as usize] = packed;
        log[packed as usize] = i;
        cur = poly_mulmod(&cur, &g, &m, p);
    }
    exp[(q - 1) as usize] = 1;
    inner.exp = exp;
    inner.log = log;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_f2() {
        let f = make_field(2, 1, None).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.elements().count(), 2);
        assert_eq!(f.add(Fe::ONE, Fe::ONE), Fe::ZERO);
    }

    #[test]
    fn f4_with_explicit_modulus() {
        let f = make_field(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f.size(), 4);
        // brute force: u^2+u+1 has no root in F_2
        for x in 0..2i64 {
            assert_ne!((x * x + x + 1) % 2, 0);
        }
        let u = f.generator().unwrap();
        assert_eq!(f.mul(u, u), f.add(u, Fe::ONE));
    }

    #[test]
    fn rejects_non_prime_and_reducible() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), FieldError::NonPrime(4));
        // u^2 + 1 = (u + 1)^2 over F_2
        assert_eq!(
            make_field(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            FieldError::ReducibleModulus(2)
        );
        assert!(matches!(
            make_field(2, 5, None),
            Err(FieldError::UnsupportedField { p: 2, n: 5 })
        ));
        assert!(matches!(
            make_field(3, 2, Some(&[1, 1, 1, 1])),
            Err(FieldError::ModulusDegree { .. })
        ));
    }

    #[test]
    fn explicit_modulus_beyond_table() {
        // x^5 + x^2 + 1 is irreducible over F_2
        let f = make_field(2, 5, Some(&[1, 0, 1, 0, 0, 1])).unwrap();
        assert_eq!(f.size(), 32);
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for (p, n, _) in CONWAY {
            let f = make_field(*p, *n, None).unwrap();
            assert_eq!(f.size(), p.pow(*n as u32));
        }
    }

    #[test]
    fn frobenius_in_f4() {
        let f = make_field(2, 2, None).unwrap();
        let u = f.generator().unwrap();
        let u1 = f.add(u, Fe::ONE);
        assert_eq!(f.frobenius(Fe::ONE, 1), Fe::ONE);
        assert_eq!(f.frobenius(u, 1), u1);
        assert_eq!(f.frobenius(u1, -1), u);
        // exhaustive inverse check
        let y = f.elements().find(|y| f.frobenius(*y, 1) == u1).unwrap();
        assert_eq!(y, u);
    }

    #[test]
    fn frobenius_roundtrip_small_fields() {
        for (p, n) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (7, 2),
        ] {
            let f = make_field(p, n, None).unwrap();
            for x in f.elements() {
                for t in -3..=3 {
                    assert_eq!(f.frobenius(f.frobenius(x, t), -t), x);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_a_bijective_ring_map() {
        let f = make_field(3, 2, None).unwrap();
        let mut seen = std::collections::HashSet::new();
        for x in f.elements() {
            seen.insert(f.frobenius(x, 1));
            for y in f.elements() {
                assert_eq!(
                    f.frobenius(f.add(x, y), 1),
                    f.add(f.frobenius(x, 1), f.frobenius(y, 1))
                );
                assert_eq!(
                    f.frobenius(f.mul(x, y), 1),
                    f.mul(f.frobenius(x, 1), f.frobenius(y, 1))
                );
            }
        }
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn coords_roundtrip_and_display() {
        let f = make_field(3, 2, None).unwrap();
        for x in f.elements() {
            let c: Vec<i64> = f.coords(x).into_iter().map(i64::from).collect();
            assert_eq!(f.from_coords(&c), x);
        }
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(f4.fmt_elem(f4.from_coords(&[1, 1])), "u+1");
        assert_eq!(f4.fmt_elem(Fe::ZERO), "0");
    }

    #[test]
    fn embedding_f4_into_f16() {
        let f4 = make_field(2, 2, None).unwrap();
        let f16 = make_field(2, 4, None).unwrap();
        let e = f4.embedding_into(&f16).unwrap();
        for x in f4.elements() {
            for y in f4.elements() {
                assert_eq!(e.apply(f4.mul(x, y)), f16.mul(e.apply(x), e.apply(y)));
                assert_eq!(e.apply(f4.add(x, y)), f16.add(e.apply(x), e.apply(y)));
            }
        }
        assert!(f16.embedding_into(&f4).is_none());
    }
}
