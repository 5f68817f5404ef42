//! Classical Witt vectors: addition polynomials over the integers, the group
//! law mod `p`, and matching against abelianized Witt presentations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{Fe, Field};
use crate::hopf::HopfPresentation;
use crate::leibniz::{
    nw_presentation, reduced_coproduct, solve_reduced_coproduct, LeibnizError, TieBreak,
};
use crate::ncpoly::{NcPoly, TensorSquare};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("ghost identity for S{0} is not integral")]
    IntegralityFailure(usize),
    #[error("Witt vectors differ in prime or length")]
    ShapeMismatch,
    #[error("no substitution matches the coproducts")]
    NoMatch,
    #[error("degree bound {bound} is below the top generator weight {needed}")]
    DegreeBound { bound: u32, needed: u32 },
    #[error(transparent)]
    Presentation(#[from] LeibnizError),
}

/// Integer polynomial in `x_0..x_{ℓ−1}, y_0..y_{ℓ−1}`; exponents are stored
/// as one vector with the `x` block first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    len: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(len: usize, c: BigInt) -> Self {
        let mut p = Self::zero(len);
        p.add_term(vec![0; 2 * len], c);
        p
    }

    pub fn x(len: usize, i: usize) -> Self {
        Self::var(len, i)
    }

    pub fn y(len: usize, i: usize) -> Self {
        Self::var(len, len + i)
    }

    fn var(len: usize, k: usize) -> Self {
        let mut e = vec![0; 2 * len];
        e[k] = 1;
        let mut p = Self::zero(len);
        p.add_term(e, BigInt::one());
        p
    }

    pub fn num_vars(&self) -> usize {
        2 * self.len
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.len);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c * d;
            }
        }
        IntPoly {
            len: self.len,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, k: u64) -> IntPoly {
        let mut acc = IntPoly::constant(self.len, BigInt::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact division by `d`; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = IntPoly::zero(self.len);
        for (e, c) in &self.terms {
            if !(c % d).is_zero() {
                return None;
            }
            out.add_term(e.clone(), c / d);
        }
        Some(out)
    }

    pub fn total_degree(e: &[u32]) -> u32 {
        e.iter().sum()
    }

    /// Evaluates at field points, coefficients reduced mod the characteristic.
    pub fn eval(&self, field: &Field, x: &[Fe], y: &[Fe]) -> Fe {
        let p = BigInt::from(field.characteristic());
        let mut acc = Fe::ZERO;
        for (e, c) in &self.terms {
            let r = c.mod_floor_to_u64(&p);
            let mut t = field.scalar(r);
            for (k, &a) in e.iter().enumerate() {
                if a > 0 {
                    let v = if k < self.len { x[k] } else { y[k - self.len] };
                    t = field.mul(t, field.pow(v, a as u64));
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    /// Evaluates at integer points.
    pub fn eval_int(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &a) in e.iter().enumerate() {
                if a > 0 {
                    let v = if k < self.len {
                        &x[k]
                    } else {
                        &y[k - self.len]
                    };
                    t *= Pow::pow(v, a);
                }
            }
            acc += t;
        }
        acc
    }

    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigInt)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| {
            Self::total_degree(a.0)
                .cmp(&Self::total_degree(b.0))
                .then_with(|| b.0.cmp(a.0))
        });
        t
    }
}

trait ModFloor {
    fn mod_floor_to_u64(&self, p: &BigInt) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_to_u64(&self, p: &BigInt) -> u64 {
        let r = ((self % p) + p) % p;
        r.to_u64().expect("small residue")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mut vars = Vec::new();
            for (k, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let name = if k < self.len {
                    format!("x{k}")
                } else {
                    format!("y{}", k - self.len)
                };
                vars.push(if a == 1 { name } else { format!("{name}^{a}") });
            }
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            let neg = c.is_negative();
            match (n, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

type WittCache = Mutex<HashMap<(u64, usize), Arc<Vec<IntPoly>>>>;

fn witt_cache() -> &'static WittCache {
    static CACHE: OnceLock<WittCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `w_n = Σ_{i≤n} p^i z_i^{p^{n−i}}` on the variables `z_i`.
fn ghost(p: u64, n: usize, z: &[IntPoly]) -> IntPoly {
    let len = z[0].len;
    let mut acc = IntPoly::zero(len);
    for (i, zi) in z.iter().enumerate().take(n + 1) {
        let c = BigInt::from(p).pow(i as u32);
        acc = acc.add(&zi.pow(p.pow((n - i) as u32)).scale(&c));
    }
    acc
}

/// `S_0..S_{ℓ−1}` with `w_n(S) = w_n(x) + w_n(y)`.
pub fn witt_addition_polys(p: u64, len: usize) -> Result<Vec<IntPoly>, WittError> {
    if let Some(hit) = witt_cache().lock().unwrap().get(&(p, len)) {
        return Ok(hit.as_ref().clone());
    }
    let xs: Vec<IntPoly> = (0..len).map(|i| IntPoly::x(len, i)).collect();
    let ys: Vec<IntPoly> = (0..len).map(|i| IntPoly::y(len, i)).collect();
    let mut s: Vec<IntPoly> = Vec::new();
    for n in 0..len {
        let mut num = ghost(p, n, &xs).add(&ghost(p, n, &ys));
        for (i, si) in s.iter().enumerate() {
            let c = BigInt::from(p).pow(i as u32);
            num = num.sub(&si.pow(p.pow((n - i) as u32)).scale(&c));
        }
        let d = BigInt::from(p).pow(n as u32);
        s.push(num.div_exact(&d).ok_or(WittError::IntegralityFailure(n))?);
    }
    witt_cache()
        .lock()
        .unwrap()
        .insert((p, len), Arc::new(s.clone()));
    Ok(s)
}

/// `w_n` evaluated on an integer vector.
pub fn ghost_value(p: u64, n: usize, z: &[BigInt]) -> BigInt {
    (0..=n)
        .map(|i| Pow::pow(&BigInt::from(p), i as u32) * Pow::pow(&z[i], p.pow((n - i) as u32)))
        .sum()
}

/// Whether `w_n(S(x, y)) = w_n(x) + w_n(y)` at every integer point with
/// coordinates in `0..range`.
pub fn ghost_additive(p: u64, polys: &[IntPoly], range: i64) -> bool {
    let len = polys.len();
    let points: Vec<Vec<BigInt>> = (0..range.pow(len as u32))
        .map(|mut k| {
            (0..len)
                .map(|_| {
                    let d = k % range;
                    k /= range;
                    BigInt::from(d)
                })
                .collect()
        })
        .collect();
    points.iter().all(|x| {
        points.iter().all(|y| {
            let s: Vec<BigInt> = polys.iter().map(|q| q.eval_int(x, y)).collect();
            (0..len).all(|n| ghost_value(p, n, &s) == ghost_value(p, n, x) + ghost_value(p, n, y))
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittVector {
    pub p: u64,
    pub components: Vec<Fe>,
}

impl WittVector {
    pub fn new(p: u64, components: Vec<Fe>) -> Self {
        Self { p, components }
    }

    pub fn zero(p: u64, len: usize) -> Self {
        Self::new(p, vec![Fe::ZERO; len])
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Sum of Witt vectors using the given addition polynomials.
pub fn witt_add_with(
    polys: &[IntPoly],
    u: &WittVector,
    v: &WittVector,
    field: &Field,
) -> Result<WittVector, WittError> {
    if u.p != v.p || u.len() != v.len() || u.p != field.characteristic() || polys.len() < u.len() {
        return Err(WittError::ShapeMismatch);
    }
    let comps = polys[..u.len()]
        .iter()
        .map(|s| s.eval(field, &u.components, &v.components))
        .collect();
    Ok(WittVector::new(u.p, comps))
}

pub fn witt_add(u: &WittVector, v: &WittVector, field: &Field) -> Result<WittVector, WittError> {
    if u.p != v.p || u.len() != v.len() {
        return Err(WittError::ShapeMismatch);
    }
    let polys = witt_addition_polys(u.p, u.len())?;
    witt_add_with(&polys, u, v, field)
}

/// Additive order of `u`, by repeated addition.
pub fn witt_order(u: &WittVector, field: &Field) -> Result<u64, WittError> {
    let zero = WittVector::zero(u.p, u.len());
    let mut acc = u.clone();
    let mut n = 1;
    while acc != zero {
        acc = witt_add(&acc, u, field)?;
        n += 1;
    }
    Ok(n)
}

/// All Witt vectors of length `len` over `field`.
pub fn all_witt_vectors(field: &Field, len: usize) -> Vec<WittVector> {
    let p = field.characteristic();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Fe>| {
                field.elements().map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|c| WittVector::new(p, c)).collect()
}

/// `dim O(W_ℓ)/𝔄^{[p^h]} = p^{hℓ}`, counted as monomials with exponents below `p^h`.
pub fn frobenius_kernel_dim(p: u64, h: u32, len: u32) -> u128 {
    let per_var = (p as u128).pow(h);
    (0..len).fold(1u128, |acc, _| acc * per_var)
}

/// Images `x_a ↦ f_a` in an abelianized Witt presentation.
#[derive(Debug, Clone)]
pub struct WittSubstitution {
    pub presentation: HopfPresentation,
    pub images: Vec<NcPoly>,
}

impl WittSubstitution {
    pub fn render(&self) -> Vec<String> {
        self.images
            .iter()
            .enumerate()
            .map(|(a, f)| format!("x{a} -> {}", self.presentation.fmt_poly(f)))
            .collect()
    }
}

/// `(S_a − x_a − y_a)` evaluated at `x_i ↦ f_i⊗1`, `y_i ↦ 1⊗f_i`.
fn witt_target(ab: &HopfPresentation, s: &IntPoly, a: usize, images: &[NcPoly]) -> TensorSquare {
    let f = ab.field();
    let len = s.len;
    let p = BigInt::from(f.characteristic());
    let side = |block: &[u32]| {
        let mut acc = NcPoly::one();
        for (i, &k) in block.iter().enumerate() {
            if k > 0 {
                acc = ab.mul(&acc, &ab.pow(&images[i], k));
            }
        }
        acc
    };
    let mut out = TensorSquare::zero();
    for (e, c) in s.sub(&IntPoly::x(len, a)).sub(&IntPoly::y(len, a)).terms() {
        let coeff = f.scalar(c.mod_floor_to_u64(&p));
        if !coeff.is_zero() {
            let term = TensorSquare::pure(&side(&e[..len]), &side(&e[len..]), f);
            out.add_assign_scaled(&term, coeff, f);
        }
    }
    out
}

/// Whether `x_a ↦ images[a]` carries the Witt coproduct to the coproduct of `ab`.
pub fn substitution_matches(ab: &HopfPresentation, polys: &[IntPoly], images: &[NcPoly]) -> bool {
    images
        .iter()
        .enumerate()
        .all(|(a, fa)| reduced_coproduct(ab, fa) == witt_target(ab, &polys[a], a, images))
}

/// Searches for `x_a ↦ f_a` in the abelianization of `𝒩𝒲_ℓ` matching the Witt coproduct.
///
/// Each `f_a` is `c·E_{p^a}` plus lighter monomials of weight `p^a`, with the
/// smallest nonzero `c` admitting a solution and the lex-least completion.
pub fn match_witt_generators(
    len: usize,
    p: u64,
    field: &Field,
    degree_bound: u32,
) -> Result<WittSubstitution, WittError> {
    let needed = p.pow(len as u32 - 1) as u32;
    if degree_bound < needed {
        return Err(WittError::DegreeBound {
            bound: degree_bound,
            needed,
        });
    }
    let ab = nw_presentation(len, p, field)?.abelianize();
    let polys = witt_addition_polys(p, len)?;
    let mut images: Vec<NcPoly> = Vec::new();
    for (a, poly) in polys.iter().enumerate() {
        let q = p.pow(a as u32) as u32;
        let target = witt_target(&ab, poly, a, &images);
        let others: Vec<NcPoly> = ab
            .words_up_to(q)
            .into_iter()
            .filter(|w| ab.weight(w) == q && *w != [a as u16])
            .map(|w| NcPoly::monomial(w, Fe::ONE))
            .collect();
        let found = (1..p).find_map(|c| {
            let offset = NcPoly::monomial(vec![a as u16], field.scalar(c));
            solve_reduced_coproduct(&ab, &target, &offset, &others)
        });
        let sols = found.ok_or(WittError::NoMatch)?;
        images.push(sols.choose(&ab, TieBreak::LexLeast));
    }
    debug_assert!(substitution_matches(&ab, &polys, &images));
    Ok(WittSubstitution {
        presentation: ab,
        images,
    })
}
