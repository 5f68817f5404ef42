//! The Leibniz Hopf algebra, curves on it, minimal curves and the
//! non-commutative Witt presentations built from them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::field::{Fe, Field};
use crate::hopf::{Generator, HopfPresentation};
use crate::matrix::Matrix;
use crate::ncpoly::{NcPoly, PolyBasis, TensorSquare, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeibnizError {
    #[error("no curve extension exists at index {0}")]
    Unsolvable(usize),
    #[error("curve element E{0} is not a polynomial in the p-power elements")]
    ExpressionFailure(usize),
    #[error("field has characteristic {found}, expected {expected}")]
    FieldMismatch { expected: u64, found: u64 },
    #[error("length must be at least 1")]
    Empty,
}

/// `𝒵(m)`: free on `Z1..Zm`, weight `Zh = h`, `ΔZh = Σ_{i+j=h} Zi⊗Zj`.
pub fn leibniz_presentation(m: usize, field: &Field) -> HopfPresentation {
    assert!(m >= 1, "need at least one generator");
    let generators = (1..=m)
        .map(|h| Generator::new(format!("Z{h}"), h as u32))
        .collect();
    let reduced = (1..=m)
        .map(|h| {
            let mut t = TensorSquare::zero();
            for i in 1..h {
                t.add_term(
                    vec![(i - 1) as u16],
                    vec![(h - i - 1) as u16],
                    Fe::ONE,
                    field,
                );
            }
            t
        })
        .collect();
    HopfPresentation::from_reduced(field.clone(), generators, reduced, false)
        .expect("Leibniz table is well founded")
}

/// `S_1..S_m` from `S_0 = 1`, `Σ_{i=0}^{n} S_i Z_{n−i} = 0`.
pub fn antipode_elements(m: usize, field: &Field) -> Vec<NcPoly> {
    let mut s = vec![NcPoly::one()];
    for n in 1..=m {
        let mut acc = NcPoly::zero();
        for (i, si) in s.iter().enumerate() {
            acc.add_assign_scaled(
                &si.mul(&NcPoly::letter((n - i - 1) as u16), field),
                Fe::ONE,
                field,
            );
        }
        s.push(acc.neg(field));
    }
    s.split_off(1)
}

/// `c_1..c_ℓ` with `Δc_j = Σ_{i=0}^{j} c_i ⊗ c_{j−i}` and `c_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Curve {
    pub elements: Vec<NcPoly>,
}

impl Curve {
    pub fn new(elements: Vec<NcPoly>) -> Self {
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `c_j`, with `c_0 = 1`.
    pub fn get(&self, j: usize) -> NcPoly {
        if j == 0 {
            NcPoly::one()
        } else {
            self.elements[j - 1].clone()
        }
    }

    /// `Σ_{0<i<j} c_i ⊗ c_{j−i}`, the reduced coproduct `c_j` must have.
    pub fn required_reduced(&self, j: usize, field: &Field) -> TensorSquare {
        let mut t = TensorSquare::zero();
        for i in 1..j {
            t.add_assign_scaled(
                &TensorSquare::pure(&self.get(i), &self.get(j - i), field),
                Fe::ONE,
                field,
            );
        }
        t
    }

    /// First index `j` at which the curve identity fails.
    pub fn first_violation(&self, pres: &HopfPresentation) -> Option<usize> {
        let f = pres.field();
        (1..=self.len()).find(|&j| {
            let d = reduced_coproduct(pres, &self.elements[j - 1]);
            d != self.required_reduced(j, f)
        })
    }
}

/// `Δx − x⊗1 − 1⊗x`.
pub fn reduced_coproduct(pres: &HopfPresentation, x: &NcPoly) -> TensorSquare {
    let f = pres.field();
    let mut d = pres.coproduct(x).expect("letters of the presentation");
    let minus = f.neg(Fe::ONE);
    d.add_assign_scaled(&TensorSquare::pure(x, &NcPoly::one(), f), minus, f);
    d.add_assign_scaled(&TensorSquare::pure(&NcPoly::one(), x, f), minus, f);
    d
}

/// Deterministic choice inside an affine solution set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    /// Lexicographically least coefficient vector, words in increasing word order.
    #[default]
    LexLeast,
    /// Lexicographically least coefficient vector, words in decreasing word order.
    ReverseLex,
}

/// `particular + span(homogeneous)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolutions {
    pub particular: NcPoly,
    pub homogeneous: Vec<NcPoly>,
}

impl AffineSolutions {
    /// The solution whose coefficient vector is lexicographically least.
    pub fn choose(&self, pres: &HopfPresentation, tie: TieBreak) -> NcPoly {
        let f = pres.field();
        if self.homogeneous.is_empty() {
            return self.particular.clone();
        }
        let order = pres.order();
        let mut words: Vec<Word> = self
            .homogeneous
            .iter()
            .chain(std::iter::once(&self.particular))
            .flat_map(|x| x.words().cloned())
            .collect();
        words.sort_by(|a, b| order.cmp(a, b));
        words.dedup();
        if tie == TieBreak::ReverseLex {
            words.reverse();
        }
        let rows: Vec<Vec<Fe>> = self
            .homogeneous
            .iter()
            .map(|h| words.iter().map(|w| h.coeff(w)).collect())
            .collect();
        let mut m = Matrix::from_rows(&rows);
        let pivots = m.rref(f);
        let mut x: Vec<Fe> = words.iter().map(|w| self.particular.coeff(w)).collect();
        for (r, &c) in pivots.iter().enumerate() {
            let k = x[c];
            if !k.is_zero() {
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = f.sub(*xj, f.mul(k, m[(r, j)]));
                }
            }
        }
        NcPoly::from_terms(words.into_iter().zip(x), f)
    }

    pub fn contains(&self, pres: &HopfPresentation, x: &NcPoly) -> bool {
        let f = pres.field();
        let mut b = PolyBasis::new(pres.order());
        for h in &self.homogeneous {
            b.insert(h, f);
        }
        b.contains(&x.sub(&self.particular, f), f)
    }
}

/// Solutions `c ∈ span(subspace)` of `Δ̄c = Σ_{0<i≤ℓ} c_i ⊗ c_{ℓ+1−i}`.
pub fn extend_curve(
    pres: &HopfPresentation,
    curve: &Curve,
    subspace: &[NcPoly],
) -> Option<AffineSolutions> {
    extend_curve_affine(pres, curve, &NcPoly::zero(), subspace)
}

/// As [`extend_curve`], for `c ∈ offset + span(subspace)`.
pub fn extend_curve_affine(
    pres: &HopfPresentation,
    curve: &Curve,
    offset: &NcPoly,
    subspace: &[NcPoly],
) -> Option<AffineSolutions> {
    let target = curve.required_reduced(curve.len() + 1, pres.field());
    solve_reduced_coproduct(pres, &target, offset, subspace)
}

/// All `c ∈ offset + span(subspace)` with `Δ̄c = target`.
pub fn solve_reduced_coproduct(
    pres: &HopfPresentation,
    target: &TensorSquare,
    offset: &NcPoly,
    subspace: &[NcPoly],
) -> Option<AffineSolutions> {
    let f = pres.field();
    let mut rhs = target.clone();
    rhs.add_assign_scaled(&reduced_coproduct(pres, offset), f.neg(Fe::ONE), f);
    let mut basis = PolyBasis::new(pres.order());
    for v in subspace {
        basis.insert(v, f);
    }
    let vars = basis.into_rows();
    let images: Vec<TensorSquare> = vars.iter().map(|v| reduced_coproduct(pres, v)).collect();
    let mut index: HashMap<(Word, Word), usize> = HashMap::new();
    for t in images.iter().chain(std::iter::once(&rhs)) {
        for (u, v, _) in t.terms() {
            let n = index.len();
            index.entry((u.clone(), v.clone())).or_insert(n);
        }
    }
    let mut m = Matrix::zeros(index.len(), vars.len());
    for (j, t) in images.iter().enumerate() {
        for (u, v, c) in t.terms() {
            m[(index[&(u.clone(), v.clone())], j)] = c;
        }
    }
    let mut b = vec![Fe::ZERO; index.len()];
    for (u, v, c) in rhs.terms() {
        b[index[&(u.clone(), v.clone())]] = c;
    }
    let (x, ns) = m.solve(&b, f)?;
    let combine = |coef: &[Fe]| {
        let mut out = NcPoly::zero();
        for (v, c) in vars.iter().zip(coef) {
            out.add_assign_scaled(v, *c, f);
        }
        out
    };
    Some(AffineSolutions {
        particular: offset.add(&combine(&x), f),
        homogeneous: ns.iter().map(|k| combine(k)).collect(),
    })
}

pub fn is_p_power(p: u64, i: usize) -> bool {
    let mut q = 1usize;
    while q < i {
        q *= p as usize;
    }
    q == i
}

/// `⌊log_p i⌋`.
pub fn log_floor(p: u64, i: usize) -> u32 {
    let mut a = 0;
    let mut q = p as usize;
    while q <= i {
        q *= p as usize;
        a += 1;
    }
    a
}

/// Words over letters `b` (weight `p^b`, `p^b ≤ i`) of total weight `i`.
fn p_power_words(p: u64, i: usize) -> Vec<Word> {
    let letters: Vec<(u16, usize)> = (0..=log_floor(p, i))
        .map(|b| (b as u16, (p as usize).pow(b)))
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(Word::new(), 0usize)];
    while let Some((w, wt)) = stack.pop() {
        if wt == i {
            out.push(w);
            continue;
        }
        for &(b, q) in &letters {
            if wt + q <= i {
                let mut x = w.clone();
                x.push(b);
                stack.push((x, wt + q));
            }
        }
    }
    out.sort();
    out
}

/// Degree-`i` products of `E_{p^b}`, keyed by the word in `b`.
fn p_power_products(
    pres: &HopfPresentation,
    curve: &Curve,
    p: u64,
    i: usize,
) -> Vec<(Word, NcPoly)> {
    p_power_words(p, i)
        .into_iter()
        .map(|w| {
            let mut acc = NcPoly::one();
            for &b in &w {
                acc = pres.mul(&acc, &curve.get((p as usize).pow(b as u32)));
            }
            (w, acc)
        })
        .collect()
}

/// Whether `E_i` lies in the subalgebra generated by the `E_{p^b}`, `p^b ≤ i`.
pub fn minimality_holds(pres: &HopfPresentation, curve: &Curve, p: u64, i: usize) -> bool {
    let f = pres.field();
    let mut b = PolyBasis::new(pres.order());
    for (_, x) in p_power_products(pres, curve, p, i) {
        b.insert(&x, f);
    }
    b.contains(&curve.get(i), f)
}

/// Whether `E_i − Z_i` only uses letters `Z_j` with `j < i`.
pub fn lower_letters_only(curve: &Curve, i: usize, field: &Field) -> bool {
    let d = curve.get(i).sub(&NcPoly::letter((i - 1) as u16), field);
    let ok = d.words().all(|w| w.iter().all(|l| (*l as usize) < i - 1));
    ok
}

/// Whether every word of `x` has weight `i` in the Leibniz grading.
pub fn is_homogeneous(x: &NcPoly, i: usize) -> bool {
    x.words()
        .all(|w| w.iter().map(|l| *l as usize + 1).sum::<usize>() == i)
}

type CurveCache = Mutex<HashMap<(u64, usize, TieBreak), Arc<Vec<NcPoly>>>>;

fn curve_cache() -> &'static CurveCache {
    static CACHE: OnceLock<CurveCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// A minimal curve `E_1..E_N` in `𝒵(N)` with the default tie-break.
pub fn minimal_curve(p: u64, n: usize, field: &Field) -> Result<Curve, LeibnizError> {
    minimal_curve_with(p, n, field, TieBreak::LexLeast)
}

/// A minimal curve `E_1..E_N` in `𝒵(N)`.
///
/// `E_i` for a `p`-power `i` is sought in `Z_i + span(words in lighter letters)`;
/// any other `E_i` in the degree-`i` part of the algebra generated by the
/// `E_{p^b}`. Coefficients lie in the prime field, so the result is computed
/// once per `(p, N, tie)` and shared across fields of characteristic `p`.
pub fn minimal_curve_with(
    p: u64,
    n: usize,
    field: &Field,
    tie: TieBreak,
) -> Result<Curve, LeibnizError> {
    if field.characteristic() != p {
        return Err(LeibnizError::FieldMismatch {
            expected: p,
            found: field.characteristic(),
        });
    }
    if n == 0 {
        return Err(LeibnizError::Empty);
    }
    if let Some(hit) = curve_cache().lock().unwrap().get(&(p, n, tie)) {
        return Ok(Curve::new(hit.as_ref().clone()));
    }
    let prime = Field::prime(p).expect("prime");
    let pres = leibniz_presentation(n, &prime);
    let mut curve = Curve::default();
    for i in 1..=n {
        let sols = if is_p_power(p, i) {
            let lighter: Vec<NcPoly> = pres
                .words_up_to(i as u32)
                .into_iter()
                .filter(|w| pres.weight(w) == i as u32 && w.iter().all(|l| (*l as usize) < i - 1))
                .map(|w| NcPoly::monomial(w, Fe::ONE))
                .collect();
            extend_curve_affine(&pres, &curve, &NcPoly::letter((i - 1) as u16), &lighter)
        } else {
            let span: Vec<NcPoly> = p_power_products(&pres, &curve, p, i)
                .into_iter()
                .map(|(_, x)| x)
                .collect();
            extend_curve(&pres, &curve, &span)
        };
        let sols = sols.ok_or(LeibnizError::Unsolvable(i))?;
        curve.elements.push(sols.choose(&pres, tie));
    }
    curve_cache()
        .lock()
        .unwrap()
        .insert((p, n, tie), Arc::new(curve.elements.clone()));
    Ok(curve)
}

/// Expresses `E_j` as a polynomial in letters `b` standing for `E_{p^b}`.
fn express(pres: &HopfPresentation, curve: &Curve, p: u64, j: usize) -> Option<NcPoly> {
    let f = pres.field();
    let products = p_power_products(pres, curve, p, j);
    let target = curve.get(j);
    let mut words: Vec<Word> = products
        .iter()
        .flat_map(|(_, x)| x.words().cloned())
        .collect();
    words.extend(target.words().cloned());
    words.sort();
    words.dedup();
    let cols: Vec<Vec<Fe>> = products
        .iter()
        .map(|(_, x)| words.iter().map(|w| x.coeff(w)).collect())
        .collect();
    let m = Matrix::from_cols(words.len(), &cols);
    let b: Vec<Fe> = words.iter().map(|w| target.coeff(w)).collect();
    let (x, _) = m.solve(&b, f)?;
    Some(NcPoly::from_terms(
        products.into_iter().map(|(w, _)| w).zip(x),
        f,
    ))
}

/// `𝒩𝒲_ℓ`: generators `E1, Ep, .., E{p^(ℓ−1)}` with the coproduct inherited from a minimal curve.
pub fn nw_presentation(l: usize, p: u64, field: &Field) -> Result<HopfPresentation, LeibnizError> {
    nw_presentation_with(l, p, field, TieBreak::LexLeast)
}

pub fn nw_presentation_with(
    l: usize,
    p: u64,
    field: &Field,
    tie: TieBreak,
) -> Result<HopfPresentation, LeibnizError> {
    if l == 0 {
        return Err(LeibnizError::Empty);
    }
    let top = (p as usize).pow(l as u32 - 1);
    let curve = minimal_curve_with(p, top, field, tie)?;
    let pres = leibniz_presentation(top, field);
    let mut exprs = vec![NcPoly::one()];
    for j in 1..top {
        exprs.push(express(&pres, &curve, p, j).ok_or(LeibnizError::ExpressionFailure(j))?);
    }
    let generators = (0..l)
        .map(|a| {
            let q = (p as usize).pow(a as u32);
            Generator::new(format!("E{q}"), q as u32)
        })
        .collect();
    let reduced = (0..l)
        .map(|a| {
            let q = (p as usize).pow(a as u32);
            let mut t = TensorSquare::zero();
            for i in 1..q {
                t.add_assign_scaled(
                    &TensorSquare::pure(&exprs[i], &exprs[q - i], field),
                    Fe::ONE,
                    field,
                );
            }
            t
        })
        .collect();
    Ok(
        HopfPresentation::from_reduced(field.clone(), generators, reduced, false)
            .expect("lighter letters only"),
    )
}
