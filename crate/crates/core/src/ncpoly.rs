//! Sparse noncommutative polynomials (word -> coefficient) and their tensor squares.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::{Fe, Field};

/// A word in the generators of a presentation; the empty word is `1`.
pub type Word = Vec<u16>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, Fe>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Word::new(), Fe::ONE)
    }

    pub fn letter(g: u16) -> Self {
        Self::monomial(vec![g], Fe::ONE)
    }

    pub fn monomial(w: Word, c: Fe) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Fe)>, field: &Field) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c, field);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, Fe)> {
        self.terms.iter().map(|(w, c)| (w, *c))
    }

    pub fn coeff(&self, w: &[u16]) -> Fe {
        self.terms.get(w).copied().unwrap_or(Fe::ZERO)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Word, c: Fe, field: &Field) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &NcPoly, c: Fe, field: &Field) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), field.mul(c, *d), field);
        }
    }

    pub fn add(&self, other: &NcPoly, field: &Field) -> NcPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, Fe::ONE, field);
        out
    }

    pub fn sub(&self, other: &NcPoly, field: &Field) -> NcPoly {
        let mut out = self.clone();
        out.add_assign_scaled(other, field.neg(Fe::ONE), field);
        out
    }

    pub fn neg(&self, field: &Field) -> NcPoly {
        self.scale(field.neg(Fe::ONE), field)
    }

    pub fn scale(&self, c: Fe, field: &Field) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, d)| (w.clone(), field.mul(c, *d)))
                .collect(),
        }
    }

    /// Concatenation product.
    pub fn mul(&self, other: &NcPoly, field: &Field) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, field.mul(*a, *b), field);
            }
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, field: &Field, mut f: impl FnMut(Fe) -> Fe) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(*c))), field)
    }

    /// Applies `f` to every word, merging collisions.
    pub fn map_words(&self, field: &Field, mut f: impl FnMut(&Word) -> Word) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (f(w), *c)), field)
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// `mul(x, y)`: the free-algebra product.
pub fn mul(x: &NcPoly, y: &NcPoly, field: &Field) -> NcPoly {
    x.mul(y, field)
}

/// Element of `H ⊗ H` as a sparse map from word pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorSquare {
    terms: BTreeMap<(Word, Word), Fe>,
}

impl TensorSquare {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut t = Self::zero();
        t.terms.insert((Word::new(), Word::new()), Fe::ONE);
        t
    }

    /// `u ⊗ v` for polynomials `u, v`.
    pub fn pure(u: &NcPoly, v: &NcPoly, field: &Field) -> Self {
        let mut t = Self::zero();
        for (a, x) in u.terms() {
            for (b, y) in v.terms() {
                t.add_term(a.clone(), b.clone(), field.mul(x, y), field);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, Fe)> {
        self.terms.iter().map(|((u, v), c)| (u, v, *c))
    }

    pub fn coeff(&self, u: &[u16], v: &[u16]) -> Fe {
        self.terms
            .get(&(u.to_vec(), v.to_vec()))
            .copied()
            .unwrap_or(Fe::ZERO)
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: Fe, field: &Field) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((u, v)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = field.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &TensorSquare, c: Fe, field: &Field) {
        if c.is_zero() {
            return;
        }
        for ((u, v), d) in &other.terms {
            self.add_term(u.clone(), v.clone(), field.mul(c, *d), field);
        }
    }

    pub fn sub(&self, other: &TensorSquare, field: &Field) -> TensorSquare {
        let mut out = self.clone();
        out.add_assign_scaled(other, field.neg(Fe::ONE), field);
        out
    }

    /// Componentwise product; `normalize` canonicalizes each concatenated leg.
    pub fn mul_with(
        &self,
        other: &TensorSquare,
        field: &Field,
        normalize: impl Fn(&mut Word),
    ) -> TensorSquare {
        let mut out = TensorSquare::zero();
        for ((u1, v1), a) in &self.terms {
            for ((u2, v2), b) in &other.terms {
                let mut u = u1.clone();
                u.extend_from_slice(u2);
                normalize(&mut u);
                let mut v = v1.clone();
                v.extend_from_slice(v2);
                normalize(&mut v);
                out.add_term(u, v, field.mul(*a, *b), field);
            }
        }
        out
    }

    pub fn mul(&self, other: &TensorSquare, field: &Field) -> TensorSquare {
        self.mul_with(other, field, |_| {})
    }

    /// The flip `u ⊗ v -> v ⊗ u`.
    pub fn swap(&self) -> TensorSquare {
        TensorSquare {
            terms: self
                .terms
                .iter()
                .map(|((u, v), c)| ((v.clone(), u.clone()), *c))
                .collect(),
        }
    }

    /// Left tensor components: for each right word `v`, `Σ_u c(u, v) u`.
    pub fn left_components(&self, field: &Field) -> Vec<NcPoly> {
        let mut by_right: BTreeMap<&Word, NcPoly> = BTreeMap::new();
        for ((u, v), c) in &self.terms {
            by_right
                .entry(v)
                .or_default()
                .add_term(u.clone(), *c, field);
        }
        by_right.into_values().collect()
    }

    /// Right tensor components: for each left word `u`, `Σ_v c(u, v) v`.
    pub fn right_components(&self, field: &Field) -> Vec<NcPoly> {
        let mut by_left: BTreeMap<&Word, NcPoly> = BTreeMap::new();
        for ((u, v), c) in &self.terms {
            by_left.entry(u).or_default().add_term(v.clone(), *c, field);
        }
        by_left.into_values().collect()
    }
}

/// Total order on words: by weight, then length, then colexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordOrder {
    weights: Vec<u32>,
}

impl WordOrder {
    pub fn new(weights: Vec<u32>) -> Self {
        Self { weights }
    }

    pub fn weight(&self, w: &[u16]) -> u32 {
        w.iter().map(|g| self.weights[*g as usize]).sum()
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        self.weight(a)
            .cmp(&self.weight(b))
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }

    /// Least word of a nonzero polynomial.
    pub fn leading<'a>(&self, x: &'a NcPoly) -> Option<&'a Word> {
        x.words().min_by(|a, b| self.cmp(a, b))
    }
}

/// Reduced echelon basis of a space of polynomials.
///
/// Each member has coefficient 1 at its pivot word and every other member
/// has coefficient 0 there. A pivot is the least word of the vector at the
/// time it was inserted; later eliminations may add smaller non-pivot words.
#[derive(Debug, Clone)]
pub struct PolyBasis {
    order: WordOrder,
    rows: Vec<NcPoly>,
    pivots: Vec<Word>,
}

impl PolyBasis {
    pub fn new(order: WordOrder) -> Self {
        Self {
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[NcPoly] {
        &self.rows
    }

    pub fn pivots(&self) -> &[Word] {
        &self.pivots
    }

    pub fn reduce(&self, v: &NcPoly, field: &Field) -> NcPoly {
        let mut v = v.clone();
        for (row, pw) in self.rows.iter().zip(&self.pivots) {
            let c = v.coeff(pw);
            if !c.is_zero() {
                v.add_assign_scaled(row, field.neg(c), field);
            }
        }
        v
    }

    pub fn contains(&self, v: &NcPoly, field: &Field) -> bool {
        self.reduce(v, field).is_zero()
    }

    /// Adds `v` if independent. Returns the reduced, unnormalized remainder when the span grew.
    pub fn insert(&mut self, v: &NcPoly, field: &Field) -> Option<NcPoly> {
        let r = self.reduce(v, field);
        let pw = self.order.leading(&r)?.clone();
        let inv = field.inv(r.coeff(&pw)).unwrap();
        let row = r.scale(inv, field);
        for other in self.rows.iter_mut() {
            let c = other.coeff(&pw);
            if !c.is_zero() {
                other.add_assign_scaled(&row, field.neg(c), field);
            }
        }
        self.rows.push(row);
        self.pivots.push(pw);
        Some(r)
    }

    /// Coordinates of a member with respect to `rows()`.
    pub fn coordinates(&self, v: &NcPoly, field: &Field) -> Option<Vec<Fe>> {
        self.contains(v, field)
            .then(|| self.pivots.iter().map(|pw| v.coeff(pw)).collect())
    }

    /// Sorts members by pivot word.
    pub fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by(|a, b| self.order.cmp(&self.pivots[*a], &self.pivots[*b]));
        self.rows = idx.iter().map(|i| self.rows[*i].clone()).collect();
        self.pivots = idx.iter().map(|i| self.pivots[*i].clone()).collect();
    }

    pub fn into_rows(self) -> Vec<NcPoly> {
        self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        let f2 = Field::prime(2).unwrap();
        let z1 = NcPoly::letter(0);
        let z2 = NcPoly::letter(1);
        assert_eq!(z1.mul(&z2, &f2), NcPoly::monomial(vec![0, 1], Fe::ONE));
        let s = z1.add(&z2, &f2);
        let sq = s.mul(&s, &f2);
        assert_eq!(sq.len(), 4);
        for w in [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]] {
            assert_eq!(sq.coeff(&w), Fe::ONE);
        }
        assert_eq!(NcPoly::one().mul(&sq, &f2), sq);
    }

    #[test]
    fn cancellation_drops_terms() {
        let f3 = Field::prime(3).unwrap();
        let x = NcPoly::letter(0);
        let y = x.add(&x, &f3).add(&x, &f3);
        assert!(y.is_zero());
    }

    #[test]
    fn colex_order_puts_z2z1_first() {
        let ord = WordOrder::new(vec![1, 2, 3]);
        assert_eq!(ord.cmp(&[1, 0], &[0, 1]), Ordering::Less);
        assert_eq!(ord.cmp(&[2], &[1, 0]), Ordering::Less);
        assert_eq!(ord.cmp(&[0, 0, 0], &[0, 1]), Ordering::Greater);
        assert_eq!(ord.cmp(&[], &[0]), Ordering::Less);
    }

    #[test]
    fn poly_basis_reduces_and_coordinates() {
        let f2 = Field::prime(2).unwrap();
        let mut b = PolyBasis::new(WordOrder::new(vec![1, 2]));
        let a = NcPoly::from_terms([(vec![0, 1], Fe::ONE), (vec![1, 0], Fe::ONE)], &f2);
        let c = NcPoly::monomial(vec![0, 1], Fe::ONE);
        assert!(b.insert(&a, &f2).is_some());
        assert!(b.insert(&c, &f2).is_some());
        assert!(b.insert(&a.add(&c, &f2), &f2).is_none());
        let coords = b.coordinates(&a, &f2).unwrap();
        let mut rebuilt = NcPoly::zero();
        for (r, x) in b.rows().iter().zip(coords) {
            rebuilt.add_assign_scaled(r, x, &f2);
        }
        assert_eq!(rebuilt, a);
    }

    #[test]
    fn tensor_components() {
        let f2 = Field::prime(2).unwrap();
        let z1 = NcPoly::letter(0);
        let t = TensorSquare::pure(&z1, &NcPoly::one(), &f2);
        let mut t = t;
        t.add_assign_scaled(&TensorSquare::pure(&NcPoly::one(), &z1, &f2), Fe::ONE, &f2);
        assert_eq!(t.swap(), t);
        let left = t.left_components(&f2);
        assert_eq!(left.len(), 2);
    }
}
