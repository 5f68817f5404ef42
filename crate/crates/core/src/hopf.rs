//! Presentations of pointed irreducible cocommutative Hopf algebras.
//!
//! A presentation is a free (or free commutative) algebra on weighted
//! generators together with the reduced coproduct of each generator:
//! `Δg = g⊗1 + 1⊗g + Δ̄g`, where `Δ̄g` only involves lighter generators.
//! Everything else (Δ on words, ε, S) is derived from that table.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{make_field, Fe, Field};
use crate::matrix::Matrix;
use crate::ncpoly::{NcPoly, PolyBasis, TensorSquare, Word, WordOrder};
use crate::semilinear::SemilinearMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("letter {letter} does not name a generator (only {count} declared)")]
    UnknownGenerator { letter: u16, count: usize },
    #[error("generator {generator} has weight 0")]
    ZeroWeight { generator: String },
    #[error("duplicate generator name {0}")]
    DuplicateName(String),
    #[error("coproduct of {generator} uses {letter}, which is not lighter")]
    IllFounded { generator: String, letter: String },
    #[error("coproduct correction of {generator} has a constant leg")]
    CounitViolation { generator: String },
    #[error("presentations are over different fields")]
    FieldMismatch,
    #[error("invalid presentation json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, weight: u32) -> Self {
        Self {
            name: name.into(),
            weight,
        }
    }
}

/// One summand `c · (u ⊗ v)` of a reduced coproduct.
#[derive(Debug, Clone)]
pub struct Correction {
    pub coeff: Fe,
    pub left: NcPoly,
    pub right: NcPoly,
}

impl Correction {
    pub fn new(coeff: Fe, left: NcPoly, right: NcPoly) -> Self {
        Self { coeff, left, right }
    }
}

#[derive(Debug, Clone)]
pub struct HopfPresentation {
    field: Field,
    generators: Vec<Generator>,
    reduced: Vec<TensorSquare>,
    commutative: bool,
    antipode_memo: Vec<OnceLock<NcPoly>>,
}

impl PartialEq for HopfPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.generators == other.generators
            && self.reduced == other.reduced
            && self.commutative == other.commutative
    }
}

impl Eq for HopfPresentation {}

impl HopfPresentation {
    /// Builds and validates a presentation from correction triples.
    pub fn new(
        field: Field,
        generators: Vec<Generator>,
        corrections: Vec<Vec<Correction>>,
        commutative: bool,
    ) -> Result<Self, HopfError> {
        let reduced = corrections
            .iter()
            .map(|list| {
                let mut t = TensorSquare::zero();
                for c in list {
                    t.add_assign_scaled(
                        &TensorSquare::pure(&c.left, &c.right, &field),
                        c.coeff,
                        &field,
                    );
                }
                t
            })
            .collect();
        Self::from_reduced(field, generators, reduced, commutative)
    }

    /// Builds and validates a presentation from the reduced coproducts `Δ̄g`.
    pub fn from_reduced(
        field: Field,
        generators: Vec<Generator>,
        mut reduced: Vec<TensorSquare>,
        commutative: bool,
    ) -> Result<Self, HopfError> {
        assert_eq!(
            generators.len(),
            reduced.len(),
            "one coproduct per generator"
        );
        let count = generators.len();
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if g.weight == 0 {
                return Err(HopfError::ZeroWeight {
                    generator: g.name.clone(),
                });
            }
            if !seen.insert(g.name.as_str()) {
                return Err(HopfError::DuplicateName(g.name.clone()));
            }
        }
        for (h, t) in reduced.iter().enumerate() {
            for (u, v, _) in t.terms() {
                if u.is_empty() || v.is_empty() {
                    return Err(HopfError::CounitViolation {
                        generator: generators[h].name.clone(),
                    });
                }
                for &l in u.iter().chain(v.iter()) {
                    let lg = generators
                        .get(l as usize)
                        .ok_or(HopfError::UnknownGenerator { letter: l, count })?;
                    if lg.weight >= generators[h].weight {
                        return Err(HopfError::IllFounded {
                            generator: generators[h].name.clone(),
                            letter: lg.name.clone(),
                        });
                    }
                }
            }
        }
        if commutative {
            for t in reduced.iter_mut() {
                *t = project_tensor(t, &field);
            }
        }
        Ok(Self {
            antipode_memo: (0..count).map(|_| OnceLock::new()).collect(),
            field,
            generators,
            reduced,
            commutative,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_commutative(&self) -> bool {
        self.commutative
    }

    pub fn name(&self, g: u16) -> &str {
        &self.generators[g as usize].name
    }

    pub fn index_of(&self, name: &str) -> Option<u16> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u16)
    }

    /// The reduced coproduct `Δg − g⊗1 − 1⊗g`.
    pub fn reduced_coproduct(&self, g: u16) -> &TensorSquare {
        &self.reduced[g as usize]
    }

    pub fn order(&self) -> WordOrder {
        WordOrder::new(self.generators.iter().map(|g| g.weight).collect())
    }

    pub fn weight(&self, w: &[u16]) -> u32 {
        w.iter().map(|g| self.generators[*g as usize].weight).sum()
    }

    /// Canonical form of a word: sorted when the presentation is commutative.
    pub fn normalize(&self, w: &mut Word) {
        if self.commutative {
            w.sort_unstable();
        }
    }

    /// Image of `x` in the canonical monomial basis of this presentation.
    pub fn project(&self, x: &NcPoly) -> NcPoly {
        if self.commutative {
            project_poly(x, &self.field)
        } else {
            x.clone()
        }
    }

    pub fn check_letters(&self, x: &NcPoly) -> Result<(), HopfError> {
        let count = self.generators.len();
        for w in x.words() {
            if let Some(&l) = w.iter().find(|l| **l as usize >= count) {
                return Err(HopfError::UnknownGenerator { letter: l, count });
            }
        }
        Ok(())
    }

    pub fn mul(&self, x: &NcPoly, y: &NcPoly) -> NcPoly {
        self.project(&x.mul(y, &self.field))
    }

    pub fn pow(&self, x: &NcPoly, k: u32) -> NcPoly {
        let mut acc = NcPoly::one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// `Δg` for a single generator.
    pub fn generator_coproduct(&self, g: u16) -> TensorSquare {
        let mut t = self.reduced[g as usize].clone();
        t.add_term(vec![g], Word::new(), Fe::ONE, &self.field);
        t.add_term(Word::new(), vec![g], Fe::ONE, &self.field);
        t
    }

    fn word_coproduct(&self, w: &[u16]) -> TensorSquare {
        let mut acc = TensorSquare::one();
        for &g in w {
            acc = acc.mul_with(&self.generator_coproduct(g), &self.field, |x| {
                self.normalize(x)
            });
        }
        acc
    }

    fn coproduct_unchecked(&self, x: &NcPoly) -> TensorSquare {
        let mut out = TensorSquare::zero();
        for (w, c) in x.terms() {
            out.add_assign_scaled(&self.word_coproduct(w), c, &self.field);
        }
        out
    }

    /// Multiplicative extension of the generator table.
    pub fn coproduct(&self, x: &NcPoly) -> Result<TensorSquare, HopfError> {
        self.check_letters(x)?;
        Ok(self.coproduct_unchecked(x))
    }

    pub fn counit(&self, x: &NcPoly) -> Fe {
        x.coeff(&[])
    }

    /// `S(g) = −g − Σ c·S(u)·v`, cached per generator.
    pub fn generator_antipode(&self, g: u16) -> &NcPoly {
        self.antipode_memo[g as usize].get_or_init(|| {
            let f = &self.field;
            let mut s = NcPoly::letter(g).neg(f);
            for (u, v, c) in self.reduced[g as usize].terms() {
                let term = self.mul(
                    &self.antipode_word(u),
                    &NcPoly::monomial(v.clone(), Fe::ONE),
                );
                s.add_assign_scaled(&term, f.neg(c), f);
            }
            s
        })
    }

    fn antipode_word(&self, w: &[u16]) -> NcPoly {
        let mut acc = NcPoly::one();
        for &g in w.iter().rev() {
            acc = self.mul(&acc, self.generator_antipode(g));
        }
        acc
    }

    /// Anti-multiplicative extension of the generator antipode.
    pub fn antipode(&self, x: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in x.terms() {
            out.add_assign_scaled(&self.antipode_word(w), c, &self.field);
        }
        out
    }

    /// All canonical words of weight at most `bound`, in word order.
    pub fn words_up_to(&self, bound: u32) -> Vec<Word> {
        let mut out = vec![Word::new()];
        let mut frontier = vec![(Word::new(), 0u32)];
        while let Some((w, wt)) = frontier.pop() {
            let start = if self.commutative {
                w.last().copied().unwrap_or(0)
            } else {
                0
            };
            for g in start..self.generators.len() as u16 {
                let nw = wt + self.generators[g as usize].weight;
                if nw <= bound {
                    let mut x = w.clone();
                    x.push(g);
                    out.push(x.clone());
                    frontier.push((x, nw));
                }
            }
        }
        let order = self.order();
        out.sort_by(|a, b| order.cmp(a, b));
        out
    }

    /// Checks the Hopf axioms on every word of weight at most `degree_bound`.
    pub fn check_axioms(&self, degree_bound: u32) -> AxiomReport {
        let f = &self.field;
        let words = self.words_up_to(degree_bound);
        let mut checked = 0;
        for w in &words {
            checked += 1;
            let x = NcPoly::monomial(w.clone(), Fe::ONE);
            let d = self.word_coproduct(w);
            let fail = |axiom| AxiomReport {
                words_checked: checked,
                failure: Some(AxiomFailure {
                    axiom,
                    witness: w.clone(),
                }),
            };

            let mut left = Tensor3::new();
            let mut right = Tensor3::new();
            for (u, v, c) in d.terms() {
                for (a, b, e) in self.word_coproduct(u).terms() {
                    left.add(a.clone(), b.clone(), v.clone(), f.mul(c, e), f);
                }
                for (a, b, e) in self.word_coproduct(v).terms() {
                    right.add(u.clone(), a.clone(), b.clone(), f.mul(c, e), f);
                }
            }
            if left != right {
                return fail(Axiom::Coassociativity);
            }

            let mut lc = NcPoly::zero();
            let mut rc = NcPoly::zero();
            let mut ls = NcPoly::zero();
            let mut rs = NcPoly::zero();
            for (u, v, c) in d.terms() {
                if u.is_empty() {
                    lc.add_term(v.clone(), c, f);
                }
                if v.is_empty() {
                    rc.add_term(u.clone(), c, f);
                }
                let uw = NcPoly::monomial(u.clone(), c);
                let vw = NcPoly::monomial(v.clone(), Fe::ONE);
                ls.add_assign_scaled(&self.mul(&self.antipode_word(u), &vw), c, f);
                rs.add_assign_scaled(&self.mul(&uw, &self.antipode_word(v)), Fe::ONE, f);
            }
            if lc != x {
                return fail(Axiom::LeftCounit);
            }
            if rc != x {
                return fail(Axiom::RightCounit);
            }
            let unit = NcPoly::monomial(Word::new(), self.counit(&x));
            if ls != unit {
                return fail(Axiom::LeftAntipode);
            }
            if rs != unit {
                return fail(Axiom::RightAntipode);
            }
            if d.swap() != d {
                return fail(Axiom::Cocommutativity);
            }
        }
        AxiomReport {
            words_checked: checked,
            failure: None,
        }
    }

    /// Checks `Δ∘S = (S⊗S)∘τ∘Δ` on every generator of weight at most `degree_bound`.
    pub fn check_antipode_antimorphism(&self, degree_bound: u32) -> Option<u16> {
        let f = &self.field;
        (0..self.generators.len() as u16)
            .filter(|g| self.generators[*g as usize].weight <= degree_bound)
            .find(|&g| {
                let lhs = self.coproduct_unchecked(self.generator_antipode(g));
                let mut rhs = TensorSquare::zero();
                for (u, v, c) in self.generator_coproduct(g).terms() {
                    let t = TensorSquare::pure(&self.antipode_word(v), &self.antipode_word(u), f);
                    rhs.add_assign_scaled(&t, c, f);
                }
                lhs != rhs
            })
    }

    /// A finite subcoalgebra containing `1` and `x`, closed under taking tensor legs of `Δ`.
    pub fn finite_subcoalgebra(&self, x: &NcPoly) -> Subcoalgebra {
        let f = &self.field;
        let x = self.project(x);
        let mut basis = PolyBasis::new(self.order());
        let mut work = Vec::new();
        for v in [NcPoly::one(), x] {
            if basis.insert(&v, f).is_some() {
                work.push(v);
            }
        }
        while let Some(v) = work.pop() {
            let d = self.coproduct_unchecked(&v);
            for c in d
                .left_components(f)
                .into_iter()
                .chain(d.right_components(f))
            {
                if basis.insert(&c, f).is_some() {
                    work.push(c);
                }
            }
        }
        basis.sort();
        let pivots = basis.pivots().to_vec();
        let elements = basis.into_rows();
        let index: HashMap<&Word, usize> = pivots.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let delta = elements
            .iter()
            .map(|b| {
                let mut row = Vec::new();
                for (u, v, c) in self.coproduct_unchecked(b).terms() {
                    if let (Some(&i), Some(&j)) = (index.get(u), index.get(v)) {
                        row.push((i, j, c));
                    }
                }
                row
            })
            .collect();
        Subcoalgebra {
            field: self.field.clone(),
            elements,
            pivots,
            delta,
        }
    }

    /// Verschiebung, via the Frobenius of the dual of a finite subcoalgebra.
    pub fn verschiebung(&self, x: &NcPoly) -> NcPoly {
        let sub = self.finite_subcoalgebra(x);
        let coords = sub
            .coordinates(&self.project(x))
            .expect("x lies in its subcoalgebra");
        let ver = sub.verschiebung_map();
        sub.combine(&ver.apply(&coords))
    }

    /// Commutative quotient: same generators, words sorted.
    pub fn abelianize(&self) -> HopfPresentation {
        Self::from_reduced(
            self.field.clone(),
            self.generators.clone(),
            self.reduced.clone(),
            true,
        )
        .expect("abelianization of a valid presentation is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PresentationJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, HopfError> {
        let raw: PresentationJson =
            serde_json::from_str(text).map_err(|e| HopfError::Json(e.to_string()))?;
        raw.into_presentation()
    }

    /// Text form: terms in word order, letters joined by `.`.
    pub fn fmt_poly(&self, x: &NcPoly) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let order = self.order();
        let mut terms: Vec<(&Word, Fe)> = x.terms().collect();
        terms.sort_by(|a, b| order.cmp(a.0, b.0));
        terms
            .into_iter()
            .map(|(w, c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter()
                        .map(|g| self.name(*g))
                        .collect::<Vec<_>>()
                        .join(".")
                };
                if c == Fe::ONE {
                    word
                } else if self.field.degree() == 1 {
                    if w.is_empty() {
                        self.field.fmt_elem(c)
                    } else {
                        format!("{}*{}", self.field.fmt_elem(c), word)
                    }
                } else {
                    format!("({})*{}", self.field.fmt_elem(c), word)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn fmt_tensor(&self, t: &TensorSquare) -> String {
        if t.is_zero() {
            return "0".to_string();
        }
        let order = self.order();
        let mut terms: Vec<_> = t.terms().collect();
        terms.sort_by(|a, b| order.cmp(a.0, b.0).then_with(|| order.cmp(a.1, b.1)));
        terms
            .into_iter()
            .map(|(u, v, c)| {
                let leg = |w: &Word| self.fmt_poly(&NcPoly::monomial(w.clone(), Fe::ONE));
                let body = format!("{}⊗{}", leg(u), leg(v));
                if c == Fe::ONE {
                    body
                } else {
                    format!("{}*{}", self.field.fmt_elem(c), body)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for HopfPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.generators.iter().enumerate() {
            let t = &self.reduced[i];
            write!(f, "Δ{} = {}⊗1 + 1⊗{}", g.name, g.name, g.name)?;
            if !t.is_zero() {
                write!(f, " + {}", self.fmt_tensor(t))?;
            }
            writeln!(f, "    [weight {}]", g.weight)?;
        }
        Ok(())
    }
}

/// Disjoint union of generators; clashing names in `b` get a `'` suffix.
pub fn free_product(
    a: &HopfPresentation,
    b: &HopfPresentation,
) -> Result<HopfPresentation, HopfError> {
    if a.field != b.field {
        return Err(HopfError::FieldMismatch);
    }
    let shift = a.generators.len() as u16;
    let mut generators = a.generators.clone();
    for g in &b.generators {
        let mut name = g.name.clone();
        while generators.iter().any(|h| h.name == name)
            || b.generators.iter().any(|h| h.name == name && h != g)
        {
            name.push('\'');
        }
        generators.push(Generator::new(name, g.weight));
    }
    let mut reduced = a.reduced.clone();
    for t in &b.reduced {
        let mut s = TensorSquare::zero();
        for (u, v, c) in t.terms() {
            let sh = |w: &Word| w.iter().map(|l| l + shift).collect::<Word>();
            s.add_term(sh(u), sh(v), c, &a.field);
        }
        reduced.push(s);
    }
    HopfPresentation::from_reduced(
        a.field.clone(),
        generators,
        reduced,
        a.commutative && b.commutative,
    )
}

/// Sends every word to its sorted monomial.
pub fn project_poly(x: &NcPoly, field: &Field) -> NcPoly {
    x.map_words(field, |w| {
        let mut s = w.clone();
        s.sort_unstable();
        s
    })
}

fn project_tensor(t: &TensorSquare, field: &Field) -> TensorSquare {
    let mut out = TensorSquare::zero();
    for (u, v, c) in t.terms() {
        let (mut a, mut b) = (u.clone(), v.clone());
        a.sort_unstable();
        b.sort_unstable();
        out.add_term(a, b, c, field);
    }
    out
}

#[derive(Debug, Default, PartialEq, Eq)]
struct Tensor3(BTreeMap<(Word, Word, Word), Fe>);

impl Tensor3 {
    fn new() -> Self {
        Self::default()
    }

    fn add(&mut self, a: Word, b: Word, c: Word, x: Fe, f: &Field) {
        if x.is_zero() {
            return;
        }
        match self.0.entry((a, b, c)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), x);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Coassociativity,
    LeftCounit,
    RightCounit,
    LeftAntipode,
    RightAntipode,
    Cocommutativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Coassociativity => "coassociativity",
            Axiom::LeftCounit => "left counit",
            Axiom::RightCounit => "right counit",
            Axiom::LeftAntipode => "left antipode",
            Axiom::RightAntipode => "right antipode",
            Axiom::Cocommutativity => "cocommutativity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub witness: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub words_checked: usize,
    pub failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// A finite-dimensional subcoalgebra with a reduced echelon basis.
///
/// `delta[k]` lists `(i, j, c)` with `Δ b_k = Σ c · b_i ⊗ b_j`.
#[derive(Debug, Clone)]
pub struct Subcoalgebra {
    field: Field,
    pub elements: Vec<NcPoly>,
    pub pivots: Vec<Word>,
    pub delta: Vec<Vec<(usize, usize, Fe)>>,
}

impl Subcoalgebra {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn coordinates(&self, x: &NcPoly) -> Option<Vec<Fe>> {
        let coords: Vec<Fe> = self.pivots.iter().map(|w| x.coeff(w)).collect();
        (self.combine(&coords) == *x).then_some(coords)
    }

    pub fn combine(&self, coords: &[Fe]) -> NcPoly {
        let mut out = NcPoly::zero();
        for (b, c) in self.elements.iter().zip(coords) {
            out.add_assign_scaled(b, *c, &self.field);
        }
        out
    }

    /// `F[k][j] = β_j^p(b_k)` where `β` is the dual basis and powers are convolution powers.
    pub fn dual_frobenius(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let n = self.dim();
        let p = f.characteristic();
        // lam[j][k] = β_j^m(b_k)
        let mut lam: Vec<Vec<Fe>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| if j == k { Fe::ONE } else { Fe::ZERO })
                    .collect()
            })
            .collect();
        for _ in 1..p {
            let mut next = vec![vec![Fe::ZERO; n]; n];
            for (k, row) in self.delta.iter().enumerate() {
                for &(i, j, c) in row {
                    let t = f.mul(c, lam[j][i]);
                    next[j][k] = f.add(next[j][k], t);
                }
            }
            lam = next;
        }
        (0..n)
            .map(|k| (0..n).map(|j| lam[j][k]).collect())
            .collect()
    }

    /// Verschiebung in the basis `elements`: `Ver(x)_j = (Σ_k F[k][j] x_k)^{1/p}`.
    pub fn verschiebung_map(&self) -> SemilinearMap {
        let fr = self.dual_frobenius();
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (k, row) in fr.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(j, k)] = self.field.frobenius(*v, -1);
            }
        }
        SemilinearMap::new(self.field.clone(), m, -1)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldJson {
    p: u64,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Int(i64),
    Coords(Vec<i64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: CoeffJson,
    left: Vec<String>,
    right: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    name: String,
    weight: u32,
    corrections: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresentationJson {
    field: FieldJson,
    commutative: bool,
    generators: Vec<GeneratorJson>,
}

impl From<&HopfPresentation> for PresentationJson {
    fn from(p: &HopfPresentation) -> Self {
        let f = &p.field;
        let order = p.order();
        let names = |w: &Word| w.iter().map(|g| p.name(*g).to_string()).collect();
        let coeff = |c: Fe| {
            if f.degree() == 1 {
                CoeffJson::Int(f.to_int(c).unwrap() as i64)
            } else {
                CoeffJson::Coords(f.coords(c).into_iter().map(i64::from).collect())
            }
        };
        let generators = p
            .generators
            .iter()
            .zip(&p.reduced)
            .map(|(g, t)| {
                let mut terms: Vec<_> = t.terms().collect();
                terms.sort_by(|a, b| order.cmp(a.0, b.0).then_with(|| order.cmp(a.1, b.1)));
                GeneratorJson {
                    name: g.name.clone(),
                    weight: g.weight,
                    corrections: terms
                        .into_iter()
                        .map(|(u, v, c)| TermJson {
                            coeff: coeff(c),
                            left: names(u),
                            right: names(v),
                        })
                        .collect(),
                }
            })
            .collect();
        PresentationJson {
            field: FieldJson {
                p: f.characteristic(),
                n: f.degree(),
                modulus: f.modulus().map(|m| m.iter().map(|c| *c as i64).collect()),
            },
            commutative: p.commutative,
            generators,
        }
    }
}

impl PresentationJson {
    fn into_presentation(self) -> Result<HopfPresentation, HopfError> {
        let field = make_field(self.field.p, self.field.n, self.field.modulus.as_deref())
            .map_err(|e| HopfError::Json(e.to_string()))?;
        let generators: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator::new(&g.name, g.weight))
            .collect();
        let lookup = |name: &String| {
            generators
                .iter()
                .position(|g| &g.name == name)
                .map(|i| i as u16)
                .ok_or_else(|| HopfError::Json(format!("unknown generator {name}")))
        };
        let mut reduced = Vec::new();
        for g in &self.generators {
            let mut t = TensorSquare::zero();
            for term in &g.corrections {
                let c = match &term.coeff {
                    CoeffJson::Int(v) => field.from_int(*v),
                    CoeffJson::Coords(v) => field.from_coords(v),
                };
                let u = term.left.iter().map(lookup).collect::<Result<Word, _>>()?;
                let v = term.right.iter().map(lookup).collect::<Result<Word, _>>()?;
                t.add_term(u, v, c, &field);
            }
            reduced.push(t);
        }
        HopfPresentation::from_reduced(field, generators, reduced, self.commutative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    /// The Leibniz algebra on `m` generators, built by hand here to keep the tests local.
    fn leibniz(m: u16, field: &Field) -> HopfPresentation {
        let generators = (1..=m)
            .map(|h| Generator::new(format!("Z{h}"), h as u32))
            .collect();
        let reduced = (1..=m)
            .map(|h| {
                let mut t = TensorSquare::zero();
                for i in 1..h {
                    t.add_term(vec![i - 1], vec![h - i - 1], Fe::ONE, field);
                }
                t
            })
            .collect();
        HopfPresentation::from_reduced(field.clone(), generators, reduced, false).unwrap()
    }

    fn w(letters: &[u16]) -> NcPoly {
        NcPoly::monomial(letters.to_vec(), Fe::ONE)
    }

    #[test]
    fn coproduct_examples() {
        let z = leibniz(4, &f(2));
        let d = z.coproduct(&w(&[1])).unwrap();
        assert_eq!(z.fmt_tensor(&d), "1⊗Z2 + Z1⊗Z1 + Z2⊗1");
        assert_eq!(z.coproduct(&NcPoly::one()).unwrap(), TensorSquare::one());
        let d = z.coproduct(&w(&[0, 0])).unwrap();
        assert_eq!(z.fmt_tensor(&d), "1⊗Z1.Z1 + Z1.Z1⊗1");
        assert!(matches!(
            z.coproduct(&w(&[9])),
            Err(HopfError::UnknownGenerator { letter: 9, .. })
        ));
    }

    #[test]
    fn counit_examples() {
        let z = leibniz(3, &f(2));
        assert_eq!(z.counit(&NcPoly::one()), Fe::ONE);
        assert_eq!(z.counit(&w(&[2])), Fe::ZERO);
        assert_eq!(z.counit(&NcPoly::one().add(&w(&[0, 1]), &f(2))), Fe::ONE);
    }

    #[test]
    fn antipode_examples() {
        let z = leibniz(3, &f(2));
        assert_eq!(z.fmt_poly(z.generator_antipode(1)), "Z2 + Z1.Z1");
        let z3 = leibniz(3, &f(3));
        assert_eq!(z3.fmt_poly(z3.generator_antipode(0)), "2*Z1");
        assert_eq!(
            z3.fmt_poly(z3.generator_antipode(2)),
            "2*Z3 + Z2.Z1 + Z1.Z2 + 2*Z1.Z1.Z1"
        );
    }

    #[test]
    fn leibniz_axioms() {
        for m in 1..=6 {
            let r = leibniz(m, &f(2)).check_axioms(6);
            assert!(r.passed(), "{m}: {r:?}");
        }
        assert!(leibniz(4, &f(3)).check_axioms(4).passed());
        assert_eq!(leibniz(5, &f(2)).check_antipode_antimorphism(5), None);
    }

    #[test]
    fn ill_founded_rejected() {
        let field = f(2);
        let mut t = TensorSquare::zero();
        t.add_term(vec![0], vec![0], Fe::ONE, &field);
        let r = HopfPresentation::from_reduced(
            field.clone(),
            vec![Generator::new("e1", 1)],
            vec![t],
            false,
        );
        assert!(matches!(r, Err(HopfError::IllFounded { .. })));
        let mut t = TensorSquare::zero();
        t.add_term(vec![], vec![0], Fe::ONE, &field);
        let r = HopfPresentation::from_reduced(
            field,
            vec![Generator::new("a", 1), Generator::new("b", 2)],
            vec![TensorSquare::zero(), t],
            false,
        );
        assert!(matches!(r, Err(HopfError::CounitViolation { .. })));
    }

    #[test]
    fn broken_coassociativity_is_reported() {
        // Δc = c⊗1 + 1⊗c + a⊗b with a, b primitive is coassociative but not cocommutative.
        let field = f(2);
        let mut t = TensorSquare::zero();
        t.add_term(vec![0], vec![1], Fe::ONE, &field);
        let p = HopfPresentation::from_reduced(
            field,
            vec![
                Generator::new("a", 1),
                Generator::new("b", 1),
                Generator::new("c", 2),
            ],
            vec![TensorSquare::zero(), TensorSquare::zero(), t],
            false,
        )
        .unwrap();
        let r = p.check_axioms(2);
        assert_eq!(
            r.failure,
            Some(AxiomFailure {
                axiom: Axiom::Cocommutativity,
                witness: vec![2]
            })
        );
    }

    #[test]
    fn subcoalgebra_examples() {
        let z = leibniz(4, &f(2));
        let s = z.finite_subcoalgebra(&w(&[0]));
        assert_eq!(s.elements, vec![NcPoly::one(), w(&[0])]);
        let s = z.finite_subcoalgebra(&w(&[3]));
        assert_eq!(
            s.elements,
            vec![NcPoly::one(), w(&[0]), w(&[1]), w(&[2]), w(&[3])]
        );
    }

    #[test]
    fn verschiebung_on_leibniz() {
        for p in [2u64, 3] {
            let field = f(p);
            let z = leibniz(8, &field);
            for h in 1..=8u16 {
                let expect = if (h as u64).is_multiple_of(p) {
                    w(&[h / p as u16 - 1])
                } else {
                    NcPoly::zero()
                };
                assert_eq!(z.verschiebung(&w(&[h - 1])), expect, "p={p} h={h}");
            }
            assert_eq!(z.verschiebung(&NcPoly::one()), NcPoly::one());
        }
    }

    #[test]
    fn verschiebung_is_multiplicative_and_semilinear() {
        let f4 = make_field(2, 2, None).unwrap();
        let u = f4.generator().unwrap();
        let z = leibniz(4, &f4);
        let x = w(&[1]).scale(u, &f4);
        let y = w(&[0, 0]).add(&w(&[1]), &f4);
        let vx = z.verschiebung(&x);
        assert_eq!(vx, w(&[0]).scale(f4.frobenius(u, -1), &f4));
        let vxy = z.verschiebung(&z.mul(&x, &y));
        assert_eq!(vxy, z.mul(&vx, &z.verschiebung(&y)));
        let sum = z.verschiebung(&x.add(&y, &f4));
        assert_eq!(sum, vx.add(&z.verschiebung(&y), &f4));
    }

    #[test]
    fn abelianize_projects_commutators() {
        let field = f(2);
        let z = leibniz(3, &field);
        let ab = z.abelianize();
        assert!(ab.project(&w(&[1, 0]).sub(&w(&[0, 1]), &field)).is_zero());
        assert!(ab.check_axioms(5).passed());
        let d = ab.coproduct(&w(&[0, 1])).unwrap();
        assert_eq!(d, ab.coproduct(&w(&[1, 0])).unwrap());
    }

    #[test]
    fn free_product_counts_words() {
        let field = f(3);
        let a = leibniz(1, &field);
        let b = leibniz(2, &field);
        let fp = free_product(&a, &b).unwrap();
        assert_eq!(fp.len(), 3);
        assert_eq!(fp.name(1), "Z1'");
        assert!(fp.check_axioms(4).passed());
        let other = leibniz(1, &f(2));
        assert_eq!(free_product(&a, &other), Err(HopfError::FieldMismatch));
        let two = free_product(&a, &a).unwrap();
        for d in 1..=5u32 {
            let n = two
                .words_up_to(d)
                .iter()
                .filter(|x| x.len() as u32 == d)
                .count();
            assert_eq!(n, 2usize.pow(d));
        }
    }

    #[test]
    fn json_round_trip() {
        let z = leibniz(4, &f(3));
        let s = z.to_json();
        assert_eq!(HopfPresentation::from_json(&s).unwrap(), z);
        let f9 = make_field(3, 2, None).unwrap();
        let mut t = TensorSquare::zero();
        t.add_term(vec![0], vec![0], f9.generator().unwrap(), &f9);
        let p = HopfPresentation::from_reduced(
            f9,
            vec![Generator::new("a", 1), Generator::new("b", 2)],
            vec![TensorSquare::zero(), t],
            true,
        )
        .unwrap();
        assert_eq!(HopfPresentation::from_json(&p.to_json()).unwrap(), p);
        assert!(HopfPresentation::from_json(
            "{\"field\":{\"p\":2,\"n\":1},\"commutative\":false,\"generators\":[],\"x\":1}"
        )
        .is_err());
    }
}
