//! Verschiebung on the dual of a local algebra, its kernel filtration,
//! Jordan chains, and the resulting count of Witt factors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::LocalAlgebra;
use crate::field::Fe;
use crate::hopf::{Generator, HopfError, HopfPresentation};
use crate::matrix::EchelonBasis;
use crate::ncpoly::TensorSquare;
use crate::semilinear::SemilinearMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewmanError {
    #[error("filtration counts {formula:?} disagree with chain lengths {chains:?}")]
    InternalInconsistency {
        formula: BTreeMap<u32, u32>,
        chains: BTreeMap<u32, u32>,
    },
    #[error("basis is not adapted to the m-adic filtration: {0}")]
    NotAdapted(HopfError),
}

/// `A*` on the basis `η, e_1..e_n`; index 0 is `η`.
///
/// `delta[k]` lists `(i, j, c)` with `Δ b_k = Σ c · b_i ⊗ b_j`.
#[derive(Debug, Clone)]
pub struct DualCoalgebra {
    pub algebra: LocalAlgebra,
    pub delta: Vec<Vec<(usize, usize, Fe)>>,
}

impl DualCoalgebra {
    pub fn dim(&self) -> usize {
        self.delta.len()
    }

    /// Evaluation at `1`.
    pub fn counit(&self, k: usize) -> Fe {
        if k == 0 {
            Fe::ONE
        } else {
            Fe::ZERO
        }
    }

    /// `(Δ⊗id)Δ = (id⊗Δ)Δ` on every basis element.
    pub fn is_coassociative(&self) -> bool {
        let f = self.algebra.field();
        let n = self.dim();
        (0..n).all(|k| {
            let mut l = vec![Fe::ZERO; n * n * n];
            let mut r = vec![Fe::ZERO; n * n * n];
            for &(i, j, c) in &self.delta[k] {
                for &(a, b, d) in &self.delta[i] {
                    let s = &mut l[(a * n + b) * n + j];
                    *s = f.add(*s, f.mul(c, d));
                }
                for &(a, b, d) in &self.delta[j] {
                    let s = &mut r[(i * n + a) * n + b];
                    *s = f.add(*s, f.mul(c, d));
                }
            }
            l == r
        })
    }
}

/// Transposes multiplication: `⟨Δξ, a⊗b⟩ = ⟨ξ, ab⟩`.
pub fn dual_coalgebra(a: &LocalAlgebra) -> DualCoalgebra {
    let n = a.dim();
    let mut delta = vec![vec![(0, 0, Fe::ONE)]];
    for h in 0..n {
        let mut row = vec![(h + 1, 0, Fe::ONE), (0, h + 1, Fe::ONE)];
        for i in 0..n {
            for j in 0..n {
                let c = a.constant(i, j, h);
                if !c.is_zero() {
                    row.push((i + 1, j + 1, c));
                }
            }
        }
        delta.push(row);
    }
    DualCoalgebra {
        algebra: a.clone(),
        delta,
    }
}

/// Verschiebung on `m*`: `Ver(λ)(a) = λ(a^p)^{1/p}`.
///
/// The matrix is the transposed Frobenius matrix with inverse Frobenius
/// applied to its entries, and the twist is `−1`.
pub fn ver_dual(a: &LocalAlgebra) -> SemilinearMap {
    let f = a.field();
    let fr = a.frobenius_power(1);
    let m = fr.matrix.transpose().frobenius(f, -1);
    SemilinearMap::new(f.clone(), m, -1)
}

/// `d_i = dim Ker Ver^i` for `i = 0..=h+1`.
pub fn filtration_dims(a: &LocalAlgebra) -> Vec<usize> {
    let n = a.dim();
    let h = a.height() as usize;
    let v = ver_dual(a);
    let mut out = Vec::with_capacity(h + 2);
    let mut acc = SemilinearMap::identity(a.field().clone(), n);
    for _ in 0..=h + 1 {
        out.push(n - acc.rank());
        acc = v.compose(&acc).expect("square");
    }
    out
}

/// Chains `(b_0, .., b_r)` with `Ver b_i = b_{i−1}` and `Ver b_0 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularBasis {
    pub chains: Vec<Vec<Vec<Fe>>>,
}

impl RegularBasis {
    /// Multiset of chain lengths.
    pub fn length_counts(&self) -> BTreeMap<u32, u32> {
        let mut m = BTreeMap::new();
        for c in &self.chains {
            *m.entry(c.len() as u32).or_insert(0) += 1;
        }
        m
    }

    /// Checks the chain relations and that the union is a basis of `m*`.
    pub fn check(&self, ver: &SemilinearMap) -> bool {
        let f = &ver.field;
        let n = ver.shape().0;
        let zero = vec![Fe::ZERO; n];
        let mut span = EchelonBasis::new(n);
        for chain in &self.chains {
            for (i, b) in chain.iter().enumerate() {
                let expect = if i == 0 { &zero } else { &chain[i - 1] };
                if ver.apply(b) != *expect || !span.insert(b, f) {
                    return false;
                }
            }
        }
        span.len() == n
    }
}

/// Jordan chains for the nilpotent semilinear `Ver`, longest first.
///
/// At each level `ℓ`, kernel vectors of `Ver^ℓ` are scanned in order and a new
/// chain starts at any vector independent of `Ker Ver^{ℓ−1}` and of the level-`ℓ`
/// members of longer chains.
pub fn regular_basis(a: &LocalAlgebra) -> RegularBasis {
    let f = a.field();
    let n = a.dim();
    let v = ver_dual(a);
    let h = a.height() as usize;
    let kernels: Vec<Vec<Vec<Fe>>> = (0..=h).map(|i| v.power(i as u32).kernel().1).collect();
    let mut used: Vec<Vec<Vec<Fe>>> = vec![Vec::new(); h + 1];
    let mut chains = Vec::new();
    for level in (1..=h).rev() {
        let mut w = EchelonBasis::new(n);
        for x in kernels[level - 1].iter().chain(&used[level]) {
            w.insert(x, f);
        }
        for x in &kernels[level] {
            if w.contains(x, f) {
                continue;
            }
            w.insert(x, f);
            let mut chain = vec![x.clone()];
            for k in 1..level {
                let next = v.apply(&chain[k - 1]);
                used[level - k].push(next.clone());
                chain.push(next);
            }
            chain.reverse();
            chains.push(chain);
        }
    }
    RegularBasis { chains }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub length: u32,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SigmaDecomposition {
    pub counts: BTreeMap<u32, u32>,
    pub height: u32,
}

impl SigmaDecomposition {
    pub fn factors(&self) -> Vec<Factor> {
        self.counts
            .iter()
            .map(|(l, c)| Factor {
                length: *l,
                count: *c,
            })
            .collect()
    }

    /// `Σ ℓ·N_ℓ`.
    pub fn weighted_total(&self) -> u32 {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }

    pub fn max_length(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out {
            height: u32,
            factors: Vec<Factor>,
        }
        let out = Out {
            height: self.height,
            factors: self.factors(),
        };
        serde_json::to_string(&out).expect("serializable")
    }
}

/// `N_ℓ = 2d_ℓ − d_{ℓ+1} − d_{ℓ−1}`, zero entries omitted.
pub fn counts_from_dims(dims: &[usize]) -> BTreeMap<u32, u32> {
    let mut m = BTreeMap::new();
    for l in 1..dims.len().saturating_sub(1) {
        let c = 2 * dims[l] as i64 - dims[l + 1] as i64 - dims[l - 1] as i64;
        if c != 0 {
            m.insert(l as u32, c as u32);
        }
    }
    m
}

/// Counts from the filtration, cross-checked against the chain lengths.
pub fn decompose_sigma(a: &LocalAlgebra) -> Result<SigmaDecomposition, NewmanError> {
    let formula = counts_from_dims(&filtration_dims(a));
    let chains = regular_basis(a).length_counts();
    if formula != chains {
        return Err(NewmanError::InternalInconsistency { formula, chains });
    }
    Ok(SigmaDecomposition {
        counts: formula,
        height: a.height(),
    })
}

/// Coradical level of each `e_h`: least `j` with `e_h` vanishing on `m^{j+1}`.
pub fn coradical_weights(a: &LocalAlgebra) -> Vec<u32> {
    let powers = a.power_filtration();
    (0..a.dim())
        .map(|h| {
            (1..=powers.len())
                .find(|&j| {
                    powers
                        .get(j)
                        .is_none_or(|b| b.vectors().iter().all(|v| v[h].is_zero()))
                })
                .unwrap_or(powers.len()) as u32
        })
        .collect()
}

/// `H_A = T(m*)` with `Δe_h = e_h⊗1 + 1⊗e_h + Σ c^h_{ij} e_i⊗e_j`.
pub fn h_a_presentation(a: &LocalAlgebra) -> Result<HopfPresentation, NewmanError> {
    let f = a.field();
    let n = a.dim();
    let weights = coradical_weights(a);
    let generators = (0..n)
        .map(|h| Generator::new(format!("e{}", h + 1), weights[h]))
        .collect();
    let reduced = (0..n)
        .map(|h| {
            let mut t = TensorSquare::zero();
            for i in 0..n {
                for j in 0..n {
                    t.add_term(vec![i as u16], vec![j as u16], a.constant(i, j, h), f);
                }
            }
            t
        })
        .collect();
    HopfPresentation::from_reduced(f.clone(), generators, reduced, false)
        .map_err(NewmanError::NotAdapted)
}

/// Floor-formula oracle for `k[t]/(t^{m+1})`: `⌊m/p^{ℓ+1}⌋ + ⌊m/p^{ℓ−1}⌋ − 2⌊m/p^ℓ⌋`.
pub fn truncated_counts_oracle(p: u64, m: u64) -> BTreeMap<u32, u32> {
    let mut out = BTreeMap::new();
    let mut l = 1u32;
    while p.pow(l - 1) <= m {
        let c = m / p.pow(l + 1) + m / p.pow(l - 1) - 2 * (m / p.pow(l));
        if c != 0 {
            out.insert(l, c as u32);
        }
        l += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unit;
    use crate::field::{make_field, Field};
    use crate::matrix::Matrix;
    use crate::ncpoly::NcPoly;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn tp(p: u64, order: usize) -> LocalAlgebra {
        LocalAlgebra::truncated_poly(&f(p), order).unwrap()
    }

    fn e(n: usize, j: usize) -> Vec<Fe> {
        unit(n, j)
    }

    #[test]
    fn dual_coalgebra_examples() {
        let k = LocalAlgebra::truncated_poly(&f(2), 1).unwrap();
        let d = dual_coalgebra(&k);
        assert_eq!(d.delta, vec![vec![(0, 0, Fe::ONE)]]);
        let d = dual_coalgebra(&tp(2, 4));
        let mut extra: Vec<_> = d.delta[3]
            .iter()
            .filter(|(i, j, _)| *i != 0 && *j != 0)
            .collect();
        extra.sort();
        assert_eq!(extra, [&(1, 2, Fe::ONE), &(2, 1, Fe::ONE)]);
        assert!(d.is_coassociative());
        let sq = dual_coalgebra(&LocalAlgebra::square_zero(&f(3), 2));
        assert!(sq.delta.iter().skip(1).all(|r| r.len() == 2));
    }

    #[test]
    fn ver_dual_examples() {
        let v = ver_dual(&tp(2, 4));
        assert_eq!(v.apply(&e(3, 1)), e(3, 0));
        assert_eq!(v.apply(&e(3, 0)), vec![Fe::ZERO; 3]);
        assert_eq!(v.apply(&e(3, 2)), vec![Fe::ZERO; 3]);
        assert!(ver_dual(&LocalAlgebra::square_zero(&f(2), 3)).is_zero());
        let v = ver_dual(&tp(3, 4));
        assert_eq!(v.apply(&e(3, 2)), e(3, 0));
        assert!(v.apply(&e(3, 1)).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn ver_dual_satisfies_duality_over_f4() {
        // Ver(ξ)(a) = ξ(a^p)^{1/p} on every basis vector a.
        let f4 = make_field(2, 2, None).unwrap();
        let a = LocalAlgebra::truncated_poly(&f4, 6).unwrap();
        let v = ver_dual(&a);
        let u = f4.generator().unwrap();
        let xi = vec![u, Fe::ONE, f4.mul(u, u), Fe::ZERO, u];
        let vx = v.apply(&xi);
        for (j, got) in vx.iter().enumerate() {
            let ap = a.pow_m(&unit(5, j), 2);
            let val = ap
                .iter()
                .zip(&xi)
                .fold(Fe::ZERO, |s, (x, y)| f4.add(s, f4.mul(*x, *y)));
            assert_eq!(*got, f4.frobenius(val, -1));
        }
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration_dims(&tp(2, 4)), [0, 2, 3, 3]);
        assert_eq!(
            filtration_dims(&LocalAlgebra::square_zero(&f(2), 2)),
            [0, 2, 2]
        );
        assert_eq!(filtration_dims(&tp(2, 8)), [0, 4, 6, 7, 7]);
    }

    #[test]
    fn regular_basis_examples() {
        let rb = regular_basis(&tp(2, 4));
        assert_eq!(rb.chains, vec![vec![e(3, 0), e(3, 1)], vec![e(3, 2)]]);
        assert!(rb.check(&ver_dual(&tp(2, 4))));
        let rb = regular_basis(&LocalAlgebra::square_zero(&f(2), 2));
        assert_eq!(rb.chains, vec![vec![e(2, 0)], vec![e(2, 1)]]);
        assert!(regular_basis(&tp(2, 1)).chains.is_empty());
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_sigma(&tp(2, 4)).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 1), (2, 1)]));
        assert_eq!(d.height, 2);
        for p in [2, 3, 5] {
            let d = decompose_sigma(&LocalAlgebra::square_zero(&f(p), 3)).unwrap();
            assert_eq!(d.counts, BTreeMap::from([(1, 3)]));
        }
        let d = decompose_sigma(&tp(2, 1)).unwrap();
        assert!(d.counts.is_empty());
        assert_eq!(d.height, 0);
        assert_eq!(d.to_json(), r#"{"height":0,"factors":[]}"#);
    }

    #[test]
    fn floor_oracle_agrees() {
        for p in [2u64, 3, 5] {
            for m in 0..=20u64 {
                let a = tp(p, m as usize + 1);
                let d = decompose_sigma(&a).unwrap();
                assert_eq!(d.counts, truncated_counts_oracle(p, m), "p={p} m={m}");
                assert_eq!(d.weighted_total() as u64, m);
                assert_eq!(d.max_length(), d.height);
            }
        }
    }

    #[test]
    fn h_a_examples() {
        let field = f(2);
        let h = h_a_presentation(&tp(2, 4)).unwrap();
        assert_eq!(
            h.generators().iter().map(|g| g.weight).collect::<Vec<_>>(),
            [1, 2, 3]
        );
        let z = crate::leibniz::leibniz_presentation(3, &field);
        for g in 0..3 {
            assert_eq!(h.reduced_coproduct(g), z.reduced_coproduct(g));
        }
        let sq = h_a_presentation(&LocalAlgebra::square_zero(&field, 2)).unwrap();
        assert!((0..2).all(|g| sq.reduced_coproduct(g).is_zero()));
        // Basis {t, t + t^2} of k[t]/(t^3) is not adapted to the m-adic filtration.
        let p = Matrix::from_rows(&[vec![Fe::ONE, Fe::ONE], vec![Fe::ZERO, Fe::ONE]]);
        let bad = tp(2, 3).change_basis(&p).unwrap();
        assert!(matches!(
            h_a_presentation(&bad),
            Err(NewmanError::NotAdapted(_))
        ));
    }

    #[test]
    fn h_a_verschiebung_matches_ver_dual() {
        for p in [2u64, 3] {
            for order in 2..=8 {
                let a = tp(p, order);
                let h = h_a_presentation(&a).unwrap();
                let v = ver_dual(&a);
                for j in 0..a.dim() {
                    let col = v.apply(&unit(a.dim(), j));
                    let expect = NcPoly::from_terms(
                        col.into_iter()
                            .enumerate()
                            .map(|(k, c)| (vec![k as u16], c)),
                        a.field(),
                    );
                    assert_eq!(h.verschiebung(&NcPoly::letter(j as u16)), expect);
                }
            }
        }
    }
}
