//! Finite local commutative algebras `A = k·1 ⊕ m` given by structure
//! constants `a_i a_j = Σ_h c^h_{ij} a_h` on a basis of the maximal ideal.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Embedding, Fe, Field};
use crate::matrix::{EchelonBasis, Matrix};
use crate::semilinear::SemilinearMap;

/// Upper bound on standard monomials enumerated for a monomial quotient.
const MAX_STANDARD_BOX: usize = 1 << 20;

/// User-facing description of a local algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// The residue field itself, `A = k`.
    Point {},
    /// `k[t]/(t^order)`.
    TruncatedPoly { order: usize },
    /// `k[x_1..x_r]` modulo a cofinite monomial ideal, generators as exponent vectors.
    MonomialQuotient { vars: usize, ideal: Vec<Vec<u32>> },
    /// Raw constants `[i, j, h, c]` (1-based) meaning `c^h_{ij} = c`.
    Table {
        dim: usize,
        constants: Vec<(usize, usize, usize, i64)>,
    },
}

/// First failing invariant of a structure-constant table. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("maximal ideal is not nilpotent (m^{power} has dimension {dim})")]
    NotLocal { power: usize, dim: usize },
    #[error("commutativity fails for basis pair ({0}, {1})")]
    Commutativity(usize, usize),
    #[error("associativity fails for basis triple ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("monomial ideal is not cofinite: variable {0} is not nilpotent")]
    NotCofinite(usize),
    #[error("the ideal is the whole ring")]
    UnitIdeal,
    #[error("not a local algebra: {0}")]
    NotLocal(Violation),
    #[error("invalid structure constants: {0}")]
    InvalidConstants(Violation),
    #[error("malformed algebra description: {0}")]
    Malformed(String),
    #[error("elements live over different fields or algebras")]
    FieldMismatch,
    #[error("coordinate vector has length {found}, expected {expected}")]
    ShapeMismatch { expected: usize, found: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct LocalAlgebra {
    field: Field,
    n: usize,
    labels: Vec<String>,
    // c[(i * n + j) * n + h] = c^h_{ij}, 0-based
    constants: Vec<Fe>,
}

impl fmt::Debug for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalAlgebra")
            .field("field", &self.field)
            .field("labels", &self.labels)
            .finish()
    }
}

/// An element `scalar·1 + Σ m_i a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub field: Field,
    pub scalar: Fe,
    pub mcoords: Vec<Fe>,
}

impl AlgebraElement {
    pub fn new(field: Field, scalar: Fe, mcoords: Vec<Fe>) -> Self {
        Self {
            field,
            scalar,
            mcoords,
        }
    }
}

/// Builds and validates the algebra described by `spec`.
pub fn build(spec: &AlgebraSpec, field: &Field) -> Result<LocalAlgebra, AlgebraError> {
    LocalAlgebra::build(spec, field)
}

impl LocalAlgebra {
    /// Builds from dense 0-based constants `c[(i*n + j)*n + h]` and validates.
    pub fn from_constants(
        field: Field,
        labels: Vec<String>,
        constants: Vec<Fe>,
    ) -> Result<LocalAlgebra, AlgebraError> {
        let n = labels.len();
        if constants.len() != n * n * n {
            return Err(AlgebraError::Malformed(format!(
                "expected {} constants, found {}",
                n * n * n,
                constants.len()
            )));
        }
        let alg = LocalAlgebra {
            field,
            n,
            labels,
            constants,
        };
        match alg.validate() {
            Ok(()) => Ok(alg),
            Err(v @ Violation::NotLocal { .. }) => Err(AlgebraError::NotLocal(v)),
            Err(v) => Err(AlgebraError::InvalidConstants(v)),
        }
    }

    pub fn build(spec: &AlgebraSpec, field: &Field) -> Result<LocalAlgebra, AlgebraError> {
        match spec {
            AlgebraSpec::Point {} => Self::from_constants(field.clone(), vec![], vec![]),
            AlgebraSpec::TruncatedPoly { order } => Self::truncated_poly(field, *order),
            AlgebraSpec::MonomialQuotient { vars, ideal } => {
                Self::monomial_quotient(field, *vars, ideal)
            }
            AlgebraSpec::Table { dim, constants } => {
                let n = *dim;
                let mut c = vec![Fe::ZERO; n * n * n];
                for &(i, j, h, v) in constants {
                    if !(1..=n).contains(&i) || !(1..=n).contains(&j) || !(1..=n).contains(&h) {
                        return Err(AlgebraError::Malformed(format!(
                            "constant index ({i}, {j}, {h}) outside 1..={n}"
                        )));
                    }
                    c[((i - 1) * n + (j - 1)) * n + (h - 1)] = field.from_int(v);
                }
                let labels = (1..=n).map(|i| format!("a{i}")).collect();
                Self::from_constants(field.clone(), labels, c)
            }
        }
    }

    /// `k[t]/(t^order)`, basis `t, t^2, ..., t^{order-1}`.
    pub fn truncated_poly(field: &Field, order: usize) -> Result<LocalAlgebra, AlgebraError> {
        if order == 0 {
            return Err(AlgebraError::UnitIdeal);
        }
        let n = order - 1;
        let mut c = vec![Fe::ZERO; n * n * n];
        for i in 1..=n {
            for j in 1..=n {
                if i + j <= n {
                    c[((i - 1) * n + (j - 1)) * n + (i + j - 1)] = Fe::ONE;
                }
            }
        }
        let labels = (1..=n)
            .map(|i| {
                if i == 1 {
                    "t".to_string()
                } else {
                    format!("t^{i}")
                }
            })
            .collect();
        Self::from_constants(field.clone(), labels, c)
    }

    /// `k[t]/(t^2)` style square-zero algebra of embedding dimension `r`.
    pub fn square_zero(field: &Field, r: usize) -> LocalAlgebra {
        let labels = (1..=r).map(|i| format!("x{i}")).collect();
        Self::from_constants(field.clone(), labels, vec![Fe::ZERO; r * r * r])
            .expect("square-zero is local")
    }

    pub fn monomial_quotient(
        field: &Field,
        vars: usize,
        ideal: &[Vec<u32>],
    ) -> Result<LocalAlgebra, AlgebraError> {
        for g in ideal {
            if g.len() != vars {
                return Err(AlgebraError::Malformed(format!(
                    "ideal generator {g:?} has {} exponents, expected {vars}",
                    g.len()
                )));
            }
            if g.iter().all(|e| *e == 0) {
                return Err(AlgebraError::UnitIdeal);
            }
        }
        let mut bounds = Vec::with_capacity(vars);
        for v in 0..vars {
            let pure = ideal
                .iter()
                .filter(|g| g.iter().enumerate().all(|(i, e)| (i == v) == (*e > 0)))
                .map(|g| g[v])
                .min()
                .ok_or(AlgebraError::NotCofinite(v + 1))?;
            bounds.push(pure);
        }
        let boxsize = bounds
            .iter()
            .try_fold(1usize, |acc, b| acc.checked_mul(*b as usize));
        if boxsize.is_none_or(|s| s > MAX_STANDARD_BOX) {
            return Err(AlgebraError::Malformed(
                "too many standard monomials".into(),
            ));
        }
        let in_ideal = |m: &[u32]| ideal.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b));
        let mut monos: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; vars];
        loop {
            if cur.iter().any(|e| *e > 0) && !in_ideal(&cur) {
                monos.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == vars {
                    break;
                }
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
            if k == vars {
                break;
            }
        }
        // graded, then lexicographically descending (x before y)
        monos.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let index: HashMap<&[u32], usize> =
            monos.iter().enumerate().map(|(i, m)| (&m[..], i)).collect();
        let n = monos.len();
        let mut c = vec![Fe::ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod: Vec<u32> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                if let Some(&h) = index.get(&prod[..]) {
                    c[(i * n + j) * n + h] = Fe::ONE;
                }
            }
        }
        let names: Vec<String> = if vars <= 3 {
            ["x", "y", "z"][..vars]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (1..=vars).map(|i| format!("x{i}")).collect()
        };
        let labels = monos
            .iter()
            .map(|m| {
                m.iter()
                    .enumerate()
                    .filter(|(_, e)| **e > 0)
                    .map(|(v, e)| {
                        if *e == 1 {
                            names[v].clone()
                        } else {
                            format!("{}^{e}", names[v])
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        Self::from_constants(field.clone(), labels, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `dim m`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c^h_{ij}`, 0-based.
    pub fn constant(&self, i: usize, j: usize, h: usize) -> Fe {
        self.constants[(i * self.n + j) * self.n + h]
    }

    /// Coordinates of `a_i a_j` in `m`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Fe] {
        let s = (i * self.n + j) * self.n;
        &self.constants[s..s + self.n]
    }

    /// Product of two elements of `m` given by coordinates.
    pub fn mul_m(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = f.mul(*xi, *yj);
                for (o, c) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !c.is_zero() {
                        *o = f.add(*o, f.mul(s, *c));
                    }
                }
            }
        }
        out
    }

    /// `x^e` for `x ∈ m`, `e ≥ 1`.
    pub fn pow_m(&self, x: &[Fe], e: u64) -> Vec<Fe> {
        assert!(e >= 1);
        let mut result: Option<Vec<Fe>> = None;
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => self.mul_m(&r, &base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_m(&base, &base);
            }
        }
        result.unwrap()
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::new(self.field.clone(), Fe::ONE, vec![Fe::ZERO; self.n])
    }

    pub fn element(&self, scalar: Fe, mcoords: Vec<Fe>) -> AlgebraElement {
        AlgebraElement::new(self.field.clone(), scalar, mcoords)
    }

    pub fn multiply(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        if x.field != self.field || y.field != self.field {
            return Err(AlgebraError::FieldMismatch);
        }
        for v in [&x.mcoords, &y.mcoords] {
            if v.len() != self.n {
                return Err(AlgebraError::ShapeMismatch {
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        let f = &self.field;
        let mm = self.mul_m(&x.mcoords, &y.mcoords);
        let m = (0..self.n)
            .map(|h| {
                let t = f.add(f.mul(x.scalar, y.mcoords[h]), f.mul(y.scalar, x.mcoords[h]));
                f.add(t, mm[h])
            })
            .collect();
        Ok(self.element(f.mul(x.scalar, y.scalar), m))
    }

    /// `a -> a^{p^i}` on `m` as a semilinear map of twist `i`.
    pub fn frobenius_power(&self, i: u32) -> SemilinearMap {
        assert!(i >= 1);
        let p = self.field.characteristic();
        let cols: Vec<Vec<Fe>> = (0..self.n)
            .map(|j| {
                let mut v = unit(self.n, j);
                for _ in 0..i {
                    if v.iter().all(|x| x.is_zero()) {
                        break;
                    }
                    v = self.pow_m(&v, p);
                }
                v
            })
            .collect();
        SemilinearMap::new(
            self.field.clone(),
            Matrix::from_cols(self.n, &cols),
            i as i64,
        )
    }

    /// Least `h` with `Fr^h(m) = 0`; `0` when `m = 0`.
    pub fn height(&self) -> u32 {
        let p = self.field.characteristic();
        let mut vs: Vec<Vec<Fe>> = (0..self.n).map(|j| unit(self.n, j)).collect();
        let mut h = 0;
        while vs.iter().any(|v| v.iter().any(|x| !x.is_zero())) {
            vs = vs.iter().map(|v| self.pow_m(v, p)).collect();
            h += 1;
        }
        h
    }

    /// Subspaces `m, m^2, m^3, ...` down to (and excluding) zero.
    pub fn power_filtration(&self) -> Vec<EchelonBasis> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut cur = EchelonBasis::new(self.n);
        for j in 0..self.n {
            cur.insert(&unit(self.n, j), f);
        }
        for _ in 0..=self.n {
            if cur.is_empty() {
                break;
            }
            let mut next = EchelonBasis::new(self.n);
            for v in cur.vectors() {
                for i in 0..self.n {
                    next.insert(&self.mul_m(&unit(self.n, i), v), f);
                }
            }
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }

    /// Checks nilpotency of `m`, then commutativity, then associativity.
    pub fn validate(&self) -> Result<(), Violation> {
        let f = &self.field;
        let n = self.n;
        // m^{k+1} = m · m^k, must vanish by k = n + 1
        let mut cur = EchelonBasis::new(n);
        for j in 0..n {
            cur.insert(&unit(n, j), f);
        }
        for k in 1..=n + 1 {
            if cur.is_empty() {
                break;
            }
            if k == n + 1 {
                return Err(Violation::NotLocal {
                    power: k,
                    dim: cur.len(),
                });
            }
            let mut next = EchelonBasis::new(n);
            for v in cur.vectors() {
                for i in 0..n {
                    next.insert(&self.mul_m(&unit(n, i), v), f);
                }
            }
            cur = next;
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    return Err(Violation::Commutativity(i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for l in 0..n {
                    let left = self.mul_m(&ij, &unit(n, l));
                    let right = self.mul_m(&unit(n, i), self.basis_product(j, l));
                    if left != right {
                        return Err(Violation::Associativity(i + 1, j + 1, l + 1));
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-expresses the algebra in the basis `a'_i = Σ_k P[k][i] a_k`.
    pub fn change_basis(&self, p: &Matrix) -> Option<LocalAlgebra> {
        let f = &self.field;
        let pinv = p.inverse(f)?;
        let n = self.n;
        let mut c = vec![Fe::ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul_m(&p.col(i), &p.col(j));
                let coords = pinv.apply(&prod, f);
                c[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(&coords);
            }
        }
        let labels = (1..=n).map(|i| format!("a{i}")).collect();
        Some(LocalAlgebra {
            field: self.field.clone(),
            n,
            labels,
            constants: c,
        })
    }

    /// The same constants read over a larger field.
    pub fn base_change(&self, emb: &Embedding) -> LocalAlgebra {
        assert_eq!(emb.small, self.field);
        LocalAlgebra {
            field: emb.big.clone(),
            n: self.n,
            labels: self.labels.clone(),
            constants: self.constants.iter().map(|c| emb.apply(*c)).collect(),
        }
    }
}

pub(crate) fn unit(n: usize, j: usize) -> Vec<Fe> {
    let mut v = vec![Fe::ZERO; n];
    v[j] = Fe::ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn table(dim: usize, constants: &[(usize, usize, usize, i64)]) -> AlgebraSpec {
        AlgebraSpec::Table {
            dim,
            constants: constants.to_vec(),
        }
    }

    #[test]
    fn truncated_poly_constants() {
        let a = build(&AlgebraSpec::TruncatedPoly { order: 4 }, &f(2)).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["t", "t^2", "t^3"]);
        for i in 0..3 {
            for j in 0..3 {
                for h in 0..3 {
                    let expected = if h == i + j + 1 { Fe::ONE } else { Fe::ZERO };
                    assert_eq!(a.constant(i, j, h), expected, "c^{h}_{i}{j}");
                }
            }
        }
    }

    #[test]
    fn square_zero_monomial_quotient() {
        let a = build(
            &AlgebraSpec::MonomialQuotient {
                vars: 2,
                ideal: vec![vec![2, 0], vec![1, 1], vec![0, 2]],
            },
            &f(2),
        )
        .unwrap();
        assert_eq!(a.dim(), 2);
        assert!((0..2).all(|i| (0..2).all(|j| a.basis_product(i, j).iter().all(|c| c.is_zero()))));
    }

    #[test]
    fn monomial_quotient_basis_order() {
        let a = LocalAlgebra::monomial_quotient(&f(3), 2, &[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(a.labels(), &["x", "y", "x*y", "y^2", "x*y^2"]);
        // x * y^2 = x*y^2
        assert_eq!(a.basis_product(0, 3), &unit(5, 4)[..]);
        // x * x = 0
        assert!(a.basis_product(0, 0).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn rejects_bad_monomial_ideals() {
        assert_eq!(
            LocalAlgebra::monomial_quotient(&f(2), 2, &[vec![2, 0], vec![1, 1]]).unwrap_err(),
            AlgebraError::NotCofinite(2)
        );
        assert_eq!(
            LocalAlgebra::monomial_quotient(&f(2), 1, &[vec![0]]).unwrap_err(),
            AlgebraError::UnitIdeal
        );
    }

    #[test]
    fn idempotent_table_is_not_local() {
        let err = build(&table(1, &[(1, 1, 1, 1)]), &f(2)).unwrap_err();
        assert!(matches!(
            err,
            AlgebraError::NotLocal(Violation::NotLocal { .. })
        ));
    }

    #[test]
    fn validate_reports_first_violation() {
        let a = LocalAlgebra::truncated_poly(&f(2), 4).unwrap();
        assert_eq!(a.validate(), Ok(()));

        let err = build(&table(2, &[(1, 2, 1, 1)]), &f(2)).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::InvalidConstants(Violation::Commutativity(1, 2))
        );

        // a1 a1 = a2, a1 a2 = a2 a1 = a1: the orbit of a1 never dies
        let err = build(
            &table(2, &[(1, 1, 2, 1), (1, 2, 1, 1), (2, 1, 1, 1)]),
            &f(2),
        )
        .unwrap_err();
        assert!(matches!(err, AlgebraError::NotLocal(_)));

        // commutative and nilpotent, but (a1 a1) a2 = a3 while a1 (a1 a2) = 0
        let err = build(&table(3, &[(1, 1, 2, 1), (2, 2, 3, 1)]), &f(2)).unwrap_err();
        assert_eq!(
            err,
            AlgebraError::InvalidConstants(Violation::Associativity(1, 1, 2))
        );
    }

    #[test]
    fn multiply_examples() {
        let a = LocalAlgebra::truncated_poly(&f(2), 4).unwrap();
        let t = a.element(Fe::ZERO, unit(3, 0));
        let t3 = a.element(Fe::ZERO, unit(3, 2));
        let zero = a.element(Fe::ZERO, vec![Fe::ZERO; 3]);
        assert_eq!(a.multiply(&t, &t3).unwrap(), zero);
        let one_t = a.element(Fe::ONE, unit(3, 0));
        assert_eq!(
            a.multiply(&one_t, &one_t).unwrap(),
            a.element(Fe::ONE, unit(3, 1))
        );

        let sz = LocalAlgebra::square_zero(&f(2), 2);
        let x = sz.element(Fe::ONE, unit(2, 0));
        let y = sz.element(Fe::ONE, unit(2, 1));
        assert_eq!(
            sz.multiply(&x, &y).unwrap(),
            sz.element(Fe::ONE, vec![Fe::ONE, Fe::ONE])
        );
    }

    #[test]
    fn multiply_field_mismatch() {
        let a = LocalAlgebra::truncated_poly(&f(2), 3).unwrap();
        let other = AlgebraElement::new(f(3), Fe::ONE, vec![Fe::ZERO; 2]);
        assert_eq!(
            a.multiply(&a.one(), &other).unwrap_err(),
            AlgebraError::FieldMismatch
        );
    }

    #[test]
    fn frobenius_power_examples() {
        let a = LocalAlgebra::truncated_poly(&f(2), 4).unwrap();
        let fr = a.frobenius_power(1);
        assert_eq!(fr.matrix.col(0), unit(3, 1));
        assert!(fr.matrix.col(1).iter().all(|x| x.is_zero()));
        assert_eq!(fr.rank(), 1);
        assert!(a.frobenius_power(2).is_zero());
        assert!(LocalAlgebra::square_zero(&f(3), 2)
            .frobenius_power(1)
            .is_zero());
    }

    #[test]
    fn height_examples() {
        assert_eq!(LocalAlgebra::truncated_poly(&f(2), 4).unwrap().height(), 2);
        assert_eq!(LocalAlgebra::truncated_poly(&f(3), 4).unwrap().height(), 2);
        for p in [2, 3, 5] {
            assert_eq!(LocalAlgebra::square_zero(&f(p), 2).height(), 1);
        }
        assert_eq!(LocalAlgebra::truncated_poly(&f(2), 1).unwrap().height(), 0);
    }

    #[test]
    fn height_law_truncated() {
        for p in [2u64, 3, 5] {
            for m in 1..=20usize {
                let a = LocalAlgebra::truncated_poly(&f(p), m + 1).unwrap();
                // ceil(log_p(m+1)) by integer search
                let mut h = 0;
                while (p as usize).pow(h) < m + 1 {
                    h += 1;
                }
                assert_eq!(a.height(), h, "p={p} m={m}");
            }
        }
    }

    #[test]
    fn frobenius_rank_floor_count() {
        for p in [2u64, 3, 5] {
            for m in 1..=20usize {
                let a = LocalAlgebra::truncated_poly(&f(p), m + 1).unwrap();
                for i in 1..=4u32 {
                    let q = (p as usize).pow(i);
                    let oracle = (1..=m).filter(|j| j * q <= m).count();
                    assert_eq!(a.frobenius_power(i).rank(), oracle, "p={p} m={m} i={i}");
                }
            }
        }
    }

    fn random_element(a: &LocalAlgebra, rng: &mut impl Rng) -> AlgebraElement {
        let q = a.field().size() as u32;
        let mut r = || a.field().from_packed(rng.gen_range(0..q)).unwrap();
        let s = r();
        let m = (0..a.dim()).map(|_| r()).collect();
        a.element(s, m)
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f9 = crate::field::make_field(3, 2, None).unwrap();
        let algebras = vec![
            LocalAlgebra::truncated_poly(&f(2), 5).unwrap(),
            LocalAlgebra::truncated_poly(&f(3), 4).unwrap(),
            LocalAlgebra::square_zero(&f(2), 3),
            LocalAlgebra::monomial_quotient(&f(2), 2, &[vec![2, 0], vec![0, 3]]).unwrap(),
            LocalAlgebra::truncated_poly(&f9, 3).unwrap(),
        ];
        for a in &algebras {
            for _ in 0..1000 {
                let (x, y, z) = (
                    random_element(a, &mut rng),
                    random_element(a, &mut rng),
                    random_element(a, &mut rng),
                );
                let xy = a.multiply(&x, &y).unwrap();
                assert_eq!(xy, a.multiply(&y, &x).unwrap());
                assert_eq!(
                    a.multiply(&xy, &z).unwrap(),
                    a.multiply(&x, &a.multiply(&y, &z).unwrap()).unwrap()
                );
                assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
            }
        }
    }

    #[test]
    fn change_basis_preserves_validity_and_height() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = LocalAlgebra::truncated_poly(&f(3), 6).unwrap();
        for _ in 0..10 {
            let p = loop {
                let m = Matrix::new(
                    5,
                    5,
                    (0..25)
                        .map(|_| f(3).from_int(rng.gen_range(0..3)))
                        .collect(),
                );
                if m.is_invertible(&f(3)) {
                    break m;
                }
            };
            let b = a.change_basis(&p).unwrap();
            assert_eq!(b.validate(), Ok(()));
            assert_eq!(b.height(), a.height());
        }
    }

    #[test]
    fn spec_json_roundtrip_and_strictness() {
        let s: AlgebraSpec =
            serde_json::from_str(r#"{"kind":"truncated_poly","order":4}"#).unwrap();
        assert_eq!(s, AlgebraSpec::TruncatedPoly { order: 4 });
        let s: AlgebraSpec =
            serde_json::from_str(r#"{"kind":"table","dim":1,"constants":[[1,1,1,0]]}"#).unwrap();
        assert!(matches!(s, AlgebraSpec::Table { dim: 1, .. }));
        assert!(serde_json::from_str::<AlgebraSpec>(r#"{"kind":"point","extra":1}"#).is_err());
        assert!(serde_json::from_str::<AlgebraSpec>(
            r#"{"kind":"truncated_poly","order":4,"x":0}"#
        )
        .is_err());
    }
}
