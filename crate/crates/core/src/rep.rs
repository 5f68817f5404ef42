//! Finite-dimensional objects `(V, φ)` with `φ = id⊗1 + Σ φ_i⊗a_i`, their
//! tensor product, the module structure over `H_A`, and triples over several
//! local components.

use thiserror::Error;

use crate::algebra::LocalAlgebra;
use crate::field::{Fe, Field};
use crate::matrix::Matrix;
use crate::ncpoly::{NcPoly, TensorSquare};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("expected {expected} square matrices of size {size}")]
    ShapeMismatch { expected: usize, size: usize },
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("intertwiner search needs {needed} candidates, budget is {budget}")]
    SearchBudgetExceeded { needed: u128, budget: u128 },
    #[error("scalar part of component {0} is singular")]
    NotInvertible(usize),
    #[error("V has dimension {v} but W has dimension {w}")]
    DimensionMismatch { v: usize, w: usize },
}

pub const SEARCH_BUDGET: u128 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SAObject {
    pub algebra: LocalAlgebra,
    pub dim: usize,
    pub components: Vec<Matrix>,
}

impl SAObject {
    /// The unit object: one-dimensional, all components zero.
    pub fn unit(a: &LocalAlgebra) -> Self {
        Self {
            algebra: a.clone(),
            dim: 1,
            components: vec![Matrix::zeros(1, 1); a.dim()],
        }
    }

    /// One-dimensional object of the unit `1 + Σ x_i a_i`.
    pub fn from_unit(a: &LocalAlgebra, mcoords: &[Fe]) -> Self {
        Self {
            algebra: a.clone(),
            dim: 1,
            components: mcoords
                .iter()
                .map(|x| Matrix::new(1, 1, vec![*x]))
                .collect(),
        }
    }

    /// `m`-coordinates of a one-dimensional object.
    pub fn unit_coords(&self) -> Option<Vec<Fe>> {
        (self.dim == 1).then(|| self.components.iter().map(|m| m[(0, 0)]).collect())
    }
}

/// Infers the dimension from the matrices; over `A = k` the object is `𝕀`.
pub fn make_sa_object(a: &LocalAlgebra, matrices: Vec<Matrix>) -> Result<SAObject, RepError> {
    let dim = matrices.first().map_or(1, |m| m.rows());
    make_sa_object_with_dim(a, dim, matrices)
}

pub fn make_sa_object_with_dim(
    a: &LocalAlgebra,
    dim: usize,
    matrices: Vec<Matrix>,
) -> Result<SAObject, RepError> {
    let ok =
        dim > 0 && matrices.len() == a.dim() && matrices.iter().all(|m| m.shape() == (dim, dim));
    if !ok {
        return Err(RepError::ShapeMismatch {
            expected: a.dim(),
            size: dim,
        });
    }
    Ok(SAObject {
        algebra: a.clone(),
        dim,
        components: matrices,
    })
}

/// `(φ⊠ψ)_h = id⊗ψ_h + φ_h⊗id + Σ c^h_{ij} φ_i⊗ψ_j` on `V⊗W`.
pub fn tensor_sa(x: &SAObject, y: &SAObject) -> Result<SAObject, RepError> {
    if x.algebra != y.algebra {
        return Err(RepError::AlgebraMismatch);
    }
    let a = &x.algebra;
    let f = a.field();
    let n = a.dim();
    let ix = Matrix::identity(x.dim);
    let iy = Matrix::identity(y.dim);
    let components = (0..n)
        .map(|h| {
            let mut m = ix
                .kron(&y.components[h], f)
                .add(&x.components[h].kron(&iy, f), f)
                .unwrap();
            for i in 0..n {
                for j in 0..n {
                    let c = a.constant(i, j, h);
                    if !c.is_zero() {
                        let t = x.components[i].kron(&y.components[j], f).scale(c, f);
                        m = m.add(&t, f).unwrap();
                    }
                }
            }
            m
        })
        .collect();
    Ok(SAObject {
        algebra: a.clone(),
        dim: x.dim * y.dim,
        components,
    })
}

/// `Ω(X)`: the `H_A`-module with `e_i` acting by `φ_i`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub field: Field,
    pub dim: usize,
    pub actions: Vec<Matrix>,
}

pub fn omega(x: &SAObject) -> ModuleMap {
    ModuleMap {
        field: x.algebra.field().clone(),
        dim: x.dim,
        actions: x.components.clone(),
    }
}

impl ModuleMap {
    /// A word acts by the product of its letters, in the order written.
    pub fn act_word(&self, w: &[u16]) -> Matrix {
        w.iter().fold(Matrix::identity(self.dim), |acc, g| {
            acc.mul(&self.actions[*g as usize], &self.field).unwrap()
        })
    }

    pub fn act(&self, x: &NcPoly) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (w, c) in x.terms() {
            out = out
                .add(&self.act_word(w).scale(c, &self.field), &self.field)
                .unwrap();
        }
        out
    }

    /// Action of `Σ c u⊗v` on `self ⊗ other`.
    pub fn act_tensor(&self, other: &ModuleMap, t: &TensorSquare) -> Matrix {
        let f = &self.field;
        let mut out = Matrix::zeros(self.dim * other.dim, self.dim * other.dim);
        for (u, v, c) in t.terms() {
            let m = self.act_word(u).kron(&other.act_word(v), f).scale(c, f);
            out = out.add(&m, f).unwrap();
        }
        out
    }
}

/// An invertible `f` with `f·φ_i = ψ_i·f` for all `i`, if one exists.
///
/// Solves the linear intertwiner equations and then enumerates the solution
/// space, which is bounded by [`SEARCH_BUDGET`] candidates.
pub fn are_isomorphic(x: &SAObject, y: &SAObject) -> Result<Option<Matrix>, RepError> {
    if x.algebra != y.algebra {
        return Err(RepError::AlgebraMismatch);
    }
    if x.dim != y.dim {
        return Ok(None);
    }
    let f = x.algebra.field();
    let r = x.dim;
    // unknown f[(a, b)] at index a * r + b
    let mut rows = Vec::new();
    for (phi, psi) in x.components.iter().zip(&y.components) {
        for a in 0..r {
            for b in 0..r {
                // (f φ)[a][b] − (ψ f)[a][b]
                let mut row = vec![Fe::ZERO; r * r];
                for k in 0..r {
                    row[a * r + k] = f.add(row[a * r + k], phi[(k, b)]);
                    row[k * r + b] = f.sub(row[k * r + b], psi[(a, k)]);
                }
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..r * r).map(|i| crate::algebra::unit(r * r, i)).collect()
    } else {
        Matrix::from_rows(&rows).nullspace(f)
    };
    let q = f.size() as u128;
    let needed = (0..basis.len())
        .try_fold(1u128, |acc, _| acc.checked_mul(q))
        .unwrap_or(u128::MAX);
    if needed > SEARCH_BUDGET {
        return Err(RepError::SearchBudgetExceeded {
            needed,
            budget: SEARCH_BUDGET,
        });
    }
    let elems: Vec<Fe> = f.elements().collect();
    let mut digits = vec![0usize; basis.len()];
    for _ in 0..needed {
        let mut v = vec![Fe::ZERO; r * r];
        for (d, b) in digits.iter().zip(&basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = f.add(*vi, f.mul(elems[*d], *bi));
            }
        }
        let m = Matrix::new(r, r, v);
        if m.is_invertible(f) {
            return Ok(Some(m));
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < elems.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(None)
}

/// The one-dimensional objects under `tensor_sa`, indexed like `elements`.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub algebra: LocalAlgebra,
    pub elements: Vec<Vec<Fe>>,
    pub table: Vec<Vec<usize>>,
}

impl UnitGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn identity(&self) -> usize {
        0
    }

    pub fn is_group(&self) -> bool {
        let n = self.order();
        let e = self.identity();
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| self.table[self.table[a][b]][c] == self.table[a][self.table[b][c]])
            })
        });
        let unit = (0..n).all(|a| self.table[e][a] == a && self.table[a][e] == a);
        let inverses = (0..n).all(|a| (0..n).any(|b| self.table[a][b] == e));
        assoc && unit && inverses
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order())
            .map(|a| self.element_order(a))
            .fold(1, lcm)
    }

    /// Whether `x ↦ 1 + Σ x_i a_i` carries the table to multiplication in `A`.
    pub fn matches_units(&self) -> bool {
        let a = &self.algebra;
        let f = a.field();
        (0..self.order()).all(|i| {
            (0..self.order()).all(|j| {
                let u = a.element(Fe::ONE, self.elements[i].clone());
                let v = a.element(Fe::ONE, self.elements[j].clone());
                let uv = a.multiply(&u, &v).unwrap();
                uv.scalar == f.one() && uv.mcoords == self.elements[self.table[i][j]]
            })
        })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Requires `|1 + m| ≤ 256`.
pub fn unit_group_dim1(a: &LocalAlgebra) -> UnitGroup {
    let f = a.field();
    let n = a.dim();
    let size = (f.size() as u128).pow(n as u32);
    assert!(size <= 256, "unit group too large to tabulate");
    let elems: Vec<Fe> = f.elements().collect();
    let mut elements = Vec::new();
    for mut k in 0..size as usize {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(elems[k % elems.len()]);
            k /= elems.len();
        }
        elements.push(v);
    }
    let index = |v: &[Fe]| elements.iter().position(|e| e == v).expect("closed");
    let objs: Vec<SAObject> = elements.iter().map(|v| SAObject::from_unit(a, v)).collect();
    let table = objs
        .iter()
        .map(|x| {
            objs.iter()
                .map(|y| index(&tensor_sa(x, y).unwrap().unit_coords().unwrap()))
                .collect()
        })
        .collect();
    UnitGroup {
        algebra: a.clone(),
        elements,
        table,
    }
}

/// A matrix over a local algebra: `scalar⊗1 + Σ parts_i⊗a_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraMatrix {
    pub scalar: Matrix,
    pub parts: Vec<Matrix>,
}

/// `(V, W; β)` over the components `A_1..A_m` above one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleObject {
    pub components: Vec<LocalAlgebra>,
    pub v_dim: usize,
    pub w_dim: usize,
    pub betas: Vec<AlgebraMatrix>,
}

/// Normal form: one object per component and transitions `g_j g_m^{−1}`, `j < m`.
pub fn normalize_triple(t: &TripleObject) -> Result<(Vec<SAObject>, Vec<Matrix>), RepError> {
    if t.v_dim != t.w_dim {
        return Err(RepError::DimensionMismatch {
            v: t.v_dim,
            w: t.w_dim,
        });
    }
    let mut objects = Vec::new();
    let mut inverses = Vec::new();
    for (j, (a, beta)) in t.components.iter().zip(&t.betas).enumerate() {
        let f = a.field();
        let g_inv = beta.scalar.inverse(f).ok_or(RepError::NotInvertible(j))?;
        let comps = beta
            .parts
            .iter()
            .map(|b| b.mul(&g_inv, f).unwrap())
            .collect();
        objects.push(make_sa_object_with_dim(a, t.v_dim, comps)?);
        inverses.push(g_inv);
    }
    let mut transitions = Vec::new();
    if let Some(base_inv) = inverses.last() {
        for (a, beta) in t.components.iter().zip(&t.betas).take(t.betas.len() - 1) {
            transitions.push(beta.scalar.mul(base_inv, a.field()).unwrap());
        }
    }
    Ok((objects, transitions))
}

/// Inverse of [`normalize_triple`] given the basepoint's scalar part `g_m`.
pub fn assemble_triple(
    objects: &[SAObject],
    transitions: &[Matrix],
    base: &Matrix,
) -> TripleObject {
    assert_eq!(objects.len(), transitions.len() + 1);
    let dim = base.rows();
    let betas = objects
        .iter()
        .enumerate()
        .map(|(j, x)| {
            let f = x.algebra.field();
            let g = if j < transitions.len() {
                transitions[j].mul(base, f).unwrap()
            } else {
                base.clone()
            };
            AlgebraMatrix {
                parts: x
                    .components
                    .iter()
                    .map(|phi| phi.mul(&g, f).unwrap())
                    .collect(),
                scalar: g,
            }
        })
        .collect();
    TripleObject {
        components: objects.iter().map(|x| x.algebra.clone()).collect(),
        v_dim: dim,
        w_dim: dim,
        betas,
    }
}
