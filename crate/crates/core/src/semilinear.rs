//! `p^t`-semilinear maps `v -> M v^{(p^t)}`.
//!
//! Frobenius on a local algebra has twist `+1`; Verschiebung on the dual
//! has twist `-1`.

use crate::field::{Fe, Field};
use crate::matrix::{Matrix, ShapeMismatch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    pub field: Field,
    pub matrix: Matrix,
    pub twist: i64,
}

impl SemilinearMap {
    pub fn new(field: Field, matrix: Matrix, twist: i64) -> Self {
        Self {
            field,
            matrix,
            twist,
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::new(field, Matrix::identity(n), 0)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrix.shape()
    }

    pub fn apply(&self, v: &[Fe]) -> Vec<Fe> {
        let twisted: Vec<Fe> = v
            .iter()
            .map(|x| self.field.frobenius(*x, self.twist))
            .collect();
        self.matrix.apply(&twisted, &self.field)
    }

    /// `self ∘ other`, i.e. `(M_f · M_g^{(p^{t_f})}, t_f + t_g)`.
    pub fn compose(&self, other: &SemilinearMap) -> Result<SemilinearMap, ShapeMismatch> {
        let twisted = other.matrix.frobenius(&self.field, self.twist);
        Ok(SemilinearMap {
            field: self.field.clone(),
            matrix: self.matrix.mul(&twisted, &self.field)?,
            twist: self.twist + other.twist,
        })
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn power(&self, k: u32) -> SemilinearMap {
        assert_eq!(self.matrix.rows(), self.matrix.cols());
        let mut acc = SemilinearMap::identity(self.field.clone(), self.matrix.rows());
        for _ in 0..k {
            acc = self.compose(&acc).expect("square");
        }
        acc
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank(&self.field)
    }

    /// Rank and a kernel basis.
    ///
    /// Solves `M u = 0`, then `v = u^{(p^{-t})}`, valid since Frobenius is bijective.
    pub fn kernel(&self) -> (usize, Vec<Vec<Fe>>) {
        let ns = self.matrix.nullspace(&self.field);
        let basis = ns
            .into_iter()
            .map(|u| {
                u.into_iter()
                    .map(|x| self.field.frobenius(x, -self.twist))
                    .collect()
            })
            .collect();
        (self.rank(), basis)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// Free-function form of [`SemilinearMap::compose`].
pub fn semilinear_compose(
    f: &SemilinearMap,
    g: &SemilinearMap,
) -> Result<SemilinearMap, ShapeMismatch> {
    f.compose(g)
}

/// Free-function form of [`SemilinearMap::kernel`].
pub fn semilinear_kernel(f: &SemilinearMap) -> (usize, Vec<Vec<Fe>>) {
    f.kernel()
}
