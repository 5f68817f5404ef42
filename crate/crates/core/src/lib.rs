//! Exact computation of fundamental group schemes of pinched varieties over
//! finite fields, via non-commutative Witt Hopf algebras.

pub mod algebra;
pub mod field;
pub mod fixtures;
pub mod hopf;
pub mod leibniz;
pub mod matrix;
pub mod ncpoly;
pub mod newman;
pub mod pipeline;
pub mod rep;
pub mod selfcheck;
pub mod semilinear;
pub mod witt;

pub use algebra::{AlgebraElement, AlgebraSpec, LocalAlgebra};
pub use field::{make_field, Fe, Field};
pub use hopf::{free_product, HopfPresentation};
pub use matrix::Matrix;
pub use ncpoly::{NcPoly, TensorSquare, Word};
pub use semilinear::SemilinearMap;
