//! Numerical toolkit for the facial geometry of separable and PPT states on
//! two-party systems `C^m (x) C^n`.
//!
//! The crate locates product vectors in subspaces, certifies simplicial faces
//! spanned by product-state families, extracts PPT entangled edge states by
//! pushing a separable state through a face boundary, and ships exact
//! constructors for a gallery of reference states.

// `!(x > 0.0)` style guards are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod face;
pub mod gallery;
pub mod linalg;
pub mod locator;
pub mod poly;
pub mod ppt;
pub mod random;
pub mod report;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{
    hermitian_rank, kernel_of, partial_conjugate, partial_transpose, range_of, realify, tensor,
    BipartiteOperator, CMatrix, CVector, ProductVector, Subspace, Tolerance, C64,
};
