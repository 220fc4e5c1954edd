//! 2-closures of rank 3 permutation groups.
//!
//! A permutation group's 2-closure is the largest group on the same points
//! with the same orbits on ordered pairs. For rank 3 groups the crate computes
//! it by structure: imprimitive and product-action wreath products, almost
//! simple groups, and the affine cases (small groups, bilinear forms graphs,
//! affine polar graphs). Every answer is checked against the input, and for
//! small degrees against a direct automorphism search.

pub mod affine;
pub mod aut;
pub mod closure;
pub mod error;
pub mod format;
pub mod gf;
mod limits;
pub mod perm;
pub mod zoo;

pub use error::{Error, Result};
pub use limits::Limits;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/closures.md")]
    mod closures {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
    #[doc = include_str!("../../../book/src/branches.md")]
    mod branches {}
    #[doc = include_str!("../../../book/src/checking.md")]
    mod checking {}
}
