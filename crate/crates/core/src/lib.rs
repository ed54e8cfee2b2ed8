//! Groups of non-bijective transformations on a finite set, and the
//! residual/radical machinery of SHP-classes on finite groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`transformation`] and [`partition`]: single maps on `{0,…,n−1}`, their
//!   kernels, and the membership criteria for transformation groups.
//! * [`transgroup`]: composition-closed sets verified as groups and the
//!   isomorphism onto a permutation group on the quotient set.
//! * [`cayley`]: abstract groups as multiplication tables with subgroup,
//!   normality, subnormality, quotient and automorphism machinery.
//! * [`classes`]: SHP-classes, residuals `G^χ`, radicals `O_χ(G)` and the
//!   factorization checkers.
//! * [`constructions`]: standard groups, the `C_q ⋊ (C_p × C_p)` counterexample
//!   and the order-`(n−1)!` NG witness.
//! * [`search`]: exhaustive enumeration over the full transformation monoid.
//! * [`verify`]: the end-to-end verification suite driven by the CLI.
//!
//! Composition convention: `compose(f, g)` is "f after g", i.e.
//! `compose(f, g)(x) = f(g(x))`.

pub mod cayley;
pub mod classes;
pub mod constructions;
mod error;
pub mod partition;
pub mod report;
pub mod search;
pub mod transformation;
pub mod transgroup;
pub mod verify;

pub use cayley::{CayleyGroup, ElementSet, Subgroup};
pub use classes::GroupClass;
pub use error::{Error, Result};
pub use partition::Partition;
pub use report::{Report, Status};
pub use transformation::Transformation;
pub use transgroup::{GroupRejection, PermGroup, TransGroup};

/// `n!` for the small `n` used throughout the crate.
pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
