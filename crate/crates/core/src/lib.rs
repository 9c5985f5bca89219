//! Finite identity structures of two-cardinal partition calculus.
//!
//! An *identity* `(a, e)` is a finite ground set `a = {0, .., n-1}` together with
//! an equivalence relation `e` on a family of its subsets in which equivalent
//! subsets have the same size. A coloring *realizes* an identity when some
//! injection of the ground set sends every pair of `e`-equivalent subsets to
//! equally colored images.
//!
//! The crate is organised around the operations used to study which identities
//! every countable coloring of `ω₁` must realize:
//!
//! * [`identity`]: the structures themselves, validation, relabeling and the
//!   pairs-level projection.
//! * [`canon`] and [`embed`]: canonical labeling and embedding search.
//! * [`families`]: explicit constructions (`s_k`, `s'_n`, `s''_n`, meet
//!   identities on binary strings, `k`-simplification, order forcing).
//! * [`closure`]: duplication, restriction and the catalog they generate from
//!   the one-point identity.
//! * [`criterion`]: the ranked-coloring test, a necessary condition for
//!   membership in `ID₂(ℵ₁, ℵ₀)`.
//! * [`oracle`]: concrete finite colorings and brute-force realization.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod canon;
pub mod closure;
pub mod criterion;
pub mod embed;
mod error;
pub mod families;
pub mod identity;
pub mod oracle;
pub mod subset;

pub use canon::canonical_form;
pub use closure::{
    duplicate, duplicate_full, generate_catalog, generate_full_catalog, member_of_catalog,
    restrict, Catalog, CatalogEntry, Step,
};
pub use criterion::{check, explain, CriterionVerdict, Explanation, Mode};
pub use embed::embeds;
pub use error::Error;
pub use identity::{Embedding, Flavor, Identity, Permutation, Violation};
pub use subset::{BitString, SubsetCode};

pub type Result<T, E = Error> = core::result::Result<T, E>;
