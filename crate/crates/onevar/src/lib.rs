//! Proof engine and finite-algebra workbench for the one-variable fragment of
//! first-order substructural logics.
//!
//! * [`syntax`]: first-order and modal formulas, the concrete grammar, and the
//!   standard translations between them.
//! * [`proof`]: multiset sequents, the cut-free calculus with optional
//!   structural rules, derivation checking and metrics.
//! * [`search`]: backward proof search producing checkable derivations.
//! * [`interpolation`]: interpolant extraction from derivations of
//!   partitioned sequents.
//! * [`modalization`]: elimination of auxiliary variables, turning a
//!   one-variable derivation into a certificate in a modal sequent calculus.
//! * [`algebra`]: finite lattices, residuated lattices and their modal
//!   expansions, relatively complete subalgebras and functional powers.
//! * [`semantics`]: finite first-order structures over finite algebras.
//! * [`gen`]: seeded generators used by tests and corpus tooling.

pub mod algebra;
pub mod error;
pub mod gen;
pub mod interpolation;
pub mod modalization;
pub mod proof;
pub mod search;
pub mod semantics;
pub mod syntax;

pub use error::Code;
