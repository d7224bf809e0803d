//! Finite n-ary Γ-semirings: axiom checking, ideals, spectra, localization,
//! structure sheaves, bi-modules and structure theory, all by exhaustive
//! computation on full operation tables.

pub mod algebra;
pub mod axioms;
pub mod corpus;
pub mod duality;
pub mod error;
pub mod ideals;
pub mod iso;
pub mod localization;
pub mod module_search;
pub mod modules;
pub mod sheaf;
pub mod spectrum;
pub mod structure;
pub mod subset;

pub use algebra::{load_semiring, load_semiring_lenient, FiniteGammaSemiring, UnitWitness};
pub use error::{Error, Result};
pub use subset::Subset;
