//! Code equivalence over small finite fields.
//!
//! The crate works at "desk scale": fields `F_{p^h}` with at most `2^16`
//! elements and codes whose word count fits an explicit enumeration budget.
//! Everything is exact arithmetic; there is no floating point anywhere.
//!
//! The main pieces:
//!
//! * [`field`] — arithmetic in `F_{p^h}`, Frobenius maps and linearized
//!   polynomials (the additive maps of the field).
//! * [`code`] — linear codes given by generator matrices: standard form,
//!   minimum distance, the MDS test and conic containment for `k = 3`.
//! * [`additive`] — additive codes (linear over the prime subfield only),
//!   their prime-field expansion and block standard form.
//! * [`witness`] — explicit equivalence witnesses in four flavours
//!   (general, linear, semi-linear, additive) that can be applied and
//!   verified by enumeration.
//! * [`extract`] — constructive reduction of a general witness between
//!   linear codes to a semi-linear one, and between additive MDS codes to
//!   an additive one.
//! * [`search`] — exhaustive, budgeted searchers for each equivalence
//!   notion; inequivalence is only reported on completed search.
//! * [`io`] — the text file formats for codes and witnesses.
//! * [`corpus`] — the bundled reference codes used by the demo pipeline.

pub mod additive;
pub mod code;
pub mod corpus;
mod error;
pub mod extract;
pub mod field;
pub mod io;
pub mod mat;
pub mod plant;
pub mod search;
pub mod witness;

pub use additive::{AdditiveCode, AdditiveStandardForm};
pub use code::{Conic, GeneratorMatrix, LinearCode, Word};
pub use error::Error;
pub use field::{Fe, Field, LinearizedMap};
pub use mat::{Mat, Perm};
pub use search::{Budget, SearchOutcome};
pub use witness::{AdditiveWitness, GeneralWitness, SemiLinearWitness, SymbolPerm, Witness};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
