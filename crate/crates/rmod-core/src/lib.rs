//! Graded modules over the Cartier-Dieudonne-Raynaud ring `R = W_σ[F, V, d]`
//! at finite truncation.
//!
//! A module is represented through its truncations `M / (Fil^n + p^m)`, each
//! a finite presentation over a Galois ring per grading, with `F`, `V`, `d`
//! acting on ambient generators. Objects of the derived category are formal
//! sums of shifted blocks ([`FormalObject`]).

pub mod block;
pub mod check;
pub mod error;
pub mod extension;
pub mod formal;
pub mod hom;
pub mod iso;
pub mod linalg;
pub mod module;

pub use block::{make_block, BlockKind, BlockModule, CoeurDesc, Metadata};
pub use check::{check_relations, RelationReport, Violation};
pub use error::CoreError;
pub use extension::{cone_or_extension, ExtensionOutcome};
pub use formal::{FormalObject, ModuleSpec, SpecSummand, Summand};
pub use hom::{hom_space, HomSpace};
pub use iso::{find_iso, identify};
pub use linalg::{Mat, Subquotient};
pub use module::{GradedMap, SemiMap, Tgm, TgmJson};
pub use witt_arith::{GaloisRing, Gr};
