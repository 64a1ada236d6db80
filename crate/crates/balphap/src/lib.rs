//! The spectral sequence of the simplicial presentation of `Bα_p` by a
//! supersingular elliptic curve, from the Künneth decomposition of its first
//! page to the Hodge-Witt numbers of the resulting counterexample.
//!
//! Rows 0 and 1 are computed from the literal face maps; row 2 through its
//! sub/quotient split and the derived star; the one extension class that is
//! not computed is chosen by an explicit policy.

pub mod error;
pub mod extension;
pub mod kunneth;
pub mod report;
pub mod row2;
pub mod rows;
pub mod table;

pub use error::{BalphapError, Result};
pub use extension::{resolve_extension, resolve_extension_named, ExtensionPolicy, ResolvedExtension, COUNTERFACTUAL};
pub use kunneth::{kunneth_tilde_h, simplicial_column, supersingular_curve, Factor, KTable, KTerm};
pub use report::{counterexample_report, Report, ReportConfig, ReportJson};
pub use row2::{row2_complex, row2_e2, Arrow, Row2Complex, Row2Ses};
pub use rows::{e2_rows01, face_map, material_row, row01_alternating_maps, Coef, E2Cell, MaterialRow};
pub use table::{assemble_balphap_table, e2_page, twist_bgm, CohomologyTable, E2Page, CERTIFIED_DEGREE};
