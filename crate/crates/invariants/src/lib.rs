//! Numerical invariants of graded modules over the Cartier-Dieudonne-Raynaud
//! ring: hearts, domino numbers, slope numbers, Hodge and Hodge-Witt numbers,
//! polygons and the cohomology of the totalization.

pub mod complex;
pub mod error;
pub mod local;
pub mod newton;
pub mod checks;
pub mod table;

pub use checks::{
    crew_all, crew_check, ekedahl_check, mazur_ogus_check, newton_hodge_all, newton_hodge_check, run_checks,
    symmetry_check, CheckReport, CrewCheck, EkedahlCheck, MazurOgusCheck, PolygonCheck, SymmetryCheck,
};
pub use error::{InvError, Result};
pub use local::{block_invariants, coeur, domino_number, working_level, BlockInvariants, Coeur, Trunc};
pub use newton::{newton_slopes, Polygon, Q};
pub use table::{
    domino_numbers, hodge_numbers, hodge_witt_numbers, r1_tensor, rn_tensor, slope_numbers, totalize, InvariantTable,
};
