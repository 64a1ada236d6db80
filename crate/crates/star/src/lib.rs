//! Star products of graded left modules over the Cartier-Dieudonne-Raynaud
//! ring at finite truncation.
//!
//! [`star_presentation`] builds `M ⋆ N` from generators `V^s(m ⋆ n)` and
//! `dV^s(m ⋆ n)`; [`star_frobenius_bijective`] is the tensor-product closed
//! form valid when `F` is bijective on `N`. [`band_model`] describes `ℛ ⋆ N`
//! band by band, and [`derived_star`] computes `E ⋆̂ N` for a Dieudonne block
//! `E` from the two-term resolution of `E`.

pub mod bands;
pub mod closed;
pub mod derived;
pub mod error;
pub mod grid;
pub mod presentation;

pub use bands::{band_model, describe, star_with_r, Band, BandModel, BandSummary};
pub use closed::{comparison_map, star_frobenius_bijective, TensorForm};
pub use derived::{candidates, derived_star, identify, DerivedStar, Identified, KernelBands};
pub use error::{Result, StarError};
pub use presentation::{star_blocks, star_presentation, swap_map, unit_map, StarPresentation};
