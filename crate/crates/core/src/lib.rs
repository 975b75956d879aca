//! Rank invariants, rectangle decompositions and weak-exactness checks for
//! 2-parameter persistence modules indexed over finite grids.
//!
//! Modules come either explicitly ([`GridModule`]) or as homology of a
//! 1-critical simplicial bifiltration ([`Bifiltration`]). Every fast path has
//! a brute-force counterpart in this crate so the two can be compared.

pub mod bifiltration;
pub mod constructions;
pub mod error;
pub mod grid_module;
pub mod io;
pub mod linalg;
pub mod rank_dp;
pub mod rect_decomp;
pub mod resolution;
pub mod simplicial;
pub mod weakexact;
pub mod zigzag;

pub use bifiltration::Bifiltration;
pub use error::{FormatError, ParseError};
pub use grid_module::{GridModule, Point, RankInvariant};
pub use linalg::{Field, Matrix, Subspace};
pub use rect_decomp::RectangleBarcode;
pub use resolution::FreeResolution;
pub use zigzag::{ZigzagBarcode, ZigzagComplex};
