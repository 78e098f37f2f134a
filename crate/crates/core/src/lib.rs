//! Feasibility queries for a square robot moving among axis-aligned
//! rectangular obstacles.
//!
//! Preprocessing builds a generalized Gabriel graph of gap constraints, a
//! region partition with a capacity-weighted dual graph, and a partially
//! persistent union-find over capacity-sorted unions. Each query then costs
//! a point location, a binary search and two persistent finds.

pub mod bench;
pub mod circle;
pub mod decompose;
pub mod dsu;
pub mod gabriel;
pub mod generate;
pub mod io;
pub mod geometry;
pub mod normalize;
pub mod oracle;
pub mod partition;
pub mod query;
pub mod render;
pub mod spatial;
mod sweep;
