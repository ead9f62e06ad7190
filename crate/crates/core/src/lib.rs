//! Boehmians on open subsets of the real line.

// negated float comparisons are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boehmian;
pub mod bridge;
pub mod convolve;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod gridfn;
pub mod mollifier;
mod quad;
pub mod sheaf;

pub use boehmian::{Boehmian, EquivParams, FundamentalSeq};
pub use error::{Error, Result};
pub use geometry::{CompactSet, Exhaustion, Interval, OpenSet};
pub use gridfn::GridFunction;
pub use mollifier::{DeltaSeq, TestFunction};
