//! Combinatorial tree calculus for gropes and Whitney towers.
//!
//! Whitney disks and capped grope branches are both indexed by commutative,
//! non-associative brackets. Unpaired intersection points carry unrooted
//! trees. This crate models those trees, the IHX rewriting that turns any
//! tree into simple trees, the two elementary moves that trade grope class
//! for tower order, and certificate pipelines built on them.

pub mod certify;
pub mod error;
pub mod grope;
pub mod hybrid;
pub mod oracle;
pub mod rewrite;
pub mod tower;
pub mod trees;

pub use error::{Error, Result};
pub use trees::{Bracket, EdgeRef, Height, Label, PuncturedTree, Shape, UnrootedTree};
