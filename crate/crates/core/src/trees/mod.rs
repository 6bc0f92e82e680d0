//! Brackets, rooted and unrooted unitrivalent trees, punctures, shapes.
//!
//! A bracket `(I,J)` is the rooted tree whose root edge sprouts from the
//! vertex where `t(I)` and `t(J)` meet. Gluing two roots into a single
//! non-vertex point gives the unrooted product, which is the tree of an
//! intersection point; the gluing edge carries the puncture.

mod bracket;
mod shape;
mod simple;
mod unrooted;

pub use bracket::{is_shape, rooted_product, Bracket, Label, Shape};
pub use shape::{y_level, y_tree, Height};
pub use simple::{is_simple, maximal_chains, min_maximal_chain, Spine};
pub use unrooted::{
    parse_tree_text, slide_puncture, unroot, unroot_with_root, unrooted_product, EdgeRef, PuncturedTree, UnrootedTree,
};
