//! IHX rewriting on unitrivalent trees.
//!
//! Rewrites are unsigned and multiset-valued: one tree is replaced by the
//! two trees carrying the other pairings of the four branches around an
//! internal edge.

mod ihx;
mod rooted;
mod simple;

pub use ihx::{ihx_rewrite, ihx_site_at, ihx_sites, site_branches, Branches, IhxSite};
pub use rooted::{jacobi_measure, jacobi_step, normalize_right_normed, RootedNormalization, RootedStep};
pub use simple::{chain_extending_site, normalize_simple, SimpleNormalization, TraceStep};
