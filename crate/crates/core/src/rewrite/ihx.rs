use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::{unrooted_product, Bracket, EdgeRef, UnrootedTree};

/// The local configuration around an internal edge: four branches grouped
/// `{I,J | K,L}`, each branch identified by the edge leaving the inner edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IhxSite {
    pub inner_edge: EdgeRef,
    /// Anchors at the endpoint nearer the canonical root: `I`, `J`.
    pub near: [EdgeRef; 2],
    /// Anchors at the far endpoint: `K`, `L`.
    pub far: [EdgeRef; 2],
}

impl fmt::Display for IhxSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {{{},{} | {},{}}}", self.inner_edge, self.near[0], self.near[1], self.far[0], self.far[1])
    }
}

/// The four branches of a site as brackets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branches {
    pub i: Bracket,
    pub j: Bracket,
    pub k: Bracket,
    pub l: Bracket,
}

impl Branches {
    pub fn grouping(&self) -> String {
        format!("{{{},{} | {},{}}}", self.i, self.j, self.k, self.l)
    }
}

/// The site on an internal edge, or an error if an endpoint is a leaf.
pub fn ihx_site_at(t: &UnrootedTree, e: EdgeRef) -> Result<IhxSite> {
    let (u, c) = t.endpoints(e)?;
    if t.is_leaf(u) || t.is_leaf(c) {
        return Err(Error::InvalidSite(format!("{e} is not an internal edge")));
    }
    let anchors = |v: usize| -> [EdgeRef; 2] {
        let mut a: Vec<EdgeRef> =
            t.neighbors(v).iter().map(|&w| t.edge_between(v, w).expect("adjacent")).filter(|&f| f != e).collect();
        a.sort();
        [a[0], a[1]]
    };
    Ok(IhxSite { inner_edge: e, near: anchors(u), far: anchors(c) })
}

/// One site per internal edge, in edge order.
pub fn ihx_sites(t: &UnrootedTree) -> Vec<IhxSite> {
    t.edges().filter_map(|e| ihx_site_at(t, e).ok()).collect()
}

/// Branch brackets of a site, after checking that the site belongs to `t`.
pub fn site_branches(t: &UnrootedTree, s: &IhxSite) -> Result<Branches> {
    let actual = ihx_site_at(t, s.inner_edge)?;
    let same = |x: [EdgeRef; 2], y: [EdgeRef; 2]| {
        let (mut x, mut y) = (x, y);
        x.sort();
        y.sort();
        x == y
    };
    let matches = (same(actual.near, s.near) && same(actual.far, s.far))
        || (same(actual.near, s.far) && same(actual.far, s.near));
    if !matches {
        return Err(Error::InvalidSite(format!("{s} does not match the tree ({actual})")));
    }
    let (u, c) = t.endpoints(s.inner_edge)?;
    let side = |f: EdgeRef| -> Bracket {
        let (a, b) = t.endpoints(f).expect("valid anchor");
        if a == u || a == c {
            t.branch(a, b)
        } else {
            t.branch(b, a)
        }
    };
    Ok(Branches { i: side(s.near[0]), j: side(s.near[1]), k: side(s.far[0]), l: side(s.far[1]) })
}

/// Replace the `{I,J | K,L}` tree by the two trees `{J,K | I,L}` and
/// `{I,K | J,L}` (no signs; one tree becomes two).
pub fn ihx_rewrite(t: &UnrootedTree, s: &IhxSite) -> Result<(UnrootedTree, UnrootedTree)> {
    let b = site_branches(t, s)?;
    Ok(ihx_from_branches(&b))
}

pub(crate) fn ihx_from_branches(b: &Branches) -> (UnrootedTree, UnrootedTree) {
    let p = |x: &Bracket, y: &Bracket| Bracket::pair(x.clone(), y.clone());
    let first = unrooted_product(&p(&b.j, &b.k), &p(&b.i, &b.l)).tree;
    let second = unrooted_product(&p(&b.i, &b.k), &p(&b.j, &b.l)).tree;
    (first, second)
}
