use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::ihx::{ihx_from_branches, ihx_site_at, site_branches, IhxSite};
use crate::trees::{is_simple, min_maximal_chain, EdgeRef, UnrootedTree};

/// One IHX step of a normalization run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Worklist item that was rewritten (item 0 is the input).
    pub item: usize,
    pub tree: UnrootedTree,
    pub site: IhxSite,
    /// Branches around the inner edge, `{I,J | K,L}`.
    pub grouping: String,
    /// Items created for `{J,K | I,L}` and `{I,K | J,L}`.
    pub outputs: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleNormalization {
    /// Simple trees, sorted by canonical key; duplicates kept.
    pub trees: Vec<UnrootedTree>,
    pub trace: Vec<TraceStep>,
}

/// The site used to lengthen the chain of a non-simple tree: the smallest
/// maximal chain, then the smallest edge from a chain vertex to an
/// off-chain trivalent vertex.
pub fn chain_extending_site(t: &UnrootedTree) -> Option<IhxSite> {
    let spine = min_maximal_chain(t);
    let on_chain: Vec<bool> = {
        let mut v = vec![false; t.vertex_count()];
        for &x in &spine.vertices {
            v[x] = true;
        }
        v
    };
    spine
        .interior()
        .iter()
        .flat_map(|&v0| {
            t.neighbors(v0)
                .iter()
                .filter(|&&w| !on_chain[w] && !t.is_leaf(w))
                .map(move |&w| t.edge_between(v0, w).expect("adjacent"))
        })
        .min()
        .map(|e: EdgeRef| ihx_site_at(t, e).expect("internal edge"))
}

/// Rewrite a tree into a multiset of simple trees of the same degree and
/// leaf labels. Each step strictly lengthens the maximal chain in both
/// outputs, which bounds the run.
pub fn normalize_simple(t: &UnrootedTree) -> SimpleNormalization {
    let mut trace = Vec::new();
    let mut done = Vec::new();
    let mut queue = VecDeque::from([(0usize, t.clone())]);
    let mut next = 1;
    while let Some((item, tree)) = queue.pop_front() {
        if is_simple(&tree).is_some() {
            done.push(tree);
            continue;
        }
        let site = chain_extending_site(&tree).expect("non-simple tree has an off-chain vertex");
        let branches = site_branches(&tree, &site).expect("own site");
        let (a, b) = ihx_from_branches(&branches);
        debug_assert!({
            let len = |x: &UnrootedTree| min_maximal_chain(x).len();
            len(&a) > len(&tree) && len(&b) > len(&tree)
        });
        trace.push(TraceStep { item, tree, site, grouping: branches.grouping(), outputs: [next, next + 1] });
        queue.push_back((next, a));
        queue.push_back((next + 1, b));
        next += 2;
    }
    done.sort_by_cached_key(|x| x.canonical_key());
    SimpleNormalization { trees: done, trace }
}
