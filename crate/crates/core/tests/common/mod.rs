#![allow(dead_code)]

use grope_tower::oracle::OTree;
use grope_tower::{Bracket, EdgeRef, PuncturedTree, UnrootedTree};
use proptest::prelude::*;

pub fn bracket() -> impl Strategy<Value = Bracket> {
    let leaf = prop::sample::select(vec!["1", "2", "3", "4"]).prop_map(Bracket::atom);
    leaf.prop_recursive(5, 24, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Bracket::pair(a, b)))
}

pub fn pair_bracket() -> impl Strategy<Value = Bracket> {
    (bracket(), bracket()).prop_map(|(a, b)| Bracket::pair(a, b))
}

pub fn punctured() -> impl Strategy<Value = PuncturedTree> {
    (bracket(), bracket(), any::<prop::sample::Index>()).prop_map(|(a, b, i)| {
        let p = grope_tower::trees::unrooted_product(&a, &b);
        let e = EdgeRef(i.index(p.tree.edge_count()));
        p.move_puncture(e).unwrap()
    })
}

pub fn unrooted() -> impl Strategy<Value = UnrootedTree> {
    punctured().prop_map(|p| p.tree)
}

pub fn okey(t: &UnrootedTree) -> String {
    OTree::from_tree(t).key()
}

/// Random swaps of children, giving an isomorphic bracket.
pub fn shuffle(b: &Bracket, bits: &mut impl Iterator<Item = bool>) -> Bracket {
    match b {
        Bracket::Leaf(_) => b.clone(),
        Bracket::Pair(x, y) => {
            let (x, y) = (shuffle(x, bits), shuffle(y, bits));
            if bits.next().unwrap_or(false) {
                Bracket::pair(y, x)
            } else {
                Bracket::pair(x, y)
            }
        }
    }
}
