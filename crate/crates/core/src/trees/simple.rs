use super::unrooted::{EdgeRef, UnrootedTree};

/// A maximal-length chain of edges, leaf to leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spine {
    /// Vertices along the chain; both ends are leaves.
    pub vertices: Vec<usize>,
}

impl Spine {
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() < 2
    }

    pub fn edges(&self, t: &UnrootedTree) -> Vec<EdgeRef> {
        self.vertices.windows(2).map(|w| t.edge_between(w[0], w[1]).expect("spine edge")).collect()
    }

    /// Trivalent vertices of the chain, in order.
    pub fn interior(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }
}

/// All maximal-length leaf-to-leaf chains, ordered by their sorted edge
/// indices (lexicographically smallest first).
pub fn maximal_chains(t: &UnrootedTree) -> Vec<Spine> {
    let leaves = t.leaves();
    let mut best = 0;
    let mut ends = Vec::new();
    for (i, &a) in leaves.iter().enumerate() {
        let dist = t.distances(a);
        for &b in &leaves[i + 1..] {
            match dist[b].cmp(&best) {
                std::cmp::Ordering::Greater => {
                    best = dist[b];
                    ends.clear();
                    ends.push((a, b));
                }
                std::cmp::Ordering::Equal => ends.push((a, b)),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut chains: Vec<(Vec<EdgeRef>, Spine)> = ends
        .into_iter()
        .map(|(a, b)| {
            let spine = Spine { vertices: t.path(a, b) };
            let mut key = spine.edges(t);
            key.sort();
            (key, spine)
        })
        .collect();
    chains.sort_by(|x, y| x.0.cmp(&y.0));
    chains.into_iter().map(|(_, s)| s).collect()
}

/// The lexicographically smallest maximal chain.
pub fn min_maximal_chain(t: &UnrootedTree) -> Spine {
    maximal_chains(t).into_iter().next().expect("a tree has a chain")
}

/// A tree is simple when a maximal chain passes through every trivalent
/// vertex. Returns that chain as the witness.
pub fn is_simple(t: &UnrootedTree) -> Option<Spine> {
    let spine = min_maximal_chain(t);
    (spine.interior().len() == t.trivalent_count()).then_some(spine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::{unroot, Bracket, Label};

    fn tree(b: &str) -> UnrootedTree {
        unroot(&Bracket::parse(b).unwrap(), &Label::new("r").unwrap())
    }

    #[test]
    fn combs_are_simple() {
        let t = tree("(1,(2,(3,(4,5))))");
        let spine = is_simple(&t).expect("simple");
        assert_eq!(spine.interior().len(), 4);
        assert!(t.is_leaf(spine.vertices[0]) && t.is_leaf(*spine.vertices.last().unwrap()));
    }

    #[test]
    fn lowest_degree_non_simple() {
        // Central vertex carrying three Y branches: degree 5.
        let t = unroot(&Bracket::parse("((1,2),(3,4))").unwrap(), &Label::new("x").unwrap());
        assert!(is_simple(&t).is_some());
        let t = crate::trees::unrooted_product(
            &Bracket::parse("((1,2),(3,4))").unwrap(),
            &Bracket::parse("(5,6)").unwrap(),
        )
        .tree;
        assert_eq!(t.degree(), 5);
        assert!(is_simple(&t).is_none());
    }

    #[test]
    fn chord_is_simple() {
        let t = tree("a");
        let s = is_simple(&t).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.interior().is_empty());
    }
}
