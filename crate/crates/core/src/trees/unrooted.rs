use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bracket::{Bracket, Label, Parser};
use crate::error::{Error, Result};

/// Index into the canonical edge enumeration of an [`UnrootedTree`].
///
/// Edge `e` joins vertex `e + 1` to its parent in the canonical layout, so
/// edge 0 is always the edge at the canonical root leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeRef(pub usize);

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// A labeled unitrivalent tree, stored in canonical layout.
///
/// Vertex 0 is the root leaf minimizing `(label, rest-of-tree)`; the other
/// vertices follow in preorder with children sorted by their canonical
/// brackets. Two isomorphic trees therefore have identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnrootedTree {
    labels: Vec<Option<Label>>,
    parent: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

/// Scratch graph used while building trees before canonicalization.
#[derive(Debug, Default, Clone)]
pub(crate) struct Graph {
    pub labels: Vec<Option<Label>>,
    pub adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn add_vertex(&mut self, label: Option<Label>) -> usize {
        self.labels.push(label);
        self.adj.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn connect(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    /// Adds the rooted tree of `b`, returning the vertex that the root edge
    /// should attach to.
    pub fn add_bracket(&mut self, b: &Bracket) -> usize {
        match b {
            Bracket::Leaf(l) => self.add_vertex(Some(l.clone())),
            Bracket::Pair(x, y) => {
                let v = self.add_vertex(None);
                let a = self.add_bracket(x);
                let c = self.add_bracket(y);
                self.connect(v, a);
                self.connect(v, c);
                v
            }
        }
    }

    fn rooted(&self, from: usize, at: usize) -> Bracket {
        match &self.labels[at] {
            Some(l) => Bracket::Leaf(l.clone()),
            None => {
                let mut kids = self.adj[at].iter().filter(|&&w| w != from);
                let a = *kids.next().expect("trivalent");
                let b = *kids.next().expect("trivalent");
                let (x, y) = (self.rooted(at, a), self.rooted(at, b));
                if x <= y {
                    Bracket::pair(x, y)
                } else {
                    Bracket::pair(y, x)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if n < 2 {
            return Err(Error::InvalidTree("a tree needs at least one edge".into()));
        }
        let edge_ends: usize = self.adj.iter().map(Vec::len).sum();
        if edge_ends != 2 * (n - 1) {
            return Err(Error::InvalidTree(format!("{} vertices need {} edges, found {}", n, n - 1, edge_ends / 2)));
        }
        for v in 0..n {
            match (self.adj[v].len(), &self.labels[v]) {
                (1, Some(_)) | (3, None) => {}
                (1, None) => return Err(Error::InvalidTree(format!("univalent vertex {v} has no label"))),
                (3, Some(_)) => return Err(Error::InvalidTree(format!("trivalent vertex {v} carries a label"))),
                (d, _) => return Err(Error::InvalidTree(format!("vertex {v} has valence {d}"))),
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("graph is disconnected".into()));
        }
        Ok(())
    }

    /// Canonicalize, returning the tree and the map old vertex -> new vertex.
    pub fn canonicalize(&self) -> Result<(UnrootedTree, Vec<usize>)> {
        self.validate()?;
        let mut best: Option<(&Label, Bracket, usize)> = None;
        for (v, label) in self.labels.iter().enumerate() {
            let Some(label) = label else { continue };
            let body = self.rooted(v, self.adj[v][0]);
            let better = match &best {
                None => true,
                Some((bl, bb, _)) => (label, &body) < (*bl, bb),
            };
            if better {
                best = Some((label, body, v));
            }
        }
        let (_, _, root) = best.expect("tree has leaves");

        let n = self.labels.len();
        let mut map = vec![usize::MAX; n];
        let mut labels = Vec::with_capacity(n);
        let mut parent = Vec::with_capacity(n);
        map[root] = 0;
        labels.push(self.labels[root].clone());
        parent.push(0);
        self.layout(root, self.adj[root][0], 0, &mut map, &mut labels, &mut parent);
        Ok((UnrootedTree::from_layout(labels, parent), map))
    }

    fn layout(
        &self,
        from: usize,
        at: usize,
        parent_new: usize,
        map: &mut [usize],
        labels: &mut Vec<Option<Label>>,
        parent: &mut Vec<usize>,
    ) {
        let id = labels.len();
        map[at] = id;
        labels.push(self.labels[at].clone());
        parent.push(parent_new);
        if self.labels[at].is_none() {
            let mut kids: Vec<(Bracket, usize)> =
                self.adj[at].iter().filter(|&&w| w != from).map(|&w| (self.rooted(at, w), w)).collect();
            kids.sort();
            for (_, w) in kids {
                self.layout(at, w, id, map, labels, parent);
            }
        }
    }
}

impl UnrootedTree {
    fn from_layout(labels: Vec<Option<Label>>, parent: Vec<usize>) -> Self {
        let mut adj = vec![Vec::new(); labels.len()];
        for v in 1..labels.len() {
            adj[parent[v]].push(v);
            adj[v].push(parent[v]);
        }
        // Keep the parent first for non-root vertices.
        for (v, list) in adj.iter_mut().enumerate().skip(1) {
            list.sort_by_key(|&w| (w != parent[v], w));
        }
        UnrootedTree { labels, parent, adj }
    }

    /// Build from an explicit vertex/edge description.
    ///
    /// Univalent vertices must carry labels and trivalent vertices must not.
    pub fn from_edges(labels: Vec<Option<Label>>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph { adj: vec![Vec::new(); labels.len()], labels };
        for &(a, b) in edges {
            if a >= g.labels.len() || b >= g.labels.len() || a == b {
                return Err(Error::InvalidTree(format!("bad edge ({a},{b})")));
            }
            g.connect(a, b);
        }
        Ok(g.canonicalize()?.0)
    }

    /// Parses `p(A,B)` or `(A,B)`; the puncture, if any, is forgotten.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(parse_tree_text(text)?.tree)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn trivalent_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    pub fn univalent_count(&self) -> usize {
        self.labels.len() - self.trivalent_count()
    }

    /// Vassiliev degree: half the number of vertices.
    pub fn degree(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels.get(v).and_then(Option::as_ref)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.label(v).is_some()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Parent of `v` in the canonical layout (`None` for the root leaf).
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_multiset(&self) -> Vec<Label> {
        let mut v: Vec<Label> = self.labels.iter().flatten().cloned().collect();
        v.sort();
        v
    }

    pub fn check_edge(&self, e: EdgeRef) -> Result<()> {
        if e.0 < self.edge_count() {
            Ok(())
        } else {
            Err(Error::InvalidEdge { index: e.0, count: self.edge_count() })
        }
    }

    /// Endpoints `(parent, child)` of an edge.
    pub fn endpoints(&self, e: EdgeRef) -> Result<(usize, usize)> {
        self.check_edge(e)?;
        let child = e.0 + 1;
        Ok((self.parent[child], child))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> {
        (0..self.edge_count()).map(EdgeRef)
    }

    /// The edge joining two adjacent vertices.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<EdgeRef> {
        if b != 0 && self.parent[b] == a {
            Some(EdgeRef(b - 1))
        } else if a != 0 && self.parent[a] == b {
            Some(EdgeRef(a - 1))
        } else {
            None
        }
    }

    /// Edges sharing a trivalent endpoint with `e`.
    pub fn adjacent_edges(&self, e: EdgeRef) -> Result<Vec<EdgeRef>> {
        let (a, b) = self.endpoints(e)?;
        let mut out = Vec::new();
        for v in [a, b] {
            for &w in &self.adj[v] {
                let f = self.edge_between(v, w).expect("adjacent");
                if f != e {
                    out.push(f);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Bracket of the component containing `at` once the edge `from`-`at` is
    /// cut, rooted at the cut.
    pub fn branch(&self, from: usize, at: usize) -> Bracket {
        match &self.labels[at] {
            Some(l) => Bracket::Leaf(l.clone()),
            None => {
                let mut kids = self.adj[at].iter().filter(|&&w| w != from);
                let a = *kids.next().expect("trivalent");
                let b = *kids.next().expect("trivalent");
                let (x, y) = (self.branch(at, a), self.branch(at, b));
                if x <= y {
                    Bracket::pair(x, y)
                } else {
                    Bracket::pair(y, x)
                }
            }
        }
    }

    /// The canonical bracket hanging off the root leaf.
    pub fn body(&self) -> Bracket {
        self.branch(0, 1)
    }

    pub fn root_label(&self) -> &Label {
        self.labels[0].as_ref().expect("root is a leaf")
    }

    /// Key equal for two trees iff they are isomorphic as unrooted labeled trees.
    pub fn canonical_key(&self) -> String {
        format!("{}:{}", self.root_label(), self.body())
    }

    /// Cut an edge, giving the two brackets whose unrooted product is this
    /// tree punctured at `e`. The pair is returned in canonical order.
    pub fn decompose_at_edge(&self, e: EdgeRef) -> Result<(Bracket, Bracket)> {
        let (a, b) = self.endpoints(e)?;
        let (x, y) = (self.branch(b, a), self.branch(a, b));
        Ok(if x <= y { (x, y) } else { (y, x) })
    }

    /// Reroot at a leaf: the leaf's label names the owner and the rest of the
    /// tree becomes a bracket.
    pub fn reroot_at_leaf(&self, v: usize) -> Result<(Label, Bracket)> {
        match self.labels.get(v) {
            Some(Some(l)) => Ok((l.clone(), self.branch(v, self.adj[v][0]))),
            Some(None) => Err(Error::NotUnivalent(v)),
            None => Err(Error::InvalidTree(format!("no vertex {v}"))),
        }
    }

    /// Rooted view at leaf `v` together with, for every node of the returned
    /// bracket in preorder, the edge above it.
    pub(crate) fn rooted_view(&self, v: usize) -> Result<(Label, Bracket, Vec<EdgeRef>)> {
        let (label, _) = self.reroot_at_leaf(v)?;
        let mut edges = Vec::new();
        let b = self.rooted_with_edges(v, self.adj[v][0], &mut edges);
        Ok((label, b, edges))
    }

    fn rooted_with_edges(&self, from: usize, at: usize, edges: &mut Vec<EdgeRef>) -> Bracket {
        edges.push(self.edge_between(from, at).expect("adjacent"));
        match &self.labels[at] {
            Some(l) => Bracket::Leaf(l.clone()),
            None => {
                let kids: Vec<usize> = self.adj[at].iter().copied().filter(|&w| w != from).collect();
                let x = self.rooted_with_edges(at, kids[0], edges);
                let y = self.rooted_with_edges(at, kids[1], edges);
                Bracket::pair(x, y)
            }
        }
    }

    /// Path between two vertices, inclusive.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let n = self.labels.len();
        let mut prev = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([from]);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![to];
        let mut v = to;
        while v != from {
            v = prev[v];
            out.push(v);
        }
        out.reverse();
        out
    }

    /// Distances from `from` to every vertex.
    pub fn distances(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.labels.len()];
        dist[from] = 0;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

impl fmt::Display for UnrootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({},{})", self.root_label(), self.body())
    }
}

impl FromStr for UnrootedTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        UnrootedTree::parse(s)
    }
}

/// Unrooted product `a · b` with the puncture on the gluing edge.
pub fn unrooted_product(a: &Bracket, b: &Bracket) -> PuncturedTree {
    let mut g = Graph::default();
    let ta = g.add_bracket(a);
    let tb = g.add_bracket(b);
    g.connect(ta, tb);
    let (tree, map) = g.canonicalize().expect("product of brackets is a valid tree");
    let puncture = tree.edge_between(map[ta], map[tb]).expect("gluing edge");
    PuncturedTree { tree, puncture }
}

/// Turn the root of `b` into a leaf labeled `root_label`.
pub fn unroot(b: &Bracket, root_label: &Label) -> UnrootedTree {
    unroot_with_root(b, root_label).0
}

/// As [`unroot`], also returning the canonical vertex of the former root.
pub fn unroot_with_root(b: &Bracket, root_label: &Label) -> (UnrootedTree, usize) {
    let mut g = Graph::default();
    let r = g.add_vertex(Some(root_label.clone()));
    let t = g.add_bracket(b);
    g.connect(r, t);
    let (tree, map) = g.canonicalize().expect("unrooted bracket is a valid tree");
    (tree, map[r])
}

/// One step of puncture motion: `I · (J1,J2)` becomes `(I,J1) · J2`.
/// `toward` picks which child of `J` stays on the far side.
pub fn slide_puncture(i: &Bracket, j: &Bracket, toward_second: bool) -> Option<(Bracket, Bracket)> {
    match j {
        Bracket::Leaf(_) => None,
        Bracket::Pair(j1, j2) => {
            let (stay, go) = if toward_second { (j1, j2) } else { (j2, j1) };
            Some((Bracket::pair(i.clone(), (**stay).clone()), (**go).clone()))
        }
    }
}

/// An unrooted tree with one marked edge (the unpaired intersection point).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuncturedTree {
    pub tree: UnrootedTree,
    pub puncture: EdgeRef,
}

impl PuncturedTree {
    pub fn new(tree: UnrootedTree, puncture: EdgeRef) -> Result<Self> {
        tree.check_edge(puncture)?;
        Ok(PuncturedTree { tree, puncture })
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_tree_text(text)
    }

    pub fn degree(&self) -> usize {
        self.tree.degree()
    }

    /// The two brackets meeting at the puncture.
    pub fn decompose(&self) -> (Bracket, Bracket) {
        self.tree.decompose_at_edge(self.puncture).expect("puncture is a valid edge")
    }

    /// Same tree, puncture moved to `e`. Any edge is reachable by a chain
    /// of moves to adjacent edges, see [`PuncturedTree::puncture_path`].
    pub fn move_puncture(&self, e: EdgeRef) -> Result<PuncturedTree> {
        PuncturedTree::new(self.tree.clone(), e)
    }

    /// Sequence of adjacent edges carrying the puncture to `e`, starting
    /// with the current puncture and ending with `e`.
    pub fn puncture_path(&self, e: EdgeRef) -> Result<Vec<EdgeRef>> {
        self.tree.check_edge(e)?;
        let (a0, b0) = self.tree.endpoints(self.puncture)?;
        let (a1, b1) = self.tree.endpoints(e)?;
        // Vertex path from the current edge to the target edge.
        let candidates = [(a0, a1), (a0, b1), (b0, a1), (b0, b1)];
        let (s, t) = candidates.into_iter().min_by_key(|&(s, t)| self.tree.path(s, t).len()).expect("nonempty");
        let verts = self.tree.path(s, t);
        let mut out = vec![self.puncture];
        for w in verts.windows(2) {
            let f = self.tree.edge_between(w[0], w[1]).expect("path edge");
            if *out.last().unwrap() != f {
                out.push(f);
            }
        }
        if *out.last().unwrap() != e {
            out.push(e);
        }
        Ok(out)
    }

    /// The leaf endpoint of the punctured edge, if there is one
    /// (the smaller vertex when both ends are leaves).
    pub fn leaf_at_puncture(&self) -> Option<usize> {
        let (a, b) = self.tree.endpoints(self.puncture).ok()?;
        [a, b].into_iter().find(|&v| self.tree.is_leaf(v))
    }
}

impl fmt::Display for PuncturedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.decompose();
        write!(f, "p({a},{b})")
    }
}

impl FromStr for PuncturedTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PuncturedTree::parse(s)
    }
}

impl Serialize for PuncturedTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PuncturedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PuncturedTree::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Serialize for UnrootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UnrootedTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        UnrootedTree::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses `p(A,B)`, or a bare pair `(A,B)` read as the same product.
pub fn parse_tree_text(text: &str) -> Result<PuncturedTree> {
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    let rest = trimmed.strip_prefix('p');
    let mut p = Parser::new(text);
    let (a, b) = match rest {
        Some(r) if r.trim_start().starts_with('(') => {
            let l = p.label()?;
            debug_assert_eq!(l.as_str(), "p");
            p.expect(b'(')?;
            let a = p.bracket()?;
            p.expect(b',')?;
            let b = p.bracket()?;
            p.expect(b')')?;
            (a, b)
        }
        _ => match p.bracket()? {
            Bracket::Pair(a, b) => (*a, *b),
            Bracket::Leaf(_) => {
                return Err(Error::Syntax {
                    offset,
                    message: "a single label is not an unrooted tree; use p(A,B)".into(),
                })
            }
        },
    };
    p.finish()?;
    Ok(unrooted_product(&a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(s: &str) -> Bracket {
        Bracket::parse(s).unwrap()
    }

    fn lb(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn chord_product() {
        let p = unrooted_product(&br("1"), &br("2"));
        assert_eq!(p.tree.degree(), 1);
        assert_eq!(p.tree.edge_count(), 1);
        assert_eq!(p.puncture, EdgeRef(0));
        assert_eq!(p.decompose(), (br("1"), br("2")));
        assert_eq!(p.to_string(), "p(1,2)");
    }

    #[test]
    fn h_tree_product_and_cuts() {
        let p = unrooted_product(&br("(1,2)"), &br("(3,4)"));
        assert_eq!(p.tree.degree(), 3);
        assert_eq!(p.tree.trivalent_count(), 2);
        assert_eq!(p.tree.univalent_count(), 4);
        assert_eq!(p.decompose(), (br("(1,2)"), br("(3,4)")));
        let leaf1 = p.tree.leaves().into_iter().find(|&v| p.tree.label(v) == Some(&lb("1"))).unwrap();
        let e = p.tree.edge_between(leaf1, p.tree.neighbors(leaf1)[0]).unwrap();
        assert_eq!(p.tree.decompose_at_edge(e).unwrap(), (br("1"), br("(2,(3,4))")));
        assert!(p.tree.decompose_at_edge(EdgeRef(5)).is_err());
    }

    #[test]
    fn reroot_and_unroot() {
        let chord = unroot(&br("2"), &lb("1"));
        assert_eq!(chord.reroot_at_leaf(0).unwrap(), (lb("1"), br("2")));
        let y = unroot(&br("(2,3)"), &lb("1"));
        assert_eq!(y.degree(), 2);
        assert_eq!(y.univalent_count(), 3);
        let h = unrooted_product(&br("(1,2)"), &br("(3,4)")).tree;
        assert_eq!(h.root_label(), &lb("1"));
        let (owner, b) = h.reroot_at_leaf(0).unwrap();
        assert_eq!((owner, b.canonical_key()), (lb("1"), "(2,(3,4))".to_string()));
        assert!(matches!(h.reroot_at_leaf(1), Err(Error::NotUnivalent(1))));
    }

    #[test]
    fn isomorphism_keys() {
        let a = unroot(&br("(1,(2,3))"), &lb("r"));
        let b = unroot(&br("(3,(2,1))"), &lb("r"));
        assert_ne!(a.canonical_key(), b.canonical_key());
        let c = unroot(&br("((3,2),1)"), &lb("r"));
        assert_eq!(a, c);
        // Same unrooted tree read from different leaves.
        let d = unroot(&br("(2,(1,r))"), &lb("3"));
        assert_eq!(a.canonical_key(), d.canonical_key());
    }

    #[test]
    fn from_edges_validates() {
        let l = |s: &str| Some(lb(s));
        let y = UnrootedTree::from_edges(vec![None, l("a"), l("b"), l("c")], &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(y.degree(), 2);
        assert!(UnrootedTree::from_edges(vec![l("a")], &[]).is_err());
        assert!(UnrootedTree::from_edges(vec![None, l("a"), l("b")], &[(0, 1), (0, 2)]).is_err());
        assert!(UnrootedTree::from_edges(vec![l("a"), l("b"), l("c")], &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn parse_tree_text_forms() {
        let p = PuncturedTree::parse("p((a,b),(c,d))").unwrap();
        assert_eq!(p.to_string(), "p((a,b),(c,d))");
        let q = PuncturedTree::parse("((c,d),(b,a))").unwrap();
        assert_eq!(p, q);
        assert!(matches!(PuncturedTree::parse("a"), Err(Error::Syntax { .. })));
        assert!(matches!(PuncturedTree::parse("p(a,b"), Err(Error::Syntax { offset: 5, .. })));
        // A leaf named `p` is still an ordinary label.
        let r = PuncturedTree::parse("(p,q)").unwrap();
        assert_eq!(r.to_string(), "p(p,q)");
    }

    #[test]
    fn puncture_paths_walk_adjacent_edges() {
        let p = unrooted_product(&br("(1,2)"), &br("((3,4),5)"));
        for e in p.tree.edges() {
            let path = p.puncture_path(e).unwrap();
            assert_eq!(path.first(), Some(&p.puncture));
            assert_eq!(path.last(), Some(&e));
            for w in path.windows(2) {
                assert!(p.tree.adjacent_edges(w[0]).unwrap().contains(&w[1]));
            }
        }
        assert_eq!(p.move_puncture(p.puncture).unwrap(), p);
    }

    #[test]
    fn slide_keeps_tree() {
        let (i, j) = (br("(1,2)"), br("(3,(4,5))"));
        let before = unrooted_product(&i, &j).tree;
        for toward in [false, true] {
            let (i2, j2) = slide_puncture(&i, &j, toward).unwrap();
            assert_eq!(unrooted_product(&i2, &j2).tree, before);
        }
        assert!(slide_puncture(&i, &br("3"), true).is_none());
    }
}
