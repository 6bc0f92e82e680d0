//! Brute-force generators and checkers for tests. Nothing here calls the
//! canonicalization, rewriting or conversion code it is used to check: the
//! oracle keeps its own edge-list trees, its own canonical strings (minimum
//! over every choice of root) and its own IHX rewiring.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grope::CappedGrope;
use crate::tower::SplitTower;
use crate::trees::{Bracket, EdgeRef, Label, PuncturedTree, UnrootedTree};

const ROOT: &str = "^";

/// An unrooted unitrivalent tree as a plain edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OTree {
    pub labels: Vec<Option<String>>,
    pub edges: Vec<(usize, usize)>,
}

impl OTree {
    pub fn chord(a: &str, b: &str) -> Self {
        OTree { labels: vec![Some(a.into()), Some(b.into())], edges: vec![(0, 1)] }
    }

    pub fn from_tree(t: &UnrootedTree) -> Self {
        let labels = (0..t.vertex_count()).map(|v| t.label(v).map(|l| l.to_string())).collect();
        let mut edges = Vec::new();
        for v in 0..t.vertex_count() {
            for &w in t.neighbors(v) {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        OTree { labels, edges }
    }

    /// The tree of `b` with an extra leaf labelled `root` at the top.
    pub fn from_bracket(b: &Bracket, root: &str) -> Self {
        fn add(b: &Bracket, t: &mut OTree) -> usize {
            match b {
                Bracket::Leaf(l) => {
                    t.labels.push(Some(l.to_string()));
                    t.labels.len() - 1
                }
                Bracket::Pair(x, y) => {
                    t.labels.push(None);
                    let me = t.labels.len() - 1;
                    let a = add(x, t);
                    let c = add(y, t);
                    t.edges.push((me, a));
                    t.edges.push((me, c));
                    me
                }
            }
        }
        let mut t = OTree { labels: vec![Some(root.into())], edges: Vec::new() };
        let top = add(b, &mut t);
        t.edges.push((0, top));
        t
    }

    pub fn to_tree(&self) -> UnrootedTree {
        let labels = self.labels.iter().map(|l| l.as_ref().map(|s| Label::new(s.as_str()).unwrap())).collect();
        UnrootedTree::from_edges(labels, &self.edges).expect("oracle trees are unitrivalent")
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.labels.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn degree(&self) -> usize {
        self.labels.len() / 2
    }

    pub fn leaf_labels(&self) -> Vec<String> {
        let mut v: Vec<String> = self.labels.iter().flatten().cloned().collect();
        v.sort();
        v
    }

    /// Subdivide edge `e` and hang a new leaf labelled `label` there.
    pub fn graft(&self, e: usize, label: &str) -> OTree {
        let mut t = self.clone();
        let (a, b) = t.edges[e];
        let mid = t.labels.len();
        t.labels.push(None);
        let leaf = t.labels.len();
        t.labels.push(Some(label.into()));
        t.edges[e] = (a, mid);
        t.edges.push((mid, b));
        t.edges.push((mid, leaf));
        t
    }

    fn string_from(&self, adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> =
            adj[v].iter().filter(|&&w| w != parent).map(|&w| self.string_from(adj, w, v)).collect();
        kids.sort();
        match &self.labels[v] {
            Some(l) if kids.is_empty() => l.clone(),
            Some(l) => format!("{l}[{}]", kids.join(",")),
            None => format!("({})", kids.join(",")),
        }
    }

    /// Canonical string: the least rooted encoding over all vertices.
    pub fn key(&self) -> String {
        let adj = self.adjacency();
        (0..self.labels.len()).map(|v| self.string_from(&adj, v, usize::MAX)).min().unwrap_or_default()
    }

    /// The rooted encoding seen from leaf `v`.
    pub fn rooted_key(&self, v: usize) -> String {
        let adj = self.adjacency();
        self.string_from(&adj, v, usize::MAX)
    }

    /// Internal edges: both endpoints trivalent.
    pub fn internal_edges(&self) -> Vec<usize> {
        let adj = self.adjacency();
        (0..self.edges.len()).filter(|&e| adj[self.edges[e].0].len() == 3 && adj[self.edges[e].1].len() == 3).collect()
    }

    /// The two other pairings of the four branches around internal edge
    /// `e`. Branches `a,b` at one end and `c,d` at the other become
    /// `{a,c | b,d}` and `{a,d | b,c}`.
    pub fn ihx(&self, e: usize) -> [OTree; 2] {
        let adj = self.adjacency();
        let (u, v) = self.edges[e];
        let side = |x: usize, y: usize| -> Vec<usize> { adj[x].iter().copied().filter(|&w| w != y).collect() };
        let (ab, cd) = (side(u, v), side(v, u));
        let rewire = |to_u: [usize; 2], to_v: [usize; 2]| -> OTree {
            let mut t = self.clone();
            t.edges.retain(|&(x, y)| !(x == u || y == u || x == v || y == v));
            t.edges.push((u, v));
            for w in to_u {
                t.edges.push((u, w));
            }
            for w in to_v {
                t.edges.push((v, w));
            }
            t
        };
        [rewire([ab[0], cd[0]], [ab[1], cd[1]]), rewire([ab[0], cd[1]], [ab[1], cd[0]])]
    }
}

/// `(2n-1)!! = 1 * 3 * ... * (2n-1)`, with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> u64 {
    let mut acc = 1u64;
    let mut k = n;
    while k > 1 {
        acc *= k as u64;
        k -= 2;
    }
    acc
}

/// Every labelled tree on the given leaves, by grafting leaves one at a
/// time onto every edge. With distinct labels there are no repeats.
pub fn grow_unrooted(leaves: &[&str]) -> Vec<OTree> {
    assert!(leaves.len() >= 2, "need two leaves");
    let mut trees = vec![OTree::chord(leaves[0], leaves[1])];
    for l in &leaves[2..] {
        trees = trees.iter().flat_map(|t| (0..t.edges.len()).map(move |e| t.graft(e, l))).collect();
    }
    trees
}

fn dedup(trees: Vec<OTree>) -> Vec<OTree> {
    let mut seen = BTreeMap::new();
    for t in trees {
        seen.entry(t.key()).or_insert(t);
    }
    seen.into_values().collect()
}

/// All unrooted trees on a leaf multiset, up to isomorphism.
pub fn enumerate_unrooted(leaves: &[&str]) -> Vec<UnrootedTree> {
    dedup(grow_unrooted(leaves)).iter().map(OTree::to_tree).collect()
}

fn to_bracket(adj: &[Vec<usize>], labels: &[Option<String>], v: usize, parent: usize) -> Bracket {
    match &labels[v] {
        Some(l) => Bracket::leaf(Label::new(l.as_str()).unwrap()),
        None => {
            let kids: Vec<usize> = adj[v].iter().copied().filter(|&w| w != parent).collect();
            Bracket::pair(to_bracket(adj, labels, kids[0], v), to_bracket(adj, labels, kids[1], v))
        }
    }
}

/// All brackets on a leaf multiset, up to isomorphism: unrooted trees with
/// an extra root leaf, read from that leaf.
pub fn enumerate_brackets(leaves: &[&str]) -> Vec<Bracket> {
    assert!(!leaves.is_empty(), "need a leaf");
    let mut all = vec![ROOT];
    all.extend_from_slice(leaves);
    let mut seen = BTreeMap::new();
    for t in grow_unrooted(&all) {
        seen.entry(t.rooted_key(0)).or_insert(t);
    }
    seen.into_values()
        .map(|t| {
            let adj = t.adjacency();
            to_bracket(&adj, &t.labels, adj[0][0], 0)
        })
        .collect()
}

/// Isomorphism by exhaustive backtracking over vertex maps.
pub fn brute_isomorphic(a: &OTree, b: &OTree) -> bool {
    if a.labels.len() != b.labels.len() || a.leaf_labels() != b.leaf_labels() {
        return false;
    }
    let (aa, ba) = (a.adjacency(), b.adjacency());
    fn extend(
        a: &OTree,
        b: &OTree,
        aa: &[Vec<usize>],
        ba: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        todo: &mut Vec<(usize, usize)>,
    ) -> bool {
        let Some((x, px)) = todo.pop() else { return true };
        let y = map[x];
        let xs: Vec<usize> = aa[x].iter().copied().filter(|&w| w != px).collect();
        let py = if px == usize::MAX { usize::MAX } else { map[px] };
        let ys: Vec<usize> = ba[y].iter().copied().filter(|&w| w != py).collect();
        if xs.len() != ys.len() {
            todo.push((x, px));
            return false;
        }
        for perm in permutations(ys.len()) {
            let ok = xs.iter().zip(&perm).all(|(&c, &i)| {
                let d = ys[i];
                !used[d] && a.labels[c] == b.labels[d] && aa[c].len() == ba[d].len()
            });
            if !ok {
                continue;
            }
            for (&c, &i) in xs.iter().zip(&perm) {
                map[c] = ys[i];
                used[ys[i]] = true;
                todo.push((c, x));
            }
            if extend(a, b, aa, ba, map, used, todo) {
                return true;
            }
            for &c in &xs {
                todo.retain(|&(v, _)| v != c);
                used[map[c]] = false;
                map[c] = usize::MAX;
            }
        }
        todo.push((x, px));
        false
    }
    for y in 0..b.labels.len() {
        if a.labels[0] != b.labels[y] || aa[0].len() != ba[y].len() {
            continue;
        }
        let mut map = vec![usize::MAX; a.labels.len()];
        let mut used = vec![false; b.labels.len()];
        map[0] = y;
        used[y] = true;
        let mut todo = vec![(0, usize::MAX)];
        if extend(a, b, &aa, &ba, &mut map, &mut used, &mut todo) {
            return true;
        }
    }
    false
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Result of a closure computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reach {
    /// Every tree reachable, keyed by oracle key.
    Closed(BTreeMap<String, OTree>),
    /// Budget ran out after visiting this many trees.
    BudgetExhausted(usize),
}

/// Breadth-first closure under IHX: each rewrite contributes both outputs.
/// `budget` bounds the number of distinct trees visited.
pub fn ihx_reachability(t: &UnrootedTree, budget: usize) -> Reach {
    let start = OTree::from_tree(t);
    let mut seen = BTreeMap::from([(start.key(), start.clone())]);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for e in cur.internal_edges() {
            for next in cur.ihx(e) {
                let k = next.key();
                if !seen.contains_key(&k) {
                    if seen.len() >= budget {
                        return Reach::BudgetExhausted(seen.len());
                    }
                    seen.insert(k, next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    Reach::Closed(seen)
}

/// Trees up to a degree bound over an alphabet, every leaf multiset.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub max_degree: usize,
    pub alphabet: Vec<String>,
    pub unrooted: Vec<UnrootedTree>,
    pub brackets: Vec<Bracket>,
}

impl Corpus {
    pub fn new(max_degree: usize, alphabet: &[&str]) -> Self {
        let mut unrooted = Vec::new();
        let mut brackets = Vec::new();
        for n in 1..=max_degree + 1 {
            for ms in multisets(alphabet, n) {
                if n >= 2 {
                    unrooted.extend(enumerate_unrooted(&ms));
                }
                if n <= max_degree {
                    brackets.extend(enumerate_brackets(&ms));
                }
            }
        }
        Corpus { max_degree, alphabet: alphabet.iter().map(|s| s.to_string()).collect(), unrooted, brackets }
    }
}

/// Multisets of size `n` drawn from `alphabet`, each sorted.
pub fn multisets<'a>(alphabet: &[&'a str], n: usize) -> Vec<Vec<&'a str>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &a) in alphabet.iter().enumerate() {
        for mut rest in multisets(&alphabet[i..], n - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn pick<'a, R: Rng>(rng: &mut R, alphabet: &'a [Label]) -> &'a Label {
    alphabet.choose(rng).expect("nonempty alphabet")
}

/// Uniform random labelled tree with `leaves` leaves, as an oracle tree.
pub fn random_otree<R: Rng>(rng: &mut R, leaves: usize, alphabet: &[Label]) -> OTree {
    let mut t = OTree::chord(pick(rng, alphabet).as_str(), pick(rng, alphabet).as_str());
    for _ in 2..leaves {
        let e = rng.gen_range(0..t.edges.len());
        t = t.graft(e, pick(rng, alphabet).as_str());
    }
    t
}

/// Random bracket with `leaves` leaves.
pub fn random_bracket<R: Rng>(rng: &mut R, leaves: usize, alphabet: &[Label]) -> Bracket {
    if leaves == 1 {
        return Bracket::leaf(pick(rng, alphabet).clone());
    }
    let mut t = OTree { labels: vec![Some(ROOT.into()), Some(pick(rng, alphabet).to_string())], edges: vec![(0, 1)] };
    for _ in 1..leaves {
        let e = rng.gen_range(0..t.edges.len());
        t = t.graft(e, pick(rng, alphabet).as_str());
    }
    let adj = t.adjacency();
    to_bracket(&adj, &t.labels, adj[0][0], 0)
}

/// Random tree of the given degree.
pub fn random_unrooted<R: Rng>(rng: &mut R, degree: usize, alphabet: &[Label]) -> UnrootedTree {
    random_otree(rng, degree + 1, alphabet).to_tree()
}

/// Random tree with a random puncture.
pub fn random_punctured<R: Rng>(rng: &mut R, degree: usize, alphabet: &[Label]) -> PuncturedTree {
    let t = random_unrooted(rng, degree, alphabet);
    let e = EdgeRef(rng.gen_range(0..t.edge_count()));
    PuncturedTree::new(t, e).expect("edge in range")
}

/// Random split tower whose least tree degree is exactly `min_degree`.
pub fn random_split_tower<R: Rng>(rng: &mut R, min_degree: usize, alphabet: &[Label]) -> SplitTower {
    let n = rng.gen_range(1..=3);
    let trees: Vec<PuncturedTree> = (0..n)
        .map(|i| {
            let d = if i == 0 { min_degree } else { rng.gen_range(min_degree..=min_degree + 2) };
            random_punctured(rng, d, alphabet)
        })
        .collect();
    let surfaces: BTreeSet<Label> = alphabet.iter().cloned().collect();
    SplitTower::new(surfaces, trees).expect("labels drawn from the surfaces")
}

/// Random capped grope whose least bracket degree is exactly `class`.
pub fn random_grope<R: Rng>(rng: &mut R, class: usize, alphabet: &[Label]) -> CappedGrope {
    let owners = rng.gen_range(1..=alphabet.len().min(3));
    let mut chosen: Vec<&Label> = alphabet.iter().collect();
    chosen.shuffle(rng);
    let mut bodies: BTreeMap<Label, Vec<Bracket>> = BTreeMap::new();
    for (i, &o) in chosen[..owners].iter().enumerate() {
        let count = rng.gen_range(1..=2);
        let forest = (0..count)
            .map(|j| {
                let d = if i == 0 && j == 0 { class } else { rng.gen_range(class..=class + 2) };
                random_bracket(rng, d, alphabet)
            })
            .collect();
        bodies.insert(o.clone(), forest);
    }
    let mut g = CappedGrope::new(bodies);
    g.surfaces.extend(alphabet.iter().cloned());
    g
}

/// Labels `1..=n`.
pub fn numeric_alphabet(n: usize) -> Vec<Label> {
    (1..=n).map(|i| Label::new(i.to_string()).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn counts() {
        assert_eq!(enumerate_brackets(&["1"]).len(), 1);
        assert_eq!(enumerate_brackets(&["1", "2", "3"]).len(), 3);
        assert_eq!(enumerate_brackets(&["1", "2", "3", "4"]).len(), 15);
        assert_eq!(enumerate_unrooted(&["1", "2"]).len(), 1);
        assert_eq!(enumerate_unrooted(&["1", "2", "3", "4"]).len(), 3);
        assert_eq!(enumerate_unrooted(&["1", "2", "3", "4", "5"]).len(), 15);
        assert_eq!(enumerate_unrooted(&["a", "a", "a", "a"]).len(), 1);
        assert_eq!(enumerate_brackets(&["a", "a", "a"]).len(), 1);
        assert_eq!(double_factorial(5), 15);
        assert_eq!(double_factorial(-1), 1);
    }

    #[test]
    fn brute_iso() {
        let t = |s: &str| OTree::from_tree(&UnrootedTree::parse(s).unwrap());
        assert!(brute_isomorphic(&t("p((1,2),(3,4))"), &t("p((4,3),(2,1))")));
        assert!(!brute_isomorphic(&t("p((1,2),(3,4))"), &t("p((1,3),(2,4))")));
        assert!(!brute_isomorphic(&t("p(1,2)"), &t("p(1,3)")));
    }

    #[test]
    fn ihx_alternatives() {
        let t = OTree::from_tree(&UnrootedTree::parse("p((1,2),(3,4))").unwrap());
        let e = t.internal_edges()[0];
        let [x, y] = t.ihx(e);
        let keys: BTreeSet<String> = [x.key(), y.key()].into();
        let want: BTreeSet<String> = ["p((1,3),(2,4))", "p((1,4),(2,3))"]
            .iter()
            .map(|s| OTree::from_tree(&UnrootedTree::parse(s).unwrap()).key())
            .collect();
        assert_eq!(keys, want);
    }

    #[test]
    fn reachability_budget() {
        let t = UnrootedTree::parse("p((1,2),(3,4))").unwrap();
        match ihx_reachability(&t, 100) {
            Reach::Closed(m) => assert_eq!(m.len(), 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(ihx_reachability(&t, 2), Reach::BudgetExhausted(2));
    }

    #[test]
    fn generators() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let abc = numeric_alphabet(3);
        for d in 1..8 {
            assert_eq!(random_unrooted(&mut rng, d, &abc).degree(), d);
            assert_eq!(random_bracket(&mut rng, d, &abc).degree(), d);
        }
        let g = random_grope(&mut rng, 4, &abc);
        assert_eq!(crate::grope::grope_class(&g).unwrap().overall, 4);
        assert_eq!(multisets(&["a", "b"], 2).len(), 3);
    }
}
