//! Grope subtowers as tagged rooted trees, the two elementary moves that
//! trade class for order, and the conversion drivers built on them.
//!
//! Nodes of a [`HybridTree`] are numbered in preorder over the bracket
//! (pair nodes and leaves). Edge `i` is the edge above node `i`; edge 0 is
//! the link to the root vertex. Grope-tagged nodes form a subtree at the
//! top; everything below it splits into cap components, each carrying one
//! unpaired point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grope::CappedGrope;
use crate::tower::SplitTower;
use crate::trees::{unroot_with_root, Bracket, Label, PuncturedTree, UnrootedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Grope,
    Tower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    label: Option<Label>,
    parent: Option<usize>,
    children: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridTree {
    bracket: Bracket,
    nodes: Vec<Node>,
    tags: Vec<Option<Tag>>,
    punctures: BTreeSet<usize>,
}

/// A connected piece below the grope region, identified by its top node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapComponent {
    pub top: usize,
    pub nodes: Vec<usize>,
    pub puncture: usize,
}

fn flatten(b: &Bracket, parent: Option<usize>, out: &mut Vec<Node>) -> usize {
    let me = out.len();
    out.push(Node { label: b.as_leaf().cloned(), parent, children: None });
    if let Bracket::Pair(l, r) = b {
        let a = flatten(l, Some(me), out);
        let c = flatten(r, Some(me), out);
        out[me].children = Some([a, c]);
    }
    me
}

impl HybridTree {
    /// `tags` lists the pair nodes in preorder; `punctures` are edge indices.
    pub fn new(bracket: Bracket, tags: &[Tag], punctures: BTreeSet<usize>) -> Result<Self> {
        let mut nodes = Vec::new();
        flatten(&bracket, None, &mut nodes);
        let pairs: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].children.is_some()).collect();
        if pairs.len() != tags.len() {
            return Err(Error::InvalidHybrid(format!("{} tags for {} pair nodes", tags.len(), pairs.len())));
        }
        let mut all = vec![None; nodes.len()];
        for (&i, &t) in pairs.iter().zip(tags) {
            all[i] = Some(t);
        }
        let h = HybridTree { bracket, nodes, tags: all, punctures };
        h.validate()?;
        Ok(h)
    }

    /// Every pair node Tower, one puncture on edge `puncture`.
    pub fn all_tower(bracket: Bracket, puncture: usize) -> Result<Self> {
        let tags = vec![Tag::Tower; bracket.pair_count()];
        HybridTree::new(bracket, &tags, BTreeSet::from([puncture]))
    }

    /// Every pair node Grope, a puncture on every leaf edge.
    pub fn all_grope(bracket: Bracket) -> Self {
        let tags = vec![Tag::Grope; bracket.pair_count()];
        let mut nodes = Vec::new();
        flatten(&bracket, None, &mut nodes);
        let leaves = (0..nodes.len()).filter(|&i| nodes[i].children.is_none()).collect();
        HybridTree::new(bracket, &tags, leaves).expect("all-grope tagging is valid")
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.nodes.len() {
            if self.tags[i] == Some(Tag::Grope) && i != 0 && !self.is_grope(self.nodes[i].parent.unwrap()) {
                return Err(Error::InvalidHybrid(format!("grope node {i} is cut off from the top")));
            }
        }
        if let Some(&p) = self.punctures.iter().find(|&&p| p >= self.nodes.len()) {
            return Err(Error::InvalidHybrid(format!("puncture edge {p} out of range")));
        }
        if let Some(&p) = self.punctures.iter().find(|&&p| self.is_grope(p)) {
            return Err(Error::InvalidHybrid(format!("puncture edge {p} lies inside the grope region")));
        }
        for c in self.components_unchecked() {
            let n = c.nodes.iter().filter(|v| self.punctures.contains(v)).count();
            if n != 1 {
                return Err(Error::InvalidHybrid(format!("cap component at {} has {n} punctures", c.top)));
            }
        }
        Ok(())
    }

    pub fn bracket(&self) -> &Bracket {
        &self.bracket
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn tag(&self, node: usize) -> Option<Tag> {
        self.tags.get(node).copied().flatten()
    }

    /// Tags of pair nodes in preorder.
    pub fn tags(&self) -> Vec<Tag> {
        self.tags.iter().flatten().copied().collect()
    }

    pub fn punctures(&self) -> &BTreeSet<usize> {
        &self.punctures
    }

    pub fn children(&self, node: usize) -> Option<[usize; 2]> {
        self.nodes[node].children
    }

    pub fn label(&self, node: usize) -> Option<&Label> {
        self.nodes[node].label.as_ref()
    }

    fn is_grope(&self, node: usize) -> bool {
        self.tags[node] == Some(Tag::Grope)
    }

    fn subtree(&self, top: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![top];
        while let Some(v) = stack.pop() {
            out.push(v);
            if let Some([a, b]) = self.nodes[v].children {
                stack.push(b);
                stack.push(a);
            }
        }
        out
    }

    fn component_tops(&self) -> Vec<usize> {
        if !self.is_grope(0) {
            return vec![0];
        }
        (0..self.nodes.len())
            .filter(|&v| !self.is_grope(v) && self.nodes[v].parent.is_some_and(|p| self.is_grope(p)))
            .collect()
    }

    fn components_unchecked(&self) -> Vec<CapComponent> {
        self.component_tops()
            .into_iter()
            .map(|top| {
                let nodes = self.subtree(top);
                let puncture = nodes.iter().copied().find(|v| self.punctures.contains(v)).unwrap_or(usize::MAX);
                CapComponent { top, nodes, puncture }
            })
            .collect()
    }

    /// Cap components in preorder of their top nodes.
    pub fn cap_components(&self) -> Vec<CapComponent> {
        self.components_unchecked()
    }

    pub fn grope_count(&self) -> usize {
        self.tags.iter().filter(|t| **t == Some(Tag::Grope)).count()
    }

    pub fn tower_count(&self) -> usize {
        self.tags.iter().filter(|t| **t == Some(Tag::Tower)).count()
    }

    pub fn degree(&self) -> usize {
        self.bracket.degree()
    }

    /// Grope nodes whose children both lie in cap components.
    pub fn surgery_sites(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&v| self.is_grope(v) && self.nodes[v].children.unwrap().iter().all(|&c| !self.is_grope(c)))
            .collect()
    }

    /// Component tops that carry at least one Tower node.
    pub fn tube_sites(&self) -> Vec<usize> {
        self.component_tops().into_iter().filter(|&v| self.tags[v] == Some(Tag::Tower)).collect()
    }
}

impl fmt::Display for HybridTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tags: Vec<&str> = self
            .tags()
            .iter()
            .map(|t| match t {
                Tag::Grope => "G",
                Tag::Tower => "T",
            })
            .collect();
        let p: Vec<String> = self.punctures.iter().map(|e| e.to_string()).collect();
        write!(f, "{} [{}] punctures {{{}}}", self.bracket, tags.join(""), p.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct HybridJson {
    tree: Bracket,
    tags: Vec<Tag>,
    punctures: BTreeSet<usize>,
}

impl Serialize for HybridTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HybridJson { tree: self.bracket.clone(), tags: self.tags(), punctures: self.punctures.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HybridTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HybridJson::deserialize(d)?;
        HybridTree::new(j.tree, &j.tags, j.punctures).map_err(serde::de::Error::custom)
    }
}

/// `#Grope + 1`.
pub fn hybrid_class(t: &HybridTree) -> usize {
    t.grope_count() + 1
}

/// Sum over the children of Grope nodes; a cap component contributes its
/// Tower node count.
pub fn hybrid_order(t: &HybridTree) -> usize {
    fn at(t: &HybridTree, v: usize) -> usize {
        if t.is_grope(v) {
            let [a, b] = t.nodes[v].children.unwrap();
            at(t, a) + at(t, b)
        } else {
            t.subtree(v).into_iter().filter(|&w| t.tags[w] == Some(Tag::Tower)).count()
        }
    }
    at(t, 0)
}

/// Tube a cap along a Whitney disk: the Tower node at the top of the cap
/// component becomes a Grope node and the component splits in two. The
/// half that loses the unpaired point gets a puncture on its new boundary
/// edge.
pub fn cap_tube_move(t: &HybridTree, cap: usize) -> Result<HybridTree> {
    let comp = t
        .cap_components()
        .into_iter()
        .find(|c| c.top == cap)
        .ok_or_else(|| Error::Precondition(format!("node {cap} is not the top of a cap component")))?;
    if t.tags.get(cap).copied().flatten() != Some(Tag::Tower) {
        return Err(Error::Precondition(format!("cap component at {cap} has no Tower node")));
    }
    let [a, b] = t.nodes[cap].children.unwrap();
    let mut out = t.clone();
    let mut p = comp.puncture;
    if p == cap {
        out.punctures.remove(&p);
        p = a;
        out.punctures.insert(p);
    }
    out.tags[cap] = Some(Tag::Grope);
    let other = if t.subtree(a).contains(&p) { b } else { a };
    out.punctures.insert(other);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Surger a cap along its dual: a Grope node whose children both lie in cap
/// components becomes a Tower node and the two components merge. The left
/// component's unpaired point is paired and its puncture removed.
pub fn cap_surgery_move(t: &HybridTree, v: usize) -> Result<HybridTree> {
    if v >= t.nodes.len() || !t.is_grope(v) {
        return Err(Error::Precondition(format!("node {v} is not a Grope node")));
    }
    let [a, b] = t.nodes[v].children.unwrap();
    if t.is_grope(a) || t.is_grope(b) {
        return Err(Error::Precondition(format!("node {v} is not a topmost Grope node")));
    }
    let mut out = t.clone();
    out.tags[v] = Some(Tag::Tower);
    let left = t.subtree(a).into_iter().find(|w| t.punctures.contains(w)).expect("component puncture");
    out.punctures.remove(&left);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Metric summary over a forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceMetric {
    pub per_surface: BTreeMap<Label, usize>,
    pub overall: Option<usize>,
}

/// A split grope subtower: hybrid trees grouped by owning surface.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GropeSubtower {
    pub surfaces: BTreeSet<Label>,
    pub forest: BTreeMap<Label, Vec<HybridTree>>,
}

impl GropeSubtower {
    fn metric(&self, f: impl Fn(&HybridTree) -> usize) -> SurfaceMetric {
        let per_surface: BTreeMap<Label, usize> =
            self.forest.iter().filter_map(|(o, ts)| ts.iter().map(&f).min().map(|m| (o.clone(), m))).collect();
        let overall = per_surface.values().min().copied();
        SurfaceMetric { per_surface, overall }
    }

    pub fn class(&self) -> SurfaceMetric {
        self.metric(hybrid_class)
    }

    pub fn order(&self) -> SurfaceMetric {
        self.metric(hybrid_order)
    }
}

/// Which univalent vertex of a tree becomes the root of its grope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preference {
    /// Least label; first such vertex in canonical order.
    Auto,
    /// First vertex carrying this label.
    Label(Label),
    /// A specific vertex index.
    Vertex(usize),
}

impl FromStr for Preference {
    type Err = Error;

    /// `auto`, a label, or `#N` for vertex `N`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(Preference::Auto)
        } else if let Some(n) = s.strip_prefix('#') {
            n.parse()
                .map(Preference::Vertex)
                .map_err(|_| Error::Syntax { offset: 1, message: format!("bad vertex index {n:?}") })
        } else {
            Label::new(s).map(Preference::Label)
        }
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preference::Auto => f.write_str("auto"),
            Preference::Label(l) => write!(f, "{l}"),
            Preference::Vertex(v) => write!(f, "#{v}"),
        }
    }
}

/// Resolve a preference to a univalent vertex of `t`.
pub fn preferred_leaf(t: &UnrootedTree, p: &Preference) -> Result<usize> {
    let leaves = t.leaves();
    match p {
        Preference::Auto => Ok(*leaves.iter().min_by_key(|&&v| (t.label(v), v)).expect("trees have leaves")),
        Preference::Label(l) => leaves
            .iter()
            .copied()
            .find(|&v| t.label(v) == Some(l))
            .ok_or_else(|| Error::Precondition(format!("no univalent vertex labelled {l} in {t}"))),
        Preference::Vertex(v) if leaves.contains(v) => Ok(*v),
        Preference::Vertex(v) => Err(Error::Precondition(format!("vertex {v} is not univalent in {t}"))),
    }
}

/// Owner label and hybrid tree at the all-Grope fixpoint for one tree,
/// reached by tube moves from the all-Tower tagging rooted at `root`.
pub fn tube_to_grope(p: &PuncturedTree, root: usize) -> Result<(Label, HybridTree, usize)> {
    let (owner, bracket, edges) = p.tree.rooted_view(root)?;
    let at = edges.iter().position(|&e| e == p.puncture).expect("puncture is a tree edge");
    let mut h = HybridTree::all_tower(bracket, at)?;
    let mut moves = 0;
    while let Some(&cap) = h.tube_sites().first() {
        h = cap_tube_move(&h, cap)?;
        moves += 1;
    }
    Ok((owner, h, moves))
}

/// Convert a split tower into a capped grope. Each tree is rooted at its
/// preferred univalent vertex, whose label becomes the owning surface.
/// `prefer` is empty (all automatic), a single entry for every tree, or
/// one entry per tree.
pub fn tower_to_grope(t: &SplitTower, prefer: &[Preference]) -> Result<CappedGrope> {
    let n = t.trees.len();
    if prefer.len() > 1 && prefer.len() != n {
        return Err(Error::Precondition(format!("{} preferences for {n} trees", prefer.len())));
    }
    let mut bodies: BTreeMap<Label, Vec<Bracket>> = BTreeMap::new();
    for (i, p) in t.trees.iter().enumerate() {
        let pref = match prefer.len() {
            0 => &Preference::Auto,
            1 => &prefer[0],
            _ => &prefer[i],
        };
        let root = preferred_leaf(&p.tree, pref)?;
        let (owner, h, _) = tube_to_grope(p, root)?;
        bodies.entry(owner).or_default().push(h.bracket().canonical());
    }
    for f in bodies.values_mut() {
        f.sort_by_cached_key(Bracket::canonical_key);
    }
    let g = CappedGrope { bodies, surfaces: t.surfaces.clone(), kind: None };
    g.validate()?;
    Ok(g)
}

/// All-Grope to all-Tower by surgery, returning the surviving puncture
/// edge and the number of moves.
pub fn surger_to_tower(b: &Bracket) -> (HybridTree, usize) {
    let mut h = HybridTree::all_grope(b.clone());
    let mut moves = 0;
    while let Some(&v) = h.surgery_sites().first() {
        h = cap_surgery_move(&h, v).expect("surgery site");
        moves += 1;
    }
    (h, moves)
}

/// Convert a capped grope into a split tower, returning the root vertex of
/// each tree as well. Punctures sit on the root-leaf edge.
pub fn grope_to_tower_with_roots(g: &CappedGrope) -> Result<(SplitTower, Vec<usize>)> {
    g.validate()?;
    let mut surfaces = g.surfaces.clone();
    surfaces.extend(g.bodies.keys().cloned());
    let mut trees = Vec::new();
    let mut roots = Vec::new();
    for (owner, b) in g.brackets() {
        let (h, _) = surger_to_tower(b);
        debug_assert_eq!(h.grope_count(), 0);
        let (tree, root) = unroot_with_root(h.bracket(), owner);
        let e = tree.edge_between(root, tree.neighbors(root)[0]).expect("root edge");
        trees.push(PuncturedTree::new(tree, e)?);
        roots.push(root);
    }
    Ok((SplitTower::new(surfaces, trees)?, roots))
}

pub fn grope_to_tower(g: &CappedGrope) -> Result<SplitTower> {
    grope_to_tower_with_roots(g).map(|(t, _)| t)
}
