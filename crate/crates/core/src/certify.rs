//! Certificate pipelines: symmetric gropes to height-n towers, gropes to
//! half-gropes, and gropes to k-slice root selections. Every certificate
//! carries its input and re-checks itself from its serialized form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grope::{grope_class, is_half_grope, is_symmetric_height, CappedGrope};
use crate::hybrid::grope_to_tower_with_roots;
use crate::rewrite::{normalize_right_normed, normalize_simple};
use crate::tower::{check_height, tower_order, OrderValue, SplitTower};
use crate::trees::{is_shape, is_simple, y_tree, Bracket, EdgeRef, Height, Label, PuncturedTree, UnrootedTree};

/// Puncture position and decomposition that witness the height of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightWitness {
    pub puncture: EdgeRef,
    pub split: [Bracket; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightCertificate {
    pub height: Height,
    pub grope: CappedGrope,
    pub tower: SplitTower,
    pub order: OrderValue,
    pub witnesses: Vec<HeightWitness>,
    /// Every tree minus its root leaf is exactly `Y^h`.
    pub stronger_condition: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfGropeCertificate {
    pub grope: CappedGrope,
    pub half_grope: CappedGrope,
    pub class: BTreeMap<Label, usize>,
}

/// A chosen root for one simple tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRoot {
    pub leaf: usize,
    pub label: Label,
    /// Spine position of the trivalent vertex next to the leaf, counted
    /// from one end of the spine.
    pub position: usize,
    /// Number of trivalent vertices on the spine.
    pub spine: usize,
    pub branch_degrees: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceTree {
    pub tree: UnrootedTree,
    pub root: SliceRoot,
    /// The two first-stage branches above the bottom stage.
    pub branches: [Bracket; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceEntry {
    pub source: PuncturedTree,
    pub simple: Vec<SliceTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KSliceCertificate {
    pub k: usize,
    pub grope: CappedGrope,
    pub class: usize,
    pub entries: Vec<SliceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    Height(HeightCertificate),
    HalfGrope(HalfGropeCertificate),
    KSlice(KSliceCertificate),
}

impl Certificate {
    /// Re-derive every recorded quantity and compare.
    pub fn verify(&self) -> Result<()> {
        match self {
            Certificate::Height(c) => verify_height(c),
            Certificate::HalfGrope(c) => verify_half_grope(c),
            Certificate::KSlice(c) => verify_k_slice(c),
        }
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn tower_text(t: &SplitTower) -> Vec<String> {
    t.trees.iter().map(PuncturedTree::to_string).collect()
}

fn stronger(tower: &SplitTower, roots: &[usize], h: Height) -> bool {
    let shape = y_tree(h);
    tower
        .trees
        .iter()
        .zip(roots)
        .all(|(p, &r)| p.tree.reroot_at_leaf(r).map(|(_, b)| is_shape(&b, &shape)).unwrap_or(false))
}

/// Tower of a symmetric grope with its height witnesses.
pub fn certify_height(g: &CappedGrope) -> Result<HeightCertificate> {
    let h = is_symmetric_height(g).ok_or_else(|| Error::Precondition("grope is not symmetric of any height".into()))?;
    let (tower, roots) = grope_to_tower_with_roots(g)?;
    let report = check_height(&tower, h);
    if !report.passes {
        return Err(reject(format!("tower fails height {h}")));
    }
    let witnesses = report
        .trees
        .into_iter()
        .map(|r| HeightWitness {
            puncture: r.witness.expect("passing tree"),
            split: r.split.expect("passing tree"),
            half_kind: r.half_kind,
        })
        .collect();
    Ok(HeightCertificate {
        height: h,
        grope: g.clone(),
        order: tower_order(&tower),
        stronger_condition: stronger(&tower, &roots, h),
        tower,
        witnesses,
    })
}

fn verify_height(c: &HeightCertificate) -> Result<()> {
    if is_symmetric_height(&c.grope) != Some(c.height) {
        return Err(reject(format!("grope is not symmetric of height {}", c.height)));
    }
    let (tower, roots) = grope_to_tower_with_roots(&c.grope)?;
    if tower_text(&tower) != tower_text(&c.tower) || tower.surfaces != c.tower.surfaces {
        return Err(reject("tower does not match the grope"));
    }
    let expected = OrderValue::Finite(c.height.class() - 1);
    if c.order != expected || tower_order(&tower) != expected {
        return Err(reject(format!("order {} differs from {expected}", c.order)));
    }
    if c.witnesses.len() != tower.trees.len() {
        return Err(reject("one witness per tree required"));
    }
    let report = check_height(&tower, c.height);
    if !report.passes {
        return Err(reject(format!("tower fails height {}", c.height)));
    }
    for (w, p) in c.witnesses.iter().zip(&c.tower.trees) {
        let moved = p.move_puncture(w.puncture)?;
        let (a, b) = moved.decompose();
        let mut rec = [w.split[0].canonical(), w.split[1].canonical()];
        rec.sort();
        if [a, b] != rec {
            return Err(reject(format!("witness split does not match tree {p}")));
        }
        let single = SplitTower { surfaces: tower.surfaces.clone(), trees: vec![moved] };
        let r = check_height(&single, c.height);
        if !r.passes || r.trees[0].witness != Some(w.puncture) {
            return Err(reject(format!("witness puncture {} fails on {p}", w.puncture)));
        }
    }
    if c.stronger_condition != stronger(&tower, &roots, c.height) {
        return Err(reject("stronger-condition flag is wrong"));
    }
    Ok(())
}

/// Replace every bracket by its right-normed expansion.
pub fn to_half_gropes(g: &CappedGrope) -> Result<CappedGrope> {
    g.validate()?;
    let bodies = g
        .bodies
        .iter()
        .map(|(o, f)| {
            let mut out: Vec<Bracket> = f.iter().flat_map(|b| normalize_right_normed(b).brackets).collect();
            out.sort_by_cached_key(Bracket::canonical_key);
            (o.clone(), out)
        })
        .collect();
    Ok(CappedGrope { bodies, surfaces: g.surfaces.clone(), kind: g.kind })
}

pub fn certify_half_grope(g: &CappedGrope) -> Result<HalfGropeCertificate> {
    let half = to_half_gropes(g)?;
    let class = grope_class(&half)?.per_surface;
    Ok(HalfGropeCertificate { grope: g.clone(), half_grope: half, class })
}

fn verify_half_grope(c: &HalfGropeCertificate) -> Result<()> {
    if !is_half_grope(&c.half_grope) {
        return Err(reject("output is not a half-grope"));
    }
    let before = grope_class(&c.grope)?.per_surface;
    let after = grope_class(&c.half_grope)?.per_surface;
    if before != after || after != c.class {
        return Err(reject("per-surface class not preserved"));
    }
    if to_half_gropes(&c.grope)?.canonical_forests() != c.half_grope.canonical_forests() {
        return Err(reject("half-grope forests do not match the input"));
    }
    Ok(())
}

/// For each simple tree, a univalent vertex whose trivalent neighbour sits
/// at spine position `p` with `k <= p <= m+1-k` (the median such position),
/// so that both first-stage branches have degree at least `k`.
pub fn select_k_slice_roots(trees: &[UnrootedTree], k: usize) -> Result<Vec<SliceRoot>> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    trees
        .iter()
        .map(|t| {
            let spine = is_simple(t).ok_or_else(|| Error::Precondition(format!("{t} is not simple")))?;
            if t.degree() < 2 * k {
                return Err(Error::Precondition(format!("{t} has degree {} < 2k = {}", t.degree(), 2 * k)));
            }
            let v = &spine.vertices;
            let m = v.len() - 2;
            let (lo, hi) = (k, m + 1 - k);
            let p = lo + (hi - lo) / 2;
            let leaf = t
                .neighbors(v[p])
                .iter()
                .copied()
                .find(|&w| w != v[p - 1] && w != v[p + 1])
                .expect("trivalent spine vertex");
            Ok(SliceRoot {
                leaf,
                label: t.label(leaf).expect("off-spine neighbour of a simple tree is univalent").clone(),
                position: p,
                spine: m,
                branch_degrees: [p, m + 1 - p],
            })
        })
        .collect()
}

fn slice_tree(t: &UnrootedTree, root: SliceRoot) -> SliceTree {
    let (_, b) = t.reroot_at_leaf(root.leaf).expect("univalent");
    let Bracket::Pair(x, y) = b else { unreachable!("degree >= 2") };
    let (x, y) = if x.degree() == root.branch_degrees[0] { (*x, *y) } else { (*y, *x) };
    SliceTree { tree: t.clone(), root, branches: [x, y] }
}

/// Grope to tower, each tree to simple trees, then a k-slice root per
/// simple tree.
pub fn certify_k_slice(g: &CappedGrope, k: usize) -> Result<KSliceCertificate> {
    let class = grope_class(g)?.overall;
    if k == 0 || class < 2 * k {
        return Err(Error::Precondition(format!("grope class {class} < 2k = {}", 2 * k)));
    }
    let (tower, _) = grope_to_tower_with_roots(g)?;
    let mut entries = Vec::new();
    for p in &tower.trees {
        let simple = normalize_simple(&p.tree).trees;
        let roots = select_k_slice_roots(&simple, k)?;
        let simple = simple.iter().zip(roots).map(|(t, r)| slice_tree(t, r)).collect();
        entries.push(SliceEntry { source: p.clone(), simple });
    }
    Ok(KSliceCertificate { k, grope: g.clone(), class, entries })
}

fn verify_k_slice(c: &KSliceCertificate) -> Result<()> {
    let class = grope_class(&c.grope)?.overall;
    if class != c.class || c.k == 0 || class < 2 * c.k {
        return Err(reject(format!("class {} does not support k = {}", c.class, c.k)));
    }
    let (tower, _) = grope_to_tower_with_roots(&c.grope)?;
    if tower.trees.len() != c.entries.len() {
        return Err(reject("one entry per tree required"));
    }
    for (p, e) in tower.trees.iter().zip(&c.entries) {
        if p.to_string() != e.source.to_string() {
            return Err(reject(format!("source {} does not match the grope", e.source)));
        }
        let expected: Vec<String> = normalize_simple(&p.tree).trees.iter().map(UnrootedTree::canonical_key).collect();
        let got: Vec<String> = e.simple.iter().map(|s| s.tree.canonical_key()).collect();
        if expected != got {
            return Err(reject(format!("simple trees of {} do not match", e.source)));
        }
        for s in &e.simple {
            verify_slice_tree(s, c.k)?;
        }
    }
    Ok(())
}

fn verify_slice_tree(s: &SliceTree, k: usize) -> Result<()> {
    let t = &s.tree;
    let spine = is_simple(t).ok_or_else(|| reject(format!("{t} is not simple")))?;
    let m = spine.vertices.len() - 2;
    let r = &s.root;
    if r.spine != m || r.position < k || r.position + k > m + 1 || r.branch_degrees != [r.position, m + 1 - r.position]
    {
        return Err(reject(format!("bad spine position {} on {t}", r.position)));
    }
    let (label, b) = t.reroot_at_leaf(r.leaf).map_err(|_| reject(format!("vertex {} is not univalent", r.leaf)))?;
    if label != r.label {
        return Err(reject(format!("vertex {} is labelled {label}, not {}", r.leaf, r.label)));
    }
    let Bracket::Pair(x, y) = b else { return Err(reject("root has no trivalent neighbour")) };
    let mut actual = [x.canonical_key(), y.canonical_key()];
    let mut recorded = [s.branches[0].canonical_key(), s.branches[1].canonical_key()];
    actual.sort();
    recorded.sort();
    if actual != recorded {
        return Err(reject(format!("branches do not match the rerooted tree {t}")));
    }
    let degrees = [s.branches[0].degree(), s.branches[1].degree()];
    if degrees != r.branch_degrees || degrees.iter().any(|&d| d < k) {
        return Err(reject(format!("branch degrees {degrees:?} on {t}")));
    }
    // The off-spine neighbour of the chosen leaf sits at the recorded position
    // from one end of the spine.
    let at = t.neighbors(r.leaf)[0];
    let idx = spine.vertices.iter().position(|&v| v == at).ok_or_else(|| reject("leaf is not next to the spine"))?;
    if idx != r.position && idx != m + 1 - r.position {
        return Err(reject(format!("leaf {} sits at spine position {idx}", r.leaf)));
    }
    Ok(())
}
