//! Whitney towers as data: the raw ingestion format (disks indexed by
//! brackets plus unpaired points), the split form (one punctured tree per
//! unpaired point), tower order and the height predicate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::trees::Height;
use crate::trees::{unrooted_product, Bracket, EdgeRef, Label, PuncturedTree, UnrootedTree};

/// How a disk is given in the raw format: `["W1","c"]` or `"(W1,c)"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiskSpec {
    Ids([Label; 2]),
    Bracket(Bracket),
}

/// Ingestion format: surfaces, Whitney disks over surfaces and other disks,
/// and the list of unpaired intersection points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTower {
    pub surfaces: BTreeSet<Label>,
    #[serde(default)]
    pub disks: BTreeMap<Label, DiskSpec>,
    #[serde(default)]
    pub points: Vec<[Label; 2]>,
    /// Attestation that disks are framed and surfaces 0-framed. Not checked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framed: Option<bool>,
}

impl RawTower {
    /// Bracket of a surface or disk id with disks substituted recursively.
    pub fn resolve(&self, id: &Label) -> Result<Bracket> {
        let mut visiting = BTreeSet::new();
        self.resolve_inner(&Bracket::Leaf(id.clone()), &mut visiting)
    }

    fn resolve_inner(&self, b: &Bracket, visiting: &mut BTreeSet<Label>) -> Result<Bracket> {
        match b {
            Bracket::Pair(x, y) => {
                Ok(Bracket::pair(self.resolve_inner(x, visiting)?, self.resolve_inner(y, visiting)?))
            }
            Bracket::Leaf(id) => {
                if self.surfaces.contains(id) {
                    if self.disks.contains_key(id) {
                        return Err(Error::InvalidTower(format!("{id} is both a surface and a disk")));
                    }
                    return Ok(b.clone());
                }
                let spec = self.disks.get(id).ok_or_else(|| Error::InvalidTower(format!("unresolved id {id}")))?;
                if !visiting.insert(id.clone()) {
                    return Err(Error::InvalidTower(format!("cyclic disk reference through {id}")));
                }
                let inner = match spec {
                    DiskSpec::Ids([a, c]) => Bracket::pair(Bracket::Leaf(a.clone()), Bracket::Leaf(c.clone())),
                    DiskSpec::Bracket(x) if x.is_leaf() => {
                        return Err(Error::InvalidTower(format!("disk {id} must pair two surfaces")))
                    }
                    DiskSpec::Bracket(x) => x.clone(),
                };
                let out = self.resolve_inner(&inner, visiting)?;
                visiting.remove(id);
                Ok(out)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        for id in self.disks.keys() {
            self.resolve(id)?;
        }
        for [a, b] in &self.points {
            self.resolve(a)?;
            self.resolve(b)?;
        }
        Ok(())
    }
}

/// The tree content of a split Whitney tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTower {
    pub surfaces: BTreeSet<Label>,
    pub trees: Vec<PuncturedTree>,
}

#[derive(Serialize, Deserialize)]
struct SplitTowerJson {
    surfaces: BTreeSet<Label>,
    trees: Vec<TreeEntry>,
}

#[derive(Serialize, Deserialize)]
struct TreeEntry {
    tree: PuncturedTree,
}

impl Serialize for SplitTower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SplitTowerJson {
            surfaces: self.surfaces.clone(),
            trees: self.trees.iter().map(|t| TreeEntry { tree: t.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SplitTower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SplitTowerJson::deserialize(d)?;
        let t = SplitTower { surfaces: j.surfaces, trees: j.trees.into_iter().map(|e| e.tree).collect() };
        t.validate().map_err(serde::de::Error::custom)?;
        Ok(t)
    }
}

impl SplitTower {
    pub fn new(surfaces: BTreeSet<Label>, trees: Vec<PuncturedTree>) -> Result<Self> {
        let t = SplitTower { surfaces, trees };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.trees {
            for l in t.tree.leaf_multiset() {
                if !self.surfaces.contains(&l) {
                    return Err(Error::InvalidTower(format!("leaf label {l} is not a surface")));
                }
            }
        }
        Ok(())
    }

    /// Unpunctured trees, sorted by canonical key.
    pub fn tree_keys(&self) -> Vec<String> {
        let mut v: Vec<String> = self.trees.iter().map(|t| t.tree.canonical_key()).collect();
        v.sort();
        v
    }
}

/// Order of a tower: `finite(n)` or unbounded when nothing is unpaired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderValue {
    Finite(usize),
    Unbounded,
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(n) => write!(f, "{n}"),
            OrderValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for OrderValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OrderValue::Finite(n) => s.serialize_u64(*n as u64),
            OrderValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for OrderValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(OrderValue::Finite(n)),
            Raw::S(s) if s == "unbounded" => Ok(OrderValue::Unbounded),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad order {s:?}"))),
        }
    }
}

/// Order of an intersection between surfaces indexed by `a` and `b`:
/// `n + m + 1` for surfaces of orders `n` and `m`.
pub fn order_of_point(a: &Bracket, b: &Bracket) -> usize {
    a.pair_count() + b.pair_count() + 1
}

/// One punctured tree per unpaired point.
pub fn extract_split(raw: &RawTower) -> Result<SplitTower> {
    raw.validate()?;
    let mut trees = Vec::with_capacity(raw.points.len());
    for [a, b] in &raw.points {
        let (x, y) = (raw.resolve(a)?, raw.resolve(b)?);
        trees.push(unrooted_product(&x, &y));
    }
    SplitTower::new(raw.surfaces.clone(), trees)
}

/// Minimum tree degree minus one, or unbounded for an empty tree multiset.
pub fn tower_order(t: &SplitTower) -> OrderValue {
    t.trees.iter().map(|p| p.degree() - 1).min().map_or(OrderValue::Unbounded, OrderValue::Finite)
}

/// Which pair of top surfaces carries an unpaired point at the frontier of
/// a height check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub orders: [usize; 2],
    pub point_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeHeightReport {
    pub tree: PuncturedTree,
    pub passes: bool,
    /// Puncture position that witnesses the height, when one exists.
    pub witness: Option<EdgeRef>,
    /// Decomposition at the witness.
    pub split: Option<[Bracket; 2]>,
    /// Unpaired points left once disks above the height's order limit are
    /// dropped, at the witness.
    pub frontier: Vec<FrontierPoint>,
    /// For half heights: whether some frontier point lies between two
    /// top-order disks (`balanced`) or only between a top disk and a
    /// lower one (`mixed`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightReport {
    pub height: Height,
    pub passes: bool,
    pub trees: Vec<TreeHeightReport>,
}

/// Highest order of a Whitney disk kept by the height condition, and the
/// lowest order allowed for an unpaired point.
fn height_limits(h: Height) -> (usize, usize) {
    let full = 1usize << h.n();
    let half = full / 2;
    if h.is_half() {
        (full - 1, full + half - 1)
    } else {
        (full - 2, full - 1)
    }
}

/// Walk the tree rooted at the puncture and collect intersecting pairs:
/// the puncture pair and, at every trivalent vertex, its two sub-brackets.
fn intersecting_pairs(a: &Bracket, b: &Bracket, out: &mut Vec<(usize, usize, bool)>) {
    fn walk(x: &Bracket, out: &mut Vec<(usize, usize, bool)>) {
        if let Bracket::Pair(l, r) = x {
            out.push((l.pair_count(), r.pair_count(), true));
            walk(l, out);
            walk(r, out);
        }
    }
    out.push((a.pair_count(), b.pair_count(), false));
    walk(a, out);
    walk(b, out);
}

/// Height condition at a fixed puncture position. Returns the frontier
/// points on success.
fn height_at(a: &Bracket, b: &Bracket, h: Height) -> Option<Vec<FrontierPoint>> {
    let (limit, min_point) = height_limits(h);
    let full = 1usize << h.n();
    let top = full - 1;
    let low = full / 2 - 1;
    let mut pairs = Vec::new();
    intersecting_pairs(a, b, &mut pairs);
    let mut frontier = Vec::new();
    for (x, y, paired) in pairs {
        // Both surfaces must exist in the truncated tower.
        if x > limit || y > limit {
            continue;
        }
        let allowed = x == y || (h.is_half() && ((x, y) == (top, low) || (x, y) == (low, top)));
        if !allowed {
            return None;
        }
        let point_order = x + y + 1;
        let paired_here = paired && point_order <= limit;
        if !paired_here {
            if point_order < min_point {
                return None;
            }
            let mut orders = [x, y];
            orders.sort();
            frontier.push(FrontierPoint { orders, point_order });
        }
    }
    Some(frontier)
}

/// Check the height condition: some puncture position makes every Whitney
/// disk up to the height's order limit meet only surfaces of its own order
/// (for `n.5`, top disks may also meet disks of order `2^(n-1)-1`), with all
/// remaining unpaired points of order at least `2^n - 1`
/// (resp. `2^n + 2^(n-1) - 1`).
pub fn check_height(t: &SplitTower, h: Height) -> HeightReport {
    let (_, min_point) = height_limits(h);
    let top = (1usize << h.n()) - 1;
    let trees: Vec<TreeHeightReport> = t
        .trees
        .iter()
        .map(|p| {
            let mut report = TreeHeightReport {
                tree: p.clone(),
                passes: false,
                witness: None,
                split: None,
                frontier: Vec::new(),
                half_kind: None,
            };
            if p.degree() < min_point {
                return report;
            }
            // Prefer the current puncture, then canonical edge order.
            let order = std::iter::once(p.puncture).chain(p.tree.edges().filter(|&e| e != p.puncture));
            for e in order {
                let (a, b) = p.tree.decompose_at_edge(e).expect("valid edge");
                if let Some(frontier) = height_at(&a, &b, h) {
                    if h.is_half() {
                        let balanced = frontier.iter().any(|f| f.orders == [top, top]);
                        report.half_kind = Some(if balanced { "balanced" } else { "mixed" }.to_string());
                    }
                    report.passes = true;
                    report.witness = Some(e);
                    report.split = Some([a, b]);
                    report.frontier = frontier;
                    break;
                }
            }
            report
        })
        .collect();
    HeightReport { height: h, passes: trees.iter().all(|r| r.passes), trees }
}

/// Tree multiset equality up to isomorphism.
pub fn same_trees(a: &[UnrootedTree], b: &[UnrootedTree]) -> bool {
    let keys = |v: &[UnrootedTree]| {
        let mut k: Vec<String> = v.iter().map(UnrootedTree::canonical_key).collect();
        k.sort();
        k
    };
    keys(a) == keys(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(trees: &[&str]) -> SplitTower {
        let trees: Vec<PuncturedTree> = trees.iter().map(|s| PuncturedTree::parse(s).unwrap()).collect();
        let surfaces = trees.iter().flat_map(|t| t.tree.leaf_multiset()).collect();
        SplitTower::new(surfaces, trees).unwrap()
    }

    fn h(s: &str) -> Height {
        s.parse().unwrap()
    }

    #[test]
    fn point_orders() {
        let b = |s: &str| Bracket::parse(s).unwrap();
        assert_eq!(order_of_point(&b("a"), &b("b")), 1);
        assert_eq!(order_of_point(&b("(a,b)"), &b("(c,d)")), 3);
        assert_eq!(order_of_point(&b("(a,b)"), &b("(c,d)")), unrooted_product(&b("(a,b)"), &b("(c,d)")).degree());
    }

    #[test]
    fn raw_towers() {
        let raw: RawTower =
            serde_json::from_str(r#"{"surfaces":["a","b","c"],"disks":{"W1":["a","b"]},"points":[["W1","c"]]}"#)
                .unwrap();
        let t = extract_split(&raw).unwrap();
        assert_eq!(t.trees.len(), 1);
        assert_eq!(t.trees[0].to_string(), "p(c,(a,b))");
        assert_eq!(t.trees[0].degree(), 2);

        let empty: RawTower = serde_json::from_str(r#"{"surfaces":["a"],"disks":{},"points":[]}"#).unwrap();
        assert_eq!(tower_order(&extract_split(&empty).unwrap()), OrderValue::Unbounded);

        let chord: RawTower = serde_json::from_str(r#"{"surfaces":["a","b"],"points":[["a","b"]]}"#).unwrap();
        assert_eq!(extract_split(&chord).unwrap().trees[0].to_string(), "p(a,b)");

        let nested: RawTower = serde_json::from_str(
            r#"{"surfaces":["a","b","c","d"],"disks":{"W1":["a","b"],"W2":"(W1,c)"},"points":[["W2","d"]]}"#,
        )
        .unwrap();
        assert_eq!(extract_split(&nested).unwrap().trees[0].to_string(), "p(d,(c,(a,b)))");
    }

    #[test]
    fn raw_tower_errors() {
        let bad: RawTower = serde_json::from_str(r#"{"surfaces":["a"],"points":[["a","W9"]]}"#).unwrap();
        assert!(matches!(extract_split(&bad), Err(Error::InvalidTower(m)) if m.contains("unresolved")));
        let cyc: RawTower = serde_json::from_str(
            r#"{"surfaces":["a"],"disks":{"W1":["W2","a"],"W2":["W1","a"]},"points":[["W1","a"]]}"#,
        )
        .unwrap();
        assert!(matches!(extract_split(&cyc), Err(Error::InvalidTower(m)) if m.contains("cyclic")));
    }

    #[test]
    fn orders() {
        assert_eq!(tower_order(&tower(&["p(a,b)"])), OrderValue::Finite(0));
        assert_eq!(tower_order(&tower(&["p((a,b),(c,d))"])), OrderValue::Finite(2));
        assert_eq!(tower_order(&tower(&[])), OrderValue::Unbounded);
        assert!(OrderValue::Finite(7) < OrderValue::Unbounded);
    }

    #[test]
    fn heights() {
        assert!(check_height(&tower(&["p(a,b)"]), h("1")).passes);
        assert!(!check_height(&tower(&["p(a,b)"]), h("2")).passes);
        // Y^1 . Y^1 has height 2.
        assert!(check_height(&tower(&["p((a,b),(c,d))"]), h("2")).passes);
        // Tree of a height-2 grope: Y^2 rooted at a chord.
        let y2 = tower(&["p(r,((a,b),(c,d)))"]);
        assert!(check_height(&y2, h("2")).passes);
        assert!(!check_height(&y2, h("3")).passes);
        // Height 1.5 from Y^(1.5) = Y^0 * Y^1.
        let y15 = tower(&["p(r,(a,(b,c)))"]);
        let rep = check_height(&y15, h("1.5"));
        assert!(rep.passes);
        assert_eq!(rep.trees[0].half_kind.as_deref(), Some("mixed"));
        // The same unrooted tree is Y^1 . Y^1.
        assert!(check_height(&y15, h("2")).passes);
        assert!(!check_height(&y15, h("2.5")).passes);
    }

    #[test]
    fn split_tower_json() {
        let t = tower(&["p((a,b),(c,d))"]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"surfaces":["a","b","c","d"],"trees":[{"tree":"p((a,b),(c,d))"}]}"#);
        let back: SplitTower = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<SplitTower>(r#"{"surfaces":["a"],"trees":[{"tree":"p(a,b)"}]}"#).is_err());
    }
}
