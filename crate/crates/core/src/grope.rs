//! Capped dyadic gropes as rooted forests: one bracket per grope attached
//! to a 0th-stage surface, with cap leaves naming the surface each cap hits.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::{is_shape, y_tree, Bracket, Height, Label};

/// Starting surface kind. Carries no tree content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartKind {
    Disk,
    Annulus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CappedGrope {
    /// Surface label to the brackets of the gropes it bounds.
    pub bodies: BTreeMap<Label, Vec<Bracket>>,
    /// Every surface: body owners plus external surfaces hit by caps.
    pub surfaces: BTreeSet<Label>,
    pub kind: Option<StartKind>,
}

#[derive(Serialize, Deserialize)]
struct GropeJson {
    bodies: BTreeMap<Label, Vec<Bracket>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surfaces: Option<BTreeSet<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<StartKind>,
}

impl Serialize for CappedGrope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let implied = implied_surfaces(&self.bodies);
        GropeJson {
            bodies: self.bodies.clone(),
            surfaces: (self.surfaces != implied).then(|| self.surfaces.clone()),
            kind: self.kind,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CappedGrope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GropeJson::deserialize(d)?;
        let g = match j.surfaces {
            Some(surfaces) => CappedGrope { bodies: j.bodies, surfaces, kind: j.kind },
            None => CappedGrope::new(j.bodies),
        };
        let g = CappedGrope { kind: j.kind, ..g };
        g.validate().map_err(serde::de::Error::custom)?;
        Ok(g)
    }
}

fn implied_surfaces(bodies: &BTreeMap<Label, Vec<Bracket>>) -> BTreeSet<Label> {
    let mut s: BTreeSet<Label> = bodies.keys().cloned().collect();
    for b in bodies.values().flatten() {
        s.extend(b.leaves().into_iter().cloned());
    }
    s
}

/// Class per surface and overall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GropeClass {
    pub per_surface: BTreeMap<Label, usize>,
    pub overall: usize,
}

impl CappedGrope {
    /// Surfaces default to body owners plus every cap label.
    pub fn new(bodies: BTreeMap<Label, Vec<Bracket>>) -> Self {
        let surfaces = implied_surfaces(&bodies);
        CappedGrope { bodies, surfaces, kind: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bodies.is_empty() {
            return Err(Error::InvalidGrope("no bodies".into()));
        }
        for (owner, forest) in &self.bodies {
            if forest.is_empty() {
                return Err(Error::InvalidGrope(format!("surface {owner} has an empty forest")));
            }
            if !self.surfaces.contains(owner) {
                return Err(Error::InvalidGrope(format!("owner {owner} is not a surface")));
            }
            for b in forest {
                if let Some(l) = b.leaves().into_iter().find(|l| !self.surfaces.contains(*l)) {
                    return Err(Error::InvalidGrope(format!("cap label {l} is not a surface")));
                }
            }
        }
        Ok(())
    }

    /// All brackets with their owners, in owner order.
    pub fn brackets(&self) -> impl Iterator<Item = (&Label, &Bracket)> {
        self.bodies.iter().flat_map(|(o, f)| f.iter().map(move |b| (o, b)))
    }

    /// Forests with brackets canonicalized and sorted, for comparisons.
    pub fn canonical_forests(&self) -> BTreeMap<Label, Vec<String>> {
        self.bodies
            .iter()
            .map(|(o, f)| {
                let mut keys: Vec<String> = f.iter().map(Bracket::canonical_key).collect();
                keys.sort();
                (o.clone(), keys)
            })
            .collect()
    }
}

/// Minimum degree per surface and over all surfaces.
pub fn grope_class(g: &CappedGrope) -> Result<GropeClass> {
    g.validate()?;
    let per_surface: BTreeMap<Label, usize> =
        g.bodies.iter().map(|(o, f)| (o.clone(), f.iter().map(Bracket::degree).min().expect("nonempty"))).collect();
    let overall = *per_surface.values().min().expect("nonempty");
    Ok(GropeClass { per_surface, overall })
}

/// The height `h` for which every tree has exactly the shape `Y^h`.
pub fn is_symmetric_height(g: &CappedGrope) -> Option<Height> {
    let first = g.brackets().next()?.1;
    let h = height_for_degree(first.degree())?;
    let shape = y_tree(h);
    g.brackets().all(|(_, b)| is_shape(b, &shape)).then_some(h)
}

fn height_for_degree(d: usize) -> Option<Height> {
    if d < 2 {
        return None;
    }
    if d.is_power_of_two() {
        Height::new(d.trailing_zeros(), false).ok()
    } else if d.is_multiple_of(3) && (d / 3).is_power_of_two() {
        Height::new((d / 3).trailing_zeros() + 1, true).ok()
    } else {
        None
    }
}

/// Every tree is simple with its root at an end of the spine.
pub fn is_half_grope(g: &CappedGrope) -> bool {
    g.brackets().all(|(_, b)| b.is_right_normed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grope(json: &str) -> CappedGrope {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn classes() {
        assert_eq!(grope_class(&grope(r#"{"bodies":{"1":["2"]}}"#)).unwrap().overall, 1);
        assert_eq!(grope_class(&grope(r#"{"bodies":{"1":["((a,b),(c,d))"]}}"#)).unwrap().overall, 4);
        let c = grope_class(&grope(r#"{"bodies":{"1":["(a,b)","((a,b),(c,d))"],"2":["(1,(1,1))"]}}"#)).unwrap();
        assert_eq!(c.overall, 2);
        assert_eq!(c.per_surface[&Label::new("2").unwrap()], 3);
    }

    #[test]
    fn validation() {
        assert!(serde_json::from_str::<CappedGrope>(r#"{"bodies":{"1":[]}}"#).is_err());
        assert!(serde_json::from_str::<CappedGrope>(r#"{"bodies":{"1":["(2,3)"]},"surfaces":["1","2"]}"#).is_err());
        assert!(serde_json::from_str::<CappedGrope>(r#"{"bodies":{"1":["(2,("#).is_err());
    }

    #[test]
    fn symmetric_heights() {
        let h = |s: &str| is_symmetric_height(&grope(s)).map(|h| h.to_string());
        assert_eq!(h(r#"{"bodies":{"1":["((a,b),(c,d))"],"2":["((1,1),(1,1))"]}}"#).as_deref(), Some("2"));
        assert_eq!(h(r#"{"bodies":{"1":["(a,(b,c))"]}}"#).as_deref(), Some("1.5"));
        assert_eq!(h(r#"{"bodies":{"1":["(a,b)","((a,b),(c,d))"]}}"#), None);
        assert_eq!(h(r#"{"bodies":{"1":["(a,(b,(c,d)))"]}}"#), None);
        assert_eq!(h(r#"{"bodies":{"1":["a"]}}"#), None);
        assert_eq!(h(r#"{"bodies":{"1":["((a,(b,c)),(d,(e,f)))"]}}"#), None);
        assert_eq!(h(r#"{"bodies":{"1":["((a,b),((c,d),(e,f)))"]}}"#).as_deref(), Some("2.5"));
    }

    #[test]
    fn half_gropes() {
        assert!(is_half_grope(&grope(r#"{"bodies":{"1":["(1,(2,(3,4)))","2"]}}"#)));
        assert!(!is_half_grope(&grope(r#"{"bodies":{"1":["((1,2),(3,4))"]}}"#)));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"bodies":{"1":["(2,(3,3))","(2,2)"]},"kind":"disk"}"#;
        let g = grope(text);
        assert_eq!(g.kind, Some(StartKind::Disk));
        assert_eq!(g.surfaces.len(), 3);
        assert_eq!(serde_json::to_string(&g).unwrap(), text);
        let ext = r#"{"bodies":{"1":["2"]},"surfaces":["1","2","9"]}"#;
        assert_eq!(serde_json::to_string(&grope(ext)).unwrap(), ext);
    }
}
