use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Name of an order-0 surface. Non-empty, over `[A-Za-z0-9_]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if is_label_token(&token) {
            Ok(Label(token))
        } else {
            Err(Error::InvalidLabel(token))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_label_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_label_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(is_label_byte)
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Label::new(s)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::new(s).map_err(serde::de::Error::custom)
    }
}

/// A commutative, non-associative bracketing of labels.
///
/// The derived equality is structural: `(1,2)` and `(2,1)` are different
/// values but have the same [`Bracket::canonical_key`]. The derived order
/// puts leaves before pairs, which makes canonical text of right-normed
/// brackets read as `(1,(2,(3,4)))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bracket {
    Leaf(Label),
    Pair(Box<Bracket>, Box<Bracket>),
}

impl Bracket {
    pub fn leaf(label: Label) -> Self {
        Bracket::Leaf(label)
    }

    /// Leaf from a raw token. Panics on an invalid token; meant for literals.
    pub fn atom(token: &str) -> Self {
        Bracket::Leaf(Label::new(token).expect("valid label literal"))
    }

    pub fn pair(left: Bracket, right: Bracket) -> Self {
        Bracket::Pair(Box::new(left), Box::new(right))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let b = p.bracket()?;
        p.finish()?;
        Ok(b)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Bracket::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<&Label> {
        match self {
            Bracket::Leaf(l) => Some(l),
            Bracket::Pair(..) => None,
        }
    }

    /// Number of pair nodes (trivalent vertices of the rooted tree).
    pub fn pair_count(&self) -> usize {
        match self {
            Bracket::Leaf(_) => 0,
            Bracket::Pair(a, b) => 1 + a.pair_count() + b.pair_count(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.pair_count() + 1
    }

    /// Vassiliev degree of the rooted tree: half its vertex count.
    pub fn degree(&self) -> usize {
        self.pair_count() + 1
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<&Label> {
        let mut out = Vec::with_capacity(self.leaf_count());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            Bracket::Leaf(l) => out.push(l),
            Bracket::Pair(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Sorted leaf labels.
    pub fn leaf_multiset(&self) -> Vec<Label> {
        let mut v: Vec<Label> = self.leaves().into_iter().cloned().collect();
        v.sort();
        v
    }

    /// Same tree with the children of every pair sorted.
    pub fn canonical(&self) -> Bracket {
        match self {
            Bracket::Leaf(_) => self.clone(),
            Bracket::Pair(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                if a <= b {
                    Bracket::pair(a, b)
                } else {
                    Bracket::pair(b, a)
                }
            }
        }
    }

    /// Text key that is equal for two brackets iff they are isomorphic as
    /// unordered rooted labeled trees.
    pub fn canonical_key(&self) -> String {
        self.canonical().to_string()
    }

    pub fn is_isomorphic(&self, other: &Bracket) -> bool {
        self.canonical() == other.canonical()
    }

    /// Every pair node has at least one leaf child.
    pub fn is_right_normed(&self) -> bool {
        match self {
            Bracket::Leaf(_) => true,
            Bracket::Pair(a, b) => (a.is_leaf() || b.is_leaf()) && a.is_right_normed() && b.is_right_normed(),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Bracket::Leaf(_) => Shape::Leaf,
            Bracket::Pair(a, b) => Shape::pair(a.shape(), b.shape()),
        }
    }

    /// Pair nodes in preorder.
    pub fn preorder(&self) -> Vec<&Bracket> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(b) = stack.pop() {
            out.push(b);
            if let Bracket::Pair(l, r) = b {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }
}

/// Rooted product `a * b`: a new root edge sprouted where the roots meet.
pub fn rooted_product(a: &Bracket, b: &Bracket) -> Bracket {
    Bracket::pair(a.clone(), b.clone())
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Leaf(l) => write!(f, "{l}"),
            Bracket::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl FromStr for Bracket {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Bracket::parse(s)
    }
}

impl Serialize for Bracket {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bracket {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Bracket::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A bracket with anonymous leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Leaf,
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn pair(a: Shape, b: Shape) -> Self {
        Shape::Pair(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Pair(a, b) => a.degree() + b.degree(),
        }
    }

    fn canonical_text(&self) -> String {
        match self {
            Shape::Leaf => ".".to_string(),
            Shape::Pair(a, b) => {
                let (mut x, mut y) = (a.canonical_text(), b.canonical_text());
                if shape_text_cmp(&x, &y) == Ordering::Greater {
                    std::mem::swap(&mut x, &mut y);
                }
                format!("({x},{y})")
            }
        }
    }

    /// Key equal for isomorphic shapes.
    pub fn canonical_key(&self) -> String {
        self.canonical_text()
    }
}

fn shape_text_cmp(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Label-blind match of a bracket against a shape.
pub fn is_shape(b: &Bracket, s: &Shape) -> bool {
    b.shape().canonical_key() == s.canonical_key()
}

pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.pos, message: message.into() })
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{}', found '{}'", c as char, x as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    pub(crate) fn label(&mut self) -> Result<Label> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_label_byte(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.src.get(self.pos) {
                Some(&x) => self.err(format!("expected label or '(', found '{}'", x as char)),
                None => self.err("expected label or '(', found end of input"),
            };
        }
        let token = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii label");
        Ok(Label(token.to_string()))
    }

    pub(crate) fn bracket(&mut self) -> Result<Bracket> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let a = self.bracket()?;
            self.expect(b',')?;
            let b = self.bracket()?;
            self.expect(b')')?;
            Ok(Bracket::pair(a, b))
        } else {
            Ok(Bracket::Leaf(self.label()?))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(x) => self.err(format!("unexpected trailing '{}'", x as char)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_atoms_and_pairs() {
        assert_eq!(Bracket::parse("1").unwrap(), Bracket::atom("1"));
        assert_eq!(
            Bracket::parse("(1,(2,3))").unwrap(),
            Bracket::pair(Bracket::atom("1"), Bracket::pair(Bracket::atom("2"), Bracket::atom("3")))
        );
        assert_eq!(Bracket::parse(" ( a_1 ,\n b ) ").unwrap().to_string(), "(a_1,b)");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match Bracket::parse("((1,2)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Bracket::parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(Bracket::parse("(1,2))"), Err(Error::Syntax { offset: 5, .. })));
        assert!(matches!(Bracket::parse("(1;2)"), Err(Error::Syntax { offset: 2, .. })));
        assert!(Label::new("a-b").is_err());
    }

    #[test]
    fn canonical_keys_ignore_child_order() {
        let k = |s: &str| Bracket::parse(s).unwrap().canonical_key();
        assert_eq!(k("(1,2)"), k("(2,1)"));
        assert_eq!(k("(1,(2,3))"), k("((2,3),1)"));
        assert_ne!(k("(1,(2,3))"), k("(2,(1,3))"));
        assert_eq!(k("((3,4),(2,1))"), "((1,2),(3,4))");
        assert_eq!(k("(((4,3),2),1)"), "(1,(2,(3,4)))");
    }

    #[test]
    fn degrees() {
        assert_eq!(Bracket::atom("1").degree(), 1);
        assert_eq!(Bracket::parse("((1,2),(3,4))").unwrap().degree(), 4);
        let ij = rooted_product(&Bracket::atom("i"), &Bracket::atom("j"));
        assert_eq!(ij.to_string(), "(i,j)");
        assert_eq!(ij.degree(), 2);
    }

    #[test]
    fn right_normed() {
        assert!(Bracket::parse("(1,(2,(3,4)))").unwrap().is_right_normed());
        assert!(Bracket::parse("(((4,3),2),1)").unwrap().is_right_normed());
        assert!(!Bracket::parse("((1,2),(3,4))").unwrap().is_right_normed());
        assert!(Bracket::atom("1").is_right_normed());
    }

    #[test]
    fn shapes_forget_labels() {
        let s = Bracket::parse("((a,b),(c,d))").unwrap().shape();
        assert!(is_shape(&Bracket::parse("((1,2),(3,4))").unwrap(), &s));
        assert!(!is_shape(&Bracket::parse("(1,(2,(3,4)))").unwrap(), &s));
        assert_eq!(s.degree(), 4);
        assert_eq!(s.to_string(), "((.,.),(.,.))");
    }
}
