use serde::{Deserialize, Serialize};

use crate::trees::Bracket;

/// A Jacobi step `((X1,X2),Y) => (X1,(X2,Y)), (X2,(X1,Y))` applied at the
/// pair node reached by `path` (`L`/`R` from the top).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedStep {
    pub item: usize,
    pub bracket: Bracket,
    pub path: String,
    pub outputs: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedNormalization {
    /// Right-normed brackets in canonical form, sorted; duplicates kept.
    pub brackets: Vec<Bracket>,
    pub trace: Vec<RootedStep>,
}

/// Sum over pair nodes of `leaves(left child) - 1`. Zero exactly when the
/// stored orientation is right-normed.
pub fn jacobi_measure(b: &Bracket) -> usize {
    match b {
        Bracket::Leaf(_) => 0,
        Bracket::Pair(x, y) => x.leaf_count() - 1 + jacobi_measure(x) + jacobi_measure(y),
    }
}

/// Swap children so that a leaf child sits on the left. Never raises the
/// measure.
fn orient(b: Bracket) -> Bracket {
    match b {
        Bracket::Leaf(_) => b,
        Bracket::Pair(x, y) => {
            let (x, y) = (orient(*x), orient(*y));
            if !x.is_leaf() && y.is_leaf() {
                Bracket::pair(y, x)
            } else {
                Bracket::pair(x, y)
            }
        }
    }
}

fn first_redex(b: &Bracket, path: &mut String) -> bool {
    match b {
        Bracket::Leaf(_) => false,
        Bracket::Pair(x, y) => {
            if !x.is_leaf() {
                return true;
            }
            path.push('R');
            if first_redex(y, path) {
                return true;
            }
            path.pop();
            false
        }
    }
}

fn rewrite_at(b: &Bracket, path: &[u8]) -> (Bracket, Bracket) {
    match (b, path.split_first()) {
        (Bracket::Pair(x, y), None) => match &**x {
            Bracket::Pair(x1, x2) => {
                let p = |a: &Bracket, c: &Bracket| Bracket::pair(a.clone(), c.clone());
                (p(x1, &p(x2, y)), p(x2, &p(x1, y)))
            }
            Bracket::Leaf(_) => panic!("no redex at path"),
        },
        (Bracket::Pair(x, y), Some((&c, rest))) => {
            if c == b'L' {
                let (a, d) = rewrite_at(x, rest);
                (Bracket::pair(a, (**y).clone()), Bracket::pair(d, (**y).clone()))
            } else {
                let (a, d) = rewrite_at(y, rest);
                (Bracket::pair((**x).clone(), a), Bracket::pair((**x).clone(), d))
            }
        }
        (Bracket::Leaf(_), _) => panic!("path runs past a leaf"),
    }
}

/// Apply one Jacobi step at `path`. The node there must have a pair as its
/// left child.
pub fn jacobi_step(b: &Bracket, path: &str) -> (Bracket, Bracket) {
    rewrite_at(b, path.as_bytes())
}

/// Rewrite a bracket into right-normed brackets (every pair has a leaf
/// child), keeping degree and leaf labels. Each Jacobi step is an IHX
/// rewrite of the unrooted tree at the edge above the rewritten left child.
pub fn normalize_right_normed(b: &Bracket) -> RootedNormalization {
    let mut trace = Vec::new();
    let mut done = Vec::new();
    let mut stack = vec![(0usize, orient(b.canonical()))];
    let mut next = 1;
    while let Some((item, cur)) = stack.pop() {
        let mut path = String::new();
        if !first_redex(&cur, &mut path) {
            done.push(cur.canonical());
            continue;
        }
        let (x, y) = rewrite_at(&cur, path.as_bytes());
        let (x, y) = (orient(x), orient(y));
        debug_assert!(jacobi_measure(&x) < jacobi_measure(&cur));
        debug_assert!(jacobi_measure(&y) < jacobi_measure(&cur));
        trace.push(RootedStep { item, bracket: cur, path, outputs: [next, next + 1] });
        stack.push((next + 1, y));
        stack.push((next, x));
        next += 2;
    }
    done.sort_by_cached_key(|x| x.canonical_key());
    RootedNormalization { brackets: done, trace }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(s: &str) -> Bracket {
        Bracket::parse(s).unwrap()
    }

    #[test]
    fn already_right_normed() {
        let n = normalize_right_normed(&br("(1,(2,3))"));
        assert_eq!(n.brackets, vec![br("(1,(2,3))")]);
        assert!(n.trace.is_empty());
    }

    #[test]
    fn one_jacobi_step() {
        let n = normalize_right_normed(&br("((1,2),(3,4))"));
        let got: Vec<String> = n.brackets.iter().map(|b| b.to_string()).collect();
        assert_eq!(got, ["(1,(2,(3,4)))", "(2,(1,(3,4)))"]);
        assert_eq!(n.trace.len(), 1);
    }

    #[test]
    fn measure() {
        assert_eq!(jacobi_measure(&br("(1,(2,3))")), 0);
        assert_eq!(jacobi_measure(&br("((1,2),(3,4))")), 1);
        assert_eq!(jacobi_measure(&br("(((1,2),3),4)")), 2 + 1);
        assert_eq!(jacobi_step(&br("((a,b),c)"), ""), (br("(a,(b,c))"), br("(b,(a,c))")));
    }

    #[test]
    fn nested_outputs_are_right_normed() {
        let b = br("(((1,2),(3,4)),((5,6),7))");
        let n = normalize_right_normed(&b);
        assert!(n.brackets.len() > 2);
        for x in &n.brackets {
            assert!(x.is_right_normed());
            assert_eq!(x.degree(), b.degree());
            assert_eq!(x.leaf_multiset(), b.leaf_multiset());
        }
    }
}
