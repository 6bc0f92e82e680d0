//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function has a plain Rust twin returning
//! `Result<String, String>` so it can be tested natively.

use std::fmt::Write;

use grope_tower::rewrite::{ihx_rewrite, ihx_site_at, ihx_sites, normalize_simple, site_branches};
use grope_tower::trees::{is_simple, parse_tree_text};
use grope_tower::{EdgeRef, PuncturedTree};
use wasm_bindgen::prelude::*;

const STEP_X: f64 = 48.0;
const STEP_Y: f64 = 56.0;
const MARGIN: f64 = 28.0;

struct Layout {
    /// Position of every tree vertex.
    pos: Vec<(f64, f64)>,
    /// Midpoint of the puncture edge, drawn as the unpaired point.
    point: (f64, f64),
    width: f64,
    height: f64,
}

/// Hang the tree from the midpoint of its puncture edge: each side is laid
/// out as a rooted tree with leaves spaced evenly and inner vertices
/// centered over their children.
fn layout(p: &PuncturedTree) -> Layout {
    let t = &p.tree;
    let (a, b) = t.endpoints(p.puncture).expect("puncture edge in range");
    let mut pos = vec![(0.0, 0.0); t.vertex_count()];
    let mut next_leaf = 0usize;
    let mut depth_max = 1usize;

    fn place(
        t: &grope_tower::UnrootedTree,
        v: usize,
        from: usize,
        depth: usize,
        pos: &mut [(f64, f64)],
        next_leaf: &mut usize,
        depth_max: &mut usize,
    ) -> f64 {
        *depth_max = (*depth_max).max(depth);
        let kids: Vec<usize> = t.neighbors(v).iter().copied().filter(|&w| w != from).collect();
        let x = if kids.is_empty() {
            let x = *next_leaf as f64;
            *next_leaf += 1;
            x
        } else {
            let xs: Vec<f64> = kids.iter().map(|&w| place(t, w, v, depth + 1, pos, next_leaf, depth_max)).collect();
            xs.iter().sum::<f64>() / xs.len() as f64
        };
        pos[v] = (x, depth as f64);
        x
    }

    let xa = place(t, a, b, 1, &mut pos, &mut next_leaf, &mut depth_max);
    let xb = place(t, b, a, 1, &mut pos, &mut next_leaf, &mut depth_max);
    let scale = |(x, y): (f64, f64)| (MARGIN + x * STEP_X, MARGIN + y * STEP_Y);
    let pos: Vec<(f64, f64)> = pos.into_iter().map(scale).collect();
    Layout {
        pos,
        point: scale(((xa + xb) / 2.0, 0.0)),
        width: 2.0 * MARGIN + (next_leaf.max(1) - 1) as f64 * STEP_X,
        height: 2.0 * MARGIN + depth_max as f64 * STEP_Y + 12.0,
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// SVG drawing of a punctured tree. Inner vertices are filled dots, leaves
/// carry their labels, edges their indices, and the puncture edge is dashed
/// through the unpaired point.
pub fn render_svg_text(expr: &str) -> Result<String, String> {
    let p = parse_tree_text(expr).map_err(|e| e.to_string())?;
    let t = &p.tree;
    let l = layout(&p);
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="13">"#,
        w = l.width,
        h = l.height
    );
    let (a, b) = t.endpoints(p.puncture).map_err(|e| e.to_string())?;
    for e in t.edges() {
        let (u, v) = t.endpoints(e).map_err(|e| e.to_string())?;
        if e == p.puncture {
            for w in [a, b] {
                let (x, y) = l.pos[w];
                let _ = write!(
                    s,
                    r##"<line x1="{:.1}" y1="{:.1}" x2="{x:.1}" y2="{y:.1}" stroke="#333" stroke-dasharray="5,4"/>"##,
                    l.point.0, l.point.1
                );
            }
            let _ = write!(
                s,
                r##"<text x="{:.1}" y="{:.1}" fill="#a33" text-anchor="middle">{e}</text>"##,
                l.point.0,
                l.point.1 - 8.0
            );
            continue;
        }
        let ((x1, y1), (x2, y2)) = (l.pos[u], l.pos[v]);
        let _ = write!(s, r##"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="#333"/>"##);
        let _ = write!(
            s,
            r##"<text x="{:.1}" y="{:.1}" fill="#888" font-size="10">{e}</text>"##,
            (x1 + x2) / 2.0 + 4.0,
            (y1 + y2) / 2.0
        );
    }
    let _ = write!(
        s,
        r##"<circle cx="{:.1}" cy="{:.1}" r="5" fill="none" stroke="#a33" stroke-width="2"/>"##,
        l.point.0, l.point.1
    );
    for v in 0..t.vertex_count() {
        let (x, y) = l.pos[v];
        match t.label(v) {
            Some(lab) => {
                let _ = write!(
                    s,
                    r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
                    y + 16.0,
                    escape(lab.as_str())
                );
            }
            None => {
                let _ = write!(s, r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#333"/>"##);
            }
        }
    }
    s.push_str("</svg>");
    Ok(s)
}

/// The internal edges where IHX applies, one per line as `edge: {I,J | K,L}`.
pub fn ihx_edges_text(expr: &str) -> Result<String, String> {
    let t = parse_tree_text(expr).map_err(|e| e.to_string())?.tree;
    let mut out = String::new();
    for site in ihx_sites(&t) {
        let b = site_branches(&t, &site).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{}: {}", site.inner_edge.0, b.grouping());
    }
    Ok(out)
}

/// The two trees produced by IHX at an internal edge, one per line.
pub fn ihx_text(expr: &str, edge: usize) -> Result<String, String> {
    let t = parse_tree_text(expr).map_err(|e| e.to_string())?.tree;
    let site = ihx_site_at(&t, EdgeRef(edge)).map_err(|e| e.to_string())?;
    let (a, b) = ihx_rewrite(&t, &site).map_err(|e| e.to_string())?;
    Ok(format!("{a}\n{b}\n"))
}

/// Simple trees equal to the input modulo IHX, one per line, with the
/// number of rewrite steps taken.
pub fn normalize_text(expr: &str) -> Result<String, String> {
    let t = parse_tree_text(expr).map_err(|e| e.to_string())?.tree;
    let n = normalize_simple(&t);
    let mut out = String::new();
    for s in &n.trees {
        debug_assert!(is_simple(s).is_some());
        let _ = writeln!(out, "{s}");
    }
    let _ = writeln!(out, "# {} trees after {} steps", n.trees.len(), n.trace.len());
    Ok(out)
}

#[wasm_bindgen]
pub fn render_svg(expr: &str) -> Result<String, JsValue> {
    render_svg_text(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ihx_edges(expr: &str) -> Result<String, JsValue> {
    ihx_edges_text(expr).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn ihx(expr: &str, edge: usize) -> Result<String, JsValue> {
    ihx_text(expr, edge).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn normalize(expr: &str) -> Result<String, JsValue> {
    normalize_text(expr).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_shape() {
        let s = render_svg_text("p((1,2),(3,4))").unwrap();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>"));
        assert_eq!(s.matches("stroke-dasharray").count(), 2);
        assert_eq!(s.matches(r##"r="4" fill="#333""##).count(), 2);
        assert_eq!(s.matches("text-anchor=\"middle\">").count(), 5);
        assert!(render_svg_text("p((1,2)").is_err());
    }

    #[test]
    fn chord_svg() {
        let s = render_svg_text("p(a,b)").unwrap();
        assert!(s.contains(">a</text>") && s.contains(">b</text>"));
    }

    #[test]
    fn h_tree_ihx() {
        let edges = ihx_edges_text("p((1,2),(3,4))").unwrap();
        assert_eq!(edges.lines().count(), 1);
        let e: usize = edges.split(':').next().unwrap().parse().unwrap();
        let out = ihx_text("p((1,2),(3,4))", e).unwrap();
        assert_eq!(out.lines().count(), 2);
        assert!(ihx_text("p((1,2),(3,4))", 0).is_err() || e == 0);
    }

    #[test]
    fn star_normalizes() {
        let out = normalize_text("p(((1,2),(3,4)),(5,6))").unwrap();
        let trees: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert!(trees.len() >= 2);
        for t in trees {
            let t = parse_tree_text(t).unwrap().tree;
            assert!(is_simple(&t).is_some());
            assert_eq!(t.degree(), 5);
        }
    }
}
