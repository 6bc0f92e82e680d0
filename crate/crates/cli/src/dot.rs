use std::fmt::Write;

use grope_tower::PuncturedTree;

/// Graphviz text for a punctured tree. Trivalent vertices are small filled
/// points, leaves show their labels, edges carry their indices and the
/// puncture edge is dashed.
pub fn render_dot(p: &PuncturedTree) -> String {
    let t = &p.tree;
    let mut s = String::new();
    s.push_str("digraph tree {\n");
    s.push_str("  edge [dir=none];\n");
    s.push_str("  node [shape=point, style=filled, width=0.08];\n");
    for v in 0..t.vertex_count() {
        if let Some(l) = t.label(v) {
            let _ = writeln!(s, "  v{v} [shape=plaintext, label=\"{l}\"];");
        } else {
            let _ = writeln!(s, "  v{v};");
        }
    }
    for e in t.edges() {
        let (a, b) = t.endpoints(e).expect("edge in range");
        let style = if e == p.puncture { ", style=dashed" } else { "" };
        let _ = writeln!(s, "  v{a} -> v{b} [label=\"{e}\"{style}];");
    }
    s.push_str("}\n");
    s
}
