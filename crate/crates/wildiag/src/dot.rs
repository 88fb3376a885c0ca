//! Graphviz output.

use std::fmt::Write;

use wildiag_core::Diagram;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Undirected `graph`; negative counts are dashed and labelled by their
/// absolute value, loops are self-edges carrying B_ii / 2.
pub fn export_dot(d: &Diagram) -> String {
    let mut out = String::from("graph diagram {\n");
    for n in &d.nodes {
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\\n{}\"];",
            n.id,
            escape(&n.label),
            n.dim
        );
    }
    for (i, row) in d.b.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i) {
            let m = if i == j { v / 2 } else { v };
            if m == 0 {
                continue;
            }
            let style = if m < 0 { "dashed" } else { "solid" };
            let _ = writeln!(
                out,
                "  n{} -- n{} [style={}, label=\"{}\"];",
                i,
                j,
                style,
                m.abs()
            );
        }
    }
    out.push_str("}\n");
    out
}
