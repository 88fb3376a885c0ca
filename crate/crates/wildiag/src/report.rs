//! Plain-text reports for the command line.

use std::fmt::Write;

use wildiag_core::{cartan, describe, dimension, Diagram, NodeKind, Reading, TransformedData};

fn matrix(out: &mut String, m: &[Vec<i64>]) {
    let w = m
        .iter()
        .flatten()
        .map(|v| v.to_string().len())
        .max()
        .unwrap_or(1);
    for row in m {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>w$}", v, w = w)).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn diagram_text(d: &Diagram) -> String {
    let mut out = String::from("nodes:\n");
    for n in &d.nodes {
        match n.kind {
            NodeKind::Core => {
                let _ = writeln!(out, "  {:>3} core dim {} {}", n.id, n.dim, n.label);
            }
            NodeKind::Leg { parent, position } => {
                let _ = writeln!(
                    out,
                    "  {:>3} leg  dim {} on {} at {} ({})",
                    n.id, n.dim, parent, position, n.label
                );
            }
        }
    }
    out.push_str("B:\n");
    matrix(&mut out, &d.b);
    out.push_str("cartan:\n");
    matrix(&mut out, &cartan(d));
    let _ = writeln!(out, "dim vector: ({})", join(&d.dim_vector()));
    let _ = writeln!(out, "dimension: {}", dimension(d));
    out
}

pub fn transform_text(td: &TransformedData) -> String {
    let mut out = String::new();
    for e in &td.entries {
        let _ = writeln!(out, "  [{}] {}", e.source, describe(e));
    }
    let _ = writeln!(out, "rank: {}", td.rank());
    let _ = writeln!(out, "compatible: {}", td.compatible());
    out
}

pub fn readings_text(rs: &[Reading]) -> String {
    let mut out = String::new();
    for (k, r) in rs.iter().enumerate() {
        let kind = if r.generic { "generic" } else { "finite group" };
        let _ = writeln!(out, "reading {} ({}), witness {}", k, kind, r.witness);
        for n in &r.nodes {
            let _ = writeln!(
                out,
                "  node {} at {} ram {} slope {} irr {} mult {}",
                n.id, n.point, n.ram, n.slope, n.irr, n.mult
            );
        }
        let _ = writeln!(out, "  rank {}", r.rank);
    }
    out
}
