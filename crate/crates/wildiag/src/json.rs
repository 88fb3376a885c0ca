//! JSON forms of diagrams, readings and Fourier summaries.

use serde::{Deserialize, Serialize};
use wildiag_core::{
    cartan, dimension, Diagram, Node, NodeKind, Reading, SL2Matrix, TransformedData,
};

use crate::dsl::{parse_circle, parse_point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<u32>,
    pub dim: u32,
    pub label: String,
    pub point: Option<String>,
    pub circle: Option<String>,
}

/// `a ≤ b`; loops have `a = b` and carry B_aa / 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub a: usize,
    pub b: usize,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
    pub cartan: Vec<Vec<i64>>,
    pub dim_vector: Vec<u32>,
    pub mb_dimension: i64,
}

impl DiagramJson {
    pub fn from_diagram(d: &Diagram) -> DiagramJson {
        let nodes = d
            .nodes
            .iter()
            .map(|n| {
                let (kind, parent, position) = match n.kind {
                    NodeKind::Core => ("core", None, None),
                    NodeKind::Leg { parent, position } => ("leg", Some(parent), Some(position)),
                };
                NodeJson {
                    id: n.id,
                    kind: kind.into(),
                    parent,
                    position,
                    dim: n.dim,
                    label: n.label.clone(),
                    point: n.point.as_ref().map(|p| p.to_string()),
                    circle: n.circle.as_ref().map(|c| c.to_string()),
                }
            })
            .collect();
        let mut edges = Vec::new();
        for (i, row) in d.b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().skip(i) {
                if v == 0 {
                    continue;
                }
                let mult = if i == j { v / 2 } else { v };
                edges.push(EdgeJson { a: i, b: j, mult });
            }
        }
        DiagramJson {
            nodes,
            edges,
            cartan: cartan(d),
            dim_vector: d.dim_vector(),
            mb_dimension: dimension(d),
        }
    }

    /// Rebuilds the diagram; `None` when a point or circle does not parse
    /// or an edge is out of range.
    pub fn to_diagram(&self) -> Option<Diagram> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let kind = match n.kind.as_str() {
                "core" => NodeKind::Core,
                "leg" => NodeKind::Leg {
                    parent: n.parent?,
                    position: n.position?,
                },
                _ => return None,
            };
            let point = match &n.point {
                Some(s) => Some(parse_point(s).ok()?),
                None => None,
            };
            let circle = match &n.circle {
                Some(s) => Some(parse_circle(s)?),
                None => None,
            };
            nodes.push(Node {
                id: n.id,
                kind,
                dim: n.dim,
                label: n.label.clone(),
                point,
                circle,
            });
        }
        let k = nodes.len();
        let mut b = vec![vec![0i64; k]; k];
        for e in &self.edges {
            if e.a >= k || e.b >= k {
                return None;
            }
            if e.a == e.b {
                b[e.a][e.a] = 2 * e.mult;
            } else {
                b[e.a][e.b] = e.mult;
                b[e.b][e.a] = e.mult;
            }
        }
        Some(Diagram { nodes, b })
    }
}

pub fn export_json(d: &Diagram) -> String {
    serde_json::to_string_pretty(&DiagramJson::from_diagram(d)).expect("serializable") + "\n"
}

pub fn parse_json(text: &str) -> Option<Diagram> {
    serde_json::from_str::<DiagramJson>(text).ok()?.to_diagram()
}

fn matrix_strings(m: &SL2Matrix) -> [String; 4] {
    [m.a.to_string(), m.b.to_string(), m.c.to_string(), m.d.to_string()]
}

#[derive(Serialize)]
struct ReadingNodeJson {
    id: usize,
    point: String,
    ram: u32,
    slope: String,
    irr: u32,
    mult: u32,
}

#[derive(Serialize)]
struct ReadingJson {
    witness: [String; 4],
    generic: bool,
    nodes: Vec<ReadingNodeJson>,
    rank: u64,
}

#[derive(Serialize)]
struct ReadingsJson {
    readings: Vec<ReadingJson>,
}

pub fn readings_json(rs: &[Reading]) -> String {
    let readings = rs
        .iter()
        .map(|r| ReadingJson {
            witness: matrix_strings(&r.witness),
            generic: r.generic,
            nodes: r
                .nodes
                .iter()
                .map(|n| ReadingNodeJson {
                    id: n.id,
                    point: n.point.to_string(),
                    ram: n.ram,
                    slope: n.slope.to_string(),
                    irr: n.irr,
                    mult: n.mult,
                })
                .collect(),
            rank: r.rank,
        })
        .collect();
    serde_json::to_string_pretty(&ReadingsJson { readings }).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct EntryJson {
    source: usize,
    point: String,
    ram: u32,
    irr: u32,
    slope: String,
    mult: u32,
    circle: String,
    exact: bool,
    class: String,
}

#[derive(Serialize)]
struct TransformJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<[String; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factorization: Option<Vec<String>>,
    rank: u64,
    compatible: bool,
    entries: Vec<EntryJson>,
}

/// Summary of transformed data; `matrix` and `factorization` are optional.
pub fn transform_json(td: &TransformedData, m: Option<(&SL2Matrix, Vec<String>)>) -> String {
    let entries = td
        .entries
        .iter()
        .map(|e| EntryJson {
            source: e.source,
            point: e.skeleton.point.to_string(),
            ram: e.skeleton.ram,
            irr: e.skeleton.irregularity,
            slope: e.skeleton.slope().to_string(),
            mult: e.mult,
            circle: e.skeleton.to_string(),
            exact: e.skeleton.exact.is_some(),
            class: e.class.to_string(),
        })
        .collect();
    let (matrix, factorization) = match m {
        Some((m, f)) => (Some(matrix_strings(m)), Some(f)),
        None => (None, None),
    };
    let j = TransformJson {
        matrix,
        factorization,
        rank: td.rank(),
        compatible: td.compatible(),
        entries,
    };
    serde_json::to_string_pretty(&j).expect("serializable") + "\n"
}
