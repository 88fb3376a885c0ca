//! Diagrams: core nodes from active circles, legs from monodromy classes,
//! edge counts, Cartan matrix and the dimension 2 − (d, d).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expfactor::{irr_hom_bruteforce, Circle, PointP1};
use crate::formal::ModifiedFormalData;
use crate::jordan::{JordanClass, Marking};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Core,
    /// Position `position` (1-based) on the leg of core node `parent`.
    Leg { parent: usize, position: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    pub dim: u32,
    pub label: String,
    pub point: Option<PointP1>,
    pub circle: Option<Circle>,
}

/// Nodes plus the symmetric edge matrix B; B_ii is the oriented loop count.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagram {
    pub nodes: Vec<Node>,
    pub b: Vec<Vec<i64>>,
}

impl Diagram {
    pub fn dim_vector(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.dim).collect()
    }

    pub fn core_len(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Core)
            .count()
    }
}

/// A_ij − β_iβ_j for distinct circles, A_ii − β_i² + 1 for loops.
pub fn b_infinity(c1: &Circle, c2: &Circle) -> Result<i64> {
    let a = irr_hom_bruteforce(c1, c2)?;
    let (b1, b2) = (c1.ram() as i64, c2.ram() as i64);
    if c1 == c2 {
        Ok(a - b1 * b1 + 1)
    } else {
        Ok(a - b1 * b2)
    }
}

/// Edge count between circles at arbitrary points.
pub fn b_general(c1: &Circle, c2: &Circle) -> Result<i64> {
    let (alpha, beta) = (c1.irregularity() as i64, c1.ram() as i64);
    let (alpha2, beta2) = (c2.irregularity() as i64, c2.ram() as i64);
    match (c1.point(), c2.point()) {
        (PointP1::Infinity, PointP1::Infinity) => b_infinity(c1, c2),
        (PointP1::Infinity, _) => Ok(beta * (alpha2 + beta2)),
        (_, PointP1::Infinity) => Ok(beta2 * (alpha + beta)),
        (a, b) if a != b => Ok(0),
        _ => {
            let binf = b_infinity(c1, c2)?;
            if c1 == c2 {
                Ok(binf - 2 * alpha * beta)
            } else {
                Ok(binf - alpha * beta2 - alpha2 * beta)
            }
        }
    }
}

/// How legs are marked when building a full diagram.
#[derive(Clone, Debug)]
pub enum MarkingStrategy {
    /// `default_marking(special = true)` for every class.
    Default,
    /// One marking per active entry, in order.
    Explicit(Vec<Marking>),
}

/// Core data needed to build a diagram: one node per active entry.
pub struct CoreNode<'a> {
    pub circle: Option<&'a Circle>,
    pub point: Option<PointP1>,
    pub label: String,
    pub dim: u32,
    pub class: &'a JordanClass,
}

/// Assembles core nodes with the given matrix and attaches legs.
pub fn assemble(
    core: &[CoreNode<'_>],
    b_core: Vec<Vec<i64>>,
    strategy: &MarkingStrategy,
    with_legs: bool,
) -> Result<Diagram> {
    let mut nodes: Vec<Node> = core
        .iter()
        .enumerate()
        .map(|(i, c)| Node {
            id: i,
            kind: NodeKind::Core,
            dim: c.dim,
            label: c.label.clone(),
            point: c.point.clone(),
            circle: c.circle.cloned(),
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if with_legs {
        for (i, c) in core.iter().enumerate() {
            let marking = match strategy {
                MarkingStrategy::Default => c.class.default_marking(true),
                MarkingStrategy::Explicit(ms) => ms
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("missing marking".into()))?,
            };
            let leg = c.class.leg_of(&marking)?;
            let mut prev = i;
            for (k, (&d, xi)) in leg.dims.iter().zip(leg.labels.iter()).enumerate() {
                let id = nodes.len();
                nodes.push(Node {
                    id,
                    kind: NodeKind::Leg {
                        parent: i,
                        position: k as u32 + 1,
                    },
                    dim: d,
                    label: format!("{}", xi),
                    point: None,
                    circle: None,
                });
                edges.push((prev, id));
                prev = id;
            }
        }
    }
    let n = nodes.len();
    let mut b = vec![vec![0i64; n]; n];
    for (i, row) in b_core.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            b[i][j] = v;
        }
    }
    for (x, y) in edges {
        b[x][y] = 1;
        b[y][x] = 1;
    }
    let d = Diagram { nodes, b };
    if !check_even_loops(&d) {
        return Err(Error::Undefined("odd loop count".into()));
    }
    Ok(d)
}

fn core_nodes(mfd: &ModifiedFormalData) -> Vec<CoreNode<'_>> {
    mfd.active()
        .into_iter()
        .map(|e| CoreNode {
            circle: Some(&e.circle),
            point: Some(e.circle.point().clone()),
            label: format!("{}", e.circle),
            dim: e.mult,
            class: &e.class,
        })
        .collect()
}

fn core_matrix(mfd: &ModifiedFormalData) -> Result<Vec<Vec<i64>>> {
    let act = mfd.active();
    let n = act.len();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = b_general(&act[i].circle, &act[j].circle)?;
            b[i][j] = v;
            b[j][i] = v;
        }
    }
    Ok(b)
}

/// One node per active entry, edges from [`b_general`].
pub fn core_diagram(mfd: &ModifiedFormalData) -> Result<Diagram> {
    assemble(&core_nodes(mfd), core_matrix(mfd)?, &MarkingStrategy::Default, false)
}

/// Core diagram with a leg glued to every core node.
pub fn full_diagram(mfd: &ModifiedFormalData, strategy: &MarkingStrategy) -> Result<Diagram> {
    assemble(&core_nodes(mfd), core_matrix(mfd)?, strategy, true)
}

/// C = 2·Id − B.
pub fn cartan(d: &Diagram) -> Vec<Vec<i64>> {
    let n = d.nodes.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 2 - d.b[i][j] } else { -d.b[i][j] })
                .collect()
        })
        .collect()
}

/// (d, d) = dᵀ C d.
pub fn quadratic_form(c: &[Vec<i64>], d: &[u32]) -> i64 {
    let mut total = 0i64;
    for (i, row) in c.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            total += d[i] as i64 * v * d[j] as i64;
        }
    }
    total
}

/// 2 − dᵀ C d.
pub fn dimension(d: &Diagram) -> i64 {
    2 - quadratic_form(&cartan(d), &d.dim_vector())
}

pub fn check_even_loops(d: &Diagram) -> bool {
    d.b.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, CycNum};
    use crate::expfactor::{circle_of, ExpFactor};
    use crate::formal::LocalEntry;

    fn circ(p: PointP1, terms: &[(i64, i64, i64)]) -> Circle {
        circle_of(
            &ExpFactor::from_terms(
                p,
                terms
                    .iter()
                    .map(|&(n, d, c)| (rat(n, d), CycNum::from_int(c)))
                    .collect(),
            )
            .unwrap(),
        )
    }

    fn fin(a: i64) -> PointP1 {
        PointP1::Finite(CycNum::from_int(a))
    }

    #[test]
    fn b_infinity_examples() {
        let x = circ(PointP1::Infinity, &[(3, 1, 1)]);
        let y = circ(PointP1::Infinity, &[(3, 1, 2)]);
        assert_eq!(b_infinity(&x, &y).unwrap(), 2);
        let h = circ(PointP1::Infinity, &[(1, 2, 1)]);
        assert_eq!(b_infinity(&h, &h).unwrap(), -2);
        let t = Circle::tame(PointP1::Infinity);
        assert_eq!(b_infinity(&t, &t).unwrap(), 0);
    }

    #[test]
    fn b_general_examples() {
        let h = circ(PointP1::Infinity, &[(1, 2, 1)]);
        let p0 = circ(fin(0), &[(1, 1, 1)]);
        assert_eq!(b_general(&h, &p0).unwrap(), 4);
        assert_eq!(b_general(&p0, &h).unwrap(), 4);
        let p1 = circ(fin(1), &[(1, 1, 1)]);
        assert_eq!(b_general(&p0, &p1).unwrap(), 0);
        let p0b = circ(fin(0), &[(1, 1, 2)]);
        assert_eq!(b_general(&p0, &p0b).unwrap(), -2);
        let r = circ(fin(0), &[(1, 2, 1)]);
        assert_eq!(b_general(&r, &r).unwrap(), -6);
    }

    #[test]
    fn painleve_one_single_loop() {
        let c = circ(PointP1::Infinity, &[(5, 2, 1)]);
        let m = ModifiedFormalData::new(vec![(
            PointP1::Infinity,
            vec![LocalEntry::new(c, 1, JordanClass::identity(1)).unwrap()],
        )])
        .unwrap();
        let d = core_diagram(&m).unwrap();
        assert_eq!(d.b, vec![vec![2]]);
    }

    #[test]
    fn hand_built_odd_loop() {
        let mut d = Diagram::default();
        assert!(check_even_loops(&d));
        d.b = vec![vec![3]];
        assert!(!check_even_loops(&d));
    }
}
