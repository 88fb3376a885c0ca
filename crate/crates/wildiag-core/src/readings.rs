//! Fundamental representations: the presentations of one diagram obtained
//! by sending one group of circles at ∞ to finite distance.

use alloc::format;
use alloc::vec::Vec;

use crate::cyclo::{rat, BigRat, CycNum};
use crate::error::{Error, Result};
use crate::expfactor::PointP1;
use crate::formal::ModifiedFormalData;
use crate::sl2::{apply_sl2, normalize_to_infinity, SL2Matrix, TransformedData};

/// Circles with the same λ (q = λz² + μz + lower, slope(lower) < 1),
/// split by μ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaGroup {
    pub lambda: CycNum,
    pub by_mu: Vec<(CycNum, Vec<usize>)>,
}

/// Node ids (positions among the active entries) sorted into N_∞ and the
/// groups N_λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodePartition {
    pub infinity: Vec<usize>,
    pub groups: Vec<LambdaGroup>,
}

pub fn partition_transformed(td: &TransformedData) -> Result<NodePartition> {
    let mut infinity = Vec::new();
    let mut groups: Vec<LambdaGroup> = Vec::new();
    for (id, e) in td.active().into_iter().enumerate() {
        if !e.skeleton.point.is_infinity() {
            return Err(Error::InvalidInput(format!(
                "node {} is at the finite point {}",
                id, e.skeleton.point
            )));
        }
        let (lam, mu) = match &e.skeleton.quad_lin {
            Some(x) => x.clone(),
            None => {
                infinity.push(id);
                continue;
            }
        };
        let g = match groups.iter_mut().position(|g| g.lambda == lam) {
            Some(k) => &mut groups[k],
            None => {
                groups.push(LambdaGroup {
                    lambda: lam,
                    by_mu: Vec::new(),
                });
                groups.last_mut().expect("just pushed")
            }
        };
        match g.by_mu.iter_mut().find(|(m, _)| *m == mu) {
            Some(slot) => slot.1.push(id),
            None => g.by_mu.push((mu, alloc::vec![id])),
        }
    }
    groups.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    for g in &mut groups {
        g.by_mu.sort_by(|a, b| a.0.cmp(&b.0));
    }
    Ok(NodePartition { infinity, groups })
}

/// Partition of data that lives at ∞ only.
pub fn partition_nodes(mfd: &ModifiedFormalData) -> Result<NodePartition> {
    partition_transformed(&TransformedData::from_modified(mfd))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadingNode {
    pub id: usize,
    pub point: PointP1,
    pub ram: u32,
    pub slope: BigRat,
    pub irr: u32,
    pub mult: u32,
}

#[derive(Clone, Debug)]
pub struct Reading {
    /// Matrix taking the input data to this reading.
    pub witness: SL2Matrix,
    pub generic: bool,
    pub nodes: Vec<ReadingNode>,
    pub rank: u64,
    pub data: TransformedData,
}

fn reading(witness: SL2Matrix, generic: bool, data: TransformedData) -> Reading {
    let nodes = data
        .active()
        .into_iter()
        .enumerate()
        .map(|(id, e)| ReadingNode {
            id,
            point: e.skeleton.point.clone(),
            ram: e.skeleton.ram,
            slope: rat(e.skeleton.irregularity as i64, e.skeleton.ram as i64),
            irr: e.skeleton.irregularity,
            mult: e.mult,
        })
        .collect();
    Reading {
        witness,
        generic,
        nodes,
        rank: data.rank(),
        data,
    }
}

/// A_i = [[1, −λ' − 1], [1, −λ']] with λ' = −2λ: sends the group of slope-2
/// coefficient λ to finite distance and keeps the others at ∞.
pub fn canonical_witness(lambda: &CycNum) -> Result<SL2Matrix> {
    let lp = lambda.scale(&rat(-2, 1));
    SL2Matrix::new(
        CycNum::one(),
        (&-&lp) - &CycNum::one(),
        CycNum::one(),
        -&lp,
    )
}

/// The generic reading (everything at ∞) followed by one reading per
/// λ-group of the normalized data.
pub fn enumerate_readings(mfd: &ModifiedFormalData) -> Result<Vec<Reading>> {
    let (norm, td) = normalize_to_infinity(mfd)?;
    let part = partition_transformed(&td)?;
    let mut out = alloc::vec![reading(norm.clone(), true, td)];
    for g in &part.groups {
        let w = canonical_witness(&g.lambda)?.mul(&norm)?;
        let data = apply_sl2(mfd, &w)?;
        out.push(reading(w, false, data));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{dimension, full_diagram, MarkingStrategy};
    use crate::expfactor::{circle_of, ExpFactor};
    use crate::formal::LocalEntry;
    use crate::jordan::JordanClass;

    fn inf(terms: &[(i64, i64, i64)]) -> ExpFactor {
        ExpFactor::from_terms(
            PointP1::Infinity,
            terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), CycNum::from_int(c)))
                .collect(),
        )
        .unwrap()
    }

    fn at_inf(qs: &[ExpFactor]) -> ModifiedFormalData {
        let e = |q: &ExpFactor| LocalEntry::new(circle_of(q), 1, JordanClass::identity(1)).unwrap();
        ModifiedFormalData::new(alloc::vec![(PointP1::Infinity, qs.iter().map(e).collect())])
            .unwrap()
    }

    #[test]
    fn partition_example() {
        let m = at_inf(&[
            inf(&[(2, 1, 1)]),
            inf(&[(2, 1, 1), (1, 1, 1)]),
            inf(&[(2, 1, 2)]),
            inf(&[(3, 1, 1)]),
        ]);
        let p = partition_nodes(&m).unwrap();
        assert_eq!(p.infinity, alloc::vec![3]);
        assert_eq!(p.groups.len(), 2);
        assert_eq!(p.groups[0].lambda, CycNum::one());
        assert_eq!(
            p.groups[0].by_mu,
            alloc::vec![(CycNum::zero(), alloc::vec![0]), (CycNum::one(), alloc::vec![1])]
        );
        assert_eq!(p.groups[1].by_mu.len(), 1);
    }

    #[test]
    fn single_type_three_is_all_infinity() {
        let p = partition_nodes(&at_inf(&[inf(&[(5, 2, 1)])])).unwrap();
        assert_eq!(p.infinity, alloc::vec![0]);
        assert!(p.groups.is_empty());
    }

    #[test]
    fn painleve_three_readings() {
        let e = |q: ExpFactor| LocalEntry::new(circle_of(&q), 1, JordanClass::identity(1)).unwrap();
        let zero = PointP1::Finite(CycNum::zero());
        let pole = ExpFactor::from_terms(zero.clone(), alloc::vec![(rat(1, 1), CycNum::from_int(3))])
            .unwrap();
        let m = ModifiedFormalData::new(alloc::vec![
            (PointP1::Infinity, alloc::vec![e(inf(&[(1, 1, 1)])), e(inf(&[(1, 1, 2)]))]),
            (zero, alloc::vec![e(pole)]),
        ])
        .unwrap();
        let d0 = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        let rs = enumerate_readings(&m).unwrap();
        assert_eq!(rs.len(), 3);
        for r in &rs {
            let d = r.data.diagram(true).unwrap();
            assert_eq!(d.b, d0.b);
            assert_eq!(dimension(&d), 2);
        }
        assert_eq!(rs[0].rank, 4);
        assert!(rs[0].nodes.iter().all(|n| n.point.is_infinity()));
        for r in &rs[1..] {
            let finite = r.nodes.iter().filter(|n| !n.point.is_infinity()).count();
            assert!(finite == 1 || finite == 2);
        }
    }
}
