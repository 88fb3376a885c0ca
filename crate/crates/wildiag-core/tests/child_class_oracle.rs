//! Child classes against explicit matrices: with A in Jordan form and
//! A − 1 = v·u (u surjective), the child is the Jordan type of 1 + u·v.

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wildiag_core::{CycNum, JordanClass};

type Q = BigRational;
type Mat = Vec<Vec<Q>>;

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn jordan_matrix(blocks: &[(i64, u32)]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.1 as usize).sum();
    let mut a = vec![vec![Q::zero(); n]; n];
    let mut at = 0;
    for &(ev, s) in blocks {
        for k in 0..s as usize {
            a[at + k][at + k] = q(ev);
            if k + 1 < s as usize {
                a[at + k][at + k + 1] = Q::one();
            }
        }
        at += s as usize;
    }
    a
}

/// Reduced row echelon form and pivot columns.
fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, |r| r.len()));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Q::zero(), |s, t| s + a[i][t].clone() * b[t][j].clone()))
                .collect()
        })
        .collect()
}

fn shift(a: &Mat, l: &Q) -> Mat {
    let mut b = a.clone();
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = row[i].clone() - l.clone();
    }
    b
}

fn rank(a: &Mat) -> usize {
    if a.is_empty() {
        return 0;
    }
    rref(a).1.len()
}

/// Block sizes of eigenvalue `l`, decreasing.
fn blocks_at(a: &Mat, l: &Q) -> Vec<u32> {
    let n = a.len();
    let m = shift(a, l);
    let mut ranks = vec![n];
    let mut p = m.clone();
    loop {
        let r = rank(&p);
        ranks.push(r);
        if r == *ranks.get(ranks.len() - 2).unwrap() || r == 0 {
            break;
        }
        p = mul(&p, &m);
    }
    // at_least[k] = number of blocks of size ≥ k+1
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut out = Vec::new();
    for k in 0..at_least.len() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..at_least[k] - next {
            out.push(k as u32 + 1);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn oracle(blocks: &[(i64, u32)]) -> (u32, Vec<(i64, Vec<u32>)>) {
    let a = jordan_matrix(blocks);
    let m = shift(&a, &Q::one());
    let (u, pivots) = rref(&m);
    if pivots.is_empty() {
        return (0, Vec::new());
    }
    let v: Mat = m
        .iter()
        .map(|row| pivots.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let b = shift(&mul(&u, &v), &-Q::one());
    let mut evs: Vec<i64> = blocks.iter().map(|x| x.0).collect();
    evs.sort_unstable();
    evs.dedup();
    let child = evs
        .into_iter()
        .map(|e| (e, blocks_at(&b, &q(e))))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    (pivots.len() as u32, child)
}

fn class(blocks: &[(i64, u32)]) -> JordanClass {
    let mut evs: Vec<(CycNum, Vec<u32>)> = Vec::new();
    for &(e, s) in blocks {
        let e = CycNum::from_int(e);
        match evs.iter_mut().find(|x| x.0 == e) {
            Some(slot) => slot.1.push(s),
            None => evs.push((e, vec![s])),
        }
    }
    JordanClass::new(evs).unwrap()
}

fn check(blocks: &[(i64, u32)]) {
    let (m, child) = class(blocks).child_class();
    let (om, ochild) = oracle(blocks);
    assert_eq!(m, om, "{:?}", blocks);
    let flat: Vec<(i64, u32)> = ochild
        .iter()
        .flat_map(|(e, s)| s.iter().map(move |&b| (*e, b)))
        .collect();
    assert_eq!(child, class(&flat), "{:?}", blocks);
}

#[test]
fn worked_example() {
    let (m, child) = oracle(&[(1, 2), (1, 1), (3, 1)]);
    assert_eq!(m, 2);
    assert_eq!(child, vec![(1, vec![1]), (3, vec![1])]);
    check(&[(1, 2), (1, 1), (3, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn child_class_matches_matrices(blocks in prop::collection::vec((prop::sample::select(vec![1i64, -1, 2, 3]), 1u32..=3), 1..=4)) {
        check(&blocks);
    }
}
