//! Jordan-type conjugacy classes in GL_n, markings and legs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};

/// A conjugacy class given by eigenvalues and Jordan block sizes.
///
/// Entries are kept sorted by the canonical eigenvalue order, blocks in
/// decreasing size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanClass {
    entries: Vec<(CycNum, Vec<u32>)>,
}

impl JordanClass {
    pub fn new(entries: Vec<(CycNum, Vec<u32>)>) -> Result<JordanClass> {
        let mut out: Vec<(CycNum, Vec<u32>)> = Vec::new();
        for (ev, mut blocks) in entries {
            if ev.is_zero() {
                return Err(Error::InvalidInput("eigenvalue 0 is not invertible".into()));
            }
            if blocks.iter().any(|&b| b == 0) {
                return Err(Error::InvalidInput("Jordan blocks must be positive".into()));
            }
            if out.iter().any(|(e, _)| *e == ev) {
                return Err(Error::InvalidInput("repeated eigenvalue".into()));
            }
            if blocks.is_empty() {
                continue;
            }
            blocks.sort_unstable_by(|a, b| b.cmp(a));
            out.push((ev, blocks));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(JordanClass { entries: out })
    }

    pub fn empty() -> JordanClass {
        JordanClass { entries: Vec::new() }
    }

    /// The identity class in GL_n (empty for n = 0).
    pub fn identity(n: u32) -> JordanClass {
        if n == 0 {
            return JordanClass::empty();
        }
        JordanClass {
            entries: vec![(CycNum::one(), vec![1; n as usize])],
        }
    }

    pub fn entries(&self) -> &[(CycNum, Vec<u32>)] {
        &self.entries
    }

    pub fn size(&self) -> u32 {
        self.entries.iter().flat_map(|(_, b)| b.iter()).sum()
    }

    pub fn blocks_of(&self, ev: &CycNum) -> &[u32] {
        self.entries
            .iter()
            .find(|(e, _)| e == ev)
            .map_or(&[][..], |(_, b)| b.as_slice())
    }

    /// rank(A − ξ).
    pub fn class_rank_minus(&self, xi: &CycNum) -> u32 {
        self.entries
            .iter()
            .map(|(e, blocks)| {
                let s: u32 = blocks.iter().sum();
                if e == xi {
                    s - blocks.len() as u32
                } else {
                    s
                }
            })
            .sum()
    }

    /// Orbit dimension n² − Σ_λ Σ_{i,j} min(s_i, s_j).
    pub fn class_dim(&self) -> i64 {
        let n = self.size() as i64;
        let mut cent = 0i64;
        for (_, blocks) in &self.entries {
            for &a in blocks {
                for &b in blocks {
                    cent += a.min(b) as i64;
                }
            }
        }
        n * n - cent
    }

    /// (m, child): m = rank(A − 1); eigenvalue-1 blocks shrink by one.
    pub fn child_class(&self) -> (u32, JordanClass) {
        let m = self.class_rank_minus(&CycNum::one());
        let entries = self
            .entries
            .iter()
            .map(|(e, blocks)| {
                if e.is_one() {
                    let b = blocks.iter().filter(|&&s| s > 1).map(|s| s - 1).collect();
                    (e.clone(), b)
                } else {
                    (e.clone(), blocks.clone())
                }
            })
            .filter(|(_, b): &(CycNum, Vec<u32>)| !b.is_empty())
            .collect();
        (m, JordanClass { entries })
    }

    /// Reconstructs the class in GL_n whose child is `child`.
    pub fn parent_class(child: &JordanClass, n: u32) -> Result<JordanClass> {
        let m = child.size();
        if n < m {
            return Err(Error::IncompatibleRank {
                needed: m as u64,
                available: n as u64,
            });
        }
        let p = n - m;
        let one = CycNum::one();
        let q = child.blocks_of(&one).len() as u32;
        if p < q {
            return Err(Error::IncompatibleRank {
                needed: q as u64,
                available: p as u64,
            });
        }
        let mut entries: Vec<(CycNum, Vec<u32>)> = child
            .entries
            .iter()
            .filter(|(e, _)| !e.is_one())
            .cloned()
            .collect();
        let mut ones: Vec<u32> = child.blocks_of(&one).iter().map(|s| s + 1).collect();
        ones.extend(core::iter::repeat(1).take((p - q) as usize));
        if !ones.is_empty() {
            entries.push((one, ones));
        }
        JordanClass::new(entries)
    }

    /// Multiplies every eigenvalue by `s`.
    pub fn scale_eigenvalues(&self, s: &CycNum) -> JordanClass {
        let entries = self
            .entries
            .iter()
            .map(|(e, b)| (e * s, b.clone()))
            .collect();
        JordanClass::new(entries).expect("scaling preserves distinctness")
    }

    /// Each eigenvalue repeated (largest block) times, in canonical order;
    /// with `special`, eigenvalue 1 comes first.
    pub fn default_marking(&self, special: bool) -> Marking {
        let mut order: Vec<&(CycNum, Vec<u32>)> = self.entries.iter().collect();
        if special {
            order.sort_by_key(|(e, _)| !e.is_one());
        }
        let mut out = Vec::new();
        for (e, blocks) in order {
            for _ in 0..blocks[0] {
                out.push(e.clone());
            }
        }
        Marking(out)
    }

    /// Leg dimensions d_j for j = 1..w−1 with trailing zeros dropped.
    pub fn leg_of(&self, marking: &Marking) -> Result<Leg> {
        for (e, blocks) in &self.entries {
            let c = marking.0.iter().filter(|x| *x == e).count() as u32;
            if c != blocks[0] {
                return Err(Error::InvalidInput("marking does not match the class".into()));
            }
        }
        if marking.0.iter().any(|x| self.blocks_of(x).is_empty()) {
            return Err(Error::InvalidInput("marking uses a foreign eigenvalue".into()));
        }
        let w = marking.0.len();
        let mut dims = Vec::new();
        let mut labels = Vec::new();
        for j in 1..w {
            let seen = &marking.0[..j];
            let d: u32 = self
                .entries
                .iter()
                .map(|(e, blocks)| {
                    let c = seen.iter().filter(|x| *x == e).count() as u32;
                    blocks.iter().map(|&s| s.saturating_sub(c)).sum::<u32>()
                })
                .sum();
            dims.push(d);
            labels.push(marking.0[j - 1].clone());
        }
        while dims.last() == Some(&0) {
            dims.pop();
            labels.pop();
        }
        Ok(Leg { dims, labels })
    }
}

impl fmt::Display for JordanClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (e, blocks)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:[", e)?;
            for (k, b) in blocks.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", b)?;
            }
            f.write_str("]")?;
        }
        f.write_str("}")
    }
}

/// An ordered list of eigenvalues with repetitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking(pub Vec<CycNum>);

impl Marking {
    pub fn scale(&self, s: &CycNum) -> Marking {
        Marking(self.0.iter().map(|e| e * s).collect())
    }
}

/// A chain of nodes hanging off a core node by unit edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leg {
    pub dims: Vec<u32>,
    pub labels: Vec<CycNum>,
}

/// (d, d) for the chain (n, d_1, d_2, …) with unit edges.
pub fn chain_form(n: u32, leg: &Leg) -> i64 {
    let mut v: Vec<i64> = vec![n as i64];
    v.extend(leg.dims.iter().map(|&d| d as i64));
    let mut total = 0i64;
    for (i, &x) in v.iter().enumerate() {
        total += 2 * x * x;
        if i + 1 < v.len() {
            total -= 2 * x * v[i + 1];
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    fn class(e: &[(i64, &[u32])]) -> JordanClass {
        JordanClass::new(e.iter().map(|(x, b)| (ev(*x), b.to_vec())).collect()).unwrap()
    }

    #[test]
    fn rank_minus_examples() {
        assert_eq!(class(&[(1, &[2, 1]), (5, &[1])]).class_rank_minus(&ev(1)), 2);
        assert_eq!(class(&[(2, &[1]), (3, &[1])]).class_rank_minus(&ev(2)), 1);
        assert_eq!(JordanClass::identity(2).class_rank_minus(&ev(1)), 0);
    }

    #[test]
    fn class_dim_examples() {
        assert_eq!(class(&[(2, &[1]), (3, &[1])]).class_dim(), 2);
        assert_eq!(JordanClass::identity(4).class_dim(), 0);
        assert_eq!(class(&[(7, &[2])]).class_dim(), 2);
    }

    #[test]
    fn child_and_parent() {
        let c = class(&[(1, &[2, 1]), (5, &[1])]);
        let (m, ch) = c.child_class();
        assert_eq!(m, 2);
        assert_eq!(ch, class(&[(1, &[1]), (5, &[1])]));
        assert_eq!(JordanClass::parent_class(&ch, 4).unwrap(), c);
        let (m, ch) = JordanClass::identity(3).child_class();
        assert_eq!((m, ch.size()), (0, 0));
        assert_eq!(JordanClass::parent_class(&ch, 3).unwrap(), JordanClass::identity(3));
        let a = class(&[(5, &[1])]);
        assert_eq!(a.child_class(), (1, a.clone()));
        assert_eq!(JordanClass::parent_class(&a, 1).unwrap(), a);
        assert!(JordanClass::parent_class(&class(&[(1, &[1, 1])]), 3).is_err());
    }

    #[test]
    fn legs_and_markings() {
        let c = class(&[(2, &[1]), (3, &[1])]);
        let leg = c.leg_of(&c.default_marking(false)).unwrap();
        assert_eq!(leg.dims, vec![1]);
        let id = JordanClass::identity(2);
        assert_eq!(id.default_marking(true), Marking(vec![ev(1)]));
        assert!(id.leg_of(&id.default_marking(true)).unwrap().dims.is_empty());
        let j = class(&[(1, &[2])]);
        assert_eq!(j.leg_of(&j.default_marking(true)).unwrap().dims, vec![1]);
        let s = class(&[(1, &[1]), (5, &[2])]);
        assert_eq!(s.default_marking(true), Marking(vec![ev(1), ev(5), ev(5)]));
    }

    #[test]
    fn chain_form_matches_class_dim() {
        let c = class(&[(1, &[2, 1]), (5, &[1]), (7, &[3])]);
        let leg = c.leg_of(&c.default_marking(true)).unwrap();
        let n = c.size() as i64;
        assert_eq!(c.class_dim(), 2 * n * n - chain_form(c.size(), &leg));
    }
}
