//! Global formal data and its modified version.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expfactor::{Circle, PointP1};
use crate::jordan::JordanClass;

/// One active circle at a point, with multiplicity and monodromy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalEntry {
    pub circle: Circle,
    pub mult: u32,
    pub class: JordanClass,
}

impl LocalEntry {
    pub fn new(circle: Circle, mult: u32, class: JordanClass) -> Result<LocalEntry> {
        if class.size() != mult {
            return Err(Error::InvalidInput(format!(
                "class of size {} attached to multiplicity {}",
                class.size(),
                mult
            )));
        }
        Ok(LocalEntry {
            circle,
            mult,
            class,
        })
    }

    /// Rank contributed at its point: mult · ram.
    pub fn rank(&self) -> u64 {
        self.mult as u64 * self.circle.ram() as u64
    }
}

/// Per-point list of entries, in a fixed point order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointData {
    pub points: Vec<(PointP1, Vec<LocalEntry>)>,
}

impl PointData {
    pub fn new(points: Vec<(PointP1, Vec<LocalEntry>)>) -> Result<PointData> {
        for (i, (p, entries)) in points.iter().enumerate() {
            if points[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::InvalidInput(format!("point {} listed twice", p)));
            }
            let mut tame = 0;
            for (k, e) in entries.iter().enumerate() {
                if e.circle.point() != p {
                    return Err(Error::InvalidInput(format!(
                        "circle {} filed under point {}",
                        e.circle, p
                    )));
                }
                if e.circle.is_tame() {
                    tame += 1;
                }
                if entries[..k].iter().any(|f| f.circle == e.circle) {
                    return Err(Error::InvalidInput(format!("circle {} repeated", e.circle)));
                }
            }
            if tame > 1 {
                return Err(Error::InvalidInput(format!("two tame circles at {}", p)));
            }
        }
        Ok(PointData { points })
    }

    pub fn entries(&self) -> impl Iterator<Item = &LocalEntry> {
        self.points.iter().flat_map(|(_, e)| e.iter())
    }

    pub fn infinity_entries(&self) -> impl Iterator<Item = &LocalEntry> {
        self.points
            .iter()
            .filter(|(p, _)| p.is_infinity())
            .flat_map(|(_, e)| e.iter())
    }

    pub fn finite_points(&self) -> impl Iterator<Item = &(PointP1, Vec<LocalEntry>)> {
        self.points.iter().filter(|(p, _)| !p.is_infinity())
    }
}

/// Formal data (Θ, 𝒞): tame classes at finite points are unmodified.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalData(pub PointData);

/// Modified formal data: finite tame entries carry (m, child class).
/// Entries of multiplicity zero are kept so that modification can be undone;
/// they are inactive.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModifiedFormalData(pub PointData);

impl ModifiedFormalData {
    pub fn new(points: Vec<(PointP1, Vec<LocalEntry>)>) -> Result<ModifiedFormalData> {
        Ok(ModifiedFormalData(PointData::new(points)?))
    }

    pub fn data(&self) -> &PointData {
        &self.0
    }

    /// Entries with positive multiplicity, in order, with their point index.
    pub fn active(&self) -> Vec<&LocalEntry> {
        self.0.entries().filter(|e| e.mult > 0).collect()
    }

    pub fn is_at_infinity_only(&self) -> bool {
        self.0
            .points
            .iter()
            .all(|(p, e)| p.is_infinity() || e.iter().all(|x| x.mult == 0))
    }
}

impl FormalData {
    pub fn new(points: Vec<(PointP1, Vec<LocalEntry>)>) -> Result<FormalData> {
        Ok(FormalData(PointData::new(points)?))
    }
}

/// Replaces each finite tame entry by (rank(A − 1), child class).
pub fn modify(fd: &FormalData) -> ModifiedFormalData {
    let points = fd
        .0
        .points
        .iter()
        .map(|(p, entries)| {
            let entries = entries
                .iter()
                .map(|e| {
                    if !p.is_infinity() && e.circle.is_tame() {
                        let (m, child) = e.class.child_class();
                        LocalEntry {
                            circle: e.circle.clone(),
                            mult: m,
                            class: child,
                        }
                    } else {
                        e.clone()
                    }
                })
                .collect();
            (p.clone(), entries)
        })
        .collect();
    ModifiedFormalData(PointData { points })
}

/// Inverse of [`modify`] given the rank of the connection.
pub fn unmodify(mfd: &ModifiedFormalData, rank: u64) -> Result<FormalData> {
    let mut points = Vec::new();
    for (p, entries) in &mfd.0.points {
        let irregular: u64 = entries
            .iter()
            .filter(|e| !e.circle.is_tame())
            .map(|e| e.rank())
            .sum();
        let mut out = Vec::new();
        for e in entries {
            if !p.is_infinity() && e.circle.is_tame() {
                if irregular > rank {
                    return Err(Error::IncompatibleRank {
                        needed: irregular,
                        available: rank,
                    });
                }
                let n = (rank - irregular) as u32;
                let class = JordanClass::parent_class(&e.class, n)?;
                out.push(LocalEntry {
                    circle: e.circle.clone(),
                    mult: n,
                    class,
                });
            } else {
                out.push(e.clone());
            }
        }
        points.push((p.clone(), out));
    }
    Ok(FormalData(PointData { points }))
}

/// Σ over ∞-entries of mult · ram.
pub fn rank_of(mfd: &ModifiedFormalData) -> u64 {
    mfd.0.infinity_entries().map(|e| e.rank()).sum()
}

/// Each finite point carries at most the rank at infinity.
pub fn compatible(mfd: &ModifiedFormalData) -> bool {
    let r = rank_of(mfd);
    mfd.0
        .finite_points()
        .all(|(_, entries)| entries.iter().map(|e| e.rank()).sum::<u64>() <= r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{rat, CycNum};
    use crate::expfactor::{circle_of, ExpFactor};
    use alloc::vec;

    fn circ(p: PointP1, e: (i64, i64), c: i64) -> Circle {
        circle_of(&ExpFactor::from_terms(p, vec![(rat(e.0, e.1), CycNum::from_int(c))]).unwrap())
    }

    fn zero() -> PointP1 {
        PointP1::Finite(CycNum::zero())
    }

    fn painleve3() -> ModifiedFormalData {
        let e = |c: Circle| LocalEntry::new(c, 1, JordanClass::identity(1)).unwrap();
        ModifiedFormalData::new(vec![
            (
                PointP1::Infinity,
                vec![e(circ(PointP1::Infinity, (1, 1), 1)), e(circ(PointP1::Infinity, (1, 1), 2))],
            ),
            (zero(), vec![e(circ(zero(), (1, 1), 3))]),
        ])
        .unwrap()
    }

    #[test]
    fn painleve_three_rank() {
        let m = painleve3();
        assert_eq!(rank_of(&m), 2);
        assert!(compatible(&m));
    }

    #[test]
    fn half_rank_two() {
        let m = ModifiedFormalData::new(vec![(
            PointP1::Infinity,
            vec![LocalEntry::new(circ(PointP1::Infinity, (1, 2), 1), 1, JordanClass::identity(1))
                .unwrap()],
        )])
        .unwrap();
        assert_eq!(rank_of(&m), 2);
    }

    #[test]
    fn incompatible_when_finite_rank_exceeds() {
        let m = ModifiedFormalData::new(vec![
            (
                PointP1::Infinity,
                vec![LocalEntry::new(Circle::tame(PointP1::Infinity), 2, JordanClass::identity(2))
                    .unwrap()],
            ),
            (
                zero(),
                vec![LocalEntry::new(circ(zero(), (1, 3), 1), 1, JordanClass::identity(1)).unwrap()],
            ),
        ])
        .unwrap();
        assert!(!compatible(&m));
    }

    #[test]
    fn modify_drops_trivial_tame_and_roundtrips() {
        let fd = FormalData::new(vec![
            (
                PointP1::Infinity,
                vec![LocalEntry::new(circ(PointP1::Infinity, (1, 2), 1), 1, JordanClass::identity(1))
                    .unwrap()],
            ),
            (
                zero(),
                vec![
                    LocalEntry::new(Circle::tame(zero()), 1, JordanClass::identity(1)).unwrap(),
                    LocalEntry::new(circ(zero(), (1, 1), 1), 1, JordanClass::identity(1)).unwrap(),
                ],
            ),
            (
                PointP1::Finite(CycNum::one()),
                vec![LocalEntry::new(
                    Circle::tame(PointP1::Finite(CycNum::one())),
                    2,
                    JordanClass::new(vec![(CycNum::from_int(3), vec![1]), (CycNum::one(), vec![1])])
                        .unwrap(),
                )
                .unwrap()],
            ),
        ])
        .unwrap();
        let m = modify(&fd);
        let at0 = &m.0.points[1].1;
        assert_eq!(at0[0].mult, 0);
        assert_eq!(at0[1], fd.0.points[1].1[1]);
        let at1 = &m.0.points[2].1[0];
        assert_eq!(at1.mult, 1);
        assert_eq!(at1.class, JordanClass::new(vec![(CycNum::from_int(3), vec![1])]).unwrap());
        assert_eq!(m.active().len(), 3);
        assert_eq!(unmodify(&m, 2).unwrap(), fd);
    }
}
