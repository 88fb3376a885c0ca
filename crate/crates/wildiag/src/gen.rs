//! Seeded random formal data for the property suites (ChaCha8 streams).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildiag_core::{
    circle_of, compatible, modify, rank_of, rat, BigRat, Circle, CycNum, ExpFactor, FormalData,
    JordanClass, LocalEntry, ModifiedFormalData, PointP1,
};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero element of ℚ(ζ₁₂) with small numerators and denominators.
pub fn coeff(r: &mut Rng8) -> CycNum {
    loop {
        let mut acc = CycNum::zero();
        let terms = if r.gen_bool(0.4) { 1 } else { 4 };
        for k in 0..terms {
            let n: i64 = r.gen_range(-3..=3);
            let d: i64 = r.gen_range(1..=2);
            acc = &acc + &CycNum::root_of_unity(12, k).scale(&rat(n, d));
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

fn terms_of(q: &ExpFactor) -> Vec<(BigRat, CycNum)> {
    q.monomials()
        .iter()
        .map(|m| (rat(m.alpha as i64, q.ram() as i64), m.coeff.clone()))
        .collect()
}

/// Random irregular factor at `point` with β ≤ `max_beta`, Irr ≤ `max_irr`.
pub fn factor(r: &mut Rng8, point: PointP1, max_beta: u32, max_irr: u32) -> ExpFactor {
    let beta = r.gen_range(1..=max_beta);
    let alpha = r.gen_range(1..=max_irr);
    let mut alphas = vec![alpha];
    for _ in 0..r.gen_range(0..=2) {
        if alpha > 1 {
            alphas.push(r.gen_range(1..alpha));
        }
    }
    alphas.sort_unstable();
    alphas.dedup();
    let terms = alphas
        .into_iter()
        .map(|a| (rat(a as i64, beta as i64), coeff(r)))
        .collect();
    ExpFactor::from_terms(point, terms).expect("small exponents")
}

pub fn circle(r: &mut Rng8, point: PointP1, max_beta: u32, max_irr: u32) -> Circle {
    circle_of(&factor(r, point, max_beta, max_irr))
}

/// Pairs at ∞: unrelated, sharing a prefix up to Galois action, or equal
/// (loops).
pub fn circle_pair(r: &mut Rng8, max_beta: u32, max_irr: u32) -> (Circle, Circle) {
    let q = factor(r, PointP1::Infinity, max_beta, max_irr);
    match r.gen_range(0..4) {
        0 => (circle_of(&q), circle(r, PointP1::Infinity, max_beta, max_irr)),
        1 => {
            let k = r.gen_range(0..q.ram());
            (circle_of(&q), circle_of(&q.conjugate(k).expect("conjugate")))
        }
        _ => {
            let k = r.gen_range(0..q.ram());
            let conj = q.conjugate(k).expect("conjugate");
            let t = terms_of(&conj);
            let keep = r.gen_range(1..=t.len());
            let mut terms: Vec<(BigRat, CycNum)> = t[..keep].to_vec();
            let floor = terms[keep - 1].0.clone();
            let beta2 = r.gen_range(1..=max_beta) as i64;
            for _ in 0..r.gen_range(0..=2) {
                let a: i64 = r.gen_range(1..=max_irr as i64);
                let e = rat(a, beta2);
                if e < floor && terms.iter().all(|(x, _)| *x != e) {
                    terms.push((e, coeff(r)));
                }
            }
            let p = ExpFactor::from_terms(PointP1::Infinity, terms).expect("small exponents");
            (circle_of(&q), circle_of(&p))
        }
    }
}

const EIGENVALUES: [(i64, i64, u32, i64); 6] = [
    (1, 1, 1, 0),
    (-1, 1, 1, 0),
    (2, 1, 1, 0),
    (1, 2, 1, 0),
    (1, 1, 4, 1),
    (1, 1, 3, 1),
];

fn eigenvalue(k: usize) -> CycNum {
    let (n, d, order, power) = EIGENVALUES[k];
    CycNum::root_of_unity(order, power).scale(&rat(n, d))
}

/// Random class in GL_n with eigenvalues drawn from a small pool.
pub fn jordan_class(r: &mut Rng8, n: u32) -> JordanClass {
    let mut slots: Vec<Vec<u32>> = vec![Vec::new(); EIGENVALUES.len()];
    let mut left = n;
    while left > 0 {
        let b = r.gen_range(1..=left.min(3));
        let k = r.gen_range(0..EIGENVALUES.len());
        slots[k].push(b);
        left -= b;
    }
    let entries = slots
        .into_iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty())
        .map(|(k, s)| (eigenvalue(k), s))
        .collect();
    JordanClass::new(entries).expect("distinct nonzero eigenvalues")
}

fn entry(r: &mut Rng8, q: ExpFactor, max_mult: u32) -> LocalEntry {
    let m = r.gen_range(1..=max_mult);
    LocalEntry::new(circle_of(&q), m, jordan_class(r, m)).expect("sizes agree")
}

const FINITE: [(i64, u32, i64); 4] = [(0, 1, 0), (1, 1, 0), (-1, 1, 0), (1, 4, 1)];

fn finite_point(k: usize) -> PointP1 {
    let (n, order, power) = FINITE[k];
    PointP1::Finite(if n == 0 {
        CycNum::zero()
    } else {
        CycNum::root_of_unity(order, power).scale(&rat(n, 1))
    })
}

fn push_distinct(list: &mut Vec<LocalEntry>, e: LocalEntry) {
    if list.iter().all(|f| f.circle != e.circle) {
        list.push(e);
    }
}

/// Random compatible modified data (β ≤ 3, Irr ≤ 6); tame entries at
/// finite points are drawn unmodified and then modified.
pub fn modified_data(r: &mut Rng8) -> ModifiedFormalData {
    loop {
        let mut at_inf: Vec<LocalEntry> = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let q = match r.gen_range(0..4) {
                0 => ExpFactor::tame(PointP1::Infinity),
                1 => ExpFactor::from_terms(PointP1::Infinity, vec![(rat(1, 1), coeff(r))])
                    .expect("linear"),
                _ => factor(r, PointP1::Infinity, 3, 6),
            };
            if q.is_tame() && at_inf.iter().any(|e| e.circle.is_tame()) {
                continue;
            }
            push_distinct(&mut at_inf, entry(r, q, 2));
        }
        let mut points = vec![(PointP1::Infinity, at_inf)];
        let mut idx: Vec<usize> = (0..FINITE.len()).collect();
        idx.shuffle(r);
        for &k in idx.iter().take(r.gen_range(0..=2)) {
            let p = finite_point(k);
            let mut list = Vec::new();
            for _ in 0..r.gen_range(0..=2) {
                let q = factor(r, p.clone(), 3, 3);
                push_distinct(&mut list, entry(r, q, 1));
            }
            if r.gen_bool(0.6) {
                let n = r.gen_range(1..=3);
                list.push(
                    LocalEntry::new(circle_of(&ExpFactor::tame(p.clone())), n, jordan_class(r, n))
                        .expect("sizes agree"),
                );
            }
            if !list.is_empty() {
                points.push((p, list));
            }
        }
        let fd = match FormalData::new(points) {
            Ok(fd) => fd,
            Err(_) => continue,
        };
        let m = modify(&fd);
        if rank_of(&m) > 0 && compatible(&m) && !m.active().is_empty() {
            return m;
        }
    }
}

/// Random circle for the type table: any point, any of the five types.
pub fn typed_circle(r: &mut Rng8) -> Circle {
    match r.gen_range(0..5) {
        0 => circle_of(
            &ExpFactor::from_terms(PointP1::Infinity, vec![(rat(1, 1), coeff(r))]).expect("linear"),
        ),
        1 => {
            let beta = r.gen_range(2..=4);
            let alpha = r.gen_range(1..beta);
            let q = ExpFactor::from_terms(
                PointP1::Infinity,
                vec![(rat(1, 1), coeff(r)), (rat(alpha, beta), coeff(r))],
            )
            .expect("small exponents");
            circle_of(&q)
        }
        2 => loop {
            let c = circle(r, PointP1::Infinity, 3, 6);
            if c.slope() > rat(1, 1) {
                break c;
            }
        },
        3 => {
            let p = finite_point(r.gen_range(0..FINITE.len()));
            circle(r, p, 3, 4)
        }
        _ => circle_of(&ExpFactor::tame(finite_point(r.gen_range(0..FINITE.len())))),
    }
}
