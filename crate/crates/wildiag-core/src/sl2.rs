//! The SL₂(ℂ) action on formal data: Fourier (Legendre), twists and
//! scalings, factorization of matrices into these, and the Fourier sphere.
//!
//! Matrices act so that the slope-2 coefficient λ of q = −(λ/2)z² + … moves
//! by the homography λ ↦ (aλ + b)/(cλ + d).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::One;

use crate::cyclo::{rat, BigRat, CycNum};
use crate::diagram::{assemble, b_general, CoreNode, Diagram, MarkingStrategy};
use crate::error::{Error, Result};
use crate::expfactor::{circle_of, Circle, ExpFactor, PointP1};
use crate::formal::ModifiedFormalData;
use crate::jordan::{JordanClass, Marking};
use crate::numeric::{num_b_infinity, numeric_fourier, numeric_scale, numeric_twist, NumFactor, NumPoint, TOLERANCE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2Matrix {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
}

impl SL2Matrix {
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Result<SL2Matrix> {
        let det = a.checked_mul(&d)?.checked_sub(&b.checked_mul(&c)?)?;
        if !det.is_one() {
            return Err(Error::InvalidInput(format!("determinant {} is not 1", det)));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn identity() -> SL2Matrix {
        SL2Matrix {
            a: CycNum::one(),
            b: CycNum::zero(),
            c: CycNum::zero(),
            d: CycNum::one(),
        }
    }

    /// F = [[0, 1], [−1, 0]].
    pub fn fourier() -> SL2Matrix {
        SL2Matrix {
            a: CycNum::zero(),
            b: CycNum::one(),
            c: CycNum::from_int(-1),
            d: CycNum::zero(),
        }
    }

    /// T_ρ = [[1, ρ], [0, 1]].
    pub fn twist(rho: CycNum) -> SL2Matrix {
        SL2Matrix {
            a: CycNum::one(),
            b: rho,
            c: CycNum::zero(),
            d: CycNum::one(),
        }
    }

    /// S_ν = [[ν⁻¹, 0], [0, ν]].
    pub fn scaling(nu: &CycNum) -> Result<SL2Matrix> {
        Ok(SL2Matrix {
            a: nu.inverse()?,
            b: CycNum::zero(),
            c: CycNum::zero(),
            d: nu.clone(),
        })
    }

    pub fn mul(&self, o: &SL2Matrix) -> Result<SL2Matrix> {
        let dot = |x: &CycNum, y: &CycNum, u: &CycNum, v: &CycNum| -> Result<CycNum> {
            x.checked_mul(y)?.checked_add(&u.checked_mul(v)?)
        };
        Ok(SL2Matrix {
            a: dot(&self.a, &o.a, &self.b, &o.c)?,
            b: dot(&self.a, &o.b, &self.b, &o.d)?,
            c: dot(&self.c, &o.a, &self.d, &o.c)?,
            d: dot(&self.c, &o.b, &self.d, &o.d)?,
        })
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    Fourier,
    Twist(CycNum),
    Scaling(CycNum),
}

impl ElementaryOp {
    pub fn matrix(&self) -> Result<SL2Matrix> {
        match self {
            ElementaryOp::Fourier => Ok(SL2Matrix::fourier()),
            ElementaryOp::Twist(r) => Ok(SL2Matrix::twist(r.clone())),
            ElementaryOp::Scaling(n) => SL2Matrix::scaling(n),
        }
    }
}

impl fmt::Display for ElementaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryOp::Fourier => f.write_str("F"),
            ElementaryOp::Twist(r) => write!(f, "T({})", r),
            ElementaryOp::Scaling(n) => write!(f, "S({})", n),
        }
    }
}

/// Product of the matrices, in the order given.
pub fn compose(ops: &[ElementaryOp]) -> Result<SL2Matrix> {
    let mut m = SL2Matrix::identity();
    for op in ops {
        m = m.mul(&op.matrix()?)?;
    }
    Ok(m)
}

/// Elementary factors whose product (left to right) is A; they act on
/// data from right to left.
pub fn factor_sl2(m: &SL2Matrix) -> Result<Vec<ElementaryOp>> {
    if m.c.is_zero() {
        let nu = m.a.inverse()?;
        let rho = m.b.checked_mul(&nu)?;
        return Ok(vec![ElementaryOp::Scaling(nu), ElementaryOp::Twist(rho)]);
    }
    let ci = m.c.inverse()?;
    Ok(vec![
        ElementaryOp::Twist(m.a.checked_mul(&ci)?),
        ElementaryOp::Fourier,
        ElementaryOp::Scaling(-&ci),
        ElementaryOp::Twist(m.d.checked_mul(&ci)?),
    ])
}

/// Position on the Fourier sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FourierSphereCoeff {
    Finite(CycNum),
    Infinity,
}

/// λ with q = −(λ/2)z² + lower at ∞; `Infinity` at finite points.
pub fn slope2_coefficient(c: &Circle) -> FourierSphereCoeff {
    match c.point() {
        PointP1::Infinity => {
            FourierSphereCoeff::Finite(c.rep().coeff_at(&rat(2, 1)).scale(&rat(-2, 1)))
        }
        PointP1::Finite(_) => FourierSphereCoeff::Infinity,
    }
}

pub fn homography(l: &FourierSphereCoeff, m: &SL2Matrix) -> Result<FourierSphereCoeff> {
    match l {
        FourierSphereCoeff::Finite(x) => {
            let den = m.c.checked_mul(x)?.checked_add(&m.d)?;
            if den.is_zero() {
                return Ok(FourierSphereCoeff::Infinity);
            }
            let num = m.a.checked_mul(x)?.checked_add(&m.b)?;
            Ok(FourierSphereCoeff::Finite(num.checked_div(&den)?))
        }
        FourierSphereCoeff::Infinity => {
            if m.c.is_zero() {
                Ok(FourierSphereCoeff::Infinity)
            } else {
                Ok(FourierSphereCoeff::Finite(m.a.checked_div(&m.c)?))
            }
        }
    }
}

/// Adds (λ/2)·z² at ∞; identity at finite points.
pub fn twist(q: &ExpFactor, lambda: &CycNum) -> Result<ExpFactor> {
    if !q.point().is_infinity() || lambda.is_zero() {
        return Ok(q.clone());
    }
    let t = ExpFactor::from_terms(PointP1::Infinity, vec![(rat(2, 1), lambda.scale(&rat(1, 2)))])?;
    q.add(&t)
}

/// z ↦ λz: the point a goes to a/λ and b_j to b_j·λ^(∓α_j/β) (minus at
/// finite points). Fails when the roots of λ are not available exactly.
pub fn scale(q: &ExpFactor, lambda: &CycNum) -> Result<ExpFactor> {
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let root = lambda
        .try_root(q.ram())
        .ok_or_else(|| Error::Undefined(format!("no exact {}-th root of {}", q.ram(), lambda)))?;
    let finite = !q.point().is_infinity();
    let out = q.map_coeffs(|alpha, c| {
        let e = if finite { -(alpha as i64) } else { alpha as i64 };
        c.checked_mul(&root.pow(e)?)
    })?;
    Ok(match q.point() {
        PointP1::Infinity => out,
        PointP1::Finite(a) => out.with_point(PointP1::Finite(a.checked_div(lambda)?)),
    })
}

/// A circle known through its type-table invariants, with exact
/// coefficients when available and double-precision ones always.
#[derive(Clone, Debug)]
pub struct CircleSkeleton {
    pub point: PointP1,
    pub ram: u32,
    pub irregularity: u32,
    /// Exponents that may carry a nonzero coefficient, decreasing.
    pub support: Vec<BigRat>,
    pub exact: Option<ExpFactor>,
    pub numeric: NumFactor,
    /// Exact (z², z) coefficients at ∞ when q minus its z² part has slope ≤ 1.
    pub quad_lin: Option<(CycNum, CycNum)>,
}

fn sort_support(mut s: Vec<BigRat>) -> Vec<BigRat> {
    s.sort_by(|a, b| b.cmp(a));
    s.dedup();
    s
}

impl CircleSkeleton {
    pub fn from_exact(q: &ExpFactor) -> CircleSkeleton {
        let two = rat(2, 1);
        let quad_lin = if q.point().is_infinity() && q.filter(|e| *e != two).slope() <= BigRat::one() {
            Some((q.coeff_at(&two), q.coeff_at(&BigRat::one())))
        } else {
            None
        };
        CircleSkeleton {
            point: q.point().clone(),
            ram: q.ram(),
            irregularity: q.irregularity(),
            support: q.exponents(),
            exact: Some(q.clone()),
            numeric: NumFactor::from_exact(q),
            quad_lin,
        }
    }

    pub fn slope(&self) -> BigRat {
        rat(self.irregularity as i64, self.ram as i64)
    }

    pub fn circle(&self) -> Option<Circle> {
        self.exact.as_ref().map(circle_of)
    }

    fn exponents(&self) -> Vec<BigRat> {
        match &self.exact {
            Some(q) => q.exponents(),
            None => self.numeric.exponents(),
        }
    }

    /// Overwrites the numeric z² and z coefficients with the exact ones.
    fn sync_low(&mut self) {
        if let Some((b2, b1)) = &self.quad_lin {
            let mut monos: Vec<(u32, Complex64)> = self
                .numeric
                .monos
                .iter()
                .filter(|(a, _)| *a != self.numeric.ram && *a != 2 * self.numeric.ram)
                .cloned()
                .collect();
            monos.push((2 * self.numeric.ram, b2.to_complex()));
            monos.push((self.numeric.ram, b1.to_complex()));
            self.numeric = NumFactor::normalize(self.numeric.point, self.numeric.ram, monos, 0.0);
            self.ram = self.numeric.ram;
            self.irregularity = self.numeric.irregularity();
            if b2.is_zero() {
                self.support.retain(|e| *e != rat(2, 1));
            }
        }
    }

    fn refresh_from_numeric(&mut self) {
        self.ram = self.numeric.ram;
        self.irregularity = self.numeric.irregularity();
        let s = self.slope();
        self.support.retain(|e| *e <= s);
    }
}

impl fmt::Display for CircleSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = &self.exact {
            return write!(f, "{}", circle_of(q));
        }
        f.write_str("<")?;
        if self.numeric.monos.is_empty() {
            f.write_str("0")?;
        }
        let fin = !self.point.is_infinity();
        for (i, (a, c)) in self.numeric.monos.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let e = rat(*a as i64, self.numeric.ram as i64);
            let sign = if fin { "-" } else { "" };
            let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
            write!(f, "({:.6}{:+.6}i)*z^({}{})", clean(c.re), clean(c.im), sign, e)?;
        }
        write!(f, ">_{}", self.point)
    }
}

/// Type of a circle: 1 pure at ∞, 2 slope ≤ 1 at ∞ with a non-linear part,
/// 3 slope > 1 at ∞, 4 irregular at a finite point, 5 tame at a finite point.
pub fn skeleton_type(sk: &CircleSkeleton) -> u8 {
    match &sk.point {
        PointP1::Finite(_) => {
            if sk.irregularity == 0 {
                5
            } else {
                4
            }
        }
        PointP1::Infinity => match &sk.quad_lin {
            Some((b2, _)) if b2.is_zero() => {
                if sk.exponents().iter().all(|e| e.is_one()) {
                    1
                } else {
                    2
                }
            }
            _ => 3,
        },
    }
}

pub fn classify_type(c: &Circle) -> u8 {
    skeleton_type(&CircleSkeleton::from_exact(c.rep()))
}

/// Adds (λ/2)·z² at ∞.
pub fn twist_skeleton(sk: &CircleSkeleton, lambda: &CycNum) -> Result<CircleSkeleton> {
    if !sk.point.is_infinity() || lambda.is_zero() {
        return Ok(sk.clone());
    }
    if let Some(q) = &sk.exact {
        return Ok(CircleSkeleton::from_exact(&twist(q, lambda)?));
    }
    let half = lambda.scale(&rat(1, 2));
    let mut out = sk.clone();
    out.numeric = numeric_twist(&sk.numeric, half.to_complex() * 2.0, TOLERANCE);
    out.support = sort_support({
        let mut s = sk.support.clone();
        s.push(rat(2, 1));
        s
    });
    out.quad_lin = match &sk.quad_lin {
        Some((b2, b1)) => Some((b2.checked_add(&half)?, b1.clone())),
        None => None,
    };
    out.refresh_from_numeric();
    out.sync_low();
    Ok(out)
}

/// z ↦ λz, exact when the needed roots exist and numeric otherwise.
pub fn scale_skeleton(sk: &CircleSkeleton, lambda: &CycNum) -> Result<CircleSkeleton> {
    if lambda.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(q) = &sk.exact {
        if let Ok(s) = scale(q, lambda) {
            return Ok(CircleSkeleton::from_exact(&s));
        }
    }
    let mut out = sk.clone();
    out.exact = None;
    out.numeric = numeric_scale(&sk.numeric, lambda.to_complex());
    if let PointP1::Finite(a) = &sk.point {
        out.point = PointP1::Finite(a.checked_div(lambda)?);
    }
    out.quad_lin = match &sk.quad_lin {
        Some((b2, b1)) => Some((b2.checked_mul(&lambda.pow(2)?)?, b1.checked_mul(lambda)?)),
        None => None,
    };
    out.sync_low();
    Ok(out)
}

/// Exponents (α − γ)/n for γ < α in the additive span of the gaps α − α_j.
fn legendre_support(numerators: &[u32], n: u32) -> Vec<BigRat> {
    let alpha = match numerators.iter().max() {
        Some(&a) => a as usize,
        None => return Vec::new(),
    };
    let gaps: Vec<usize> = numerators
        .iter()
        .filter(|&&a| (a as usize) < alpha)
        .map(|&a| alpha - a as usize)
        .collect();
    let mut reach = vec![false; alpha];
    reach[0] = true;
    for g in 0..alpha {
        if reach[g] {
            for &d in &gaps {
                if g + d < alpha {
                    reach[g + d] = true;
                }
            }
        }
    }
    sort_support(
        (0..alpha)
            .filter(|&g| reach[g])
            .map(|g| rat((alpha - g) as i64, n as i64))
            .collect(),
    )
}

fn numerators_of(sk: &CircleSkeleton) -> (u32, Vec<u32>) {
    match &sk.exact {
        Some(q) => (q.ram(), q.monomials().iter().map(|m| m.alpha).collect()),
        None => (sk.numeric.ram, sk.numeric.monos.iter().map(|m| m.0).collect()),
    }
}

fn residual_of(sk: &CircleSkeleton) -> (u32, Vec<u32>) {
    match &sk.exact {
        Some(q) => {
            let r = q.filter(|e| *e < BigRat::one());
            (r.ram(), r.monomials().iter().map(|m| m.alpha).collect())
        }
        None => {
            let (_, r) = sk.numeric.linear_and_rest();
            (r.ram, r.monos.iter().map(|m| m.0).collect())
        }
    }
}

fn sign_of(irr: u32) -> i64 {
    if irr % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_numeric(sk: &CircleSkeleton) -> Result<()> {
    if sk.numeric.ram != sk.ram || sk.numeric.irregularity() != sk.irregularity {
        return Err(Error::Undefined(format!(
            "numeric transform lost precision: expected ram {} irr {}, got ram {} irr {}",
            sk.ram,
            sk.irregularity,
            sk.numeric.ram,
            sk.numeric.irregularity()
        )));
    }
    Ok(())
}

/// Formal Fourier transform of one circle: the Legendre image and the sign
/// by which the monodromy eigenvalues are multiplied.
pub fn fourier_skeleton(sk: &CircleSkeleton) -> Result<(CircleSkeleton, i64)> {
    let one = BigRat::one();
    match skeleton_type(sk) {
        5 => {
            let a = match &sk.point {
                PointP1::Finite(a) => a.clone(),
                PointP1::Infinity => unreachable!(),
            };
            let q = ExpFactor::from_terms(PointP1::Infinity, vec![(one, -&a)])?;
            Ok((CircleSkeleton::from_exact(&q), 1))
        }
        1 => {
            let c = &sk.quad_lin.as_ref().expect("pure circle").1;
            Ok((CircleSkeleton::from_exact(&ExpFactor::tame(PointP1::Finite(-c))), 1))
        }
        3 => {
            let sign = sign_of(sk.irregularity);
            if let Some(q) = &sk.exact {
                let two = rat(2, 1);
                if q.ram() == 1 && q.exponents().iter().all(|e| *e == two || e.is_one()) {
                    let b2 = q.coeff_at(&two);
                    let b1 = q.coeff_at(&one);
                    let out = ExpFactor::from_terms(
                        PointP1::Infinity,
                        vec![
                            (two, b2.scale(&rat(-4, 1)).inverse()?),
                            (one, b1.checked_div(&b2.scale(&rat(2, 1)))?),
                        ],
                    )?;
                    return Ok((CircleSkeleton::from_exact(&out), sign));
                }
            }
            let (beta, nums) = numerators_of(sk);
            let alpha = sk.irregularity;
            let n = alpha - beta;
            let quad_lin = match &sk.quad_lin {
                Some((b2, b1)) => Some((
                    b2.scale(&rat(-4, 1)).inverse()?,
                    b1.checked_div(&b2.scale(&rat(2, 1)))?,
                )),
                None => None,
            };
            let mut out = CircleSkeleton {
                point: PointP1::Infinity,
                ram: n,
                irregularity: alpha,
                support: legendre_support(&nums, n),
                exact: None,
                numeric: numeric_fourier(&sk.numeric, TOLERANCE)?,
                quad_lin,
            };
            out.sync_low();
            check_numeric(&out)?;
            Ok((out, sign))
        }
        4 => {
            let a = match &sk.point {
                PointP1::Finite(a) => a.clone(),
                PointP1::Infinity => unreachable!(),
            };
            let (beta, nums) = numerators_of(sk);
            let alpha = sk.irregularity;
            let n = alpha + beta;
            let mut support = legendre_support(&nums, n);
            if !a.is_zero() {
                support.insert(0, one);
            }
            let mut out = CircleSkeleton {
                point: PointP1::Infinity,
                ram: n,
                irregularity: if a.is_zero() { alpha } else { n },
                support,
                exact: None,
                numeric: numeric_fourier(&sk.numeric, TOLERANCE)?,
                quad_lin: Some((CycNum::zero(), -&a)),
            };
            out.sync_low();
            check_numeric(&out)?;
            Ok((out, sign_of(sk.irregularity)))
        }
        _ => {
            let c = sk.quad_lin.as_ref().expect("type 2 has a linear part").1.clone();
            let (beta, nums) = residual_of(sk);
            let alpha = nums.iter().copied().max().unwrap_or(0);
            let n = beta - alpha;
            let mut numeric = numeric_fourier(&sk.numeric, TOLERANCE)?;
            let p = -&c;
            numeric.point = NumPoint::Finite(p.to_complex());
            let out = CircleSkeleton {
                point: PointP1::Finite(p),
                ram: n,
                irregularity: alpha,
                support: legendre_support(&nums, n),
                exact: None,
                numeric,
                quad_lin: None,
            };
            check_numeric(&out)?;
            Ok((out, sign_of(sk.irregularity)))
        }
    }
}

/// Type-table image of a circle under the Legendre transform.
pub fn legendre_skeleton(c: &Circle) -> Result<CircleSkeleton> {
    Ok(fourier_skeleton(&CircleSkeleton::from_exact(c.rep()))?.0)
}

pub fn fourier_circle(c: &Circle) -> Result<(CircleSkeleton, i64)> {
    fourier_skeleton(&CircleSkeleton::from_exact(c.rep()))
}

/// Applies one elementary operation to a circle; returns the sign picked
/// up by the monodromy.
pub fn apply_op_skeleton(sk: &CircleSkeleton, op: &ElementaryOp) -> Result<(CircleSkeleton, i64)> {
    match op {
        ElementaryOp::Fourier => fourier_skeleton(sk),
        ElementaryOp::Twist(r) => Ok((twist_skeleton(sk, &-r)?, 1)),
        ElementaryOp::Scaling(n) => Ok((scale_skeleton(sk, &n.inverse()?)?, 1)),
    }
}

/// Transports one circle by A (factors applied right to left).
pub fn transport(sk: &CircleSkeleton, m: &SL2Matrix) -> Result<(CircleSkeleton, i64)> {
    let mut cur = sk.clone();
    let mut sign = 1;
    for op in factor_sl2(m)?.iter().rev() {
        let (next, s) = apply_op_skeleton(&cur, op)?;
        cur = next;
        sign *= s;
    }
    Ok((cur, sign))
}

/// Finite target point of a circle under A, if it does not end at ∞.
pub fn sends_to_finite(c: &Circle, m: &SL2Matrix) -> Result<Option<PointP1>> {
    let (sk, _) = transport(&CircleSkeleton::from_exact(c.rep()), m)?;
    Ok(match sk.point {
        PointP1::Infinity => None,
        p => Some(p),
    })
}

/// One transported entry; `source` indexes the entries of the input data.
#[derive(Clone, Debug)]
pub struct SkEntry {
    pub skeleton: CircleSkeleton,
    pub mult: u32,
    pub class: JordanClass,
    pub marking: Marking,
    pub source: usize,
}

/// Modified formal data after an SL₂ transformation.
#[derive(Clone, Debug)]
pub struct TransformedData {
    pub entries: Vec<SkEntry>,
}

impl TransformedData {
    pub fn from_modified(mfd: &ModifiedFormalData) -> TransformedData {
        let entries = mfd
            .0
            .entries()
            .enumerate()
            .map(|(i, e)| SkEntry {
                skeleton: CircleSkeleton::from_exact(e.circle.rep()),
                mult: e.mult,
                class: e.class.clone(),
                marking: e.class.default_marking(true),
                source: i,
            })
            .collect();
        TransformedData { entries }
    }

    pub fn active(&self) -> Vec<&SkEntry> {
        self.entries.iter().filter(|e| e.mult > 0).collect()
    }

    pub fn rank(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.skeleton.point.is_infinity())
            .map(|e| e.mult as u64 * e.skeleton.ram as u64)
            .sum()
    }

    /// Rank carried by each finite point, in order of first appearance.
    pub fn finite_ranks(&self) -> Vec<(PointP1, u64)> {
        let mut out: Vec<(PointP1, u64)> = Vec::new();
        for e in &self.entries {
            if e.skeleton.point.is_infinity() {
                continue;
            }
            let r = e.mult as u64 * e.skeleton.ram as u64;
            match out.iter_mut().find(|(p, _)| *p == e.skeleton.point) {
                Some(slot) => slot.1 += r,
                None => out.push((e.skeleton.point.clone(), r)),
            }
        }
        out
    }

    pub fn compatible(&self) -> bool {
        let r = self.rank();
        self.finite_ranks().iter().all(|(_, x)| *x <= r)
    }

    pub fn is_at_infinity_only(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.mult == 0 || e.skeleton.point.is_infinity())
    }

    /// The exact modified data, when every circle is known exactly.
    pub fn to_modified(&self) -> Option<ModifiedFormalData> {
        use crate::formal::LocalEntry;
        let mut points: Vec<(PointP1, Vec<LocalEntry>)> = Vec::new();
        for e in &self.entries {
            let q = e.skeleton.exact.as_ref()?;
            let le = LocalEntry::new(circle_of(q), e.mult, e.class.clone()).ok()?;
            match points.iter_mut().find(|(p, _)| *p == e.skeleton.point) {
                Some(slot) => slot.1.push(le),
                None => points.push((e.skeleton.point.clone(), vec![le])),
            }
        }
        ModifiedFormalData::new(points).ok()
    }

    /// The full diagram, nodes in the order of the active entries.
    pub fn diagram(&self, with_legs: bool) -> Result<Diagram> {
        let act = self.active();
        let circles: Vec<Option<Circle>> = act.iter().map(|e| e.skeleton.circle()).collect();
        let core: Vec<CoreNode<'_>> = act
            .iter()
            .zip(circles.iter())
            .map(|(e, c)| CoreNode {
                circle: c.as_ref(),
                point: Some(e.skeleton.point.clone()),
                label: format!("{}", e.skeleton),
                dim: e.mult,
                class: &e.class,
            })
            .collect();
        let n = act.len();
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = skeleton_b(&act[i].skeleton, &act[j].skeleton, i == j, TOLERANCE)?;
                b[i][j] = v;
                b[j][i] = v;
            }
        }
        let markings = act.iter().map(|e| e.marking.clone()).collect();
        assemble(&core, b, &MarkingStrategy::Explicit(markings), with_legs)
    }
}

/// Edge count between transported circles: exact when both are exact,
/// otherwise from the numeric coefficients at relative tolerance `tol`.
pub fn skeleton_b(x: &CircleSkeleton, y: &CircleSkeleton, same: bool, tol: f64) -> Result<i64> {
    if let (Some(p), Some(q)) = (&x.exact, &y.exact) {
        return b_general(&circle_of(p), &circle_of(q));
    }
    let (a1, b1) = (x.irregularity as i64, x.ram as i64);
    let (a2, b2) = (y.irregularity as i64, y.ram as i64);
    match (&x.point, &y.point) {
        (PointP1::Infinity, PointP1::Infinity) => num_b_infinity(&x.numeric, &y.numeric, same, tol),
        (PointP1::Infinity, _) => Ok(b1 * (a2 + b2)),
        (_, PointP1::Infinity) => Ok(b2 * (a1 + b1)),
        (p, q) if p != q => Ok(0),
        _ => {
            let binf = num_b_infinity(&x.numeric, &y.numeric, same, tol)?;
            if same {
                Ok(binf - 2 * a1 * b1)
            } else {
                Ok(binf - a1 * b2 - a2 * b1)
            }
        }
    }
}

/// Applies one elementary operation to every entry.
pub fn apply_op(td: &TransformedData, op: &ElementaryOp) -> Result<TransformedData> {
    let mut entries = Vec::with_capacity(td.entries.len());
    for e in &td.entries {
        let (sk, sign) = apply_op_skeleton(&e.skeleton, op)?;
        let s = CycNum::from_int(sign);
        entries.push(SkEntry {
            skeleton: sk,
            mult: e.mult,
            class: e.class.scale_eigenvalues(&s),
            marking: e.marking.scale(&s),
            source: e.source,
        });
    }
    let out = TransformedData { entries };
    if !out.compatible() {
        return Err(Error::Incompatible(format!("image under {} is not compatible", op)));
    }
    Ok(out)
}

pub fn apply_sl2_transformed(td: &TransformedData, m: &SL2Matrix) -> Result<TransformedData> {
    let mut cur = td.clone();
    for op in factor_sl2(m)?.iter().rev() {
        cur = apply_op(&cur, op)?;
    }
    Ok(cur)
}

pub fn apply_sl2(mfd: &ModifiedFormalData, m: &SL2Matrix) -> Result<TransformedData> {
    apply_sl2_transformed(&TransformedData::from_modified(mfd), m)
}

pub fn fourier_formal(mfd: &ModifiedFormalData) -> Result<TransformedData> {
    apply_op(&TransformedData::from_modified(mfd), &ElementaryOp::Fourier)
}

/// Rank of the Fourier transform, read off the modified data.
pub fn fourier_rank(mfd: &ModifiedFormalData) -> u64 {
    let mut r = 0u64;
    for (p, entries) in &mfd.0.points {
        for e in entries {
            let (n, a, b) = (e.mult as u64, e.circle.irregularity() as u64, e.circle.ram() as u64);
            if !p.is_infinity() {
                r += n * (a + b);
            } else if e.circle.slope() > BigRat::one() {
                r += n * (a - b);
            }
        }
    }
    r
}

/// A = F·T_λ = [[0, 1], [−1, −λ]] for the least λ ∈ {0, 1, 2, …} such that
/// every circle ends at ∞; returns A and the transformed data.
pub fn normalize_to_infinity(mfd: &ModifiedFormalData) -> Result<(SL2Matrix, TransformedData)> {
    let td = TransformedData::from_modified(mfd);
    let lambdas: Vec<CycNum> = td
        .entries
        .iter()
        .filter_map(|e| e.skeleton.quad_lin.as_ref())
        .map(|(b2, _)| b2.scale(&rat(-2, 1)))
        .collect();
    let bound = lambdas.len() as i64 + 1;
    for l in 0..=bound {
        let lam = CycNum::from_int(l);
        if lambdas.iter().any(|x| (x + &lam).is_zero()) {
            continue;
        }
        let m = SL2Matrix::new(CycNum::zero(), CycNum::one(), CycNum::from_int(-1), -&lam)?;
        let out = apply_sl2_transformed(&td, &m)?;
        debug_assert!(out.is_at_infinity_only());
        return Ok((m, out));
    }
    Err(Error::Undefined("no admissible twist parameter".into()))
}

/// Short summary line of a transformed entry, for reports.
pub fn describe(e: &SkEntry) -> String {
    format!(
        "{} mult {} ram {} slope {} class {}",
        e.skeleton,
        e.mult,
        e.skeleton.ram,
        e.skeleton.slope(),
        e.class
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::full_diagram;
    use crate::formal::LocalEntry;

    fn ex(p: PointP1, terms: &[(i64, i64, i64)]) -> ExpFactor {
        ExpFactor::from_terms(
            p,
            terms
                .iter()
                .map(|&(n, d, c)| (rat(n, d), CycNum::from_int(c)))
                .collect(),
        )
        .unwrap()
    }

    fn inf(terms: &[(i64, i64, i64)]) -> ExpFactor {
        ex(PointP1::Infinity, terms)
    }

    fn at(a: i64, terms: &[(i64, i64, i64)]) -> ExpFactor {
        ex(PointP1::Finite(CycNum::from_int(a)), terms)
    }

    fn int(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    #[test]
    fn types() {
        assert_eq!(classify_type(&circle_of(&inf(&[(5, 2, 1)]))), 3);
        assert_eq!(classify_type(&Circle::tame(PointP1::Finite(int(2)))), 5);
        assert_eq!(classify_type(&circle_of(&inf(&[(1, 1, 3), (1, 2, 1)]))), 2);
        assert_eq!(classify_type(&circle_of(&inf(&[(1, 1, 3)]))), 1);
        assert_eq!(classify_type(&Circle::tame(PointP1::Infinity)), 1);
        assert_eq!(classify_type(&circle_of(&at(0, &[(1, 1, 1)]))), 4);
    }

    #[test]
    fn twist_examples() {
        let q = twist(&inf(&[(1, 2, 1)]), &int(2)).unwrap();
        assert_eq!(q, inf(&[(2, 1, 1), (1, 2, 1)]));
        assert!(twist(&inf(&[(2, 1, -1)]), &int(2)).unwrap().is_tame());
        let p = at(0, &[(1, 1, 1)]);
        assert_eq!(twist(&p, &int(5)).unwrap(), p);
    }

    #[test]
    fn scale_examples() {
        let q = scale(&at(1, &[(1, 1, 1)]), &int(2)).unwrap();
        let expected = ExpFactor::from_terms(
            PointP1::Finite(CycNum::from_rat(rat(1, 2))),
            vec![(rat(1, 1), CycNum::from_rat(rat(1, 2)))],
        )
        .unwrap();
        assert_eq!(q, expected);
        assert_eq!(scale(&inf(&[(3, 1, 1)]), &int(2)).unwrap(), inf(&[(3, 1, 8)]));
        let h = scale(&inf(&[(1, 2, 1)]), &int(4)).unwrap();
        assert_eq!(circle_of(&h), circle_of(&inf(&[(1, 2, 2)])));
    }

    #[test]
    fn legendre_table() {
        let s = legendre_skeleton(&circle_of(&inf(&[(5, 2, 1)]))).unwrap();
        assert_eq!((s.ram, s.irregularity), (3, 5));
        assert_eq!(s.support, vec![rat(5, 3)]);
        let s = legendre_skeleton(&circle_of(&inf(&[(5, 2, 1), (1, 1, 1)]))).unwrap();
        assert_eq!(s.ram, 3);
        assert_eq!(s.support, vec![rat(5, 3), rat(2, 3)]);
        assert!(s.numeric.coeff_at(&rat(2, 3)).norm() > 1e-6);
        let s = legendre_skeleton(&Circle::tame(PointP1::Finite(int(2)))).unwrap();
        assert_eq!(s.exact.unwrap(), inf(&[(1, 1, -2)]));
        let s = legendre_skeleton(&circle_of(&at(0, &[(1, 1, 1)]))).unwrap();
        assert_eq!((s.ram, s.irregularity, s.point.clone()), (2, 1, PointP1::Infinity));
        let s = legendre_skeleton(&circle_of(&inf(&[(1, 1, 3), (1, 2, 1)]))).unwrap();
        assert_eq!(s.point, PointP1::Finite(int(-3)));
        assert_eq!((s.ram, s.irregularity), (1, 1));
    }

    #[test]
    fn quadratic_is_exact() {
        let (s, sign) = fourier_circle(&circle_of(&inf(&[(2, 1, 1)]))).unwrap();
        assert_eq!(s.exact.unwrap(), ex(PointP1::Infinity, &[]).add(&ExpFactor::from_terms(
            PointP1::Infinity,
            vec![(rat(2, 1), CycNum::from_rat(rat(-1, 4)))],
        ).unwrap()).unwrap());
        assert_eq!(sign, 1);
    }

    #[test]
    fn signs() {
        assert_eq!(fourier_circle(&circle_of(&inf(&[(5, 2, 1)]))).unwrap().1, -1);
        assert_eq!(fourier_circle(&circle_of(&at(0, &[(1, 1, 1)]))).unwrap().1, -1);
        assert_eq!(fourier_circle(&Circle::tame(PointP1::Finite(int(3)))).unwrap().1, 1);
    }

    #[test]
    fn factorizations() {
        let m = SL2Matrix::new(int(2), int(3), int(0), CycNum::from_rat(rat(1, 2))).unwrap();
        let f = factor_sl2(&m).unwrap();
        assert_eq!(
            f,
            vec![
                ElementaryOp::Scaling(CycNum::from_rat(rat(1, 2))),
                ElementaryOp::Twist(CycNum::from_rat(rat(3, 2)))
            ]
        );
        assert_eq!(compose(&f).unwrap(), m);
        let id = factor_sl2(&SL2Matrix::identity()).unwrap();
        assert_eq!(id, vec![ElementaryOp::Scaling(int(1)), ElementaryOp::Twist(int(0))]);
        let f = factor_sl2(&SL2Matrix::fourier()).unwrap();
        assert_eq!(compose(&f).unwrap(), SL2Matrix::fourier());
    }

    #[test]
    fn sphere() {
        let c = circle_of(&inf(&[(2, 1, -3), (1, 2, 1)]));
        assert_eq!(slope2_coefficient(&c), FourierSphereCoeff::Finite(int(6)));
        let l = FourierSphereCoeff::Finite(int(2));
        assert_eq!(
            homography(&l, &SL2Matrix::fourier()).unwrap(),
            FourierSphereCoeff::Finite(CycNum::from_rat(rat(-1, 2)))
        );
        assert_eq!(
            homography(&l, &SL2Matrix::twist(int(3))).unwrap(),
            FourierSphereCoeff::Finite(int(5))
        );
    }

    #[test]
    fn sends() {
        let f = SL2Matrix::fourier();
        assert_eq!(sends_to_finite(&circle_of(&inf(&[(2, 1, 1), (1, 1, 1)])), &f).unwrap(), None);
        assert_eq!(
            sends_to_finite(&circle_of(&inf(&[(1, 1, 4)])), &f).unwrap(),
            Some(PointP1::Finite(int(-4)))
        );
        assert_eq!(sends_to_finite(&circle_of(&inf(&[(3, 1, 1)])), &f).unwrap(), None);
    }

    fn painleve3() -> ModifiedFormalData {
        let e = |q: ExpFactor| LocalEntry::new(circle_of(&q), 1, JordanClass::identity(1)).unwrap();
        ModifiedFormalData::new(vec![
            (PointP1::Infinity, vec![e(inf(&[(1, 1, 1)])), e(inf(&[(1, 1, 2)]))]),
            (PointP1::Finite(int(0)), vec![e(at(0, &[(1, 1, 3)]))]),
        ])
        .unwrap()
    }

    #[test]
    fn painleve_three_fourier() {
        let m = painleve3();
        assert_eq!(fourier_rank(&m), 2);
        let t = fourier_formal(&m).unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t.finite_ranks().len(), 2);
        let d = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        assert_eq!(t.diagram(true).unwrap().b, d.b);
    }

    #[test]
    fn normalization_of_painleve_three() {
        let m = painleve3();
        let (a, t) = normalize_to_infinity(&m).unwrap();
        assert_eq!(a.d, int(-1));
        assert!(t.is_at_infinity_only());
        let d = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        assert_eq!(t.diagram(true).unwrap().b, d.b);
    }
}
