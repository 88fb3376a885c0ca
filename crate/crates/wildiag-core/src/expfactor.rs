//! Exponential factors, their Galois orbits (circles) and Stokes counts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cyclo::{rat, BigRat, CycNum};
use crate::error::{Error, Result};

/// A point of ℙ¹.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointP1 {
    Finite(CycNum),
    Infinity,
}

impl PointP1 {
    pub fn is_infinity(&self) -> bool {
        matches!(self, PointP1::Infinity)
    }
}

impl fmt::Display for PointP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointP1::Infinity => f.write_str("inf"),
            PointP1::Finite(a) => write!(f, "{}", a),
        }
    }
}

/// `coeff · t^(-alpha/β)` in the local coordinate of the owning factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub alpha: u32,
    pub coeff: CycNum,
}

/// q = Σ b_j t^(-α_j/β), with t = z − a at a finite point and t = 1/z at ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpFactor {
    point: PointP1,
    ram: u32,
    monos: Vec<Monomial>,
}

impl ExpFactor {
    /// The tame factor q = 0.
    pub fn tame(point: PointP1) -> ExpFactor {
        ExpFactor {
            point,
            ram: 1,
            monos: Vec::new(),
        }
    }

    /// Builds a factor from numerators over a common denominator `denom`:
    /// merges equal exponents, drops zero coefficients, reduces the
    /// denominator and sorts.
    pub fn normalize(point: PointP1, denom: u32, raw: Vec<(u32, CycNum)>) -> Result<ExpFactor> {
        if denom == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mut merged: Vec<(u32, CycNum)> = Vec::new();
        for (a, c) in raw {
            if a == 0 {
                return Err(Error::InvalidInput("exponent must be nonzero".into()));
            }
            match merged.iter_mut().find(|(b, _)| *b == a) {
                Some(slot) => slot.1 = slot.1.checked_add(&c)?,
                None => merged.push((a, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        if merged.is_empty() {
            return Ok(ExpFactor::tame(point));
        }
        let g = merged.iter().fold(denom, |g, (a, _)| g.gcd(a));
        let mut monos: Vec<Monomial> = merged
            .into_iter()
            .map(|(a, c)| Monomial {
                alpha: a / g,
                coeff: c,
            })
            .collect();
        monos.sort_by(|x, y| y.alpha.cmp(&x.alpha));
        Ok(ExpFactor {
            point,
            ram: denom / g,
            monos,
        })
    }

    /// Builds a factor from `(exponent, coeff)` pairs, exponent meaning
    /// t^(-exponent); exponents must be positive.
    pub fn from_terms(point: PointP1, terms: Vec<(BigRat, CycNum)>) -> Result<ExpFactor> {
        let mut denom = num_bigint::BigInt::one();
        for (e, _) in &terms {
            if e <= &BigRat::zero() {
                return Err(Error::InvalidInput(format!("exponent {} is not positive", e)));
            }
            denom = denom.lcm(e.denom());
        }
        let d: u32 = u32::try_from(denom)
            .map_err(|_| Error::InvalidInput("denominator too large".into()))?;
        let mut raw = Vec::new();
        for (e, c) in terms {
            let n = e * BigRat::from_integer(d.into());
            let n: u32 = u32::try_from(n.to_integer())
                .map_err(|_| Error::InvalidInput("exponent too large".into()))?;
            raw.push((n, c));
        }
        if d > crate::MAX_ORDER {
            return Err(Error::OrderTooLarge(d as u64));
        }
        ExpFactor::normalize(point, d, raw)
    }

    pub fn point(&self) -> &PointP1 {
        &self.point
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    pub fn is_tame(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn irregularity(&self) -> u32 {
        self.monos.first().map_or(0, |m| m.alpha)
    }

    pub fn slope(&self) -> BigRat {
        rat(self.irregularity() as i64, self.ram as i64)
    }

    /// (ram, irregularity, slope).
    pub fn invariants(&self) -> (u32, u32, BigRat) {
        (self.ram, self.irregularity(), self.slope())
    }

    /// Exponents α_j/β as rationals, leading first.
    pub fn exponents(&self) -> Vec<BigRat> {
        self.monos
            .iter()
            .map(|m| rat(m.alpha as i64, self.ram as i64))
            .collect()
    }

    /// Coefficient of the monomial t^(-e), zero if absent.
    pub fn coeff_at(&self, e: &BigRat) -> CycNum {
        for m in &self.monos {
            if rat(m.alpha as i64, self.ram as i64) == *e {
                return m.coeff.clone();
            }
        }
        CycNum::zero()
    }

    /// The same factor moved to another point (coefficients untouched).
    pub fn with_point(&self, point: PointP1) -> ExpFactor {
        ExpFactor {
            point,
            ram: self.ram,
            monos: self.monos.clone(),
        }
    }

    /// The factor made of the monomials with exponent in the given range test.
    pub fn filter(&self, keep: impl Fn(&BigRat) -> bool) -> ExpFactor {
        let raw = self
            .monos
            .iter()
            .filter(|m| keep(&rat(m.alpha as i64, self.ram as i64)))
            .map(|m| (m.alpha, m.coeff.clone()))
            .collect();
        ExpFactor::normalize(self.point.clone(), self.ram, raw).expect("subset of a valid factor")
    }

    /// Sum of two factors at the same point.
    pub fn add(&self, other: &ExpFactor) -> Result<ExpFactor> {
        if self.point != other.point {
            return Err(Error::DifferentPoints);
        }
        let l = self.ram.lcm(&other.ram);
        let mut raw = Vec::new();
        for m in &self.monos {
            raw.push((m.alpha * (l / self.ram), m.coeff.clone()));
        }
        for m in &other.monos {
            raw.push((m.alpha * (l / other.ram), m.coeff.clone()));
        }
        ExpFactor::normalize(self.point.clone(), l, raw)
    }

    pub fn map_coeffs(&self, f: impl Fn(u32, &CycNum) -> Result<CycNum>) -> Result<ExpFactor> {
        let raw = self
            .monos
            .iter()
            .map(|m| Ok((m.alpha, f(m.alpha, &m.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        ExpFactor::normalize(self.point.clone(), self.ram, raw)
    }

    /// Conjugate i multiplies b_j by ζ_β^(−i·α_j); returns all β of them.
    pub fn galois_conjugates(&self) -> Vec<ExpFactor> {
        (0..self.ram)
            .map(|i| self.conjugate(i).expect("conjugate within the order cap"))
            .collect()
    }

    pub fn conjugate(&self, i: u32) -> Result<ExpFactor> {
        if i == 0 {
            return Ok(self.clone());
        }
        let beta = self.ram;
        let monos = self
            .monos
            .iter()
            .map(|m| {
                let w = CycNum::try_root_of_unity(beta, -((i as i64) * m.alpha as i64))?;
                Ok(Monomial {
                    alpha: m.alpha,
                    coeff: m.coeff.checked_mul(&w)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpFactor {
            point: self.point.clone(),
            ram: beta,
            monos,
        })
    }

    fn order_key(&self) -> Vec<(u32, &CycNum)> {
        self.monos.iter().map(|m| (m.alpha, &m.coeff)).collect()
    }

    /// Writes the factor as a q-string of the input language.
    pub fn to_q_string(&self) -> String {
        if self.monos.is_empty() {
            return String::from("0");
        }
        let finite = !self.point.is_infinity();
        let mut out = String::new();
        for (idx, m) in self.monos.iter().enumerate() {
            let e = rat(m.alpha as i64, self.ram as i64);
            let z = if finite {
                format!("z^(-{})", e)
            } else if e.is_one() {
                String::from("z")
            } else if e.is_integer() {
                format!("z^{}", e)
            } else {
                format!("z^({})", e)
            };
            let c = format!("{}", m.coeff);
            let single = !c[1..].contains([' ']);
            let (neg, body) = if single && c.starts_with('-') {
                (true, &c[1..])
            } else {
                (false, c.as_str())
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if body == "1" {
                out.push_str(&z);
            } else if single {
                out.push_str(body);
                out.push('*');
                out.push_str(&z);
            } else {
                out.push('(');
                out.push_str(body);
                out.push_str(")*");
                out.push_str(&z);
            }
        }
        out
    }
}

impl fmt::Display for ExpFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>_{}", self.to_q_string(), self.point)
    }
}

/// A Galois orbit ⟨q⟩ with a canonical representative.
#[derive(Clone, Debug)]
pub struct Circle {
    rep: ExpFactor,
}

impl Circle {
    pub fn new(q: &ExpFactor) -> Circle {
        let conj = q.galois_conjugates();
        let rep = conj
            .into_iter()
            .min_by(|a, b| a.order_key().cmp(&b.order_key()))
            .expect("at least one conjugate");
        Circle { rep }
    }

    pub fn tame(point: PointP1) -> Circle {
        Circle {
            rep: ExpFactor::tame(point),
        }
    }

    pub fn rep(&self) -> &ExpFactor {
        &self.rep
    }

    pub fn point(&self) -> &PointP1 {
        self.rep.point()
    }

    pub fn ram(&self) -> u32 {
        self.rep.ram()
    }

    pub fn irregularity(&self) -> u32 {
        self.rep.irregularity()
    }

    pub fn slope(&self) -> BigRat {
        self.rep.slope()
    }

    pub fn is_tame(&self) -> bool {
        self.rep.is_tame()
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

pub fn circle_of(q: &ExpFactor) -> Circle {
    Circle::new(q)
}

/// Orbit equality by comparing the full conjugate sets.
pub fn circle_eq(c1: &Circle, c2: &Circle) -> bool {
    let (a, b) = (c1.rep(), c2.rep());
    if a.point() != b.point() || a.ram() != b.ram() || a.monomials().len() != b.monomials().len() {
        return false;
    }
    let ca = a.galois_conjugates();
    let cb = b.galois_conjugates();
    ca.iter().all(|x| cb.contains(x)) && cb.iter().all(|x| ca.contains(x))
}

impl PartialEq for Circle {
    fn eq(&self, other: &Circle) -> bool {
        circle_eq(self, other)
    }
}

impl Eq for Circle {}

fn same_exponent(a: u32, beta: u32, b: u32, beta2: u32) -> bool {
    (a as u64) * (beta2 as u64) == (b as u64) * (beta as u64)
}

fn prefix_match(q: &ExpFactor, p: &ExpFactor) -> usize {
    q.monomials()
        .iter()
        .zip(p.monomials())
        .take_while(|(x, y)| {
            same_exponent(x.alpha, q.ram(), y.alpha, p.ram()) && x.coeff == y.coeff
        })
        .count()
}

/// Length r of the common part of q and q', and a conjugate of q' whose
/// first r monomials agree with those of q.
pub fn common_part_index(q: &ExpFactor, q2: &ExpFactor) -> Result<(usize, ExpFactor)> {
    if q.point() != q2.point() {
        return Err(Error::DifferentPoints);
    }
    let mut best = (0usize, q2.clone());
    for c in q2.galois_conjugates() {
        let r = prefix_match(q, &c);
        if r > best.0 {
            best = (r, c);
        }
    }
    Ok(best)
}

/// Slope of q_i − q'_j over a common denominator; zero difference has slope 0.
fn difference_slope(a: &ExpFactor, b: &ExpFactor) -> BigRat {
    let l = a.ram().lcm(&b.ram());
    let mut terms: Vec<(u32, CycNum)> = Vec::new();
    for m in a.monomials() {
        terms.push((m.alpha * (l / a.ram()), m.coeff.clone()));
    }
    for m in b.monomials() {
        let e = m.alpha * (l / b.ram());
        match terms.iter_mut().find(|(x, _)| *x == e) {
            Some(slot) => slot.1 = &slot.1 - &m.coeff,
            None => terms.push((e, -&m.coeff)),
        }
    }
    let top = terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, _)| *e)
        .max()
        .unwrap_or(0);
    rat(top as i64, l as i64)
}

/// Irr of Hom(⟨q⟩, ⟨q'⟩): the sum of slope(q_i − q'_j) over all β₁β₂ pairs.
pub fn irr_hom_bruteforce(c1: &Circle, c2: &Circle) -> Result<i64> {
    if c1.point() != c2.point() {
        return Err(Error::DifferentPoints);
    }
    let mut total = BigRat::zero();
    let ca = c1.rep().galois_conjugates();
    let cb = c2.rep().galois_conjugates();
    for a in &ca {
        for b in &cb {
            total += difference_slope(a, b);
        }
    }
    if !total.is_integer() {
        return Err(Error::NonInteger(format!("{}", total)));
    }
    i64::try_from(total.to_integer()).map_err(|_| Error::NonInteger("overflow".into()))
}

/// Rank β₁β₂ of Hom(⟨q⟩, ⟨q'⟩). Also checks that the differences split
/// into Galois orbits whose multiplicities are whole.
pub fn hom_rank(c1: &Circle, c2: &Circle) -> Result<u32> {
    if c1.point() != c2.point() {
        return Err(Error::DifferentPoints);
    }
    let mut diffs: Vec<ExpFactor> = Vec::new();
    for a in c1.rep().galois_conjugates() {
        for b in c2.rep().galois_conjugates() {
            let neg = b.map_coeffs(|_, c| Ok(-c))?;
            diffs.push(a.add(&neg)?);
        }
    }
    let mut seen = alloc::vec![false; diffs.len()];
    let mut total = 0u32;
    for i in 0..diffs.len() {
        if seen[i] {
            continue;
        }
        let orbit = diffs[i].galois_conjugates();
        let rho = diffs[i].ram();
        let mut count = 0u32;
        for (j, d) in diffs.iter().enumerate() {
            if !seen[j] && orbit.contains(d) {
                seen[j] = true;
                count += 1;
            }
        }
        if count % rho != 0 {
            return Err(Error::NonInteger(format!("{}/{}", count, rho)));
        }
        total += count;
    }
    let expected = c1.ram() * c2.ram();
    if total != expected {
        return Err(Error::NonInteger(format!("{} leaves, expected {}", total, expected)));
    }
    Ok(expected)
}

fn loop_count(q: &ExpFactor) -> i64 {
    let beta = q.ram() as i64;
    let mut g_prev = beta;
    let mut total = 0i64;
    for m in q.monomials() {
        let g = g_prev.gcd(&(m.alpha as i64));
        total += (g_prev - g) * m.alpha as i64;
        g_prev = g;
    }
    total - beta * beta + 1
}

/// The closed-form count of edges (or loops when the circles coincide)
/// between two circles at the same point.
pub fn b_infinity_gcd(c1: &Circle, c2: &Circle) -> Result<i64> {
    if c1.point() != c2.point() {
        return Err(Error::DifferentPoints);
    }
    if c1 == c2 {
        return Ok(loop_count(c1.rep()));
    }
    let (r, aligned) = common_part_index(c1.rep(), c2.rep())?;
    let (mut q, mut p) = (c1.rep().clone(), aligned);
    let diff_slope = |f: &ExpFactor| -> BigRat {
        f.monomials()
            .get(r)
            .map_or(BigRat::zero(), |m| rat(m.alpha as i64, f.ram() as i64))
    };
    if diff_slope(&q) < diff_slope(&p) {
        core::mem::swap(&mut q, &mut p);
    }
    let beta = q.ram() as i64;
    let beta2 = p.ram() as i64;
    let alpha_at = |k: usize| q.monomials().get(k).map_or(0, |m| m.alpha as i64);
    let mut g_prev = beta2;
    let mut total = 0i64;
    for k in 0..r {
        let g = g_prev.gcd(&(p.monomials()[k].alpha as i64));
        total += (g_prev - g) * alpha_at(k);
        g_prev = g;
    }
    total += g_prev * alpha_at(r);
    Ok(total - beta * beta2)
}
