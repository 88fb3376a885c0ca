//! Exact arithmetic in cyclotomic fields.
//!
//! An element of ℚ(ζ_N) is stored as a polynomial of degree < φ(N) reduced
//! modulo Φ_N, with ζ_N = exp(2πi/N). Binary operations embed both operands
//! into ℚ(ζ_lcm).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type BigRat = BigRational;

/// Largest cyclotomic order accepted by any operation.
pub const MAX_ORDER: u32 = 360;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out = out / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        out = out / m * (m - 1);
    }
    out
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn lcm_checked(a: u32, b: u32) -> Result<u32> {
    let l = (a as u64).lcm(&(b as u64));
    if l > MAX_ORDER as u64 {
        return Err(Error::OrderTooLarge(l));
    }
    Ok(l as u32)
}

fn check_order(n: u64) -> Result<u32> {
    if n == 0 || n > MAX_ORDER as u64 {
        return Err(Error::OrderTooLarge(n));
    }
    Ok(n as u32)
}

/// Φ_N as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic order must be positive");
    let divs = divisors(n);
    let mut table: Vec<(u32, Vec<i64>)> = Vec::new();
    for &d in &divs {
        // x^d - 1
        let mut num = vec![0i64; d as usize + 1];
        num[0] = -1;
        num[d as usize] = 1;
        for (e, phi) in table.iter() {
            if d % e == 0 {
                num = int_exact_div(&num, phi);
            }
        }
        table.push((d, num));
    }
    table.pop().unwrap().1
}

fn int_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn reduce_mod(mut poly: Vec<BigRat>, phi: &[i64]) -> Vec<BigRat> {
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = core::mem::replace(&mut poly[i], BigRat::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    let t = &c * rat_int(pj);
                    poly[i - deg + j] -= t;
                }
            }
        }
        poly.truncate(deg);
    }
    while poly.len() < deg {
        poly.push(BigRat::zero());
    }
    poly
}

/// Element of ℚ(ζ_N).
#[derive(Clone, Debug)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<BigRat>,
}

impl CycNum {
    /// Builds an element from an arbitrary polynomial in ζ_N, reducing it.
    pub fn from_poly(order: u32, poly: Vec<BigRat>) -> Result<CycNum> {
        let order = check_order(order as u64)?;
        let phi = cyclotomic_polynomial(order);
        Ok(CycNum {
            order,
            coeffs: reduce_mod(poly, &phi),
        })
    }

    pub fn from_rat(r: BigRat) -> CycNum {
        CycNum {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(n: i64) -> CycNum {
        CycNum::from_rat(rat_int(n))
    }

    pub fn zero() -> CycNum {
        CycNum::from_int(0)
    }

    pub fn one() -> CycNum {
        CycNum::from_int(1)
    }

    /// ζ_N^k, reduced modulo Φ_N.
    pub fn root_of_unity(n: u32, k: i64) -> CycNum {
        Self::try_root_of_unity(n, k).expect("root of unity order exceeds the cap")
    }

    pub fn try_root_of_unity(n: u32, k: i64) -> Result<CycNum> {
        let n = check_order(n as u64)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![BigRat::zero(); e + 1];
        poly[e] = BigRat::one();
        CycNum::from_poly(n, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<BigRat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            let n = self.normalized();
            if n.order == 1 {
                Some(n.coeffs[0].clone())
            } else {
                None
            }
        }
    }

    /// Same number expressed in ℚ(ζ_M).
    pub fn embed(&self, m: u32) -> Result<CycNum> {
        if m == 0 || m % self.order != 0 {
            return Err(Error::OrderMismatch {
                from: self.order,
                to: m,
            });
        }
        let m = check_order(m as u64)?;
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![BigRat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        CycNum::from_poly(m, poly)
    }

    fn align(&self, other: &CycNum) -> Result<(CycNum, CycNum, u32)> {
        let l = lcm_checked(self.order, other.order)?;
        Ok((self.embed(l)?, other.embed(l)?, l))
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum> {
        let (a, b, l) = self.align(other)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        Ok(CycNum { order: l, coeffs })
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum> {
        if self.order == 1 {
            let r = &self.coeffs[0];
            return Ok(CycNum {
                order: other.order,
                coeffs: other.coeffs.iter().map(|c| c * r).collect(),
            });
        }
        if other.order == 1 {
            return other.checked_mul(self);
        }
        let (a, b, l) = self.align(other)?;
        let mut poly = vec![BigRat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycNum::from_poly(l, poly)
    }

    pub fn scale(&self, r: &BigRat) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm mod Φ_N.
    pub fn inverse(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(CycNum::from_rat(self.coeffs[0].recip()));
        }
        let phi: Vec<BigRat> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(rat_int)
            .collect();
        let a = poly_trim(self.coeffs.clone());
        // s*a + t*phi = g, track s only
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::<BigRat>::new(), vec![BigRat::one()]);
        while !(r1.is_empty()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let s: Vec<BigRat> = s0.into_iter().map(|x| x * &c).collect();
        CycNum::from_poly(self.order, s)
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum> {
        self.checked_mul(&other.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.checked_mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Complex value under ζ_N ↦ exp(2πi/N).
    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * core::f64::consts::PI * (k as f64) / (self.order as f64);
            z += Complex64::from_polar(rat_to_f64(c), ang);
        }
        z
    }

    /// Expresses the element in the smallest cyclotomic field containing it.
    pub fn normalized(&self) -> CycNum {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            return CycNum::from_rat(self.coeffs[0].clone());
        }
        for d in divisors(self.order) {
            if d == self.order {
                break;
            }
            if d % 4 == 2 || d == 1 {
                continue;
            }
            if let Some(v) = self.restrict_to(d) {
                return v;
            }
        }
        self.clone()
    }

    /// Coordinates in ℚ(ζ_d) ⊂ ℚ(ζ_N), if the element lies there.
    fn restrict_to(&self, d: u32) -> Option<CycNum> {
        let n = self.order;
        let rows = self.coeffs.len();
        let cols = euler_phi(d) as usize;
        let step = n / d;
        let phi = cyclotomic_polynomial(n);
        let mut m: Vec<Vec<BigRat>> = vec![vec![BigRat::zero(); cols + 1]; rows];
        for k in 0..cols {
            let e = k * step as usize;
            let mut poly = vec![BigRat::zero(); e + 1];
            poly[e] = BigRat::one();
            let col = reduce_mod(poly, &phi);
            for (r, v) in col.into_iter().enumerate() {
                m[r][k] = v;
            }
        }
        for (r, v) in self.coeffs.iter().enumerate() {
            m[r][cols] = v.clone();
        }
        let sol = solve_linear(m, cols)?;
        Some(CycNum {
            order: d,
            coeffs: sol,
        })
    }

    /// ζ_M^j if this element is a root of unity times a rational, as (r, M, j).
    fn as_rational_times_root(&self) -> Option<(BigRat, u32, u32)> {
        let v = self.normalized();
        let n = v.order;
        let big = if n % 2 == 1 { 2 * n } else { n };
        if big > MAX_ORDER {
            return None;
        }
        let w = v.embed(big).ok()?;
        for j in 0..big {
            let t = w
                .checked_mul(&CycNum::root_of_unity(big, -(j as i64)))
                .ok()?;
            if let Some(r) = t.as_rational_fast() {
                if r.is_positive() {
                    return Some((r, big, j));
                }
            }
        }
        None
    }

    fn as_rational_fast(&self) -> Option<BigRat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// An exact k-th root when one exists in a cyclotomic field within the cap:
    /// positive rational perfect powers times roots of unity.
    pub fn try_root(&self, k: u32) -> Option<CycNum> {
        if k == 1 {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(CycNum::zero());
        }
        let (r, m, j) = self.as_rational_times_root()?;
        let rr = rational_root(&r, k)?;
        let mk = m.checked_mul(k)?;
        if mk > MAX_ORDER {
            return None;
        }
        let z = CycNum::root_of_unity(mk, j as i64);
        Some(z.scale(&rr).normalized())
    }
}

fn rational_root(r: &BigRat, k: u32) -> Option<BigRat> {
    let n = r.numer().nth_root(k);
    let d = r.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *r.numer()
        && num_traits::pow(d.clone(), k as usize) == *r.denom()
    {
        Some(BigRat::new(n, d))
    } else {
        None
    }
}

pub fn rat_to_f64(r: &BigRat) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale down huge values
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(900);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

fn solve_linear(mut m: Vec<Vec<BigRat>>, cols: usize) -> Option<Vec<BigRat>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][cols].clone();
    }
    Some(sol)
}

fn poly_trim(mut p: Vec<BigRat>) -> Vec<BigRat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRat::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRat::zero);
            x - y
        })
        .collect();
    poly_trim(out)
}

fn poly_mul(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_divrem(a: &[BigRat], b: &[BigRat]) -> (Vec<BigRat>, Vec<BigRat>) {
    let mut rem = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![BigRat::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            rem[shift + j] -= t;
        }
        q[shift] = c;
        rem.pop();
        rem = poly_trim(rem);
    }
    (poly_trim(q), rem)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        match self.align(other) {
            Ok((a, b, _)) => a.coeffs == b.coeffs,
            Err(_) => self.normalized().coeffs == other.normalized().coeffs
                && self.normalized().order == other.normalized().order,
        }
    }
}

impl Eq for CycNum {}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &CycNum) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: minimal field order first, then coefficients.
impl Ord for CycNum {
    fn cmp(&self, other: &CycNum) -> Ordering {
        let a = self.normalized();
        let b = other.normalized();
        a.order
            .cmp(&b.order)
            .then_with(|| a.coeffs.cmp(&b.coeffs))
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.checked_add(rhs).expect("cyclotomic order cap exceeded")
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.checked_sub(rhs).expect("cyclotomic order cap exceeded")
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.checked_mul(rhs).expect("cyclotomic order cap exceeded")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> CycNum {
        CycNum::from_int(n)
    }
}

impl From<BigRat> for CycNum {
    fn from(r: BigRat) -> CycNum {
        CycNum::from_rat(r)
    }
}

/// Prints in minimal order as a sum of rational multiples of `zeta(N)^k`
/// (`i` for N = 4), a form the input language reads back.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.normalized();
        let mut first = true;
        for (k, c) in v.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let gen = if v.order == 4 {
                alloc::string::String::from("i")
            } else {
                alloc::format!("zeta({})", v.order)
            };
            let root = match k {
                0 => None,
                1 => Some(gen),
                _ => Some(alloc::format!("{}^{}", gen, k)),
            };
            match root {
                None => write!(f, "{}", a)?,
                Some(r) if a.is_one() => f.write_str(&r)?,
                Some(r) => write!(f, "{}*{}", a, r)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
