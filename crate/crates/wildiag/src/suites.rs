//! Randomized property suites behind `wildiag check` and the acceptance run.

use num_complex::Complex64;
use num_traits::One;
use wildiag_core::{
    b_general, b_infinity, b_infinity_gcd, chain_form, fourier_formal, fourier_rank,
    full_diagram, irr_hom_bruteforce, numeric_fourier, rat, BigRat, Circle, CycNum,
    Diagram, ExpFactor, JordanClass, MarkingStrategy, ModifiedFormalData, NumFactor, PointP1,
    TransformedData, TOLERANCE,
};

use crate::gen;

/// Outcome of one suite: counts plus the first few failure messages.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < 20 {
            self.failures.push(msg);
        } else if self.failures.len() == 20 {
            self.failures.push("...".into());
        }
    }
}

/// Stream seed per suite so that suites do not share random draws.
fn stream(seed: u64, k: u64) -> gen::Rng8 {
    gen::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k))
}

/// Closed form against brute force on circle pairs at ∞.
pub fn closed_form(cases: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("closed-form vs brute force");
    let mut r = stream(seed, 6);
    for _ in 0..cases {
        let (c1, c2) = gen::circle_pair(&mut r, 4, 8);
        rep.cases += 1;
        let brute = match irr_hom_bruteforce(&c1, &c2) {
            Ok(a) => a,
            Err(e) => {
                rep.fail(format!("{} {}: {}", c1, c2, e));
                continue;
            }
        };
        let (b1, b2) = (c1.ram() as i64, c2.ram() as i64);
        let expected = if c1 == c2 { brute - b1 * b1 + 1 } else { brute - b1 * b2 };
        match b_infinity_gcd(&c1, &c2) {
            Ok(v) if v == expected => {}
            Ok(v) => rep.fail(format!("{} {}: gcd {} brute {}", c1, c2, v, expected)),
            Err(e) => rep.fail(format!("{} {}: {}", c1, c2, e)),
        }
    }
    rep
}

/// B_ii is even, at ∞ and at finite points.
pub fn evenness(cases: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("even loops");
    let mut r = stream(seed, 7);
    for k in 0..cases {
        let point = if k % 2 == 0 {
            PointP1::Infinity
        } else {
            PointP1::Finite(gen::coeff(&mut r))
        };
        let c = gen::circle(&mut r, point, 4, 8);
        rep.cases += 1;
        let checks = [("b_infinity", b_infinity(&c, &c)), ("b_general", b_general(&c, &c))];
        for (name, v) in checks {
            match v {
                Ok(v) if v % 2 == 0 => {}
                Ok(v) => rep.fail(format!("{} {}: odd loop count {}", name, c, v)),
                Err(e) => rep.fail(format!("{} {}: {}", name, c, e)),
            }
        }
    }
    rep
}

/// Diagram of transformed data with every edge count taken from the
/// numeric coefficients, ignoring exact transforms.
pub fn numeric_diagram(td: &TransformedData) -> wildiag_core::Result<Diagram> {
    let mut stripped = td.clone();
    for e in &mut stripped.entries {
        e.skeleton.exact = None;
    }
    stripped.diagram(true)
}

fn same_shape(a: &Diagram, b: &Diagram) -> Result<(), String> {
    if a.nodes.len() != b.nodes.len() {
        return Err(format!("{} nodes vs {}", a.nodes.len(), b.nodes.len()));
    }
    if a.dim_vector() != b.dim_vector() {
        return Err(format!("dims {:?} vs {:?}", a.dim_vector(), b.dim_vector()));
    }
    for (x, y) in a.nodes.iter().zip(&b.nodes) {
        if x.kind != y.kind {
            return Err(format!("node {} kind {:?} vs {:?}", x.id, x.kind, y.kind));
        }
    }
    if a.b != b.b {
        return Err(format!("B {:?} vs {:?}", a.b, b.b));
    }
    Ok(())
}

/// Fourier invariance and rank consistency over the same random data.
/// Data whose transform is not compatible is counted as skipped.
pub fn fourier(cases: usize, seed: u64) -> (SuiteReport, SuiteReport) {
    let mut inv = SuiteReport::new("Fourier invariance");
    let mut rk = SuiteReport::new("Fourier rank");
    let mut r = stream(seed, 8);
    let mut attempts = 0;
    while inv.cases < cases && attempts < 20 * cases {
        attempts += 1;
        let m = gen::modified_data(&mut r);
        let td = match fourier_formal(&m) {
            Ok(td) => td,
            Err(wildiag_core::Error::Incompatible(_)) => {
                inv.skipped += 1;
                rk.skipped += 1;
                continue;
            }
            Err(e) => {
                inv.cases += 1;
                inv.fail(format!("{}: {}", crate::dsl::print_formal(&unmod(&m)), e));
                continue;
            }
        };
        inv.cases += 1;
        rk.cases += 1;
        let d0 = match full_diagram(&m, &MarkingStrategy::Default) {
            Ok(d) => d,
            Err(e) => {
                inv.fail(format!("source diagram: {}", e));
                continue;
            }
        };
        match numeric_diagram(&td).map_err(|e| e.to_string()).and_then(|d| same_shape(&d0, &d)) {
            Ok(()) => {}
            Err(e) => inv.fail(format!("{}{}", crate::dsl::print_formal(&unmod(&m)), e)),
        }
        if fourier_rank(&m) != td.rank() {
            rk.fail(format!(
                "{}predicted {} got {}",
                crate::dsl::print_formal(&unmod(&m)),
                fourier_rank(&m),
                td.rank()
            ));
        }
    }
    (inv, rk)
}

/// Modified data printed as if it were unmodified, for failure messages.
fn unmod(m: &ModifiedFormalData) -> wildiag_core::FormalData {
    wildiag_core::FormalData(m.0.clone())
}

/// Orbit dimension against the leg form, and child/parent round trips.
pub fn jordan(cases: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("conjugacy classes");
    let mut r = stream(seed, 10);
    for k in 0..cases {
        let n = 1 + (k % 6) as u32;
        let c = gen::jordan_class(&mut r, n);
        rep.cases += 1;
        match c.leg_of(&c.default_marking(true)) {
            Ok(leg) => {
                let form = 2 * (n as i64) * (n as i64) - chain_form(n, &leg);
                if c.class_dim() != form {
                    rep.fail(format!("{}: class_dim {} leg {}", c, c.class_dim(), form));
                }
            }
            Err(e) => rep.fail(format!("{}: {}", c, e)),
        }
        let (m, child) = c.child_class();
        match JordanClass::parent_class(&child, n) {
            Ok(p) if p == c => {}
            Ok(p) => rep.fail(format!("{}: parent of child is {}", c, p)),
            Err(e) => rep.fail(format!("{}: {}", c, e)),
        }
        let ones = child.blocks_of(&CycNum::one()).len() as u32;
        let grow = ones + (k as u32 % 3);
        match JordanClass::parent_class(&child, m + grow) {
            Ok(p) => {
                if p.child_class() != (m, child.clone()) {
                    rep.fail(format!("{} in GL_{}: child of parent differs", child, m + grow));
                }
            }
            Err(e) => rep.fail(format!("{}: {}", child, e)),
        }
    }
    rep
}

/// (ram, irregularity) of the Legendre image predicted from the source.
fn table_image(c: &Circle) -> (u32, u32) {
    let q = c.rep();
    let (alpha, beta) = (q.irregularity(), q.ram());
    let one = BigRat::one();
    match q.point() {
        PointP1::Finite(a) if q.is_tame() => (1, if a.is_zero() { 0 } else { 1 }),
        PointP1::Finite(a) => {
            let n = alpha + beta;
            (n, if a.is_zero() { alpha } else { n })
        }
        PointP1::Infinity if c.slope() > one => (alpha - beta, alpha),
        PointP1::Infinity => {
            let rest = q.filter(|e| *e < one);
            if rest.is_tame() {
                (1, 0)
            } else {
                let (a, b) = (rest.irregularity(), rest.ram());
                (b - a, a)
            }
        }
    }
}

/// Type-table laws on random circles, checked on both the skeleton and
/// the numeric oracle.
pub fn legendre(cases: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("Legendre laws");
    let mut r = stream(seed, 11);
    for _ in 0..cases {
        let c = gen::typed_circle(&mut r);
        rep.cases += 1;
        let (ram, irr) = table_image(&c);
        match wildiag_core::legendre_skeleton(&c) {
            Ok(sk) => {
                let got = (sk.ram, sk.irregularity);
                let num = (sk.numeric.ram, sk.numeric.irregularity());
                if got != (ram, irr) || num != (ram, irr) {
                    rep.fail(format!(
                        "{}: table ({}, {}) skeleton {:?} numeric {:?}",
                        c, ram, irr, got, num
                    ));
                }
                if sk.slope() != rat(irr as i64, ram as i64) {
                    rep.fail(format!("{}: slope {}", c, sk.slope()));
                }
            }
            Err(e) => rep.fail(format!("{}: {}", c, e)),
        }
    }
    rep
}

/// Relative error of the leading Legendre coefficient of z^{5/2} against
/// (−3/5)(2/5)^{2/3}, minimized over the Galois conjugates.
pub fn five_halves_error() -> f64 {
    let q = ExpFactor::from_terms(PointP1::Infinity, vec![(rat(5, 2), CycNum::one())])
        .expect("valid factor");
    let expected = -0.6 * 0.4f64.powf(2.0 / 3.0);
    let g = match numeric_fourier(&NumFactor::from_exact(&q), TOLERANCE) {
        Ok(g) => g,
        Err(_) => return f64::INFINITY,
    };
    let lead = rat(5, 3);
    g.conjugates()
        .iter()
        .map(|h| (h.coeff_at(&lead) - Complex64::new(expected, 0.0)).norm() / expected.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Independent check that the rank formula agrees with the known example:
/// ⟨z⟩ + ⟨2z⟩ at ∞ and ⟨3/z⟩ at 0.
pub fn painleve_three_rank() -> (u64, u64) {
    let src = "at inf { circle mult=1 q=\"z\"; circle mult=1 q=\"2*z\"; }\nat 0 { circle mult=1 q=\"3*z^(-1)\"; }\n";
    let m = crate::dsl::parse_modified(src).expect("valid source");
    let td = fourier_formal(&m).expect("compatible transform");
    (fourier_rank(&m), td.rank())
}

pub fn run_all(cases: usize, seed: u64) -> Vec<SuiteReport> {
    let (inv, rk) = fourier(cases, seed);
    vec![
        closed_form(cases, seed),
        evenness(cases, seed),
        inv,
        rk,
        jordan(cases, seed),
        legendre(cases, seed),
    ]
}
