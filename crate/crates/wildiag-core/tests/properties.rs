use proptest::prelude::*;
use wildiag_core::*;

fn cyc(c: &[i64]) -> CycNum {
    c.iter().enumerate().fold(CycNum::zero(), |acc, (k, &x)| {
        &acc + &CycNum::root_of_unity(12, k as i64).scale(&rat(x, 1))
    })
}

fn arb_cyc() -> impl Strategy<Value = CycNum> {
    prop::collection::vec(-3i64..=3, 4).prop_map(|v| cyc(&v))
}

fn arb_nonzero() -> impl Strategy<Value = CycNum> {
    arb_cyc().prop_filter("nonzero", |c| !c.is_zero())
}

fn arb_factor(point: PointP1, max_beta: u32, max_irr: u32) -> impl Strategy<Value = ExpFactor> {
    (
        1..=max_beta,
        prop::collection::btree_set(1..=max_irr, 1..=3),
        prop::collection::vec(arb_nonzero(), 3),
    )
        .prop_map(move |(beta, alphas, coeffs)| {
            let terms = alphas
                .into_iter()
                .zip(coeffs)
                .map(|(a, c)| (rat(a as i64, beta as i64), c))
                .collect();
            ExpFactor::from_terms(point.clone(), terms).unwrap()
        })
}

fn arb_circle_inf() -> impl Strategy<Value = Circle> {
    arb_factor(PointP1::Infinity, 4, 8).prop_map(|q| circle_of(&q))
}

fn arb_class(max_n: u32) -> impl Strategy<Value = JordanClass> {
    prop::collection::vec((0usize..4, 1u32..=3), 0..=max_n as usize).prop_map(move |blocks| {
        let evs = [1i64, -1, 2, 3];
        let mut slots: Vec<Vec<u32>> = vec![Vec::new(); 4];
        let mut total = 0;
        for (k, b) in blocks {
            if total + b <= max_n {
                slots[k].push(b);
                total += b;
            }
        }
        JordanClass::new(
            slots
                .into_iter()
                .enumerate()
                .map(|(k, s)| (CycNum::from_int(evs[k]), s))
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycNum::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inverse().unwrap(), CycNum::one());
        }
    }

    #[test]
    fn roots_of_unity(n in 1u32..=60, k in -70i64..70) {
        let z = CycNum::root_of_unity(n, k);
        prop_assert_eq!(z.pow(n as i64).unwrap(), CycNum::one());
        let zeta = CycNum::root_of_unity(n, 1);
        let phi = cyclotomic_polynomial(n);
        let mut acc = CycNum::zero();
        for (i, c) in phi.iter().enumerate() {
            acc = &acc + &zeta.pow(i as i64).unwrap().scale(&rat(*c, 1));
        }
        prop_assert!(acc.is_zero());
    }

    #[test]
    fn display_is_stable(a in arb_cyc()) {
        prop_assert_eq!(a.normalized().to_string(), a.to_string());
    }

    #[test]
    fn circle_equality_is_an_equivalence(q in arb_factor(PointP1::Infinity, 4, 8), k in 0u32..4) {
        let c = circle_of(&q);
        let d = circle_of(&q.conjugate(k % q.ram()).unwrap());
        prop_assert!(circle_eq(&c, &c));
        prop_assert!(circle_eq(&c, &d) && circle_eq(&d, &c));
        prop_assert_eq!(c.rep(), d.rep());
    }

    #[test]
    fn closed_form_matches_brute_force(c1 in arb_circle_inf(), c2 in arb_circle_inf()) {
        let brute = irr_hom_bruteforce(&c1, &c2).unwrap();
        let (b1, b2) = (c1.ram() as i64, c2.ram() as i64);
        let want = if c1 == c2 { brute - b1 * b1 + 1 } else { brute - b1 * b2 };
        prop_assert_eq!(b_infinity_gcd(&c1, &c2).unwrap(), want);
        prop_assert_eq!(b_infinity(&c1, &c2).unwrap(), want);
    }

    #[test]
    fn edge_counts_are_symmetric(c1 in arb_circle_inf(), q in arb_factor(PointP1::Finite(CycNum::zero()), 3, 4)) {
        let c2 = circle_of(&q);
        prop_assert_eq!(b_general(&c1, &c2).unwrap(), b_general(&c2, &c1).unwrap());
        prop_assert_eq!(b_general(&c2, &c2).unwrap() % 2, 0);
        prop_assert_eq!(b_general(&c1, &c1).unwrap(), b_infinity(&c1, &c1).unwrap());
    }

    #[test]
    fn class_identities(c in arb_class(6)) {
        let n = c.size();
        let leg = c.leg_of(&c.default_marking(true)).unwrap();
        prop_assert_eq!(c.class_dim(), 2 * (n as i64).pow(2) - chain_form(n, &leg));
        prop_assert!(leg.dims.windows(2).all(|w| w[0] >= w[1]));
        if let Some(&d1) = leg.dims.first() {
            prop_assert_eq!(d1, c.class_rank_minus(&c.default_marking(true).0[0]));
        }
        let (m, child) = c.child_class();
        prop_assert_eq!(m, c.class_rank_minus(&CycNum::one()));
        prop_assert_eq!(JordanClass::parent_class(&child, n).unwrap(), c);
    }

    #[test]
    fn homography_round_trip(a in arb_nonzero(), b in arb_cyc(), c in arb_cyc(), x in arb_cyc()) {
        let d = (&CycNum::one() + &(&b * &c)).checked_div(&a).unwrap();
        let m = SL2Matrix::new(a, b, c, d).unwrap();
        let p = FourierSphereCoeff::Finite(x);
        let there = homography(&p, &m).unwrap();
        prop_assert_eq!(homography(&there, &m.inverse()).unwrap(), p);
        let f = factor_sl2(&m).unwrap();
        prop_assert_eq!(compose(&f).unwrap(), m);
    }

    #[test]
    fn sends_to_finite_criterion(b2 in -2i64..=2, b1 in -2i64..=2, cc in 1i64..=3, bb in -2i64..=2) {
        let mut terms = vec![(rat(1, 2), CycNum::one())];
        if b2 != 0 { terms.push((rat(2, 1), CycNum::from_int(b2))); }
        if b1 != 0 { terms.push((rat(1, 1), CycNum::from_int(b1))); }
        let q = ExpFactor::from_terms(PointP1::Infinity, terms).unwrap();
        let c = CycNum::from_int(cc);
        let d = CycNum::from_int(2 * cc * b2);
        let m = if d.is_zero() {
            SL2Matrix::new(CycNum::from_int(bb), CycNum::from_rat(rat(-1, cc)), c, d).unwrap()
        } else {
            let b = CycNum::from_int(bb);
            let a = (&CycNum::one() + &(&b * &c)).checked_div(&d).unwrap();
            SL2Matrix::new(a, b, c, d).unwrap()
        };
        let lam = match slope2_coefficient(&circle_of(&q)) {
            FourierSphereCoeff::Finite(l) => l,
            FourierSphereCoeff::Infinity => unreachable!(),
        };
        prop_assert!((&(&m.c * &lam) + &m.d).is_zero());
        prop_assert!(sends_to_finite(&circle_of(&q), &m).unwrap().is_some());
        let shifted = SL2Matrix::new(m.a.clone(), &m.b + &m.a, m.c.clone(), &m.d + &m.c).unwrap();
        prop_assert!(sends_to_finite(&circle_of(&q), &shifted).unwrap().is_none());
    }

    #[test]
    fn numeric_support_is_predicted(q in arb_factor(PointP1::Infinity, 3, 6)) {
        let c = circle_of(&q);
        prop_assume!(c.slope() > rat(2, 1));
        let sk = legendre_skeleton(&c).unwrap();
        for e in sk.numeric.exponents() {
            prop_assert!(sk.support.contains(&e), "{} not in {:?}", e, sk.support);
        }
    }

    #[test]
    fn twists_keep_the_diagram(l1 in arb_nonzero(), l2 in arb_nonzero(), mu in arb_nonzero(), rho in -3i64..=3) {
        prop_assume!(l1 != l2);
        let at_inf = |l: &CycNum| {
            let q = ExpFactor::from_terms(PointP1::Infinity, vec![(rat(1, 1), l.clone())]).unwrap();
            LocalEntry::new(circle_of(&q), 1, JordanClass::identity(1)).unwrap()
        };
        let zero = PointP1::Finite(CycNum::zero());
        let pole = ExpFactor::from_terms(zero.clone(), vec![(rat(1, 1), mu)]).unwrap();
        let m = ModifiedFormalData::new(vec![
            (PointP1::Infinity, vec![at_inf(&l1), at_inf(&l2)]),
            (zero, vec![LocalEntry::new(circle_of(&pole), 1, JordanClass::identity(1)).unwrap()]),
        ]).unwrap();
        let d0 = full_diagram(&m, &MarkingStrategy::Default).unwrap();
        let t = apply_sl2(&m, &SL2Matrix::twist(CycNum::from_int(rho))).unwrap();
        prop_assert_eq!(t.diagram(true).unwrap().b, d0.b.clone());
        let s = apply_sl2(&m, &SL2Matrix::scaling(&CycNum::from_int(2)).unwrap()).unwrap();
        prop_assert_eq!(s.diagram(true).unwrap().b, d0.b);
    }

    #[test]
    fn modify_round_trip(c in arb_class(4), extra in 0u32..3) {
        let n = c.size() + extra;
        prop_assume!(n > 0);
        let padded = JordanClass::parent_class(&c.child_class().1, n);
        prop_assume!(padded.is_ok());
        let class = padded.unwrap();
        let p = PointP1::Finite(CycNum::one());
        let fd = FormalData::new(vec![
            (PointP1::Infinity, vec![LocalEntry::new(Circle::tame(PointP1::Infinity), n, JordanClass::identity(n)).unwrap()]),
            (p.clone(), vec![LocalEntry::new(Circle::tame(p), n, class).unwrap()]),
        ]).unwrap();
        let m = modify(&fd);
        prop_assert_eq!(unmodify(&m, n as u64).unwrap(), fd);
    }
}
