//! Randomized invariants across modules.

use cantor_spectra::dimgroup::{rational_member, torsion_quotient, RationalVerdict, SubgroupOfR};
use cantor_spectra::exactnum::{parse_element_in, FieldElement, NumberField};
use cantor_spectra::spectra::{decompose, suffix_criterion};
use cantor_spectra::tower::{build_tower, odometer_spec, sturmian_spec, Tower};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn sqrt5() -> NumberField {
    NumberField::quadratic(&BigInt::from(5)).unwrap()
}

fn elem(f: &NumberField, c: (i64, i64, i64)) -> FieldElement {
    let d = BigInt::from(c.2);
    FieldElement::new(f, vec![BigRational::new(BigInt::from(c.0), d.clone()), BigRational::new(BigInt::from(c.1), d)])
        .unwrap()
}

fn coords() -> impl Strategy<Value = (i64, i64, i64)> {
    (-50i64..50, -50i64..50, 1i64..20)
}

fn sturmian(cf: &[u64], levels: usize) -> Tower {
    build_tower(&sturmian_spec(cf).unwrap(), levels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_ring_laws(a in coords(), b in coords(), c in coords()) {
        let f = sqrt5();
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.inv().unwrap(), a.clone());
        }
    }

    #[test]
    fn exact_string_round_trips(a in coords()) {
        let f = sqrt5();
        let x = elem(&f, a);
        prop_assert_eq!(parse_element_in(&x.exact_string(), &f).unwrap(), x);
    }

    #[test]
    fn enclosure_agrees_with_exact_sign(a in coords(), bits in 8u32..80) {
        let f = sqrt5();
        let x = elem(&f, a);
        let e = x.enclose(bits);
        match x.cmp_elem(&FieldElement::zero(&f)) {
            std::cmp::Ordering::Greater => prop_assert!(e.hi().signum() > 0),
            std::cmp::Ordering::Less => prop_assert!(e.lo().signum() < 0),
            std::cmp::Ordering::Equal => prop_assert!(e.contains_zero()),
        }
        // floor is consistent with the enclosure
        let fl = BigRational::from_integer(x.floor());
        prop_assert!(e.hi().to_rational() >= fl);
        prop_assert!(e.lo().to_rational() < &fl + BigRational::one());
    }

    #[test]
    fn tower_height_identities(cf in prop::collection::vec(1u64..4, 1..4), levels in 3usize..9) {
        let t = sturmian(&cf, levels);
        for n in 2..=levels {
            prop_assert_eq!(t.matrix(n).unwrap().mul_vec(t.heights(n - 1).unwrap()), t.heights(n).unwrap().to_vec());
            for m in 1..n {
                prop_assert_eq!(t.products(n, m).unwrap().mul_vec(t.heights(m).unwrap()), t.heights(n).unwrap().to_vec());
            }
        }
    }

    #[test]
    fn entrance_times_cover_each_tower(cf in prop::collection::vec(1u64..3, 1..3)) {
        let t = sturmian(&cf, 4);
        let paths = t.paths(4).unwrap();
        for top in 0..t.vertex_count(4) {
            let hn = &t.heights(4).unwrap()[top];
            let mut times: Vec<BigInt> = paths
                .iter()
                .filter(|p| p.top == top)
                .map(|p| t.entrance_time(p).unwrap())
                .collect();
            times.sort();
            // times are distinct and at most the tower height
            prop_assert!(times.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(times.iter().all(|r| r <= hn && !r.is_negative()));
        }
    }

    #[test]
    fn decomposition_identity(a in coords(), m in 1usize..6) {
        let f = sqrt5();
        let alpha = elem(&f, a);
        let t = sturmian(&[1], 6);
        let d = decompose(&t, &alpha, m).unwrap();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for ((v, w), h) in d.v.iter().zip(&d.w).zip(t.heights(m).unwrap()) {
            prop_assert_eq!(&alpha.mul_int(h), &(v + &FieldElement::from_int(&f, w.clone())));
            let vh = v.sub_rational(&half);
            let vl = v.sub_rational(&-half.clone());
            prop_assert!(vh.cmp_elem(&FieldElement::zero(&f)).is_lt());
            prop_assert!(!vl.cmp_elem(&FieldElement::zero(&f)).is_lt());
        }
    }

    #[test]
    fn integer_alpha_has_zero_deltas(k in -5i64..6) {
        let t = sturmian(&[1, 2], 8);
        let alpha = FieldElement::from_int(&NumberField::rational(), k);
        let s = suffix_criterion(&t, &alpha, 7).unwrap();
        prop_assert!(s.exact_terms.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rational_member_matches_heights(base in 2u64..7, p in 1i64..30, q in 1i64..60) {
        let t = build_tower(&odometer_spec(&[base]).unwrap(), 12).unwrap();
        let (p, q) = (BigInt::from(p), BigInt::from(q));
        let g = p.gcd(&q);
        let (p, q) = (&p / &g, &q / &g);
        let first = (1..=12).find(|&k| t.heights(k).unwrap().iter().all(|h| (&p * h).is_multiple_of(&q)));
        let v = rational_member(&t, &p, &q, 64).unwrap();
        match v {
            RationalVerdict::MemberAtLevel { level } => prop_assert_eq!(Some(level), first),
            RationalVerdict::CertifiedNonMember { .. } => prop_assert_eq!(first, None),
            RationalVerdict::UnknownUpTo { .. } => prop_assert!(false, "odometers are periodic"),
        }
    }

    #[test]
    fn cyclic_rational_quotient(a in 1i64..200) {
        let q = NumberField::rational();
        let x = FieldElement::from_rational(&q, BigRational::new(BigInt::one(), BigInt::from(a)));
        let i = SubgroupOfR::generated_by(&q, &[x]).unwrap();
        let e = SubgroupOfR::generated_by(&q, &[]).unwrap();
        prop_assert!(i.contains_group(&e));
        let inv = torsion_quotient(&i, &e).unwrap();
        let expected: Vec<BigInt> = if a == 1 { vec![BigInt::one()] } else { vec![BigInt::from(a)] };
        prop_assert_eq!(inv.invariant_factors, expected);
        prop_assert!(inv.free_rank.is_zero());
    }
}
