use super::*;
use proptest::prelude::*;

/// Independent multiply oracle: schoolbook product of digit vectors, reduced
/// by repeatedly subtracting shifted copies of the modulus.
fn oracle_mul(spec: &FieldSpec, x: u32, y: u32) -> u32 {
    let p = spec.p() as i64;
    let n = spec.n() as usize;
    let dx = spec.digits(FieldElement(x));
    let dy = spec.digits(FieldElement(y));
    let mut prod = vec![0i64; 2 * n];
    for i in 0..n {
        for j in 0..n {
            prod[i + j] += dx[i] as i64 * dy[j] as i64;
        }
    }
    let m: Vec<i64> = spec.modulus().iter().map(|&c| c as i64).collect();
    for top in (n..2 * n).rev() {
        let t = prod[top].rem_euclid(p);
        for k in 0..=n {
            prod[top - n + k] -= t * m[k];
        }
    }
    let digits: Vec<u32> = prod[..n].iter().map(|v| v.rem_euclid(p) as u32).collect();
    spec.from_digits(&digits).rank()
}

fn small_fields() -> Vec<FieldSpec> {
    [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 2), (3, 4)]
        .into_iter()
        .map(|(p, n)| FieldSpec::new(p, n, None).unwrap())
        .collect()
}

#[test]
fn builds_gf8_from_classic_modulus() {
    let f = FieldSpec::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    assert_eq!(f.q(), 8);
    assert_eq!(f.modulus(), &[1, 1, 0, 1]);
}

#[test]
fn rejects_bad_inputs() {
    assert!(matches!(FieldSpec::new(2, 3, Some(&[1, 0, 0, 1])), Err(Error::ReducibleModulus(_))));
    assert!(matches!(FieldSpec::new(4, 1, None), Err(Error::NonPrimeCharacteristic(4))));
    assert!(matches!(FieldSpec::new(2, 3, Some(&[1, 1, 1])), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(FieldSpec::new(2, 3, Some(&[1, 1, 0, 0])), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(FieldSpec::new(3, 0, None), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(FieldSpec::new(2, 3, Some(&[1, 2, 0, 1])), Err(Error::InvalidCoefficient { .. })));
    assert!(matches!(FieldSpec::new(2, 40, None), Err(Error::FieldTooLarge { .. })));
}

/// Exhaustive search over the nine monic quadratics over F_3: irreducible
/// means no root, primitive means x has order 8.
#[test]
fn default_quadratic_over_f3_is_smallest_primitive() {
    let mut found = None;
    for low in 0..9u32 {
        let (c0, c1) = (low % 3, low / 3);
        let has_root = (0..3u32).any(|z| (z * z + c1 * z + c0) % 3 == 0);
        if has_root {
            continue;
        }
        // powers of x as (a0, a1) with x^2 = -c1 x - c0
        let (mut a0, mut a1) = (0u32, 1u32);
        let mut order = 1;
        while (a0, a1) != (1, 0) {
            let (n0, n1) = ((3 - c0 * a1 % 3) % 3, (a0 + 3 - c1 * a1 % 3) % 3);
            a0 = n0;
            a1 = n1;
            order += 1;
        }
        if order == 8 {
            found = Some(vec![c0, c1, 1]);
            break;
        }
    }
    assert_eq!(found, Some(vec![2, 1, 1]));
    let f = FieldSpec::new(3, 2, None).unwrap();
    assert_eq!(f.modulus(), found.unwrap().as_slice());
    assert_eq!(f.generator(), FieldElement(3));
}

#[test]
fn default_modulus_is_reproducible() {
    for (p, n) in [(2, 8), (3, 5), (5, 3), (7, 2), (13, 1), (2, 10)] {
        let a = FieldSpec::new(p, n, None).unwrap();
        let b = FieldSpec::new(p, n, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.generator(), b.generator());
        assert!(poly::is_primitive(a.modulus(), p));
    }
    // classic choices
    assert_eq!(FieldSpec::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
    assert_eq!(FieldSpec::new(2, 4, None).unwrap().modulus(), &[1, 1, 0, 0, 1]);
    assert_eq!(FieldSpec::new(2, 8, None).unwrap().modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
}

#[test]
fn gf8_products_match_oracle() {
    let f = FieldSpec::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    assert_eq!(oracle_mul(&f, 2, 4), 3);
    assert_eq!(f.mul(FieldElement(2), FieldElement(4)), FieldElement(3));
    assert_eq!(oracle_mul(&f, 2, 5), 1);
    assert_eq!(f.inv(FieldElement(2)).unwrap(), FieldElement(5));
}

#[test]
fn multiplication_matches_oracle_with_and_without_tables() {
    for f in small_fields() {
        let plain = FieldSpec::with_table_bound(f.p(), f.n(), Some(f.modulus()), 0).unwrap();
        assert!(!plain.has_log_tables());
        for x in 0..f.q() {
            for y in 0..f.q() {
                let want = oracle_mul(&f, x, y);
                assert_eq!(f.mul(FieldElement(x), FieldElement(y)).rank(), want);
                assert_eq!(plain.mul(FieldElement(x), FieldElement(y)).rank(), want);
            }
        }
    }
}

#[test]
fn field_axioms_exhaustive() {
    for f in small_fields().into_iter().filter(|f| f.q() <= 27) {
        let els: Vec<_> = f.enumerate().collect();
        for &x in &els {
            assert_eq!(f.mul(x, f.one()), x);
            assert_eq!(f.add(x, f.zero()), x);
            assert_eq!(f.add(x, f.neg(x)), f.zero());
            if !x.is_zero() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                assert_eq!(f.pow(x, (f.q() - 1) as i128).unwrap(), f.one());
            }
            for &y in &els {
                assert_eq!(f.add(x, y), f.add(y, x));
                assert_eq!(f.mul(x, y), f.mul(y, x));
                assert_eq!(f.sub(f.add(x, y), y), x);
                assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
                assert_eq!(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)));
                for &z in &els {
                    assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    assert_eq!(f.add(f.add(x, y), z), f.add(x, f.add(y, z)));
                    assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                }
            }
        }
    }
}

#[test]
fn field_axioms_gf81() {
    let f = FieldSpec::new(3, 4, None).unwrap();
    for x in f.enumerate() {
        assert_eq!(f.frobenius_k(x, 4), x);
        for y in f.enumerate() {
            let xy = f.mul(x, y);
            for z in f.enumerate() {
                assert_eq!(f.mul(xy, z), f.mul(x, f.mul(y, z)));
                assert_eq!(f.mul(x, f.add(y, z)), f.add(xy, f.mul(x, z)));
            }
        }
    }
}

#[test]
fn pow_reduces_exponents_and_rejects_zero_inverse() {
    let f = FieldSpec::new(3, 2, None).unwrap();
    let x = FieldElement(5);
    assert_eq!(f.pow(x, -1).unwrap(), f.inv(x).unwrap());
    assert_eq!(f.pow(x, 3).unwrap(), f.pow(x, 3 + 8).unwrap());
    assert_eq!(f.pow(f.zero(), 0).unwrap(), f.one());
    assert_eq!(f.pow(f.zero(), 5).unwrap(), f.zero());
    assert!(matches!(f.pow(f.zero(), -2), Err(Error::DivisionByZero)));
    assert!(matches!(f.inv(f.zero()), Err(Error::DivisionByZero)));
    assert_eq!(f.arith(ArithOp::Pow, x, Operand::Exponent(2)).unwrap(), f.mul(x, x));
    assert_eq!(f.arith(ArithOp::Frobenius, x, Operand::None).unwrap(), f.pow(x, 3).unwrap());
    assert!(f.arith(ArithOp::Add, x, Operand::None).is_err());
}

#[test]
fn trace_examples() {
    let f4 = FieldSpec::new(2, 2, Some(&[1, 1, 1])).unwrap();
    let w = FieldElement(2);
    // Tr(w) = w + w^2 computed with the multiply oracle
    let w2 = FieldElement(oracle_mul(&f4, 2, 2));
    assert_eq!(f4.add(w, w2), FieldElement(1));
    assert_eq!(f4.trace_abs(w), 1);
    let f8 = FieldSpec::new(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    assert_eq!(f8.trace_abs(f8.one()), 1);
    for f in small_fields() {
        assert_eq!(f.trace_abs(f.zero()), 0);
        assert_eq!(f.trace_abs(f.one()), f.n() % f.p());
    }
}

#[test]
fn trace_is_balanced_linear_and_tabulated() {
    for f in small_fields() {
        let table = f.trace_table();
        let mut counts = vec![0u32; f.p() as usize];
        for x in f.enumerate() {
            let t = f.trace_abs(x);
            assert_eq!(table[x.rank() as usize], t);
            assert_eq!(f.trace_abs(f.frobenius(x)), t);
            counts[t as usize] += 1;
        }
        assert!(counts.iter().all(|&c| c == f.q() / f.p()));
        for x in f.enumerate().step_by(3) {
            for y in f.enumerate().step_by(2) {
                assert_eq!(f.trace_abs(f.add(x, y)), (f.trace_abs(x) + f.trace_abs(y)) % f.p());
            }
        }
    }
}

#[test]
fn relative_trace() {
    let f = FieldSpec::new(3, 4, None).unwrap();
    for x in f.enumerate() {
        assert_eq!(f.trace_rel(4, x).unwrap(), x);
        assert_eq!(f.trace_rel(1, x).unwrap().rank(), f.trace_abs(x));
        let r = f.trace_rel(2, x).unwrap();
        assert_eq!(f.frobenius_k(r, 2), r);
    }
    assert!(matches!(f.trace_rel(3, f.one()), Err(Error::NonDivisorSubfieldDegree { g: 3, n: 4 })));
    assert_eq!(f.subfield(2).unwrap().len(), 9);
    assert_eq!(f.subfield(1).unwrap(), vec![FieldElement(0), FieldElement(1), FieldElement(2)]);
}

#[test]
fn squares() {
    let f5 = FieldSpec::new(5, 1, None).unwrap();
    assert!(!f5.is_square(FieldElement(2)));
    assert!(f5.is_square(FieldElement(4)));
    assert!(f5.is_square(f5.zero()));
    let f9 = FieldSpec::new(3, 2, None).unwrap();
    let minus_one = f9.neg(f9.one());
    let squares: Vec<_> = f9.enumerate().map(|y| f9.mul(y, y)).collect();
    assert!(squares.contains(&minus_one));
    assert!(f9.is_square(minus_one));
    for f in small_fields() {
        let sq: std::collections::BTreeSet<_> = f.enumerate().map(|y| f.mul(y, y)).collect();
        for x in f.enumerate() {
            assert_eq!(f.is_square(x), sq.contains(&x));
            match f.sqrt(x) {
                Some(r) => assert_eq!(f.mul(r, r), x),
                None => assert!(!sq.contains(&x)),
            }
        }
        if f.p() != 2 {
            assert_eq!(sq.len() as u32, f.q().div_ceil(2));
        }
    }
}

#[test]
fn enumeration_order() {
    let f4 = FieldSpec::new(2, 2, None).unwrap();
    assert_eq!(f4.enumerate().map(|x| x.rank()).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    let f27 = FieldSpec::new(3, 3, None).unwrap();
    assert_eq!(f27.enumerate().count(), 27);
    let first: Vec<_> = f27.enumerate().take(2).collect();
    assert_eq!(first, vec![f27.zero(), f27.one()]);
}

#[test]
fn json_round_trip_and_validation() {
    let f = FieldSpec::new(3, 3, None).unwrap();
    let text = serde_json::to_string(&f).unwrap();
    assert_eq!(text, format!("{{\"p\":3,\"n\":3,\"modulus\":{:?}}}", f.modulus()).replace(' ', ""));
    let back: FieldSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
    assert!(serde_json::from_str::<FieldSpec>(r#"{"p":2,"n":3,"modulus":[1,0,0,1]}"#).is_err());
}

#[test]
fn large_field_without_tables() {
    let f = FieldSpec::with_table_bound(3, 13, None, 1 << 10).unwrap();
    assert!(!f.has_log_tables());
    let g = f.generator();
    assert_eq!(f.pow_u(g, (f.q() - 1) as u128), f.one());
    let x = FieldElement(123_456);
    assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
}

proptest! {
    #[test]
    fn random_identities_gf_3_7(x in 0u32..2187, y in 0u32..2187, z in 0u32..2187) {
        let f = FieldSpec::new(3, 7, None).unwrap();
        let (x, y, z) = (FieldElement(x), FieldElement(y), FieldElement(z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(x, y).rank(), oracle_mul(&f, x.rank(), y.rank()));
        prop_assert_eq!(f.frobenius_k(x, 7), x);
    }

    #[test]
    fn random_identities_gf_2_16(x in 1u32..65536, y in 0u32..65536) {
        let f = FieldSpec::new(2, 16, None).unwrap();
        let (x, y) = (FieldElement(x), FieldElement(y));
        prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        prop_assert_eq!(f.mul(x, y).rank(), oracle_mul(&f, x.rank(), y.rank()));
    }
}
