mod common;

use common::{element, field, EXAMPLES, TEN};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn eps() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 80)
}

fn any_field() -> impl Strategy<Value = rauzy_core::PisotField> {
    prop::sample::select(vec![EXAMPLES[0], EXAMPLES[1], EXAMPLES[2], EXAMPLES[3], TEN]).prop_map(field)
}

fn triple() -> impl Strategy<Value = (rauzy_core::FieldElement, rauzy_core::FieldElement, rauzy_core::FieldElement)> {
    any_field().prop_flat_map(|k| (element(k.clone()), element(k.clone()), element(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_idempotent((a, _, _) in triple()) {
        let again = a.field().element(a.numer().to_vec(), a.denom().clone()).unwrap();
        prop_assert_eq!(again.numer(), a.numer());
        prop_assert_eq!(again.denom(), a.denom());
    }

    #[test]
    fn ring_laws((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn inverse((a, _, _) in triple()) {
        prop_assume!(!a.is_zero());
        let one = a.field().one();
        prop_assert_eq!(&a.inv().unwrap() * &a, one);
    }

    #[test]
    fn real_value_is_multiplicative((a, b, _) in triple()) {
        let e = eps();
        let (alo, ahi) = a.real_value(&e);
        let (blo, bhi) = b.real_value(&e);
        let (plo, phi) = (&a * &b).real_value(&e);
        let corners = [&alo * &blo, &alo * &bhi, &ahi * &blo, &ahi * &bhi];
        let lo = corners.iter().min().unwrap() - &e;
        let hi = corners.iter().max().unwrap() + &e;
        prop_assert!(lo <= plo && phi <= hi);
    }

    #[test]
    fn floor_brackets_value((a, _, _) in triple()) {
        let (lo, hi) = a.real_value(&eps());
        let f = BigRational::from_integer(a.floor());
        prop_assert!(f <= hi);
        prop_assert!(lo < &f + BigRational::one());
    }
}
