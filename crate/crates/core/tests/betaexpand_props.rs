mod common;

use common::{admissible_word, field, unit_element, EXAMPLES};
use num_integer::Integer;
use proptest::prelude::*;
use rauzy_core::betaexpand::{admissible, admissible_infinite, max_digit, Side};
use rauzy_core::{build_automaton, classify_parry, expand, value_of_periodic, PisotField};

fn example() -> impl Strategy<Value = PisotField> {
    prop::sample::select(EXAMPLES.to_vec()).prop_map(field)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn round_trip(
        k in example(),
        pre in prop::collection::vec(any::<usize>(), 0..8),
        cyc in prop::collection::vec(any::<usize>(), 0..8),
    ) {
        let parry = classify_parry(&k).unwrap();
        let w = admissible_word(&build_automaton(&parry), &pre, &cyc);
        prop_assume!(admissible_infinite(&parry, &w, true));
        let x = value_of_periodic(&parry, &w.preperiod, &w.period).unwrap();
        let e = expand(&x, 1_000_000).unwrap();
        prop_assert_eq!(value_of_periodic(&parry, &e.preperiod, &e.period).unwrap(), x);
        prop_assert_eq!(e.word(), w);
    }

    #[test]
    fn digits_are_valid_and_admissible(x in example().prop_flat_map(unit_element)) {
        let parry = classify_parry(x.field()).unwrap();
        let e = expand(&x, 1_000_000).unwrap();
        let top = max_digit(x.field());
        prop_assert!(e.preperiod.iter().chain(&e.period).all(|&d| d <= top));
        let w = e.word();
        let window: Vec<_> = (0..3 * (e.preperiod.len() + e.period.len())).map(|i| w.digit(i)).collect();
        prop_assert!(admissible(&parry, &window, Side::Right));
    }
}

#[test]
fn state_count_matches_automaton() {
    for c in EXAMPLES {
        let parry = classify_parry(&field(c)).unwrap();
        assert_eq!(parry.d, build_automaton(&parry).states);
    }
}

#[test]
fn integer_bases_follow_the_gcd_rule() {
    for b in [2i64, 3, 7, 10] {
        let k = PisotField::new(&[-b, 1]).unwrap();
        for q in 1..=100i64 {
            for p in (0..q).filter(|p| p.gcd(&q) == 1) {
                let e = expand(&k.from_ratio(p.into(), q.into()).unwrap(), 1_000_000).unwrap();
                assert_eq!(e.purely_periodic, q.gcd(&b) == 1, "{p}/{q} in base {b}");
            }
        }
    }
}
