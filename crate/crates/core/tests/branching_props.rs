use krcore::branching::{cross_check_t, enumerate_s, peel, s_csv, tuple_weight, Cw, G2System};
use krcore::cartan::AffineType;
use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

fn character_sum(sys: &G2System, hws: &[Cw]) -> BTreeMap<Cw, i64> {
    let mut m = BTreeMap::new();
    for &h in hws {
        for (w, x) in sys.character(h).unwrap() {
            *m.entry(w).or_insert(0) += x as i64;
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn peeling_recovers_any_sum_of_irreducibles(
        hws in prop::collection::vec((0i64..=2, 0i64..=3), 1..=4),
        d4 in any::<bool>(),
    ) {
        let ty = if d4 { AffineType::D4_3 } else { AffineType::G2_1 };
        let sys = G2System::new(ty);
        let mults = character_sum(&sys, &hws);
        let mut want = hws.clone();
        want.sort();
        prop_assert_eq!(peel(&sys, &mults, false).unwrap(), want.clone());
        prop_assert_eq!(peel(&sys, &mults, true).unwrap(), want);
    }
}

#[test]
fn s_sets_are_nested_and_match_t() {
    for ty in AffineType::ALL {
        for l in 1..=4 {
            cross_check_t(ty, l).unwrap();
            let small: BTreeSet<_> = enumerate_s(ty, l).into_iter().collect();
            let big: BTreeSet<_> = enumerate_s(ty, l + 1).into_iter().collect();
            assert!(small.is_subset(&big), "{ty:?} S_{l} not inside S_{}", l + 1);
        }
    }
}

#[test]
fn s_weights_are_dominant() {
    for ty in AffineType::ALL {
        for l in 1..=4 {
            for t in enumerate_s(ty, l) {
                assert!(tuple_weight(ty, l, t).dominant_classical(), "{ty:?} {t:?}");
            }
        }
    }
}

#[test]
fn g2_level_two_csv() {
    let csv = s_csv(AffineType::G2_1, 2);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,b,c,d,m1,m2");
    assert_eq!(lines.len(), 3);
    assert!(lines.contains(&"0,0,0,0,0,2"));
    assert!(lines.contains(&"0,0,1,1,0,1"));
}
