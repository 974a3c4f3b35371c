use krcore::qfield::{RatQ, Subset};
use proptest::prelude::*;
use std::cmp::Ordering;

const CASES: u32 = 10_000;

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![8 => -6i64..=6, 1 => any::<i32>().prop_map(|c| c as i64 * 1_000_003)]
}

fn poly(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(coeff(), 1..=max_len)
}

fn ratq() -> impl Strategy<Value = RatQ> {
    (-4i32..=4, poly(4), poly(3)).prop_map(|(lo, n, mut d)| {
        if d.iter().all(|c| *c == 0) {
            d[0] = 1;
        }
        RatQ::laurent(lo, &n).div(&RatQ::laurent(0, &d)).unwrap()
    })
}

fn nonzero() -> impl Strategy<Value = RatQ> {
    ratq().prop_filter("nonzero", |x| !x.is_zero())
}

/// f/g with f ∈ Z[q, q^-1] starting at q^lo and g(0) = 1
fn kz_with(lo: std::ops::RangeInclusive<i32>) -> impl Strategy<Value = RatQ> {
    (lo, prop::collection::vec(-5i64..=5, 1..=4), prop::collection::vec(-5i64..=5, 0..=3)).prop_map(|(lo, n, d)| {
        let mut den = vec![1];
        den.extend(d);
        RatQ::laurent(lo, &n).div(&RatQ::laurent(0, &den)).unwrap()
    })
}

/// f/g with f ∈ Q[q] and g(0) ≠ 0
fn a_elem() -> impl Strategy<Value = RatQ> {
    (0i32..=3, poly(3), 1i64..=7, poly(2)).prop_map(|(lo, n, c0, rest)| {
        let mut den = vec![c0];
        den.extend(rest);
        RatQ::laurent(lo, &n).div(&RatQ::laurent(0, &den)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn addition_is_an_abelian_group(x in ratq(), y in ratq(), z in ratq()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x + &RatQ::zero(), x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        prop_assert_eq!(&(&x - &y) + &y, x);
    }

    #[test]
    fn multiplication_and_distributivity(x in ratq(), y in ratq(), z in ratq()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &RatQ::one(), x.clone());
    }

    #[test]
    fn inverses(x in nonzero(), y in ratq()) {
        prop_assert!((&x * &x.inv().unwrap()).is_one());
        prop_assert_eq!(&y.div(&x).unwrap() * &x, y.clone());
        prop_assert!(y.div(&RatQ::zero()).is_err());
    }

    #[test]
    fn print_parse_round_trip(x in ratq()) {
        let s = x.to_string();
        let back: RatQ = s.parse().unwrap();
        prop_assert_eq!(back.to_string(), s);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn valuation_is_additive(x in nonzero(), y in nonzero()) {
        prop_assert_eq!((&x * &y).val(), Some(x.val().unwrap() + y.val().unwrap()));
        let s = &x + &y;
        if let Some(v) = s.val() {
            prop_assert!(v >= x.val().unwrap().min(y.val().unwrap()));
        }
    }

    #[test]
    fn order_is_total(x in ratq(), y in ratq()) {
        let lt = x.compare(&y) == Ordering::Less;
        let gt = x.compare(&y) == Ordering::Greater;
        let eq = x == y;
        prop_assert_eq!(lt as u8 + gt as u8 + eq as u8, 1);
        prop_assert_eq!(x.compare(&y), y.compare(&x).reverse());
    }

    #[test]
    fn order_is_transitive(x in ratq(), y in ratq(), z in ratq()) {
        if x.compare(&y) != Ordering::Greater && y.compare(&z) != Ordering::Greater {
            prop_assert_ne!(x.compare(&z), Ordering::Greater);
        }
    }

    #[test]
    fn order_is_compatible(x in ratq(), y in ratq(), z in ratq(), p in nonzero()) {
        prop_assert_eq!((&x + &z).compare(&(&y + &z)), x.compare(&y));
        let p = &p * &p;
        prop_assert!(p.is_positive());
        prop_assert_eq!((&x * &p).compare(&(&y * &p)), x.compare(&y));
        if x.is_positive() && y.is_positive() {
            prop_assert!((&x + &y).is_positive());
            prop_assert!((&x * &y).is_positive());
        }
    }

    #[test]
    fn a_is_a_subring(x in a_elem(), y in a_elem()) {
        prop_assert!(x.member(Subset::A) && y.member(Subset::A));
        prop_assert!((&x + &y).member(Subset::A));
        prop_assert!((&x - &y).member(Subset::A));
        prop_assert!((&x * &y).member(Subset::A));
        prop_assert!(x.shift(1).member(Subset::QA));
        prop_assert!((&RatQ::one() + &x.shift(1)).member(Subset::OnePlusQA));
    }

    #[test]
    fn az_is_a_subring(x in kz_with(0..=3), y in kz_with(0..=3)) {
        prop_assert!(x.member(Subset::AZ) && y.member(Subset::AZ));
        prop_assert!((&x + &y).member(Subset::AZ));
        prop_assert!((&x - &y).member(Subset::AZ));
        prop_assert!((&x * &y).member(Subset::AZ));
    }

    #[test]
    fn kz_is_a_subring(x in kz_with(-3..=3), y in kz_with(-3..=3)) {
        prop_assert!(x.member(Subset::KZ) && y.member(Subset::KZ));
        prop_assert!((&x + &y).member(Subset::KZ));
        prop_assert!((&x - &y).member(Subset::KZ));
        prop_assert!((&x * &y).member(Subset::KZ));
        prop_assert!(RatQ::qpow(-1).member(Subset::KZ));
    }
}

#[test]
fn boundaries_of_the_subrings() {
    let half = RatQ::one().div(&RatQ::int(2)).unwrap();
    assert!(half.member(Subset::A));
    assert!(!half.member(Subset::AZ));
    assert!(!half.member(Subset::KZ));
    assert!(!RatQ::qpow(-1).member(Subset::A));
    assert!(RatQ::qpow(-1).member(Subset::KZ));
    let r: RatQ = "(1)/(2+q)".parse().unwrap();
    assert!(r.member(Subset::A) && !r.member(Subset::KZ));
}
