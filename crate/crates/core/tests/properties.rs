mod common;

use proptest::prelude::*;
use supergal::arith::gcd_all;
use supergal::fiber::cover_genus;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pipeline_invariants(input in common::random_curve()) {
        if let Err(msg) = common::check_invariants(&input) {
            prop_assert!(false, "{}", msg);
        }
    }

    #[test]
    fn cover_genus_is_integral(
        n in prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 10, 12]),
        mults in prop::collection::vec(1u64..20, 2..10),
    ) {
        let (d, _) = cover_genus(n, &mults).unwrap();
        prop_assert_eq!(d, gcd_all(std::iter::once(n).chain(mults.iter().copied())));
    }

    #[test]
    fn rational_arithmetic_roundtrip(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000) {
        let x = supergal::Rational::new(a, b).unwrap();
        let y = supergal::Rational::from(c);
        let back: supergal::Rational = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(&(&(&x + &y) - &y), &x);
    }

    #[test]
    fn valuation_is_additive_and_ultrametric(
        a in 1i64..100_000, b in 1i64..100_000, p in prop::sample::select(vec![3u64, 7, 13, 31]),
    ) {
        use supergal::arith::vp;
        let (x, y) = (supergal::Rational::from(a), supergal::Rational::from(b));
        let (vx, vy) = (vp(&x, p).finite().unwrap(), vp(&y, p).finite().unwrap());
        prop_assert_eq!(vp(&(&x * &y), p).finite().unwrap(), vx + vy);
        if let Some(s) = vp(&(&x + &y), p).finite() {
            prop_assert!(s >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(s, vx.min(vy));
            }
        }
    }
}
