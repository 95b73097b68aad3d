use proptest::prelude::*;
use ttstar_core::{rat, APoly, BiSeries, ZLoop};

const N: u32 = 3;

fn apoly() -> impl Strategy<Value = APoly> {
    prop::collection::vec((-2i32..3, -4i64..5, 1i64..4), 0..4)
        .prop_map(|t| APoly::from_terms(t.into_iter().map(|(e, p, q)| (e, rat(p, q)))))
}

fn zloop() -> impl Strategy<Value = ZLoop> {
    prop::collection::vec((-2i32..3, apoly()), 0..3).prop_map(ZLoop::from_terms)
}

fn biseries() -> impl Strategy<Value = BiSeries> {
    prop::collection::vec(((0u32..=N), (0u32..=N), zloop()), 0..4).prop_map(|t| {
        let mut s = BiSeries::zero(N);
        for (n, m, c) in t {
            if n + m <= N {
                s.add_term(n, m, &c);
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apoly_ring(x in apoly(), y in apoly(), w in apoly()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn apoly_derivative_is_derivation(x in apoly(), y in apoly()) {
        let lhs = (&x * &y).derivative();
        let rhs = &(&x.derivative() * &y) + &(&x * &y.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn zloop_ring(x in zloop(), y in zloop(), w in zloop()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
        prop_assert_eq!(x.invert_z().invert_z(), x.clone());
        prop_assert_eq!((&x * &y).invert_z(), &x.invert_z() * &y.invert_z());
    }

    #[test]
    fn biseries_ring(x in biseries(), y in biseries(), w in biseries()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &w, &x * &(&y * &w));
        prop_assert_eq!(&x * &(&y + &w), &(&x * &y) + &(&x * &w));
    }

    #[test]
    fn bar_is_multiplicative_involution(x in biseries(), y in biseries()) {
        prop_assert_eq!(x.bar().bar(), x.clone());
        prop_assert_eq!((&x * &y).bar(), &x.bar() * &y.bar());
    }

    #[test]
    fn d1_and_d1bar_are_derivations(x in biseries(), y in biseries()) {
        let xy = &x * &y;
        prop_assert_eq!(xy.d1(), &(&x.d1() * &y) + &(&x * &y.d1()));
        prop_assert_eq!(xy.d1bar(), &(&x.d1bar() * &y) + &(&x * &y.d1bar()));
        prop_assert_eq!(x.d1().d1bar(), x.d1bar().d1());
        prop_assert_eq!(x.d1().bar(), x.bar().d1bar());
    }

    #[test]
    fn json_round_trip(x in biseries()) {
        let s = serde_json::to_string(&x).unwrap();
        let back: BiSeries = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), s);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn unit_inverse(x in biseries(), c in 1i64..5) {
        let mut u = x.clone();
        u.add_term(0, 0, &(&ZLoop::scalar(rat(c, 1)) - &x.coeff(0, 0)));
        let inv = u.inv().unwrap();
        prop_assert_eq!(&u * &inv, BiSeries::one(N));
    }
}
