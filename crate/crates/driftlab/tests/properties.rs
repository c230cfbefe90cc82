//! Property tests for the cross-module invariants.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use driftlab::ball::Precision;
use driftlab::counting::{brute_count, g_exact, DpCounter, Quintuple};
use driftlab::digits::{from_digits, to_digits};
use driftlab::unity::{count_via_filter, residue_filter, UnityRoot};

fn quintuple_strategy() -> impl Strategy<Value = Quintuple> {
    (2u64..=6, 1u64..=5, 1u64..=5).prop_flat_map(|(q, d, m)| {
        (Just(q), Just(d), Just(m), 0..d, 0..m)
            .prop_map(|(q, d, m, a, j)| Quintuple::new(q, d, m, a, j).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dp_equals_brute(p in quintuple_strategy(), n in 0u64..800) {
        let n = BigUint::from(n);
        let dp = DpCounter::new(p).count(&n);
        let brute = brute_count(&p, &n, 1_000).unwrap();
        prop_assert_eq!(dp, BigUint::from(brute));
    }

    #[test]
    fn digits_round_trip_big(hi in any::<u64>(), lo in any::<u64>(), q in 2u64..40) {
        let n = (BigUint::from(hi) << 64) | BigUint::from(lo);
        let ds = to_digits(&n, q).unwrap();
        prop_assert_eq!(from_digits(&ds), n);
    }

    #[test]
    fn g_denominator_divides_dm(p in quintuple_strategy(), n in 0u64..500) {
        let g = g_exact(&p, &BigUint::from(n));
        let dm = num_bigint::BigInt::from(p.dm());
        prop_assert!((&dm % g.denom()).is_zero());
    }

    #[test]
    fn unity_root_group_laws(
        t1 in 0u64..60, n1 in 1u64..60,
        t2 in 0u64..60, n2 in 1u64..60,
        e in 0u64..200u64,
    ) {
        let a = UnityRoot::new(t1, n1).unwrap();
        let b = UnityRoot::new(t2, n2).unwrap();
        // canonical form after multiplication
        let ab = a.mul(&b);
        prop_assert!(ab.numerator() == 0 && ab.order() == 1
            || num_integer::Integer::gcd(&ab.numerator(), &ab.order()) == 1);
        // commutativity and inverse
        prop_assert_eq!(ab, b.mul(&a));
        prop_assert!(a.mul(&a.inv()).is_identity());
        // pow is a homomorphism of exponents
        let lhs = a.pow_u64(e).mul(&a.pow_u64(e + 1));
        prop_assert_eq!(lhs, a.pow_u64(2 * e + 1));
        // angles agree with the group law: turns(ab) ≡ turns(a) + turns(b) (mod 1)
        let total = a.turns() + b.turns() - ab.turns();
        prop_assert!(total.is_integer());
    }

    #[test]
    fn residue_filter_partitions(coeffs in prop::collection::vec(-50i64..50, 1..18), n in 1u64..8) {
        let coeffs: Vec<BigRational> = coeffs
            .into_iter()
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        let mut sum = vec![BigRational::zero(); coeffs.len()];
        for l in 0..n {
            let f = residue_filter(&coeffs, n, l).unwrap();
            // matches direct index filtering
            for (k, (got, orig)) in f.iter().zip(&coeffs).enumerate() {
                let expect = if k as u64 % n == l { orig.clone() } else { BigRational::zero() };
                prop_assert_eq!(got.clone(), expect);
            }
            for (s, x) in sum.iter_mut().zip(&f) {
                *s += x;
            }
        }
        prop_assert_eq!(sum, coeffs);
    }
}

proptest! {
    // the filter identity is slower; fewer cases
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn filter_count_equals_dp(p in quintuple_strategy(), k in 1u32..4) {
        let filtered = count_via_filter(&p, k, Precision::default()).unwrap();
        let n = BigUint::from(p.q()).pow(k);
        prop_assert_eq!(filtered, DpCounter::new(p).count(&n));
    }
}
