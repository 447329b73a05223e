use cliquesys::algebra::{interpolate, FiniteField, Polynomial};
use proptest::prelude::*;

const SMALL_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

#[test]
fn field_axioms_exhaustive_up_to_16() {
    for order in SMALL_ORDERS {
        let f = FiniteField::new(order).unwrap();
        let els: Vec<u32> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "GF({order}) inverse of {a}");
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if a != 0 && b != 0 {
                    assert_ne!(f.mul(a, b), 0, "zero divisor in GF({order})");
                }
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

#[test]
fn gf4_table_matches_modulus() {
    // elements 0, 1, x, x+1 with x^2 = x + 1
    let f = FiniteField::new(4).unwrap();
    let expected = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    for a in 0..4u32 {
        for b in 0..4u32 {
            assert_eq!(f.mul(a, b), expected[a as usize][b as usize]);
        }
    }
}

#[test]
fn eval_matches_sum_of_monomials() {
    for order in [5u64, 9, 16] {
        let f = FiniteField::new(order).unwrap();
        let p = Polynomial::new(vec![1, 2, 3, order as u32 - 1]);
        for x in f.elements() {
            let mut sum = 0;
            let mut pow = 1;
            for &c in &p.coeffs {
                sum = f.add(sum, f.mul(c, pow));
                pow = f.mul(pow, x);
            }
            assert_eq!(p.eval(&f, x).unwrap(), sum);
        }
    }
}

fn instance() -> impl Strategy<Value = (u64, Vec<(u32, u32)>)> {
    prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 11, 13, 25, 27, 49])
        .prop_flat_map(|order| {
            let k_max = (order as usize).min(6);
            (Just(order), 1..=k_max)
        })
        .prop_flat_map(|(order, k)| {
            let xs = prop::sample::subsequence((0..order as u32).collect::<Vec<_>>(), k).prop_shuffle();
            let ys = prop::collection::vec(0..order as u32, k);
            (Just(order), xs, ys)
        })
        .prop_map(|(order, xs, ys)| (order, xs.into_iter().zip(ys).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn interpolation_round_trip((order, points) in instance()) {
        let f = FiniteField::new(order).unwrap();
        let p = interpolate(&f, &points, points.len()).unwrap();
        prop_assert_eq!(p.coeffs.len(), points.len());
        for &(x, y) in &points {
            prop_assert_eq!(p.eval(&f, x).unwrap(), y);
        }
    }

    #[test]
    fn interpolant_is_unique((order, points) in instance()) {
        let f = FiniteField::new(order).unwrap();
        let k = points.len();
        prop_assume!((order as u128).pow(k as u32) <= 20_000);
        let p = interpolate(&f, &points, k).unwrap();
        // enumerate every degree < k polynomial and collect those through all points
        let mut agreeing = Vec::new();
        for idx in 0..order.pow(k as u32) {
            let coeffs: Vec<u32> = (0..k).map(|i| ((idx / order.pow(i as u32)) % order) as u32).collect();
            let q = Polynomial::new(coeffs);
            if points.iter().all(|&(x, y)| q.eval(&f, x).unwrap() == y) {
                agreeing.push(q);
            }
        }
        prop_assert_eq!(agreeing, vec![p]);
    }
}
