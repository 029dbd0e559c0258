//! Property tests for the space constants and the chain closure.

#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use quasimetric::metrize::{chain_metrize, chain_oracle, frink_check, sigma_bound, Chain};
use quasimetric::qcore::{
    classify, mult_triangle_constant, quasi_constant, snowflake, validate_space, QuasiMetricSpace,
    Rational,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Exact spaces with small rational entries, no structure imposed.
fn arb_space(max_n: usize) -> impl Strategy<Value = QuasiMetricSpace<Rational>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((1i64..=40, 1i64..=6), n * (n - 1) / 2).prop_map(move |cells| {
            let mut it = cells.into_iter();
            let mut m = vec![vec![q(0, 1); n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    let (num, den) = it.next().unwrap();
                    m[i][j] = q(num, den);
                    m[j][i] = q(num, den);
                }
            }
            validate_space(m, None).unwrap()
        })
    })
}

/// Metrics from random points on a line and in the plane (integer coordinates).
fn arb_metric(max_n: usize) -> impl Strategy<Value = QuasiMetricSpace<Rational>> {
    prop::collection::hash_set((0i64..50, 0i64..50), 2..=max_n).prop_map(|pts| {
        let pts: Vec<_> = pts.into_iter().collect();
        // L1 distance keeps the entries rational.
        let n = pts.len();
        QuasiMetricSpace::from_fn(n, None, |i, j| {
            q((pts[i].0 - pts[j].0).abs() + (pts[i].1 - pts[j].1).abs(), 1)
        })
        .unwrap()
    })
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quasi_constant_bounds_every_triple(s in arb_space(7)) {
        let k = quasi_constant(&s);
        let n = s.len();
        for (x, y, z) in triples(n).filter(|&(x, y, z)| x != y && y != z && x != z) {
            let m = s.get(x, y).max(s.get(y, z)).clone();
            prop_assert!(*s.get(x, z) <= k.value.clone() * m);
        }
        if let Some([x, y, z]) = k.triple {
            let m = s.get(x, y).max(s.get(y, z)).clone();
            prop_assert_eq!(s.get(x, z).clone(), k.value * m);
        }
    }

    #[test]
    fn triangle_constant_bounds_every_triple(s in arb_space(7)) {
        let c = mult_triangle_constant(&s);
        for (x, y, z) in triples(s.len()).filter(|&(x, y, z)| x != y && y != z && x != z) {
            prop_assert!(*s.get(x, z) <= c.value.clone() * (s.get(x, y) + s.get(y, z)));
        }
        if let Some([x, y, z]) = c.triple {
            prop_assert_eq!(s.get(x, z).clone(), c.value * (s.get(x, y) + s.get(y, z)));
        }
    }

    #[test]
    fn c_at_most_k_at_most_twice_c(s in arb_space(7)) {
        let a = classify(&s);
        prop_assert!(a.c <= a.k);
        prop_assert!(a.k <= a.c.clone() * q(2, 1));
        prop_assert!(a.k >= q(1, 1));
        prop_assert!(a.c >= q(1, 2));
        if a.is_ultrametric { prop_assert_eq!(a.k.clone(), q(1, 1)); }
        if a.is_metric { prop_assert!(a.c <= q(1, 1)); }
    }

    #[test]
    fn classify_is_scale_free(s in arb_space(6), num in 1i64..30, den in 1i64..30) {
        let factor = q(num, den);
        let scaled = s.map_entries(|x| x * &factor).unwrap();
        let (a, b) = (classify(&s), classify(&scaled));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn constants_are_permutation_invariant(s in arb_space(6), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..s.len()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let p = s.permuted(&perm);
        prop_assert_eq!(quasi_constant(&s).value, quasi_constant(&p).value);
        prop_assert_eq!(mult_triangle_constant(&s).value, mult_triangle_constant(&p).value);
    }

    #[test]
    fn snowflake_of_metric(s in arb_metric(7), p in 1u32..=4) {
        let out = snowflake(&s, &q(p as i64, 1)).unwrap();
        prop_assert!(quasi_constant(&out).value <= q(1 << p, 1));
    }

    #[test]
    fn closure_is_a_metric_below_rho(s in arb_space(8)) {
        let d = chain_metrize(&s);
        let n = s.len();
        prop_assert!(d.zero_pairs.is_empty());
        for i in 0..n {
            prop_assert_eq!(d.distance(i, i).clone(), q(0, 1));
            for j in 0..n {
                prop_assert!(d.distance(i, j) <= s.get(i, j));
                prop_assert_eq!(d.distance(i, j), d.distance(j, i));
                prop_assert_eq!(&d.witness(i, j).edge_sum(&s).unwrap(), d.distance(i, j));
                for k in 0..n {
                    prop_assert!(*d.distance(i, k) <= d.distance(i, j) + d.distance(j, k));
                }
            }
        }
    }

    #[test]
    fn closure_is_idempotent(s in arb_space(8)) {
        let d = chain_metrize(&s);
        let again = chain_metrize(&d.to_space(&s).unwrap());
        prop_assert_eq!(again.rows(), d.rows());
    }

    #[test]
    fn oracle_matches_closure(s in arb_space(7)) {
        let brute = chain_oracle(&s, s.len().saturating_sub(2)).unwrap();
        prop_assert_eq!(brute, chain_metrize(&s).rows());
    }

    #[test]
    fn shrinking_an_entry_never_grows_the_closure(
        s in arb_space(7).prop_filter("two points", |s| s.len() >= 2),
        pick in any::<prop::sample::Index>(),
        shrink in 1i64..10,
    ) {
        let n = s.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let (pi, pj) = pairs[pick.index(pairs.len())];
        let mut rows = s.rows();
        let smaller = rows[pi][pj].clone() * q(shrink, shrink + 1);
        rows[pi][pj] = smaller.clone();
        rows[pj][pi] = smaller;
        let t = validate_space(rows, None).unwrap();
        let (before, after) = (chain_metrize(&s), chain_metrize(&t));
        for i in 0..n {
            for j in 0..n {
                prop_assert!(after.distance(i, j) <= before.distance(i, j));
            }
        }
    }

    #[test]
    fn frink_bounds_when_k_at_most_two(s in arb_metric(8)) {
        let r = frink_check(&s);
        prop_assert!(r.applicable);
        prop_assert!(r.lower_ok && r.upper_ok);
        prop_assert!(r.min_ratio >= q(1, 1) / (r.k.clone() * q(2, 1)));
    }

    #[test]
    fn sigma_bound_holds_when_k_at_most_two(
        s in arb_metric(7),
        raw in prop::collection::vec(any::<prop::sample::Index>(), 3..=8),
    ) {
        let chain = Chain::new(raw.iter().map(|i| i.index(s.len())).collect()).unwrap();
        let b = sigma_bound(&s, &chain, None).unwrap();
        prop_assert!(b.holds);
    }
}

#[test]
fn float_and_exact_closures_agree() {
    let exact =
        QuasiMetricSpace::from_fn(6, None, |i, j| q(((i * 7 + j * 3) % 11 + 1) as i64, 3)).unwrap();
    let float = validate_space(
        exact
            .rows()
            .iter()
            .map(|r| r.iter().map(quasimetric::Scalar::to_f64).collect())
            .collect(),
        None,
    )
    .unwrap();
    let (de, df) = (chain_metrize(&exact), chain_metrize(&float));
    for i in 0..6 {
        for j in 0..6 {
            assert!(
                (quasimetric::Scalar::to_f64(de.distance(i, j)) - df.distance(i, j)).abs() < 1e-12
            );
        }
    }
}
