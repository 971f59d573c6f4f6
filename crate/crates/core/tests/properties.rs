//! Randomized properties: structural round trips and algebraic relations
//! that should hold for arbitrary inputs, not just the exhaustive ranges.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use mdst_core::counting;
use mdst_core::maps::{self, EndoFunction, MissingSet};
use mdst_core::series::{TPoly, TruncatedSeries};
use mdst_core::trees::{self, RootedLabeledTree};

/// Builds a random tree by attaching each vertex (in a shuffled order) to a
/// uniformly chosen earlier vertex. Not uniform over trees, but covers all
/// shapes.
fn arbitrary_tree(max_n: usize) -> impl Strategy<Value = RootedLabeledTree> {
    (0..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<u64>(), n + 1),
                proptest::collection::vec(any::<u64>(), n + 1),
            )
        })
        .prop_map(|(n, order_keys, attach_keys)| {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by_key(|&v| order_keys[v]);
            let mut parent = vec![None; n + 1];
            for i in 1..=n {
                let j = (attach_keys[i] % i as u64) as usize;
                parent[order[i]] = Some(order[j]);
            }
            RootedLabeledTree::new(parent, order[0]).expect("construction is acyclic")
        })
}

proptest! {
    #[test]
    fn decompose_reassemble_round_trip(tree in arbitrary_tree(40)) {
        let pieces = tree.decompose();
        prop_assert_eq!(pieces.len(), tree.md_statistic() + 1);
        for piece in &pieces {
            prop_assert!(piece.tree.is_local_minimum());
        }
        let roots: Vec<usize> = pieces.iter().map(|p| p.original_root()).collect();
        prop_assert!(roots.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(trees::reassemble(&pieces).unwrap(), tree);
    }

    #[test]
    fn md_members_have_decreasing_chains(tree in arbitrary_tree(40)) {
        let md = tree.maximal_decreasing_subtree();
        for &v in &md.vertices {
            if v != tree.root() {
                let p = tree.parent(v).unwrap();
                prop_assert!(v < p && md.vertices.contains(&p));
            }
        }
    }

    #[test]
    fn tree_json_round_trip(tree in arbitrary_tree(20)) {
        let json = serde_json::to_string(&tree).unwrap();
        let back: RootedLabeledTree = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, tree);
    }
}

/// A random endofunction together with a valid threshold `k` (one that its
/// image covers).
fn function_with_threshold(max_n: usize) -> impl Strategy<Value = (EndoFunction, usize)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(1..=n, n),
                any::<u64>(),
            )
        })
        .prop_map(|(values, k_seed)| {
            let f = EndoFunction::new(values).unwrap();
            let image = f.image();
            let max_covered = (1..).take_while(|j| image.contains(j)).count();
            let k = (k_seed % (max_covered as u64 + 1)) as usize;
            (f, k)
        })
}

proptest! {
    #[test]
    fn shift_round_trip((f, k) in function_with_threshold(60)) {
        let g = maps::shift_down(&f, k).unwrap();
        prop_assert!(maps::is_shifted_member(&g, k).unwrap());
        prop_assert_eq!(maps::classify_shifted(&g), k);
        prop_assert_eq!(maps::shift_up(&g, k).unwrap(), f);
    }

    #[test]
    fn alpha_encode_decode_round_trip(
        (f, k) in function_with_threshold(40),
        alpha in 0usize..=4,
        picks in proptest::collection::vec(any::<u64>(), 4),
    ) {
        // choose alpha of the k+alpha candidates in {-alpha,..,k-1}
        let candidates: Vec<i64> = (-(alpha as i64)..k as i64).collect();
        let mut chosen: Vec<i64> = Vec::new();
        let mut pool = candidates;
        for pick in picks.iter().take(alpha) {
            let idx = (*pick % pool.len() as u64) as usize;
            chosen.push(pool.remove(idx));
        }
        let missing = MissingSet::new(chosen, alpha, k).unwrap();
        let h = maps::encode_alpha(&missing, &f, k, alpha).unwrap();
        let (k_back, missing_back, f_back) = maps::decode_alpha(&h);
        prop_assert_eq!(k_back, k);
        prop_assert_eq!(missing_back, missing);
        prop_assert_eq!(f_back, f);
    }
}

/// A random series with zero constant term, small integer coefficients, and
/// `t`-degree at most 2.
fn arbitrary_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    proptest::collection::vec(
        proptest::collection::vec(-3i64..=3, 3),
        order,
    )
    .prop_map(move |rows| {
        let mut series = TruncatedSeries::zero(order, order);
        for (d, row) in rows.iter().enumerate() {
            let mut poly = TPoly::zero();
            for (t_deg, &c) in row.iter().enumerate() {
                if c != 0 {
                    poly = poly.add(&TPoly::monomial(
                        t_deg,
                        BigRational::from_integer(BigInt::from(c)),
                    ));
                }
            }
            series.set_coeff(d + 1, poly);
        }
        series
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_undoes_neg_log(a in arbitrary_series(7)) {
        // exp(ln(1-a)) == 1 - a, with ln(1-a) = -neg_log_one_minus(a)
        let log_side = a.neg_log_one_minus().unwrap().scale(
            &-BigRational::from_integer(BigInt::from(1)),
        );
        let recovered = log_side.exp().unwrap();
        let expected = TruncatedSeries::one(7, 7).sub(&a).unwrap();
        prop_assert_eq!(recovered, expected);
    }

    #[test]
    fn neg_log_derivative_relation(a in arbitrary_series(7)) {
        // d/dx[-ln(1-a)] == a' / (1-a), compared through order-1
        let lhs = a.neg_log_one_minus().unwrap().derivative();
        let one_minus = TruncatedSeries::one(7, 7).sub(&a).unwrap();
        let rhs = a
            .derivative()
            .mul(&one_minus.reciprocal().unwrap().truncated(6))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_forms_agree_on_random_entries(n in 0usize..=12, k_seed in any::<u64>()) {
        let k = (k_seed % (n as u64 + 1)) as usize;
        let stirling = counting::tree_count_stirling(n, k).unwrap();
        prop_assert_eq!(
            &stirling,
            &counting::function_count_inclusion_exclusion(n, k).unwrap()
        );
        prop_assert_eq!(&stirling, &counting::tree_count_decomposition(n, k).unwrap());
        prop_assert_eq!(&stirling, &counting::tree_count_inverse_matrix(n, k).unwrap());
        prop_assert_eq!(&stirling, &counting::function_count_stirling(n, k).unwrap());
    }
}
