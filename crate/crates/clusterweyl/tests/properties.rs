use clusterweyl::constructions::{build_qm, seq_r};
use clusterweyl::interface::layout;
use clusterweyl::quiver::{QuiverError, VertexId, WeightedQuiver};
use clusterweyl::roots::{CartanData, CartanType};
use clusterweyl::seed::{tropical_sign, MutationSequence, Seed, Sign, Tracking};
use proptest::prelude::*;

fn random_quiver() -> impl Strategy<Value = WeightedQuiver> {
    (2usize..6).prop_flat_map(|n| {
        (proptest::collection::vec(1u32..=2, n), proptest::collection::vec(-3i64..=3, n * (n - 1) / 2)).prop_filter_map("not skew-symmetrizable", move |(d, upper)| {
            let mut s = vec![vec![0i64; n]; n];
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            for ((i, j), x) in pairs.zip(upper) {
                s[i][j] = 2 * x;
                s[j][i] = -2 * x;
            }
            let ids = (1..=n as i64).map(VertexId::num).collect();
            WeightedQuiver::from_structure2(ids, &s, d, vec![false; n]).ok()
        })
    })
}

fn small_type() -> impl Strategy<Value = (CartanData, usize)> {
    prop_oneof![
        Just((CartanType::A, 2)),
        Just((CartanType::A, 3)),
        Just((CartanType::B, 2)),
        Just((CartanType::C, 3)),
        Just((CartanType::D, 4)),
        Just((CartanType::G, 2)),
    ]
    .prop_flat_map(|(t, n)| (Just(CartanData::of(t, n).unwrap()), 2usize..=5))
}

fn walk(q: &WeightedQuiver, picks: &[usize]) -> MutationSequence {
    let u = q.unfrozen_ids();
    MutationSequence::mutations(picks.iter().map(|&p| u[p % u.len()].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution(q in random_quiver(), k in 0usize..6) {
        let k = k % q.len();
        let twice = q.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(twice, q);
    }

    #[test]
    fn mutation_keeps_skew_symmetrizability(q in random_quiver(), picks in proptest::collection::vec(0usize..6, 1..12)) {
        let mut cur = q.clone();
        for p in picks {
            cur = match cur.mutate(p % q.len()) {
                Ok(c) => c,
                Err(QuiverError::Overflow) => break,
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(cur.validate().is_ok());
            prop_assert_eq!(cur.weights(), q.weights());
        }
    }

    #[test]
    fn r_fixes_q_m((cd, m) in small_type(), s in 1usize..=4, i in 1usize..=5) {
        let s = (s - 1) % cd.rank() + 1;
        let i = (i - 1) % m + 1;
        let q = build_qm(&cd, None, m).unwrap();
        let seq = seq_r(s, i, m).unwrap().sequence;
        let seed = Seed::new(&q, Tracking::tropical()).apply(&seq).unwrap();
        prop_assert_eq!(seed.quiver(), &q);
    }

    #[test]
    fn sequence_then_inverse_is_trivial((cd, m) in small_type(), picks in proptest::collection::vec(0usize..64, 0..10)) {
        let q = build_qm(&cd, None, m).unwrap();
        let seq = walk(&q, &picks);
        let seed = Seed::new(&q, Tracking::tropical()).apply(&seq.clone().then(&seq.inverse())).unwrap();
        prop_assert_eq!(seed.quiver(), &q);
        let c = seed.c_matrix();
        for (a, row) in c.iter().enumerate() {
            for (b, &x) in row.iter().enumerate() {
                prop_assert_eq!(x, i64::from(a == b));
            }
        }
    }

    #[test]
    fn c_vectors_are_sign_coherent((cd, m) in small_type(), picks in proptest::collection::vec(0usize..64, 1..14)) {
        let q = build_qm(&cd, None, m).unwrap();
        let seed = Seed::new(&q, Tracking::tropical()).apply(&walk(&q, &picks)).unwrap();
        for v in q.unfrozen_ids() {
            prop_assert_ne!(tropical_sign(seed.c_vector(&v).unwrap()), Sign::Mixed);
        }
    }

    #[test]
    fn layout_is_deterministic((cd, m) in small_type()) {
        let q = build_qm(&cd, None, m).unwrap();
        let a = layout(&q);
        prop_assert_eq!(a.len(), q.len());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&layout(&q)).unwrap());
    }
}
