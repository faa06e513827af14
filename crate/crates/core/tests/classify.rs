mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slocc_rank::{
    classify, factorize, finest_partition, ghz, ghz_exact, invariance_trial, is_biseparable,
    is_genuinely_entangled, parse_label, rank_signature, verify_rank_bounds_222d, Catalog,
    PureState, Scalar, WarningCode,
};

fn kets(dims: &[usize], kets: &[&str]) -> PureState {
    let terms = kets
        .iter()
        .map(|k| (k.bytes().map(|b| (b - b'0') as usize).collect(), Scalar::int(1)));
    PureState::new(dims.to_vec(), terms).unwrap()
}

#[test]
fn worked_classifications() {
    let r = classify(&kets(&[2, 2, 4], &["000", "011", "102"])).unwrap();
    assert_eq!((r.label.as_str(), r.family.to_string().as_str()), ("l1:(2,2,3)", "1,2,3"));

    let r = classify(&kets(&[2, 2, 2, 8], &["0000", "0011", "0102", "0113"])).unwrap();
    assert_eq!(r.label, "l1:(1,2,2,4);l2:(2,4,2)");
    assert_eq!(r.family.to_string(), "1|2,3,4");
    assert!(!r.genuinely_entangled);

    let r = classify(&kets(&[2, 2, 2, 8], &["0000", "1100", "1112"])).unwrap();
    assert_eq!(r.label, "l1:(2,2,2,2);l2:(2,3,3)");
    assert!(r.genuinely_entangled);

    let r = classify(&kets(&[2, 2, 2, 8], &["0000", "1111"])).unwrap();
    assert_eq!(r.label, "l1:(2,2,2,2);l2:(2,2,2)");
    let r = classify(&kets(&[2, 2, 2, 2], &["0000"])).unwrap();
    assert_eq!(r.label, "l1:(1,1,1,1);l2:(1,1,1)");
    assert_eq!(r.family.to_string(), "1|2|3|4");
}

#[test]
fn biseparability() {
    assert!(is_biseparable(&kets(&[2, 2, 4], &["000", "011"]), &[0]).unwrap());
    let g = ghz(3, 2).unwrap();
    for block in [[0], [1], [2]] {
        assert!(!is_biseparable(&g, &block).unwrap());
    }
    assert_eq!(is_biseparable(&g, &[]).unwrap_err().code(), "BAD_BLOCK");
}

#[test]
fn genuine_entanglement() {
    assert!(is_genuinely_entangled(&ghz(4, 2).unwrap()).unwrap());
    let zero_ghz = kets(&[2], &["0"]).tensor_product(&ghz_exact(3, 2).unwrap());
    assert!(!is_genuinely_entangled(&zero_ghz).unwrap());
    assert!(!is_genuinely_entangled(&kets(&[2, 2, 2, 2], &["0000"])).unwrap());
}

#[test]
fn ghz_ranks_equal_d() {
    for n in 3..=5 {
        for d in 2..=4 {
            for s in [ghz(n, d).unwrap(), ghz_exact(n, d).unwrap()] {
                let sig = rank_signature(&s).unwrap();
                assert!(sig.all_ranks().all(|r| r == d), "n={n} d={d}");
            }
        }
    }
}

#[test]
fn random_products_split_along_their_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..60 {
        let a = common::random_genuine_block(&mut rng, &[2, 2]);
        let b = common::random_genuine_block(&mut rng, &[2, 3]);
        let s = a.tensor_product(&b);
        assert!(is_biseparable(&s, &[0, 1]).unwrap());
        assert_eq!(finest_partition(&s).unwrap().to_string(), "1,2|3,4");
        assert_eq!(factorize(&s).unwrap().recompose(), s);
    }
    let singles = (0..4).fold(None::<PureState>, |acc, _| {
        let d = rng.random_range(2..=3);
        let q = common::random_genuine_block(&mut rng, &[d]);
        Some(match acc {
            Some(s) => s.tensor_product(&q),
            None => q,
        })
    });
    assert_eq!(finest_partition(&singles.unwrap()).unwrap().to_string(), "1|2|3|4");
}

#[test]
fn rank_bounds_for_three_qubits_and_a_qudit() {
    let c = Catalog::builtin().unwrap();
    let top = c.get("t2228_f2228_444").unwrap();
    let sig = rank_signature(&top.state).unwrap();
    assert_eq!(sig.ranks(1).unwrap()[3], 8);
    assert!(verify_rank_bounds_222d(&sig, 8).unwrap());
    assert_eq!(verify_rank_bounds_222d(&sig, 9).unwrap_err().code(), "WRONG_SYSTEM");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let s = common::random_exact_state(&mut rng, &[2, 2, 2, 2], 16);
        let sig = rank_signature(&s).unwrap();
        assert!(sig.ranks(1).unwrap().iter().all(|&r| r <= 2));
        assert!(verify_rank_bounds_222d(&sig, 2).unwrap());
    }
}

#[test]
fn five_qudit_state_invisible_to_the_permutation_set() {
    // Qudits 4 and 5 share a Bell pair; no cut of the n = 5 permutation
    // sets has exactly those two on one side.
    let bell = kets(&[2, 2], &["00", "11"]);
    let s = ghz_exact(3, 2).unwrap().tensor_product(&bell);
    let r = classify(&s).unwrap();
    assert_eq!(r.family.to_string(), "1,2,3|4,5");
    assert!(r.signature.all_ranks().all(|x| x > 1));
    assert!(!r.genuinely_entangled);
    assert!(r.warnings.iter().any(|w| w.code == WarningCode::SignatureMissesCut));
    // The signature test alone is fooled.
    assert!(is_genuinely_entangled(&s).unwrap());
    assert!(!common::oracle_genuine(&s));
}

#[test]
fn labels_parse_back() {
    let c = Catalog::builtin().unwrap();
    for e in c.entries() {
        let parsed = parse_label(&e.expected_label).unwrap();
        let sig = rank_signature(&e.state).unwrap();
        let cuts: Vec<(usize, Vec<usize>)> =
            sig.cuts().iter().map(|c| (c.l, c.ranks.clone())).collect();
        assert_eq!(parsed, cuts);
    }
}

#[test]
fn slocc_trials_on_named_states() {
    let c = Catalog::builtin().unwrap();
    for id in ["cluster4", "ghz", "t224_f223"] {
        let s = &c.get(id).unwrap().state;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = invariance_trial(s, &mut rng).unwrap();
            assert!(r.passed, "{id} seed {seed}: {r:?}");
        }
    }
    let s = kets(&[2, 2, 2, 2], &["0000"]);
    let r = invariance_trial(&s, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
    assert_eq!(r.after, "l1:(1,1,1,1);l2:(1,1,1)");
}
