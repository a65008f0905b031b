use backflow::combinat::{
    binomial, dim_sym, enumerate_partitions, enumerate_profiles, pbar, pbar_asymptotic, qbar, staircase,
    DegreeProfile, Partition,
};
use backflow::Error;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn lists(k: usize, m: usize, strict: bool) -> Vec<Vec<u32>> {
    enumerate_partitions(k, m, strict)
        .unwrap()
        .map(|p| p.parts().to_vec())
        .collect()
}

/// All weakly decreasing sequences of positive parts, by brute force over
/// compositions.
fn brute_partitions(m: usize) -> Vec<Vec<u32>> {
    fn go(rest: usize, max: usize, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            acc.push(part as u32);
            go(rest - part, part, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}

#[test]
fn pbar_examples() {
    for m in 0..50 {
        assert_eq!(pbar(1, m).unwrap(), BigUint::from(1u32));
    }
    assert_eq!(pbar(2, 5).unwrap(), BigUint::from(3u32));
    assert_eq!(pbar(3, 0).unwrap(), BigUint::from(1u32));
    assert_eq!(pbar(0, 0).unwrap(), BigUint::from(1u32));
    assert!(matches!(pbar(0, 3), Err(Error::Domain(_))));
}

#[test]
fn qbar_examples() {
    assert_eq!(qbar(2, 6).unwrap(), pbar(2, 5).unwrap());
    assert_eq!(lists(2, 6, true), vec![vec![6], vec![5, 1], vec![4, 2]]);
    for m in 0..30 {
        assert_eq!(qbar(1, m).unwrap(), BigUint::from(1u32), "m = {m}");
    }
    // Below the smallest weight reachable with k - 1 strict parts.
    assert_eq!(qbar(5, 5).unwrap(), BigUint::from(0u32));
    assert_eq!(staircase(4), 6);
}

#[test]
fn enumeration_examples() {
    assert_eq!(lists(2, 5, false), vec![vec![5], vec![4, 1], vec![3, 2]]);
    assert_eq!(lists(4, 0, false), vec![Vec::<u32>::new()]);
    let big = enumerate_partitions(40, 2000, false);
    assert!(matches!(big, Err(Error::GuardExceeded { .. })));
}

#[test]
fn enumeration_matches_brute_force() {
    for m in 0..=18 {
        let all = brute_partitions(m);
        for k in 1..=7 {
            let expected: Vec<Vec<u32>> = all.iter().filter(|p| p.len() <= k).cloned().collect();
            assert_eq!(lists(k, m, false), expected, "k={k} m={m}");
            let strict: Vec<Vec<u32>> = all
                .iter()
                .filter(|p| (p.len() == k || p.len() + 1 == k) && p.windows(2).all(|w| w[0] > w[1]))
                .cloned()
                .collect();
            assert_eq!(lists(k, m, true), strict, "strict k={k} m={m}");
        }
    }
}

#[test]
fn partition_type() {
    let p = Partition::new(vec![1, 3, 2]);
    assert_eq!(p.parts(), &[3, 2, 1]);
    assert_eq!(p.weight(), 6);
    assert!(p.is_strict());
    assert!(!Partition::new(vec![2, 2]).is_strict());
}

#[test]
fn dim_sym_examples() {
    assert_eq!(dim_sym(0), 1);
    assert_eq!(dim_sym(1), 3);
    assert_eq!(dim_sym(2), 6);
    for d in 0..30u64 {
        assert_eq!(BigUint::from(dim_sym(d)), binomial(d + 2, 2));
    }
}

#[test]
fn profile_examples() {
    let two: Vec<String> = enumerate_profiles(2, 2).map(|p| p.to_string()).collect();
    assert_eq!(two, vec!["(0,2)", "(1,1)"]);
    assert_eq!(
        BigUint::from(enumerate_profiles(3, 6).count()),
        pbar(3, 6).unwrap()
    );
    assert_eq!(enumerate_profiles(1, 7).map(|p| p.degrees().to_vec()).collect::<Vec<_>>(), vec![vec![7]]);
    assert!("1,0".parse::<DegreeProfile>().is_err());
    assert!("".parse::<DegreeProfile>().is_err());
    assert_eq!("0,1,3".parse::<DegreeProfile>().unwrap().total(), 4);
}

#[test]
fn asymptotic_examples() {
    assert_eq!(pbar_asymptotic(1, 17).unwrap().to_f64(), 1.0);
    let ratio = |k: usize, m: usize| {
        pbar(k, m).unwrap().to_f64().unwrap() / pbar_asymptotic(k, m as u64).unwrap().to_f64()
    };
    assert!((0.99..=1.01).contains(&ratio(3, 10_000)));
    assert!((0.95..=1.05).contains(&ratio(5, 100_000)));
    // Trend toward 1 on doubling m.
    for k in 2..=4 {
        let mut last = f64::INFINITY;
        let mut m = 100;
        while m <= 12_800 {
            let dev = (ratio(k, m) - 1.0).abs();
            assert!(dev <= last, "k={k} m={m}");
            last = dev;
            m *= 2;
        }
    }
}

proptest! {
    #[test]
    fn pbar_monotone(k in 1usize..8, m in 0usize..120) {
        prop_assert!(pbar(k, m).unwrap() <= pbar(k + 1, m).unwrap());
        prop_assert!(pbar(k, m).unwrap() <= pbar(k, m + 1).unwrap());
    }

    #[test]
    fn recurrence_from_definition(k in 2usize..7, m in 0usize..80) {
        // p_k(m) = Σ_i p_{k-1}(m - i k)
        let sum: BigUint = (0..=m / k).map(|i| pbar(k - 1, m - i * k).unwrap()).sum();
        prop_assert_eq!(pbar(k, m).unwrap(), sum);
    }

    #[test]
    fn staircase_identity(k in 1usize..9, m in 0usize..100) {
        prop_assert_eq!(qbar(k, m + staircase(k)).unwrap(), pbar(k, m).unwrap());
    }

    #[test]
    fn profiles_are_sorted_and_complete(n in 1usize..5, d in 0u32..12) {
        let all: Vec<DegreeProfile> = enumerate_profiles(n, d).collect();
        for p in &all {
            prop_assert_eq!(p.total(), d);
            prop_assert!(p.degrees().windows(2).all(|w| w[0] <= w[1]));
        }
        prop_assert!(all.windows(2).all(|w| w[0].degrees() < w[1].degrees()));
        prop_assert_eq!(BigUint::from(all.len()), pbar(n, d as usize).unwrap());
    }
}
