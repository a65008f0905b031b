use backflow::combinat::{binomial, enumerate_profiles, DegreeProfile};
use backflow::dimension::{
    best_profile, determinant_count_bound, gap_report, min_degree, monomial_multisets, source_column_dim,
    source_dim_asymptotic, source_dim_exact, source_dim_paper, source_report, target_dim_asymptotic,
    target_dim_exact, target_dim_paper_lower, target_report, Selection,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn profile(s: &str) -> DegreeProfile {
    s.parse().unwrap()
}

/// Degrees of all monomials in three variables up to `max_d`, one entry per monomial.
fn monomial_degrees(max_d: u32) -> Vec<u32> {
    (0..=max_d)
        .flat_map(|d| std::iter::repeat_n(d, ((d + 1) * (d + 2) / 2) as usize))
        .collect()
}

/// Count `n`-subsets of distinct monomials with degree sum `total`.
fn subsets_oracle(n: usize, total: u32) -> u64 {
    fn go(degs: &[u32], start: usize, left: usize, rest: u32) -> u64 {
        if left == 0 {
            return u64::from(rest == 0);
        }
        (start..degs.len())
            .filter(|&k| degs[k] <= rest)
            .map(|k| go(degs, k + 1, left - 1, rest - degs[k]))
            .sum()
    }
    go(&monomial_degrees(total), 0, n, total)
}

#[test]
fn target_examples() {
    for d in 0..10 {
        assert_eq!(target_dim_exact(1, d), binomial(d as u64 + 2, 2));
    }
    assert_eq!(target_dim_exact(2, 2), big(9));
    assert_eq!(target_dim_exact(2, 0), big(0));
    for n in 1..=3 {
        for d in 0..=7 {
            assert_eq!(target_dim_exact(n, d), big(subsets_oracle(n, d)), "N={n} D={d}");
        }
    }
}

#[test]
fn paper_lower_examples() {
    assert_eq!(target_dim_paper_lower(2, 8).unwrap(), big(378));
    for d in 0..15 {
        assert_eq!(target_dim_paper_lower(1, d).unwrap(), binomial(d as u64 + 2, 2));
    }
    for n in 1..=4 {
        for d in 0..=24 {
            assert!(target_dim_paper_lower(n, d).unwrap() <= target_dim_exact(n, d));
        }
    }
}

#[test]
fn target_asymptotic() {
    for n in 1..=4 {
        let mut last = 0.0;
        for d in [1u64, 5, 17, 40, 100] {
            let v = target_dim_asymptotic(n, d).unwrap().to_f64();
            assert!(v > last);
            last = v;
            let doubled = target_dim_asymptotic(n, 2 * d).unwrap().to_f64();
            let expected = 2f64.powi(3 * n as i32 - 1);
            assert!((doubled / v / expected - 1.0).abs() < 1e-12);
        }
    }
    // D^(3N-1) e^(2N-1) / (π 2^(4N) N^(4N-2)) at N = 3, D = 100.
    let closed = 100f64.powi(8) * 5f64.exp() / (std::f64::consts::PI * 2f64.powi(12) * 3f64.powi(10));
    let v = target_dim_asymptotic(3, 100).unwrap().to_f64();
    assert!((v / closed - 1.0).abs() < 1e-12, "{v} vs {closed}");
}

#[test]
fn source_examples() {
    assert_eq!(source_dim_exact(&profile("0,2")), big(22));
    assert_eq!(source_dim_exact(&profile("0,0,1")), big(8));
    for d in 0..12 {
        assert_eq!(source_column_dim(2, d), binomial(d as u64 + 5, 5));
    }
    for total in 0..=12 {
        for p in enumerate_profiles(2, total) {
            assert_eq!(source_dim_exact(&p), source_dim_paper(&p), "{p}");
        }
    }
    for n in 1..=4 {
        for total in 0..=6 * n as u32 {
            for p in enumerate_profiles(n, total).filter(|p| p.degrees().iter().all(|&d| d <= 6)) {
                assert!(source_dim_exact(&p) <= source_dim_paper(&p), "{p}");
            }
        }
    }
    for n in 1..=4 {
        let a = source_dim_asymptotic(n, 30).unwrap().to_f64();
        let b = source_dim_asymptotic(n, 60).unwrap().to_f64();
        assert!((b / a / 2f64.powi(3 * n as i32 - 1) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn multisets_by_stars_and_bars() {
    // Multisets of two monomials: unordered pairs, counted from ordered pairs.
    for m in 0..10u32 {
        let ordered = binomial(m as u64 + 5, 5);
        let diagonal = if m % 2 == 0 { binomial(m as u64 / 2 + 2, 2) } else { big(0) };
        assert_eq!(monomial_multisets(2, m), (ordered + &diagonal) / big(2));
    }
}

#[test]
fn minimal_degree() {
    assert_eq!(min_degree(1), 0);
    assert_eq!(min_degree(4), 3);
    for n in 1..=7 {
        let lo = min_degree(n) as u32;
        if lo > 0 {
            assert_eq!(target_dim_exact(n, lo - 1), big(0));
        }
        for d in lo..lo + 25 {
            assert!(target_dim_exact(n, d) > big(0), "N={n} D={d}");
        }
    }
    // Observed band of min_degree(N) / N^(4/3) for 2 ≤ N ≤ 200.
    for n in 2..=200 {
        let r = min_degree(n) as f64 / (n as f64).powf(4.0 / 3.0);
        assert!((0.39..=1.37).contains(&r), "N={n}: {r}");
    }
}

#[test]
fn counting_bound() {
    assert_eq!(determinant_count_bound(2).unwrap(), big(8));
    assert_eq!(determinant_count_bound(3).unwrap(), big(729));
    assert!(determinant_count_bound(1).is_err());
}

#[test]
fn gap_report_consistency() {
    let r = gap_report(3, 12).unwrap();
    let t = r.target.exact.as_ref().unwrap();
    assert!(r.target.paper_bound.as_ref().unwrap() <= t);
    assert!(r.target.asymptotic.is_some());
    for s in [&r.best_source, &r.balanced_source] {
        assert!(s.exact.as_ref().unwrap() <= s.paper_bound.as_ref().unwrap());
        assert!(s.asymptotic.is_some());
    }
    let max = enumerate_profiles(3, 12).map(|p| source_dim_exact(&p)).max().unwrap();
    assert_eq!(r.best_source.exact.as_ref().unwrap(), &max);
    assert_eq!(r.determinant_count_bound, big(729));
    assert!(r.discrepancy_flags.contains(&"sec3-binomial".to_string()));
    assert!(r.discrepancy_flags.contains(&"balanced-profile-claim".to_string()));
    assert!(gap_report(3, 1).is_err());

    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["determinant_count_bound"], serde_json::json!(729));
    assert!(json["target"]["exact"].is_number());
}

#[test]
fn report_selection() {
    let only = Selection {
        exact: true,
        bound: false,
        asymptotic: false,
    };
    let r = target_report(2, 2, only).unwrap();
    assert_eq!(r.exact, Some(big(9)));
    assert!(r.paper_bound.is_none() && r.asymptotic.is_none());
    let s = source_report(&profile("0,2"), Selection::ALL).unwrap();
    assert_eq!(s.exact, Some(big(22)));
    assert_eq!(s.paper_bound, Some(big(22)));
    let big_n = serde_json::to_string(&target_report(4, 60, Selection::ALL).unwrap()).unwrap();
    assert!(big_n.contains("\"exact\":"));
}

#[test]
fn best_profile_is_argmax() {
    for n in 2..=4 {
        for d in 0..=10 {
            let (p, v) = best_profile(n, d);
            assert_eq!(source_dim_exact(&p), v);
            assert!(enumerate_profiles(n, d).all(|q| source_dim_exact(&q) <= v));
        }
    }
}

proptest! {
    #[test]
    fn exact_target_bounded_by_all_monomials(n in 1usize..5, d in 0u32..25) {
        // Subsets of size n with degree sum d inject into ordered tuples.
        let tuples = binomial(d as u64 + 3 * n as u64 - 1, 3 * n as u64 - 1);
        prop_assert!(target_dim_exact(n, d) <= tuples);
    }

    #[test]
    fn column_dim_is_orbit_count(n in 2usize..5, d in 0u32..8) {
        let expected: BigUint = (0..=d)
            .map(|z| binomial(z as u64 + 2, 2) * monomial_multisets(n - 1, d - z))
            .sum();
        prop_assert_eq!(source_column_dim(n, d), expected);
    }
}
