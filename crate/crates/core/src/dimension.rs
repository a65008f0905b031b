//! Dimensions of the ansatz source and target spaces.
//!
//! Exact counts sit next to the leading-order bounds they are compared with:
//! the target lower bound that keeps strictly increasing block degrees with a
//! cutoff on the smallest block, the per-column product-sum upper bound on the
//! source, and the asymptotic leading terms of both.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::combinat::{binomial, dim_sym, enumerate_profiles, power, DegreeProfile};
use crate::error::{Error, Result};
use crate::highprec::HighFloat;

/// Raised when the block-dimension statement `C(d+1, 2)` is quoted next to
/// the three-variable monomial count `C(d+2, 2)` used throughout.
pub const FLAG_SEC3_BINOMIAL: &str = "sec3-binomial";
/// Raised when the largest source component is not the balanced profile.
pub const FLAG_BALANCED_PROFILE: &str = "balanced-profile-claim";
/// Raised when the target cutoff bound is evaluated below `D = N^2`.
pub const FLAG_BELOW_CUTOFF_RANGE: &str = "paper-lower-below-n-squared";

/// Multiplies `table` (indexed `[count][degree]`) by the block of `size`
/// monomials of degree `delta`, choosing `k` of them with weight `w(k)`.
fn absorb_block(
    table: &[Vec<BigUint>],
    size: u64,
    delta: u32,
    max_count: usize,
    max_degree: u32,
    weight: impl Fn(u64, u64) -> BigUint,
) -> Vec<Vec<BigUint>> {
    let mut next = vec![vec![BigUint::zero(); max_degree as usize + 1]; max_count + 1];
    for (n0, row) in table.iter().enumerate() {
        for (t0, v) in row.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for k in 0..=(max_count - n0) {
                let t = t0 as u64 + k as u64 * delta as u64;
                if t > max_degree as u64 {
                    break;
                }
                let w = weight(size, k as u64);
                if w.is_zero() {
                    break;
                }
                next[n0 + k][t as usize] += v * w;
            }
        }
    }
    next
}

/// Number of `count`-element sets of distinct three-variable monomials whose
/// degrees sum to `total`: the dimension of the degree-`total` slice of the
/// `count`-th exterior power.
pub fn target_dim_exact(count: usize, total: u32) -> BigUint {
    let mut table = vec![vec![BigUint::zero(); total as usize + 1]; count + 1];
    table[0][0] = BigUint::one();
    for delta in 0..=total {
        table = absorb_block(&table, dim_sym(delta as u64), delta, count, total, binomial);
    }
    table[count][total as usize].clone()
}

/// Number of multisets of `count` three-variable monomials with total degree
/// `total`.
pub fn monomial_multisets(count: usize, total: u32) -> BigUint {
    let mut table = vec![vec![BigUint::zero(); total as usize + 1]; count + 1];
    table[0][0] = BigUint::one();
    for delta in 0..=total {
        table = absorb_block(&table, dim_sym(delta as u64), delta, count, total, |s, k| {
            binomial(s + k - 1, k)
        });
    }
    table[count][total as usize].clone()
}

/// Restricted target sum over strictly increasing block degrees
/// `p_1 < … < p_N`, `Σ p_j = D`, `p_1 ≥ ⌈D / 2N⌉`, of `Π C(p_j + 2, 2)`.
pub fn target_dim_paper_lower(n: usize, total: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let cutoff = (total as u64).div_ceil(2 * n as u64) as u32;
    let mut acc = BigUint::zero();
    strictly_increasing(n, total, cutoff, &mut Vec::new(), &mut |ps| {
        acc += ps
            .iter()
            .fold(BigUint::one(), |a, &p| a * dim_sym(p as u64));
    });
    Ok(acc)
}

fn strictly_increasing(
    slots: usize,
    remaining: u32,
    min: u32,
    current: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]),
) {
    if slots == 0 {
        if remaining == 0 {
            visit(current);
        }
        return;
    }
    if slots == 1 {
        if remaining >= min {
            current.push(remaining);
            visit(current);
            current.pop();
        }
        return;
    }
    let mut p = min;
    loop {
        // Smallest completion: p, p+1, …, p+slots-1.
        let s = slots as u64;
        let least = s * p as u64 + s * (s - 1) / 2;
        if least > remaining as u64 {
            break;
        }
        current.push(p);
        strictly_increasing(slots - 1, remaining - p, p + 1, current, visit);
        current.pop();
        p += 1;
    }
}

/// Leading term `D^(3N-1) e^(2N-1) / (π 2^(4N) N^(4N-2))` of the target bound.
pub fn target_dim_asymptotic(n: usize, total: u64) -> Result<HighFloat> {
    if n == 0 || total == 0 {
        return Err(Error::InvalidArgument("need N >= 1 and D >= 1".into()));
    }
    let d = HighFloat::from_u64(total).powi(3 * n - 1);
    let e = HighFloat::e().powi(2 * n - 1);
    let two = HighFloat::from_u64(2).powi(4 * n);
    let nn = HighFloat::from_u64(n as u64).powi(4 * n - 2);
    d.mul(&e)
        .div(&HighFloat::pi().mul(&two).mul(&nn))
        .checked("target_dim_asymptotic")
}

/// Dimension of the degree-`d` tail-symmetric orbitals in `n` slots:
/// `Σ_z C(z+2, 2) · #(multisets of n-1 monomials of total degree d - z)`.
pub fn source_column_dim(n: usize, d: u32) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    (0..=d)
        .map(|z| BigUint::from(dim_sym(z as u64)) * monomial_multisets(n - 1, d - z))
        .sum()
}

/// Exact parameter count of a profile, the sum of its column dimensions.
pub fn source_dim_exact(profile: &DegreeProfile) -> BigUint {
    let n = profile.particles();
    profile
        .degrees()
        .iter()
        .map(|&d| source_column_dim(n, d))
        .sum()
}

/// Product-sum bound for one column:
/// `Σ_z C(z+2,2) Σ_{δ_2 ≤ … ≤ δ_N, Σδ = d-z} Π C(δ_j+2, 2)`.
pub fn source_column_dim_paper(n: usize, d: u32) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    for z in 0..=d {
        let mut inner = BigUint::zero();
        nondecreasing(n - 1, d - z, 0, &mut |deltas| {
            inner += deltas
                .iter()
                .fold(BigUint::one(), |a, &p| a * dim_sym(p as u64));
        });
        total += BigUint::from(dim_sym(z as u64)) * inner;
    }
    total
}

fn nondecreasing(slots: usize, remaining: u32, min: u32, visit: &mut impl FnMut(&[u32])) {
    fn rec(
        slots: usize,
        remaining: u32,
        min: u32,
        current: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]),
    ) {
        if slots == 0 {
            if remaining == 0 {
                visit(current);
            }
            return;
        }
        let mut p = min;
        while p as u64 * slots as u64 <= remaining as u64 {
            current.push(p);
            rec(slots - 1, remaining - p, p, current, visit);
            current.pop();
            p += 1;
        }
    }
    rec(slots, remaining, min, &mut Vec::new(), visit)
}

pub fn source_dim_paper(profile: &DegreeProfile) -> BigUint {
    let n = profile.particles();
    profile
        .degrees()
        .iter()
        .map(|&d| source_column_dim_paper(n, d))
        .sum()
}

/// Leading term `D^(3N-1) e^(2N-3) / (N^(7N-4) 2^(N+1) π)` of the source bound.
pub fn source_dim_asymptotic(n: usize, total: u64) -> Result<HighFloat> {
    if n == 0 || total == 0 {
        return Err(Error::InvalidArgument("need N >= 1 and D >= 1".into()));
    }
    let d = HighFloat::from_u64(total).powi(3 * n - 1);
    // e^(2N-3) is e^(-1) at N = 1.
    let e = if n >= 2 {
        HighFloat::e().powi(2 * n - 3)
    } else {
        HighFloat::from_u64(1).div(&HighFloat::e())
    };
    let nn = HighFloat::from_u64(n as u64).powi(7 * n - 4);
    let two = HighFloat::from_u64(2).powi(n + 1);
    d.mul(&e)
        .div(&nn.mul(&two).mul(&HighFloat::pi()))
        .checked("source_dim_asymptotic")
}

/// Smallest `D` admitting `n` distinct monomials: the sum of the `n` smallest
/// monomial degrees.
pub fn min_degree(n: usize) -> u64 {
    let mut left = n as u64;
    let mut total = 0u64;
    let mut delta = 0u64;
    while left > 0 {
        let take = left.min(dim_sym(delta));
        total += take * delta;
        left -= take;
        delta += 1;
    }
    total
}

/// `N^(3N-3)`.
pub fn determinant_count_bound(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "determinant count bound needs N >= 2, got {n}"
        )));
    }
    Ok(power(n as u64, 3 * n as u64 - 3))
}

/// Which formula a [`DimensionReport`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    Target,
    Source,
}

/// Exact value, bound, and leading-order term for one space.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub formula: Formula,
    pub n: usize,
    pub degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<DegreeProfile>,
    #[serde(serialize_with = "ser_opt_big", skip_serializing_if = "Option::is_none")]
    pub exact: Option<BigUint>,
    /// Lower bound for the target, upper bound for the source.
    #[serde(serialize_with = "ser_opt_big", skip_serializing_if = "Option::is_none")]
    pub paper_bound: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic: Option<HighFloat>,
    pub discrepancy_flags: Vec<String>,
    pub notes: Vec<String>,
}

/// Which values a report should carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Selection {
    pub exact: bool,
    pub bound: bool,
    pub asymptotic: bool,
}

impl Selection {
    pub const ALL: Selection = Selection {
        exact: true,
        bound: true,
        asymptotic: true,
    };
}

const BINOMIAL_NOTE: &str = "block dimension is quoted as C(d+1,2) in the target estimate; \
     three-variable forms of degree d number C(d+2,2), which is what is counted here";

pub fn target_report(n: usize, total: u32, sel: Selection) -> Result<DimensionReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let mut flags = vec![FLAG_SEC3_BINOMIAL.to_string()];
    let mut notes = vec![BINOMIAL_NOTE.to_string()];
    if sel.bound && (total as u64) < (n as u64 * n as u64) {
        flags.push(FLAG_BELOW_CUTOFF_RANGE.into());
        notes.push(format!(
            "cutoff bound evaluated at D = {total} < N^2 = {}",
            n * n
        ));
    }
    Ok(DimensionReport {
        formula: Formula::Target,
        n,
        degree: total,
        profile: None,
        exact: sel.exact.then(|| target_dim_exact(n, total)),
        paper_bound: if sel.bound {
            Some(target_dim_paper_lower(n, total)?)
        } else {
            None
        },
        asymptotic: if sel.asymptotic && total > 0 {
            Some(target_dim_asymptotic(n, total as u64)?)
        } else {
            None
        },
        discrepancy_flags: flags,
        notes,
    })
}

pub fn source_report(profile: &DegreeProfile, sel: Selection) -> Result<DimensionReport> {
    let n = profile.particles();
    let total = profile.total();
    Ok(DimensionReport {
        formula: Formula::Source,
        n,
        degree: total,
        profile: Some(profile.clone()),
        exact: sel.exact.then(|| source_dim_exact(profile)),
        paper_bound: sel.bound.then(|| source_dim_paper(profile)),
        asymptotic: if sel.asymptotic && total > 0 {
            Some(source_dim_asymptotic(n, total as u64)?)
        } else {
            None
        },
        discrepancy_flags: Vec::new(),
        notes: Vec::new(),
    })
}

/// Profile with the largest exact parameter count (first in lexicographic
/// order on ties), with that count.
pub fn best_profile(n: usize, total: u32) -> (DegreeProfile, BigUint) {
    let mut best: Option<(DegreeProfile, BigUint)> = None;
    for p in enumerate_profiles(n, total) {
        let dim = source_dim_exact(&p);
        if best.as_ref().is_none_or(|(_, b)| dim > *b) {
            best = Some((p, dim));
        }
    }
    best.expect("at least one profile")
}

/// Target versus source comparison at fixed `(N, D)`.
#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub n: usize,
    pub degree: u32,
    pub target: DimensionReport,
    /// Largest source component over all profiles.
    pub best_source: DimensionReport,
    pub balanced_source: DimensionReport,
    /// Exact target dimension over the best-profile exact source dimension.
    pub exact_ratio: f64,
    /// Ratio of the two leading-order terms, `≈ N^(3N-3) e^2 / 2^(3N-1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotic_ratio: Option<HighFloat>,
    #[serde(serialize_with = "ser_big")]
    pub determinant_count_bound: BigUint,
    pub discrepancy_flags: Vec<String>,
}

pub fn gap_report(n: usize, total: u32) -> Result<GapReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("gap report needs N >= 2".into()));
    }
    if (total as u64) < min_degree(n) {
        return Err(Error::InvalidArgument(format!(
            "D = {total} is below the minimal degree {} for N = {n}",
            min_degree(n)
        )));
    }
    let target = target_report(n, total, Selection::ALL)?;
    let (best, _) = best_profile(n, total);
    let balanced = DegreeProfile::balanced(n, total);
    let best_source = source_report(&best, Selection::ALL)?;
    let balanced_source = source_report(&balanced, Selection::ALL)?;

    let mut flags = target.discrepancy_flags.clone();
    if best != balanced {
        flags.push(FLAG_BALANCED_PROFILE.into());
    }
    let t = target.exact.as_ref().expect("selected");
    let s = best_source.exact.as_ref().expect("selected");
    let exact_ratio = ratio_f64(t, s);
    let asymptotic_ratio = match (&target.asymptotic, &best_source.asymptotic) {
        (Some(a), Some(b)) => Some(a.div(b)),
        _ => None,
    };
    Ok(GapReport {
        n,
        degree: total,
        target,
        best_source,
        balanced_source,
        exact_ratio,
        asymptotic_ratio,
        determinant_count_bound: determinant_count_bound(n)?,
        discrepancy_flags: flags,
    })
}

pub(crate) fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::INFINITY;
    }
    HighFloat::from_biguint(a)
        .div(&HighFloat::from_biguint(b))
        .to_f64()
}

/// Big integers are written as JSON numbers of arbitrary length.
pub(crate) fn big_json(v: &BigUint) -> serde_json::Value {
    serde_json::Value::Number(v.to_string().parse().expect("decimal integer"))
}

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&big_json(v), s)
}

pub(crate) fn ser_opt_big<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_big(v, s),
        None => s.serialize_none(),
    }
}

/// Saturating conversion for sizes that are compared against machine limits.
pub(crate) fn big_to_u64(v: &BigUint) -> u64 {
    v.to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn target_examples() {
        assert_eq!(target_dim_exact(2, 2), big(9));
        assert_eq!(target_dim_exact(2, 0), big(0));
        for d in 0..8 {
            assert_eq!(target_dim_exact(1, d), big(dim_sym(d as u64)));
        }
    }

    #[test]
    fn paper_lower_examples() {
        assert_eq!(target_dim_paper_lower(2, 8).unwrap(), big(378));
        assert_eq!(target_dim_paper_lower(1, 5).unwrap(), big(21));
    }

    #[test]
    fn source_examples() {
        let p = DegreeProfile::new(vec![0, 2]).unwrap();
        assert_eq!(source_dim_exact(&p), big(22));
        assert_eq!(source_dim_paper(&p), big(22));
        let q = DegreeProfile::new(vec![0, 0, 1]).unwrap();
        assert_eq!(source_dim_exact(&q), big(8));
        for d in 0..7 {
            assert_eq!(source_column_dim(2, d), binomial(d as u64 + 5, 5));
        }
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(min_degree(1), 0);
        assert_eq!(min_degree(4), 3);
        assert_eq!(min_degree(3), 2);
    }

    #[test]
    fn bound_values() {
        assert_eq!(determinant_count_bound(2).unwrap(), big(8));
        assert_eq!(determinant_count_bound(3).unwrap(), big(729));
        assert!(determinant_count_bound(1).is_err());
    }

    #[test]
    fn report_serializes_big_numbers_as_numbers() {
        let r = target_report(2, 2, Selection::ALL).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exact"], serde_json::json!(9));
        assert!(v["discrepancy_flags"]
            .as_array()
            .unwrap()
            .contains(&serde_json::json!(FLAG_SEC3_BINOMIAL)));
    }
}
