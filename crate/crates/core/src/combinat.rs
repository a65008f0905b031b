//! Partition counts, monomial-space dimensions, and degree profiles.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::highprec::HighFloat;

/// Largest enumeration `enumerate_partitions` will produce.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// A partition as a weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }
}

/// Column degrees `d_1 ≤ … ≤ d_N` of an ansatz.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct DegreeProfile(Vec<u32>);

impl DegreeProfile {
    /// Rejects unsorted input rather than sorting it.
    pub fn new(degrees: Vec<u32>) -> Result<DegreeProfile> {
        if degrees.is_empty() {
            return Err(Error::InvalidArgument("empty degree profile".into()));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!(
                "degree profile {degrees:?} is not nondecreasing"
            )));
        }
        Ok(DegreeProfile(degrees))
    }

    pub fn degrees(&self) -> &[u32] {
        &self.0
    }

    pub fn particles(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The most balanced profile for `(n, total)`: degrees differ by at most one.
    pub fn balanced(n: usize, total: u32) -> DegreeProfile {
        let q = total / n as u32;
        let r = total as usize % n;
        DegreeProfile((0..n).map(|j| q + u32::from(j >= n - r)).collect())
    }
}

impl FromStr for DegreeProfile {
    type Err = Error;

    /// Comma-separated nondecreasing integers, e.g. `"0,1,3"`.
    fn from_str(s: &str) -> Result<DegreeProfile> {
        let degrees = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad degree {t:?} in profile {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        DegreeProfile::new(degrees)
    }
}

impl fmt::Display for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Table of `pbar(k', m')` for `k' ≤ k`, `m' ≤ m`.
///
/// Row `k` is filled from `pbar(k, m) = Σ_{i ≤ m/k} pbar(k-1, m - ik)`,
/// evaluated in telescoped form `pbar(k-1, m) + pbar(k, m-k)`.
#[derive(Clone, Debug, Default)]
pub struct PartitionTable {
    rows: Vec<Vec<BigUint>>,
}

impl PartitionTable {
    pub fn new(k: usize, m: usize) -> PartitionTable {
        let mut rows = Vec::with_capacity(k + 1);
        let mut row0 = vec![BigUint::zero(); m + 1];
        row0[0] = BigUint::one();
        rows.push(row0);
        for kk in 1..=k {
            let prev = &rows[kk - 1];
            let mut row: Vec<BigUint> = Vec::with_capacity(m + 1);
            for mm in 0..=m {
                let mut v = prev[mm].clone();
                if mm >= kk {
                    v += &row[mm - kk];
                }
                row.push(v);
            }
            rows.push(row);
        }
        PartitionTable { rows }
    }

    pub fn max_k(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn max_m(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    pub fn covers(&self, k: usize, m: usize) -> bool {
        !self.rows.is_empty() && k <= self.max_k() && m <= self.max_m()
    }

    pub fn get(&self, k: usize, m: usize) -> Option<&BigUint> {
        self.rows.get(k).and_then(|r| r.get(m))
    }
}

thread_local! {
    static TABLE: RefCell<PartitionTable> = RefCell::new(PartitionTable::default());
}

fn pbar_unchecked(k: usize, m: usize) -> BigUint {
    TABLE.with(|t| {
        let mut t = t.borrow_mut();
        if !t.covers(k, m) {
            let k2 = k.max(t.max_k());
            let m2 = m.max(t.max_m());
            *t = PartitionTable::new(k2, m2);
        }
        t.get(k, m).expect("table covers request").clone()
    })
}

/// Number of partitions of `m` with at most `k` parts.
///
/// `pbar(0, 0) = 1`; `k = 0` with `m > 0` is a domain error.
pub fn pbar(k: usize, m: usize) -> Result<BigUint> {
    if k == 0 {
        return if m == 0 {
            Ok(BigUint::one())
        } else {
            Err(Error::Domain(format!("pbar(0, {m}): no parts available")))
        };
    }
    Ok(pbar_unchecked(k, m))
}

/// `C(k, 2)`, the weight of the staircase `(k-1, …, 1, 0)`.
pub fn staircase(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Number of strictly decreasing partitions of `m` with `k` or `k-1` parts.
///
/// Counted through the staircase bijection with partitions of `m - C(k,2)`
/// into at most `k` parts; below the staircase weight it is counted directly.
pub fn qbar(k: usize, m: usize) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Domain("qbar requires k >= 1".into()));
    }
    let c = staircase(k);
    if m >= c {
        return pbar(k, m - c);
    }
    let direct = enumerate_partitions(k, m, true)?.count();
    Ok(BigUint::from(direct))
}

/// Leading term `m^(k-1) / (k! (k-1)!)` of `pbar(k, m)`.
pub fn pbar_asymptotic(k: usize, m: u64) -> Result<HighFloat> {
    if k == 0 || m == 0 {
        return Err(Error::Domain(format!(
            "pbar_asymptotic needs k >= 1 and m >= 1 (got k={k}, m={m})"
        )));
    }
    let num = HighFloat::from_u64(m).powi(k - 1);
    let den = HighFloat::from_biguint(&(factorial(k) * factorial(k - 1)));
    num.div(&den).checked("pbar_asymptotic")
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, v| acc * v)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Dimension of degree-`d` forms in three variables, `C(d+2, 2)`.
pub fn dim_sym(d: u64) -> u64 {
    (d + 1) * (d + 2) / 2
}

/// Partitions of `m` in decreasing lexicographic order.
///
/// Non-strict: at most `k` parts. Strict: strictly decreasing parts, with
/// exactly `k` or `k - 1` parts.
pub fn enumerate_partitions(k: usize, m: usize, strict: bool) -> Result<PartitionIter> {
    let count = if strict {
        // Upper bound: strict partitions are a subset of the at-most-k ones.
        pbar(k.max(1), m)?
    } else if k == 0 {
        BigUint::from(u32::from(m == 0))
    } else {
        pbar(k, m)?
    };
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::GuardExceeded {
            count: count.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(PartitionIter::new(k, m as u32, strict))
}

/// Depth-first partition generator; parts are chosen largest first.
pub struct PartitionIter {
    k: usize,
    strict: bool,
    target: u32,
    parts: Vec<u32>,
    sum: u32,
    started: bool,
    done: bool,
}

impl PartitionIter {
    fn new(k: usize, m: u32, strict: bool) -> PartitionIter {
        PartitionIter {
            k,
            strict,
            target: m,
            parts: Vec::new(),
            sum: 0,
            started: false,
            done: false,
        }
    }

    fn cap_after(&self, depth: usize) -> u32 {
        match depth {
            0 => self.target,
            _ if self.strict => self.parts[depth - 1].saturating_sub(1),
            _ => self.parts[depth - 1],
        }
    }

    /// Largest weight still placeable in the remaining slots after `depth`
    /// parts, the next part being at most `cap`.
    fn capacity(&self, depth: usize, cap: u32) -> u64 {
        let slots = self.k.saturating_sub(depth) as u64;
        if self.strict {
            let s = slots.min(cap as u64);
            s * cap as u64 - s * s.saturating_sub(1) / 2
        } else {
            slots * cap as u64
        }
    }

    fn accept(&self) -> bool {
        self.sum == self.target
            && (!self.strict || self.parts.len() + 1 >= self.k && self.parts.len() <= self.k)
    }

    /// Extend greedily from the current prefix; true if a leaf was reached.
    fn descend(&mut self) -> bool {
        loop {
            if self.sum == self.target {
                return self.accept();
            }
            let depth = self.parts.len();
            if depth >= self.k {
                return false;
            }
            let rest = self.target - self.sum;
            let cap = self.cap_after(depth).min(rest);
            if cap == 0 || self.capacity(depth, cap) < rest as u64 {
                return false;
            }
            self.parts.push(cap);
            self.sum += cap;
        }
    }

    /// Decrease the deepest part that can still lead to a solution.
    fn backtrack(&mut self) -> bool {
        while let Some(last) = self.parts.pop() {
            self.sum -= last;
            let depth = self.parts.len();
            let rest = self.target - self.sum;
            if last > 1 {
                let next = last - 1;
                if self.capacity(depth, next) >= rest as u64 {
                    self.parts.push(next);
                    self.sum += next;
                    return true;
                }
            }
        }
        false
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.descend() {
                return Some(Partition(self.parts.clone()));
            }
        }
        loop {
            if !self.backtrack() {
                self.done = true;
                return None;
            }
            if self.descend() {
                return Some(Partition(self.parts.clone()));
            }
        }
    }
}

/// All nondecreasing `n`-tuples summing to `total`, in lexicographic order.
pub fn enumerate_profiles(n: usize, total: u32) -> impl Iterator<Item = DegreeProfile> {
    ProfileIter::new(n, total)
}

struct ProfileIter {
    current: Option<Vec<u32>>,
}

impl ProfileIter {
    fn new(n: usize, total: u32) -> ProfileIter {
        let current = if n == 0 {
            None
        } else {
            let mut v = vec![0; n];
            v[n - 1] = total;
            Some(v)
        };
        ProfileIter { current }
    }
}

impl Iterator for ProfileIter {
    type Item = DegreeProfile;

    fn next(&mut self) -> Option<DegreeProfile> {
        let out = self.current.clone()?;
        let v = self.current.as_mut().expect("checked");
        let n = v.len();
        // Successor: bump the rightmost position j < n-1 that can grow, then
        // set positions j..n-1 to that value and push the remainder last.
        let mut advanced = false;
        for j in (0..n.saturating_sub(1)).rev() {
            let rest = v[j..].iter().sum::<u32>();
            let bumped = v[j] + 1;
            let needed = bumped as u64 * (n - j) as u64;
            if needed <= rest as u64 {
                for slot in v.iter_mut().take(n - 1).skip(j) {
                    *slot = bumped;
                }
                v[n - 1] = rest - bumped * (n - j - 1) as u32;
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(DegreeProfile(out))
    }
}

/// `base^exp` as a big integer.
pub fn power(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}
