use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Number of spatial coordinates per particle.
pub const COORDS: usize = 3;

/// Exponent vector of a monomial in the variables `x[i][a]`.
///
/// Stored densely as `3N` entries (particle-major); the sparse view
/// (`iter_sparse`) reports only nonzero exponents. The total degree is cached.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    exps: Box<[u16]>,
    degree: u32,
}

impl Exponent {
    pub fn one(n: usize) -> Exponent {
        Exponent {
            exps: vec![0; n * COORDS].into_boxed_slice(),
            degree: 0,
        }
    }

    /// Build from the dense particle-major vector of length `3N`.
    pub fn from_dense(exps: Vec<u16>) -> Exponent {
        debug_assert!(exps.len().is_multiple_of(COORDS));
        let degree = exps.iter().map(|&e| e as u32).sum();
        Exponent {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    /// Build from 1-based `(particle, coordinate, exponent)` triples.
    /// Repeated variables accumulate.
    pub fn from_triples(n: usize, triples: &[(usize, usize, u32)]) -> Result<Exponent> {
        let mut exps = vec![0u16; n * COORDS];
        for &(i, a, e) in triples {
            if i == 0 || i > n || a == 0 || a > COORDS {
                return Err(Error::InvalidArgument(format!(
                    "variable x[{i}][{a}] outside {n} particles x {COORDS} coordinates"
                )));
            }
            let slot = &mut exps[(i - 1) * COORDS + (a - 1)];
            *slot = u16::try_from(*slot as u32 + e)
                .map_err(|_| Error::Overflow(format!("exponent of x[{i}][{a}]")))?;
        }
        Ok(Exponent::from_dense(exps))
    }

    /// A single variable `x[i][a]` (1-based).
    pub fn variable(n: usize, i: usize, a: usize) -> Result<Exponent> {
        Exponent::from_triples(n, &[(i, a, 1)])
    }

    pub fn particles(&self) -> usize {
        self.exps.len() / COORDS
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dense(&self) -> &[u16] {
        &self.exps
    }

    /// Exponent of `x[i][a]`, 1-based.
    pub fn get(&self, i: usize, a: usize) -> u16 {
        self.exps[(i - 1) * COORDS + (a - 1)]
    }

    /// The three exponents belonging to particle `i` (0-based).
    pub fn particle(&self, i: usize) -> &[u16] {
        &self.exps[i * COORDS..(i + 1) * COORDS]
    }

    /// Degree in the variables of particle `i` (0-based).
    pub fn particle_degree(&self, i: usize) -> u32 {
        self.particle(i).iter().map(|&e| e as u32).sum()
    }

    /// Per-particle degrees; sums to `degree()`.
    pub fn multidegree(&self) -> Vec<u32> {
        (0..self.particles()).map(|i| self.particle_degree(i)).collect()
    }

    /// Nonzero exponents as 1-based `(particle, coordinate, exponent)`.
    pub fn iter_sparse(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| (k / COORDS + 1, k % COORDS + 1, e as u32))
    }

    pub fn mul(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let exps: Vec<u16> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
            .collect();
        Exponent {
            exps: exps.into_boxed_slice(),
            degree: self.degree + other.degree,
        }
    }

    /// Move the exponents of slot `k` to particle `target[k]` (both 0-based).
    /// `target` must be a bijection on `0..N`.
    pub fn relabel(&self, target: &[usize]) -> Exponent {
        let mut exps = vec![0u16; self.exps.len()];
        for (k, &t) in target.iter().enumerate() {
            exps[t * COORDS..(t + 1) * COORDS].copy_from_slice(self.particle(k));
        }
        Exponent {
            exps: exps.into_boxed_slice(),
            degree: self.degree,
        }
    }

    /// Whether particle exponent triples are strictly decreasing in particle
    /// order. Each orbit of monomials with pairwise distinct particle triples
    /// has exactly one such representative.
    pub fn is_particle_sorted(&self) -> bool {
        (1..self.particles()).all(|i| self.particle(i - 1) > self.particle(i))
    }
}

/// Graded lexicographic: lower total degree first; within a degree, the
/// vector with the larger leading exponent (in flattened particle-major
/// order) comes first, so `x[1][1] < x[1][2] < x[2][1]`.
impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a, e) in self.iter_sparse() {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x[{i}][{a}]")?;
            } else {
                write!(f, "x[{i}][{a}]^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}
