use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A permutation of particle labels with cached sign.
///
/// Stored 0-based: `images[k]` is where label `k` is sent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParticlePermutation {
    images: Vec<usize>,
    sign: i8,
}

impl ParticlePermutation {
    pub fn identity(n: usize) -> Self {
        ParticlePermutation {
            images: (0..n).collect(),
            sign: 1,
        }
    }

    /// From 0-based images; validates bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &t in &images {
            if t >= n || seen[t] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[t] = true;
        }
        let sign = parity_sign(&images);
        Ok(ParticlePermutation { images, sign })
    }

    /// From 1-based images, as written in cycle-free notation `[σ(1), …, σ(N)]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero_based = images
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| Error::InvalidArgument("particle labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(zero_based)
    }

    /// Transposition of particles `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::InvalidArgument(format!(
                "transposition ({i} {j}) outside 1..{n}"
            )));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Ok(ParticlePermutation {
            images,
            sign: if i == j { 1 } else { -1 },
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different size");
        let images = other.images.iter().map(|&k| self.images[k]).collect();
        ParticlePermutation {
            images,
            sign: self.sign * other.sign,
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (k, &t) in self.images.iter().enumerate() {
            images[t] = k;
        }
        ParticlePermutation {
            images,
            sign: self.sign,
        }
    }

    /// All `n!` permutations in lexicographic order of their image vectors.
    pub fn all(n: usize) -> impl Iterator<Item = ParticlePermutation> {
        (0..n).permutations(n).map(|images| {
            let sign = parity_sign(&images);
            ParticlePermutation { images, sign }
        })
    }
}

/// Sign from the cycle count: parity of `n - #cycles` transpositions.
fn parity_sign(images: &[usize]) -> i8 {
    let n = images.len();
    let mut seen = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut k = start;
        let mut len = 0;
        while !seen[k] {
            seen[k] = true;
            k = images[k];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl fmt::Debug for ParticlePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based: Vec<usize> = self.images.iter().map(|k| k + 1).collect();
        write!(f, "σ{one_based:?}")
    }
}
