use crate::polyalg::{inv_mod, mul_mod, sub_mod};

/// Incremental row-echelon basis over `F_p` for sparse column vectors.
///
/// Each stored pivot vector is normalized to 1 at its pivot row and is zero
/// on every smaller row index, so reduction can sweep rows in increasing order.
#[derive(Clone, Debug)]
pub struct Echelon {
    prime: u64,
    pivots: Vec<Option<Vec<(u32, u64)>>>,
    rank: usize,
    buffer: Vec<u64>,
}

impl Echelon {
    pub fn new(prime: u64) -> Echelon {
        Echelon {
            prime,
            pivots: Vec::new(),
            rank: 0,
            buffer: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduce `column` against the basis; returns true if it was independent.
    pub fn insert(&mut self, column: &[(u32, u64)]) -> bool {
        let Some(max_row) = column.iter().map(|&(r, _)| r as usize).max() else {
            return false;
        };
        let p = self.prime;
        let width = (max_row + 1).max(self.buffer.len());
        if self.buffer.len() < width {
            self.buffer.resize(width, 0);
        }
        if self.pivots.len() < width {
            self.pivots.resize(width, None);
        }
        let mut lo = usize::MAX;
        let mut hi = 0usize;
        for &(r, v) in column {
            let r = r as usize;
            self.buffer[r] = (self.buffer[r] + v) % p;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let mut result = false;
        let mut r = lo;
        while r <= hi {
            let v = self.buffer[r];
            if v == 0 {
                r += 1;
                continue;
            }
            match &self.pivots[r] {
                Some(pivot) => {
                    for &(row, w) in pivot {
                        let row = row as usize;
                        self.buffer[row] = sub_mod(self.buffer[row], mul_mod(v, w, p), p);
                        hi = hi.max(row);
                    }
                    debug_assert_eq!(self.buffer[r], 0);
                }
                None => {
                    let inv = inv_mod(v, p);
                    let vector: Vec<(u32, u64)> = (r..=hi)
                        .filter(|&k| self.buffer[k] != 0)
                        .map(|k| (k as u32, mul_mod(self.buffer[k], inv, p)))
                        .collect();
                    self.pivots[r] = Some(vector);
                    self.rank += 1;
                    result = true;
                    break;
                }
            }
            r += 1;
        }
        let end = hi.min(self.buffer.len() - 1);
        for slot in &mut self.buffer[lo..=end] {
            *slot = 0;
        }
        result
    }
}

/// Rank of a set of sparse columns over `F_p`.
pub fn rank_mod_p(columns: &[Vec<(u32, u64)>], prime: u64) -> usize {
    let mut e = Echelon::new(prime);
    for c in columns {
        e.insert(c);
    }
    e.rank()
}
