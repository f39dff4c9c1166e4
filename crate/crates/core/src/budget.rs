use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits shared by every constructor that can blow up combinatorially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of points in any constructed space.
    pub points: usize,
    /// Maximum number of words enumerated exhaustively before sampling kicks in.
    pub words: usize,
    /// Maximum number of generators of a derived system (powers, products).
    pub generators: usize,
    /// Maximum number of chains materialized by the pseudo-orbit estimators.
    pub chains: usize,
    /// Work allowance of one exact separated/spanning search, in approximate
    /// bitset word operations. Past it the counts fall back to flagged greedy values.
    pub search: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            points: 1 << 16,
            words: 4096,
            generators: 4096,
            chains: 2_000_000,
            search: 20_000_000,
        }
    }
}

impl Budget {
    pub(crate) fn check_points(&self, n: u128, what: &str) -> Result<()> {
        if n > self.points as u128 {
            return Err(Error::Resource(format!(
                "{what}: {n} points exceeds budget of {}",
                self.points
            )));
        }
        Ok(())
    }

    pub(crate) fn check_generators(&self, n: u128, what: &str) -> Result<()> {
        if n > self.generators as u128 {
            return Err(Error::Resource(format!(
                "{what}: {n} generators exceeds budget of {}",
                self.generators
            )));
        }
        Ok(())
    }
}

/// `base^exp` without overflow, saturating at `u128::MAX`.
pub(crate) fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    acc
}
