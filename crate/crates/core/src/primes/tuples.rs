use serde::{Deserialize, Serialize};

use super::sieve::sieve;
use crate::error::{Error, Result};

/// An offset tuple `(b_1, ..., b_m)`, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSpec {
    offsets: Vec<u64>,
}

impl TupleSpec {
    pub fn new(mut offsets: Vec<u64>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::InvalidParams(
                "a tuple needs at least one offset".into(),
            ));
        }
        offsets.sort_unstable();
        if offsets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(
                "tuple offsets must be distinct".into(),
            ));
        }
        Ok(TupleSpec { offsets })
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Translated so the first offset is 0.
    pub fn normalized(&self) -> Self {
        let b0 = self.offsets[0];
        TupleSpec {
            offsets: self.offsets.iter().map(|&b| b - b0).collect(),
        }
    }
}

/// True when for every modulus `k` in `2..=m` some residue class is missed.
/// Larger moduli cannot be covered by `m` offsets.
pub fn is_admissible(t: &TupleSpec) -> bool {
    let m = t.len() as u64;
    (2..=m).all(|k| {
        let mut hit = vec![false; k as usize];
        for &b in t.offsets() {
            hit[(b % k) as usize] = true;
        }
        hit.contains(&false)
    })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether every `b_i + n` is prime.
pub fn is_match(t: &TupleSpec, n: u64) -> bool {
    t.offsets().iter().all(|&b| is_prime(b + n))
}

/// Smallest `n` in `1..=n_max` such that every `b_i + n` is prime.
pub fn find_match(t: &TupleSpec, n_max: u64) -> Option<u64> {
    let top = t.offsets().last()? + n_max;
    let mut prime = vec![false; top as usize + 1];
    for p in sieve(top) {
        prime[p as usize] = true;
    }
    (1..=n_max).find(|&n| t.offsets().iter().all(|&b| prime[(b + n) as usize]))
}
