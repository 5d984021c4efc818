use serde::{Deserialize, Serialize};

/// Primes up to and including `limit`, by the sieve of Eratosthenes.
pub fn sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    (2..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}

/// Increasing primes up to `limit`; 2 is left out unless `include_two`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePool {
    pub limit: u64,
    pub include_two: bool,
    pub primes: Vec<u64>,
}

impl PrimePool {
    pub fn new(limit: u64, include_two: bool) -> Self {
        let primes = sieve(limit)
            .into_iter()
            .filter(|&p| include_two || p != 2)
            .collect();
        PrimePool {
            limit,
            include_two,
            primes,
        }
    }

    pub fn odd(limit: u64) -> Self {
        Self::new(limit, false)
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(sieve(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let p = PrimePool::odd(73);
        assert_eq!(p.len(), 20);
        assert_eq!((p.primes[0], *p.primes.last().unwrap()), (3, 73));
        assert_eq!(PrimePool::odd(109).len(), 28);
        assert_eq!(PrimePool::new(109, true).len(), 29);
        assert!(sieve(1).is_empty());
        assert_eq!(sieve(2), vec![2]);
    }

    #[test]
    fn agrees_with_trial_division() {
        let is_prime = |n: u64| {
            n >= 2
                && (2..n)
                    .take_while(|d| d * d <= n)
                    .all(|d| !n.is_multiple_of(d))
        };
        let want: Vec<u64> = (0..2000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve(1999), want);
    }
}
