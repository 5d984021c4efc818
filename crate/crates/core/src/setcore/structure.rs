use super::set::FiniteSet;
use crate::error::{Error, Result};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

/// True when `gaps` has gcd 1 and is lexicographically no larger than its
/// reversal, i.e. it is the canonical member of its affine class.
pub fn gaps_are_canonical(gaps: &[u64]) -> bool {
    gcd_all(gaps) == 1 && gaps.iter().le(gaps.iter().rev())
}

/// Canonical representative of the affine class of `a`: minimum 0, gap gcd 1,
/// and the lexicographically smaller gap vector of the set and its reflection.
pub fn normalize_affine(a: &FiniteSet) -> Result<FiniteSet> {
    if a.len() < 2 {
        return Err(Error::Singleton);
    }
    let mut gaps = a.gaps();
    let g = gcd_all(&gaps);
    gaps.iter_mut().for_each(|x| *x /= g);
    if gaps.iter().rev().lt(gaps.iter()) {
        gaps.reverse();
    }
    let mut v = Vec::with_capacity(a.len());
    v.push(0);
    for gap in gaps {
        v.push(v[v.len() - 1] + gap);
    }
    Ok(FiniteSet::from_sorted_unchecked(v))
}

/// Returns the centre sum `s` with `s - A = A`, if any. Only `min + max` can work.
pub fn is_symmetric(a: &FiniteSet) -> Option<u64> {
    let xs = a.elements();
    let s = a.min() + a.max();
    xs.iter()
        .zip(xs.iter().rev())
        .all(|(&x, &y)| x + y == s)
        .then_some(s)
}

/// Whether some `k` elements of `a` form an arithmetic progression.
pub fn contains_ap(a: &FiniteSet, k: usize) -> bool {
    let xs = a.elements();
    match k {
        0 | 1 => return xs.len() >= k,
        2 => return xs.len() >= 2,
        _ => {}
    }
    if xs.len() < k {
        return false;
    }
    let max = a.max();
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            let d = y - x;
            // last term x + (k-1)d must fit below max
            if (k as u64 - 1)
                .checked_mul(d)
                .is_none_or(|span| x + span > max)
            {
                break;
            }
            if (2..k as u64).all(|t| a.contains(x + t * d)) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::classify;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_affine(&set(&[103, 127, 151, 199, 211, 223, 283, 307, 331])).unwrap(),
            set(&[0, 2, 4, 8, 9, 10, 15, 17, 19])
        );
        assert_eq!(normalize_affine(&set(&[0, 1, 2])).unwrap(), set(&[0, 1, 2]));
        assert_eq!(
            normalize_affine(&set(&[10, 30, 50])).unwrap(),
            set(&[0, 1, 2])
        );
        assert!(matches!(
            normalize_affine(&set(&[4])),
            Err(Error::Singleton)
        ));
        // reflection is chosen when its gap vector is smaller
        assert_eq!(normalize_affine(&set(&[0, 2, 3])).unwrap(), set(&[0, 1, 3]));
    }

    #[test]
    fn canonical_gaps() {
        assert!(gaps_are_canonical(&[1, 1]));
        assert!(gaps_are_canonical(&[1, 2]));
        assert!(!gaps_are_canonical(&[2, 1]));
        assert!(!gaps_are_canonical(&[2, 2]));
        assert!(gaps_are_canonical(&[2, 1, 1, 3, 4, 1, 2]));
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(is_symmetric(&set(&[3, 5, 7, 9, 11])), Some(14));
        assert_eq!(is_symmetric(&set(&[0, 1, 3, 4])), Some(4));
        assert_eq!(is_symmetric(&set(&[0, 1, 2, 4])), None);
        assert_eq!(is_symmetric(&set(&[6])), Some(12));
    }

    #[test]
    fn ap_examples() {
        assert!(contains_ap(&set(&[0, 2, 3, 4, 7]), 3));
        assert!(!contains_ap(&set(&[0, 1, 3, 7]), 3));
        assert!(contains_ap(&set(&[0, 2, 3, 4, 6, 8]), 4));
        assert!(!contains_ap(&set(&[0, 1, 3, 7, 12, 20]), 4));
        assert!(contains_ap(&set(&[0, 2, 3, 4, 6, 8]), 5));
        assert!(!contains_ap(&set(&[0, 2, 3, 4, 6, 8]), 6));
    }

    fn naive_contains_ap(a: &FiniteSet, k: usize) -> bool {
        let xs = a.elements();
        for &x in xs {
            for &y in xs {
                if y > x && (1..k as u64).all(|t| a.contains(x + t * (y - x))) {
                    return true;
                }
            }
        }
        false
    }

    fn arb_set() -> impl Strategy<Value = FiniteSet> {
        proptest::collection::btree_set(0u64..60, 2..14)
            .prop_map(|s| FiniteSet::new(s.into_iter().collect()).unwrap())
    }

    proptest! {
        #[test]
        fn ap_matches_naive(a in arb_set(), k in 3usize..6) {
            prop_assert_eq!(contains_ap(&a, k), naive_contains_ap(&a, k));
        }

        #[test]
        fn normalize_is_orbit_invariant(a in arb_set(), u in 1u64..=50, v in 0u64..=1000) {
            let n = normalize_affine(&a).unwrap();
            prop_assert_eq!(normalize_affine(&n).unwrap(), n.clone());
            prop_assert_eq!(normalize_affine(&a.affine(u, v).unwrap()).unwrap(), n.clone());
            prop_assert_eq!(normalize_affine(&a.reflect()).unwrap(), n.clone());
            prop_assert!(gaps_are_canonical(&n.gaps()));
        }

        #[test]
        fn symmetric_sets_are_balanced(b in proptest::collection::vec(0u64..500, 1..12), extra in 0u64..200) {
            let top = b.iter().copied().max().unwrap() + extra;
            let mut v = b.clone();
            v.extend(b.iter().map(|&x| top - x));
            let a = FiniteSet::new(v).unwrap();
            prop_assert!(is_symmetric(&a).is_some());
            prop_assert_eq!(classify(&a).margin, 0);
        }
    }
}
