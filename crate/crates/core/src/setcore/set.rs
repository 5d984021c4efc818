use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest element a [`FiniteSet`] may hold; any pairwise sum stays below 2^63.
pub const MAX_ELEMENT: u64 = (1 << 62) - 1;

/// A nonempty, strictly increasing sequence of non-negative integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    /// Builds a set from arbitrary values, sorting and removing duplicates.
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::from_sorted(elements)
    }

    /// Builds a set from values that are already strictly increasing.
    pub fn from_sorted(elements: Vec<u64>) -> Result<Self> {
        let Some(&last) = elements.last() else {
            return Err(Error::EmptySet);
        };
        if last > MAX_ELEMENT {
            return Err(Error::ElementTooLarge(last as u128));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "elements must be strictly increasing".into(),
            ));
        }
        Ok(FiniteSet(elements))
    }

    /// Constructor for callers that already hold the invariant.
    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(*elements.last().unwrap() <= MAX_ELEMENT);
        FiniteSet(elements)
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> u64 {
        self.0[0]
    }

    pub fn max(&self) -> u64 {
        self.0[self.0.len() - 1]
    }

    pub fn diameter(&self) -> u64 {
        self.max() - self.min()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Consecutive differences.
    pub fn gaps(&self) -> Vec<u64> {
        self.0.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `scale * A + shift`.
    pub fn affine(&self, scale: u64, shift: u64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::InvalidParams("affine scale must be positive".into()));
        }
        let max = self.max() as u128 * scale as u128 + shift as u128;
        if max > MAX_ELEMENT as u128 {
            return Err(Error::ElementTooLarge(max));
        }
        Ok(FiniteSet(
            self.0.iter().map(|&a| a * scale + shift).collect(),
        ))
    }

    /// `max(A) - A`.
    pub fn reflect(&self) -> Self {
        let m = self.max();
        FiniteSet(self.0.iter().rev().map(|&a| m - a).collect())
    }

    /// Translate so the minimum is 0.
    pub fn translate_to_zero(&self) -> Self {
        let m = self.min();
        FiniteSet(self.0.iter().map(|&a| a - m).collect())
    }

    pub fn union(&self, other: &FiniteSet) -> Self {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        FiniteSet(v)
    }

    pub fn with(&self, x: u64) -> Result<Self> {
        let mut v = self.0.clone();
        v.push(x);
        Self::new(v)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts either roster `{a,b,...}` or gap `(b|g1,...)` notation.
impl FromStr for FiniteSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse_set(s).map(|p| p.set)
    }
}

impl TryFrom<Vec<u64>> for FiniteSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteSet::new(v)
    }
}

impl<const N: usize> TryFrom<[u64; N]> for FiniteSet {
    type Error = Error;

    fn try_from(v: [u64; N]) -> Result<Self> {
        FiniteSet::new(v.to_vec())
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_dedups() {
        let s = FiniteSet::new(vec![9, 3, 3, 0]).unwrap();
        assert_eq!(s.elements(), &[0, 3, 9]);
        assert_eq!(s.to_string(), "{0,3,9}");
    }

    #[test]
    fn rejects_empty_and_huge() {
        assert!(matches!(FiniteSet::new(vec![]), Err(Error::EmptySet)));
        assert!(matches!(
            FiniteSet::new(vec![MAX_ELEMENT + 1]),
            Err(Error::ElementTooLarge(_))
        ));
        assert!(FiniteSet::new(vec![MAX_ELEMENT]).is_ok());
        assert!(FiniteSet::from_sorted(vec![1, 1]).is_err());
    }

    #[test]
    fn affine_and_reflect() {
        let s = FiniteSet::try_from([0, 1, 3]).unwrap();
        assert_eq!(s.affine(2, 5).unwrap().elements(), &[5, 7, 11]);
        assert_eq!(s.reflect().elements(), &[0, 2, 3]);
        assert!(s.affine(0, 1).is_err());
        assert!(s.affine(MAX_ELEMENT, 0).is_err());
    }

    #[test]
    fn serde_uses_roster_strings() {
        let s = FiniteSet::try_from([2, 3, 9]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "\"{2,3,9}\"");
        let back: FiniteSet = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
