//! Sumsets, difference sets and the sum/difference classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::set::FiniteSet;
use crate::bits::BitVec;

/// Widest bit-vector allocated per call; wider sets fall back to sorting.
const BITVEC_LIMIT: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SumDominant,
    Balanced,
    DifferenceDominant,
}

impl Verdict {
    pub fn from_margin(margin: i64) -> Self {
        match margin {
            m if m > 0 => Verdict::SumDominant,
            0 => Verdict::Balanced,
            _ => Verdict::DifferenceDominant,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SumDominant => "sum-dominant",
            Verdict::Balanced => "balanced",
            Verdict::DifferenceDominant => "difference-dominant",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub sum_card: u64,
    pub diff_card: u64,
    pub margin: i64,
    pub verdict: Verdict,
}

impl Classification {
    pub fn from_cards(sum_card: u64, diff_card: u64) -> Self {
        let margin = sum_card as i64 - diff_card as i64;
        Classification {
            sum_card,
            diff_card,
            margin,
            verdict: Verdict::from_margin(margin),
        }
    }

    pub fn is_sum_dominant(&self) -> bool {
        self.margin > 0
    }
}

/// Repeated-difference statistics.
///
/// `collision_excess` is `C(n,2) - distinct_pos`, so that
/// `|A-A| = n(n-1) + 1 - 2 * collision_excess` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffStats {
    pub n: u64,
    pub distinct_pos: u64,
    pub collision_excess: u64,
}

/// The difference set, stored as its positive half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSet {
    positive: Vec<u64>,
    span: u64,
}

impl DiffSet {
    pub fn positive(&self) -> &[u64] {
        &self.positive
    }

    pub fn card(&self) -> u64 {
        2 * self.positive.len() as u64 + 1
    }

    /// All differences, ascending, with sign.
    pub fn signed(&self) -> Vec<i64> {
        let neg = self.positive.iter().rev().map(|&d| -(d as i64));
        let pos = self.positive.iter().map(|&d| d as i64);
        neg.chain(std::iter::once(0)).chain(pos).collect()
    }

    /// The signed set shifted by the diameter into `0..=2*diameter`.
    pub fn shifted(&self) -> FiniteSet {
        let s = self.span;
        let lower = self.positive.iter().rev().map(|&d| s - d);
        let upper = self.positive.iter().map(|&d| s + d);
        FiniteSet::from_sorted_unchecked(lower.chain(std::iter::once(s)).chain(upper).collect())
    }
}

/// `A + A`, including doubles `a + a`.
pub fn sumset(a: &FiniteSet) -> FiniteSet {
    let lo = a.min();
    let width = 2 * a.diameter() + 1;
    let xs = a.elements();
    if width > BITVEC_LIMIT {
        let mut v = Vec::with_capacity(xs.len() * (xs.len() + 1) / 2);
        for (i, &x) in xs.iter().enumerate() {
            v.extend(xs[i..].iter().map(|&y| x + y));
        }
        v.sort_unstable();
        v.dedup();
        return FiniteSet::from_sorted_unchecked(v);
    }
    let mut bits = BitVec::zeros(width as usize);
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i..] {
            bits.set((x - lo + y - lo) as usize);
        }
    }
    FiniteSet::from_sorted_unchecked(bits.ones().map(|i| i as u64 + 2 * lo).collect())
}

/// Distinct positive differences `a_i - a_j`, `i > j`, ascending.
pub fn positive_differences(a: &FiniteSet) -> Vec<u64> {
    let xs = a.elements();
    let span = a.diameter();
    if span + 1 > BITVEC_LIMIT {
        let mut v = Vec::with_capacity(xs.len() * xs.len().saturating_sub(1) / 2);
        for (i, &x) in xs.iter().enumerate() {
            v.extend(xs[i + 1..].iter().map(|&y| y - x));
        }
        v.sort_unstable();
        v.dedup();
        return v;
    }
    let mut bits = BitVec::zeros(span as usize + 1);
    for (i, &x) in xs.iter().enumerate() {
        for &y in &xs[i + 1..] {
            bits.set((y - x) as usize);
        }
    }
    bits.ones().map(|i| i as u64).collect()
}

pub fn diff_set(a: &FiniteSet) -> DiffSet {
    DiffSet {
        positive: positive_differences(a),
        span: a.diameter(),
    }
}

/// `A - A` shifted by `max(A) - min(A)` into non-negative coordinates.
pub fn diffset(a: &FiniteSet) -> FiniteSet {
    diff_set(a).shifted()
}

pub fn diff_stats(a: &FiniteSet) -> DiffStats {
    let n = a.len() as u64;
    let distinct_pos = positive_differences(a).len() as u64;
    DiffStats {
        n,
        distinct_pos,
        collision_excess: n * (n - 1) / 2 - distinct_pos,
    }
}

pub fn classify(a: &FiniteSet) -> Classification {
    let sum_card = sumset(a).len() as u64;
    let diff_card = 2 * positive_differences(a).len() as u64 + 1;
    Classification::from_cards(sum_card, diff_card)
}

/// Double-loop reference implementations over ordered sets.
pub mod naive {
    use std::collections::BTreeSet;

    use super::{Classification, FiniteSet};

    pub fn sumset(a: &FiniteSet) -> BTreeSet<u64> {
        let xs = a.elements();
        xs.iter()
            .flat_map(|&x| xs.iter().map(move |&y| x + y))
            .collect()
    }

    pub fn diffset(a: &FiniteSet) -> BTreeSet<i64> {
        let xs = a.elements();
        xs.iter()
            .flat_map(|&x| xs.iter().map(move |&y| x as i64 - y as i64))
            .collect()
    }

    pub fn classify(a: &FiniteSet) -> Classification {
        Classification::from_cards(sumset(a).len() as u64, diffset(a).len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[0, 1, 2, 4])), set(&[0, 1, 2, 3, 4, 5, 6, 8]));
        assert_eq!(sumset(&set(&[0])), set(&[0]));
        assert_eq!(
            sumset(&set(&[3, 5, 7, 9, 11])),
            set(&[6, 8, 10, 12, 14, 16, 18, 20, 22])
        );
    }

    #[test]
    fn diffset_examples() {
        let d = diff_set(&set(&[0, 1, 2, 4]));
        assert_eq!(d.signed(), vec![-4, -3, -2, -1, 0, 1, 2, 3, 4]);
        assert_eq!(d.card(), 9);
        assert_eq!(diffset(&set(&[0, 1, 2, 4])).len(), 9);

        assert_eq!(diffset(&set(&[7])), set(&[0]));

        let d = diff_set(&set(&[0, 1, 3]));
        assert_eq!(d.signed(), vec![-3, -2, -1, 0, 1, 2, 3]);
        assert_eq!(diffset(&set(&[0, 1, 3])), set(&[0, 1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&set(&[0, 1, 2, 4]));
        assert_eq!((c.sum_card, c.diff_card, c.margin), (8, 9, -1));
        assert_eq!(c.verdict, Verdict::DifferenceDominant);

        let c = classify(&set(&[3, 5, 7, 9, 11]));
        assert_eq!((c.margin, c.verdict), (0, Verdict::Balanced));

        // (26, 25) from the double-loop oracle over all 64 ordered pairs
        let c = classify(&set(&[0, 2, 3, 4, 7, 11, 12, 14]));
        assert_eq!((c.sum_card, c.diff_card, c.margin), (26, 25, 1));
        assert_eq!(c.verdict, Verdict::SumDominant);
    }

    #[test]
    fn diff_stats_examples() {
        let s = diff_stats(&set(&[0, 1, 2, 3, 4, 5]));
        assert_eq!((s.distinct_pos, s.collision_excess), (5, 10));
        let s = diff_stats(&set(&[0, 1, 3]));
        assert_eq!((s.distinct_pos, s.collision_excess), (3, 0));
        let s = diff_stats(&set(&[0, 2, 3, 4, 7, 11, 12, 14]));
        assert_eq!((s.distinct_pos, s.collision_excess), (12, 16));
    }

    #[test]
    fn wide_sets_take_the_sorting_path() {
        let big = 1u64 << 40;
        let a = set(&[0, 1, big, big + 1]);
        assert_eq!(
            sumset(&a),
            set(&[
                0,
                1,
                2,
                big,
                big + 1,
                big + 2,
                2 * big,
                2 * big + 1,
                2 * big + 2
            ])
        );
        assert_eq!(positive_differences(&a), vec![1, big - 1, big, big + 1]);
        assert_eq!(classify(&a), naive::classify(&a));
    }

    #[test]
    fn verdict_serializes_kebab_case() {
        assert_eq!(
            serde_json::to_string(&Verdict::SumDominant).unwrap(),
            "\"sum-dominant\""
        );
    }

    fn arb_set() -> impl Strategy<Value = FiniteSet> {
        proptest::collection::btree_set(0u64..2000, 1..25)
            .prop_map(|s| FiniteSet::new(s.into_iter().collect()).unwrap())
    }

    proptest! {
        #[test]
        fn cardinality_bounds(a in arb_set()) {
            let n = a.len() as u64;
            let c = classify(&a);
            prop_assert!(2 * n - 1 <= c.sum_card && c.sum_card <= n * (n + 1) / 2);
            prop_assert!(2 * n - 1 <= c.diff_card && c.diff_card <= n * (n - 1) + 1);
            prop_assert_eq!(c.diff_card, 2 * diff_stats(&a).distinct_pos + 1);
            let s = diff_stats(&a);
            prop_assert!(s.collision_excess <= n * (n - 1) / 2 - (n - 1));
        }

        #[test]
        fn matches_naive(a in arb_set()) {
            prop_assert_eq!(sumset(&a).elements().to_vec(), naive::sumset(&a).into_iter().collect::<Vec<_>>());
            prop_assert_eq!(diff_set(&a).signed(), naive::diffset(&a).into_iter().collect::<Vec<_>>());
        }

        #[test]
        fn affine_invariance(a in arb_set(), u in 1u64..=50, v in 0u64..=1000) {
            let c = classify(&a);
            prop_assert_eq!(classify(&a.affine(u, v).unwrap()), c);
            prop_assert_eq!(classify(&a.reflect()), c);
        }
    }
}
