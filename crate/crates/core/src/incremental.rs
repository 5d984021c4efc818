//! Incremental sum/difference tracking for sets grown in increasing order.
//!
//! When a new element `e` is larger than every current element, the sumset
//! gains `e + A` and `2e`, and the positive differences gain `e - A`. Both are
//! single shifted ORs over bitsets: `elems << e` for sums and `rev >> (top - e)`
//! for differences, where `rev` holds `top - a` for each element `a`. A DFS
//! frame is `Copy`, so backtracking is just returning to the parent's frame.

use crate::bits::Bits;

#[derive(Clone, Copy, Debug)]
pub(crate) struct SetState<const W: usize> {
    elems: Bits<W>,
    rev: Bits<W>,
    sums: Bits<W>,
    diffs: Bits<W>,
    len: u32,
    top: u32,
}

impl<const W: usize> SetState<W> {
    /// Empty state for elements in `0..=top`; sums reach `2 * top`.
    pub(crate) fn new(top: u32) -> Self {
        debug_assert!((2 * top as usize) < Bits::<W>::CAPACITY);
        SetState {
            elems: Bits::default(),
            rev: Bits::default(),
            sums: Bits::default(),
            diffs: Bits::default(),
            len: 0,
            top,
        }
    }

    /// Adds `e`, which must exceed every current element.
    #[inline]
    pub(crate) fn with(&self, e: u32) -> Self {
        debug_assert!(e <= self.top);
        let mut next = *self;
        next.elems.set(e as usize);
        next.sums.or_shl(&next.elems, e as usize);
        next.diffs.or_shr(&self.rev, (self.top - e) as usize);
        next.rev.set((self.top - e) as usize);
        next.len += 1;
        next
    }

    #[inline]
    pub(crate) fn len(&self) -> u32 {
        self.len
    }

    #[inline]
    pub(crate) fn sum_card(&self) -> u32 {
        self.sums.count_ones()
    }

    #[inline]
    pub(crate) fn distinct_pos(&self) -> u32 {
        self.diffs.count_ones()
    }

    #[inline]
    pub(crate) fn margin(&self) -> i64 {
        self.sum_card() as i64 - (2 * self.distinct_pos() as i64 + 1)
    }
}

/// Number of 64-bit words needed for sums up to `2 * top`, rounded to a
/// supported width, or `None` above 16 words.
pub(crate) fn words_for(top: u64) -> Option<usize> {
    let bits = 2 * top + 1;
    [1usize, 2, 4, 8, 16]
        .into_iter()
        .find(|&w| bits <= 64 * w as u64)
}

/// Calls `$body` with `$W` bound to the const width chosen by `words_for`.
macro_rules! dispatch_width {
    ($words:expr, $W:ident => $body:expr) => {
        match $words {
            1 => {
                const $W: usize = 1;
                $body
            }
            2 => {
                const $W: usize = 2;
                $body
            }
            4 => {
                const $W: usize = 4;
                $body
            }
            8 => {
                const $W: usize = 8;
                $body
            }
            16 => {
                const $W: usize = 16;
                $body
            }
            w => unreachable!("unsupported bitset width {w}"),
        }
    };
}
pub(crate) use dispatch_width;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{classify, FiniteSet};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn agrees_with_classify(v in proptest::collection::btree_set(0u32..=120, 1..20)) {
            let mut st = SetState::<4>::new(120);
            for &e in &v {
                st = st.with(e);
            }
            let a = FiniteSet::new(v.iter().map(|&x| x as u64).collect()).unwrap();
            let c = classify(&a);
            prop_assert_eq!(st.sum_card() as u64, c.sum_card);
            prop_assert_eq!(2 * st.distinct_pos() as u64 + 1, c.diff_card);
            prop_assert_eq!(st.margin(), c.margin);
            prop_assert_eq!(st.len() as usize, a.len());
        }
    }

    #[test]
    fn widths() {
        assert_eq!(words_for(31), Some(1));
        assert_eq!(words_for(32), Some(2));
        assert_eq!(words_for(109), Some(4));
        assert_eq!(words_for(511), Some(16));
        assert_eq!(words_for(512), None);
    }
}
