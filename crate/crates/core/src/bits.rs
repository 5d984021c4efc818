//! Bit-vector helpers.
//!
//! [`BitVec`] is a growable vector used by the from-scratch set arithmetic.
//! [`Bits`] is a fixed-width, `Copy` bitset used by the enumeration engines,
//! where a whole DFS frame is copied on descent.

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }
}

/// Fixed-width bitset of `64 * W` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bits<const W: usize>([u64; W]);

impl<const W: usize> Default for Bits<W> {
    fn default() -> Self {
        Bits([0; W])
    }
}

impl<const W: usize> Bits<W> {
    pub const CAPACITY: usize = 64 * W;

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < Self::CAPACITY);
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < Self::CAPACITY && self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn count_ones(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// `self |= src << k`; bits shifted past the capacity are dropped.
    #[inline]
    pub fn or_shl(&mut self, src: &Self, k: usize) {
        let ws = k / 64;
        let bs = k % 64;
        if ws >= W {
            return;
        }
        if bs == 0 {
            for i in ws..W {
                self.0[i] |= src.0[i - ws];
            }
        } else {
            self.0[ws] |= src.0[0] << bs;
            for i in ws + 1..W {
                self.0[i] |= src.0[i - ws] << bs | src.0[i - ws - 1] >> (64 - bs);
            }
        }
    }

    /// `self |= src >> k`.
    #[inline]
    pub fn or_shr(&mut self, src: &Self, k: usize) {
        let ws = k / 64;
        let bs = k % 64;
        if ws >= W {
            return;
        }
        if bs == 0 {
            for i in 0..W - ws {
                self.0[i] |= src.0[i + ws];
            }
        } else {
            for i in 0..W - ws - 1 {
                self.0[i] |= src.0[i + ws] >> bs | src.0[i + ws + 1] << (64 - bs);
            }
            self.0[W - ws - 1] |= src.0[W - 1] >> bs;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bitvec_ones_roundtrip() {
        let mut v = BitVec::zeros(200);
        for i in [0, 5, 63, 64, 127, 199] {
            v.set(i);
        }
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 5, 63, 64, 127, 199]);
        assert_eq!(v.count_ones(), 6);
        assert!(!v.get(200));
    }

    proptest! {
        #[test]
        fn shifts_match_naive(xs in proptest::collection::vec(0usize..256, 0..40), k in 0usize..300) {
            let mut src = Bits::<4>::default();
            for &x in &xs { src.set(x); }
            let mut l = Bits::<4>::default();
            l.or_shl(&src, k);
            let mut r = Bits::<4>::default();
            r.or_shr(&src, k);
            for i in 0..256 {
                let want_l = i >= k && xs.contains(&(i - k));
                let want_r = xs.contains(&(i + k));
                prop_assert_eq!(l.get(i), want_l);
                prop_assert_eq!(r.get(i), want_r);
            }
        }
    }
}
