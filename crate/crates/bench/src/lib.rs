//! Shared inputs for the benchmarks.

use mstd_core::FiniteSet;

/// The 8-element sum-dominant set of diameter 14.
pub fn conway_like() -> FiniteSet {
    FiniteSet::new(vec![0, 2, 3, 4, 7, 11, 12, 14]).expect("valid set")
}

/// Every `step`-th integer below `len * step`, plus `conway_like` shifted
/// past it; a set wide enough to exercise the bit-vector paths.
pub fn wide_set(len: u64, step: u64) -> FiniteSet {
    let mut v: Vec<u64> = (0..len).map(|i| i * step).collect();
    let shift = len * step;
    v.extend(conway_like().elements().iter().map(|&x| x + shift));
    FiniteSet::new(v).expect("valid set")
}
