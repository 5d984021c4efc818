//! Exact arithmetic on finite sets of non-negative integers.
//!
//! Everything here is a pure function of immutable [`FiniteSet`] values.

mod arith;
mod notation;
mod set;
mod structure;

pub use arith::{
    classify, diff_set, diff_stats, diffset, naive, positive_differences, sumset, Classification,
    DiffSet, DiffStats, Verdict,
};
pub use notation::{parse_roster, parse_set, parse_spohn, to_spohn, GapForm, ParsedSet};
pub use set::{FiniteSet, MAX_ELEMENT};
pub use structure::{contains_ap, gaps_are_canonical, is_symmetric, normalize_affine};
