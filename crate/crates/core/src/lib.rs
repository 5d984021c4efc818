//! Sum-dominant (MSTD) set toolkit: exact set arithmetic, parametric
//! families, canonical enumeration and prime subset censuses.

pub mod bits;
pub mod error;
pub mod families;
mod incremental;
pub mod setcore;

pub use error::{Error, Result};
pub use setcore::{
    classify, diff_stats, parse_set, to_spohn, Classification, DiffStats, FiniteSet, GapForm,
    Verdict,
};
mod parallel;
pub mod primes;
pub mod reproduce;
pub mod search;
