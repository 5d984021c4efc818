//! Prime pools, the sum-dominant subset census, and admissible tuples.

mod census;
mod sieve;
mod tuples;

pub use census::{
    check_two_exclusion, search_prime_mstd, two_insertion_excess, CensusOptions, CheckpointInfo,
    PrimeSearchReport, TwoExclusionCheck, DEFAULT_MIN_CARD, MAX_POOL,
};
pub use sieve::{sieve, PrimePool};
pub use tuples::{find_match, is_admissible, is_match, TupleSpec};
