//! Exhaustive enumeration of bounded-diameter sets by gap vector.
//!
//! Every search fixes the minimum at 0 and walks gap vectors
//! `(a_1, ..., a_{n-1})` with `sum a_i <= D` depth-first, updating sums and
//! differences incrementally. Work is split on the first two gaps; each task
//! owns its own accumulators and results are merged in task order, so the
//! output never depends on the worker count.

mod engine;
mod ops;

pub use engine::{
    enumerate, enumerate_with, Filter, FoundSet, Node, ReportParams, SearchParams, SearchReport,
    Violation, Visitor,
};
pub use ops::{
    check_lemma_inequalities, check_prop4, find_mstd, verify_ap_plus_k, verify_no_mstd,
    SearchOptions,
};
