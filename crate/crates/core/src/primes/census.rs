//! Exhaustive census of sum-dominant subsets of a prime pool.
//!
//! The subset lattice is walked depth-first, adding primes in increasing
//! order, so each nonempty subset is visited exactly once. The walk is split
//! into `2^s` independent tasks by the include/exclude choice for the first
//! `s` primes. Completed tasks can be written to a JSON checkpoint and skipped
//! on resume.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sieve::PrimePool;
use crate::error::{Error, Result};
use crate::incremental::{dispatch_width, words_for, SetState};
use crate::parallel::with_threads;
use crate::setcore::{classify, FiniteSet};

/// No set with fewer than 8 elements is sum-dominant, so smaller subsets are
/// traversed but not classified by default.
pub const DEFAULT_MIN_CARD: usize = 8;

/// Largest pool searched without `allow_large_pool`.
pub const MAX_POOL: usize = 40;

const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub min_card: usize,
    pub threads: usize,
    pub allow_large_pool: bool,
    /// Number of leading primes whose include/exclude choice defines a task.
    pub split_depth: usize,
    pub checkpoint: Option<PathBuf>,
    /// Completed tasks between checkpoint flushes.
    pub flush_every: usize,
    /// Stop (as if interrupted) after this many newly completed tasks.
    pub stop_after: Option<usize>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            min_card: DEFAULT_MIN_CARD,
            threads: 0,
            allow_large_pool: false,
            split_depth: 10,
            checkpoint: None,
            flush_every: 64,
            stop_after: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointInfo {
    pub path: PathBuf,
    pub total_tasks: usize,
    pub resumed_tasks: usize,
    pub completed_tasks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSearchReport {
    pub pool: PrimePool,
    pub min_card: usize,
    pub nodes_visited: u64,
    pub count: u64,
    /// Sorted lexicographically by elements.
    pub mstd_sets: Vec<FiniteSet>,
    /// All found sets whose largest element is smallest.
    pub min_by_max: Vec<FiniteSet>,
    pub unique_min: bool,
    pub max_margin: Option<i64>,
    /// Present for pools without 2.
    pub two_exclusion_ok: Option<bool>,
    pub complete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<CheckpointInfo>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TaskResult {
    mask: u64,
    nodes: u64,
    mstd_sets: Vec<FiniteSet>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    pool: Vec<u64>,
    min_card: usize,
    split_depth: usize,
    completed: Vec<TaskResult>,
}

impl Checkpoint {
    fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn clone_header(&self) -> Checkpoint {
        Checkpoint {
            version: self.version,
            pool: self.pool.clone(),
            min_card: self.min_card,
            split_depth: self.split_depth,
            completed: Vec::new(),
        }
    }

    fn check_matches(&self, path: &Path, other: &Checkpoint) -> Result<()> {
        let reason = if self.version != other.version {
            "version differs"
        } else if self.pool != other.pool {
            "prime pool differs"
        } else if self.min_card != other.min_card {
            "min_card differs"
        } else if self.split_depth != other.split_depth {
            "split depth differs"
        } else {
            return Ok(());
        };
        Err(Error::CheckpointMismatch {
            path: path.to_path_buf(),
            reason: reason.into(),
        })
    }
}

struct Walker<'a> {
    primes: &'a [u32],
    min_card: u32,
    elements: Vec<u64>,
    out: TaskResult,
}

impl Walker<'_> {
    #[inline]
    fn node<const W: usize>(&mut self, st: &SetState<W>) {
        self.out.nodes += 1;
        if st.len() >= self.min_card && st.margin() > 0 {
            self.out
                .mstd_sets
                .push(FiniteSet::from_sorted_unchecked(self.elements.clone()));
        }
    }

    fn dfs<const W: usize>(&mut self, st: &SetState<W>, from: usize) {
        for i in from..self.primes.len() {
            let p = self.primes[i];
            let child = st.with(p);
            self.elements.push(p as u64);
            self.node(&child);
            self.dfs(&child, i + 1);
            self.elements.pop();
        }
    }
}

fn run_task<const W: usize>(
    primes: &[u32],
    split: usize,
    min_card: usize,
    mask: u64,
) -> TaskResult {
    let top = *primes.last().expect("nonempty pool");
    let mut walker = Walker {
        primes,
        min_card: min_card as u32,
        elements: Vec::with_capacity(primes.len()),
        out: TaskResult {
            mask,
            nodes: 0,
            mstd_sets: Vec::new(),
        },
    };
    let mut st = SetState::<W>::new(top);
    for (i, &p) in primes[..split].iter().enumerate() {
        if mask >> i & 1 == 1 {
            st = st.with(p);
            walker.elements.push(p as u64);
        }
    }
    if mask != 0 {
        walker.node(&st);
    }
    walker.dfs(&st, split);
    walker.out
}

/// Finds every sum-dominant subset of `pool`.
pub fn search_prime_mstd(pool: &PrimePool, opts: &CensusOptions) -> Result<PrimeSearchReport> {
    let start = Instant::now();
    if pool.len() > MAX_POOL && !opts.allow_large_pool {
        return Err(Error::PoolTooLarge {
            size: pool.len(),
            nodes: 2f64.powi(pool.len() as i32),
        });
    }
    if pool.len() >= 64 {
        return Err(Error::InvalidParams(
            "pools of 64 or more primes are unsupported".into(),
        ));
    }
    let empty = || PrimeSearchReport {
        pool: pool.clone(),
        min_card: opts.min_card,
        nodes_visited: 0,
        count: 0,
        mstd_sets: Vec::new(),
        min_by_max: Vec::new(),
        unique_min: false,
        max_margin: None,
        two_exclusion_ok: (!pool.include_two).then_some(true),
        complete: true,
        checkpoint: None,
        elapsed: Duration::ZERO,
    };
    let Some(&top) = pool.primes.last() else {
        return Ok(empty());
    };
    let Some(words) = words_for(top) else {
        return Err(Error::InvalidParams(format!(
            "largest prime {top} exceeds the supported 511"
        )));
    };
    let primes: Vec<u32> = pool.primes.iter().map(|&p| p as u32).collect();
    let split = opts.split_depth.min(primes.len());
    let total_tasks = 1usize << split;

    let header = Checkpoint {
        version: CHECKPOINT_VERSION,
        pool: pool.primes.clone(),
        min_card: opts.min_card,
        split_depth: split,
        completed: Vec::new(),
    };
    let mut done: Vec<TaskResult> = Vec::new();
    if let Some(path) = &opts.checkpoint {
        if let Some(saved) = Checkpoint::load(path)? {
            saved.check_matches(path, &header)?;
            done = saved.completed;
        }
    }
    let resumed = done.len();
    let mut pending: Vec<u64> = {
        let finished: std::collections::HashSet<u64> = done.iter().map(|t| t.mask).collect();
        (0..total_tasks as u64)
            .filter(|m| !finished.contains(m))
            .collect()
    };
    if let Some(limit) = opts.stop_after {
        pending.truncate(limit);
    }

    let chunk = if opts.checkpoint.is_some() {
        opts.flush_every.max(1)
    } else {
        pending.len().max(1)
    };
    for batch in pending.chunks(chunk) {
        let results: Vec<TaskResult> = with_threads(opts.threads, || {
            dispatch_width!(words, W => batch
                .par_iter()
                .map(|&mask| run_task::<W>(&primes, split, opts.min_card, mask))
                .collect())
        });
        done.extend(results);
        if let Some(path) = &opts.checkpoint {
            Checkpoint {
                completed: done.clone(),
                ..header.clone_header()
            }
            .save(path)?;
        }
    }

    done.sort_by_key(|t| t.mask);
    let completed_tasks = done.len();
    let complete = completed_tasks == total_tasks;
    let mut report = empty();
    report.complete = complete;
    report.nodes_visited = done.iter().map(|t| t.nodes).sum();
    let mut sets: Vec<FiniteSet> = done.into_iter().flat_map(|t| t.mstd_sets).collect();
    sets.sort();
    report.count = sets.len() as u64;
    report.max_margin = sets.iter().map(|s| classify(s).margin).max();
    if let Some(best) = sets.iter().map(FiniteSet::max).min() {
        report.min_by_max = sets
            .iter()
            .filter(|s| FiniteSet::max(s) == best)
            .cloned()
            .collect();
    }
    report.unique_min = report.min_by_max.len() == 1;
    report.mstd_sets = sets;
    if !pool.include_two {
        report.two_exclusion_ok = Some(check_two_exclusion(&report).ok);
    }
    report.checkpoint = opts.checkpoint.as_ref().map(|path| CheckpointInfo {
        path: path.clone(),
        total_tasks,
        resumed_tasks: resumed,
        completed_tasks,
    });
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `(new differences) - (new sums)` when 2 is added to `set`.
pub fn two_insertion_excess(set: &FiniteSet) -> i64 {
    let before = classify(set);
    let after = classify(&set.with(2).expect("2 is a valid element"));
    (after.diff_card as i64 - before.diff_card as i64)
        - (after.sum_card as i64 - before.sum_card as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoExclusionCheck {
    pub ok: bool,
    pub checked: u64,
    pub max_margin: Option<i64>,
    pub min_excess: Option<i64>,
    pub failures: Vec<(FiniteSet, String)>,
}

/// For every found set: margin at most 4, adding 2 gives at least 7 more
/// differences than sums, and the set with 2 added is not sum-dominant.
pub fn check_two_exclusion(report: &PrimeSearchReport) -> TwoExclusionCheck {
    let mut check = TwoExclusionCheck {
        ok: true,
        checked: 0,
        max_margin: None,
        min_excess: None,
        failures: Vec::new(),
    };
    for s in &report.mstd_sets {
        check.checked += 1;
        let mut fail = |why: String| check.failures.push((s.clone(), why));
        if s.elements().iter().any(|&p| p % 2 == 0) {
            fail("set contains an even element".into());
            continue;
        }
        let margin = classify(s).margin;
        let excess = two_insertion_excess(s);
        let with_two = classify(&s.with(2).expect("2 is a valid element")).margin;
        if margin > 4 {
            fail(format!("margin {margin} exceeds 4"));
        }
        if excess < 7 {
            fail(format!(
                "adding 2 gives only {excess} more differences than sums"
            ));
        }
        if with_two > 0 {
            fail(format!(
                "still sum-dominant with 2 added (margin {with_two})"
            ));
        }
        check.max_margin = check.max_margin.max(Some(margin));
        check.min_excess = Some(check.min_excess.map_or(excess, |m| m.min(excess)));
    }
    check.ok = check.failures.is_empty();
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    fn brute_force(pool: &PrimePool, min_card: usize) -> Vec<FiniteSet> {
        let n = pool.len();
        let mut out = Vec::new();
        for mask in 1u64..1 << n {
            if (mask.count_ones() as usize) < min_card {
                continue;
            }
            let v: Vec<u64> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pool.primes[i])
                .collect();
            let s = FiniteSet::new(v).unwrap();
            if crate::setcore::naive::classify(&s).margin > 0 {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_pool_matches_brute_force() {
        // primes 3..61: 17 primes; no sum-dominant subset below 73
        let pool = PrimePool::odd(61);
        let r = search_prime_mstd(
            &pool,
            &CensusOptions {
                min_card: 1,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.nodes_visited, (1 << pool.len()) - 1);
        assert_eq!(r.mstd_sets, brute_force(&pool, 1));
        assert_eq!(r.count, 0);
    }

    #[test]
    fn synthetic_pool_matches_brute_force() {
        // a non-prime pool exercises the walker on a dense hit rate
        let pool = PrimePool {
            limit: 16,
            include_two: true,
            primes: (0..=16).collect(),
        };
        let r = search_prime_mstd(
            &pool,
            &CensusOptions {
                min_card: 1,
                split_depth: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let want = brute_force(&pool, 1);
        assert!(!want.is_empty());
        assert_eq!(r.mstd_sets, want);
        assert_eq!(r.count as usize, want.len());
    }

    #[test]
    fn excess_for_small_set() {
        // {3,5,7}: 4 new sums, 6 new differences
        assert_eq!(two_insertion_excess(&set(&[3, 5, 7])), 2);
        let t2 = set(&[3, 5, 7, 13, 17, 19, 23, 43, 47, 53, 59, 61, 67, 71, 73]);
        assert_eq!(two_insertion_excess(&t2), t2.len() as i64 - 1);
        assert!(classify(&t2.with(2).unwrap()).margin <= 0);
    }

    #[test]
    fn pool_guard() {
        let pool = PrimePool::odd(200);
        assert!(pool.len() > MAX_POOL);
        match search_prime_mstd(&pool, &CensusOptions::default()) {
            Err(Error::PoolTooLarge { size, .. }) => assert_eq!(size, pool.len()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn checkpoint_resume_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let pool = PrimePool::odd(83);
        let base = search_prime_mstd(&pool, &CensusOptions::default()).unwrap();
        assert!(base.count > 0);

        let opts = CensusOptions {
            checkpoint: Some(path.clone()),
            flush_every: 50,
            stop_after: Some(300),
            ..Default::default()
        };
        let partial = search_prime_mstd(&pool, &opts).unwrap();
        assert!(!partial.complete);
        let resumed = search_prime_mstd(
            &pool,
            &CensusOptions {
                stop_after: None,
                ..opts.clone()
            },
        )
        .unwrap();
        assert!(resumed.complete);
        assert_eq!(resumed.checkpoint.as_ref().unwrap().resumed_tasks, 300);
        let strip = |mut r: PrimeSearchReport| {
            r.checkpoint = None;
            serde_json::to_string(&r).unwrap()
        };
        assert_eq!(strip(resumed), strip(base));

        let other = CensusOptions {
            min_card: 3,
            ..opts
        };
        assert!(matches!(
            search_prime_mstd(&pool, &other),
            Err(Error::CheckpointMismatch { .. })
        ));
    }
}
