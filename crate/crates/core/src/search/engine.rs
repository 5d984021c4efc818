use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incremental::{dispatch_width, words_for, SetState};
use crate::parallel::with_threads;
use crate::setcore::{contains_ap, is_symmetric, to_spohn, FiniteSet};

/// Largest diameter the fixed-width engine supports.
pub const MAX_DIAMETER: u64 = 511;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filter {
    #[default]
    None,
    RequireAp4,
    RequireAp3,
    SymmetricOnly,
}

impl Filter {
    fn accepts(self, set: &FiniteSet) -> bool {
        match self {
            Filter::None => true,
            Filter::RequireAp4 => contains_ap(set, 4),
            Filter::RequireAp3 => contains_ap(set, 3),
            Filter::SymmetricOnly => is_symmetric(set).is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub n: usize,
    pub diameter: u64,
    pub canonical_only: bool,
    pub filter: Filter,
    /// Worker count; 0 uses the global pool. Never affects results.
    #[serde(skip)]
    pub threads: usize,
}

impl SearchParams {
    pub fn new(n: usize, diameter: u64) -> Self {
        SearchParams {
            n,
            diameter,
            canonical_only: true,
            filter: Filter::None,
            threads: 0,
        }
    }

    pub fn canonical_only(mut self, yes: bool) -> Self {
        self.canonical_only = yes;
        self
    }

    pub fn filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParams(format!(
                "n must be at least 3, got {}",
                self.n
            )));
        }
        if self.diameter < self.n as u64 - 1 {
            return Err(Error::InvalidParams(format!(
                "diameter {} is smaller than n-1 = {}",
                self.diameter,
                self.n - 1
            )));
        }
        if self.diameter > MAX_DIAMETER {
            return Err(Error::InvalidParams(format!(
                "diameter {} exceeds the supported maximum {MAX_DIAMETER}",
                self.diameter
            )));
        }
        Ok(())
    }
}

/// One fully built set, as seen by a [`Visitor`].
#[derive(Debug)]
pub struct Node<'a> {
    pub gaps: &'a [u64],
    pub elements: &'a [u64],
    pub sum_card: u64,
    pub distinct_pos: u64,
}

impl Node<'_> {
    pub fn diff_card(&self) -> u64 {
        2 * self.distinct_pos + 1
    }

    pub fn margin(&self) -> i64 {
        self.sum_card as i64 - self.diff_card() as i64
    }

    /// `C(n,2)` minus the number of distinct positive differences.
    pub fn collision_excess(&self) -> u64 {
        let n = self.elements.len() as u64;
        n * (n - 1) / 2 - self.distinct_pos
    }

    pub fn to_set(&self) -> FiniteSet {
        FiniteSet::from_sorted_unchecked(self.elements.to_vec())
    }
}

/// Per-task observer. One instance is created per task and the instances
/// are merged in task order.
pub trait Visitor: Send + Sized {
    fn visit(&mut self, node: &Node<'_>);
    fn merge(&mut self, later: Self);
}

impl Visitor for () {
    fn visit(&mut self, _: &Node<'_>) {}
    fn merge(&mut self, _: Self) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundSet {
    pub set: FiniteSet,
    pub spohn: String,
    pub margin: i64,
}

impl FoundSet {
    pub fn new(set: FiniteSet, margin: i64) -> Self {
        FoundSet {
            spohn: to_spohn(&set).to_string(),
            set,
            margin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub set: FiniteSet,
    pub spohn: String,
    pub detail: String,
}

impl Violation {
    pub fn new(set: FiniteSet, detail: impl Into<String>) -> Self {
        Violation {
            spohn: to_spohn(&set).to_string(),
            set,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportParams {
    Enumeration(SearchParams),
    ApPlus {
        ap_len: u64,
        added: usize,
        range: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub params: ReportParams,
    pub sets_enumerated: u64,
    /// Sets skipped by the filter (not counted in `sets_enumerated`).
    pub filtered_out: u64,
    /// Every enumerated set with margin > 0, sorted by gap vector.
    pub mstd_found: Vec<FoundSet>,
    pub margin_histogram: BTreeMap<i64, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_x_seen: Option<u64>,
    /// Counterexamples to whatever the producing operation checks.
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn falsified(&self) -> bool {
        !self.violations.is_empty()
    }

    pub fn contains_mstd(&self, set: &FiniteSet) -> bool {
        self.mstd_found.iter().any(|f| &f.set == set)
    }

    pub(crate) fn sort(&mut self) {
        self.mstd_found.sort_by_key(|f| f.set.gaps());
        self.violations
            .sort_by(|a, b| (a.set.gaps(), &a.detail).cmp(&(b.set.gaps(), &b.detail)));
    }
}

pub(crate) struct Acc<V> {
    pub enumerated: u64,
    pub filtered: u64,
    pub mstd: Vec<FoundSet>,
    pub histogram: BTreeMap<i64, u64>,
    pub visitor: V,
}

impl<V: Visitor> Acc<V> {
    pub fn new(visitor: V) -> Self {
        Acc {
            enumerated: 0,
            filtered: 0,
            mstd: Vec::new(),
            histogram: BTreeMap::new(),
            visitor,
        }
    }

    pub fn record(&mut self, node: &Node<'_>) {
        self.enumerated += 1;
        let m = node.margin();
        *self.histogram.entry(m).or_default() += 1;
        if m > 0 {
            self.mstd.push(FoundSet::new(node.to_set(), m));
        }
        self.visitor.visit(node);
    }

    pub fn merge(&mut self, later: Self) {
        self.enumerated += later.enumerated;
        self.filtered += later.filtered;
        self.mstd.extend(later.mstd);
        for (m, c) in later.histogram {
            *self.histogram.entry(m).or_default() += c;
        }
        self.visitor.merge(later.visitor);
    }
}

struct Walk<'p, V> {
    params: &'p SearchParams,
    gaps: Vec<u64>,
    elements: Vec<u64>,
    acc: Acc<V>,
}

impl<V: Visitor> Walk<'_, V> {
    fn leaf<const W: usize>(&mut self, st: &SetState<W>, gcd: u64) {
        let p = self.params;
        if p.canonical_only && (gcd != 1 || self.gaps.iter().rev().lt(self.gaps.iter())) {
            return;
        }
        if p.filter != Filter::None
            && !p
                .filter
                .accepts(&FiniteSet::from_sorted_unchecked(self.elements.clone()))
        {
            self.acc.filtered += 1;
            return;
        }
        let node = Node {
            gaps: &self.gaps,
            elements: &self.elements,
            sum_card: st.sum_card() as u64,
            distinct_pos: st.distinct_pos() as u64,
        };
        self.acc.record(&node);
    }

    fn dfs<const W: usize>(&mut self, st: &SetState<W>, cur: u64, gcd: u64) {
        let n = self.params.n;
        if self.elements.len() == n {
            self.leaf(st, gcd);
            return;
        }
        // each of the remaining gaps after this one needs at least 1
        let remaining_after = (n - self.elements.len() - 1) as u64;
        let max_gap = self.params.diameter - cur - remaining_after;
        for gap in 1..=max_gap {
            let e = cur + gap;
            let child = st.with(e as u32);
            self.gaps.push(gap);
            self.elements.push(e);
            self.dfs(&child, e, gcd_step(gcd, gap));
            self.gaps.pop();
            self.elements.pop();
        }
    }
}

fn gcd_step(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prefixes of two gaps that can still be completed within the diameter.
fn task_prefixes(params: &SearchParams) -> Vec<[u64; 2]> {
    let slack = params.diameter - (params.n as u64 - 3);
    let mut out = Vec::new();
    for a in 1..slack {
        for b in 1..=slack - a {
            out.push([a, b]);
        }
    }
    out
}

fn run_task<const W: usize, V: Visitor>(
    params: &SearchParams,
    prefix: [u64; 2],
    visitor: V,
) -> Acc<V> {
    let mut st = SetState::<W>::new(params.diameter as u32).with(0);
    let mut walk = Walk {
        params,
        gaps: Vec::with_capacity(params.n),
        elements: Vec::with_capacity(params.n),
        acc: Acc::new(visitor),
    };
    walk.elements.push(0);
    let mut cur = 0;
    for g in prefix {
        cur += g;
        st = st.with(cur as u32);
        walk.gaps.push(g);
        walk.elements.push(cur);
    }
    walk.dfs(&st, cur, gcd_step(prefix[0], prefix[1]));
    walk.acc
}

/// Enumerates every gap vector described by `params`, giving each visited
/// set to a visitor built by `make`. Returns the report and the merged visitor.
pub fn enumerate_with<V, F>(params: &SearchParams, make: F) -> Result<(SearchReport, V)>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    params.validate()?;
    let start = Instant::now();
    let words = words_for(params.diameter).expect("diameter validated");
    let prefixes = task_prefixes(params);
    let parts: Vec<Acc<V>> = with_threads(params.threads, || {
        dispatch_width!(words, W => prefixes
            .par_iter()
            .map(|&p| run_task::<W, V>(params, p, make()))
            .collect())
    });
    let mut total = Acc::new(make());
    for part in parts {
        total.merge(part);
    }
    let mut report = SearchReport {
        params: ReportParams::Enumeration(params.clone()),
        sets_enumerated: total.enumerated,
        filtered_out: total.filtered,
        mstd_found: total.mstd,
        margin_histogram: total.histogram,
        max_x_seen: None,
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    report.sort();
    report.elapsed = start.elapsed();
    Ok((report, total.visitor))
}

pub fn enumerate(params: &SearchParams) -> Result<SearchReport> {
    enumerate_with(params, || ()).map(|(r, ())| r)
}
