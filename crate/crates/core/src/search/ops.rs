use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::engine::{
    enumerate, enumerate_with, Acc, Filter, FoundSet, Node, ReportParams, SearchParams,
    SearchReport, Violation, Visitor,
};
use crate::error::{Error, Result};
use crate::incremental::{dispatch_width, words_for, SetState};
use crate::parallel::with_threads;
use crate::setcore::{contains_ap, FiniteSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub canonical_only: bool,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            canonical_only: true,
            threads: 0,
        }
    }
}

impl SearchOptions {
    fn params(&self, n: usize, diameter: u64) -> SearchParams {
        SearchParams::new(n, diameter)
            .canonical_only(self.canonical_only)
            .threads(self.threads)
    }
}

fn mstd_as_violations(report: &mut SearchReport) {
    report.violations = report
        .mstd_found
        .iter()
        .map(|f| {
            Violation::new(
                f.set.clone(),
                format!("sum-dominant with margin {}", f.margin),
            )
        })
        .collect();
}

/// Exhausts all `n`-sets of diameter at most `diameter`; any sum-dominant set
/// found is reported as a violation.
pub fn verify_no_mstd(n: usize, diameter: u64, opts: SearchOptions) -> Result<SearchReport> {
    let mut report = enumerate(&opts.params(n, diameter))?;
    mstd_as_violations(&mut report);
    Ok(report)
}

/// Lists every sum-dominant `n`-set of diameter at most `diameter`.
pub fn find_mstd(n: usize, diameter: u64, opts: SearchOptions) -> Result<SearchReport> {
    enumerate(&opts.params(n, diameter))
}

struct LemmaCheck {
    n: u64,
    max_x: u64,
    violations: Vec<Violation>,
}

impl Visitor for LemmaCheck {
    fn visit(&mut self, node: &Node<'_>) {
        let x = node.collision_excess();
        self.max_x = self.max_x.max(x);
        let twice_sums = 2 * node.sum_card;
        let cap = self.n * (self.n + 1);
        if twice_sums + x > cap {
            self.violations.push(Violation::new(
                node.to_set(),
                format!(
                    "2|A+A| = {twice_sums} > n(n+1) - x = {} (x = {x})",
                    cap as i64 - x as i64
                ),
            ));
        }
        // with a 3-term progression one more sum is lost: 2|A+A| <= n(n+1) - 2 - (x - 1)
        if self.n == 6 && twice_sums + x + 1 > cap {
            let set = node.to_set();
            if contains_ap(&set, 3) {
                self.violations.push(Violation::new(
                    set,
                    format!(
                        "3-AP: 2|A+A| = {twice_sums} > n(n+1) - 2 - (x-1) = {} (x = {x})",
                        cap as i64 - 1 - x as i64
                    ),
                ));
            }
        }
    }

    fn merge(&mut self, later: Self) {
        self.max_x = self.max_x.max(later.max_x);
        self.violations.extend(later.violations);
    }
}

/// Checks `2|A+A| <= n(n+1) - x` for every enumerated set, plus the 3-AP
/// strengthening `2|A+A| <= n(n+1) - 1 - x` when `n = 6`.
pub fn check_lemma_inequalities(
    n: usize,
    diameter: u64,
    opts: SearchOptions,
) -> Result<SearchReport> {
    let (mut report, check) = enumerate_with(&opts.params(n, diameter), || LemmaCheck {
        n: n as u64,
        max_x: 0,
        violations: Vec::new(),
    })?;
    report.max_x_seen = Some(check.max_x);
    report.violations = check.violations;
    report.sort();
    Ok(report)
}

/// Six-sets containing a 4-term progression must not be sum-dominant.
pub fn check_prop4(diameter: u64, opts: SearchOptions) -> Result<SearchReport> {
    let params = opts.params(6, diameter).filter(Filter::RequireAp4);
    let mut report = enumerate(&params)?;
    mstd_as_violations(&mut report);
    Ok(report)
}

/// Adds `added` integers to the progression `{0..ap_len-1}`, each within
/// distance `range` outside it, and classifies every result.
///
/// For `added <= 2` any sum-dominant result is a violation. Found sets are
/// translated to minimum 0 and deduplicated.
pub fn verify_ap_plus_k(
    ap_len: u64,
    added: usize,
    range: u64,
    threads: usize,
) -> Result<SearchReport> {
    if ap_len < 3 {
        return Err(Error::InvalidParams("ap_len must be at least 3".into()));
    }
    if added == 0 || added as u64 > 2 * range {
        return Err(Error::InvalidParams(format!(
            "cannot add {added} elements from {} candidates",
            2 * range
        )));
    }
    // shifted coordinates: the progression is range..range+ap_len
    let top = ap_len - 1 + 2 * range;
    let Some(words) = words_for(top) else {
        return Err(Error::InvalidParams(format!(
            "progression plus range spans {top}, above the supported 511"
        )));
    };
    let start = Instant::now();
    let candidates: Vec<u64> = (0..range).chain(range + ap_len..=top).collect();
    let ap: Vec<u64> = (range..range + ap_len).collect();

    let parts: Vec<Acc<()>> = with_threads(threads, || {
        dispatch_width!(words, W => (0..candidates.len())
            .into_par_iter()
            .map(|first| {
                let mut acc = Acc::new(());
                let mut chosen = vec![candidates[first]];
                combos::<W>(&candidates, &ap, first + 1, added, top, &mut chosen, &mut acc);
                acc
            })
            .collect())
    });
    let mut total = Acc::new(());
    for p in parts {
        total.merge(p);
    }
    let mut found: BTreeMap<FiniteSet, i64> = BTreeMap::new();
    for f in total.mstd {
        found.insert(f.set.translate_to_zero(), f.margin);
    }
    let mut report = SearchReport {
        params: ReportParams::ApPlus {
            ap_len,
            added,
            range,
        },
        sets_enumerated: total.enumerated,
        filtered_out: 0,
        mstd_found: found
            .into_iter()
            .map(|(s, m)| FoundSet::new(s, m))
            .collect(),
        margin_histogram: total.histogram,
        max_x_seen: None,
        violations: Vec::new(),
        elapsed: Duration::ZERO,
    };
    if added <= 2 {
        mstd_as_violations(&mut report);
    }
    report.sort();
    report.elapsed = start.elapsed();
    Ok(report)
}

fn combos<const W: usize>(
    candidates: &[u64],
    ap: &[u64],
    from: usize,
    k: usize,
    top: u64,
    chosen: &mut Vec<u64>,
    acc: &mut Acc<()>,
) {
    if chosen.len() == k {
        let mut elements: Vec<u64> = ap.iter().chain(chosen.iter()).copied().collect();
        elements.sort_unstable();
        let st = elements
            .iter()
            .fold(SetState::<W>::new(top as u32), |s, &e| s.with(e as u32));
        let gaps: Vec<u64> = elements.windows(2).map(|w| w[1] - w[0]).collect();
        acc.record(&Node {
            gaps: &gaps,
            elements: &elements,
            sum_card: st.sum_card() as u64,
            distinct_pos: st.distinct_pos() as u64,
        });
        return;
    }
    for i in from..candidates.len() {
        chosen.push(candidates[i]);
        combos::<W>(candidates, ap, i + 1, k, top, chosen, acc);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{classify, naive, normalize_affine};

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn small_cardinalities_have_no_mstd() {
        let r = verify_no_mstd(4, 20, opts()).unwrap();
        assert!(r.mstd_found.is_empty());
        assert!(!r.falsified());
        let r = verify_no_mstd(6, 20, opts()).unwrap();
        assert!(r.mstd_found.is_empty());
    }

    #[test]
    fn find_eight_element_sets() {
        let r = find_mstd(8, 14, opts()).unwrap();
        assert!(r.contains_mstd(&set(&[0, 2, 3, 4, 7, 11, 12, 14])));
        for f in &r.mstd_found {
            assert!(naive::classify(&f.set).margin > 0);
        }
        assert!(find_mstd(8, 13, opts()).unwrap().mstd_found.is_empty());
    }

    #[test]
    fn found_sets_normalize_to_mstd() {
        let r = find_mstd(9, 16, opts()).unwrap();
        for f in &r.mstd_found {
            let n = normalize_affine(&f.set).unwrap();
            assert_eq!(n, f.set);
            assert!(classify(&n).margin > 0);
        }
    }

    #[test]
    fn canonical_list_expands_to_full_list() {
        let d = 28;
        let canon = find_mstd(8, d, opts()).unwrap();
        let full = find_mstd(
            8,
            d,
            SearchOptions {
                canonical_only: false,
                threads: 0,
            },
        )
        .unwrap();
        let mut expanded = Vec::new();
        for f in &canon.mstd_found {
            for u in 1..=d {
                if f.set.diameter() * u > d {
                    break;
                }
                let s = f.set.affine(u, 0).unwrap();
                expanded.push(s.reflect());
                expanded.push(s);
            }
        }
        expanded.sort_by_key(|s| s.gaps());
        expanded.dedup();
        let full_sets: Vec<_> = full.mstd_found.iter().map(|f| f.set.clone()).collect();
        assert_eq!(expanded, full_sets);
        assert!(full_sets.len() > canon.mstd_found.len());
    }

    #[test]
    fn lemma_check_flags_known_counterexample() {
        // {0,1,3,7,9,10}: |A+A| = 19 and x = 6, so 38 > 36
        let r = check_lemma_inequalities(6, 10, opts()).unwrap();
        let bad = set(&[0, 1, 3, 7, 9, 10]);
        assert!(r.violations.iter().any(|v| v.set == bad));
        assert!(r.max_x_seen.unwrap() >= 10);
    }

    #[test]
    fn lemma_examples() {
        let ap = set(&[0, 1, 2, 3, 4, 5]);
        let c = classify(&ap);
        let x = crate::setcore::diff_stats(&ap).collision_excess;
        assert_eq!((c.sum_card, x), (11, 10));
        assert!(2 * c.sum_card <= 42 - x);

        let sidon = set(&[0, 1, 3, 7, 12, 20]);
        let c = classify(&sidon);
        let x = crate::setcore::diff_stats(&sidon).collision_excess;
        assert_eq!((c.sum_card, x), (21, 0));
        assert_eq!(2 * c.sum_card, 42 - x);
    }

    #[test]
    fn prop4() {
        let r = check_prop4(16, opts()).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.sets_enumerated > 0);
        assert!(classify(&set(&[0, 1, 2, 3, 5, 9])).margin <= 0);
        assert!(!contains_ap(&set(&[0, 1, 3, 7, 12, 20]), 4));
    }

    #[test]
    fn ap_plus_examples() {
        let r = verify_ap_plus_k(11, 4, 13, 0).unwrap();
        let mut want = vec![0, 1, 3, 24];
        want.extend(7..=17);
        assert!(r.contains_mstd(&FiniteSet::new(want).unwrap()));
        assert_eq!(r.sets_enumerated, 14950);
        assert!(!r.falsified());

        let r = verify_ap_plus_k(8, 1, 10, 0).unwrap();
        assert!(r.mstd_found.is_empty() && r.violations.is_empty());
        assert_eq!(r.sets_enumerated, 20);

        let r = verify_ap_plus_k(6, 2, 8, 0).unwrap();
        assert!(r.mstd_found.is_empty());
        assert_eq!(r.sets_enumerated, 120);

        assert!(verify_ap_plus_k(2, 1, 3, 0).is_err());
        assert!(verify_ap_plus_k(5, 7, 3, 0).is_err());
    }
}
