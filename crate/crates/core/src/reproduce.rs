//! End-to-end checks of the headline results, shared by the `reproduce`
//! command and the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::families;
use crate::primes::{self, CensusOptions, PrimePool, TupleSpec};
use crate::search::{self, SearchOptions};
use crate::setcore::{classify, is_symmetric, naive, normalize_affine, FiniteSet};

pub const DEFAULT_SEED: u64 = 0x5eed_6d57_d000_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub quick: bool,
    pub seed: u64,
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quick: false,
            seed: DEFAULT_SEED,
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    fn new(id: u8, title: &'static str, checks: &[(&str, bool)], extra: String) -> Self {
        let failed: Vec<&str> = checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| *n)
            .collect();
        let mut detail = extra;
        if !failed.is_empty() {
            detail.push_str(&format!("; failed: {}", failed.join(", ")));
        }
        Outcome {
            id,
            title,
            passed: failed.is_empty(),
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

fn set(v: &[u64]) -> FiniteSet {
    FiniteSet::new(v.to_vec()).expect("literal sets are valid")
}

pub fn theorem2_set() -> FiniteSet {
    set(&[3, 5, 7, 13, 17, 19, 23, 43, 47, 53, 59, 61, 67, 71, 73])
}

pub fn a8_prime() -> FiniteSet {
    set(&[103, 127, 151, 199, 211, 223, 283, 307, 331])
}

pub fn a11_prime() -> FiniteSet {
    set(&[23, 47, 59, 71, 89, 107, 137, 149, 173])
}

fn search_opts(cfg: &Config) -> SearchOptions {
    SearchOptions {
        canonical_only: true,
        threads: cfg.threads,
    }
}

fn census_opts(cfg: &Config) -> CensusOptions {
    CensusOptions {
        threads: cfg.threads,
        ..Default::default()
    }
}

pub fn theorem2_smallest_prime_set(cfg: &Config) -> Result<Outcome> {
    let at73 = primes::search_prime_mstd(&PrimePool::odd(73), &census_opts(cfg))?;
    let at71 = primes::search_prime_mstd(&PrimePool::odd(71), &census_opts(cfg))?;
    let stated = theorem2_set();
    let min: Vec<String> = at73.min_by_max.iter().map(|s| s.to_string()).collect();
    Ok(Outcome::new(
        1,
        "smallest sum-dominant prime set",
        &[
            (
                "min_by_max = stated set",
                at73.min_by_max == [stated.clone()],
            ),
            ("unique_min", at73.unique_min),
            ("no set below 73", at71.count == 0),
        ],
        format!(
            "max 73: min_by_max = [{}], unique_min = {}; max 71: count = {}",
            min.join(", "),
            at73.unique_min,
            at71.count
        ),
    ))
}

pub fn census_109(cfg: &Config) -> Result<Outcome> {
    let r = primes::search_prime_mstd(&PrimePool::odd(109), &census_opts(cfg))?;
    let two = primes::check_two_exclusion(&r);
    Ok(Outcome::new(
        2,
        "prime census up to 109",
        &[
            ("count = 2725", r.count == 2725),
            ("max_margin <= 4", r.max_margin.is_some_and(|m| m <= 4)),
            ("two exclusion", two.ok),
        ],
        format!(
            "count = {}, max_margin = {:?}, two exclusion ok = {} (min excess {:?})",
            r.count, r.max_margin, two.ok, two.min_excess
        ),
    ))
}

pub fn theorem1_six_sets(cfg: &Config) -> Result<Outcome> {
    let d = if cfg.quick { 25 } else { 36 };
    let r = search::verify_no_mstd(6, d, search_opts(cfg))?;
    Ok(Outcome::new(
        3,
        "no sum-dominant 6-set",
        &[("zero MSTD", r.mstd_found.is_empty())],
        format!(
            "D = {d}: {} canonical sets, {} MSTD",
            r.sets_enumerated,
            r.mstd_found.len()
        ),
    ))
}

/// All sum-dominant `k`-subsets of `{0..=top}` containing 0, by double loop.
pub fn brute_force_mstd(k: usize, top: u64) -> Vec<FiniteSet> {
    let mut out = Vec::new();
    let mut chosen = vec![0u64];
    fn rec(from: u64, top: u64, k: usize, chosen: &mut Vec<u64>, out: &mut Vec<FiniteSet>) {
        if chosen.len() == k {
            let s = FiniteSet::new(chosen.clone()).expect("nonempty");
            if naive::classify(&s).margin > 0 {
                out.push(s);
            }
            return;
        }
        for x in from..=top {
            chosen.push(x);
            rec(x + 1, top, k, chosen, out);
            chosen.pop();
        }
    }
    rec(1, top, k, &mut chosen, &mut out);
    out
}

pub fn hegarty_threshold(cfg: &Config) -> Result<Outcome> {
    let seven = search::verify_no_mstd(7, 24, search_opts(cfg))?;
    let at14 = search::find_mstd(8, 14, search_opts(cfg))?;
    let at13 = search::find_mstd(8, 13, search_opts(cfg))?;
    let all14 = search::find_mstd(
        8,
        14,
        SearchOptions {
            canonical_only: false,
            threads: cfg.threads,
        },
    )?;
    let mut brute = brute_force_mstd(8, 14);
    brute.sort_by_key(|s| s.gaps());
    let listed: Vec<FiniteSet> = all14.mstd_found.iter().map(|f| f.set.clone()).collect();
    let classic = set(&[0, 2, 3, 4, 7, 11, 12, 14]);
    Ok(Outcome::new(
        4,
        "cardinality threshold 8",
        &[
            ("no 7-set", seven.mstd_found.is_empty()),
            ("8-set found at D=14", !at14.mstd_found.is_empty()),
            ("classic set listed", at14.contains_mstd(&classic)),
            ("none at D=13", at13.mstd_found.is_empty()),
            (
                "brute force agrees",
                brute == listed && brute.iter().all(|s| s.diameter() == 14),
            ),
        ],
        format!(
            "n=7 D=24: {} MSTD; n=8 D=14: {} canonical ({} total, brute force {}); n=8 D=13: {}",
            seven.mstd_found.len(),
            at14.mstd_found.len(),
            listed.len(),
            brute.len(),
            at13.mstd_found.len()
        ),
    ))
}

pub fn family_grid(cfg: &Config) -> Result<Outcome> {
    let pmax = if cfg.quick { 10 } else { 30 };
    let reports = crate::parallel::with_threads(cfg.threads, || families::verify_all(pmax))?;
    let instances: u64 = reports.iter().map(|r| r.instances_checked).sum();
    let bad: Vec<u8> = reports
        .iter()
        .filter(|r| !r.holds())
        .map(|r| r.id)
        .collect();
    Ok(Outcome::new(
        5,
        "fifteen families never sum-dominant",
        &[("zero violations", bad.is_empty())],
        format!("pmax = {pmax}: {instances} instances, families with violations: {bad:?}"),
    ))
}

pub fn regression_values(_: &Config) -> Result<Outcome> {
    let k = classify(&set(&[0, 1, 2, 4]));
    let k4 = classify(&set(&[0, 2, 3, 4]));
    let k4_gap = k4.diff_card as i64 - k4.sum_card as i64;
    Ok(Outcome::new(
        6,
        "helper-set regression values",
        &[
            (
                "{0,1,2,4} = (8,9,-1)",
                (k.sum_card, k.diff_card, k.margin) == (8, 9, -1),
            ),
            ("{0,2,3,4} diff-sum = 3", k4_gap == 3),
        ],
        format!(
            "{{0,1,2,4}} = ({}, {}, {}); {{0,2,3,4}} diff_card - sum_card = {} - {} = {}",
            k.sum_card, k.diff_card, k.margin, k4.diff_card, k4.sum_card, k4_gap
        ),
    ))
}

pub fn named_sets(_: &Config) -> Result<Outcome> {
    let ap_plus = families::build_ap_plus(7, 1, 11, &[0, 1, 3, 24])?;
    let p = set(&[19, 79, 109, 139, 229, 349, 379, 439]);
    let named = [
        ("{0,1,3}+{7..17}+{24}", ap_plus),
        ("P", p),
        ("A'8", a8_prime()),
        ("A'11", a11_prime()),
    ];
    let checks: Vec<(&str, bool)> = named
        .iter()
        .map(|(name, s)| (*name, classify(s).is_sum_dominant()))
        .collect();
    let margins: Vec<String> = named
        .iter()
        .map(|(name, s)| format!("{name} margin {}", classify(s).margin))
        .collect();
    Ok(Outcome::new(
        7,
        "named sets are sum-dominant",
        &checks,
        margins.join(", "),
    ))
}

pub fn lemma_inequalities(cfg: &Config) -> Result<Outcome> {
    let six = search::check_lemma_inequalities(6, 25, search_opts(cfg))?;
    let seven = search::check_lemma_inequalities(7, 18, search_opts(cfg))?;
    let sample = six
        .violations
        .first()
        .or(seven.violations.first())
        .map(|v| format!("; e.g. {} {}", v.set, v.detail))
        .unwrap_or_default();
    Ok(Outcome::new(
        8,
        "repeated-difference inequalities",
        &[
            ("n=6 D=25", six.violations.is_empty()),
            ("n=7 D=18", seven.violations.is_empty()),
        ],
        format!(
            "n=6: {} violations in {} sets; n=7: {} violations in {} sets{sample}",
            six.violations.len(),
            six.sets_enumerated,
            seven.violations.len(),
            seven.sets_enumerated
        ),
    ))
}

/// Random `B ∪ (c - B)` with `c >= max(B)`.
pub fn random_symmetric(rng: &mut ChaCha8Rng) -> FiniteSet {
    let len = rng.gen_range(1..=12);
    let b: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=1000)).collect();
    let c = b.iter().copied().max().unwrap_or(0) + rng.gen_range(0..=500);
    let mut v = b.clone();
    v.extend(b.iter().map(|&x| c - x));
    FiniteSet::new(v).expect("nonempty")
}

pub fn symmetric_and_ap4(cfg: &Config) -> Result<Outcome> {
    let mut exhaustive_ok = true;
    let mut symmetric_seen = 0u64;
    for mask in 1u32..1 << 17 {
        let s = FiniteSet::from_sorted_unchecked((0..17).filter(|i| mask >> i & 1 == 1).collect());
        if is_symmetric(&s).is_some() {
            symmetric_seen += 1;
            exhaustive_ok &= classify(&s).margin == 0;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let random_ok = (0..10_000).all(|_| {
        let s = random_symmetric(&mut rng);
        is_symmetric(&s).is_some() && classify(&s).margin == 0
    });
    let prop4 = search::check_prop4(30, search_opts(cfg))?;
    Ok(Outcome::new(
        9,
        "symmetric sets balanced; 4-AP six-sets not sum-dominant",
        &[
            ("subsets of {0..16}", exhaustive_ok),
            ("10^4 constructed", random_ok),
            ("4-AP D=30", prop4.violations.is_empty()),
        ],
        format!(
            "{symmetric_seen} symmetric subsets of {{0..16}}; {} 4-AP six-sets, {} sum-dominant",
            prop4.sets_enumerated,
            prop4.violations.len()
        ),
    ))
}

fn oracle_agrees(s: &FiniteSet) -> bool {
    let fast_sums = crate::setcore::sumset(s);
    let fast_diffs = crate::setcore::diff_set(s).signed();
    fast_sums.elements().iter().copied().eq(naive::sumset(s))
        && fast_diffs.into_iter().eq(naive::diffset(s))
}

pub fn oracle_and_determinism(cfg: &Config) -> Result<Outcome> {
    let exhaustive = (1u32..1 << 15).all(|mask| {
        let s = FiniteSet::from_sorted_unchecked((0..15).filter(|i| mask >> i & 1 == 1).collect());
        oracle_agrees(&s)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa5a5);
    let random = (0..10_000).all(|_| {
        let len = rng.gen_range(1..=30);
        let v: Vec<u64> = (0..len).map(|_| rng.gen_range(0..=1_000_000)).collect();
        oracle_agrees(&FiniteSet::new(v).expect("nonempty"))
    });

    let search_json = |threads| -> Result<String> {
        let r = search::find_mstd(
            8,
            16,
            SearchOptions {
                canonical_only: false,
                threads,
            },
        )?;
        Ok(serde_json::to_string(&r)?)
    };
    let census_json = |threads| -> Result<String> {
        let r = primes::search_prime_mstd(
            &PrimePool::odd(79),
            &CensusOptions {
                threads,
                ..Default::default()
            },
        )?;
        Ok(serde_json::to_string(&r)?)
    };
    let s1 = search_json(1)?;
    let c1 = census_json(1)?;
    let mut deterministic = true;
    for t in [2, 4] {
        deterministic &= search_json(t)? == s1 && census_json(t)? == c1;
    }
    Ok(Outcome::new(
        10,
        "oracle equivalence and determinism",
        &[
            ("subsets of {0..14}", exhaustive),
            ("10^4 random sets", random),
            ("thread-count independent", deterministic),
        ],
        "bit-vector vs double loop; reports compared at 1, 2, 4 workers".into(),
    ))
}

pub fn tuple_constructions(_: &Config) -> Result<Outcome> {
    let a8 = TupleSpec::new(vec![0, 24, 48, 96, 108, 120, 180, 204, 228])?;
    let a11 = TupleSpec::new(vec![0, 24, 36, 48, 66, 84, 114, 126, 150])?;
    let from8: Vec<u64> = a8.offsets().iter().map(|b| b + 103).collect();
    let from11: Vec<u64> = a11.offsets().iter().map(|b| b + 23).collect();
    let first8 = primes::find_match(&a8, 200);
    let first11 = primes::find_match(&a11, 100);
    Ok(Outcome::new(
        11,
        "admissible tuples and matches",
        &[
            ("12*A8 admissible", primes::is_admissible(&a8)),
            (
                "103 matches",
                primes::is_match(&a8, 103) && FiniteSet::new(from8)? == a8_prime(),
            ),
            (
                "23 matches",
                primes::is_match(&a11, 23) && FiniteSet::new(from11)? == a11_prime(),
            ),
            (
                "same affine class",
                normalize_affine(&a8_prime())? == set(&[0, 2, 4, 8, 9, 10, 15, 17, 19]),
            ),
        ],
        format!("smallest matches: 12*A8 -> {first8:?}, 6*A11 -> {first11:?}"),
    ))
}

pub type Check = fn(&Config) -> Result<Outcome>;

pub const ALL: [Check; 11] = [
    theorem2_smallest_prime_set,
    census_109,
    theorem1_six_sets,
    hegarty_threshold,
    family_grid,
    regression_values,
    named_sets,
    lemma_inequalities,
    symmetric_and_ap4,
    oracle_and_determinism,
    tuple_constructions,
];

/// The checks `run` performs: all of them, or the quick subset (1, 3 at
/// D=25, 5 at pmax=10).
pub fn checks(quick: bool) -> Vec<Check> {
    if quick {
        vec![theorem2_smallest_prime_set, theorem1_six_sets, family_grid]
    } else {
        ALL.to_vec()
    }
}

pub fn run(cfg: &Config) -> Result<Vec<Outcome>> {
    checks(cfg.quick).iter().map(|f| f(cfg)).collect()
}
