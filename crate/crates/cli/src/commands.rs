use std::fmt::Write as _;
use std::fs;

use mstd_core::families::{self, FamilyParams, FamilyReport};
use mstd_core::primes::{
    check_two_exclusion, find_match, is_admissible, search_prime_mstd, CensusOptions, PrimePool,
    PrimeSearchReport, TupleSpec, DEFAULT_MIN_CARD,
};
use mstd_core::reproduce::{self, Config, Outcome};
use mstd_core::search::{self, SearchOptions, SearchReport};
use mstd_core::setcore::normalize_affine;
use mstd_core::{classify, parse_set, to_spohn, Error, FiniteSet, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::Output;
use crate::{
    ApPlusArgs, Cli, Command, EnumArgs, FamiliesCmd, FamilyId, PrimeSearchArgs, PrimesCmd,
    SearchCmd,
};

fn params_of(args: &impl Serialize) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

fn to_value(x: &impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// Runs the selected subcommand; returns its name and parameters for the
/// report envelope.
pub fn dispatch(cli: &Cli) -> (String, Value, Result<Output>) {
    let threads = cli.threads;
    match &cli.command {
        Command::Classify(a) => ("classify".into(), params_of(a), run_classify(&a.sets)),
        Command::Spohn(a) => ("spohn".into(), params_of(a), run_spohn(&a.set)),
        Command::Normalize(a) => ("normalize".into(), params_of(a), run_normalize(&a.set)),
        Command::Families(FamiliesCmd::Verify(a)) => (
            "families verify".into(),
            params_of(a),
            run_families_verify(a.id, a.pmax),
        ),
        Command::Families(FamiliesCmd::Build(a)) => (
            "families build".into(),
            params_of(a),
            run_families_build(a.id, FamilyParams::new(a.d, a.a, a.b)),
        ),
        Command::Search(cmd) => {
            let (name, params) = match cmd {
                SearchCmd::Verify(a) => ("search verify", params_of(a)),
                SearchCmd::Find(a) => ("search find", params_of(a)),
                SearchCmd::Lemmas(a) => ("search lemmas", params_of(a)),
                SearchCmd::Prop4(a) => ("search prop4", params_of(a)),
                SearchCmd::ApPlus(a) => ("search ap-plus", params_of(a)),
            };
            (
                name.into(),
                with_threads(params, threads),
                run_search(cmd, threads),
            )
        }
        Command::Primes(PrimesCmd::Search(a)) => (
            "primes search".into(),
            with_threads(params_of(a), threads),
            run_primes_search(a, threads),
        ),
        Command::Primes(PrimesCmd::Admissible(a)) => (
            "primes admissible".into(),
            params_of(a),
            run_admissible(&a.tuple),
        ),
        Command::Primes(PrimesCmd::Match(a)) => (
            "primes match".into(),
            params_of(a),
            run_match(&a.tuple, a.nmax),
        ),
        Command::Primes(PrimesCmd::VerifyExclusion(a)) => (
            "primes verify-exclusion".into(),
            params_of(a),
            run_verify_exclusion(&a.from),
        ),
        Command::Reproduce(a) => {
            let cfg = Config {
                quick: a.quick,
                seed: a.seed.unwrap_or(reproduce::DEFAULT_SEED),
                threads,
            };
            let params = json!({ "quick": cfg.quick, "seed": cfg.seed, "threads": threads });
            ("reproduce".into(), params, run_reproduce(&cfg))
        }
    }
}

fn with_threads(mut params: Value, threads: usize) -> Value {
    if let Value::Object(map) = &mut params {
        map.insert("threads".into(), threads.into());
    }
    params
}

fn read_set(literal: &str) -> Result<FiniteSet> {
    let parsed = parse_set(literal)?;
    if parsed.has_duplicates() {
        eprintln!(
            "warning: duplicate elements in {literal} ignored: {:?}",
            parsed.duplicates
        );
    }
    Ok(parsed.set)
}

#[derive(Serialize)]
struct ClassifyRow {
    set: FiniteSet,
    spohn: String,
    sum_card: u64,
    diff_card: u64,
    margin: i64,
    verdict: String,
}

impl ClassifyRow {
    fn new(set: FiniteSet) -> Self {
        let c = classify(&set);
        ClassifyRow {
            spohn: to_spohn(&set).to_string(),
            set,
            sum_card: c.sum_card,
            diff_card: c.diff_card,
            margin: c.margin,
            verdict: c.verdict.to_string(),
        }
    }

    fn line(&self) -> String {
        format!(
            "{}  {}  |A+A|={} |A-A|={}  margin {:+}  {}",
            self.set, self.spohn, self.sum_card, self.diff_card, self.margin, self.verdict
        )
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.set.to_string(),
            self.spohn.clone(),
            self.sum_card.to_string(),
            self.diff_card.to_string(),
            self.margin.to_string(),
            self.verdict.clone(),
        ]
    }
}

/// One set gives a JSON object, several give an array.
fn run_classify(literals: &[String]) -> Result<Output> {
    let rows = literals
        .iter()
        .map(|l| read_set(l).map(ClassifyRow::new))
        .collect::<Result<Vec<_>>>()?;
    let result = match rows.as_slice() {
        [one] => to_value(one)?,
        _ => to_value(&rows)?,
    };
    let text: Vec<String> = rows.iter().map(ClassifyRow::line).collect();
    Ok(Output::new(result, text.join("\n")).table(
        vec!["set", "spohn", "sum_card", "diff_card", "margin", "verdict"],
        rows.iter().map(ClassifyRow::record).collect(),
    ))
}

fn run_spohn(literal: &str) -> Result<Output> {
    let set = read_set(literal)?;
    let spohn = to_spohn(&set).to_string();
    Ok(
        Output::new(json!({ "set": set, "spohn": spohn }), spohn.clone())
            .table(vec!["set", "spohn"], vec![vec![set.to_string(), spohn]]),
    )
}

fn run_normalize(literal: &str) -> Result<Output> {
    let set = read_set(literal)?;
    let canonical = normalize_affine(&set)?;
    let spohn = to_spohn(&canonical).to_string();
    Ok(Output::new(
        json!({ "set": set, "canonical": canonical, "spohn": spohn }),
        format!("{canonical}  {spohn}"),
    )
    .table(
        vec!["set", "canonical", "spohn"],
        vec![vec![set.to_string(), canonical.to_string(), spohn]],
    ))
}

fn run_families_verify(id: FamilyId, pmax: u64) -> Result<Output> {
    let reports = match id {
        FamilyId::All => families::verify_all(pmax)?,
        FamilyId::One(id) => vec![families::verify_family(id, pmax)?],
    };
    let failed = reports.iter().any(|r| !r.holds());
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(
            text,
            "S{:<2} {:<28} {:<22} {:>6} instances  max margin {:>4}  {}",
            r.id,
            r.template,
            r.grid,
            r.instances_checked,
            r.max_margin_seen.map_or("-".into(), |m| m.to_string()),
            if r.holds() {
                "ok".to_string()
            } else {
                format!("{} sum-dominant: {}", r.violations.len(), violation_list(r))
            },
        );
    }
    let total: u64 = reports.iter().map(|r| r.instances_checked).sum();
    let _ = write!(
        text,
        "{total} instances, {}",
        if failed {
            "sum-dominant instances found"
        } else {
            "none sum-dominant"
        }
    );
    if failed {
        for r in reports.iter().filter(|r| !r.holds()) {
            eprintln!(
                "falsified: family S{} is sum-dominant at {}",
                r.id,
                violation_list(r)
            );
        }
    }
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.template.clone(),
                r.grid.clone(),
                r.instances_checked.to_string(),
                r.violations.len().to_string(),
                r.max_margin_seen.map_or(String::new(), |m| m.to_string()),
            ]
        })
        .collect();
    let result = match id {
        FamilyId::All => to_value(&reports)?,
        FamilyId::One(_) => to_value(&reports[0])?,
    };
    Ok(Output::new(result, text)
        .table(
            vec![
                "id",
                "template",
                "grid",
                "instances_checked",
                "violations",
                "max_margin_seen",
            ],
            rows,
        )
        .falsified_if(failed))
}

fn violation_list(r: &FamilyReport) -> String {
    let shown: Vec<String> = r
        .violations
        .iter()
        .take(5)
        .map(|p| format!("(d={},a={},b={})", p.d, p.a, p.b))
        .collect();
    shown.join(" ")
}

fn run_families_build(id: u8, params: FamilyParams) -> Result<Output> {
    let set = families::build_family(id, params)?;
    let row = ClassifyRow::new(set);
    Ok(Output::new(to_value(&row)?, row.line()).table(
        vec!["set", "spohn", "sum_card", "diff_card", "margin", "verdict"],
        vec![row.record()],
    ))
}

fn options(all_sets: bool, threads: usize) -> SearchOptions {
    SearchOptions {
        canonical_only: !all_sets,
        threads,
    }
}

fn run_search(cmd: &SearchCmd, threads: usize) -> Result<Output> {
    let enum_opts = |a: &EnumArgs| options(a.all_sets, threads);
    let report = match cmd {
        SearchCmd::Verify(a) => search::verify_no_mstd(a.n, a.diameter, enum_opts(a))?,
        SearchCmd::Find(a) => search::find_mstd(a.n, a.diameter, enum_opts(a))?,
        SearchCmd::Lemmas(a) => search::check_lemma_inequalities(a.n, a.diameter, enum_opts(a))?,
        SearchCmd::Prop4(a) => search::check_prop4(a.diameter, options(a.all_sets, threads))?,
        SearchCmd::ApPlus(ApPlusArgs {
            ap_len,
            added,
            range,
        }) => search::verify_ap_plus_k(*ap_len, *added, *range, threads)?,
    };
    let lemmas = matches!(cmd, SearchCmd::Lemmas(_));
    let table = if lemmas {
        (
            vec!["set", "spohn", "detail"],
            report
                .violations
                .iter()
                .map(|v| vec![v.set.to_string(), v.spohn.clone(), v.detail.clone()])
                .collect(),
        )
    } else {
        (
            vec!["set", "spohn", "margin"],
            report
                .mstd_found
                .iter()
                .map(|f| vec![f.set.to_string(), f.spohn.clone(), f.margin.to_string()])
                .collect(),
        )
    };
    if let Some(v) = report.violations.first() {
        eprintln!(
            "falsified: {} counterexample(s), first {} {}: {}",
            report.violations.len(),
            v.set,
            v.spohn,
            v.detail
        );
    }
    let text = search_text(&report, !lemmas);
    Ok(Output::new(to_value(&report)?, text)
        .table(table.0, table.1)
        .falsified_if(report.falsified()))
}

const LISTED: usize = 20;

fn search_text(r: &SearchReport, list_found: bool) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "sets enumerated: {}", r.sets_enumerated);
    if r.filtered_out > 0 {
        let _ = writeln!(t, "filtered out: {}", r.filtered_out);
    }
    let _ = writeln!(t, "sum-dominant sets: {}", r.mstd_found.len());
    if list_found {
        for f in &r.mstd_found {
            let _ = writeln!(t, "  {}  {}  margin {:+}", f.set, f.spohn, f.margin);
        }
    }
    let hist: Vec<String> = r
        .margin_histogram
        .iter()
        .map(|(m, c)| format!("{m}:{c}"))
        .collect();
    let _ = writeln!(t, "margin histogram: {}", hist.join(" "));
    if let Some(x) = r.max_x_seen {
        let _ = writeln!(t, "largest collision excess: {x}");
    }
    let _ = writeln!(t, "violations: {}", r.violations.len());
    for v in r.violations.iter().take(LISTED) {
        let _ = writeln!(t, "  {}  {}  {}", v.set, v.spohn, v.detail);
    }
    if r.violations.len() > LISTED {
        let _ = writeln!(t, "  ... {} more", r.violations.len() - LISTED);
    }
    t
}

fn run_primes_search(a: &PrimeSearchArgs, threads: usize) -> Result<Output> {
    let pool = PrimePool::new(a.max, a.include_two);
    let min_card = if a.no_min_card {
        1
    } else {
        a.min_card.unwrap_or(DEFAULT_MIN_CARD)
    };
    let opts = CensusOptions {
        min_card,
        threads,
        allow_large_pool: a.allow_large_pool,
        checkpoint: a.checkpoint.clone(),
        ..CensusOptions::default()
    };
    let report = search_prime_mstd(&pool, &opts)?;
    let small: Vec<&FiniteSet> = report
        .mstd_sets
        .iter()
        .filter(|s| s.len() < DEFAULT_MIN_CARD)
        .collect();
    if let Some(s) = small.first() {
        eprintln!(
            "falsified: {} sum-dominant set(s) with fewer than {DEFAULT_MIN_CARD} elements, first {s}",
            small.len()
        );
    }
    if report.two_exclusion_ok == Some(false) {
        eprintln!(
            "falsified: two-exclusion check failed; run `primes verify-exclusion` for details"
        );
    }
    let falsified = !small.is_empty() || report.two_exclusion_ok == Some(false);

    let mut out = Output::new(to_value(&report)?, primes_text(&report))
        .table(
            vec!["set", "card", "max", "margin"],
            report
                .mstd_sets
                .iter()
                .map(|s| {
                    vec![
                        s.to_string(),
                        s.len().to_string(),
                        s.max().to_string(),
                        classify(s).margin.to_string(),
                    ]
                })
                .collect(),
        )
        .falsified_if(falsified);
    if a.list {
        out.lines = Some(report.mstd_sets.iter().map(|s| s.to_string()).collect());
    }
    Ok(out)
}

fn primes_text(r: &PrimeSearchReport) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "pool: {} primes up to {}{}",
        r.pool.len(),
        r.pool.limit,
        if r.pool.include_two {
            " (with 2)"
        } else {
            " (odd)"
        }
    );
    let _ = writeln!(t, "nodes visited: {}", r.nodes_visited);
    let _ = writeln!(t, "sum-dominant subsets: {}", r.count);
    if let Some(first) = r.min_by_max.first() {
        let _ = writeln!(t, "smallest largest element: {}", first.max());
        for s in &r.min_by_max {
            let _ = writeln!(t, "  {s}");
        }
        let _ = writeln!(
            t,
            "unique minimum: {}",
            if r.unique_min { "yes" } else { "no" }
        );
    }
    if let Some(m) = r.max_margin {
        let _ = writeln!(t, "largest margin: {m}");
    }
    if let Some(ok) = r.two_exclusion_ok {
        let _ = writeln!(t, "two-exclusion: {}", if ok { "ok" } else { "FAILED" });
    }
    if !r.complete {
        let _ = writeln!(t, "incomplete: resume with the same --checkpoint");
    }
    t
}

fn run_admissible(offsets: &[u64]) -> Result<Output> {
    let t = TupleSpec::new(offsets.to_vec())?;
    let m = t.len() as u64;
    // moduli whose residues are all hit
    let covered: Vec<u64> = (2..=m)
        .filter(|&k| {
            let mut hit = vec![false; k as usize];
            for &b in t.offsets() {
                hit[(b % k) as usize] = true;
            }
            hit.iter().all(|&h| h)
        })
        .collect();
    let admissible = is_admissible(&t);
    debug_assert_eq!(admissible, covered.is_empty());
    let text = if admissible {
        "admissible".to_string()
    } else {
        format!("not admissible: covers every residue mod {covered:?}")
    };
    Ok(Output::new(
        json!({ "tuple": t.offsets(), "admissible": admissible, "covered_moduli": covered }),
        text,
    ))
}

fn run_match(offsets: &[u64], nmax: u64) -> Result<Output> {
    let t = TupleSpec::new(offsets.to_vec())?;
    let found = find_match(&t, nmax);
    let primes: Option<Vec<u64>> = found.map(|n| t.offsets().iter().map(|b| b + n).collect());
    let text = match (&found, &primes) {
        (Some(n), Some(p)) => format!("n = {n}: {p:?}"),
        _ => format!("no n in 1..={nmax}"),
    };
    Ok(Output::new(
        json!({ "tuple": t.offsets(), "nmax": nmax, "first_match": found, "primes": primes }),
        text,
    ))
}

fn run_verify_exclusion(path: &std::path::Path) -> Result<Output> {
    let text = fs::read_to_string(path)?;
    let mut value: Value = serde_json::from_str(&text)?;
    // accept the full envelope as well as the bare report
    if let Some(inner) = value.get_mut("result") {
        value = inner.take();
    }
    let report: PrimeSearchReport = serde_json::from_value(value).map_err(|e| {
        Error::InvalidParams(format!(
            "{} is not a primes search report: {e}",
            path.display()
        ))
    })?;
    let check = check_two_exclusion(&report);
    for (set, why) in check.failures.iter().take(LISTED) {
        eprintln!("falsified: {set}: {why}");
    }
    let fmt = |x: Option<i64>| x.map_or("-".into(), |v| v.to_string());
    let text = format!(
        "checked {} sets: largest margin {}, smallest excess {}: {}",
        check.checked,
        fmt(check.max_margin),
        fmt(check.min_excess),
        if check.ok {
            "ok".to_string()
        } else {
            format!("{} failures", check.failures.len())
        }
    );
    let rows = check
        .failures
        .iter()
        .map(|(s, why)| vec![s.to_string(), why.clone()])
        .collect();
    Ok(Output::new(to_value(&check)?, text)
        .table(vec!["set", "failure"], rows)
        .falsified_if(!check.ok))
}

fn run_reproduce(cfg: &Config) -> Result<Output> {
    let mut outcomes: Vec<Outcome> = Vec::new();
    for check in reproduce::checks(cfg.quick) {
        let o = check(cfg)?;
        eprintln!("{}", o.line());
        outcomes.push(o);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let mut text: Vec<String> = outcomes.iter().map(Outcome::line).collect();
    text.push(format!(
        "{} passed, {failed} failed",
        outcomes.len() - failed
    ));
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.to_string(),
                o.title.to_string(),
                if o.passed { "PASS" } else { "FAIL" }.to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    Ok(Output::new(to_value(&outcomes)?, text.join("\n"))
        .table(vec!["id", "title", "status", "detail"], rows)
        .falsified_if(failed > 0))
}
