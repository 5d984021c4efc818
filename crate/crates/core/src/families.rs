//! Parametric six-element families that are never sum-dominant, plus the
//! progression-with-extras constructions.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setcore::{classify, FiniteSet};

/// A gap written as `d_coef * d + a_coef * a + b_coef * b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapExpr {
    pub d: u64,
    pub a: u64,
    pub b: u64,
}

const fn g(d: u64, a: u64, b: u64) -> GapExpr {
    GapExpr { d, a, b }
}

impl GapExpr {
    fn eval(&self, p: &FamilyParams) -> u64 {
        self.d * p.d + self.a * p.a + self.b * p.b
    }
}

impl fmt::Display for GapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in [(self.d, 'd'), (self.a, 'a'), (self.b, 'b')] {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if c > 1 {
                write!(f, "{c}")?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub id: u8,
    pub gap_template: [GapExpr; 5],
    /// Only S1 carries one: `a + b = d`.
    pub constraint: Option<&'static str>,
}

impl FamilySpec {
    pub fn uses_d(&self) -> bool {
        self.gap_template.iter().any(|e| e.d > 0)
    }

    pub fn uses_a(&self) -> bool {
        self.gap_template.iter().any(|e| e.a > 0)
    }

    pub fn uses_b(&self) -> bool {
        self.gap_template.iter().any(|e| e.b > 0)
    }

    pub fn template(&self) -> String {
        let gaps: Vec<String> = self.gap_template.iter().map(|e| e.to_string()).collect();
        format!("(0|{})", gaps.join(","))
    }
}

pub const FAMILIES: [FamilySpec; 15] = {
    const D: GapExpr = g(1, 0, 0);
    const D2: GapExpr = g(2, 0, 0);
    const A: GapExpr = g(0, 1, 0);
    const A2: GapExpr = g(0, 2, 0);
    const B: GapExpr = g(0, 0, 1);
    const AB: GapExpr = g(0, 1, 1);
    const A2B: GapExpr = g(0, 2, 1);
    const fn f(id: u8, t: [GapExpr; 5]) -> FamilySpec {
        FamilySpec {
            id,
            gap_template: t,
            constraint: None,
        }
    }
    [
        FamilySpec {
            id: 1,
            gap_template: [D, D, D2, A, B],
            constraint: Some("a + b = d"),
        },
        f(2, [D, D, D2, D, A]),
        f(3, [D, D, D2, A, D]),
        f(4, [D2, D, D, A, D2]),
        f(5, [A, B, B, A, A]),
        f(6, [AB, A, A, B, AB]),
        f(7, [AB, A, A, B, A]),
        f(8, [A, A2, A, A, B]),
        f(9, [AB, A, AB, A, B]),
        f(10, [AB, A2B, AB, A, B]),
        f(11, [A, B, A, AB, A]),
        f(12, [A, B, AB, A, A]),
        f(13, [A2B, A, A, B, A]),
        f(14, [AB, A, A, B, A2]),
        f(15, [A, AB, A, B, A]),
    ]
};

pub fn family(id: u8) -> Result<&'static FamilySpec> {
    FAMILIES
        .get((id as usize).wrapping_sub(1))
        .ok_or(Error::UnknownFamily(id))
}

/// Parameter values; entries a family does not use are ignored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(default, skip_serializing_if = "is_zero")]
    pub d: u64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub a: u64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub b: u64,
}

fn is_zero(x: &u64) -> bool {
    *x == 0
}

impl FamilyParams {
    pub fn new(d: u64, a: u64, b: u64) -> Self {
        FamilyParams { d, a, b }
    }

    /// Zeroes the parameters `spec` does not use.
    fn restricted_to(self, spec: &FamilySpec) -> Self {
        FamilyParams {
            d: if spec.uses_d() { self.d } else { 0 },
            a: if spec.uses_a() { self.a } else { 0 },
            b: if spec.uses_b() { self.b } else { 0 },
        }
    }
}

pub fn build_family(id: u8, params: FamilyParams) -> Result<FiniteSet> {
    let spec = family(id)?;
    for (used, value, name) in [
        (spec.uses_d(), params.d, 'd'),
        (spec.uses_a(), params.a, 'a'),
        (spec.uses_b(), params.b, 'b'),
    ] {
        if used && value == 0 {
            return Err(Error::ZeroParameter { id, param: name });
        }
    }
    if let Some(constraint) = spec.constraint {
        if params.a.checked_add(params.b) != Some(params.d) {
            return Err(Error::FamilyConstraint { id, constraint });
        }
    }
    let mut v = vec![0u64];
    for e in &spec.gap_template {
        let next = v[v.len() - 1]
            .checked_add(e.eval(&params))
            .ok_or(Error::ElementTooLarge(u128::MAX))?;
        v.push(next);
    }
    FiniteSet::from_sorted(v)
}

/// Every valid parameter tuple with used values in `1..=pmax`.
pub fn family_grid(id: u8, pmax: u64) -> Result<Vec<FamilyParams>> {
    let spec = family(id)?;
    let mut out = Vec::new();
    if spec.constraint.is_some() {
        for d in 1..=pmax {
            for a in 1..d {
                out.push(FamilyParams::new(d, a, d - a));
            }
        }
    } else {
        for x in 1..=pmax {
            for y in 1..=pmax {
                let p = if spec.uses_d() {
                    FamilyParams::new(x, y, 0)
                } else {
                    FamilyParams::new(0, x, y)
                };
                out.push(p.restricted_to(spec));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub id: u8,
    pub template: String,
    pub grid: String,
    pub instances_checked: u64,
    /// Parameter tuples whose instance is sum-dominant, sorted.
    pub violations: Vec<FamilyParams>,
    pub max_margin_seen: Option<i64>,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_family(id: u8, pmax: u64) -> Result<FamilyReport> {
    let spec = family(id)?;
    if pmax == 0 {
        return Err(Error::InvalidParams("pmax must be at least 1".into()));
    }
    let grid = family_grid(id, pmax)?;
    let results: Vec<(FamilyParams, i64)> = grid
        .par_iter()
        .map(|&p| build_family(id, p).map(|s| (p, classify(&s).margin)))
        .collect::<Result<_>>()?;
    let mut violations: Vec<FamilyParams> = results
        .iter()
        .filter(|(_, m)| *m > 0)
        .map(|(p, _)| *p)
        .collect();
    violations.sort();
    let names: Vec<&str> = [
        (spec.uses_d(), "d"),
        (spec.uses_a(), "a"),
        (spec.uses_b(), "b"),
    ]
    .into_iter()
    .filter_map(|(u, n)| u.then_some(n))
    .collect();
    let mut grid_desc = format!("{} in 1..={pmax}", names.join(","));
    if let Some(c) = spec.constraint {
        grid_desc.push_str(&format!(" with {c}"));
    }
    Ok(FamilyReport {
        id,
        template: spec.template(),
        grid: grid_desc,
        instances_checked: results.len() as u64,
        violations,
        max_margin_seen: results.iter().map(|(_, m)| *m).max(),
    })
}

pub fn verify_all(pmax: u64) -> Result<Vec<FamilyReport>> {
    (1..=15).map(|id| verify_family(id, pmax)).collect()
}

/// `{0,2} ∪ {3,7,...,4k-1} ∪ {4k,4k+2}`.
pub fn build_nathanson_star(k: u64) -> Result<FiniteSet> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let mut v = vec![0, 2];
    v.extend((1..=k).map(|j| 4 * j - 1));
    v.extend([4 * k, 4 * k + 2]);
    FiniteSet::new(v)
}

/// The progression `start, start+step, ...` of length `len`, joined with `extras`.
pub fn build_ap_plus(start: u64, step: u64, len: u64, extras: &[u64]) -> Result<FiniteSet> {
    if len == 0 || step == 0 {
        return Err(Error::InvalidParams(
            "progression length and step must be positive".into(),
        ));
    }
    let ap = FiniteSet::from_sorted(
        (0..len)
            .map(|i| {
                i.checked_mul(step)
                    .and_then(|x| x.checked_add(start))
                    .ok_or(Error::ElementTooLarge(u128::MAX))
            })
            .collect::<Result<_>>()?,
    )?;
    let mut overlap: Vec<u64> = extras.iter().copied().filter(|&x| ap.contains(x)).collect();
    if !overlap.is_empty() {
        overlap.sort_unstable();
        overlap.dedup();
        return Err(Error::Overlap(overlap));
    }
    let mut v = ap.into_vec();
    v.extend_from_slice(extras);
    FiniteSet::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{contains_ap, Verdict};

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(
            build_family(5, FamilyParams::new(0, 2, 1)).unwrap(),
            set(&[0, 2, 3, 4, 6, 8])
        );
        assert_eq!(
            build_family(1, FamilyParams::new(3, 1, 2)).unwrap(),
            set(&[0, 3, 6, 12, 13, 15])
        );
        assert_eq!(
            build_family(2, FamilyParams::new(1, 5, 0)).unwrap(),
            set(&[0, 1, 2, 4, 5, 10])
        );
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            build_family(1, FamilyParams::new(3, 1, 1)),
            Err(Error::FamilyConstraint { id: 1, .. })
        ));
        assert!(matches!(
            build_family(2, FamilyParams::new(0, 5, 0)),
            Err(Error::ZeroParameter { id: 2, param: 'd' })
        ));
        assert!(matches!(
            build_family(16, FamilyParams::new(1, 1, 1)),
            Err(Error::UnknownFamily(16))
        ));
        assert!(matches!(family(0), Err(Error::UnknownFamily(0))));
    }

    #[test]
    fn templates_have_five_positive_gaps() {
        for spec in &FAMILIES {
            let p = FamilyParams::new(2, 1, 1);
            let s = build_family(spec.id, p).unwrap();
            assert_eq!(s.len(), 6, "S{}", spec.id);
        }
        assert_eq!(family(10).unwrap().template(), "(0|a+b,2a+b,a+b,a,b)");
        assert_eq!(family(4).unwrap().template(), "(0|2d,d,d,a,2d)");
    }

    #[test]
    fn verify_examples() {
        let r = verify_family(5, 20).unwrap();
        assert!(r.holds());
        assert_eq!(r.instances_checked, 400);

        let r = verify_family(1, 20).unwrap();
        assert!(r.holds());
        assert_eq!(r.instances_checked, 190);

        let r = verify_family(7, 1).unwrap();
        assert_eq!(r.instances_checked, 1);
        assert!(r.max_margin_seen.unwrap() <= 0);
        assert_eq!(
            build_family(7, FamilyParams::new(0, 1, 1)).unwrap(),
            set(&[0, 2, 3, 4, 5, 6])
        );
    }

    #[test]
    fn report_invariant() {
        for r in verify_all(8).unwrap() {
            assert_eq!(r.holds(), r.max_margin_seen.is_none_or(|m| m <= 0));
        }
    }

    #[test]
    fn helper_set_regressions() {
        let c = classify(&set(&[0, 1, 2, 4]));
        assert_eq!(c.diff_card as i64 - c.sum_card as i64, 1);
    }

    #[test]
    fn ap_collisions_stay_non_dominant() {
        for spec in &FAMILIES {
            for p in family_grid(spec.id, 12).unwrap() {
                let s = build_family(spec.id, p).unwrap();
                if contains_ap(&s, 4) {
                    assert!(classify(&s).margin <= 0, "S{} {p:?}", spec.id);
                }
            }
        }
    }

    #[test]
    fn nathanson_star() {
        assert_eq!(build_nathanson_star(1).unwrap(), set(&[0, 2, 3, 4, 6]));
        assert_eq!(
            build_nathanson_star(3).unwrap(),
            set(&[0, 2, 3, 7, 11, 12, 14])
        );
        assert_eq!(
            build_nathanson_star(4).unwrap(),
            set(&[0, 2, 3, 7, 11, 15, 16, 18])
        );
        // symmetric about 4k+2, hence balanced for every k
        for k in 1..=12 {
            let a = build_nathanson_star(k).unwrap();
            assert_eq!(a.len() as u64, k + 4);
            assert_eq!(classify(&a).verdict, Verdict::Balanced, "k={k}");
        }
        assert!(build_nathanson_star(0).is_err());
    }

    #[test]
    fn ap_plus() {
        let s = build_ap_plus(7, 1, 11, &[0, 1, 3, 24]).unwrap();
        let mut want = vec![0, 1, 3, 24];
        want.extend(7..=17);
        assert_eq!(s, FiniteSet::new(want).unwrap());
        assert_eq!(classify(&s).verdict, Verdict::SumDominant);

        let s = build_ap_plus(0, 1, 5, &[]).unwrap();
        assert_eq!(s, set(&[0, 1, 2, 3, 4]));
        assert_eq!(classify(&s).verdict, Verdict::Balanced);

        let k = 5;
        assert_eq!(
            build_ap_plus(3, 4, k, &[0, 2, 4 * k, 4 * k + 2]).unwrap(),
            build_nathanson_star(k).unwrap()
        );

        match build_ap_plus(0, 2, 4, &[1, 4, 6]) {
            Err(Error::Overlap(v)) => assert_eq!(v, vec![4, 6]),
            other => panic!("{other:?}"),
        }
    }
}
