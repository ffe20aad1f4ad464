//! Structured pass/fail reports and parameter scans.
//!
//! Every check produces a [`CheckReport`]. A report fails exactly when it
//! carries a [`Counterexample`]; scans walk `r` upward and `(m, j, k)` in
//! lexicographic order, so the first counterexample recorded is the minimal one.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::bipoly::Sector;
use crate::eulersum::{check_partial_sum_identity, check_reduction_numeric};
use crate::exact::{sign_pow, Rational};
use crate::faulhaber::check_remark_identities;
use crate::hyperharmonic::{bound_check, HyperSpec};
use crate::tengine::{build_levels, verify_lemma_structure, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        })
    }
}

/// Location and values of a failed check. Unused coordinates stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Counterexample {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Pattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Counterexample {
    pub fn at(pattern: Pattern, r: u32) -> Self {
        Counterexample { pattern: Some(pattern), r: Some(r), ..Default::default() }
    }

    pub fn at_mj(m: i64, j: i64) -> Self {
        Counterexample { m: Some(m), j: Some(j), ..Default::default() }
    }

    pub fn mjk(mut self, m: u32, j: u32, k: Sector) -> Self {
        self.m = Some(m as i64);
        self.j = Some(j as i64);
        self.k = Some(k.index());
        self
    }

    pub fn n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn values(mut self, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        self.expected = Some(expected.into());
        self.actual = Some(actual.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub params: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub checked_count: u64,
    /// Conjectural suites report findings and never affect the exit status.
    pub conjectural: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} ({}): {} checks", self.status, self.suite, self.params, self.checked_count)?;
        if self.conjectural {
            f.write_str(", conjectural")?;
        }
        if let Some(d) = &self.detail {
            write!(f, "; {d}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, "; counterexample {}", serde_json::to_string(cx).unwrap_or_default())?;
        }
        Ok(())
    }
}

/// Accumulates checks and keeps the first counterexample.
#[derive(Debug)]
pub struct Checker {
    suite: String,
    params: String,
    conjectural: bool,
    checked: u64,
    counterexample: Option<Counterexample>,
    indeterminate: Option<String>,
    detail: Option<String>,
}

impl Checker {
    pub fn new(suite: impl Into<String>, params: impl Into<String>, conjectural: bool) -> Self {
        Checker {
            suite: suite.into(),
            params: params.into(),
            conjectural,
            checked: 0,
            counterexample: None,
            indeterminate: None,
            detail: None,
        }
    }

    /// Records one check; `at` is only built on failure.
    pub fn expect(&mut self, ok: bool, at: impl FnOnce() -> Counterexample) -> bool {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(at());
        }
        ok
    }

    /// Like [`Checker::expect`], filling in `expected`/`actual` when `at` leaves them empty.
    pub fn expect_eq<T>(&mut self, expected: &T, actual: &T, at: impl FnOnce() -> Counterexample) -> bool
    where
        T: PartialEq + fmt::Display + ?Sized,
    {
        self.expect(expected == actual, || {
            let cx = at();
            if cx.expected.is_some() {
                cx
            } else {
                cx.values(expected.to_string(), actual.to_string())
            }
        })
    }

    /// Marks the run inconclusive (e.g. a numeric target was missed).
    pub fn indeterminate(&mut self, reason: impl Into<String>) {
        self.indeterminate.get_or_insert_with(|| reason.into());
    }

    pub fn detail(&mut self, detail: impl Into<String>) {
        self.detail = Some(detail.into());
    }

    /// Folds a sub-report into this one.
    pub fn absorb(&mut self, sub: CheckReport) {
        self.checked += sub.checked_count;
        if self.counterexample.is_none() {
            self.counterexample = sub.counterexample;
        }
        if sub.status == Status::Indeterminate {
            self.indeterminate(sub.detail.unwrap_or_else(|| sub.params.clone()));
        }
    }

    pub fn finish(self) -> CheckReport {
        let status = match (&self.counterexample, &self.indeterminate) {
            (Some(_), _) => Status::Fail,
            (None, Some(_)) => Status::Indeterminate,
            (None, None) => Status::Pass,
        };
        CheckReport {
            suite: self.suite,
            params: self.params,
            status,
            counterexample: self.counterexample,
            checked_count: self.checked,
            conjectural: self.conjectural,
            detail: self.indeterminate.or(self.detail),
        }
    }
}

fn pattern_list(patterns: &[Pattern]) -> String {
    patterns.iter().map(Pattern::to_string).collect::<Vec<_>>().join(";")
}

/// Visits `(r, pattern, T(r))` with `r` outermost.
fn for_each_level(patterns: &[Pattern], r_max: u32, mut visit: impl FnMut(u32, Pattern, &crate::SignedBiPoly)) {
    if r_max == 0 {
        return;
    }
    let all: Vec<_> = patterns.iter().map(|&p| build_levels(p, r_max)).collect();
    for r in 1..=r_max {
        for (p, levels) in patterns.iter().zip(&all) {
            visit(r, *p, &levels[r as usize - 1]);
        }
    }
}

/// `b(m, j, k) = (-1)^(m+j) b(j, m, k)` for every coefficient.
pub fn check_conjecture1(patterns: &[Pattern], r_max: u32) -> CheckReport {
    let mut chk = Checker::new("conjecture1", format!("patterns {}, r <= {r_max}", pattern_list(patterns)), true);
    for_each_level(patterns, r_max, |r, p, t| {
        let f = p.degree(r);
        for m in 0..=f {
            for j in 0..=f - m {
                for k in Sector::ALL {
                    let lhs = t.coeff(m, j, k);
                    let rhs = t.coeff(j, m, k).mul_int(sign_pow((m + j) as i64));
                    chk.expect_eq(&rhs, &lhs, || Counterexample::at(p, r).mjk(m, j, k));
                }
            }
        }
    });
    chk.finish()
}

/// `sum_{j=0}^{m} sum_k b(m - j, j, k) = [m = 0]` for `0 <= m <= f`.
pub fn check_conjecture2(patterns: &[Pattern], r_max: u32) -> CheckReport {
    let mut chk = Checker::new("conjecture2", format!("patterns {}, r <= {r_max}", pattern_list(patterns)), true);
    for_each_level(patterns, r_max, |r, p, t| {
        for m in 0..=p.degree(r) {
            let s: Rational = (0..=m).flat_map(|j| Sector::ALL.map(|k| t.coeff(m - j, j, k))).sum();
            let expected = Rational::from(i64::from(m == 0));
            chk.expect_eq(&expected, &s, || {
                Counterexample::at(p, r).note(format!("anti-diagonal m = {m}"))
            });
        }
    });
    chk.finish()
}

/// `sum_k b(m, j, k)` is nonzero with sign `(-1)^j` for `m + j <= f`.
pub fn check_conjecture3(patterns: &[Pattern], r_max: u32) -> CheckReport {
    let mut chk = Checker::new("conjecture3", format!("patterns {}, r <= {r_max}", pattern_list(patterns)), true);
    for_each_level(patterns, r_max, |r, p, t| {
        let f = p.degree(r);
        for m in 0..=f {
            for j in 0..=f - m {
                let s: Rational = Sector::ALL.iter().map(|&k| t.coeff(m, j, k)).sum();
                let want = sign_pow(j as i64) as i32;
                chk.expect(s.signum() == want, || {
                    let cx = Counterexample::at(p, r).values(format!("sign {want}"), s.to_string());
                    Counterexample { m: Some(m as i64), j: Some(j as i64), ..cx }
                });
            }
        }
    });
    chk.finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Remarks,
    Lemmas,
    Bounds,
    Conjectures,
    Reduction,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Remarks, Suite::Lemmas, Suite::Bounds, Suite::Conjectures, Suite::Reduction];
}

#[derive(Clone, Debug)]
pub struct Config {
    pub patterns: Vec<Pattern>,
    pub r_max: u32,
    pub suites: Vec<Suite>,
    /// Worker threads; 1 runs everything on the caller's thread.
    pub jobs: usize,
    pub remark_m_max: usize,
    pub bound_n_max: i64,
    /// Partial sums up to this `N` for the exact reduction identity.
    pub identity_n_max: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            patterns: default_patterns(),
            r_max: 12,
            suites: Suite::ALL.to_vec(),
            jobs: 1,
            remark_m_max: 25,
            bound_n_max: 50,
            identity_n_max: 500,
        }
    }
}

pub fn default_patterns() -> Vec<Pattern> {
    [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (2, 2), (3, 2)]
        .into_iter()
        .map(|(a, b)| Pattern { s1: a, s2: b })
        .collect()
}

type Job<'a> = Box<dyn Fn() -> CheckReport + Send + Sync + 'a>;

fn jobs_for(config: &Config) -> Vec<Job<'_>> {
    let mut jobs: Vec<Job<'_>> = Vec::new();
    let pats = &config.patterns;
    let r_max = config.r_max;
    for suite in &config.suites {
        match suite {
            Suite::Remarks => jobs.push(Box::new(move || check_remark_identities(config.remark_m_max))),
            Suite::Lemmas => {
                for &p in pats {
                    jobs.push(Box::new(move || verify_lemma_structure(p, r_max)));
                }
            }
            Suite::Bounds => {
                for &p in pats {
                    for pp in 1..=2 {
                        jobs.push(Box::new(move || {
                            let mut chk = Checker::new(
                                "bounds",
                                format!("pattern {p}, p = {pp}, r <= {}, n <= {}", r_max.min(8), config.bound_n_max),
                                false,
                            );
                            for r in 1..=r_max.min(8) {
                                chk.absorb(bound_check(&HyperSpec::new(pp, r, p), config.bound_n_max));
                            }
                            chk.finish()
                        }));
                    }
                }
            }
            Suite::Conjectures => {
                jobs.push(Box::new(move || check_conjecture1(pats, r_max)));
                jobs.push(Box::new(move || check_conjecture2(pats, r_max)));
                jobs.push(Box::new(move || check_conjecture3(pats, r_max)));
            }
            Suite::Reduction => {
                for &p in pats {
                    for (pp, r) in [(1, 2), (2, 3), (1, 4)] {
                        if r > r_max {
                            continue;
                        }
                        let spec = HyperSpec::new(pp, r, p);
                        let q = r as f64 + 1.0;
                        jobs.push(Box::new(move || check_partial_sum_identity(&spec, r as i64 + 1, config.identity_n_max)));
                        jobs.push(Box::new(move || check_reduction_numeric(&spec, q, 1e-6)));
                    }
                }
            }
        }
    }
    jobs
}

/// Runs the configured suites. An empty pattern list yields no reports.
/// Output order depends only on the configuration, never on `jobs`.
pub fn run_all(config: &Config) -> Vec<CheckReport> {
    if config.patterns.is_empty() {
        return Vec::new();
    }
    let jobs = jobs_for(config);
    if config.jobs <= 1 {
        return jobs.iter().map(|j| j()).collect();
    }
    let slots: Vec<Mutex<Option<CheckReport>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.min(jobs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                *slots[i].lock().unwrap() = Some(job());
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("every job ran")).collect()
}

/// Whether every non-conjectural report is free of counterexamples.
pub fn all_required_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.conjectural || r.status != Status::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s1: u32, s2: u32) -> Pattern {
        Pattern::new(s1, s2).unwrap()
    }

    #[test]
    fn checker_keeps_first_failure() {
        let mut chk = Checker::new("demo", "x", false);
        chk.expect(true, || unreachable!());
        chk.expect_eq(&1, &2, || Counterexample::at_mj(0, 1));
        chk.expect_eq(&3, &4, || Counterexample::at_mj(5, 5));
        let rep = chk.finish();
        assert_eq!(rep.status, Status::Fail);
        assert_eq!(rep.checked_count, 3);
        let cx = rep.counterexample.unwrap();
        assert_eq!((cx.m, cx.j), (Some(0), Some(1)));
        assert_eq!(cx.expected.as_deref(), Some("1"));
        assert_eq!(cx.actual.as_deref(), Some("2"));
    }

    #[test]
    fn fail_iff_counterexample() {
        let mut chk = Checker::new("demo", "x", false);
        chk.indeterminate("budget");
        assert_eq!(chk.finish().status, Status::Indeterminate);
        let rep = Checker::new("demo", "x", false).finish();
        assert_eq!(rep.status, Status::Pass);
        assert!(rep.counterexample.is_none());
    }

    #[test]
    fn conjectures_on_small_tables() {
        let pats = [pat(2, 1)];
        for rep in [check_conjecture1(&pats, 5), check_conjecture2(&pats, 5), check_conjecture3(&pats, 5)] {
            assert_eq!(rep.status, Status::Pass, "{rep}");
            assert!(rep.conjectural);
            assert!(rep.checked_count > 0);
        }
    }

    #[test]
    fn conjecture_scan_over_default_patterns() {
        let pats = default_patterns();
        for rep in [check_conjecture1(&pats, 9), check_conjecture2(&pats, 9), check_conjecture3(&pats, 9)] {
            assert_eq!(rep.status, Status::Pass, "{rep}");
        }
    }

    #[test]
    fn empty_pattern_list_is_empty_and_ok() {
        let cfg = Config { patterns: vec![], ..Config::default() };
        let reps = run_all(&cfg);
        assert!(reps.is_empty());
        assert!(all_required_pass(&reps));
    }

    #[test]
    fn run_all_is_deterministic_across_job_counts() {
        let cfg = Config {
            patterns: vec![pat(2, 1), pat(1, 2)],
            r_max: 5,
            suites: vec![Suite::Remarks, Suite::Lemmas, Suite::Conjectures],
            remark_m_max: 6,
            ..Config::default()
        };
        let serial = run_all(&cfg);
        let parallel = run_all(&Config { jobs: 3, ..cfg.clone() });
        assert_eq!(
            serde_json::to_string(&serial).unwrap(),
            serde_json::to_string(&parallel).unwrap()
        );
        assert!(all_required_pass(&serial));
    }

    #[test]
    fn conjectural_failures_do_not_count() {
        let mut chk = Checker::new("conjecture9", "x", true);
        chk.expect(false, Counterexample::default);
        assert!(all_required_pass(&[chk.finish()]));
        let mut chk = Checker::new("lemmas", "x", false);
        chk.expect(false, Counterexample::default);
        assert!(!all_required_pass(&[chk.finish()]));
    }
}
