//! The kernel `T(r, s1, s2, n, t)` as a sign-sector polynomial.
//!
//! `T(1) = 1` and each further level is `sum_{k=t}^{n} w(k) T(r-1, k, t)` with
//! `w(k) = 1` on plain steps and `(-1)^(k-1)` on alternating ones. A single
//! sector-aware summation step ([`sum_step`]) handles every pattern; the
//! per-residue recurrences live in [`lemma`] and serve as a cross-check.

pub mod lemma;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::analysis::{CheckReport, Checker, Counterexample};
use crate::bipoly::{Monomial, Sector, SignedBiPoly};
use crate::error::{Error, Result};
use crate::exact::{sign_pow, Rational};
use crate::faulhaber::coeffs;

/// Plain/alternating cycle: `s1` plain levels followed by `s2` alternating ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pattern {
    pub s1: u32,
    pub s2: u32,
}

impl Pattern {
    pub fn new(s1: u32, s2: u32) -> Result<Self> {
        if s1 + s2 == 0 {
            return Err(Error::InvalidPattern { s1, s2 });
        }
        Ok(Pattern { s1, s2 })
    }

    /// The classical pattern `(1, 0)`: every step plain.
    pub const CLASSICAL: Pattern = Pattern { s1: 1, s2: 0 };

    pub fn period(&self) -> u32 {
        self.s1 + self.s2
    }

    /// Kind of the step producing level `r`; panics for `r < 2`.
    pub fn step_kind(&self, r: u32) -> StepKind {
        assert!(r >= 2, "level 1 is not produced by a step");
        if residue(r as u64 - 1, self.period() as u64) <= self.s1 as u64 {
            StepKind::Plain
        } else {
            StepKind::Alternating
        }
    }

    /// Number of alternating steps among levels `2..=r`.
    pub fn alternations(&self, r: u32) -> u32 {
        (2..=r).filter(|&l| self.step_kind(l) == StepKind::Alternating).count() as u32
    }

    /// Sectors that may be nonzero at level `r`.
    pub fn active_sectors(&self, r: u32) -> [Sector; 2] {
        if self.alternations(r) % 2 == 0 {
            [Sector::One, Sector::Joint]
        } else {
            [Sector::N, Sector::T]
        }
    }

    /// Degree budget `f(r, s1, s2)`.
    pub fn degree(&self, r: u32) -> u32 {
        (2..=r).filter(|&l| self.degree_increments(l - 1)).count() as u32
    }

    /// Whether `f(x + 1) = f(x) + 1`.
    fn degree_increments(&self, x: u32) -> bool {
        let (s1, s2) = (self.s1 as u64, self.s2 as u64);
        let p = s1 + s2;
        let x = x as u64;
        if s2 % 2 == 1 {
            let r = residue(x, 2 * p);
            r <= s1
                || (s1 + 2..s1 + s2).contains(&r) && (r - s1) % 2 == 0
                || (2 * s1 + s2 + 1..=2 * p).contains(&r) && (r - 2 * s1 - s2 - 1) % 2 == 0
        } else {
            let r = residue(x, p);
            r <= s1 || (s1 + 2..=s1 + s2).contains(&r) && (r - s1) % 2 == 0
        }
    }
}

/// Representative of `x` modulo `period` in `1..=period`.
pub(crate) fn residue(x: u64, period: u64) -> u64 {
    (x + period - 1) % period + 1
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.s1, self.s2)
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Parses `"s1,s2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("pattern {s:?} is not of the form s1,s2"));
        let (a, b) = s.trim().split_once(',').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        Pattern::new(a, b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    Plain,
    Alternating,
}

impl StepKind {
    /// Summation weight at index `k`.
    pub fn weight(self, k: i64) -> i64 {
        match self {
            StepKind::Plain => 1,
            StepKind::Alternating => sign_pow(k - 1),
        }
    }
}

/// Representation of `sum_{k=t}^{n} w(k) P(k, t)`.
pub fn sum_step(p: &SignedBiPoly, kind: StepKind) -> SignedBiPoly {
    let src = match kind {
        StepKind::Plain => p.clone(),
        StepKind::Alternating => p.mul_alternation(),
    };
    let mut out = SignedBiPoly::zero();
    for (mono, v) in src.terms() {
        let fc = coeffs(mono.m as usize);
        let m = mono.m;
        let j = mono.j;
        match mono.sector {
            Sector::One | Sector::T => {
                for i in 1..=m + 1 {
                    out.add_term(Monomial::new(i, j, mono.sector), &(v * fc.c(i as usize)));
                    out.add_term(Monomial::new(0, j + i, mono.sector), &-(v * fc.d(i as usize)));
                }
                out.add_term(Monomial::new(0, j, mono.sector), &-(v * &fc.e0));
            }
            Sector::Joint | Sector::N => {
                // (-1)^(t-1) from the boundary meets the sector's own t-sign
                let boundary = if mono.sector == Sector::Joint { Sector::One } else { Sector::T };
                for i in 0..=m {
                    out.add_term(Monomial::new(i, j, mono.sector), &(v * fc.c1(i as usize)));
                    out.add_term(Monomial::new(0, j + i, boundary), &(v * fc.d1(i as usize)));
                }
            }
        }
    }
    out
}

/// `T(r, s1, s2)`; panics for `r = 0`.
pub fn build(pattern: Pattern, r: u32) -> SignedBiPoly {
    build_levels(pattern, r).pop().expect("r >= 1")
}

/// `[T(1), T(2), ..., T(r)]`, each carrying its budget `f`.
///
/// If an engine level ever exceeded its budget the budget is widened to the
/// actual degree, so the overrun stays visible to structure checks.
pub fn build_levels(pattern: Pattern, r: u32) -> Vec<SignedBiPoly> {
    assert!(r >= 1, "levels start at r = 1");
    let mut levels = Vec::with_capacity(r as usize);
    levels.push(SignedBiPoly::one());
    for level in 2..=r {
        let next = sum_step(levels.last().unwrap(), pattern.step_kind(level));
        let f = pattern.degree(level);
        let budget = f.max(next.total_degree());
        levels.push(next.with_budget(budget).expect("budget covers degree"));
    }
    levels
}

/// Caps on the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_r: u32,
    pub max_n: i64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_r: 64, max_n: 5000 }
    }
}

/// `T(r, s1, s2, n, t)` by literal nested summation.
pub fn oracle(pattern: Pattern, r: u32, n: i64, t: i64) -> Result<Rational> {
    oracle_with(&OracleLimits::default(), pattern, r, n, t)
}

/// `T(1) = 1` everywhere; for `r >= 2` and `t > n` the sum is empty and the value 0.
pub fn oracle_with(limits: &OracleLimits, pattern: Pattern, r: u32, n: i64, t: i64) -> Result<Rational> {
    if r == 0 || n < 1 || t < 1 {
        return Err(Error::InvalidArgument(format!("oracle needs r, n, t >= 1 (got r={r}, n={n}, t={t})")));
    }
    if r > limits.max_r || n > limits.max_n {
        return Err(Error::OracleLimit(format!(
            "r={r}, n={n} exceeds max_r={}, max_n={}",
            limits.max_r, limits.max_n
        )));
    }
    if r == 1 {
        return Ok(Rational::one());
    }
    if t > n {
        return Ok(Rational::zero());
    }
    // column k = t..=n of the previous level
    let mut col = vec![BigInt::from(1); (n - t + 1) as usize];
    for level in 2..=r {
        let kind = pattern.step_kind(level);
        let mut acc = BigInt::from(0);
        for (i, v) in col.iter_mut().enumerate() {
            acc += &*v * kind.weight(t + i as i64);
            *v = acc.clone();
        }
    }
    Ok(Rational::from_integer(col.pop().unwrap()))
}

/// Checks the structural claims about the coefficients for every `r <= r_max`:
/// active sectors, the vanishing and diagonal zero-sum side conditions stated
/// for `(2,1)` and `(1,2)`, the degree budget, and agreement with the
/// per-residue recurrences of [`lemma`].
pub fn verify_lemma_structure(pattern: Pattern, r_max: u32) -> CheckReport {
    let mut chk = Checker::new("lemmas", format!("pattern {pattern}, r <= {r_max}"), false);
    if r_max == 0 {
        return chk.finish();
    }
    let levels = build_levels(pattern, r_max);
    for (idx, t) in levels.iter().enumerate() {
        let r = idx as u32 + 1;
        let f = pattern.degree(r);
        let at = || Counterexample::at(pattern, r);

        chk.expect(t.total_degree() <= f, || {
            at().values(f.to_string(), t.total_degree().to_string()).note("degree exceeds budget")
        });

        let active = pattern.active_sectors(r);
        for (mono, c) in t.terms() {
            chk.expect(active.contains(&mono.sector), || {
                at().mjk(mono.m, mono.j, mono.sector).values("0", c.to_string()).note("inactive sector")
            });
        }

        for rule in side_conditions(pattern, r, f) {
            match rule {
                SideCondition::Vanish { sector, min_total } => {
                    for (mono, c) in t.terms().filter(|(mono, _)| mono.sector == sector) {
                        chk.expect(mono.total_degree() < min_total, || {
                            at().mjk(mono.m, mono.j, sector).values("0", c.to_string()).note("must vanish")
                        });
                    }
                }
                SideCondition::DiagonalZero { total } => {
                    let s: Rational = (0..=total).map(|m| t.coeff(m, total - m, Sector::One)).sum();
                    chk.expect_eq(&Rational::zero(), &s, || at().note(format!("sector-0 diagonal m+j={total}")));
                }
            }
        }

        if let Some(next) = levels.get(idx + 1) {
            let case = lemma::LemmaCase::classify(pattern, r);
            let predicted = lemma::lemma_step(pattern, r, t);
            chk.expect(&predicted == next, || {
                let diff = first_difference(&predicted, next);
                let base = Counterexample::at(pattern, r + 1);
                match diff {
                    Some((mono, e, a)) => base.mjk(mono.m, mono.j, mono.sector).values(e.to_string(), a.to_string()),
                    None => base,
                }
                .note(format!("case {case:?} recurrence"))
            });
            let f_next = pattern.degree(r + 1);
            chk.expect(f_next == f + case.degree_increment(), || {
                Counterexample::at(pattern, r + 1)
                    .values((f + case.degree_increment()).to_string(), f_next.to_string())
                    .note(format!("case {case:?} degree increment"))
            });
        }
    }
    chk.finish()
}

enum SideCondition {
    /// `b(m, j, sector) = 0` whenever `m + j >= min_total`.
    Vanish { sector: Sector, min_total: u32 },
    /// `sum_m b(m, total - m, 0) = 0`.
    DiagonalZero { total: u32 },
}

fn side_conditions(pattern: Pattern, r: u32, f: u32) -> Vec<SideCondition> {
    use SideCondition::*;
    let below = |k: u32| f.saturating_sub(k);
    match (pattern.s1, pattern.s2) {
        (2, 1) => match residue(r as u64, 6) {
            1 => vec![Vanish { sector: Sector::Joint, min_total: f }],
            2 => vec![Vanish { sector: Sector::Joint, min_total: below(1) }, DiagonalZero { total: f }],
            3 => vec![
                Vanish { sector: Sector::Joint, min_total: below(2) },
                DiagonalZero { total: f },
                DiagonalZero { total: below(1) },
            ],
            4 => vec![Vanish { sector: Sector::T, min_total: below(1) }],
            5 => vec![Vanish { sector: Sector::T, min_total: f }],
            _ => vec![],
        },
        (1, 2) => match residue(r as u64, 3) {
            1 => vec![Vanish { sector: Sector::Joint, min_total: f }],
            2 => vec![Vanish { sector: Sector::Joint, min_total: below(1) }],
            _ => vec![],
        },
        _ => vec![],
    }
}

fn first_difference(a: &SignedBiPoly, b: &SignedBiPoly) -> Option<(Monomial, Rational, Rational)> {
    let mut keys: Vec<Monomial> = a.terms().chain(b.terms()).map(|(m, _)| *m).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().find_map(|mono| {
        let (x, y) = (a.coeff(mono.m, mono.j, mono.sector), b.coeff(mono.m, mono.j, mono.sector));
        (x != y).then_some((mono, x, y))
    })
}
