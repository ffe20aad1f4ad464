//! Per-residue coefficient recurrences, transcribed case by case.
//!
//! Independent of [`super::sum_step`]: every case is written out with its own
//! index ranges, so the engine and these formulas can be compared level by
//! level. The `+ b(0, j, ·)` terms carry `-e(0, 0) = 1`; for `m >= 1` the `e`
//! contribution is zero and the formulas drop it.

use crate::bipoly::{Monomial, Sector, SignedBiPoly};
use crate::exact::Rational;
use crate::faulhaber::coeffs;

use super::{residue, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaCase {
    /// plain step on sectors {0,1}
    I,
    /// alternating step {0,1} -> {2,3}
    II,
    /// plain step on sectors {2,3}
    III,
    /// alternating step {2,3} -> {0,1}
    IV,
    IPrime,
    IIPrime,
    IIIPrime,
}

impl LemmaCase {
    /// Case governing the passage from level `r` to `r + 1`.
    pub fn classify(pattern: Pattern, r: u32) -> LemmaCase {
        let (s1, s2) = (pattern.s1 as u64, pattern.s2 as u64);
        let p = s1 + s2;
        let r = r as u64;
        let stepped = |x: u64, lo: u64, hi: u64| x >= lo && x <= hi && (x - lo) % 2 == 0;
        if s2 % 2 == 1 {
            let x = residue(r, 2 * p);
            if x <= s1 {
                LemmaCase::I
            } else if stepped(x, s1 + 1, s1 + s2) || stepped(x, 2 * s1 + s2 + 2, 2 * p - 1) {
                LemmaCase::II
            } else if (p + 1..=p + s1).contains(&x) {
                LemmaCase::III
            } else {
                debug_assert!(stepped(x, s1 + 2, s1 + s2 - 1) || stepped(x, 2 * s1 + s2 + 1, 2 * p));
                LemmaCase::IV
            }
        } else {
            let x = residue(r, p);
            if x <= s1 {
                LemmaCase::IPrime
            } else if stepped(x, s1 + 1, s1 + s2 - 1) {
                LemmaCase::IIPrime
            } else {
                LemmaCase::IIIPrime
            }
        }
    }

    /// `f(r + 1) - f(r)` claimed by the case.
    pub fn degree_increment(self) -> u32 {
        match self {
            LemmaCase::I | LemmaCase::IV | LemmaCase::IPrime | LemmaCase::IIIPrime => 1,
            LemmaCase::II | LemmaCase::III | LemmaCase::IIPrime => 0,
        }
    }
}

/// Predicts `T(r + 1)` from `T(r)` using the case formulas for `r`.
pub fn lemma_step(pattern: Pattern, r: u32, prev: &SignedBiPoly) -> SignedBiPoly {
    let f = pattern.degree(r);
    let b = |m: u32, j: u32, k: Sector| prev.coeff(m, j, k);
    let mut out = SignedBiPoly::zero();
    match LemmaCase::classify(pattern, r) {
        LemmaCase::I | LemmaCase::IPrime => into_plain_pair(&mut out, f, &b, Sector::One, Sector::Joint),
        LemmaCase::IV | LemmaCase::IIIPrime => into_plain_pair(&mut out, f, &b, Sector::N, Sector::T),
        LemmaCase::II | LemmaCase::IIPrime => into_alternating_pair(&mut out, f, &b, Sector::One, Sector::Joint),
        LemmaCase::III => into_alternating_pair(&mut out, f, &b, Sector::N, Sector::T),
    }
    let budget = pattern.degree(r + 1).max(out.total_degree());
    out.with_budget(budget).expect("budget covers degree")
}

/// Targets sectors 0 and 1. `sp` is summed with `c`, `d`; `sa` with `c1`, `d1`.
fn into_plain_pair<B>(out: &mut SignedBiPoly, f: u32, b: &B, sp: Sector, sa: Sector)
where
    B: Fn(u32, u32, Sector) -> Rational,
{
    for m in 1..=f + 1 {
        for j in 0..=f + 1 - m {
            let v: Rational = (m - 1..=f).map(|l| b(l, j, sp) * coeffs(l as usize).c(m as usize)).sum();
            out.add_term(Monomial::new(m, j, Sector::One), &v);
        }
    }
    for j in 0..=f + 1 {
        let v = -convolve_d(f, b, sp, j) + b(0, j, sp) + convolve_d1(f, b, sa, j);
        out.add_term(Monomial::new(0, j, Sector::One), &v);
    }
    for m in 0..=f {
        for j in 0..=f - m {
            let v: Rational = (m..=f).map(|l| b(l, j, sa) * coeffs(l as usize).c1(m as usize)).sum();
            out.add_term(Monomial::new(m, j, Sector::Joint), &v);
        }
    }
}

/// Targets sectors 2 and 3. `sa` is summed with `c1`, `d1`; `sp` with `c`, `d`.
fn into_alternating_pair<B>(out: &mut SignedBiPoly, f: u32, b: &B, sa: Sector, sp: Sector)
where
    B: Fn(u32, u32, Sector) -> Rational,
{
    for m in 0..=f {
        for j in 0..=f - m {
            let v: Rational = (m..=f).map(|l| b(l, j, sa) * coeffs(l as usize).c1(m as usize)).sum();
            out.add_term(Monomial::new(m, j, Sector::N), &v);
        }
    }
    for m in 1..=f + 1 {
        for j in 0..=f + 1 - m {
            let v: Rational = (m - 1..=f).map(|l| b(l, j, sp) * coeffs(l as usize).c(m as usize)).sum();
            out.add_term(Monomial::new(m, j, Sector::T), &v);
        }
    }
    for j in 0..=f + 1 {
        let v = convolve_d1(f, b, sa, j) + b(0, j, sp) - convolve_d(f, b, sp, j);
        out.add_term(Monomial::new(0, j, Sector::T), &v);
    }
}

/// `sum_m sum_{j1 + l = j, 0 <= j1 <= f - m, 1 <= l <= m + 1} b(m, j1, k) d(m, l)`.
fn convolve_d<B>(f: u32, b: &B, k: Sector, j: u32) -> Rational
where
    B: Fn(u32, u32, Sector) -> Rational,
{
    let mut acc = Rational::zero();
    for m in 0..=f {
        let fc = coeffs(m as usize);
        for l in 1..=(m + 1).min(j) {
            let j1 = j - l;
            if j1 <= f - m {
                acc += b(m, j1, k) * fc.d(l as usize);
            }
        }
    }
    acc
}

/// `sum_m sum_{j1 + l = j, 0 <= j1 <= f - m, 0 <= l <= m} b(m, j1, k) d1(m, l)`.
fn convolve_d1<B>(f: u32, b: &B, k: Sector, j: u32) -> Rational
where
    B: Fn(u32, u32, Sector) -> Rational,
{
    let mut acc = Rational::zero();
    for m in 0..=f {
        let fc = coeffs(m as usize);
        for l in 0..=m.min(j) {
            let j1 = j - l;
            if j1 <= f - m {
                acc += b(m, j1, k) * fc.d1(l as usize);
            }
        }
    }
    acc
}
