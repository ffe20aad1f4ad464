//! Euler sums of generalized hyperharmonic numbers.
//!
//! Writing `H_n = sum_t t^(-p) T(n, t)` and expanding the kernel, each
//! coefficient `b(m, j, k)` of `t^j n^m s_k` contributes
//! `b * S^(sigma(k))_(p-j, q-m)` where `S^(s1,s2)_(p,q) = sum_n (s2)^(n-1) I_n / n^q`
//! and `I` is `H^(p)` for `s1 = +`, `H̄^(p)` for `s1 = -`. The sector map is
//! `0 -> (+,+)`, `1 -> (-,-)`, `2 -> (+,-)`, `3 -> (-,+)`.

pub mod numeric;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::analysis::{CheckReport, Checker, Counterexample};
use crate::bipoly::Sector;
use crate::error::{Error, Result};
use crate::exact::{lcm_upto, Rational};
use crate::hyperharmonic::{harmonic_scaled_table, hyper_scaled_table, hyper_table_f64, HarmonicSpec, HyperSpec};
use crate::tengine::build;

pub use numeric::Estimate;

/// Default `N` for partial sums; `ALTHARM_MAX_TERMS` caps it.
pub const DEFAULT_TERMS: usize = 100_000;

/// Applies the `ALTHARM_MAX_TERMS` cap to a requested term count.
pub fn capped_terms(requested: usize) -> usize {
    match std::env::var("ALTHARM_MAX_TERMS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => requested.min(cap),
        _ => requested,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `(sigma1, sigma2)` of a kernel sector.
    pub fn pair_of(sector: Sector) -> (Sign, Sign) {
        match sector {
            Sector::One => (Sign::Plus, Sign::Plus),
            Sector::Joint => (Sign::Minus, Sign::Minus),
            Sector::N => (Sign::Plus, Sign::Minus),
            Sector::T => (Sign::Minus, Sign::Plus),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_minus() { "-" } else { "+" })
    }
}

/// `coef * S^(sigma1, sigma2)_(p, q)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerSumTerm {
    #[serde(rename = "s1")]
    pub sigma1: Sign,
    #[serde(rename = "s2")]
    pub sigma2: Sign,
    pub p: i64,
    pub q: f64,
    #[serde(serialize_with = "serialize_rational")]
    pub coef: Rational,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Conservative convergence test for `S^(s1,s2)_(p,q)`, allowing the inner
/// sum to grow like `n^max(0, 1-p)`.
pub fn converges(sigma2: Sign, p: i64, q: f64) -> bool {
    let growth = (1 - p).max(0) as f64;
    match sigma2 {
        Sign::Plus => q - growth > 1.0,
        Sign::Minus => q - growth > 0.0,
    }
}

impl EulerSumTerm {
    pub fn converges(&self) -> bool {
        converges(self.sigma2, self.p, self.q)
    }

    pub fn inner(&self) -> HarmonicSpec {
        HarmonicSpec { p: self.p, alternating: self.sigma1.is_minus() }
    }

    /// `S^{+,-}_{2,3}`-style label.
    pub fn label(&self) -> String {
        format!("S^{{{},{}}}_{{{},{}}}", self.sigma1, self.sigma2, self.p, fmt_q(self.q))
    }
}

fn fmt_q(q: f64) -> String {
    if q.fract() == 0.0 && q.abs() < 1e15 {
        format!("{}", q as i64)
    } else {
        format!("{q}")
    }
}

impl fmt::Display for EulerSumTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·{}", self.coef, self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reduction {
    pub terms: Vec<EulerSumTerm>,
    /// `q < r + 1`; every term was still checked to converge.
    pub below_hypothesis: bool,
}

/// Rewrites `sum_n H_n^(p,r,s1,s2) / n^q` over classical sums. Terms are
/// merged by `(sigma1, sigma2, p', m)` and ordered by that key, so `q' = q - m`
/// decreases within a group.
pub fn reduce(spec: &HyperSpec, q: f64) -> Result<Reduction> {
    let kernel = build(spec.pattern, spec.r);
    let mut merged: BTreeMap<(Sign, Sign, i64, u32), Rational> = BTreeMap::new();
    for (mono, coef) in kernel.terms() {
        let (s1, s2) = Sign::pair_of(mono.sector);
        *merged.entry((s1, s2, spec.p - mono.j as i64, mono.m)).or_insert_with(Rational::zero) += coef;
    }
    let terms: Vec<EulerSumTerm> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((sigma1, sigma2, p, m), coef)| EulerSumTerm { sigma1, sigma2, p, q: q - m as f64, coef })
        .collect();
    if let Some(bad) = terms.iter().find(|t| !t.converges()) {
        return Err(Error::Divergent(format!("{} does not converge", bad.label())));
    }
    Ok(Reduction { terms, below_hypothesis: q < spec.r as f64 + 1.0 })
}

/// `S^(sigma1, sigma2)_(p, q)` with estimated absolute error below `target`.
pub fn eval_classical(term: &EulerSumTerm, target: f64) -> Result<Estimate> {
    eval_classical_with(term, target, capped_terms(DEFAULT_TERMS))
}

pub fn eval_classical_with(term: &EulerSumTerm, target: f64, n_terms: usize) -> Result<Estimate> {
    if !term.converges() {
        return Err(Error::Divergent(term.label()));
    }
    let est = numeric::eval_series(&[term.inner()], 0, term.sigma2.is_minus(), term.q, n_terms)?;
    if est.err_est > target {
        return Err(Error::NotConverged { value: est.value, achieved: est.err_est, target });
    }
    Ok(est)
}

/// `sum coef_i S_i` with error `sum |coef_i| err_i`.
pub fn eval_reduction(red: &Reduction, target: f64) -> Result<Estimate> {
    eval_reduction_with(red, target, capped_terms(DEFAULT_TERMS))
}

pub fn eval_reduction_with(red: &Reduction, target: f64, n_terms: usize) -> Result<Estimate> {
    let mut value = numeric::Neumaier::default();
    let mut err = 0.0;
    for t in &red.terms {
        let e = eval_classical_with(t, f64::INFINITY, n_terms)?;
        let c = t.coef.to_f64();
        value.add(c * e.value);
        err += c.abs() * e.err_est + f64::EPSILON * (c * e.value).abs();
    }
    let value = value.value();
    if err > target {
        return Err(Error::NotConverged { value, achieved: err, target });
    }
    Ok(Estimate { value, err_est: err })
}

/// Averages `depth + 1` consecutive partial sums starting at index `m - 1`
/// with binomial weights; this damps `(-1)^n` components of the tail.
fn euler_average(partial: &[f64], m: usize, depth: usize) -> f64 {
    let mut level: Vec<f64> = partial[m - 1..m + depth].to_vec();
    while level.len() > 1 {
        level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    level[0]
}

/// Extrapolated limit of partial sums `S_n` whose smooth tail decays like
/// `n^s0 (ln n)^l`, `l <= logs`.
fn extrapolated_limit(summands: &[f64], s0: f64, logs: u32) -> Result<Estimate> {
    const DEPTH: usize = 20;
    let n = summands.len() - DEPTH;
    let mut acc = numeric::Neumaier::default();
    let mut partial = Vec::with_capacity(summands.len());
    let mut abs_total = 0.0;
    for a in summands {
        acc.add(*a);
        abs_total += a.abs();
        partial.push(acc.value());
    }
    let orders = 3usize;
    let unknowns = 1 + orders * (logs as usize + 1);
    let count = 2 * unknowns;
    let samples: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let m = ((n as f64) * 0.8f64.powi(i as i32)).round() as usize;
            // the averaged value sits half a window to the right
            (m as f64 + DEPTH as f64 / 2.0, euler_average(&partial, m.max(1), DEPTH))
        })
        .collect();
    let est = numeric::extrapolate(&samples, s0, orders, logs)?;
    Ok(Estimate { value: est.value, err_est: est.err_est + 8.0 * f64::EPSILON * abs_total })
}

/// `sum_n H_n^(p,r,s1,s2) / n^q` summed directly to `n_terms` (capped by
/// `ALTHARM_MAX_TERMS`), Euler-averaged and extrapolated. The tail shape comes
/// from the bound `|H_n| <= H_n^(p,r) = O(n^(r-1) ln n)`.
pub fn eval_direct(spec: &HyperSpec, q: f64, n_terms: usize) -> Result<Estimate> {
    if q < spec.r as f64 + 1.0 {
        return Err(Error::InvalidArgument(format!("direct summation needs q >= r + 1 (q = {q}, r = {})", spec.r)));
    }
    let n = capped_terms(n_terms).max(2000);
    let table = hyper_table_f64(spec, n + 20);
    let summands: Vec<f64> = table.iter().enumerate().map(|(i, h)| h * ((i + 1) as f64).powf(-q)).collect();
    extrapolated_limit(&summands, spec.r as f64 - q, 1)
}

/// One expanded term `coef * n^J * (sign)^(n-1) * prod_i I_i(n)` of a product.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonlinearTerm {
    #[serde(serialize_with = "serialize_rational")]
    pub coef: Rational,
    pub n_power: u32,
    pub outer_sign: Sign,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factor {
    pub alternating: bool,
    pub order: i64,
}

impl Factor {
    fn spec(self) -> HarmonicSpec {
        HarmonicSpec { p: self.order, alternating: self.alternating }
    }
}

impl NonlinearTerm {
    /// Same growth allowance as [`converges`], summed over the factors.
    pub fn converges(&self, q: f64) -> bool {
        let growth: i64 = self.factors.iter().map(|f| (1 - f.order).max(0)).sum();
        let slack = q - self.n_power as f64 - growth as f64;
        match self.outer_sign {
            Sign::Plus => slack > 1.0,
            Sign::Minus => slack > 0.0,
        }
    }

    pub fn label(&self) -> String {
        let fs: Vec<String> = self
            .factors
            .iter()
            .map(|f| format!("{}^({})", if f.alternating { "H̄" } else { "H" }, f.order))
            .collect();
        format!("{}·n^{}·({})^(n-1)·{}", self.coef, self.n_power, self.outer_sign, fs.join("·"))
    }
}

/// Distributes `prod_i H_n^(p_i, r_i, ...)` into `n^J (+-1)^(n-1) prod H^(p_i - j_i)` terms,
/// merging equal `(J, sign, factors)` keys. Fails if any term diverges at `q`.
pub fn expand_product(specs: &[HyperSpec], q: f64) -> Result<Vec<NonlinearTerm>> {
    let mut acc: BTreeMap<(u32, Sign, Vec<Factor>), Rational> = BTreeMap::new();
    acc.insert((0, Sign::Plus, Vec::new()), Rational::one());
    for spec in specs {
        let kernel = build(spec.pattern, spec.r);
        let mut next: BTreeMap<(u32, Sign, Vec<Factor>), Rational> = BTreeMap::new();
        for ((jpow, sign, factors), c) in &acc {
            for (mono, b) in kernel.terms() {
                let n_sign = if mono.sector.alternates_in_n() { Sign::Minus } else { Sign::Plus };
                let mut fs = factors.clone();
                fs.push(Factor { alternating: mono.sector.alternates_in_t(), order: spec.p - mono.j as i64 });
                *next.entry((jpow + mono.m, sign.times(n_sign), fs)).or_insert_with(Rational::zero) += c * b;
            }
        }
        acc = next;
    }
    let terms: Vec<NonlinearTerm> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((n_power, outer_sign, factors), coef)| NonlinearTerm { coef, n_power, outer_sign, factors })
        .collect();
    if let Some(bad) = terms.iter().find(|t| !t.converges(q)) {
        return Err(Error::Divergent(format!("{} / n^{} does not converge", bad.label(), fmt_q(q))));
    }
    Ok(terms)
}

/// `sum_n (expanded terms) / n^q`, evaluated term by term from asymptotic models.
pub fn eval_nonlinear(terms: &[NonlinearTerm], q: f64, n_terms: usize) -> Result<Estimate> {
    let mut value = numeric::Neumaier::default();
    let mut err = 0.0;
    for t in terms {
        let specs: Vec<HarmonicSpec> = t.factors.iter().map(|f| f.spec()).collect();
        let e = numeric::eval_series(&specs, t.n_power, t.outer_sign.is_minus(), q, capped_terms(n_terms))?;
        let c = t.coef.to_f64();
        value.add(c * e.value);
        err += c.abs() * e.err_est + f64::EPSILON * (c * e.value).abs();
    }
    Ok(Estimate { value: value.value(), err_est: err })
}

/// `sum_n prod_i H_n^(spec_i) / n^q` by direct summation and extrapolation.
pub fn eval_direct_product(specs: &[HyperSpec], q: f64, n_terms: usize) -> Result<Estimate> {
    let n = capped_terms(n_terms).max(2000);
    let mut prod = vec![1.0; n + 20];
    let mut logs = 0;
    for spec in specs {
        for (x, h) in prod.iter_mut().zip(hyper_table_f64(spec, n + 20)) {
            *x *= h;
        }
        logs += 1;
    }
    let growth: f64 = specs.iter().map(|s| s.r as f64 - 1.0).sum();
    if q - growth <= 1.0 {
        return Err(Error::InvalidArgument(format!("direct product summation needs q > {}", growth + 1.0)));
    }
    let summands: Vec<f64> = prod.iter().enumerate().map(|(i, x)| x * ((i + 1) as f64).powf(-q)).collect();
    extrapolated_limit(&summands, growth + 1.0 - q, logs)
}

fn denominators_lcm<'a>(coefs: impl Iterator<Item = &'a Rational>) -> BigInt {
    coefs.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Scaled inner table `scale * I_n` for `n <= n_max`, for any `p <= p_max`.
fn inner_scaled(spec: HarmonicSpec, scale_root: &BigInt, p_max: i64, n_max: usize) -> Vec<BigInt> {
    let t = harmonic_scaled_table(spec, n_max);
    let lift = scale_root.pow((p_max.max(0) - spec.p.max(0)) as u32);
    t.values.into_iter().map(|v| v * &lift).collect()
}

/// For every `n <= n_max`: `H_n = sum_terms coef * sigma2^(n-1) * n^(q - q') * I_n`,
/// in integers scaled by `lcm(1..n_max)^p` and the coefficient denominators.
/// Equality at every `n` is equality of all partial sums `sum_{n<=N} H_n x_n`
/// for arbitrary weights `x_n`, in particular `x_n = n^-q`.
pub fn check_partial_sum_identity(spec: &HyperSpec, q: i64, n_max: i64) -> CheckReport {
    let mut chk = Checker::new(
        "reduction-exact",
        format!("pattern {}, p = {}, r = {}, q = {q}, N <= {n_max}", spec.pattern, spec.p, spec.r),
        false,
    );
    let red = match reduce(spec, q as f64) {
        Ok(r) => r,
        Err(e) => {
            chk.expect(false, || Counterexample::at(spec.pattern, spec.r).note(e.to_string()));
            return chk.finish();
        }
    };
    let n_max = n_max.max(1) as usize;
    let root = lcm_upto(n_max as u64);
    let lhs = hyper_scaled_table(spec, n_max);
    let d = denominators_lcm(red.terms.iter().map(|t| &t.coef));
    let scaled_terms: Vec<(BigInt, bool, u32, Vec<BigInt>)> = red
        .terms
        .iter()
        .map(|t| {
            let m = (q as f64 - t.q).round() as u32;
            let c = (t.coef.numer() * (&d / t.coef.denom())).clone();
            (c, t.sigma2.is_minus(), m, inner_scaled(t.inner(), &root, spec.p, n_max))
        })
        .collect();
    for n in 1..=n_max {
        let want = &d * lhs.get(n);
        let mut got = BigInt::zero();
        for (c, alt, m, inner) in &scaled_terms {
            let mut v = c * &inner[n - 1] * BigInt::from(n).pow(*m);
            if *alt && n % 2 == 0 {
                v = -v;
            }
            got += v;
        }
        chk.expect(want == got, || {
            Counterexample::at(spec.pattern, spec.r).n(n as i64).values(
                Rational::new(want.clone(), &d * &lhs.scale).unwrap().to_string(),
                Rational::new(got.clone(), &d * &lhs.scale).unwrap().to_string(),
            )
        });
    }
    chk.finish()
}

/// Per-`n` identity between the product of hyperharmonic numbers and its
/// expansion, for every `n <= n_max`.
pub fn check_product_identity(specs: &[HyperSpec], q: f64, n_max: i64) -> CheckReport {
    let desc: Vec<String> =
        specs.iter().map(|s| format!("({},{},{},{})", s.p, s.r, s.pattern.s1, s.pattern.s2)).collect();
    let mut chk = Checker::new("product-exact", format!("factors {}, N <= {n_max}", desc.join(" x ")), false);
    let terms = match expand_product(specs, q) {
        Ok(t) => t,
        Err(e) => {
            chk.expect(false, || Counterexample::default().note(e.to_string()));
            return chk.finish();
        }
    };
    let n_max = n_max.max(1) as usize;
    let root = lcm_upto(n_max as u64);
    let tables: Vec<_> = specs.iter().map(|s| hyper_scaled_table(s, n_max)).collect();
    let d = denominators_lcm(terms.iter().map(|t| &t.coef));
    let prepared: Vec<(BigInt, &NonlinearTerm, Vec<Vec<BigInt>>)> = terms
        .iter()
        .map(|t| {
            let c = t.coef.numer() * (&d / t.coef.denom());
            let inners = t
                .factors
                .iter()
                .zip(specs)
                .map(|(f, s)| inner_scaled(f.spec(), &root, s.p, n_max))
                .collect();
            (c, t, inners)
        })
        .collect();
    for n in 1..=n_max {
        let want = tables.iter().fold(d.clone(), |acc, t| acc * t.get(n));
        let mut got = BigInt::zero();
        for (c, t, inners) in &prepared {
            let mut v = inners.iter().fold(c * BigInt::from(n).pow(t.n_power), |acc, col| acc * &col[n - 1]);
            if t.outer_sign.is_minus() && n % 2 == 0 {
                v = -v;
            }
            got += v;
        }
        chk.expect(want == got, || Counterexample::default().n(n as i64).note("product expansion mismatch"));
    }
    chk.finish()
}

/// `|eval_direct - eval(reduce)| < tol`, also requiring the gap to sit within
/// the combined error estimate plus `tol`.
pub fn check_reduction_numeric(spec: &HyperSpec, q: f64, tol: f64) -> CheckReport {
    let mut chk = Checker::new(
        "reduction-numeric",
        format!("pattern {}, p = {}, r = {}, q = {}, tol = {tol:e}", spec.pattern, spec.p, spec.r, fmt_q(q)),
        false,
    );
    let result = reduce(spec, q).and_then(|red| {
        let reduced = eval_reduction(&red, f64::INFINITY)?;
        let direct = eval_direct(spec, q, capped_terms(DEFAULT_TERMS))?;
        Ok((direct, reduced))
    });
    match result {
        Ok((direct, reduced)) => {
            let diff = (direct.value - reduced.value).abs();
            chk.detail(format!(
                "direct {:.12e} ± {:.1e}, reduced {:.12e} ± {:.1e}",
                direct.value, direct.err_est, reduced.value, reduced.err_est
            ));
            chk.expect(diff < tol, || {
                Counterexample::at(spec.pattern, spec.r)
                    .values(format!("{:.12e}", reduced.value), format!("{:.12e}", direct.value))
                    .note(format!("abs diff {diff:.3e}"))
            });
        }
        Err(Error::NotConverged { achieved, .. }) => chk.indeterminate(format!("error estimate {achieved:e} too large")),
        Err(e) => {
            chk.expect(false, || Counterexample::at(spec.pattern, spec.r).note(e.to_string()));
        }
    }
    chk.finish()
}

/// `2 S^{+,+}_{1,m} = (m + 2) zeta(m + 1) - sum_{n=1}^{m-2} zeta(m - n) zeta(n + 1)`.
pub fn euler_identity_sides(m: u32) -> Result<(Estimate, f64)> {
    let term = EulerSumTerm { sigma1: Sign::Plus, sigma2: Sign::Plus, p: 1, q: m as f64, coef: Rational::one() };
    let lhs = eval_classical(&term, 1e-10)?;
    let mf = m as f64;
    let mut rhs = (mf + 2.0) * numeric::zeta(mf + 1.0);
    for n in 1..m.saturating_sub(1) {
        rhs -= numeric::zeta((m - n) as f64) * numeric::zeta((n + 1) as f64);
    }
    Ok((Estimate { value: 2.0 * lhs.value, err_est: 2.0 * lhs.err_est }, rhs))
}
