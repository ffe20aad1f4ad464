//! Harmonic, alternating harmonic and generalized hyperharmonic numbers.
//!
//! `H_n^(p,1,s1,s2) = H_n^(p)` and each further level is a (signed) prefix sum
//! of the one below, with the sign schedule given by the [`Pattern`]. Tables
//! are produced level by level, so a length-`N` table costs `O(r N)` additions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::analysis::{CheckReport, Checker, Counterexample};
use crate::bipoly::SignedBiPoly;
use crate::exact::{lcm_upto, sign_pow, Rational};
use crate::tengine::{build, Pattern};

/// `H^(p)` (plain) or `H̄^(p)` (alternating); `p` may be zero or negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HarmonicSpec {
    pub p: i64,
    pub alternating: bool,
}

impl HarmonicSpec {
    pub fn plain(p: i64) -> Self {
        HarmonicSpec { p, alternating: false }
    }

    pub fn alternating(p: i64) -> Self {
        HarmonicSpec { p, alternating: true }
    }

    fn weight(&self, j: i64) -> i64 {
        if self.alternating {
            sign_pow(j - 1)
        } else {
            1
        }
    }
}

/// `j^(-p)` exactly.
fn inv_pow(j: i64, p: i64) -> Rational {
    if p >= 0 {
        Rational::new(1, BigInt::from(j).pow(p as u32)).expect("j >= 1")
    } else {
        Rational::from_integer(BigInt::from(j).pow((-p) as u32))
    }
}

/// `sum_{j=1}^{n} (+-1)^(j-1) j^(-p)`.
pub fn harmonic(spec: HarmonicSpec, n: i64) -> Rational {
    (1..=n).map(|j| inv_pow(j, spec.p).mul_int(spec.weight(j))).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperSpec {
    pub p: i64,
    pub r: u32,
    pub pattern: Pattern,
}

impl HyperSpec {
    pub fn new(p: i64, r: u32, pattern: Pattern) -> Self {
        HyperSpec { p, r, pattern }
    }

    /// Same order and depth under the all-plain pattern.
    pub fn classical(&self) -> Self {
        HyperSpec { pattern: Pattern::CLASSICAL, ..*self }
    }
}

/// Applies levels `2..=r` of `pattern` to a level-1 column, in place.
/// `step(cur, prev, w)` must set `cur <- prev + w * cur`.
fn lift<T>(col: &mut [T], pattern: Pattern, r: u32, step: impl Fn(&mut T, &T, i64)) {
    for level in 2..=r {
        let kind = pattern.step_kind(level);
        // index 0 is n = 1, whose weight is always 1
        for i in 1..col.len() {
            let (done, rest) = col.split_at_mut(i);
            step(&mut rest[0], &done[i - 1], kind.weight(i as i64 + 1));
        }
    }
}

fn hyper_cache() -> &'static Mutex<HashMap<HyperSpec, Arc<Vec<Rational>>>> {
    static CACHE: OnceLock<Mutex<HashMap<HyperSpec, Arc<Vec<Rational>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `[H_1, ..., H_n_max]` for `spec`, exactly. Memoized; longer requests
/// recompute and replace the stored table.
pub fn hyper_table(spec: &HyperSpec, n_max: usize) -> Arc<Vec<Rational>> {
    if let Some(t) = hyper_cache().lock().unwrap().get(spec) {
        if t.len() >= n_max {
            return Arc::clone(t);
        }
    }
    let mut col: Vec<Rational> = Vec::with_capacity(n_max);
    let mut acc = Rational::zero();
    for j in 1..=n_max as i64 {
        acc += inv_pow(j, spec.p);
        col.push(acc.clone());
    }
    lift(&mut col, spec.pattern, spec.r, |cur: &mut Rational, prev, w| {
        *cur = if w > 0 { prev + &*cur } else { prev - &*cur };
    });
    let table = Arc::new(col);
    hyper_cache().lock().unwrap().insert(*spec, Arc::clone(&table));
    table
}

/// `H_n^(p,r,s1,s2)`; zero for `n = 0`.
pub fn hyper(spec: &HyperSpec, n: usize) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    hyper_table(spec, n)[n - 1].clone()
}

/// `sum_{t=1}^{n} t^(-p) T(r, s1, s2, n, t)`.
pub fn hyper_via_kernel(spec: &HyperSpec, n: i64) -> Rational {
    hyper_via_kernel_with(&build(spec.pattern, spec.r), spec.p, n)
}

/// As [`hyper_via_kernel`] with a prebuilt kernel.
pub fn hyper_via_kernel_with(kernel: &SignedBiPoly, p: i64, n: i64) -> Rational {
    (1..=n).map(|t| inv_pow(t, p) * kernel.evaluate(n, t)).sum()
}

/// Integer tables scaled by a common factor `scale`: `values[n-1] = scale * H_n`.
#[derive(Clone, Debug)]
pub struct ScaledTable {
    pub scale: BigInt,
    pub values: Vec<BigInt>,
}

impl ScaledTable {
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }
}

/// `scale = lcm(1..=n_max)^max(p, 0)`, which clears every denominator.
pub fn harmonic_scaled_table(spec: HarmonicSpec, n_max: usize) -> ScaledTable {
    let scale = lcm_upto(n_max as u64).pow(spec.p.max(0) as u32);
    let mut values = Vec::with_capacity(n_max);
    let mut acc = BigInt::zero();
    for j in 1..=n_max as i64 {
        let term = if spec.p >= 0 {
            &scale / BigInt::from(j).pow(spec.p as u32)
        } else {
            BigInt::from(j).pow((-spec.p) as u32)
        };
        acc += term * spec.weight(j);
        values.push(acc.clone());
    }
    ScaledTable { scale, values }
}

/// Scaled integer table of `H_n^(p,r,s1,s2)`, same scale as the harmonic table.
pub fn hyper_scaled_table(spec: &HyperSpec, n_max: usize) -> ScaledTable {
    let mut t = harmonic_scaled_table(HarmonicSpec::plain(spec.p), n_max);
    lift(&mut t.values, spec.pattern, spec.r, |cur: &mut BigInt, prev, w| {
        *cur = if w > 0 { prev + &*cur } else { prev - &*cur };
    });
    t
}

/// Floating table with compensated prefix sums at every level.
pub fn hyper_table_f64(spec: &HyperSpec, n_max: usize) -> Vec<f64> {
    let mut col = Vec::with_capacity(n_max);
    let mut acc = crate::eulersum::numeric::Neumaier::default();
    for j in 1..=n_max {
        acc.add((j as f64).powi(-spec.p as i32));
        col.push(acc.value());
    }
    for level in 2..=spec.r {
        let kind = spec.pattern.step_kind(level);
        let mut acc = crate::eulersum::numeric::Neumaier::default();
        for (i, v) in col.iter_mut().enumerate() {
            acc.add(kind.weight(i as i64 + 1) as f64 * *v);
            *v = acc.value();
        }
    }
    col
}

/// `|H_n^(p,r,s1,s2)| <= H_n^(p,r)` for every `n <= n_max`.
pub fn bound_check(spec: &HyperSpec, n_max: i64) -> CheckReport {
    let mut chk = Checker::new(
        "bounds",
        format!("pattern {}, p = {}, r = {}, n <= {n_max}", spec.pattern, spec.p, spec.r),
        false,
    );
    if n_max < 1 {
        return chk.finish();
    }
    let ours = hyper_scaled_table(spec, n_max as usize);
    let classical = hyper_scaled_table(&spec.classical(), n_max as usize);
    for n in 1..=n_max as usize {
        let (a, b) = (ours.get(n), classical.get(n));
        chk.expect(a.abs() <= *b, || {
            Counterexample::at(spec.pattern, spec.r).n(n as i64).values(
                format!("|x| <= {}", Rational::new(b.clone(), ours.scale.clone()).unwrap()),
                Rational::new(a.clone(), ours.scale.clone()).unwrap().to_string(),
            )
        });
    }
    chk.finish()
}
