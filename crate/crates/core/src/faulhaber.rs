//! Bernoulli numbers (plus convention) and truncated power-sum coefficients.
//!
//! For `1 <= t <= n` the coefficient families satisfy
//!
//! ```text
//! sum_{l=t}^{n} l^m            = sum_j c[j] n^j - sum_j d[j] t^j - e0
//! sum_{l=t}^{n} (-1)^(l-1) l^m = sum_j c1[j] (-1)^(n-1) n^j + sum_j d1[j] (-1)^(t-1) t^j
//! ```
//!
//! with `j` in `1..=m+1` for `c`, `d` and in `0..=m` for `c1`, `d1`. Every
//! family is evaluated from its own closed formula; none is derived from
//! another by a sign-flip shortcut.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use crate::analysis::{CheckReport, Checker, Counterexample};
use crate::exact::{binomial, sign_pow, Rational};

fn bernoulli_cache() -> &'static RwLock<Vec<Rational>> {
    static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_n^+` from `sum_{j=0}^{k} C(k+1, j) B_j^+ = k + 1`.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = bernoulli_cache().read().unwrap().get(n) {
        return b.clone();
    }
    let mut table = bernoulli_cache().write().unwrap();
    while table.len() <= n {
        let k = table.len();
        let partial: Rational = table
            .iter()
            .enumerate()
            .map(|(j, b)| b * Rational::from_integer(binomial(k as u64 + 1, j as i64)))
            .sum();
        let next = (Rational::from(k as i64 + 1) - partial)
            .checked_div(&Rational::from(k as i64 + 1))
            .expect("k + 1 > 0");
        table.push(next);
    }
    table[n].clone()
}

/// `B_0^+ .. B_max^+`.
pub fn bernoulli_table(max: usize) -> Vec<Rational> {
    bernoulli(max);
    bernoulli_cache().read().unwrap()[..=max].to_vec()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaulhaberCoeffs {
    pub m: usize,
    /// `c[j - 1] = c(m, j)` for `1 <= j <= m + 1`.
    c: Vec<Rational>,
    d: Vec<Rational>,
    pub e0: Rational,
    /// `c1[j] = c1(m, j)` for `0 <= j <= m`.
    c1: Vec<Rational>,
    d1: Vec<Rational>,
}

fn binom_q(n: usize, k: i64) -> Rational {
    Rational::from_integer(binomial(n as u64, k))
}

impl FaulhaberCoeffs {
    fn compute(m: usize) -> Self {
        let b = bernoulli_table(m + 1);
        let inv = Rational::frac(1, m as i64 + 1);
        let inv2 = Rational::frac(1, 2 * (m as i64 + 1));
        let pow2 = |k: usize| Rational::from_integer(BigInt::from(2u32).pow(k as u32));

        let c = (1..=m + 1)
            .map(|j| &inv * binom_q(m + 1, (m + 1 - j) as i64) * &b[m + 1 - j])
            .collect();

        let d = (1..=m + 1)
            .map(|j| {
                let s: Rational = (j - 1..=m)
                    .map(|k| {
                        (binom_q(m + 1, (m - k) as i64) * &b[m - k] * binom_q(1 + k, j as i64))
                            .mul_int(sign_pow(1 + k as i64 - j as i64))
                    })
                    .sum();
                &inv * s
            })
            .collect();

        let e0 = &inv
            * (0..=m)
                .map(|k| (binom_q(m + 1, (m - k) as i64) * &b[m - k]).mul_int(sign_pow(1 + k as i64)))
                .sum::<Rational>();

        // inner sum shared by the c1 and d1 displays
        let alt_inner = |k: usize| -> Rational {
            (0..=m - k)
                .map(|x| {
                    (binom_q(m + 1, x as i64) * &b[x] * pow2(x) * binom_q(m + 1 - x, k as i64))
                        .mul_int(sign_pow(m as i64 - x as i64 - k as i64))
                })
                .sum()
        };

        let c1 = (0..=m).map(|j| &inv2 * alt_inner(j)).collect();

        let d1 = (0..=m)
            .map(|j| {
                let s: Rational = (j..=m)
                    .map(|k| (binom_q(k, j as i64) * alt_inner(k)).mul_int(sign_pow(k as i64 - j as i64)))
                    .sum();
                &inv2 * s
            })
            .collect();

        FaulhaberCoeffs { m, c, d, e0, c1, d1 }
    }

    /// `c(m, j)`, `1 <= j <= m + 1`.
    pub fn c(&self, j: usize) -> &Rational {
        &self.c[j - 1]
    }

    /// `d(m, j)`, `1 <= j <= m + 1`.
    pub fn d(&self, j: usize) -> &Rational {
        &self.d[j - 1]
    }

    /// `c1(m, j)`, `0 <= j <= m`.
    pub fn c1(&self, j: usize) -> &Rational {
        &self.c1[j]
    }

    /// `d1(m, j)`, `0 <= j <= m`.
    pub fn d1(&self, j: usize) -> &Rational {
        &self.d1[j]
    }

    /// Right-hand side of the plain truncated sum at `(n, t)`.
    pub fn plain_sum(&self, n: i64, t: i64) -> Rational {
        let mut acc = -&self.e0;
        for j in 1..=self.m + 1 {
            acc += self.c(j) * Rational::from_integer(BigInt::from(n).pow(j as u32));
            acc -= self.d(j) * Rational::from_integer(BigInt::from(t).pow(j as u32));
        }
        acc
    }

    /// Right-hand side of the alternating truncated sum at `(n, t)`.
    pub fn alternating_sum(&self, n: i64, t: i64) -> Rational {
        let mut acc = Rational::zero();
        for j in 0..=self.m {
            acc += self.c1(j).mul_int(sign_pow(n - 1)) * Rational::from_integer(BigInt::from(n).pow(j as u32));
            acc += self.d1(j).mul_int(sign_pow(t - 1)) * Rational::from_integer(BigInt::from(t).pow(j as u32));
        }
        acc
    }
}

fn coeff_cache() -> &'static RwLock<Vec<Arc<FaulhaberCoeffs>>> {
    static CACHE: OnceLock<RwLock<Vec<Arc<FaulhaberCoeffs>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

/// Memoized coefficient families for degree `m`.
pub fn coeffs(m: usize) -> Arc<FaulhaberCoeffs> {
    if let Some(c) = coeff_cache().read().unwrap().get(m) {
        return Arc::clone(c);
    }
    let mut cache = coeff_cache().write().unwrap();
    while cache.len() <= m {
        let next = FaulhaberCoeffs::compute(cache.len());
        cache.push(Arc::new(next));
    }
    Arc::clone(&cache[m])
}

/// Checks `e(m,0) = -[m = 0]`, `c(m,j) = (-1)^(m+1-j) d(m,j)` and
/// `c1(m,j) = (-1)^(m-j) d1(m,j)` for every `m <= m_max`.
pub fn check_remark_identities(m_max: usize) -> CheckReport {
    let mut chk = Checker::new("remarks", format!("m <= {m_max}"), false);
    for m in 0..=m_max {
        let fc = coeffs(m);
        let e_expected = if m == 0 { Rational::from(-1) } else { Rational::zero() };
        chk.expect_eq(&e_expected, &fc.e0, || Counterexample::at_mj(m as i64, 0).note("e(m,0)"));
        for j in 1..=m + 1 {
            let expected = fc.d(j).mul_int(sign_pow((m + 1 - j) as i64));
            chk.expect_eq(&expected, fc.c(j), || Counterexample::at_mj(m as i64, j as i64).note("c vs d"));
        }
        for j in 0..=m {
            let expected = fc.d1(j).mul_int(sign_pow((m - j) as i64));
            chk.expect_eq(&expected, fc.c1(j), || Counterexample::at_mj(m as i64, j as i64).note("c1 vs d1"));
        }
    }
    chk.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Status;

    #[test]
    fn bernoulli_plus_convention() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::frac(1, 2));
        assert_eq!(bernoulli(2), Rational::frac(1, 6));
        assert_eq!(bernoulli(4), Rational::frac(-1, 30));
        assert_eq!(bernoulli(10), Rational::frac(5, 66));
        for k in 1..=12 {
            assert!(bernoulli(2 * k + 1).is_zero(), "B_{} != 0", 2 * k + 1);
        }
    }

    #[test]
    fn bernoulli_recurrence_holds_for_every_prefix() {
        let b = bernoulli_table(30);
        for k in 0..30 {
            let s: Rational = (0..=k).map(|j| &b[j] * binom_q(k + 1, j as i64)).sum();
            assert_eq!(s, Rational::from(k as i64 + 1));
        }
    }

    #[test]
    fn low_degree_coefficients() {
        let f0 = coeffs(0);
        assert_eq!(f0.c(1), &Rational::one());
        assert_eq!(f0.d(1), &Rational::one());
        assert_eq!(f0.e0, Rational::from(-1));
        assert_eq!(f0.c1(0), &Rational::frac(1, 2));
        assert_eq!(f0.d1(0), &Rational::frac(1, 2));

        let f1 = coeffs(1);
        assert_eq!(f1.c(1), &Rational::frac(1, 2));
        assert_eq!(f1.c(2), &Rational::frac(1, 2));
        assert_eq!(f1.d(1), &Rational::frac(-1, 2));
    }

    #[test]
    fn truncated_sums_match_brute_force() {
        for m in 0..=25usize {
            let fc = coeffs(m);
            for n in 1..=40i64 {
                for t in 1..=n {
                    let plain: BigInt = (t..=n).map(|l| BigInt::from(l).pow(m as u32)).sum();
                    let alt: BigInt = (t..=n)
                        .map(|l| BigInt::from(l).pow(m as u32) * sign_pow(l - 1))
                        .sum();
                    assert_eq!(fc.plain_sum(n, t), Rational::from(plain), "m={m} n={n} t={t}");
                    assert_eq!(fc.alternating_sum(n, t), Rational::from(alt), "m={m} n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn remark_identities_hold() {
        for m_max in [0, 1, 25] {
            let rep = check_remark_identities(m_max);
            assert_eq!(rep.status, Status::Pass, "{rep:?}");
        }
        assert!(check_remark_identities(25).checked_count > 600);
    }
}
