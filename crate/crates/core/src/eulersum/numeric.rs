//! Floating-point machinery for the series evaluators.
//!
//! Tails are handled with closed-form asymptotic models of the summands: a
//! smooth part integrated by Euler-Maclaurin and an alternating part summed by
//! iterated pairwise averaging. Models are sums of `c x^e (ln x)^l`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::faulhaber::coeffs;
use crate::hyperharmonic::HarmonicSpec;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Compensated (Kahan-Babuska-Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Riemann zeta for real `s > 1`: direct sum below 100 plus Euler-Maclaurin through `B_10`.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    const N: f64 = 100.0;
    const B2K: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];
    let mut acc = Neumaier::default();
    for n in (1..100).rev() {
        acc.add((n as f64).powf(-s));
    }
    acc.add(N.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * N.powf(-s));
    // B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^(-s-2k+1)
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in B2K.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        acc.add(b / fact * rising * N.powf(-s - two_k + 1.0));
        rising *= (s + two_k - 1.0) * (s + two_k);
        fact *= (two_k + 1.0) * (two_k + 2.0);
    }
    acc.value()
}

/// Dirichlet eta `sum (-1)^(n-1) n^(-s)` for real `s >= 1`.
pub fn eta(s: f64) -> f64 {
    if s == 1.0 {
        std::f64::consts::LN_2
    } else {
        (1.0 - 2f64.powf(1.0 - s)) * zeta(s)
    }
}

/// `coef * x^exp * (ln x)^log`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLogTerm {
    pub coef: f64,
    pub exp: f64,
    pub log: u32,
}

/// Finite sum of [`PowerLogTerm`]s.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PowerLog(pub Vec<PowerLogTerm>);

impl PowerLog {
    pub fn constant(c: f64) -> Self {
        PowerLog(vec![PowerLogTerm { coef: c, exp: 0.0, log: 0 }])
    }

    pub fn term(coef: f64, exp: f64, log: u32) -> Self {
        PowerLog(vec![PowerLogTerm { coef, exp, log }])
    }

    pub fn push(&mut self, coef: f64, exp: f64, log: u32) {
        if coef != 0.0 {
            self.0.push(PowerLogTerm { coef, exp, log });
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ln = x.ln();
        self.0.iter().map(|t| t.coef * x.powf(t.exp) * ln.powi(t.log as i32)).sum()
    }

    pub fn add(&self, other: &PowerLog) -> PowerLog {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        PowerLog(v).merged()
    }

    pub fn mul(&self, other: &PowerLog) -> PowerLog {
        let mut v = Vec::with_capacity(self.0.len() * other.0.len());
        for a in &self.0 {
            for b in &other.0 {
                v.push(PowerLogTerm { coef: a.coef * b.coef, exp: a.exp + b.exp, log: a.log + b.log });
            }
        }
        PowerLog(v).merged()
    }

    /// Multiplies by `x^a`.
    pub fn shift(&self, a: f64) -> PowerLog {
        PowerLog(self.0.iter().map(|t| PowerLogTerm { exp: t.exp + a, ..*t }).collect())
    }

    pub fn derivative(&self) -> PowerLog {
        let mut v = Vec::new();
        for t in &self.0 {
            if t.exp != 0.0 {
                v.push(PowerLogTerm { coef: t.coef * t.exp, exp: t.exp - 1.0, log: t.log });
            }
            if t.log > 0 {
                v.push(PowerLogTerm { coef: t.coef * t.log as f64, exp: t.exp - 1.0, log: t.log - 1 });
            }
        }
        PowerLog(v).merged()
    }

    /// Largest exponent carrying a nonzero coefficient.
    pub fn leading_exp(&self) -> Option<f64> {
        self.0.iter().filter(|t| t.coef != 0.0).map(|t| t.exp).reduce(f64::max)
    }

    /// `int_n^inf` of the model; every exponent must be below -1.
    pub fn integral_tail(&self, n: f64) -> Result<f64> {
        let ln = n.ln();
        let mut acc = Neumaier::default();
        for t in &self.0 {
            if t.exp >= -1.0 {
                return Err(Error::Divergent(format!("tail term x^{} (ln x)^{} is not integrable", t.exp, t.log)));
            }
            // I_l = -n^(e+1) ln^l / (e+1) - l/(e+1) I_(l-1)
            let e1 = t.exp + 1.0;
            let mut i_prev = -n.powf(e1) / e1;
            for l in 1..=t.log {
                i_prev = -n.powf(e1) * ln.powi(l as i32) / e1 - (l as f64) / e1 * i_prev;
            }
            acc.add(t.coef * i_prev);
        }
        Ok(acc.value())
    }

    fn merged(mut self) -> PowerLog {
        self.0.sort_by(|a, b| b.exp.total_cmp(&a.exp).then(b.log.cmp(&a.log)));
        let mut out: Vec<PowerLogTerm> = Vec::with_capacity(self.0.len());
        for t in self.0 {
            match out.last_mut() {
                Some(last) if last.exp == t.exp && last.log == t.log => last.coef += t.coef,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0.0);
        PowerLog(out)
    }
}

/// Large-`n` model `I_n = A(n) + (-1)^(n-1) B(n)` of a harmonic-type inner sum.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerModel {
    pub smooth: PowerLog,
    pub alternating: PowerLog,
}

/// `p (p+1) ... (p+k-1)`.
fn rising(p: f64, k: u32) -> f64 {
    (0..k).map(|i| p + i as f64).product()
}

impl InnerModel {
    pub fn of(spec: HarmonicSpec) -> InnerModel {
        let p = spec.p;
        let pf = p as f64;
        if p <= 0 {
            let fc = coeffs((-p) as usize);
            let m = (-p) as usize;
            return if spec.alternating {
                let a: f64 = (0..=m).map(|j| fc.d1(j).to_f64()).sum();
                let mut b = PowerLog::default();
                for j in 0..=m {
                    b.push(fc.c1(j).to_f64(), j as f64, 0);
                }
                InnerModel { smooth: PowerLog::constant(a), alternating: b }
            } else {
                let mut a = PowerLog::default();
                for i in 1..=m + 1 {
                    a.push(fc.c(i).to_f64(), i as f64, 0);
                }
                // vanishes for the plus convention; kept for exactness of the model
                let c0 = -(1..=m + 1).map(|i| fc.d(i).to_f64()).sum::<f64>() - fc.e0.to_f64();
                a.push(c0, 0.0, 0);
                InnerModel { smooth: a, alternating: PowerLog::default() }
            };
        }
        if spec.alternating {
            // tail sum_{i>=0} (-1)^i g(n+1+i) = g/2 + g'/4 - g'''/48 + g^(5)/480 at n
            let mut b = PowerLog::default();
            b.push(0.5, -pf, 0);
            b.push(-pf / 4.0, -pf - 1.0, 0);
            b.push(rising(pf, 3) / 48.0, -pf - 3.0, 0);
            b.push(-rising(pf, 5) / 480.0, -pf - 5.0, 0);
            b.push(17.0 * rising(pf, 7) / 80640.0, -pf - 7.0, 0);
            return InnerModel { smooth: PowerLog::constant(eta(pf)), alternating: b };
        }
        let mut a = PowerLog::default();
        if p == 1 {
            a.push(1.0, 0.0, 1);
            a.push(EULER_GAMMA, 0.0, 0);
            a.push(0.5, -1.0, 0);
            a.push(-1.0 / 12.0, -2.0, 0);
            a.push(1.0 / 120.0, -4.0, 0);
            a.push(-1.0 / 252.0, -6.0, 0);
            a.push(1.0 / 240.0, -8.0, 0);
        } else {
            a.push(zeta(pf), 0.0, 0);
            a.push(-1.0 / (pf - 1.0), 1.0 - pf, 0);
            a.push(0.5, -pf, 0);
            a.push(-pf / 12.0, -pf - 1.0, 0);
            a.push(rising(pf, 3) / 720.0, -pf - 3.0, 0);
            a.push(-rising(pf, 5) / 30240.0, -pf - 5.0, 0);
            a.push(rising(pf, 7) / 1209600.0, -pf - 7.0, 0);
        }
        InnerModel { smooth: a, alternating: PowerLog::default() }
    }

    /// Product of two models; `(-1)^(2(n-1)) = 1` folds the alternating squares into the smooth part.
    pub fn mul(&self, other: &InnerModel) -> InnerModel {
        InnerModel {
            smooth: self.smooth.mul(&other.smooth).add(&self.alternating.mul(&other.alternating)),
            alternating: self.smooth.mul(&other.alternating).add(&self.alternating.mul(&other.smooth)),
        }
    }
}

/// A floating value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_est: f64,
}

/// `sum_{n > N} G(n)` by Euler-Maclaurin through the fifth derivative, with the
/// first omitted correction as error estimate.
pub fn smooth_tail(g: &PowerLog, n: f64) -> Result<Estimate> {
    if g.0.is_empty() {
        return Ok(Estimate { value: 0.0, err_est: 0.0 });
    }
    let d1 = g.derivative();
    let d3 = d1.derivative().derivative();
    let d5 = d3.derivative().derivative();
    let d7 = d5.derivative().derivative();
    let value = g.integral_tail(n)? - g.eval(n) / 2.0 - d1.eval(n) / 12.0 + d3.eval(n) / 720.0
        - d5.eval(n) / 30240.0;
    Ok(Estimate { value, err_est: (d7.eval(n) / 1209600.0).abs() })
}

/// `sum_{i>=0} (-1)^i k(x0 + i)` by iterated pairwise averaging of `depth + 1` partial sums.
pub fn alternating_tail(k: &PowerLog, x0: f64, depth: usize) -> Estimate {
    if k.0.is_empty() {
        return Estimate { value: 0.0, err_est: 0.0 };
    }
    let mut partial = Vec::with_capacity(depth + 1);
    let mut acc = 0.0;
    for i in 0..=depth {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * k.eval(x0 + i as f64);
        partial.push(acc);
    }
    let mut prev_level = partial.clone();
    while partial.len() > 1 {
        prev_level = partial.clone();
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    let value = partial[0];
    let err = prev_level.iter().map(|v| (v - value).abs()).fold(0.0, f64::max);
    Estimate { value, err_est: err + 4.0 * f64::EPSILON * k.eval(x0).abs() * depth as f64 }
}

/// `sum_{n>=1} sign(n) n^(J-q) prod_i I_i(n)`, where `sign(n) = (-1)^(n-1)` when
/// `outer_alternating`: an exact-to-rounding partial sum to `n_terms` plus modelled tails.
pub fn eval_series(
    factors: &[HarmonicSpec],
    n_power: u32,
    outer_alternating: bool,
    q: f64,
    n_terms: usize,
) -> Result<Estimate> {
    let n_terms = n_terms.max(100);
    let shift = n_power as f64 - q;
    let mut inner: Vec<Neumaier> = vec![Neumaier::default(); factors.len()];
    let mut total = Neumaier::default();
    let mut abs_total = 0.0;
    for n in 1..=n_terms {
        let nf = n as f64;
        let mut prod = 1.0;
        for (acc, spec) in inner.iter_mut().zip(factors) {
            let w = if spec.alternating && n % 2 == 0 { -1.0 } else { 1.0 };
            acc.add(w * nf.powi(-spec.p as i32));
            prod *= acc.value();
        }
        let sign = if outer_alternating && n % 2 == 0 { -1.0 } else { 1.0 };
        let term = sign * prod * nf.powf(shift);
        total.add(term);
        abs_total += term.abs();
    }

    let model = factors
        .iter()
        .map(|s| InnerModel::of(*s))
        .fold(InnerModel { smooth: PowerLog::constant(1.0), alternating: PowerLog::default() }, |acc, m| acc.mul(&m));
    let (g, k) = if outer_alternating {
        (model.alternating.shift(shift), model.smooth.shift(shift))
    } else {
        (model.smooth.shift(shift), model.alternating.shift(shift))
    };
    if let Some(e) = k.leading_exp() {
        if e >= 0.0 {
            return Err(Error::Divergent(format!("alternating summand grows like n^{e}")));
        }
    }
    let nf = n_terms as f64;
    let smooth = smooth_tail(&g, nf)?;
    let alt = alternating_tail(&k, nf + 1.0, 20);
    let alt_sign = if n_terms % 2 == 0 { 1.0 } else { -1.0 };
    let rounding = 4.0 * f64::EPSILON * (abs_total + factors.len() as f64 * n_terms as f64 * f64::EPSILON * abs_total);
    Ok(Estimate {
        value: total.value() + smooth.value + alt_sign * alt.value,
        err_est: smooth.err_est + alt.err_est + rounding,
    })
}

/// Limit of a sequence whose smooth part behaves like `L + sum_k sum_l c_kl N^(s0-k) (ln N)^l`
/// (`k < orders`, `l <= logs`), from samples `(N_i, S_i)`. The difference between
/// fits with `orders` and `orders - 1` powers is the error estimate.
pub fn extrapolate(samples: &[(f64, f64)], s0: f64, orders: usize, logs: u32) -> Result<Estimate> {
    let fit = |orders: usize| -> Result<f64> {
        let cols = 1 + orders * (logs as usize + 1);
        if samples.len() < cols {
            return Err(Error::InvalidArgument(format!("{} samples cannot fit {cols} unknowns", samples.len())));
        }
        let n_ref = samples.iter().map(|s| s.0).fold(0.0, f64::max);
        let mut a = DMatrix::<f64>::zeros(samples.len(), cols);
        let mut b = DVector::<f64>::zeros(samples.len());
        for (row, &(n, s)) in samples.iter().enumerate() {
            a[(row, 0)] = 1.0;
            let mut c = 1;
            for k in 0..orders {
                for l in 0..=logs {
                    // scaled to order one at the largest sample
                    let v = (n / n_ref).powf(s0 - k as f64) * (n.ln() / n_ref.ln()).powi(l as i32);
                    a[(row, c)] = v;
                    c += 1;
                }
            }
            b[row] = s;
        }
        let svd = a.svd(true, true);
        let x = svd
            .solve(&b, 1e-14)
            .map_err(|e| Error::InvalidArgument(format!("least squares failed: {e}")))?;
        Ok(x[0])
    };
    let hi = fit(orders)?;
    let lo = fit(orders - 1)?;
    Ok(Estimate { value: hi, err_est: (hi - lo).abs() })
}
