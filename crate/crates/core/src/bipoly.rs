//! Sign-sector bivariate polynomials in `(n, t)`.
//!
//! A [`SignedBiPoly`] stores `sum b[m][j][k] * s_k(n, t) * t^j * n^m` where the
//! sector basis is
//!
//! | k | factor                |
//! |---|-----------------------|
//! | 0 | `1`                   |
//! | 1 | `(-1)^(n-1+t-1)`      |
//! | 2 | `(-1)^(n-1)`          |
//! | 3 | `(-1)^(t-1)`          |
//!
//! Storage is sparse and canonical: zero coefficients are never kept, so two
//! polynomials are equal exactly when their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{sign_pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Sector {
    One = 0,
    Joint = 1,
    N = 2,
    T = 3,
}

impl Sector {
    pub const ALL: [Sector; 4] = [Sector::One, Sector::Joint, Sector::N, Sector::T];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(k: u8) -> Option<Sector> {
        Sector::ALL.get(k as usize).copied()
    }

    /// Value of the sector factor at `(n, t)`.
    pub fn sign(self, n: i64, t: i64) -> i64 {
        match self {
            Sector::One => 1,
            Sector::Joint => sign_pow(n - 1 + t - 1),
            Sector::N => sign_pow(n - 1),
            Sector::T => sign_pow(t - 1),
        }
    }

    /// Sector of `(-1)^(n-1) * s_k`.
    pub fn alternate(self) -> Sector {
        match self {
            Sector::One => Sector::N,
            Sector::N => Sector::One,
            Sector::Joint => Sector::T,
            Sector::T => Sector::Joint,
        }
    }

    /// Whether the factor depends on the parity of `n`.
    pub fn alternates_in_n(self) -> bool {
        matches!(self, Sector::Joint | Sector::N)
    }

    /// Whether the factor depends on the parity of `t`.
    pub fn alternates_in_t(self) -> bool {
        matches!(self, Sector::Joint | Sector::T)
    }

    fn label(self) -> Option<&'static str> {
        match self {
            Sector::One => None,
            Sector::Joint => Some("(\u{2212}1)^(n\u{2212}1+t\u{2212}1)"),
            Sector::N => Some("(\u{2212}1)^(n\u{2212}1)"),
            Sector::T => Some("(\u{2212}1)^(t\u{2212}1)"),
        }
    }
}

impl From<Sector> for u8 {
    fn from(s: Sector) -> u8 {
        s.index()
    }
}

impl TryFrom<u8> for Sector {
    type Error = String;
    fn try_from(k: u8) -> std::result::Result<Self, String> {
        Sector::from_index(k).ok_or_else(|| format!("sector index {k} out of range"))
    }
}

/// Key of one stored coefficient; orders by `(k, m, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub sector: Sector,
    /// exponent of `n`
    pub m: u32,
    /// exponent of `t`
    pub j: u32,
}

impl Monomial {
    pub fn new(m: u32, j: u32, sector: Sector) -> Self {
        Monomial { sector, m, j }
    }

    pub fn total_degree(&self) -> u32 {
        self.m + self.j
    }
}

#[derive(Clone, Debug)]
pub struct SignedBiPoly {
    deg: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for SignedBiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for SignedBiPoly {}

impl SignedBiPoly {
    pub fn zero() -> Self {
        SignedBiPoly { deg: 0, terms: BTreeMap::new() }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(0, 0, Sector::One), &Rational::one());
        p
    }

    /// Builds a polynomial with an explicit degree budget, merging repeated keys.
    pub fn from_terms<I>(deg: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero();
        for (mono, coef) in terms {
            p.add_term(mono, &coef);
        }
        p.with_budget(deg)
    }

    /// Adds `coef` to the coefficient of `mono`, dropping it if it cancels.
    /// The budget is raised when the monomial would exceed it.
    pub fn add_term(&mut self, mono: Monomial, coef: &Rational) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
        self.deg = self.deg.max(mono.total_degree());
    }

    /// Replaces the degree budget; fails if a stored term exceeds it.
    pub fn with_budget(mut self, deg: u32) -> Result<Self> {
        let actual = self.total_degree();
        if actual > deg {
            return Err(Error::InvalidArgument(format!(
                "polynomial has total degree {actual}, above budget {deg}"
            )));
        }
        self.deg = deg;
        Ok(self)
    }

    /// Degree budget `f`.
    pub fn deg(&self) -> u32 {
        self.deg
    }

    /// Largest `m + j` among stored terms.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `b[m][j][k]`, zero when absent.
    pub fn coeff(&self, m: u32, j: u32, sector: Sector) -> Rational {
        self.terms
            .get(&Monomial::new(m, j, sector))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Sectors carrying at least one nonzero coefficient, ascending.
    pub fn sectors(&self) -> Vec<Sector> {
        let mut out: Vec<Sector> = self.terms.keys().map(|m| m.sector).collect();
        out.dedup();
        out
    }

    /// Exact value at `(n, t)`.
    pub fn evaluate(&self, n: i64, t: i64) -> Rational {
        let d = self.total_degree() as usize;
        let pow_table = |x: i64| {
            let mut v = Vec::with_capacity(d + 1);
            let mut acc = BigInt::from(1);
            for _ in 0..=d {
                v.push(acc.clone());
                acc *= x;
            }
            v
        };
        let (np, tp) = (pow_table(n), pow_table(t));
        let mut numer_by_sector: [Rational; 4] = Default::default();
        for (mono, coef) in &self.terms {
            let w = &np[mono.m as usize] * &tp[mono.j as usize];
            numer_by_sector[mono.sector as usize] += coef * Rational::from_integer(w);
        }
        Sector::ALL
            .iter()
            .map(|s| numer_by_sector[*s as usize].mul_int(s.sign(n, t)))
            .sum()
    }

    /// Representation of `(-1)^(n-1) * self`: sectors 0<->2 and 1<->3 swap.
    pub fn mul_alternation(&self) -> SignedBiPoly {
        SignedBiPoly {
            deg: self.deg,
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| (Monomial { sector: mono.sector.alternate(), ..*mono }, c.clone()))
                .collect(),
        }
    }

    /// Sector-wise sum of two polynomials; the budget is the larger of the two.
    pub fn add(&self, other: &SignedBiPoly) -> SignedBiPoly {
        let mut out = self.clone();
        for (mono, c) in &other.terms {
            out.add_term(*mono, c);
        }
        out.deg = self.deg.max(other.deg);
        out
    }

    pub fn to_wire(&self) -> WirePoly {
        WirePoly {
            deg: self.deg,
            terms: self
                .terms
                .iter()
                .map(|(mono, c)| WireTerm { m: mono.m, j: mono.j, k: mono.sector.index(), coef: c.to_string() })
                .collect(),
        }
    }

    pub fn from_wire(w: &WirePoly) -> Result<Self> {
        let terms = w
            .terms
            .iter()
            .map(|t| {
                let sector = Sector::from_index(t.k)
                    .ok_or_else(|| Error::InvalidArgument(format!("sector {} out of range", t.k)))?;
                Ok((Monomial::new(t.m, t.j, sector), t.coef.parse::<Rational>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(w.deg, terms)
    }

    /// Human-readable form such as `1/2·n^2 + (−t+3/2)·n + 1/2·t^2 − 3/2·t + 1`.
    pub fn render_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // group by n-exponent (descending), then sector
        let mut groups: BTreeMap<(std::cmp::Reverse<u32>, Sector), Vec<(u32, &Rational)>> = BTreeMap::new();
        for (mono, c) in &self.terms {
            groups.entry((std::cmp::Reverse(mono.m), mono.sector)).or_default().push((mono.j, c));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for ((std::cmp::Reverse(m), sector), mut tpoly) in groups {
            tpoly.sort_by(|a, b| b.0.cmp(&a.0));
            let tail = suffix(sector, m);
            if tail.is_empty() || tpoly.len() == 1 {
                for (j, c) in tpoly {
                    let mut factors = Vec::new();
                    if let Some(tv) = var_power("t", j) {
                        factors.push(tv);
                    }
                    if !tail.is_empty() {
                        factors.push(tail.clone());
                    }
                    pieces.push(signed_monomial(c, &factors));
                }
            } else {
                let inner = tpoly
                    .iter()
                    .enumerate()
                    .map(|(i, (j, c))| {
                        let (neg, body) = signed_monomial(c, &var_power("t", *j).into_iter().collect::<Vec<_>>());
                        match (i, neg) {
                            (0, true) => format!("\u{2212}{body}"),
                            (0, false) => body,
                            (_, true) => format!("\u{2212}{body}"),
                            (_, false) => format!("+{body}"),
                        }
                    })
                    .collect::<String>();
                pieces.push((false, format!("({inner})\u{b7}{tail}")));
            }
        }
        let mut out = String::new();
        for (i, (neg, body)) in pieces.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => out.push_str(&format!("\u{2212}{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" \u{2212} {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

fn var_power(v: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    }
}

fn suffix(sector: Sector, m: u32) -> String {
    sector
        .label()
        .map(str::to_string)
        .into_iter()
        .chain(var_power("n", m))
        .collect::<Vec<_>>()
        .join("\u{b7}")
}

/// `(is_negative, |c|·f1·f2...)`, eliding a unit coefficient before factors.
fn signed_monomial(c: &Rational, factors: &[String]) -> (bool, String) {
    let neg = c.signum() < 0;
    let mag = c.abs();
    let mut parts = Vec::new();
    if !mag.is_one() || factors.is_empty() {
        parts.push(mag.to_string());
    }
    parts.extend(factors.iter().cloned());
    (neg, parts.join("\u{b7}"))
}

impl fmt::Display for SignedBiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireTerm {
    pub m: u32,
    pub j: u32,
    pub k: u8,
    pub coef: String,
}

/// JSON shape `{ "deg": d, "terms": [{"m", "j", "k", "coef"}] }`, terms sorted by `(k, m, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WirePoly {
    pub deg: u32,
    pub terms: Vec<WireTerm>,
}
