//! Coefficients of truncated power sums, plain and alternating, compared with
//! the sums themselves.

use altharm::exact::{sign_pow, Rational};
use altharm::faulhaber::{check_remark_identities, coeffs};

fn main() {
    for m in 0..=3 {
        let c = coeffs(m);
        println!("m = {m}, e = {}", c.e0);
        for j in 0..=m + 1 {
            let plain = if j >= 1 { format!("c = {:>6}  d = {:>6}", c.c(j).to_string(), c.d(j).to_string()) } else { " ".repeat(24) };
            let alt = if j <= m { format!("c1 = {:>6}  d1 = {:>6}", c.c1(j).to_string(), c.d1(j).to_string()) } else { String::new() };
            println!("  j = {j}  {plain}  {alt}");
        }
    }

    let (m, n, t) = (4usize, 11i64, 3i64);
    let c = coeffs(m);
    let brute: Rational = (t..=n).map(|l| Rational::from(l.pow(m as u32))).sum();
    let brute_alt: Rational = (t..=n).map(|l| Rational::from(sign_pow(l - 1) * l.pow(m as u32))).sum();
    assert_eq!(c.plain_sum(n, t), brute);
    assert_eq!(c.alternating_sum(n, t), brute_alt);
    println!("sum_{{l={t}}}^{{{n}}} l^{m} = {brute}, alternating {brute_alt}");

    println!("{}", check_remark_identities(25));
}
