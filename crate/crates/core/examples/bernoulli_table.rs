//! Bernoulli numbers with the plus convention, checked against the defining recurrence.
//!
//! ```text
//! cargo run --example bernoulli_table -- 20
//! ```

use altharm::exact::{binomial, Rational};
use altharm::faulhaber::bernoulli_table;

fn main() {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let table = bernoulli_table(max);
    for (n, b) in table.iter().enumerate() {
        if n > 1 && n % 2 == 1 {
            assert!(b.is_zero());
            continue;
        }
        println!("B_{n:<3} = {b}");
    }

    // sum_{j<=k} C(k+1, j) B_j = k + 1
    for k in 0..max {
        let lhs: Rational = (0..=k).map(|j| Rational::from_integer(binomial(k as u64 + 1, j as i64)) * &table[j]).sum();
        assert_eq!(lhs, Rational::from(k as i64 + 1));
    }
    println!("recurrence holds for k < {max}");
}
