//! Kernel polynomials `T(n, t, r, s1, s2)` level by level, with the degree
//! budget and a brute-force spot check.
//!
//! ```text
//! cargo run --example kernel_polynomials -- 2 1 8
//! ```

use altharm::tengine::{build_levels, oracle, Pattern};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (s1, s2, r_max) = match args[..] {
        [a, b, r] => (a, b, r),
        _ => (2, 1, 8),
    };
    let pattern = Pattern::new(s1, s2).expect("s1 + s2 >= 1");
    for (i, poly) in build_levels(pattern, r_max).iter().enumerate() {
        let r = i as u32 + 1;
        let sectors: Vec<u8> = poly.sectors().iter().map(|s| s.index()).collect();
        println!("T({r},{pattern})  f = {}  sectors {sectors:?}", pattern.degree(r));
        println!("    {}", poly.render_text());
        for (n, t) in [(9, 4), (12, 1), (7, 7)] {
            assert_eq!(poly.evaluate(n, t), oracle(pattern, r, n, t).unwrap());
        }
    }
}
