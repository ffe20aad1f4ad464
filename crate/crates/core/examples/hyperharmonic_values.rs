//! Exact generalized hyperharmonic numbers, the kernel representation, and
//! the bound by classical hyperharmonic numbers.

use altharm::hyperharmonic::{bound_check, hyper, hyper_table, hyper_via_kernel, HyperSpec};
use altharm::tengine::Pattern;

fn main() {
    let patterns = [(1, 0), (1, 1), (2, 1), (1, 2), (0, 1)];
    for (s1, s2) in patterns {
        let spec = HyperSpec::new(1, 3, Pattern::new(s1, s2).unwrap());
        let row: Vec<String> = hyper_table(&spec, 6).iter().map(|v| v.to_string()).collect();
        println!("H_n^(1,3,{s1},{s2}), n = 1..6: {}", row.join(", "));
        for n in 1..=20 {
            assert_eq!(hyper(&spec, n), hyper_via_kernel(&spec, n as i64));
        }
        println!("  {}", bound_check(&spec, 50));
    }
}
