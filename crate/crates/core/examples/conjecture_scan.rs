//! Runs the conjecture scans over the default pattern set, in parallel.

use altharm::analysis::{run_all, Config, Suite};

fn main() {
    let r_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    let config = Config { r_max, suites: vec![Suite::Conjectures], jobs: 3, ..Config::default() };
    for report in run_all(&config) {
        println!("{report}");
    }
}
