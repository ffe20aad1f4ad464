//! Which recurrence case produces each level, and the structural report for a pattern.

use altharm::tengine::lemma::LemmaCase;
use altharm::tengine::{verify_lemma_structure, Pattern};

fn main() {
    for (s1, s2) in [(2, 1), (1, 2), (3, 2)] {
        let pattern = Pattern::new(s1, s2).unwrap();
        let cases: Vec<String> = (1..=12).map(|r| format!("{:?}", LemmaCase::classify(pattern, r))).collect();
        println!("({pattern}) r = 1..12 -> r + 1: {}", cases.join(" "));
        println!("  {}", verify_lemma_structure(pattern, 12));
    }
}
