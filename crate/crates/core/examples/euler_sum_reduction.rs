//! Linear Euler sums of generalized hyperharmonic numbers, reduced to classical
//! sums and compared with direct summation.
//!
//! ```text
//! cargo run --release --example euler_sum_reduction -- 2 1 1 4 5
//! ```

use altharm::eulersum::{check_partial_sum_identity, eval_direct, eval_reduction, reduce, DEFAULT_TERMS};
use altharm::hyperharmonic::HyperSpec;
use altharm::tengine::Pattern;

fn main() -> altharm::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (s1, s2, p, r, q) = match args[..] {
        [a, b, c, d, e] => (a as u32, b as u32, c as i64, d as u32, e),
        _ => (2, 1, 1, 4, 5.0),
    };
    let spec = HyperSpec::new(p, r, Pattern::new(s1, s2)?);
    let red = reduce(&spec, q)?;
    println!("sum_n H_n^({p},{r},{s1},{s2}) / n^{q} =");
    for t in &red.terms {
        println!("    {t}");
    }
    let reduced = eval_reduction(&red, 1e-9)?;
    let direct = eval_direct(&spec, q, DEFAULT_TERMS)?;
    println!("reduced {:.12} ± {:.1e}", reduced.value, reduced.err_est);
    println!("direct  {:.12} ± {:.1e}", direct.value, direct.err_est);
    println!("{}", check_partial_sum_identity(&spec, q.round() as i64, 300));
    Ok(())
}
