//! A product of two hyperharmonic numbers summed against `n^-q`: expansion into
//! products of classical harmonic numbers, exact check, numeric comparison.

use altharm::eulersum::{check_product_identity, eval_direct_product, eval_nonlinear, expand_product, DEFAULT_TERMS};
use altharm::hyperharmonic::HyperSpec;
use altharm::tengine::Pattern;

fn main() -> altharm::Result<()> {
    let specs = [HyperSpec::new(1, 2, Pattern::new(2, 1)?), HyperSpec::new(1, 3, Pattern::new(1, 2)?)];
    let q = 8.0;
    let terms = expand_product(&specs, q)?;
    println!("{} expanded terms", terms.len());
    for t in terms.iter().take(6) {
        println!("    {}", t.label());
    }
    println!("{}", check_product_identity(&specs, q, 500));
    let expanded = eval_nonlinear(&terms, q, DEFAULT_TERMS)?;
    let direct = eval_direct_product(&specs, q, DEFAULT_TERMS)?;
    println!("expanded {:.12} ± {:.1e}", expanded.value, expanded.err_est);
    println!("direct   {:.12} ± {:.1e}", direct.value, direct.err_est);
    Ok(())
}
