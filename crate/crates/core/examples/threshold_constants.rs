//! The entropy calculus behind the clique thresholds.

use polyskel::analytics::{argmax_f_numeric, entropy, f_exponent, ThresholdConstants};

fn main() -> polyskel::Result<()> {
    let c = ThresholdConstants::compute();
    println!("delta*        = {:.12}", c.delta_star);
    println!("residual      = {:.3e}", c.residual());
    println!("argmax f      = {:.12} (numeric {:.9})", c.f_max_arg, argmax_f_numeric(1e-12));
    println!("f(4/5)        = {:.12}", c.f_max);
    println!("weak exponent = {:.12}", c.weak_exponent);
    println!();
    println!("   d      H(d)      f(d)");
    for i in 0..=10 {
        let d = i as f64 / 10.0;
        println!("{d:>4.1} {:>9.6} {:>9.6}", entropy(d)?, f_exponent(d)?);
    }
    Ok(())
}
