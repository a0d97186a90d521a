//! Typical pairs and the count of atypical points against its union bound.

use polyskel::typicality::{atypical_exact, atypical_union_bound, count_atypical, is_typical_pair, Universe};
use polyskel::Point;

fn main() -> polyskel::Result<()> {
    let n = 12;
    let alpha = 0.1;
    let mut typical = 0u64;
    for a in 0u64..1 << n {
        for b in 0u64..1 << n {
            if is_typical_pair(&Point::new(a, n)?, &Point::new(b, n)?, alpha) {
                typical += 1;
            }
        }
    }
    println!("n={n} alpha={alpha}: {typical} of {} ordered pairs are typical", 1u64 << (2 * n));
    println!(" |x|  atypical  exact  union bound");
    for w in 0..=n {
        let x = Point::new((1u64 << w) - 1, n)?;
        let count = count_atypical(&x, alpha, Universe::FullCube)?;
        println!("{w:>4} {count:>9} {:>6} {:>12}", atypical_exact(&x, alpha), atypical_union_bound(&x, alpha));
    }
    Ok(())
}
