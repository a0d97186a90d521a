//! Exact edge expansion of sparse polytope graphs in dimension 30.

use polyskel::harness::{run_sweep, Metric, SweepConfig};
use polyskel::{RateSpec, Sign};

fn main() -> polyskel::Result<()> {
    // (1 - eps) 2^(-delta*) = (14 / 2^30)^(1/30), so E|V| = 14
    let delta = polyskel::analytics::solve_delta();
    let eps = 1.0 - libm::exp2(delta) * libm::pow(14.0, 1.0 / 30.0) / 2.0;
    let rate = RateSpec::DeltaScaled { eps, sign: Sign::Minus };
    let cfg = SweepConfig::new(vec![30], vec![rate], 20, 5, vec![Metric::Clique, Metric::Expansion]);
    println!("{rate}");
    for r in run_sweep(&cfg)? {
        println!(
            "trial {:>2}: |V| = {:>2} clique = {:?} expansion = {:?}",
            r.trial, r.num_vertices, r.is_clique, r.expansion
        );
    }
    Ok(())
}
