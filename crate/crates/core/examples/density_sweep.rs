//! Edge density on both sides of the density threshold at `n = 24`.
//!
//! `cargo run --release --example density_sweep -- [trials]`

use polyskel::harness::{csv_string, run_sweep, Metric, SweepConfig};
use polyskel::RateSpec;

fn main() -> polyskel::Result<()> {
    let trials: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let rates = vec![RateSpec::Pow2(0.6), RateSpec::Pow2(0.5), RateSpec::Pow2(0.4)];
    let cfg = SweepConfig::new(vec![24], rates, trials, 2024, vec![Metric::Density, Metric::Clique]);
    let records = run_sweep(&cfg)?;
    print!("{}", csv_string(&records));
    Ok(())
}
