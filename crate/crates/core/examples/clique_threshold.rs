//! Frequency of `G_p` being a clique as `p = 2^(-c n)` falls past the clique threshold.

use polyskel::harness::{run_sweep, Metric, SweepConfig};
use polyskel::RateSpec;

fn main() -> polyskel::Result<()> {
    let trials: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let cs = [0.55, 0.65, 0.75, 0.85, 0.95];
    let rates = cs.iter().map(|&c| RateSpec::Pow2(c)).collect();
    let cfg = SweepConfig::new(vec![24], rates, trials, 31, vec![Metric::Clique]);
    let records = run_sweep(&cfg)?;
    for chunk in records.chunks(trials as usize) {
        let cliques = chunk.iter().filter(|r| r.is_clique == Some(true) || r.num_vertices < 2).count();
        let mean_v = chunk.iter().map(|r| r.num_vertices as f64).sum::<f64>() / chunk.len() as f64;
        println!("{}: mean |V| = {mean_v:>8.1}, clique in {cliques}/{trials}", chunk[0].rate_label);
    }
    Ok(())
}
