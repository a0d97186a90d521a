//! All four adjacency methods on random small instances, with certificate replay.

use polyskel::harness::{run_verify, ExactClassifier, VerifyConfig};

fn main() -> polyskel::Result<()> {
    let trials: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(24);
    let cfg = VerifyConfig::new(5, trials, 11);
    let report = run_verify(&cfg, &ExactClassifier)?;
    println!("{}", report.summary());
    for d in &report.disagreements {
        print!("{}", d.dump());
    }
    Ok(())
}
