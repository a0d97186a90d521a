//! Sample `Q`, round-trip it through the vertex set file, and write its graph JSON.

use polyskel::harness::emit_graph_json;
use polyskel::{build_graph, sample_with_rate, BuildOptions, RateSpec, VertexSet};

fn main() -> polyskel::Result<()> {
    let q = sample_with_rate(6, &RateSpec::Pow2(0.3), 2024)?;
    let dir = std::env::temp_dir().join("polyskel-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("q.txt");
    q.write_file(&path)?;
    let back = VertexSet::read_file(&path)?;
    println!("|Q| = {} written to {} (round trip equal: {})", q.len(), path.display(), back == q);
    let opts = BuildOptions {
        keep_certificates: true,
        ..Default::default()
    };
    let g = build_graph(&q, &opts);
    emit_graph_json(&g, std::io::stdout().lock())?;
    Ok(())
}
