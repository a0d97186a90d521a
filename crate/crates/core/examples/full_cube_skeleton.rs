//! The skeleton of the full cube: edges are exactly the pairs at Hamming distance 1.

use polyskel::metrics::{density, min_degree};
use polyskel::{build_graph, BuildOptions, Method, VertexSet};

fn main() -> polyskel::Result<()> {
    for n in 2..=5 {
        let q = VertexSet::full_cube(n)?;
        for method in Method::ALL {
            let g = build_graph(&q, &BuildOptions::with_method(method));
            let pts = q.points();
            let unit = g.edge_pairs().all(|(i, j)| pts[i].hamming(&pts[j]) == Ok(1));
            println!(
                "n={n} {method:<17} edges={:<3} expected={:<3} all_unit={unit} density={} min_degree={}",
                g.num_edges(),
                n as usize * (1 << (n - 1)),
                density(&g)?,
                min_degree(&g)?
            );
        }
    }
    Ok(())
}
