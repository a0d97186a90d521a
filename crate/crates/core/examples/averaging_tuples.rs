//! Averaging tuples: exact counts over a full box and certificate search.

use polyskel::adjacency::averaging_certificate_search;
use polyskel::analytics::{closed_form_tuple_count, count_averaging_tuples};
use polyskel::hypercube::interval_points;
use polyskel::{sample_vertex_set, Point};

fn main() -> polyskel::Result<()> {
    for d in 1..=4u32 {
        let x = Point::zeros(d)?;
        let y = Point::ones(d)?;
        let pool: Vec<Point> = interval_points(&x, &y)?.collect();
        for k in 1..=3 {
            let counted = count_averaging_tuples(&pool, &x, &y, k, false)?;
            let excluded = count_averaging_tuples(&pool, &x, &y, k, true)?;
            println!(
                "d={d} k={k}: counted={counted} closed form={} without endpoints={excluded}",
                closed_form_tuple_count(d, k)
            );
        }
    }
    let q = sample_vertex_set(8, 0.3, 17)?;
    let pts = q.points();
    let (x, y) = (pts[0], pts[pts.len() - 1]);
    match averaging_certificate_search(&q, &x, &y, 3) {
        Ok(Some(t)) => println!("[{x}, {y}]: averaging tuple with k={} found", t.k),
        Ok(None) => println!("[{x}, {y}]: no averaging tuple up to k=3"),
        Err(e) => println!("[{x}, {y}]: {e}"),
    }
    Ok(())
}
