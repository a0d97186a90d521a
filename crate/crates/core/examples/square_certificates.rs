//! Every adjacency method on the unit square, with the certificates it returns.

use polyskel::{edge_status, Method, Point, VertexSet};

fn main() -> polyskel::Result<()> {
    let q = VertexSet::full_cube(2)?;
    let pairs = [("00", "01"), ("00", "11"), ("01", "10")];
    for method in Method::ALL {
        println!("== {method}");
        for (a, b) in pairs {
            let (x, y) = (Point::parse_binary(a)?, Point::parse_binary(b)?);
            let s = edge_status(&q, &x, &y, method)?;
            println!(
                "  [{a}, {b}] {:?} replays={} {}",
                s.verdict,
                s.replays(&q, &x, &y),
                s.certificate.to_json()
            );
        }
    }
    Ok(())
}
