//! Vertex sets drawn at random from `{0,1}^n`, the edge graph of their
//! convex hull, and the counting tools around it.
//!
//! Points are `u64` bitmasks with coordinate `i` at bit `i - 1`, so `n <= 64`.

pub mod adjacency;
pub mod analytics;
pub mod error;
pub mod harness;
pub mod hypercube;
pub mod lp;
pub mod metrics;
pub mod sampling;
pub mod typicality;

pub use adjacency::{
    averaging_certificate_search, build_graph, edge_status, AveragingTuple, BuildOptions, Certificate, EdgeStatus,
    Method, PolytopeGraph, Verdict,
};
pub use error::{Error, Result};
pub use hypercube::{Interval, Point};
pub use sampling::{resolve_rate, sample_vertex_set, sample_with_rate, RateSpec, Sign, VertexSet};

/// `x` with 12 significant digits, fixed notation for moderate exponents.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mant.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
