//! Density, degrees, clique test, components and exact edge expansion of a
//! polytope graph.

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::adjacency::PolytopeGraph;
use crate::error::{Error, Result};

/// Largest vertex count for exhaustive edge expansion.
pub const EXPANSION_MAX_VERTICES: usize = 24;

fn require_full(g: &PolytopeGraph) -> Result<()> {
    if g.sampled {
        Err(Error::SampledGraph("metric needs every pair classified"))
    } else {
        Ok(())
    }
}

/// `|E| / C(|V|, 2)`, and 1 when `|V| <= 1`.
pub fn density(g: &PolytopeGraph) -> Result<Ratio<u64>> {
    require_full(g)?;
    let m = g.num_vertices() as u64;
    if m <= 1 {
        return Ok(Ratio::from_integer(1));
    }
    Ok(Ratio::new(g.num_edges() as u64, m * (m - 1) / 2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityEstimate {
    pub value: f64,
    pub std_error: f64,
    pub pairs: u64,
}

/// Fraction of classified pairs that are edges, with its binomial standard error.
pub fn density_estimate(g: &PolytopeGraph) -> Result<DensityEstimate> {
    let pairs = g.num_pairs_classified() as u64;
    if pairs == 0 {
        return Err(Error::Empty("no classified pairs"));
    }
    let value = g.num_edges() as f64 / pairs as f64;
    Ok(DensityEstimate {
        value,
        std_error: (value * (1.0 - value) / pairs as f64).sqrt(),
        pairs,
    })
}

pub fn degrees(g: &PolytopeGraph) -> Result<Vec<usize>> {
    require_full(g)?;
    let mut deg = vec![0usize; g.num_vertices()];
    for (i, j) in g.edge_pairs() {
        deg[i] += 1;
        deg[j] += 1;
    }
    Ok(deg)
}

pub fn min_degree(g: &PolytopeGraph) -> Result<usize> {
    degrees(g)?.into_iter().min().ok_or(Error::Empty("graph has no vertices"))
}

pub fn max_degree(g: &PolytopeGraph) -> Result<usize> {
    degrees(g)?.into_iter().max().ok_or(Error::Empty("graph has no vertices"))
}

/// True when no pair is a non-edge.
pub fn is_clique(g: &PolytopeGraph) -> Result<bool> {
    if !g.non_edges.is_empty() {
        return Ok(false);
    }
    require_full(g)?;
    Ok(true)
}

/// Component label of each vertex; labels are the smallest vertex index in the component.
pub fn components(g: &PolytopeGraph) -> Result<Vec<usize>> {
    require_full(g)?;
    let m = g.num_vertices();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (i, j) in g.edge_pairs() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    Ok((0..m).map(|v| find(&mut parent, v)).collect())
}

pub fn num_components(g: &PolytopeGraph) -> Result<usize> {
    let labels = components(g)?;
    Ok(labels.iter().enumerate().filter(|&(v, &l)| v == l).count())
}

/// Edge expansion of a polytope graph.
pub fn edge_expansion(g: &PolytopeGraph) -> Result<Ratio<u64>> {
    require_full(g)?;
    let edges: Vec<(usize, usize)> = g.edge_pairs().collect();
    edge_expansion_of(g.num_vertices(), &edges)
}

/// `min |E(S, V∖S)| / |S|` over nonempty `S` with `|S| <= |V| / 2`.
///
/// All subsets are visited in Gray-code order, so each step moves one
/// vertex across the cut and updates its size from that vertex's neighbours.
pub fn edge_expansion_of(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Ratio<u64>> {
    let m = num_vertices;
    if m < 2 {
        return Err(Error::Empty("edge expansion needs at least two vertices"));
    }
    if m > EXPANSION_MAX_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "vertices for exhaustive expansion",
            size: m as u64,
            limit: EXPANSION_MAX_VERTICES as u64,
        });
    }
    let mut adj = vec![0u32; m];
    for &(i, j) in edges {
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let half = (m / 2) as u32;
    let (mut s, mut cut) = (0u32, 0i64);
    let mut best: Option<(u64, u64)> = None;
    for step in 1u64..(1 << m) {
        let v = step.trailing_zeros() as usize;
        let inside = (adj[v] & s).count_ones() as i64;
        let outside = adj[v].count_ones() as i64 - inside;
        if s >> v & 1 == 1 {
            s &= !(1 << v);
            cut += inside - outside;
        } else {
            s |= 1 << v;
            cut += outside - inside;
        }
        let size = s.count_ones();
        if size == 0 || size > half {
            continue;
        }
        let (c, k) = (cut as u64, size as u64);
        if best.is_none_or(|(bc, bk)| c * bk < bc * k) {
            best = Some((c, k));
        }
    }
    let (c, k) = best.expect("some subset has size 1");
    Ok(Ratio::new(c, k))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub density: Option<Ratio<u64>>,
    pub density_estimate: Option<DensityEstimate>,
    pub min_degree: Option<usize>,
    pub max_degree: Option<usize>,
    pub is_clique: Option<bool>,
    pub num_components: Option<usize>,
    pub expansion: Option<Ratio<u64>>,
}

impl MetricsReport {
    /// Everything available for `g`; expansion only on request and within its cap.
    pub fn compute(g: &PolytopeGraph, with_expansion: bool) -> Self {
        let m = g.num_vertices();
        MetricsReport {
            num_vertices: m,
            num_edges: g.num_edges(),
            density: density(g).ok(),
            density_estimate: density_estimate(g).ok(),
            min_degree: min_degree(g).ok(),
            max_degree: max_degree(g).ok(),
            is_clique: is_clique(g).ok(),
            num_components: num_components(g).ok(),
            expansion: if with_expansion { edge_expansion(g).ok() } else { None },
        }
    }

    pub fn to_json(&self) -> Value {
        let ratio = |r: &Option<Ratio<u64>>| r.map(|r| r.to_string());
        let float = |r: &Option<Ratio<u64>>| r.map(|r| *r.numer() as f64 / *r.denom() as f64);
        json!({
            "num_vertices": self.num_vertices,
            "num_edges": self.num_edges,
            "density": ratio(&self.density),
            "density_value": float(&self.density),
            "density_estimate": self.density_estimate.map(|d| json!({
                "value": d.value, "std_error": d.std_error, "pairs": d.pairs
            })),
            "min_degree": self.min_degree,
            "max_degree": self.max_degree,
            "is_clique": self.is_clique,
            "num_components": self.num_components,
            "expansion": ratio(&self.expansion),
            "expansion_value": float(&self.expansion),
        })
    }
}
