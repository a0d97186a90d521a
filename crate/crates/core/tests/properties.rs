use num_rational::Ratio;
use polyskel::adjacency::{averaging_certificate_search, build_graph, edge_status, BuildOptions, Method, Verdict};
use polyskel::analytics::{count_witness_quadruples, entropy, ThresholdConstants};
use polyskel::hypercube::{interval_points, Interval};
use polyskel::metrics::{self, density, density_estimate, edge_expansion_of};
use polyskel::typicality::{is_typical_pair, witness_set};
use polyskel::{sample_vertex_set, Point, VertexSet};
use proptest::prelude::*;

fn point(n: u32) -> impl Strategy<Value = Point> {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    any::<u64>().prop_map(move |b| Point::new(b & mask, n).unwrap())
}

fn point_pair(max_n: u32) -> impl Strategy<Value = (Point, Point)> {
    (1..=max_n).prop_flat_map(|n| (point(n), point(n)))
}

fn instance(max_n: u32) -> impl Strategy<Value = VertexSet> {
    (2..=max_n, prop::sample::select(vec![0.2, 0.5, 0.8]), any::<u64>())
        .prop_map(|(n, p, seed)| sample_vertex_set(n, p, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_identities((x, y) in point_pair(64)) {
        let m = x.meet(&y).unwrap();
        let n = x.dim();
        prop_assert_eq!(x.hamming(&y).unwrap() + 2 * m.weight(), x.weight() + y.weight());
        prop_assert_eq!(x.complement_count(&y).unwrap() + x.weight() + y.weight(), n + m.weight());
        prop_assert_eq!(x.join(&y).unwrap().weight() + m.weight(), x.weight() + y.weight());
        prop_assert_eq!(Point::parse_hex(&x.to_hex(), n).unwrap(), x);
        prop_assert_eq!(Point::parse_binary(&x.to_binary()).unwrap(), x);
    }

    #[test]
    fn interval_membership((x, y) in point_pair(12), z_bits in any::<u64>()) {
        let n = x.dim();
        let z = Point::new(z_bits & ((1 << n) - 1), n).unwrap();
        let pts: Vec<Point> = interval_points(&x, &y).unwrap().collect();
        prop_assert_eq!(pts.len() as u64, 1u64 << x.hamming(&y).unwrap());
        prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let (lo, hi) = (x.meet(&y).unwrap(), x.join(&y).unwrap());
        let inside = lo.meet(&z).unwrap() == lo && hi.join(&z).unwrap() == hi;
        prop_assert_eq!(pts.contains(&z), inside);
        prop_assert_eq!(Interval::spanned_by(&x, &y).unwrap().contains(&z), inside);
    }

    #[test]
    fn typical_pairs_are_balanced((x, y) in point_pair(64), alpha in 0.01f64..0.3) {
        if is_typical_pair(&x, &y, alpha) {
            let n = x.dim() as f64;
            let t = 2.0 * alpha * n;
            let tol = 1e-9;
            for w in [x.weight(), y.weight()] {
                prop_assert!((w as f64 - n / 2.0).abs() <= t + tol);
            }
            let m = x.meet(&y).unwrap().weight() as f64;
            prop_assert!((m - n / 4.0).abs() <= t + tol);
            prop_assert!((x.hamming(&y).unwrap() as f64 - n / 2.0).abs() <= t + tol);
        }
    }

    #[test]
    fn entropy_is_symmetric(d in 0.0f64..=1.0) {
        prop_assert!((entropy(d).unwrap() - entropy(1.0 - d).unwrap()).abs() < 1e-12);
        prop_assert!(entropy(d).unwrap() <= 1.0);
    }

    #[test]
    fn sampling_is_deterministic(n in 1u32..=12, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let a = sample_vertex_set(n, p, seed).unwrap();
        let b = sample_vertex_set(n, p, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.points().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.points().iter().all(|z| z.dim() == n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn methods_agree_and_replay(q in instance(5)) {
        let pts = q.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (x, y) = (&pts[i], &pts[j]);
                let base = edge_status(&q, x, y, Method::Auto).unwrap();
                prop_assert!(base.replays(&q, x, y));
                for m in [Method::Lp, Method::OracleFull, Method::OracleHyperplane] {
                    let s = edge_status(&q, x, y, m).unwrap();
                    prop_assert_eq!(s.verdict, base.verdict, "{} on {:?} {} {}", m, q, x, y);
                    prop_assert!(s.replays(&q, x, y));
                }
            }
        }
    }

    #[test]
    fn pair_properties(q in instance(6)) {
        let pts = q.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (x, y) = (&pts[i], &pts[j]);
                let fwd = edge_status(&q, x, y, Method::Lp).unwrap();
                let back = edge_status(&q, y, x, Method::Lp).unwrap();
                prop_assert_eq!(fwd.verdict, back.verdict);
                prop_assert!(back.replays(&q, y, x));
                let w = witness_set(&q, x, y).unwrap();
                prop_assert_eq!(&w.members, &witness_set(&q, y, x).unwrap().members);
                if w.members.len() <= 1 {
                    prop_assert_eq!(fwd.verdict, Verdict::Edge);
                }
                if let Ok(Some(_)) = averaging_certificate_search(&q, x, y, 2) {
                    prop_assert_eq!(fwd.verdict, Verdict::NonEdge);
                }
            }
        }
    }

    #[test]
    fn more_points_only_remove_edges(q in instance(6), extra_seed in any::<u64>()) {
        let n = q.dim();
        let extra = sample_vertex_set(n, 0.3, extra_seed).unwrap();
        let mut union: Vec<Point> = q.points().to_vec();
        union.extend(extra.points().iter().copied());
        union.sort();
        union.dedup();
        let big = VertexSet::from_points(n, union).unwrap();
        let pts = q.points();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let small = edge_status(&q, &pts[i], &pts[j], Method::Auto).unwrap();
                if small.verdict == Verdict::NonEdge {
                    let large = edge_status(&big, &pts[i], &pts[j], Method::Auto).unwrap();
                    prop_assert_eq!(large.verdict, Verdict::NonEdge);
                }
            }
        }
    }

    #[test]
    fn no_quadruples_means_clique(q in instance(6)) {
        if count_witness_quadruples(&q, None) == 0u32.into() {
            let g = build_graph(&q, &BuildOptions::default());
            prop_assert!(metrics::is_clique(&g).unwrap());
        }
    }

    #[test]
    fn graph_metrics_are_consistent(q in instance(6)) {
        let g = build_graph(&q, &BuildOptions::default());
        let m = q.len() as u64;
        prop_assert_eq!(g.num_pairs_classified() as u64, m * m.saturating_sub(1) / 2);
        let d = density(&g).unwrap();
        prop_assert!(d <= Ratio::from_integer(1));
        prop_assert_eq!(metrics::is_clique(&g).unwrap(), d == Ratio::from_integer(1));
        if m >= 2 {
            let est = density_estimate(&g).unwrap();
            prop_assert!((est.value - *d.numer() as f64 / *d.denom() as f64).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn expansion_zero_iff_disconnected(m in 2usize..=10, bits in any::<u64>()) {
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(k, _)| bits >> (k % 64) & 1 == 1).map(|(_, &e)| e).collect();
        let phi = edge_expansion_of(m, &edges).unwrap();
        // label propagation over the same edges
        let mut label: Vec<usize> = (0..m).collect();
        for _ in 0..m {
            for &(i, j) in &edges {
                let l = label[i].min(label[j]);
                label[i] = l;
                label[j] = l;
            }
        }
        let connected = label.iter().all(|&l| l == 0);
        prop_assert_eq!(phi == Ratio::from_integer(0), !connected);
    }
}

#[test]
fn full_cube_edges_are_unit_steps() {
    for n in 1..=5 {
        let q = VertexSet::full_cube(n).unwrap();
        let g = build_graph(&q, &BuildOptions::default());
        let pts = q.points();
        let expected: usize = n as usize * (1 << (n - 1));
        assert_eq!(g.num_edges(), expected);
        assert!(g.edge_pairs().all(|(i, j)| pts[i].hamming(&pts[j]).unwrap() == 1));
    }
}

#[test]
fn constants_in_range() {
    let c = ThresholdConstants::compute();
    for v in [c.delta_star, c.weak_exponent] {
        assert!(v > 0.82 && v < 0.84);
    }
    assert!(c.delta_star > 0.8);
    assert!((c.delta_star - (1.0 + entropy(c.delta_star).unwrap()) / 2.0).abs() < 1e-12);
}
