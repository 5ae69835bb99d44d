use super::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dist(g: &FiniteGraph) -> DistanceMatrix {
    all_distances(g).unwrap()
}

/// Floyd–Warshall, independent of the BFS path.
fn floyd(g: &FiniteGraph) -> Vec<Vec<u32>> {
    let n = g.n();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Whether some geodesic from `u` to `v` avoids the marked vertices, by
/// enumerating geodesics step by step.
fn avoiding_geodesic_exists(g: &FiniteGraph, d: &[Vec<u32>], blocked: &[bool], u: usize, v: usize) -> bool {
    if blocked[u] {
        return false;
    }
    if u == v {
        return true;
    }
    g.neighbors(u).iter().any(|&w| d[w][v] + 1 == d[u][v] && avoiding_geodesic_exists(g, d, blocked, w, v))
}

fn coneoff_oracle(g: &FiniteGraph, orbit: &[usize], r: u32) -> Vec<(usize, usize)> {
    let d = floyd(g);
    let n = g.n();
    let blocked: Vec<bool> = (0..n).map(|v| orbit.iter().any(|&o| d[v][o] <= r)).collect();
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if d[u][v] >= 2 && avoiding_geodesic_exists(g, &d, &blocked, u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

#[test]
fn distance_examples() {
    let e = path(2);
    assert_eq!(dist(&e).get(0, 1), 1);
    for k in [1, 2, 7, 30] {
        assert_eq!(dist(&path(k)).get(0, k - 1), (k - 1) as u32);
    }
    let two = FiniteGraph::new(2, &[]).unwrap();
    assert_eq!(all_distances(&two).unwrap_err(), HypError::Disconnected);
}

#[test]
fn tree_distances_match_parent_walk() {
    let mut r = rng(1);
    for _ in 0..20 {
        let n = 40;
        let t = random_tree(n, &mut r);
        let dm = dist(&t);
        // Vertex v > 0 has a unique smaller neighbour, its parent.
        let parent: Vec<usize> = (0..n).map(|v| if v == 0 { 0 } else { t.neighbors(v)[0] }).collect();
        let ancestors = |mut v: usize| {
            let mut out = vec![v];
            while v != 0 {
                v = parent[v];
                out.push(v);
            }
            out
        };
        for u in 0..n {
            for v in 0..n {
                let (au, av) = (ancestors(u), ancestors(v));
                let lca = au.iter().find(|a| av.contains(a)).unwrap();
                let du = au.iter().position(|a| a == lca).unwrap();
                let dv = av.iter().position(|a| a == lca).unwrap();
                assert_eq!(dm.get(u, v) as usize, du + dv);
            }
        }
    }
}

#[test]
fn delta_examples() {
    let mut r = rng(2);
    for n in [4, 10, 35, 60] {
        assert_eq!(delta_four_point(&dist(&random_tree(n, &mut r))).delta, Rational64::from_integer(0));
    }
    // Values from an independent brute force over ordered quadruples.
    let c4 = delta_four_point(&dist(&cycle(4).unwrap()));
    assert!(c4.exact);
    assert_eq!(c4.delta, Rational64::from_integer(1));
    assert_eq!(delta_four_point(&dist(&cycle(5).unwrap())).delta, Rational64::new(1, 2));
    assert_eq!(delta_four_point(&dist(&cycle(8).unwrap())).delta, Rational64::from_integer(2));
    let g = grid(9, 9);
    let big = delta_four_point(&dist(&g));
    assert!(!big.exact);
    assert!(big.delta <= delta_exact(&dist(&g)).delta);
}

#[test]
fn quasiconvex_examples() {
    let s = star(6);
    let dm = dist(&s);
    let all: Vec<usize> = (0..7).collect();
    assert!(is_quasiconvex(&dm, &all, 0).unwrap());
    assert!(!is_quasiconvex(&dm, &[1, 2], 0).unwrap());
    assert!(is_quasiconvex(&dm, &[1, 2], 1).unwrap());
    let t = binary_tree(4);
    let spine = [0, 1, 3, 7, 15];
    assert!(is_quasiconvex(&dist(&t), &spine, 0).unwrap());
    assert_eq!(is_quasiconvex(&dm, &[], 0).unwrap_err(), HypError::EmptySet);
}

#[test]
fn coneoff_trivial_cases() {
    let g = path(12);
    let dm = dist(&g);
    assert!(cone_off(&g, &dm, &[0], 20).unwrap().added.is_empty());
    let all: Vec<usize> = (0..12).collect();
    assert!(cone_off(&g, &dm, &all, 0).unwrap().added.is_empty());
}

#[test]
fn coneoff_path_matches_geodesic_oracle() {
    let g = path(40);
    let dm = dist(&g);
    for r in [1, 2, 3, 5] {
        let c = cone_off(&g, &dm, &[0], r).unwrap();
        assert_eq!(c.added, coneoff_oracle(&g, &[0], r));
    }
    let c = cone_off(&g, &dm, &[0], 3).unwrap();
    assert_eq!(c.added.len(), 595);
}

#[test]
fn coneoff_general_graphs_match_oracle() {
    let mut r = rng(3);
    let graphs = [grid(5, 4), cycle(11).unwrap(), binary_tree(4), random_tree(25, &mut r)];
    for g in graphs {
        let dm = dist(&g);
        for radius in 0..3 {
            let c = cone_off(&g, &dm, &[0], radius).unwrap();
            assert_eq!(c.added, coneoff_oracle(&g, &[0], radius));
        }
    }
}

#[test]
fn coneoff_monotone_lipschitz_and_closed_under_subsegments() {
    let g = grid(7, 6);
    let dm = dist(&g);
    let orbit = [0, 20];
    let mut previous: Option<Vec<(usize, usize)>> = None;
    for radius in (0..5).rev() {
        let c = cone_off(&g, &dm, &orbit, radius).unwrap();
        if let Some(p) = &previous {
            assert!(p.iter().all(|e| c.added.contains(e)));
        }
        let dy = dist(&c.graph);
        for u in 0..g.n() {
            for v in 0..g.n() {
                assert!(dy.get(u, v) <= dm.get(u, v));
            }
        }
        previous = Some(c.added);
    }
    let p = path(30);
    let dp = dist(&p);
    let c = cone_off(&p, &dp, &[0], 2).unwrap();
    for &(u, v) in &c.added {
        for a in u..=v {
            for b in a + 2..=v {
                assert!(c.added.contains(&(a, b)));
            }
        }
    }
}

#[test]
fn verify_coneoff_examples() {
    let g = path(10);
    let trivial = verify_coneoff(&g, &[0], 20, &[0], 0, 1000, 1).unwrap();
    assert_eq!(trivial.hausdorff, 0);
    assert!(trivial.lipschitz);

    let t = binary_tree(10);
    let spine: Vec<usize> = std::iter::successors(Some(0usize), |&v| Some(2 * v + 1)).take(11).collect();
    let rep = verify_coneoff(&t, &spine, 3, &spine, 0, 2000, 7).unwrap();
    assert_eq!(rep.q, 0);
    assert_eq!(rep.max_distortion, Rational64::from_integer(1));
    assert_eq!(rep.k, 1);
    assert_eq!(rep.z_pairs, 55);
    assert!(rep.lipschitz);
    assert_eq!(rep.hausdorff, 1);
    assert!(rep.precondition_met);

    let small = verify_coneoff(&t, &spine, 0, &spine, 0, 2000, 7).unwrap();
    assert!(!small.precondition_met);

    let s = star(5);
    assert!(matches!(
        verify_coneoff(&s, &[1, 2], 1, &[1, 2], 0, 10, 0),
        Err(HypError::NotQuasiconvex { claimed: 0, measured: 1 })
    ));
    assert_eq!(verify_coneoff(&s, &[1], 1, &[2], 0, 10, 0).unwrap_err(), HypError::NotInOrbit);
}

#[test]
fn translation_examples() {
    let p = path(200);
    let dm = dist(&p);
    let id = GraphMap::identity(200);
    let rep = translation_length_estimate(&dm, &id, 5, 20).unwrap();
    assert_eq!(rep.ell, Rational64::from_integer(0));
    assert_eq!(rep.classification, Classification::EllipticCandidate);

    let shift = GraphMap::from_fn(200, |v| (v + 2 < 200).then_some(v + 2));
    assert!(shift.is_isometric(&dm));
    let rep = translation_length_estimate(&dm, &shift, 0, 50).unwrap();
    assert_eq!(rep.ell, Rational64::from_integer(2));
    assert!(!rep.truncated);
    assert_eq!(rep.classification, Classification::LoxodromicCandidate);
    let rep = translation_length_estimate(&dm, &shift, 150, 50).unwrap();
    assert!(rep.truncated);

    let c = cycle(12).unwrap();
    let dc = dist(&c);
    let rot = GraphMap::total((0..12).map(|v| (v + 5) % 12).collect());
    let rep = translation_length_estimate(&dc, &rot, 0, 40).unwrap();
    assert_eq!(rep.classification, Classification::EllipticCandidate);
}

#[test]
fn commuting_elliptic_examples() {
    let p = path(9);
    let dm = dist(&p);
    let id = GraphMap::identity(9);
    let b = commuting_elliptic_bound(&dm, std::slice::from_ref(&id), std::slice::from_ref(&id), 4, 6).unwrap();
    assert_eq!((b.m, b.n, b.diam), (0, 0, 0));

    // The reflection of a path commutes with itself and with the identity.
    let refl = GraphMap::total((0..9).map(|v| 8 - v).collect());
    for x in 0..9 {
        let b = commuting_elliptic_bound(&dm, std::slice::from_ref(&refl), std::slice::from_ref(&refl), x, 6).unwrap();
        assert!(b.holds);
        assert_eq!(b.diam, b.m);
    }

    // Commuting reflections of a grid: horizontal and vertical flips.
    let g = grid(5, 4);
    let dg = dist(&g);
    let h = GraphMap::total((0..20).map(|v| (v / 5) * 5 + 4 - v % 5).collect());
    let vf = GraphMap::total((0..20).map(|v| (3 - v / 5) * 5 + v % 5).collect());
    for x in 0..20 {
        let b = commuting_elliptic_bound(&dg, std::slice::from_ref(&h), std::slice::from_ref(&vf), x, 6).unwrap();
        assert!(b.holds);
        assert_eq!(b.diam, b.m + b.n);
    }

    let c = cycle(10).unwrap();
    let dc = dist(&c);
    let rot = GraphMap::total((0..10).map(|v| (v + 1) % 10).collect());
    let b = commuting_elliptic_bound(&dc, std::slice::from_ref(&rot), &[GraphMap::identity(10)], 0, 10).unwrap();
    assert_eq!(b.m, 5);
    assert!(b.holds);

    let shift = GraphMap::from_fn(9, |v| (v + 1 < 9).then_some(v + 1));
    assert!(matches!(commuting_elliptic_bound(&dm, &[refl], &[shift], 0, 3), Err(HypError::NotCommuting { .. })));
}

#[test]
fn text_formats() {
    let g = grid(3, 2);
    let back = FiniteGraph::parse_edge_list(&g.to_edge_list()).unwrap();
    assert_eq!(back, g);
    let parsed = FiniteGraph::parse_edge_list("# a triangle\n0 1\n1 2 # last\n2 0\n").unwrap();
    assert_eq!(parsed.edge_count(), 3);
    assert!(FiniteGraph::parse_edge_list("0 x\n").is_err());
    assert_eq!(FiniteGraph::parse_edge_list("1 1\n").unwrap_err(), HypError::SelfLoop(1));
    let c = cone_off(&path(6), &dist(&path(6)), &[0], 1).unwrap();
    let dot = c.to_dot();
    assert!(dot.contains("2 -- 4 [style=dashed, color=red];"));
    assert!(dot.contains("0 -- 1;"));
}

#[test]
fn cayley_balls() {
    // S_3 by a transposition and a 3-cycle: radius 3 reaches all 6 elements.
    let (g, elems) = cayley_ball(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap();
    assert_eq!(elems.len(), 6);
    assert!(g.is_connected());
    let dm = dist(&g);
    assert!(dm.diameter() <= 3);
    assert!(cayley_ball(&[vec![0, 0]], 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn trees_are_zero_hyperbolic(seed in any::<u64>(), n in 1usize..60) {
        let t = random_tree(n, &mut rng(seed));
        prop_assert_eq!(delta_four_point(&dist(&t)).delta, Rational64::from_integer(0));
    }

    #[test]
    fn distances_match_floyd(seed in any::<u64>(), n in 2usize..30, extra in 0usize..20) {
        let mut r = rng(seed);
        let mut g = random_tree(n, &mut r);
        for _ in 0..extra {
            let (u, v) = (rand::Rng::gen_range(&mut r, 0..n), rand::Rng::gen_range(&mut r, 0..n));
            if u != v {
                g.add_edge(u, v).unwrap();
            }
        }
        let dm = dist(&g);
        let f = floyd(&g);
        for (u, row) in f.iter().enumerate() {
            for (v, &d) in row.iter().enumerate() {
                prop_assert_eq!(dm.get(u, v), d);
            }
        }
    }
}
