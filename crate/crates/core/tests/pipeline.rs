//! Cross-module flows through the public API.

use nlkit::cantor::{Arity, ClopenSet};
use nlkit::criterion::{build_cover_a, decompose_a, extremely_proximal_witness, run_criterion_suite, Family};
use nlkit::elements::{CantorGroup, VElement};
use nlkit::hypgraph::{
    all_distances, cayley_ball, cone_off, cycle, delta_four_point, path, translation_length_estimate, Classification,
    GraphMap,
};
use nlkit::quasi::{
    ball_pairs, busemann_estimate, defect_estimate, loxodromic_link_check, rat, ratio, zero_map, CantorOracle,
    GroupOracle, Quasimorphism, RaySpec,
};
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn parsed_elements_decompose_and_recompose() {
    let a = Arity::BINARY;
    let g = VElement::parse(a, "0:00->0:0, 0:01->0:10, 0:1->0:11").unwrap();
    let cover = build_cover_a(a);
    let d = decompose_a(&g, &cover).unwrap();
    assert!(d.factors.len() <= 3);
    assert_eq!(VElement::compose_all(&a, &d.factors).unwrap(), g);
    let u = ClopenSet::parse(a, "[0:00]").unwrap();
    assert_eq!(g.image_clopen(&u).unwrap(), ClopenSet::parse(a, "[0:0]").unwrap());
    assert_eq!(VElement::parse(a, &g.to_string()).unwrap(), g);
}

#[test]
fn proximal_witness_for_parsed_sets() {
    let a = Arity::BINARY;
    let u = ClopenSet::parse(a, "[0:0, 0:10]").unwrap();
    let v = ClopenSet::parse(a, "[0:111]").unwrap();
    let f: VElement = extremely_proximal_witness(&a, &u, &v).unwrap();
    assert!(f.image_clopen(&u).unwrap().is_subset(&v).unwrap());
}

#[test]
fn criterion_reports_serialize() {
    let r = run_criterion_suite(&Family::V { n: 2, r: 1 }, 5, 17).unwrap();
    assert!(r.is_clean());
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"exhaustive\":true"));
}

#[test]
fn quasimorphisms_on_thompson_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gens: Vec<VElement> = (0..2).map(|_| VElement::random(&Arity::BINARY, &mut rng, 4)).collect();
    let oracle = CantorOracle::new(Arity::BINARY, gens);
    let pairs = ball_pairs(&oracle, 1);
    assert_eq!(defect_estimate(&oracle, &zero_map(), &pairs), rat(0));
    // Each defect term is at most the sum of the three piece counts.
    let pieces = Quasimorphism::new("pieces", |g: &VElement| rat(g.piece_count() as i64));
    let d = defect_estimate(&oracle, &pieces, &pairs);
    let worst =
        pairs.iter().map(|(g, h)| g.piece_count() + h.piece_count() + oracle.mul(g, h).piece_count()).max().unwrap();
    assert!(d <= rat(worst as i64));
}

#[test]
fn path_shift_across_modules() {
    let g = path(101);
    let dm = all_distances(&g).unwrap();
    let shift = GraphMap::from_fn(101, |v| (v < 100).then_some(v + 1));
    let t = translation_length_estimate(&dm, &shift, 0, 40).unwrap();
    assert_eq!(t.classification, Classification::LoxodromicCandidate);
    let ray = RaySpec::new(&dm, (0..=100).collect()).unwrap();
    assert_eq!(busemann_estimate(&dm, &ray, &shift).unwrap().value, -1);
    let link = loxodromic_link_check(&dm, &ray, &shift, 40, &ratio(1, 4)).unwrap();
    assert!(link.consistent && link.beta_hat == rat(-1) && link.ell_hat == rat(1));
}

#[test]
fn cayley_graph_hyperbolicity_and_coneoff() {
    let (g, elems) = cayley_ball(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap();
    assert_eq!(elems.len(), 6);
    let dm = all_distances(&g).unwrap();
    let d = delta_four_point(&dm);
    assert!(d.exact);
    let cone = cone_off(&g, &dm, &[0], 0).unwrap();
    let dy = all_distances(&cone.graph).unwrap();
    assert!((0..g.n()).all(|u| (0..g.n()).all(|v| dy.get(u, v) <= dm.get(u, v))));
    for k in [5, 6, 7] {
        let exact = delta_four_point(&all_distances(&cycle(k).unwrap()).unwrap()).delta;
        assert_eq!(exact, cycle_delta_oracle(k), "C_{k}");
    }
}

/// Four-point delta of `C_k` from the closed-form cycle metric.
fn cycle_delta_oracle(k: usize) -> Rational64 {
    let d = |i: usize, j: usize| i.abs_diff(j).min(k - i.abs_diff(j));
    let mut best = 0;
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                for w in 0..k {
                    let mut s = [d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)];
                    s.sort_unstable();
                    best = best.max(s[2] - s[1]);
                }
            }
        }
    }
    Rational64::new(best as i64, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_recomposes(seed in any::<u64>()) {
        let a = Arity::BINARY;
        let g = VElement::random(&a, &mut ChaCha8Rng::seed_from_u64(seed), 6);
        let d = decompose_a(&g, &build_cover_a(a)).unwrap();
        prop_assert!(d.factors.len() <= 3);
        prop_assert_eq!(VElement::compose_all(&a, &d.factors).unwrap(), g);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let a = Arity::new(3, 2).unwrap();
        let g = VElement::random(&a, &mut ChaCha8Rng::seed_from_u64(seed), 5);
        prop_assert_eq!(VElement::parse(a, &g.to_string()).unwrap(), g);
    }
}
