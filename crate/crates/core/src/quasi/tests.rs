use super::*;
use crate::cantor::Arity;
use crate::elements::{CantorGroup, VElement};
use crate::hypgraph::{all_distances, binary_tree, cycle, path, FiniteGraph, GraphMap};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;

fn parity(k: i64) -> i64 {
    k + k.rem_euclid(2)
}

fn bfs_oracle(g: &FiniteGraph, src: usize) -> Vec<i64> {
    let mut dist = vec![-1; g.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] < 0 {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Heap-ordered binary tree map prepending `bit` to the root path.
fn spine_shift(depth: u32, bit: usize) -> GraphMap {
    let n = (1usize << (depth + 1)) - 1;
    GraphMap::from_fn(n, |v| {
        let level = (usize::BITS - (v + 1).leading_zeros() - 1) as usize;
        let offset = v + 1 - (1 << level);
        let w = (1 << (level + 1)) - 1 + (bit << level) + offset;
        (w < n).then_some(w)
    })
}

fn int_pairs(r: i64) -> Vec<(i64, i64)> {
    (-r..=r).flat_map(|a| (-r..=r).map(move |b| (a, b))).collect()
}

#[test]
fn defect_examples() {
    let pairs = int_pairs(20);
    assert_eq!(defect_estimate(&Integers, &integer_identity(), &pairs), rat(0));
    assert_eq!(defect_estimate(&Integers, &integer_identity(), &[]), rat(0));

    let q = parity_perturbed();
    let oracle = pairs.iter().map(|&(a, b)| (parity(a + b) - parity(a) - parity(b)).abs()).max().unwrap();
    assert_eq!(oracle, 2);
    assert_eq!(defect_estimate(&Integers, &q, &pairs), rat(oracle));
    assert_eq!(defect_estimate(&Integers, &q, &[(1, 1)]), rat(2));
    assert_eq!(defect_estimate(&Integers, &q, &[(0, 1), (2, 4)]), rat(0));
    assert_eq!(respects_claim(&Integers, &q, &pairs), Some(true));
    let too_strict = parity_perturbed().with_claimed_defect(rat(1));
    assert_eq!(respects_claim(&Integers, &too_strict, &pairs), Some(false));
}

#[test]
fn homogenize_examples() {
    let q = parity_perturbed();
    let h = homogenize_estimate(&Integers, &q, &1, 100, &rat(2)).unwrap();
    assert_eq!(h.estimate, rat(parity(100)) / rat(100));
    assert_eq!(h.estimate, rat(1));
    assert_eq!(h.q_g, rat(2));
    assert!(h.bracket_holds);

    let h = homogenize_estimate(&Integers, &q, &3, 7, &rat(2)).unwrap();
    assert_eq!(h.estimate, ratio(22, 7));

    let id = integer_identity();
    assert_eq!(homogenize_estimate(&Integers, &id, &-9, 13, &rat(0)).unwrap().estimate, rat(-9));
    assert_eq!(homogenize_estimate(&Integers, &q, &0, 5, &rat(2)).unwrap().estimate, rat(0));
    assert_eq!(homogenize_estimate(&Integers, &q, &1, 0, &rat(2)), Err(QuasiError::ZeroIterations));
}

#[test]
fn busemann_path_shift() {
    let g = path(101);
    let dm = all_distances(&g).unwrap();
    let ray = RaySpec::new(&dm, (0..=100).collect()).unwrap();
    let shift = GraphMap::from_fn(101, |v| (v + 2 <= 100).then_some(v + 2));
    let b = busemann_estimate(&dm, &ray, &shift).unwrap();
    assert_eq!(b.value, -2);
    assert!(b.stable);
    assert_eq!(b.tail.len(), 51);
    assert_eq!(b.tail[0], (50, -2));

    let id = busemann_estimate(&dm, &ray, &GraphMap::identity(101)).unwrap();
    assert_eq!(id.value, 0);
    assert!(id.stable);

    let back = GraphMap::from_fn(101, |v| v.checked_sub(1));
    assert_eq!(busemann_estimate(&dm, &ray, &back), Err(QuasiError::OutsideGraph(0)));
}

#[test]
fn ray_validation() {
    let dm = all_distances(&path(10)).unwrap();
    assert_eq!(RaySpec::new(&dm, vec![]), Err(QuasiError::EmptyRay));
    assert_eq!(RaySpec::new(&dm, vec![0, 1, 0]), Err(QuasiError::NotGeodesic(2)));
    assert_eq!(RaySpec::new(&dm, vec![0, 2]), Err(QuasiError::NotGeodesic(1)));
    assert_eq!(RaySpec::new(&dm, vec![0, 1, 11]), Err(QuasiError::NotGeodesic(2)));
    let ray = RaySpec::new(&dm, vec![3, 4, 5]).unwrap();
    assert_eq!(ray.len(), 2);
}

#[test]
fn busemann_binary_tree_spine() {
    let depth = 10;
    let tree = binary_tree(depth);
    let dm = all_distances(&tree).unwrap();
    let spine: Vec<usize> = (0..=depth).map(|k| (1usize << k) - 1).collect();
    let ray = RaySpec::new(&dm, spine.clone()).unwrap();
    let n = spine.len() - 1;
    for bit in [0, 1] {
        let g = spine_shift(depth, bit);
        assert!(g.is_isometric(&dm));
        let b = busemann_estimate(&dm, &ray, &g).unwrap();
        let gx0 = g.apply(0).unwrap();
        let bfs = bfs_oracle(&tree, gx0);
        assert_eq!(b.value, bfs[spine[n]] - n as i64);
        for &(k, v) in &b.tail {
            assert_eq!(v, bfs[spine[k]] - k as i64);
        }
        assert!(b.stable);
    }
    assert_eq!(busemann_estimate(&dm, &ray, &spine_shift(depth, 0)).unwrap().value, -1);
    assert_eq!(busemann_estimate(&dm, &ray, &spine_shift(depth, 1)).unwrap().value, 1);
}

#[test]
fn quasiline_integers() {
    let report = quasiline_generators(&Integers, &integer_identity(), &rat(3), 50).unwrap();
    let mut gens = report.generators.clone();
    gens.sort_unstable();
    assert_eq!(gens, vec![-2, -1, 1, 2]);
    assert_eq!(report.unreached, 0);
    assert_eq!(report.word_lengths.len(), 101);
    for &(k, len) in &report.word_lengths {
        assert_eq!(len as i64, (k.abs() + 1) / 2, "k = {k}");
    }
    assert!(report.satisfies(&rat(2), &rat(1)));
    assert!(report.satisfies(&report.a, &report.b));
    assert!(&report.a + &report.b <= rat(3));
    assert_eq!(report.defect, rat(0));
}

#[test]
fn quasiline_word_length_is_inversion_invariant() {
    let p = Quasimorphism::new("k + (k mod 2)", |k: &i64| rat(parity(*k)));
    let report = quasiline_generators(&Integers, &p, &rat(5), 30).unwrap();
    let lens: std::collections::HashMap<i64, u32> = report.word_lengths.iter().copied().collect();
    for k in 0..=30 {
        assert_eq!(lens[&k], lens[&-k]);
    }
    assert!(report.satisfies(&report.a, &report.b));
}

#[test]
fn quasiline_rejections() {
    let zero = zero_map::<i64>();
    assert!(matches!(quasiline_generators(&Integers, &zero, &rat(3), 20), Err(QuasiError::NoSmallValue(_))));
    let wide = Quasimorphism::new("k + 3(k mod 2)", |k: &i64| rat(k + 3 * k.rem_euclid(2)));
    assert!(matches!(quasiline_generators(&Integers, &wide, &rat(5), 20), Err(QuasiError::DefectTooLarge { .. })));
}

#[test]
fn dihedral_quasicocycle() {
    let oracle = InfiniteDihedral;
    let s = Dihedral::reflection(0);
    let ball: Vec<Dihedral> = (-15..=15).flat_map(|t| [Dihedral::translation(t), Dihedral::reflection(t)]).collect();
    let pairs: Vec<(Dihedral, Dihedral)> = ball.iter().flat_map(|a| ball.iter().map(move |b| (*a, *b))).collect();

    let phi = quasicocycle_extend(&integer_identity(), s).unwrap();
    assert!(phi.eps_is_multiplicative(&oracle, &pairs));
    assert_eq!(phi.eps_defect(&oracle, &pairs), rat(0));

    let phi = quasicocycle_extend(&parity_perturbed(), s).unwrap();
    let oracle_defect = pairs
        .iter()
        .map(|(g, h)| {
            let gh = oracle.mul(g, h);
            (parity(gh.t) - parity(g.t) - g.eps() as i64 * parity(h.t)).abs()
        })
        .max()
        .unwrap();
    assert_eq!(oracle_defect, 2);
    assert_eq!(phi.eps_defect(&oracle, &pairs), rat(oracle_defect));
    let beta_defect = defect_estimate(&Integers, &parity_perturbed(), &int_pairs(30));
    assert!(phi.eps_defect(&oracle, &pairs) <= rat(2) * beta_defect);

    let zero = quasicocycle_extend(&zero_map(), s).unwrap();
    assert!(ball.iter().all(|g| zero.phi(g).is_zero()));

    assert_eq!(quasicocycle_extend(&integer_identity(), Dihedral::translation(3)).err(), Some(QuasiError::InKernel));
}

#[test]
fn dihedral_extension_with_other_representative() {
    let oracle = InfiniteDihedral;
    let s = Dihedral::reflection(5);
    let phi = quasicocycle_extend(&integer_identity(), s).unwrap();
    for i in -5..=5 {
        let k = Dihedral::translation(i);
        assert_eq!(phi.phi(&oracle.mul(&k, &s)), rat(i));
    }
    let ball = oracle.ball(6);
    let pairs: Vec<_> = ball.iter().flat_map(|a| ball.iter().map(move |b| (*a, *b))).collect();
    assert!(phi.eps_defect(&oracle, &pairs) <= rat(10));
}

#[test]
fn wreath_lift_examples() {
    let model = CyclicWreath::new(5, 1);
    assert_eq!(model.orbit(2), vec![0, 1, 2, 3, 4]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let random_elem = |rng: &mut ChaCha8Rng| {
        let lamps = (0..5).map(|_| rng.gen_range(-4..=4)).collect();
        model.element(lamps, rng.gen_range(0..5))
    };
    let pairs: Vec<_> = (0..1000).map(|_| (random_elem(&mut rng), random_elem(&mut rng))).collect();
    let lift = wreath_lift(&integer_identity(), &model, 0);
    assert_eq!(defect_estimate(&model, &lift, &pairs), rat(0));

    let small: Vec<WreathElem> = (0..32u32)
        .flat_map(|mask| (0..5).map(move |k| (mask, k)))
        .map(|(mask, k)| model.element((0..5).map(|s| ((mask >> s) & 1) as i64).collect(), k))
        .collect();
    let small_pairs: Vec<_> = small.iter().flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let lift = wreath_lift(&parity_perturbed(), &model, 0);
    let oracle_defect = small_pairs
        .iter()
        .map(|(a, b)| {
            let ab = model.mul(a, b);
            let sum = |w: &WreathElem| w.lamps.iter().map(|&x| parity(x)).sum::<i64>();
            (sum(&ab) - sum(a) - sum(b)).abs()
        })
        .max()
        .unwrap();
    assert_eq!(oracle_defect, 10);
    assert_eq!(defect_estimate(&model, &lift, &small_pairs), rat(oracle_defect));
    assert_eq!(lift.claimed_defect(), Some(&rat(10)));
    assert_eq!(respects_claim(&model, &lift, &small_pairs), Some(true));

    let zero = wreath_lift(&zero_map(), &model, 0);
    assert!(small.iter().all(|g| zero.eval(g).is_zero()));

    let unbounded: Vec<BigRational> =
        (0..5).map(|k| wreath_lift(&integer_identity(), &model, 0).eval(&model.lamp(0, 10 * k))).collect();
    assert!(unbounded.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn wreath_partial_orbit() {
    let model = CyclicWreath::new(6, 2);
    assert_eq!(model.orbit(1), vec![1, 3, 5]);
    let lift = wreath_lift(&integer_identity(), &model, 1);
    let g = model.element(vec![1, 2, 3, 4, 5, 6], 0);
    assert_eq!(lift.eval(&g), rat(2 + 4 + 6));
    let ball = model.ball(3);
    let pairs: Vec<_> = ball.iter().flat_map(|a| ball.iter().map(move |b| (a.clone(), b.clone()))).collect();
    assert_eq!(defect_estimate(&model, &lift, &pairs), rat(0));
}

#[test]
fn loxodromic_examples() {
    let tol = ratio(1, 4);
    let g = path(201);
    let dm = all_distances(&g).unwrap();
    let ray = RaySpec::new(&dm, (0..=200).collect()).unwrap();
    let shift = GraphMap::from_fn(201, |v| (v + 2 <= 200).then_some(v + 2));
    let r = loxodromic_link_check(&dm, &ray, &shift, 50, &tol).unwrap();
    assert_eq!(r.n, 50);
    assert_eq!(r.beta_hat, rat(-2));
    assert_eq!(r.ell_hat, rat(2));
    assert!(r.consistent && r.beta_nonzero && r.ell_positive);

    let id = loxodromic_link_check(&dm, &ray, &GraphMap::identity(201), 50, &tol).unwrap();
    assert_eq!((id.beta_hat.clone(), id.ell_hat.clone()), (rat(0), rat(0)));
    assert!(id.consistent);

    let c = cycle(12).unwrap();
    let dm = all_distances(&c).unwrap();
    let ray = RaySpec::new(&dm, (0..=6).collect()).unwrap();
    let rot = GraphMap::total((0..12).map(|v| (v + 5) % 12).collect());
    let r = loxodromic_link_check(&dm, &ray, &rot, 48, &tol).unwrap();
    let mut x = 0;
    for _ in 0..48 {
        x = (x + 5) % 12;
    }
    assert_eq!(x, 0);
    assert_eq!(r.ell_hat, rat(0));
    assert_eq!(r.beta_hat, rat(0));
    assert!(r.consistent);
}

#[test]
fn loxodromic_tree_shift() {
    let depth = 10;
    let tree = binary_tree(depth);
    let dm = all_distances(&tree).unwrap();
    let ray = RaySpec::new(&dm, (0..=depth).map(|k| (1usize << k) - 1).collect()).unwrap();
    let r = loxodromic_link_check(&dm, &ray, &spine_shift(depth, 0), 40, &ratio(1, 4)).unwrap();
    assert_eq!(r.n, 10);
    assert_eq!(r.beta_hat, rat(-1));
    assert_eq!(r.ell_hat, rat(1));
    assert!(r.consistent);
}

#[test]
fn homomorphism_oracles_have_zero_defect() {
    let lamp_sum = Quasimorphism::new("lamp sum", |w: &WreathElem| rat(w.lamps.iter().sum()));
    let model = CyclicWreath::new(4, 1);
    let ball = model.ball(3);
    let pairs: Vec<_> = ball.iter().flat_map(|a| ball.iter().map(move |b| (a.clone(), b.clone()))).collect();
    assert_eq!(defect_estimate(&model, &lamp_sum, &pairs), rat(0));

    let sign = Quasimorphism::new("flip count", |d: &Dihedral| rat(d.flip as i64));
    let pairs = ball_pairs(&InfiniteDihedral, 6);
    assert_eq!(defect_estimate(&InfiniteDihedral, &sign, &pairs), rat(2));
    assert_eq!(defect_estimate(&InfiniteDihedral, &zero_map(), &pairs), rat(0));
}

#[test]
fn ball_sizes() {
    assert_eq!(Integers.ball(7).len(), 15);
    assert_eq!(InfiniteDihedral.ball(3).len(), 12);
    let model = CyclicWreath::new(3, 1);
    assert_eq!(model.ball(1).len(), 5);
}

#[test]
fn cantor_oracle_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens: Vec<VElement> = (0..2).map(|_| VElement::random(&Arity::BINARY, &mut rng, 4)).collect();
    let oracle = CantorOracle::new(Arity::BINARY, gens.clone());
    let ball = oracle.ball(2);
    assert!(ball.len() <= 1 + 4 + 4 * 3);
    assert!(ball.contains(&gens[0].inverse()));
    let w = oracle.eval_word(&[(0, 1), (1, -1), (0, 1)]);
    let expected = gens[0].compose(&gens[1].inverse()).unwrap().compose(&gens[0]).unwrap();
    assert_eq!(w, expected);
    assert_eq!(oracle.pow(&gens[1], -2), gens[1].inverse().compose(&gens[1].inverse()).unwrap());
}

fn arb_dihedral() -> impl Strategy<Value = Dihedral> {
    (-100i64..=100, any::<bool>()).prop_map(|(t, flip)| Dihedral { t, flip })
}

fn arb_wreath() -> impl Strategy<Value = WreathElem> {
    (proptest::collection::vec(-9i64..=9, 5), 0usize..5)
        .prop_map(|(lamps, k)| CyclicWreath::new(5, 1).element(lamps, k))
}

fn arb_word() -> impl Strategy<Value = Vec<(usize, i8)>> {
    proptest::collection::vec((0usize..2, prop_oneof![Just(1i8), Just(-1i8)]), 0..12)
}

proptest! {
    #[test]
    fn dihedral_group_laws(a in arb_dihedral(), b in arb_dihedral(), c in arb_dihedral(), x in -50i64..50) {
        let o = InfiniteDihedral;
        prop_assert_eq!(o.mul(&o.mul(&a, &b), &c), o.mul(&a, &o.mul(&b, &c)));
        prop_assert_eq!(o.mul(&a, &o.inv(&a)), o.identity());
        prop_assert_eq!(o.mul(&a, &b).apply(x), a.apply(b.apply(x)));
    }

    #[test]
    fn wreath_group_laws(a in arb_wreath(), b in arb_wreath(), c in arb_wreath()) {
        let o = CyclicWreath::new(5, 1);
        prop_assert_eq!(o.mul(&o.mul(&a, &b), &c), o.mul(&a, &o.mul(&b, &c)));
        prop_assert_eq!(o.mul(&o.inv(&a), &a), o.identity());
    }

    #[test]
    fn eval_word_is_a_homomorphism(u in arb_word(), v in arb_word()) {
        let o = CyclicWreath::new(5, 1);
        let uv: Vec<_> = u.iter().chain(&v).copied().collect();
        prop_assert_eq!(o.eval_word(&uv), o.mul(&o.eval_word(&u), &o.eval_word(&v)));
        let d = InfiniteDihedral;
        prop_assert_eq!(d.eval_word(&uv), d.mul(&d.eval_word(&u), &d.eval_word(&v)));
    }

    #[test]
    fn pow_matches_repeated_product(a in arb_dihedral(), n in -20i64..20) {
        let o = InfiniteDihedral;
        let step = if n < 0 { o.inv(&a) } else { a };
        let naive = (0..n.abs()).fold(o.identity(), |acc, _| o.mul(&acc, &step));
        prop_assert_eq!(o.pow(&a, n), naive);
    }

    #[test]
    fn homogenization_bracket(g in -60i64..60, n in 1u32..300) {
        let q = parity_perturbed();
        let h = homogenize_estimate(&Integers, &q, &g, n, &rat(2)).unwrap();
        prop_assert!(h.bracket_holds);
    }

    #[test]
    fn integer_homomorphisms_have_zero_defect(c in -20i64..20) {
        let q = Quasimorphism::new("c k", move |k: &i64| rat(c * k));
        prop_assert_eq!(defect_estimate(&Integers, &q, &int_pairs(8)), rat(0));
    }

    #[test]
    fn extension_restricts_to_beta(t in -200i64..200, s in -20i64..20) {
        let beta = parity_perturbed();
        let phi = quasicocycle_extend(&beta, Dihedral::reflection(s)).unwrap();
        prop_assert_eq!(phi.phi(&Dihedral::translation(t)), beta.eval(&t));
    }
}
