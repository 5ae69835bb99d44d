//! The quasimorphism laboratory suite.

use crate::config::RunConfig;
use crate::report::Report;
use crate::suites::{condition, Outcome};
use crate::CliError;
use nlkit::hypgraph::{all_distances, binary_tree, cycle, path, DistanceMatrix, GraphMap};
use nlkit::quasi::{
    ball_pairs, busemann_estimate, defect_estimate, homogenize_estimate, integer_identity, loxodromic_link_check,
    parity_perturbed, quasicocycle_extend, quasiline_generators, rat, ratio, wreath_lift, CyclicWreath, Dihedral,
    InfiniteDihedral, Integers, Quasimorphism, RaySpec,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::str::FromStr;

fn int_pairs(r: i64) -> Vec<(i64, i64)> {
    (-r..=r).flat_map(|a| (-r..=r).map(move |b| (a, b))).collect()
}

fn expect_eq(what: &str, got: &BigRational, want: &BigRational) -> Outcome {
    if got == want {
        Outcome::Pass(format!("{what} = {got}"))
    } else {
        Outcome::Fail(format!("{what} = {got}, expected {want}"))
    }
}

fn expect_le(what: &str, got: &BigRational, bound: &BigRational) -> Outcome {
    if got <= bound {
        Outcome::Pass(format!("{what} = {got} <= {bound}"))
    } else {
        Outcome::Fail(format!("{what} = {got} exceeds {bound}"))
    }
}

pub fn parse_tolerance(config: &RunConfig) -> Result<BigRational, CliError> {
    match &config.tolerance {
        None => Ok(ratio(1, 4)),
        Some(t) => BigRational::from_str(t.trim())
            .ok()
            .filter(|x| *x >= rat(0))
            .ok_or_else(|| CliError::Usage(format!("tolerance `{t}` is not a nonnegative rational"))),
    }
}

/// Prepends `bit` to the root path of every vertex of a heap-ordered
/// binary tree; undefined where the image leaves the tree.
pub fn spine_shift(depth: u32, bit: usize) -> GraphMap {
    let n = (1usize << (depth + 1)) - 1;
    GraphMap::from_fn(n, |v| {
        let level = (usize::BITS - (v + 1).leading_zeros() - 1) as usize;
        let w = (1 << (level + 1)) - 1 + (bit << level) + (v + 1 - (1 << level));
        (w < n).then_some(w)
    })
}

fn shift(n: usize, k: usize) -> GraphMap {
    GraphMap::from_fn(n, move |v| (v + k < n).then_some(v + k))
}

fn busemann_cases() -> Result<Vec<Outcome>, CliError> {
    let hyp = |e: nlkit::hypgraph::HypError| CliError::Usage(e.to_string());
    let p = all_distances(&path(101)).map_err(hyp)?;
    let ray = RaySpec::new(&p, (0..=100).collect()).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = vec![match busemann_estimate(&p, &ray, &shift(101, 2)) {
        Ok(b) if b.value == -2 && b.stable => Outcome::Pass("path shift by 2: -2, stable".into()),
        Ok(b) => Outcome::Fail(format!("path shift by 2: {} (stable {})", b.value, b.stable)),
        Err(e) => Outcome::Fail(e.to_string()),
    }];
    out.push(match busemann_estimate(&p, &ray, &GraphMap::identity(101)) {
        Ok(b) if b.value == 0 => Outcome::Pass("identity: 0".into()),
        Ok(b) => Outcome::Fail(format!("identity: {}", b.value)),
        Err(e) => Outcome::Fail(e.to_string()),
    });
    let depth = 10;
    let tree = binary_tree(depth);
    let dm = all_distances(&tree).map_err(hyp)?;
    let spine: Vec<usize> = (0..=depth).map(|k| (1usize << k) - 1).collect();
    let ray = RaySpec::new(&dm, spine.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    for bit in [0, 1] {
        let g = spine_shift(depth, bit);
        out.push(match busemann_estimate(&dm, &ray, &g) {
            Ok(b) => {
                let gx0 = g.apply(0).expect("root has an image");
                let bfs = tree.bfs(gx0);
                let direct = bfs[spine[spine.len() - 1]].expect("connected") as i64 - (spine.len() - 1) as i64;
                if b.value == direct {
                    Outcome::Pass(format!("tree spine shift ({bit}): {} matches BFS", b.value))
                } else {
                    Outcome::Fail(format!("tree spine shift ({bit}): {} but BFS gives {direct}", b.value))
                }
            }
            Err(e) => Outcome::Fail(e.to_string()),
        });
    }
    Ok(out)
}

fn loxodromic_cases(tol: &BigRational) -> Result<Vec<Outcome>, CliError> {
    let hyp = |e: nlkit::hypgraph::HypError| CliError::Usage(e.to_string());
    let ray_err = |e: nlkit::quasi::QuasiError| CliError::Usage(e.to_string());
    let verdict = |name: &str, dm: &DistanceMatrix, ray: &RaySpec, g: &GraphMap, n: u32| match loxodromic_link_check(
        dm, ray, g, n, tol,
    ) {
        Ok(r) if r.consistent => Outcome::Pass(format!("{name}: beta {} ell {}", r.beta_hat, r.ell_hat)),
        Ok(r) => Outcome::Fail(format!("{name}: beta {} but ell {}", r.beta_hat, r.ell_hat)),
        Err(e) => Outcome::Fail(format!("{name}: {e}")),
    };
    let p = all_distances(&path(201)).map_err(hyp)?;
    let ray = RaySpec::new(&p, (0..=200).collect()).map_err(ray_err)?;
    let c = all_distances(&cycle(12).map_err(hyp)?).map_err(hyp)?;
    let cray = RaySpec::new(&c, (0..=6).collect()).map_err(ray_err)?;
    let rot = GraphMap::total((0..12).map(|v| (v + 5) % 12).collect());
    Ok(vec![
        verdict("path shift by 2", &p, &ray, &shift(201, 2), 50),
        verdict("identity", &p, &ray, &GraphMap::identity(201), 50),
        verdict("cycle rotation of order 12", &c, &cray, &rot, 48),
    ])
}

pub fn run_quasi_lab(config: &RunConfig, budget: usize) -> Result<Report, CliError> {
    let seed = config.seed;
    let tol = parse_tolerance(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs20 = int_pairs(20);
    let mut conditions = Vec::new();

    let lamp_sum = Quasimorphism::new("lamp sum", |w: &nlkit::quasi::WreathElem| rat(w.lamps.iter().sum()));
    let wreath = CyclicWreath::new(5, 1);
    let wreath_ball = ball_pairs(&wreath, 2);
    let homs = vec![
        expect_eq("identity on Z, |a|,|b| <= 20", &defect_estimate(&Integers, &integer_identity(), &pairs20), &rat(0)),
        expect_eq(
            "3k on Z, |a|,|b| <= 20",
            &defect_estimate(&Integers, &Quasimorphism::new("3k", |k: &i64| rat(3 * k)), &pairs20),
            &rat(0),
        ),
        expect_eq("lamp sum on Z wr Z/5, ball 2", &defect_estimate(&wreath, &lamp_sum, &wreath_ball), &rat(0)),
    ];
    conditions.push(condition("defect of homomorphisms", homs, true));

    let q = parity_perturbed();
    let d_hat = defect_estimate(&Integers, &q, &pairs20);
    conditions.push(condition(
        "defect of k + (k mod 2)",
        vec![
            expect_eq("sampled defect, |a|,|b| <= 20", &d_hat, &rat(2)),
            expect_eq("defect at (1,1)", &defect_estimate(&Integers, &q, &[(1, 1)]), &rat(2)),
        ],
        true,
    ));

    let homog = (0..budget)
        .map(|_| {
            let g = rng.gen_range(-60i64..=60);
            let n = rng.gen_range(1u32..=300);
            match homogenize_estimate(&Integers, &q, &g, n, &d_hat) {
                Ok(h) if h.bracket_holds => Outcome::Pass(format!("g = {g}, N = {n}: {}", h.estimate)),
                Ok(h) => Outcome::Fail(format!("g = {g}, N = {n}: |{} - {}| > {d_hat}", h.estimate, h.q_g)),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        })
        .collect();
    conditions.push(condition("homogenization bracket", homog, false));

    let qline = match quasiline_generators(&Integers, &integer_identity(), &rat(3), 50) {
        Ok(rep) => {
            let mut gens = rep.generators.clone();
            gens.sort_unstable();
            let mut out: Vec<Outcome> = rep
                .word_lengths
                .iter()
                .map(|&(k, len)| {
                    let want = (k.abs() + 1) / 2;
                    if len as i64 == want {
                        Outcome::Pass(format!("|{k}|_X = {len}"))
                    } else {
                        Outcome::Fail(format!("|{k}|_X = {len}, expected {want}"))
                    }
                })
                .collect();
            out.push(if gens == [-2, -1, 1, 2] && rep.satisfies(&rat(2), &rat(1)) {
                Outcome::Pass(format!("X = {gens:?}, fitted a = {}, b = {}", rep.a, rep.b))
            } else {
                Outcome::Fail(format!("X = {gens:?}; bounds (2, 1) hold: {}", rep.satisfies(&rat(2), &rat(1))))
            });
            out
        }
        Err(e) => vec![Outcome::Fail(e.to_string())],
    };
    conditions.push(condition("quasi-line on Z, C = 3", qline, true));

    let dball: Vec<Dihedral> = (-15..=15).flat_map(|t| [Dihedral::translation(t), Dihedral::reflection(t)]).collect();
    let dpairs: Vec<(Dihedral, Dihedral)> = dball.iter().flat_map(|a| dball.iter().map(move |b| (*a, *b))).collect();
    let s = Dihedral::reflection(0);
    let cocycle = vec![
        cocycle_case("regular case", &integer_identity(), s, &dpairs, &rat(0)),
        cocycle_case("perturbed", &q, s, &dpairs, &(rat(2) * &d_hat)),
    ];
    conditions.push(condition("quasicocycle on the infinite dihedral group", cocycle, true));

    let random_elem = |rng: &mut ChaCha8Rng| {
        let lamps = (0..5).map(|_| rng.gen_range(-4i64..=4)).collect();
        wreath.element(lamps, rng.gen_range(0..5))
    };
    let wpairs: Vec<_> = (0..10 * budget).map(|_| (random_elem(&mut rng), random_elem(&mut rng))).collect();
    let small: Vec<_> = (0..32u32)
        .flat_map(|mask| (0..5).map(move |k| (mask, k)))
        .map(|(mask, k)| wreath.element((0..5).map(|s| ((mask >> s) & 1) as i64).collect(), k))
        .collect();
    let small_pairs: Vec<_> = small.iter().flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone()))).collect();
    conditions.push(condition(
        "wreath lift",
        vec![
            expect_eq(
                &format!("lift of identity, {} random pairs", wpairs.len()),
                &defect_estimate(&wreath, &wreath_lift(&integer_identity(), &wreath, 0), &wpairs),
                &rat(0),
            ),
            expect_le(
                "lift of k + (k mod 2), 0/1 lamps",
                &defect_estimate(&wreath, &wreath_lift(&q, &wreath, 0), &small_pairs),
                &(rat(5) * &d_hat),
            ),
        ],
        false,
    ));

    conditions.push(condition("Busemann estimates", busemann_cases()?, false));
    conditions.push(condition("loxodromic link", loxodromic_cases(&tol)?, false));

    let mut report = Report::new("quasi-lab", "Z, infinite dihedral, Z wr Z/5".into(), seed, budget, conditions);
    report.data.insert("tolerance".into(), tol.to_string().into());
    report.data.insert("defect_estimate".into(), d_hat.to_string().into());
    Ok(report)
}

/// Extends `beta` through the reflection `s` and bounds the ε-defect.
fn cocycle_case(
    name: &str,
    beta: &Quasimorphism<i64>,
    s: Dihedral,
    pairs: &[(Dihedral, Dihedral)],
    bound: &BigRational,
) -> Outcome {
    let dih = InfiniteDihedral;
    match quasicocycle_extend(beta, s) {
        Ok(phi) if !phi.eps_is_multiplicative(&dih, pairs) => {
            Outcome::Fail(format!("{name}: eps is not multiplicative"))
        }
        Ok(phi) => expect_le(&format!("{name}: eps-defect"), &phi.eps_defect(&dih, pairs), bound),
        Err(e) => Outcome::Fail(format!("{name}: {e}")),
    }
}
