//! Quasimorphisms, their defects and homogenizations, Busemann estimates,
//! quasi-line generating sets, ε-quasicocycles and the wreath lift.

use super::oracle::{CyclicWreath, Dihedral, GroupOracle, InfiniteDihedral, WreathElem};
use super::{QuasiError, Result};
use crate::hypgraph::{translation_length_estimate, DistanceMatrix, GraphMap};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn as_text<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

type Eval<E> = Arc<dyn Fn(&E) -> BigRational + Send + Sync>;

/// A real-valued function on a group, evaluated exactly.
#[derive(Clone)]
pub struct Quasimorphism<E> {
    name: String,
    eval: Eval<E>,
    claimed_defect: Option<BigRational>,
}

impl<E> Quasimorphism<E> {
    pub fn new(name: impl Into<String>, f: impl Fn(&E) -> BigRational + Send + Sync + 'static) -> Self {
        Quasimorphism { name: name.into(), eval: Arc::new(f), claimed_defect: None }
    }

    pub fn with_claimed_defect(mut self, d: BigRational) -> Self {
        self.claimed_defect = Some(d);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn claimed_defect(&self) -> Option<&BigRational> {
        self.claimed_defect.as_ref()
    }

    pub fn eval(&self, g: &E) -> BigRational {
        (self.eval)(g)
    }
}

impl<E> fmt::Debug for Quasimorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quasimorphism").field("name", &self.name).field("claimed_defect", &self.claimed_defect).finish()
    }
}

/// `k ↦ k` on the integers.
pub fn integer_identity() -> Quasimorphism<i64> {
    Quasimorphism::new("id", |k: &i64| rat(*k)).with_claimed_defect(rat(0))
}

/// `k ↦ k + (k mod 2)`, with `k mod 2 ∈ {0, 1}`.
pub fn parity_perturbed() -> Quasimorphism<i64> {
    Quasimorphism::new("k + (k mod 2)", |k: &i64| rat(k + k.rem_euclid(2))).with_claimed_defect(rat(2))
}

pub fn zero_map<E>() -> Quasimorphism<E> {
    Quasimorphism::new("0", |_: &E| BigRational::zero()).with_claimed_defect(rat(0))
}

/// All ordered pairs from a ball.
pub fn ball_pairs<O: GroupOracle>(oracle: &O, radius: u32) -> Vec<(O::Elem, O::Elem)> {
    let ball = oracle.ball(radius);
    ball.iter().flat_map(|a| ball.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// `max |q(gh) - q(g) - q(h)|` over the pairs: a lower bound for the defect.
pub fn defect_estimate<O: GroupOracle>(
    oracle: &O,
    q: &Quasimorphism<O::Elem>,
    pairs: &[(O::Elem, O::Elem)],
) -> BigRational {
    pairs
        .iter()
        .map(|(g, h)| (q.eval(&oracle.mul(g, h)) - q.eval(g) - q.eval(h)).abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Whether the sampled defect respects the claimed bound, if any.
pub fn respects_claim<O: GroupOracle>(
    oracle: &O,
    q: &Quasimorphism<O::Elem>,
    pairs: &[(O::Elem, O::Elem)],
) -> Option<bool> {
    q.claimed_defect().map(|d| defect_estimate(oracle, q, pairs) <= *d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homogenization {
    pub n: u32,
    /// `q(g^N) / N`.
    #[serde(serialize_with = "as_text")]
    pub estimate: BigRational,
    #[serde(serialize_with = "as_text")]
    pub q_g: BigRational,
    /// `|estimate - q(g)|`, compared with the supplied defect.
    #[serde(serialize_with = "as_text")]
    pub gap: BigRational,
    pub bracket_holds: bool,
}

pub fn homogenize_estimate<O: GroupOracle>(
    oracle: &O,
    q: &Quasimorphism<O::Elem>,
    g: &O::Elem,
    n: u32,
    defect: &BigRational,
) -> Result<Homogenization> {
    if n == 0 {
        return Err(QuasiError::ZeroIterations);
    }
    let estimate = q.eval(&oracle.pow(g, n as i64)) / rat(n as i64);
    let q_g = q.eval(g);
    let gap = (&estimate - &q_g).abs();
    let bracket_holds = gap <= *defect;
    Ok(Homogenization { n, estimate, q_g, gap, bracket_holds })
}

/// A geodesic segment `x_0, ..., x_N` standing in for a ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySpec {
    vertices: Vec<usize>,
}

impl RaySpec {
    /// Requires `d(x_0, x_n) = n` for every `n`.
    pub fn new(dm: &DistanceMatrix, vertices: Vec<usize>) -> Result<Self> {
        let Some(&x0) = vertices.first() else {
            return Err(QuasiError::EmptyRay);
        };
        for (i, &v) in vertices.iter().enumerate() {
            if v >= dm.n() || dm.get(x0, v) as usize != i {
                return Err(QuasiError::NotGeodesic(i));
            }
        }
        Ok(RaySpec { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BusemannReport {
    /// `d(g x_0, x_N) - d(x_0, x_N)`.
    pub value: i64,
    /// `(n, d(g x_0, x_n) - n)` for `n` in `[N/2, N]`.
    pub tail: Vec<(usize, i64)>,
    /// The tail is constant.
    pub stable: bool,
}

pub fn busemann_estimate(dm: &DistanceMatrix, ray: &RaySpec, g: &GraphMap) -> Result<BusemannReport> {
    let xs = ray.vertices();
    let x0 = xs[0];
    let gx0 = g.apply(x0).filter(|&v| v < dm.n()).ok_or(QuasiError::OutsideGraph(x0))?;
    let big_n = ray.len();
    let tail: Vec<(usize, i64)> = (big_n / 2..=big_n).map(|n| (n, dm.get(gx0, xs[n]) as i64 - n as i64)).collect();
    let value = tail.last().expect("nonempty tail").1;
    let stable = tail.iter().all(|&(_, v)| v == value);
    Ok(BusemannReport { value, tail, stable })
}

#[derive(Debug, Clone)]
pub struct QuasiLineReport<E> {
    /// `X ∩ ball(R)` with `X = {g : |p(g)| < C}`.
    pub generators: Vec<E>,
    pub defect: BigRational,
    /// `|g|_X` over `X ∪ X⁻¹` for every reached ball element, computed
    /// inside the ball.
    pub word_lengths: Vec<(E, u32)>,
    pub unreached: usize,
    /// Affine constants with `|p|/a - b <= |g|_X <= a|p| + b` on the ball;
    /// `a` is the integer in `1..=16` minimizing `a + b`.
    pub a: BigRational,
    pub b: BigRational,
    values: Vec<BigRational>,
}

impl<E> QuasiLineReport<E> {
    /// Whether `(a, b)` are valid affine constants on the ball.
    pub fn satisfies(&self, a: &BigRational, b: &BigRational) -> bool {
        self.word_lengths.iter().zip(&self.values).all(|((_, len), p)| {
            let len = rat(*len as i64);
            let p = p.abs();
            &p / a - b <= len && len <= a * &p + b
        })
    }
}

/// The generating set `X_{p,C}` restricted to a ball, after checking the
/// hypotheses `D(p) <= C/2` and `0 < p(g) < C/2` for some `g` on the ball.
pub fn quasiline_generators<O: GroupOracle>(
    oracle: &O,
    p: &Quasimorphism<O::Elem>,
    c: &BigRational,
    radius: u32,
) -> Result<QuasiLineReport<O::Elem>> {
    let ball = oracle.ball(radius);
    let values: Vec<BigRational> = ball.iter().map(|g| p.eval(g)).collect();
    let half = c / rat(2);
    let pairs: Vec<(O::Elem, O::Elem)> =
        ball.iter().flat_map(|a| ball.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let defect = defect_estimate(oracle, p, &pairs);
    if !values.iter().any(|v| v.is_positive() && *v < half) {
        return Err(QuasiError::NoSmallValue(c.to_string()));
    }
    if defect > half {
        return Err(QuasiError::DefectTooLarge { defect: defect.to_string(), c: c.to_string() });
    }
    let e = oracle.identity();
    let generators: Vec<O::Elem> =
        ball.iter().zip(&values).filter(|(g, v)| v.abs() < *c && **g != e).map(|(g, _)| g.clone()).collect();

    let mut letters = generators.clone();
    for x in &generators {
        let y = oracle.inv(x);
        if !letters.contains(&y) {
            letters.push(y);
        }
    }
    let index: HashMap<&O::Elem, usize> = ball.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut lens: Vec<Option<u32>> = vec![None; ball.len()];
    let start = index[&e];
    lens[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        let li = lens[i].expect("queued");
        for x in &letters {
            if let Some(&j) = index.get(&oracle.mul(&ball[i], x)) {
                if lens[j].is_none() {
                    lens[j] = Some(li + 1);
                    queue.push_back(j);
                }
            }
        }
    }
    let mut word_lengths = Vec::new();
    let mut reached_values = Vec::new();
    for ((g, len), v) in ball.iter().zip(&lens).zip(&values) {
        if let Some(len) = len {
            word_lengths.push((g.clone(), *len));
            reached_values.push(v.clone());
        }
    }
    let unreached = ball.len() - word_lengths.len();

    let mut best: Option<(BigRational, BigRational)> = None;
    for a in (1..=16).map(rat) {
        let b = word_lengths
            .iter()
            .zip(&reached_values)
            .map(|((_, len), p)| {
                let len = rat(*len as i64);
                let p = p.abs();
                let lower = &p / &a - &len;
                let upper = &len - &a * &p;
                lower.max(upper)
            })
            .fold(BigRational::zero(), |m, x| m.max(x));
        if best.as_ref().is_none_or(|(ba, bb)| &a + &b < ba + bb) {
            best = Some((a, b));
        }
    }
    let (a, b) = best.expect("nonempty range");
    Ok(QuasiLineReport { generators, defect, word_lengths, unreached, a, b, values: reached_values })
}

type Sign<E> = Arc<dyn Fn(&E) -> i8 + Send + Sync>;

/// `φ` twisted by a sign character `ε`.
#[derive(Clone)]
pub struct EpsQuasicocycle<E> {
    eps: Sign<E>,
    phi: Eval<E>,
}

impl<E> EpsQuasicocycle<E> {
    pub fn new(
        eps: impl Fn(&E) -> i8 + Send + Sync + 'static,
        phi: impl Fn(&E) -> BigRational + Send + Sync + 'static,
    ) -> Self {
        EpsQuasicocycle { eps: Arc::new(eps), phi: Arc::new(phi) }
    }

    pub fn eps(&self, g: &E) -> i8 {
        (self.eps)(g)
    }

    pub fn phi(&self, g: &E) -> BigRational {
        (self.phi)(g)
    }

    /// `max |φ(gh) - φ(g) - ε(g) φ(h)|` over the pairs.
    pub fn eps_defect<O: GroupOracle<Elem = E>>(&self, oracle: &O, pairs: &[(E, E)]) -> BigRational {
        pairs
            .iter()
            .map(|(g, h)| {
                let twisted = rat(self.eps(g) as i64) * self.phi(h);
                (self.phi(&oracle.mul(g, h)) - self.phi(g) - twisted).abs()
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eps_is_multiplicative<O: GroupOracle<Elem = E>>(&self, oracle: &O, pairs: &[(E, E)]) -> bool {
        pairs.iter().all(|(g, h)| self.eps(&oracle.mul(g, h)) == self.eps(g) * self.eps(h))
    }
}

/// Extends `β` on the translation subgroup `K` of the infinite dihedral
/// group by `φ(k s^i) = β(k)`, for a reflection `s`.
pub fn quasicocycle_extend(beta: &Quasimorphism<i64>, s: Dihedral) -> Result<EpsQuasicocycle<Dihedral>> {
    if !s.flip {
        return Err(QuasiError::InKernel);
    }
    let beta = beta.clone();
    let oracle = InfiniteDihedral;
    let s_inv = oracle.inv(&s);
    Ok(EpsQuasicocycle::new(
        |g: &Dihedral| g.eps(),
        move |g: &Dihedral| {
            let k = if g.flip { oracle.mul(g, &s_inv) } else { *g };
            beta.eval(&k.t)
        },
    ))
}

/// `(a, t) ↦ Σ_{s ∈ B·r} φ(a_s)`.
pub fn wreath_lift(phi: &Quasimorphism<i64>, model: &CyclicWreath, r: usize) -> Quasimorphism<WreathElem> {
    let orbit = model.orbit(r);
    let phi = phi.clone();
    let name = format!("lift of {} over {:?}", phi.name(), orbit);
    let claimed = phi.claimed_defect().map(|d| d * rat(orbit.len() as i64));
    let q = Quasimorphism::new(name, move |g: &WreathElem| {
        orbit.iter().map(|&s| phi.eval(&g.lamps[s])).fold(BigRational::zero(), |acc, x| acc + x)
    });
    match claimed {
        Some(d) => q.with_claimed_defect(d),
        None => q,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    /// Iterations actually used.
    pub n: u32,
    /// `q(g^n) / n` from the Busemann estimate of `g^n`.
    #[serde(serialize_with = "as_text")]
    pub beta_hat: BigRational,
    /// `d(x, g^n x) / n`.
    #[serde(serialize_with = "as_text")]
    pub ell_hat: BigRational,
    pub beta_nonzero: bool,
    pub ell_positive: bool,
    pub consistent: bool,
}

/// Compares the homogenized Busemann estimate with the asymptotic
/// translation length at the largest `n <= n_max` where `g^n` is defined
/// at the basepoint; both are called nonzero above `tolerance`.
pub fn loxodromic_link_check(
    dm: &DistanceMatrix,
    ray: &RaySpec,
    g: &GraphMap,
    n_max: u32,
    tolerance: &BigRational,
) -> Result<LinkReport> {
    let x0 = ray.vertices()[0];
    let tr = translation_length_estimate(dm, g, x0, n_max)?;
    let n = tr.distances.len() as u32;
    if n == 0 {
        return Err(QuasiError::OutsideGraph(x0));
    }
    let gn = g.pow(n);
    let bus = busemann_estimate(dm, ray, &gn)?;
    let beta_hat = ratio(bus.value, n as i64);
    let ell_hat = ratio(*tr.distances.last().expect("n > 0") as i64, n as i64);
    let beta_nonzero = beta_hat.abs() > *tolerance;
    let ell_positive = ell_hat > *tolerance;
    Ok(LinkReport { n, beta_hat, ell_hat, beta_nonzero, ell_positive, consistent: beta_nonzero == ell_positive })
}
