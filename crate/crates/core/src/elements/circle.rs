//! Thompson's group `T`: dyadic piecewise-linear homeomorphisms of `ℝ/ℤ`
//! with slopes in `2^ℤ`.

use super::{Dyadic, ElementError, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Stored by its knots `(x_i, F(x_i))` for a lift `F` with `F(x + 1) = F(x) + 1`,
/// `0 <= x_0 < x_1 < ... < 1` and `F(x_0) ∈ [0, 1)`. Knots are exactly the
/// breakpoints, except that a rotation keeps the single knot `x = 0`, so the
/// representation is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CircleMap {
    knots: Vec<(Dyadic, Dyadic)>,
    /// `log2` of the slope on `[x_i, x_{i+1})`.
    slopes: Vec<i64>,
}

impl CircleMap {
    pub fn identity() -> Self {
        CircleMap::rotation(&Dyadic::zero())
    }

    pub fn rotation(t: &Dyadic) -> Self {
        CircleMap { knots: vec![(Dyadic::zero(), t.frac())], slopes: vec![0] }
    }

    /// The map through the given points of the lift graph, linear in between.
    /// Points may be given in any order and with any integer offsets.
    pub fn from_points(points: Vec<(Dyadic, Dyadic)>) -> Result<Self> {
        let mut pts: Vec<(Dyadic, Dyadic)> = points
            .into_iter()
            .map(|(x, y)| {
                let n = Dyadic::new(x.floor(), 0);
                (&x - &n, &y - &n)
            })
            .collect();
        pts.sort();
        pts.dedup();
        if pts.is_empty() || pts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ElementError::NotMonotone);
        }
        let slopes = segment_slopes(&pts)?;
        let m = pts.len();
        let keep: Vec<usize> = (0..m).filter(|&i| slopes[(i + m - 1) % m] != slopes[i]).collect();
        if keep.is_empty() {
            let y0 = &pts[0].1 - &pts[0].0;
            return Ok(CircleMap::rotation(&y0));
        }
        let mut knots: Vec<(Dyadic, Dyadic)> = keep.iter().map(|&i| pts[i].clone()).collect();
        let shift = Dyadic::new(knots[0].1.floor(), 0);
        for k in &mut knots {
            k.1 = &k.1 - &shift;
        }
        let slopes = segment_slopes(&knots)?;
        Ok(CircleMap { knots, slopes })
    }

    pub fn knots(&self) -> &[(Dyadic, Dyadic)] {
        &self.knots
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        if self.is_rotation() {
            return Vec::new();
        }
        self.knots.iter().map(|k| k.0.clone()).collect()
    }

    pub fn log2_slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn is_rotation(&self) -> bool {
        self.slopes.iter().all(|&s| s == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_rotation() && self.knots[0].1.is_zero()
    }

    /// `F(x)` on the lift.
    pub fn eval_lift(&self, x: &Dyadic) -> Dyadic {
        let n = Dyadic::new(x.floor(), 0);
        let t = x - &n;
        let idx = self.knots.partition_point(|k| k.0 <= t);
        let (base_x, base_y, k) = if idx == 0 {
            let (lx, ly) = self.knots.last().expect("nonempty");
            (lx - &Dyadic::one(), ly - &Dyadic::one(), *self.slopes.last().expect("nonempty"))
        } else {
            let (kx, ky) = &self.knots[idx - 1];
            (kx.clone(), ky.clone(), self.slopes[idx - 1])
        };
        &(&base_y + &(&t - &base_x).mul_pow2(k)) + &n
    }

    /// `f(x)` in `[0, 1)`.
    pub fn eval(&self, x: &Dyadic) -> Dyadic {
        self.eval_lift(x).frac()
    }

    pub fn inverse(&self) -> Self {
        let pts = self.knots.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        CircleMap::from_points(pts).expect("inverse of a valid map")
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &CircleMap) -> Self {
        let ginv = g.inverse();
        let mut xs: Vec<Dyadic> = g.knots.iter().map(|k| k.0.clone()).collect();
        xs.extend(self.knots.iter().map(|k| ginv.eval(&k.0)));
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = self.eval_lift(&g.eval_lift(&x));
                (x, y)
            })
            .collect();
        CircleMap::from_points(pts).expect("composition of valid maps")
    }

    /// The map with `f(src_i) = dst_i`, linear-by-halving on each arc.
    /// Both tuples must be positively cyclically ordered in `[0, 1)`.
    pub fn from_ordered_tuples(src: &[Dyadic], dst: &[Dyadic]) -> Result<Self> {
        if src.len() != dst.len() || src.is_empty() {
            return Err(ElementError::NotCyclicallyOrdered);
        }
        let s = cyclic_lift(src)?;
        let t = cyclic_lift(dst)?;
        if s.len() == 2 {
            return Ok(CircleMap::rotation(&(&t[0] - &s[0])));
        }
        let mut pts = Vec::new();
        for i in 0..s.len() - 1 {
            pts.extend(interval_map_points(&s[i], &s[i + 1], &t[i], &t[i + 1]));
        }
        CircleMap::from_points(pts)
    }

    /// Random element through `m <= size` random cyclically ordered pairs.
    pub fn random<R: Rng>(rng: &mut R, size: usize) -> Self {
        if size <= 1 {
            return CircleMap::identity();
        }
        let m = rng.gen_range(1..=size.min(8));
        let src = random_sorted_dyadics(rng, m);
        let mut dst = random_sorted_dyadics(rng, m);
        let rot = rng.gen_range(0..m);
        dst.rotate_left(rot);
        CircleMap::from_ordered_tuples(&src, &dst).expect("ordered tuples")
    }
}

fn random_sorted_dyadics<R: Rng>(rng: &mut R, m: usize) -> Vec<Dyadic> {
    let exp = 5;
    let mut v: Vec<i64> = Vec::new();
    while v.len() < m {
        let x = rng.gen_range(0..1i64 << exp);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v.sort();
    v.into_iter().map(|x| Dyadic::new(x, exp)).collect()
}

/// Slopes of consecutive segments of sorted `pts` (cyclically closed).
fn segment_slopes(pts: &[(Dyadic, Dyadic)]) -> Result<Vec<i64>> {
    let m = pts.len();
    let one = Dyadic::one();
    (0..m)
        .map(|i| {
            let (x0, y0) = &pts[i];
            let (x1, y1) = if i + 1 < m { pts[i + 1].clone() } else { (&pts[0].0 + &one, &pts[0].1 + &one) };
            let (dx, dy) = (&x1 - x0, &y1 - y0);
            if dy.is_negative() || dy.is_zero() {
                return Err(ElementError::NotMonotone);
            }
            dy.ratio_log2(&dx).ok_or_else(|| ElementError::BadSlope(format!("{dy} / {dx}")))
        })
        .collect()
}

/// Increasing lift `s_0 < ... < s_{m-1} < s_m = s_0 + 1` of a positively
/// cyclically ordered tuple.
fn cyclic_lift(v: &[Dyadic]) -> Result<Vec<Dyadic>> {
    if v.iter().any(|x| !x.is_unit_interval()) {
        return Err(ElementError::NotCyclicallyOrdered);
    }
    let m = v.len();
    let descents = (0..m).filter(|&i| v[(i + 1) % m] <= v[i]).count();
    if m >= 2 && descents != 1 {
        return Err(ElementError::NotCyclicallyOrdered);
    }
    let mut out = Vec::with_capacity(m + 1);
    let mut offset = Dyadic::zero();
    for i in 0..m {
        if i > 0 && v[i] < v[i - 1] {
            offset = &offset + &Dyadic::one();
        }
        out.push(&v[i] + &offset);
    }
    out.push(&v[0] + &Dyadic::one());
    Ok(out)
}

/// Binary expansion of a positive dyadic, largest piece first.
fn power_pieces(len: &Dyadic) -> Vec<Dyadic> {
    let num = len.numerator();
    let exp = len.exponent();
    let bits = num.bits();
    (0..bits).rev().filter(|&j| num.bit(j)).map(|j| Dyadic::one().mul_pow2(j as i64 - exp as i64)).collect()
}

/// Points of a dyadic PL map `[a, b] → [c, d]` with power-of-2 slopes:
/// both lengths are cut into powers of two, the shorter list is refined by
/// halving its largest piece, and pieces are matched in order.
pub fn interval_map_points(a: &Dyadic, b: &Dyadic, c: &Dyadic, d: &Dyadic) -> Vec<(Dyadic, Dyadic)> {
    let mut p = power_pieces(&(b - a));
    let mut q = power_pieces(&(d - c));
    while p.len() != q.len() {
        let short = if p.len() < q.len() { &mut p } else { &mut q };
        let (i, _) = short.iter().enumerate().rev().max_by(|x, y| x.1.cmp(y.1)).expect("nonempty");
        let half = short[i].mul_pow2(-1);
        short[i] = half.clone();
        short.insert(i, half);
    }
    let mut out = vec![(a.clone(), c.clone())];
    let (mut x, mut y) = (a.clone(), c.clone());
    for (dp, dq) in p.iter().zip(&q) {
        x = &x + dp;
        y = &y + dq;
        out.push((x.clone(), y.clone()));
    }
    out
}

impl fmt::Display for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, ((x, y), k)) in self.knots.iter().zip(&self.slopes).enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{x}->{y} x2^{k}")?;
        }
        write!(f, "]")
    }
}

/// Serialized breakpoint table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleText {
    x: Vec<Dyadic>,
    y: Vec<Dyadic>,
    log2_slope: Vec<i64>,
}

impl Serialize for CircleMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CircleText {
            x: self.knots.iter().map(|k| k.0.clone()).collect(),
            y: self.knots.iter().map(|k| k.1.clone()).collect(),
            log2_slope: self.slopes.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CircleMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let t = CircleText::deserialize(deserializer)?;
        if t.x.len() != t.y.len() {
            return Err(serde::de::Error::custom("x and y lengths differ"));
        }
        let map = CircleMap::from_points(t.x.into_iter().zip(t.y).collect()).map_err(serde::de::Error::custom)?;
        if map.slopes != t.log2_slope {
            return Err(serde::de::Error::custom("slope table inconsistent with knots"));
        }
        Ok(map)
    }
}
