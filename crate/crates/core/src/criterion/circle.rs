//! Transitivity and gluing for Thompson's group `T` on dyadic arcs.

use super::{check, CriterionError, Result};
use crate::elements::{CircleMap, Dyadic, ElementError};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The closed arc running positively from `a` to `b`, both in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicArc {
    pub a: Dyadic,
    pub b: Dyadic,
}

impl DyadicArc {
    pub fn new(a: Dyadic, b: Dyadic) -> Result<Self> {
        if !a.is_unit_interval() || !b.is_unit_interval() || a == b {
            return Err(CriterionError::NotAdmissible(format!("arc [{a}, {b}]")));
        }
        Ok(DyadicArc { a, b })
    }

    pub fn length(&self) -> Dyadic {
        (&self.b - &self.a).frac()
    }

    /// Position of `x` measured from `a`, in `[0, 1)`.
    fn offset(&self, x: &Dyadic) -> Dyadic {
        (x - &self.a).frac()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.offset(x) <= self.length()
    }

    pub fn contains_interior(&self, x: &Dyadic) -> bool {
        let o = self.offset(x);
        !o.is_zero() && o < self.length()
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.a + &self.length().mul_pow2(-1)).frac()
    }

    /// Closed arcs share no point.
    pub fn is_disjoint(&self, other: &DyadicArc) -> bool {
        !self.contains(&other.a) && !other.contains(&self.a)
    }

    /// Image under a circle map (orientation is preserved).
    pub fn image(&self, f: &CircleMap) -> DyadicArc {
        DyadicArc { a: f.eval(&self.a), b: f.eval(&self.b) }
    }
}

impl fmt::Display for DyadicArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

fn positively_ordered(v: &[Dyadic]) -> bool {
    let m = v.len();
    m <= 1 || (0..m).filter(|&i| v[(i + 1) % m] <= v[i]).count() == 1
}

/// `f ∈ T` with `f(src_i) = dst_i`, for tuples of length at most 8.
pub fn circle_ordered_witness(src: &[Dyadic], dst: &[Dyadic]) -> Result<CircleMap> {
    if src.len() != dst.len() {
        return Err(CriterionError::LengthMismatch);
    }
    if src.is_empty() || src.len() > 8 {
        return Err(CriterionError::NotAdmissible(format!("tuple length {}", src.len())));
    }
    let f = CircleMap::from_ordered_tuples(src, dst)?;
    for (s, d) in src.iter().zip(dst) {
        check(f.eval(s) == *d, || format!("{s} is not sent to {d}"))?;
    }
    Ok(f)
}

/// The map agreeing with `g_i` on the arc `[o_i, o_{i+1}]` (indices mod k).
/// Each `g_i` must fix both endpoints of its arc.
pub fn circle_glue(arcs: &[(Dyadic, CircleMap)]) -> Result<CircleMap> {
    let ends: Vec<Dyadic> = arcs.iter().map(|(o, _)| o.clone()).collect();
    if ends.is_empty() {
        return Ok(CircleMap::identity());
    }
    if ends.iter().any(|o| !o.is_unit_interval()) || !positively_ordered(&ends) {
        return Err(ElementError::NotCyclicallyOrdered.into());
    }
    let k = ends.len();
    let one = Dyadic::one();
    let mut pts = Vec::new();
    let mut probes: Vec<(Dyadic, usize)> = Vec::new();
    for (i, (s, g)) in arcs.iter().enumerate() {
        let e_raw = &ends[(i + 1) % k];
        let len = if k == 1 { one.clone() } else { (e_raw - s).frac() };
        let e = s + &len;
        for o in [s, e_raw] {
            if g.eval(o) != *o {
                return Err(ElementError::EndpointNotFixed(o.to_string()).into());
            }
        }
        // Lift of g_i normalized so that s is a fixed point of the lift.
        let off = s - &g.eval_lift(s);
        pts.push((s.clone(), s.clone()));
        let mut inner: Vec<Dyadic> =
            g.knots().iter().map(|(x, _)| s + &(x - s).frac()).filter(|x| *x > *s && *x < e).collect();
        inner.sort();
        for x in &inner {
            pts.push((x.clone(), &g.eval_lift(x) + &off));
        }
        let mut marks = vec![s.clone()];
        marks.extend(inner);
        marks.push(e.clone());
        for w in marks.windows(2) {
            probes.push((w[0].frac(), i));
            probes.push(((&w[0] + &w[1]).mul_pow2(-1).frac(), i));
        }
    }
    let f = CircleMap::from_points(pts)?;
    for (x, i) in probes {
        check(f.eval(&x) == arcs[i].1.eval(&x), || format!("glued map differs from piece {i} at {x}"))?;
    }
    Ok(f)
}

/// Condition (C) for arcs with endpoints in `2^-depth ℤ`: for every proper
/// arc `I`, the open arc `J = (b - ε, a + ε)` with `ε = 2^-(depth+2)` is a
/// proper arc containing the closure of the complement of `I`. Returns the
/// number of arcs checked.
pub fn verify_circle_condition_c(depth: u32) -> Result<usize> {
    let m = 1i64 << depth;
    let eps = Dyadic::new(1, depth + 2);
    let mut count = 0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let arc = DyadicArc::new(Dyadic::new(i, depth), Dyadic::new(j, depth))?;
            let ja = (&arc.b - &eps).frac();
            let jb = (&arc.a + &eps).frac();
            let enclosing = DyadicArc::new(ja, jb)?;
            check(enclosing.contains_interior(&arc.b) && enclosing.contains_interior(&arc.a), || {
                format!("complement of {arc} escapes its enclosing arc")
            })?;
            check(enclosing.length() < Dyadic::one(), || "enclosing arc is the whole circle".into())?;
            count += 1;
        }
    }
    Ok(count)
}

/// Weak triple for `T`: arcs `(M, N, P)` with `gM, hN, P` pairwise disjoint
/// and in the same cyclic order, plus `b` returning them to `(M, N, P)`.
/// Searches arcs of length `2^-D` for `D` up to `max_depth`.
pub fn circle_weak_triple(
    g: &CircleMap,
    h: &CircleMap,
    max_depth: u32,
) -> Result<(DyadicArc, DyadicArc, DyadicArc, CircleMap)> {
    for depth in 3..=max_depth {
        let m = 1i64 << depth;
        let arcs: Vec<DyadicArc> =
            (0..m).map(|k| DyadicArc { a: Dyadic::new(k, depth), b: Dyadic::new(k + 1, depth).frac() }).collect();
        let gi: Vec<DyadicArc> = arcs.iter().map(|x| x.image(g)).collect();
        let hi: Vec<DyadicArc> = arcs.iter().map(|x| x.image(h)).collect();
        for i in 0..arcs.len() {
            for j in 0..arcs.len() {
                if i == j || !arcs[i].is_disjoint(&arcs[j]) || !gi[i].is_disjoint(&hi[j]) {
                    continue;
                }
                for k in 0..arcs.len() {
                    let p = &arcs[k];
                    if !p.is_disjoint(&arcs[i]) || !p.is_disjoint(&arcs[j]) {
                        continue;
                    }
                    if !gi[i].is_disjoint(p) || !hi[j].is_disjoint(p) {
                        continue;
                    }
                    let home = [&arcs[i], &arcs[j], p];
                    let moved = [&gi[i], &hi[j], p];
                    let o_home = positively_ordered(&[home[0].a.clone(), home[1].a.clone(), home[2].a.clone()]);
                    let o_moved = positively_ordered(&[moved[0].a.clone(), moved[1].a.clone(), moved[2].a.clone()]);
                    if o_home != o_moved {
                        continue;
                    }
                    let order: [usize; 3] = if o_home { [0, 1, 2] } else { [0, 2, 1] };
                    let src: Vec<Dyadic> =
                        order.iter().flat_map(|&t| [moved[t].a.clone(), moved[t].b.clone()]).collect();
                    let dst: Vec<Dyadic> = order.iter().flat_map(|&t| [home[t].a.clone(), home[t].b.clone()]).collect();
                    let b = circle_ordered_witness(&src, &dst)?;
                    let bg = b.compose(g);
                    let bh = b.compose(h);
                    check(arcs[i].image(&bg) == arcs[i], || "bgM != M".into())?;
                    check(arcs[j].image(&bh) == arcs[j], || "bhN != N".into())?;
                    check(p.image(&b) == *p, || "bP != P".into())?;
                    return Ok((arcs[i].clone(), arcs[j].clone(), p.clone(), b));
                }
            }
        }
    }
    Err(CriterionError::Inconclusive(format!("no arc triple of length >= 2^-{max_depth}")))
}
