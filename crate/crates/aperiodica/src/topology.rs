//! The local rubber uniformity on point sets and its hit-and-miss basis.
//!
//! Two windowed point sets are `U_{K,V}`-related when each one, intersected
//! with the compact `K`, is contained in the `V`-thickening of the other.
//! This module provides that relation, a proxy metric for the vague topology
//! built from a fixed countable tent family, both constructive conversions
//! between `U_{K,V}` neighbourhoods and hit-and-miss basis elements, and the
//! repetitivity / finite-local-complexity scans built on top of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{linf_dist, point_add, BoxRegion, BoxUnion, Point};
use crate::measures::WeightedComb;
use crate::testfn::TestFunction;

/// Parameters of one `U_{K,V}` entourage: a compact box-union `K` and a
/// symmetric open box `V` around the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UkvParams {
    pub k: BoxUnion,
    pub v: BoxRegion,
}

impl UkvParams {
    pub fn new(k: BoxRegion, v_halfwidth: Point, dim: usize) -> Self {
        UkvParams {
            k: BoxUnion::from_box(k),
            v: BoxRegion::symmetric(v_halfwidth, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.v.dim
    }
}

/// A finite point set together with the window it was observed in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetWindowed {
    points: Vec<Point>,
    pub window: BoxRegion,
    pub dim: usize,
}

impl PointSetWindowed {
    pub fn new(mut points: Vec<Point>, window: BoxRegion, dim: usize) -> Self {
        points.sort_by(crate::geometry::point_cmp);
        points.dedup_by(|a, b| linf_dist(*a, *b, dim) <= crate::COINCIDENCE_TOL);
        PointSetWindowed { points, window, dim }
    }

    pub fn from_comb(comb: &WeightedComb) -> Self {
        PointSetWindowed {
            points: comb.points().to_vec(),
            window: comb.window(),
            dim: comb.group().dim(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn translate(&self, t: Point) -> Self {
        PointSetWindowed {
            points: self.points.iter().map(|p| point_add(*p, t)).collect(),
            window: self.window.translate(t),
            dim: self.dim,
        }
    }

    /// Is there a point within the open box `v` centered at `q`?
    fn has_point_near(&self, q: Point, v: &BoxRegion) -> bool {
        let xlo = q[0] + v.lo[0];
        let xhi = q[0] + v.hi[0];
        let start = self.points.partition_point(|p| p[0] <= xlo);
        for p in &self.points[start..] {
            if p[0] >= xhi {
                break;
            }
            if self.dim == 1 || (p[1] > q[1] + v.lo[1] && p[1] < q[1] + v.hi[1]) {
                return true;
            }
        }
        false
    }

    fn for_each_in_union(&self, k: &BoxUnion, mut f: impl FnMut(Point)) {
        // parts are visited in order; a point lying in two overlapping parts
        // is reported once
        for (i, part) in k.parts.iter().enumerate() {
            let start = self.points.partition_point(|p| p[0] < part.lo[0]);
            for p in &self.points[start..] {
                if p[0] > part.hi[0] {
                    break;
                }
                if part.contains_closed(*p)
                    && !k.parts[..i].iter().any(|b| b.contains_closed(*p))
                {
                    f(*p);
                }
            }
        }
    }
}

/// `(P1, P2) in U_{K,V}`: `P1 n K  c  P2 + V` and `P2 n K  c  P1 + V`.
pub fn ukv_related(p1: &PointSetWindowed, p2: &PointSetWindowed, u: &UkvParams) -> Result<bool> {
    if let Some(bb) = u.k.bounding_box() {
        if !p1.window.contains_box(&bb) || !p2.window.contains_box(&bb) {
            return Err(Error::KOutsideWindow);
        }
    }
    let mut ok = true;
    p1.for_each_in_union(&u.k, |p| {
        if ok && !p2.has_point_near(p, &u.v) {
            ok = false;
        }
    });
    if !ok {
        return Ok(false);
    }
    p2.for_each_in_union(&u.k, |p| {
        if ok && !p1.has_point_near(p, &u.v) {
            ok = false;
        }
    });
    Ok(ok)
}

/// Fixed countable tent family for the vague-topology proxy metric.
///
/// Generation `g = 1, 2, ...` holds tents of halfwidth `2^{1-g}` centered at
/// the multiples of their halfwidth inside `[-g, g]^d`, enumerated in
/// lexicographic order; generations are concatenated.
pub fn metric_family(dim: usize, count: usize) -> Vec<TestFunction> {
    let mut out = Vec::with_capacity(count);
    let mut g = 1i32;
    while out.len() < count {
        let h = 2f64.powi(1 - g);
        let m = (g as f64 / h).round() as i64;
        if dim == 1 {
            for i in -m..=m {
                out.push(TestFunction::tent(i as f64 * h, h, 1.0));
                if out.len() == count {
                    return out;
                }
            }
        } else {
            for i in -m..=m {
                for j in -m..=m {
                    out.push(TestFunction::new(
                        crate::testfn::BumpShape::Tent,
                        [i as f64 * h, j as f64 * h],
                        [h, h],
                        num_complex::Complex64::new(1.0, 0.0),
                        2,
                    ));
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
        g += 1;
    }
    out
}

/// Proxy metric `sum_n 2^-n |mu(phi_n) - nu(phi_n)| / (1 + |...|)` over the
/// first `depth` members of the fixed tent family. The truncation error of
/// the full series is at most `2^-depth`.
pub fn vague_metric(mu: &WeightedComb, nu: &WeightedComb, depth: usize) -> f64 {
    let dim = mu.group().dim();
    let family = metric_family(dim, depth);
    let mut d = 0.0;
    for (n, phi) in family.iter().enumerate() {
        let diff = (mu.evaluate(phi) - nu.evaluate(phi)).norm();
        d += 2f64.powi(-(n as i32 + 1)) * diff / (1.0 + diff);
    }
    d
}

/// A hit-and-miss basis element: closed sets missing `c` and hitting every
/// member of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FellBasisElement {
    /// Compact set to miss (union of closed boxes).
    pub c: BoxUnion,
    /// Finite family of open boxes to hit.
    pub f: Vec<BoxRegion>,
    pub dim: usize,
}

impl FellBasisElement {
    /// Membership of a windowed point set, reading it as a closed set.
    pub fn contains(&self, l: &PointSetWindowed) -> bool {
        let misses = !l.points().iter().any(|p| self.c.contains_closed(*p));
        misses
            && self
                .f
                .iter()
                .all(|a| l.points().iter().any(|p| a.contains_open(*p)))
    }
}

/// Build a basis element `U(C, F)` inside the `U_{K,V}`-neighbourhood of a
/// finite closed set `H`: with `W = V/2`, `C = K \ (H + W)` and `F` the
/// family `{x + W : x in H n K}`. Every closed set in `U(C, F)` is then
/// `U_{K,V}`-related to `H`.
pub fn fell_refines_ukv(h: &PointSetWindowed, u: &UkvParams) -> Result<FellBasisElement> {
    let dim = u.dim();
    let mut w_half = [0.0; 2];
    for (i, w) in w_half.iter_mut().enumerate().take(dim) {
        *w = 0.5 * u.v.hi[i];
    }
    let w = BoxRegion::symmetric(w_half, dim);
    let mut hits: Vec<Point> = Vec::new();
    h.for_each_in_union(&u.k, |p| hits.push(p));

    if hits.is_empty() {
        // miss-only element: U(K, {}) consists of the closed sets missing K
        return Ok(FellBasisElement {
            c: u.k.clone(),
            f: Vec::new(),
            dim,
        });
    }

    // C = K \ (H + W), holes taken from every H-point whose W-box meets K
    let mut c = BoxUnion::empty(dim);
    for part in &u.k.parts {
        let holes: Vec<BoxRegion> = h
            .points()
            .iter()
            .map(|p| w.translate(*p))
            .filter(|hb| !hb.intersect(part).is_empty())
            .collect();
        let sub = BoxUnion::subtract(part, &holes);
        for b in sub.parts {
            c.push(b);
        }
    }
    let f = hits.iter().map(|p| w.translate(*p)).collect();
    Ok(FellBasisElement { c, f, dim })
}

/// Deepest interior point of `A \ C` (max sup-distance to the complement,
/// lexicographic tie-break) together with its clearance.
fn deepest_interior(a: &BoxRegion, c: &BoxUnion) -> Option<(Point, f64)> {
    let dim = a.dim;
    let holes: Vec<BoxRegion> = c
        .parts
        .iter()
        .filter(|b| !b.intersect(a).is_empty())
        .cloned()
        .collect();
    let clearance = |p: Point| -> f64 {
        let mut d = f64::INFINITY;
        for i in 0..dim {
            d = d.min(p[i] - a.lo[i]).min(a.hi[i] - p[i]);
        }
        for hb in &holes {
            let mut dist = 0.0f64;
            for i in 0..dim {
                let excess = (hb.lo[i] - p[i]).max(p[i] - hb.hi[i]).max(0.0);
                dist = dist.max(excess);
            }
            d = d.min(dist);
        }
        d
    };
    let cells = BoxUnion::subtract(a, &holes);
    let mut best: Option<(Point, f64)> = None;
    for cell in &cells.parts {
        // hill-climb the exact clearance from the cell center
        let mut p = cell.center();
        let mut step = cell.diameter().max(1e-6);
        while step > 1e-12 {
            let mut improved = false;
            for axis in 0..dim {
                for dir in [-1.0, 1.0] {
                    let mut q = p;
                    q[axis] += dir * step;
                    if a.contains_open(q) && clearance(q) > clearance(p) + 1e-15 {
                        p = q;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        let cl = clearance(p);
        if cl <= 0.0 {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bp, bc)) => {
                cl > *bc + 1e-15
                    || ((cl - *bc).abs() <= 1e-15
                        && crate::geometry::point_cmp(&p, bp) == std::cmp::Ordering::Less)
            }
        };
        if better {
            best = Some((p, cl));
        }
    }
    best
}

/// Build a `U_{K,V}`-neighbourhood inside a basis element `U(C, F)`: pick a
/// deepest interior point `x_A` of each `A \ C`, a symmetric `V` with
/// `x_A + cl(V)` inside `A \ C`, and `K = C u (H + cl(V))`. Every closed set
/// `U_{K,V}`-related to `H = {x_A}` then lies in `U(C, F)`.
pub fn ukv_refines_fell(b: &FellBasisElement) -> Result<(PointSetWindowed, UkvParams)> {
    let dim = b.dim;
    let mut picks: Vec<(Point, f64)> = Vec::with_capacity(b.f.len());
    for a in &b.f {
        let p = deepest_interior(a, &b.c).ok_or(Error::EmptyBasis)?;
        picks.push(p);
    }
    let v_half = if picks.is_empty() {
        1.0
    } else {
        picks
            .iter()
            .map(|(_, c)| c)
            .fold(f64::INFINITY, |m, c| m.min(*c))
            * (1.0 - 1e-9)
    };
    let mut k = b.c.clone();
    let vbox = BoxRegion::symmetric([v_half, v_half], dim);
    for (p, _) in &picks {
        k.push(vbox.translate(*p));
    }
    let hull = k
        .bounding_box()
        .unwrap_or_else(|| BoxRegion::symmetric([1.0, 1.0], dim));
    let h = PointSetWindowed::new(
        picks.iter().map(|(p, _)| *p).collect(),
        hull.dilate(1.0),
        dim,
    );
    Ok((h, UkvParams { k, v: vbox }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepetitivityReport {
    pub dense: bool,
    pub max_gap: f64,
    pub witnesses: Vec<f64>,
}

/// Scan `T = {t : (t + P, P) in U_{K,V}}` over a 1D grid and report whether
/// the witnesses are `r`-dense.
pub fn repetitivity_scan(
    p: &PointSetWindowed,
    u: &UkvParams,
    t_lo: f64,
    t_hi: f64,
    t_step: f64,
    r: f64,
) -> Result<RepetitivityReport> {
    let bb = u
        .k
        .bounding_box()
        .ok_or_else(|| Error::InvalidParameter("empty K".into()))?;
    // (t + P) n K needs P-data on K - t for every grid t
    if p.window.lo[0] > bb.lo[0] - t_hi.max(0.0) || p.window.hi[0] < bb.hi[0] - t_lo.min(0.0) {
        return Err(Error::WindowTooSmall(format!(
            "need P on [{}, {}]",
            bb.lo[0] - t_hi.max(0.0),
            bb.hi[0] - t_lo.min(0.0)
        )));
    }
    let steps = ((t_hi - t_lo) / t_step).round() as usize;
    let mut witnesses = Vec::new();
    for i in 0..=steps {
        let t = t_lo + i as f64 * t_step;
        let shifted = p.translate([t, 0.0]);
        if ukv_related(&shifted, p, u)? {
            witnesses.push(t);
        }
    }
    let mut max_gap = t_hi - t_lo;
    if !witnesses.is_empty() {
        max_gap = (witnesses[0] - t_lo).max(t_hi - witnesses[witnesses.len() - 1]);
        for w in witnesses.windows(2) {
            max_gap = max_gap.max(w[1] - w[0]);
        }
    }
    Ok(RepetitivityReport {
        dense: max_gap <= r,
        max_gap,
        witnesses,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlcReport {
    /// Distinct r-patch counts over the nested windows (quarter, half, full).
    pub counts: Vec<usize>,
    pub flc: bool,
    /// Count ratio full/half; near 1 for FLC inputs.
    pub growth_ratio: f64,
}

/// Count translation classes of `r`-patches up to `eps` (grid quantization)
/// over nested windows; FLC inputs stabilize, non-FLC counts keep growing.
pub fn flc_check(p: &PointSetWindowed, radius: f64, eps: f64) -> FlcReport {
    let lo = p.window.lo[0];
    let len = p.window.hi[0] - p.window.lo[0];
    let mut counts = Vec::new();
    for frac in [0.25, 0.5, 1.0] {
        let hi = lo + len * frac;
        let mut keys: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
        for x in p.points() {
            if x[0] < lo + radius || x[0] >= hi - radius {
                continue;
            }
            let mut key: Vec<i64> = Vec::new();
            let start = p.points().partition_point(|q| q[0] < x[0] - radius);
            for q in &p.points()[start..] {
                if q[0] > x[0] + radius {
                    break;
                }
                if p.dim > 1 && (q[1] - x[1]).abs() > radius {
                    continue;
                }
                key.push(((q[0] - x[0]) / eps).round() as i64);
                if p.dim > 1 {
                    key.push(((q[1] - x[1]) / eps).round() as i64);
                }
            }
            keys.insert(key);
        }
        counts.push(keys.len());
    }
    let half = counts[1].max(1);
    let growth_ratio = counts[2] as f64 / half as f64;
    FlcReport {
        counts: counts.clone(),
        flc: counts[2] == counts[1],
        growth_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{CombGenerator, DisplacementRule};
    use crate::geometry::GroupSpec;
    use num_complex::Complex64;

    fn set1d(points: &[f64], window: (f64, f64)) -> PointSetWindowed {
        PointSetWindowed::new(
            points.iter().map(|x| [*x, 0.0]).collect(),
            BoxRegion::line(window.0, window.1),
            1,
        )
    }

    #[test]
    fn ukv_examples() {
        let u = UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.2, 0.0], 1);
        let p1 = set1d(&[0.0], (-2.0, 2.0));
        let p2 = set1d(&[0.1], (-2.0, 2.0));
        assert!(ukv_related(&p1, &p1, &u).unwrap());
        assert!(ukv_related(&p1, &p2, &u).unwrap());
        let tight = UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.05, 0.0], 1);
        assert!(!ukv_related(&p1, &p2, &tight).unwrap());
        // pre-check: K must fit in the windows
        let small = set1d(&[0.0], (-0.5, 0.5));
        assert!(matches!(
            ukv_related(&small, &p1, &u),
            Err(Error::KOutsideWindow)
        ));
    }

    #[test]
    fn ukv_is_symmetric_on_random_pairs() {
        let mut state = 9u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let mut pts1 = Vec::new();
            let mut pts2 = Vec::new();
            for _ in 0..12 {
                pts1.push(next() * 8.0 - 4.0);
                pts2.push(next() * 8.0 - 4.0);
            }
            let p1 = set1d(&pts1, (-5.0, 5.0));
            let p2 = set1d(&pts2, (-5.0, 5.0));
            let u = UkvParams::new(BoxRegion::line(-3.0, 3.0), [0.3 + next(), 0.0], 1);
            assert_eq!(
                ukv_related(&p1, &p2, &u).unwrap(),
                ukv_related(&p2, &p1, &u).unwrap()
            );
            assert!(ukv_related(&p1, &p1, &u).unwrap());
        }
    }

    #[test]
    fn ukv_union_intersection_monotony() {
        // U_{K1 u K2, V1 n V2} subset U_{K1,V1} n U_{K2,V2}
        let mut state = 31u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let pts1: Vec<f64> = (0..10).map(|_| next() * 8.0 - 4.0).collect();
            let pts2: Vec<f64> = (0..10).map(|_| next() * 8.0 - 4.0).collect();
            let p1 = set1d(&pts1, (-6.0, 6.0));
            let p2 = set1d(&pts2, (-6.0, 6.0));
            let k1 = BoxRegion::line(-3.0, next());
            let k2 = BoxRegion::line(-next(), 3.0);
            let v1 = 0.2 + next();
            let v2 = 0.2 + next();
            let mut k12 = BoxUnion::from_box(k1);
            k12.push(k2);
            let u12 = UkvParams {
                k: k12,
                v: BoxRegion::symmetric([v1.min(v2), 0.0], 1),
            };
            if ukv_related(&p1, &p2, &u12).unwrap() {
                let ua = UkvParams::new(k1, [v1, 0.0], 1);
                let ub = UkvParams::new(k2, [v2, 0.0], 1);
                assert!(ukv_related(&p1, &p2, &ua).unwrap());
                assert!(ukv_related(&p1, &p2, &ub).unwrap());
            }
        }
    }

    #[test]
    fn ukv_triangle_composition() {
        // (P,Q), (Q,R) in U_{K+W, W} with W + W = V implies (P,R) in U_{K,V}
        fn uniform(state: &mut u64) -> f64 {
            *state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (*state >> 11) as f64 / (1u64 << 53) as f64
        }
        fn jig(base: &[f64], amp: f64, st: &mut u64) -> Vec<f64> {
            base.iter().map(|x| x + amp * (uniform(st) - 0.5)).collect()
        }
        let mut state = 77u64;
        let mut exercised = 0;
        for _ in 0..400 {
            let base: Vec<f64> = (0..8).map(|_| uniform(&mut state) * 6.0 - 3.0).collect();
            let w = 0.15 + 0.1 * uniform(&mut state);
            let v = 2.0 * w;
            let mut s1 = state ^ 0xabc;
            let mut s2 = state ^ 0xdef;
            let mut s3 = state ^ 0x123;
            let p = set1d(&jig(&base, 0.1, &mut s1), (-8.0, 8.0));
            let q = set1d(&jig(&base, 0.1, &mut s2), (-8.0, 8.0));
            let r = set1d(&jig(&base, 0.1, &mut s3), (-8.0, 8.0));
            let k = BoxRegion::line(-2.0, 2.0);
            let k_dilated = k.dilate(w);
            let u_small = UkvParams::new(k_dilated, [w, 0.0], 1);
            let u_big = UkvParams::new(k, [v, 0.0], 1);
            if ukv_related(&p, &q, &u_small).unwrap() && ukv_related(&q, &r, &u_small).unwrap() {
                exercised += 1;
                assert!(ukv_related(&p, &r, &u_big).unwrap());
            }
        }
        assert!(exercised > 50, "exercised only {exercised} triples");
    }

    #[test]
    fn metric_basics() {
        let g = GroupSpec::real_line();
        let w = BoxRegion::line(-4.0, 4.0);
        let delta0 =
            WeightedComb::new(g, w, vec![[0.0, 0.0]], vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(vague_metric(&delta0, &delta0, 20), 0.0);
        let mut prev = -1.0;
        for i in 0..=10 {
            let t = 0.05 * i as f64;
            let dt =
                WeightedComb::new(g, w, vec![[t, 0.0]], vec![Complex64::new(1.0, 0.0)]).unwrap();
            let d = vague_metric(&delta0, &dt, 24);
            let d_sym = vague_metric(&dt, &delta0, 24);
            assert!((d - d_sym).abs() < 1e-15);
            assert!(d >= prev - 1e-12, "metric not monotone at t={t}: {d} < {prev}");
            prev = d;
        }
    }

    #[test]
    fn delta_map_counterexample_documented() {
        // two points collapsing: {0, x_n} -> {0} in the rubber topology while
        // the comb image converges to the doubled point measure
        let g = GroupSpec::real_line();
        let w = BoxRegion::line(-2.0, 2.0);
        let double =
            WeightedComb::new(g, w, vec![[0.0, 0.0]], vec![Complex64::new(2.0, 0.0)]).unwrap();
        let single_set = set1d(&[0.0], (-2.0, 2.0));
        let u = UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.1, 0.0], 1);
        let mut prev_metric = f64::INFINITY;
        for n in 1..=6 {
            let x = 0.05 / n as f64;
            let lam = WeightedComb::new(
                g,
                w,
                vec![[0.0, 0.0], [x, 0.0]],
                vec![Complex64::new(1.0, 0.0); 2],
            )
            .unwrap();
            let lam_set = set1d(&[0.0, x], (-2.0, 2.0));
            // rubber-close to {0} ...
            assert!(ukv_related(&lam_set, &single_set, &u).unwrap());
            // ... while vaguely approaching 2 delta_0
            let d = vague_metric(&lam, &double, 24);
            assert!(d <= prev_metric + 1e-12);
            prev_metric = d;
        }
        assert!(prev_metric < 0.02, "vague distance to 2 delta_0: {prev_metric}");
    }

    #[test]
    fn delta_map_continuity_on_uniformly_discrete_family() {
        let gen = CombGenerator::unit_lattice(0);
        let comb = gen.produce(&BoxRegion::line(-8.0, 8.0)).unwrap();
        let mut prev = f64::INFINITY;
        for n in 1..=6 {
            let jitter = 0.2 / n as f64;
            let moved = comb.translate([jitter, 0.0]);
            let d = vague_metric(&comb, &moved, 24);
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 0.05);
    }

    #[test]
    fn fell_construction_example() {
        // H = {0}, K = [-1,1], V = (-0.4, 0.4): C = K \ (-0.2, 0.2)
        let h = set1d(&[0.0], (-3.0, 3.0));
        let u = UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.4, 0.0], 1);
        let e = fell_refines_ukv(&h, &u).unwrap();
        assert_eq!(e.f.len(), 1);
        assert!((e.f[0].lo[0] + 0.2).abs() < 1e-12);
        assert!((e.f[0].hi[0] - 0.2).abs() < 1e-12);
        assert!(e.c.contains_closed([-0.5, 0.0]));
        assert!(e.c.contains_closed([0.2, 0.0]));
        assert!(!e.c.contains_closed([0.0, 0.0]));
        // H empty on K: miss-only element
        let h_empty = set1d(&[], (-3.0, 3.0));
        let e2 = fell_refines_ukv(&h_empty, &u).unwrap();
        assert!(e2.f.is_empty());
        assert!(e2.c.contains_closed([0.5, 0.0]));
        let l_missing = set1d(&[2.0], (-3.0, 3.0));
        assert!(e2.contains(&l_missing));
    }

    #[test]
    fn ukv_refines_fell_example() {
        // C = [1,2], F = {(0, 0.5)}: x_A = 0.25, V ~ +-0.25
        let b = FellBasisElement {
            c: BoxUnion::from_box(BoxRegion::line(1.0, 2.0)),
            f: vec![BoxRegion::line(0.0, 0.5)],
            dim: 1,
        };
        let (h, u) = ukv_refines_fell(&b).unwrap();
        assert_eq!(h.points().len(), 1);
        assert!((h.points()[0][0] - 0.25).abs() < 1e-6);
        assert!((u.v.hi[0] - 0.25).abs() < 1e-6);
        assert!(u.k.contains_closed([1.5, 0.0]));
        assert!(u.k.contains_closed([0.25, 0.0]));
        // empty hitting family: H = {}, K = C
        let b2 = FellBasisElement {
            c: BoxUnion::from_box(BoxRegion::line(1.0, 2.0)),
            f: vec![],
            dim: 1,
        };
        let (h2, u2) = ukv_refines_fell(&b2).unwrap();
        assert!(h2.points().is_empty());
        assert_eq!(u2.k, BoxUnion::from_box(BoxRegion::line(1.0, 2.0)));
        // A \ C empty: error
        let bad = FellBasisElement {
            c: BoxUnion::from_box(BoxRegion::line(0.0, 1.0)),
            f: vec![BoxRegion::line(0.2, 0.8)],
            dim: 1,
        };
        assert!(matches!(ukv_refines_fell(&bad), Err(Error::EmptyBasis)));
    }

    #[test]
    fn repetitivity_of_lattice() {
        let gen = CombGenerator::unit_lattice(0);
        let comb = gen.produce(&BoxRegion::line(-60.0, 120.0)).unwrap();
        let p = PointSetWindowed::from_comb(&comb);
        let u = UkvParams::new(BoxRegion::line(0.0, 5.0), [0.1, 0.0], 1);
        let rep = repetitivity_scan(&p, &u, 0.0, 50.0, 0.05, 1.01).unwrap();
        assert!(rep.dense, "max gap {}", rep.max_gap);
        assert!(rep.max_gap <= 1.01);
        // every integer shift in range is a witness
        assert!(rep.witnesses.iter().any(|t| (t - 7.0).abs() < 1e-9));
    }

    #[test]
    fn repetitivity_fails_on_iid_perturbation() {
        // independent displacements admit no nontrivial approximate periods
        // at V = eps/10 resolution
        let eps = 0.3;
        let gen = CombGenerator::perturbed_lattice(1.0, eps, DisplacementRule::Iid, 21).unwrap();
        let comb = gen.produce(&BoxRegion::line(-60.0, 120.0)).unwrap();
        let p = PointSetWindowed::from_comb(&comb);
        let u = UkvParams::new(BoxRegion::line(0.0, 10.0), [eps / 10.0, 0.0], 1);
        let rep = repetitivity_scan(&p, &u, 0.5, 50.0, 0.05, 10.0).unwrap();
        assert!(!rep.dense, "unexpected witnesses: {:?}", rep.witnesses);
    }

    #[test]
    fn repetitivity_window_gate() {
        let p = set1d(&[0.0, 1.0], (-2.0, 2.0));
        let u = UkvParams::new(BoxRegion::line(0.0, 5.0), [0.1, 0.0], 1);
        assert!(matches!(
            repetitivity_scan(&p, &u, 0.0, 50.0, 0.5, 1.0),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn flc_classifications() {
        let lat = CombGenerator::unit_lattice(0)
            .produce(&BoxRegion::line(0.0, 400.0))
            .unwrap();
        let rep = flc_check(&PointSetWindowed::from_comb(&lat), 3.0, 1e-4);
        assert_eq!(rep.counts[2], 1);
        assert!(rep.flc);

        let fib = CombGenerator::fibonacci(0)
            .produce(&BoxRegion::line(0.0, 1000.0))
            .unwrap();
        let rep_fib = flc_check(&PointSetWindowed::from_comb(&fib), 3.0, 1e-4);
        assert!(rep_fib.flc, "counts {:?}", rep_fib.counts);
        assert!(rep_fib.counts[2] > 1 && rep_fib.counts[2] < 40);

        let iid = CombGenerator::perturbed_lattice(1.0, 0.3, DisplacementRule::Iid, 5)
            .unwrap()
            .produce(&BoxRegion::line(0.0, 10_000.0))
            .unwrap();
        let rep_iid = flc_check(&PointSetWindowed::from_comb(&iid), 3.0, 1e-4);
        assert!(!rep_iid.flc);
        assert!(rep_iid.growth_ratio > 1.5, "growth {:?}", rep_iid.counts);
    }
}
