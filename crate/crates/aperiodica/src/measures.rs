//! Finitely supported weighted Dirac combs and their basic operations.
//!
//! A comb stores the restriction of a translation bounded complex point
//! measure to a declared half-open window. Points are kept sorted in
//! lexicographic order; points closer than [`crate::COINCIDENCE_TOL`] are
//! merged by summing their weights, and exactly-zero weights are dropped.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    linf_dist, point_add, point_cmp, point_neg, BoxRegion, GroupSpec, Point,
};
use crate::kahan::KahanComplex;
use crate::testfn::TestFunction;
use crate::COINCIDENCE_TOL;

/// A `(C, V)` translation bound: total variation on every translate of the
/// open box `V` is at most `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationBound {
    pub c: f64,
    pub v: BoxRegion,
}

impl TranslationBound {
    pub fn new(c: f64, v: BoxRegion) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::InvalidParameter("translation bound needs C > 0".into()));
        }
        if v.is_empty() {
            return Err(Error::InvalidParameter("translation bound needs nonempty V".into()));
        }
        Ok(TranslationBound { c, v })
    }
}

/// Finite restriction of a weighted Dirac comb to a half-open window.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComb {
    group: GroupSpec,
    window: BoxRegion,
    points: Vec<Point>,
    weights: Vec<Complex64>,
}

/// Result of evaluating against a test function whose support may stick out
/// of the data window; `truncated` flags that the value was computed from
/// the available points only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub truncated: bool,
}

impl WeightedComb {
    /// Build a comb, validating window membership and normalizing the
    /// support (sorting, merging coincident points, dropping zero weights).
    pub fn new(
        group: GroupSpec,
        window: BoxRegion,
        points: Vec<Point>,
        weights: Vec<Complex64>,
    ) -> Result<Self> {
        window.validate()?;
        if points.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points vs {} weights",
                points.len(),
                weights.len()
            )));
        }
        for p in &points {
            if !window.contains_half_open(*p) {
                return Err(Error::InvalidParameter(format!(
                    "point {:?} outside window [{:?}, {:?})",
                    p, window.lo, window.hi
                )));
            }
        }
        Ok(Self::from_parts_unnormalized(group, window, points, weights))
    }

    /// Internal constructor for outputs of trusted operations; normalizes
    /// but does not re-check window membership (float rounding in translated
    /// boundaries must not reject points).
    pub(crate) fn from_parts_unnormalized(
        group: GroupSpec,
        window: BoxRegion,
        points: Vec<Point>,
        weights: Vec<Complex64>,
    ) -> Self {
        let dim = group.dim();
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| point_cmp(&points[a], &points[b]));
        let mut ps: Vec<Point> = Vec::with_capacity(points.len());
        let mut ws: Vec<Complex64> = Vec::with_capacity(points.len());
        for i in idx {
            let p = points[i];
            let w = weights[i];
            if let Some(last) = ps.last() {
                if linf_dist(*last, p, dim) <= COINCIDENCE_TOL {
                    *ws.last_mut().unwrap() += w;
                    continue;
                }
            }
            ps.push(p);
            ws.push(w);
        }
        // drop points whose merged weight vanished
        let mut points = Vec::with_capacity(ps.len());
        let mut weights = Vec::with_capacity(ws.len());
        for (p, w) in ps.into_iter().zip(ws) {
            if w != Complex64::new(0.0, 0.0) {
                points.push(p);
                weights.push(w);
            }
        }
        WeightedComb { group, window, points, weights }
    }

    pub fn empty(group: GroupSpec, window: BoxRegion) -> Self {
        WeightedComb {
            group,
            window,
            points: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn group(&self) -> GroupSpec {
        self.group
    }

    pub fn window(&self) -> BoxRegion {
        self.window
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points per unit Haar volume of the window.
    pub fn density(&self) -> f64 {
        let v = self.group.volume(&self.window);
        if v > 0.0 {
            self.points.len() as f64 / v
        } else {
            0.0
        }
    }

    /// Indices of points with first coordinate in `[xlo, xhi]`.
    fn x_range(&self, xlo: f64, xhi: f64) -> std::ops::Range<usize> {
        let start = self.points.partition_point(|p| p[0] < xlo);
        let end = self.points.partition_point(|p| p[0] <= xhi);
        start..end
    }

    /// Iterate over (point, weight) with the point in the closed box `b`.
    pub fn for_each_in_closed(&self, b: &BoxRegion, mut f: impl FnMut(Point, Complex64)) {
        for i in self.x_range(b.lo[0], b.hi[0]) {
            let p = self.points[i];
            if self.group.dim() == 1 || (p[1] >= b.lo[1] && p[1] <= b.hi[1]) {
                f(p, self.weights[i]);
            }
        }
    }

    /// `mu(phi) = sum w_x phi(x)`, flagging truncation when `supp(phi)` is
    /// not contained in the window.
    pub fn evaluate_checked(&self, phi: &TestFunction) -> Evaluation {
        let supp = phi.support();
        let truncated = !self.window.contains_box(&supp);
        let mut acc = KahanComplex::new();
        self.for_each_in_closed(&supp, |p, w| {
            acc.add(w * phi.eval(p));
        });
        Evaluation {
            value: acc.value(),
            truncated,
        }
    }

    pub fn evaluate(&self, phi: &TestFunction) -> Complex64 {
        self.evaluate_checked(phi).value
    }

    /// Total variation `sum |w_x|` over points in the open box `v`.
    pub fn total_variation_on(&self, v: &BoxRegion) -> f64 {
        let mut s = 0.0;
        for i in self.x_range(v.lo[0], v.hi[0]) {
            let p = self.points[i];
            if v.contains_open(p) {
                s += self.weights[i].norm();
            }
        }
        s
    }

    /// Check the `(C, V)` translation bound over a grid of translates of `V`
    /// covering the window. Returns `(bounded, worst_offset, worst_value)`.
    pub fn is_translation_bounded(
        &self,
        bound: &TranslationBound,
        t_step: f64,
    ) -> Result<(bool, Point, f64)> {
        let dim = self.group.dim();
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..dim {
            lo[i] = self.window.lo[i] - bound.v.lo[i];
            hi[i] = self.window.hi[i] - bound.v.hi[i];
            if hi[i] < lo[i] {
                return Err(Error::WindowTooSmall(format!(
                    "window minus V is empty on axis {i}"
                )));
            }
        }
        let counts: Vec<usize> = (0..dim)
            .map(|i| ((hi[i] - lo[i]) / t_step).floor() as usize + 1)
            .collect();
        let mut worst = f64::NEG_INFINITY;
        let mut worst_t = [0.0; 2];
        let ny = if dim > 1 { counts[1] } else { 1 };
        for ix in 0..counts[0] {
            for iy in 0..ny {
                let mut t = [lo[0] + ix as f64 * t_step, 0.0];
                if dim > 1 {
                    t[1] = lo[1] + iy as f64 * t_step;
                }
                let tv = self.total_variation_on(&bound.v.translate(t));
                if tv > worst {
                    worst = tv;
                    worst_t = t;
                }
            }
        }
        Ok((worst <= bound.c, worst_t, worst))
    }

    /// `alpha_t(mu) = delta_t * mu`: shift points and window by `t`.
    pub fn translate(&self, t: Point) -> Self {
        WeightedComb {
            group: self.group,
            window: self.window.translate(t),
            points: self.points.iter().map(|p| point_add(*p, t)).collect(),
            weights: self.weights.clone(),
        }
    }

    /// `mu~`: reflected points, conjugated weights.
    pub fn reflect(&self) -> Self {
        let points: Vec<Point> = self.points.iter().map(|p| point_neg(*p)).collect();
        let weights: Vec<Complex64> = self.weights.iter().map(|w| w.conj()).collect();
        Self::from_parts_unnormalized(self.group, self.window.reflect(), points, weights)
    }

    /// `mu bar`: same points, conjugated weights.
    pub fn conj_weights(&self) -> Self {
        WeightedComb {
            group: self.group,
            window: self.window,
            points: self.points.clone(),
            weights: self.weights.iter().map(|w| w.conj()).collect(),
        }
    }

    /// Restrict to a half-open box.
    pub fn restrict(&self, b: &BoxRegion) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for i in self.x_range(b.lo[0], b.hi[0]) {
            let p = self.points[i];
            if b.contains_half_open(p) {
                points.push(p);
                weights.push(self.weights[i]);
            }
        }
        WeightedComb {
            group: self.group,
            window: self.window.intersect(b),
            points,
            weights,
        }
    }

    /// `f_phi(mu) = (phi * mu)(0) = sum w_x phi(-x)`.
    pub fn f_phi(&self, phi: &TestFunction) -> Complex64 {
        self.f_phi_at(phi, [0.0, 0.0])
    }

    /// `(phi * mu)(t) = sum w_x phi(t - x) = f_phi(alpha_{-t} mu)`.
    pub fn f_phi_at(&self, phi: &TestFunction, t: Point) -> Complex64 {
        let supp = phi.support();
        // points with t - x in supp, i.e. x in t - supp
        let blo = [t[0] - supp.hi[0], t[1] - supp.hi[1]];
        let bhi = [t[0] - supp.lo[0], t[1] - supp.lo[1]];
        let b = BoxRegion::from_bounds(blo, bhi, self.group.dim());
        let mut acc = KahanComplex::new();
        self.for_each_in_closed(&b, |p, w| {
            acc.add(w * phi.eval([t[0] - p[0], t[1] - p[1]]));
        });
        acc.value()
    }

    /// Like [`Self::f_phi_at`] but flags truncation when the needed support
    /// region sticks out of the data window.
    pub fn f_phi_at_checked(&self, phi: &TestFunction, t: Point) -> Evaluation {
        let supp = phi.support();
        let blo = [t[0] - supp.hi[0], t[1] - supp.hi[1]];
        let bhi = [t[0] - supp.lo[0], t[1] - supp.lo[1]];
        let b = BoxRegion::from_bounds(blo, bhi, self.group.dim());
        Evaluation {
            value: self.f_phi_at(phi, t),
            truncated: !self.window.contains_box(&b),
        }
    }

    /// Finite convolution: all pairwise sums of points with multiplied
    /// weights; coincident sums merge. The window is the Minkowski sum.
    pub fn convolve_finite(&self, other: &WeightedComb) -> Self {
        let n = self.len() * other.len();
        let mut points = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (p, wp) in self.points.iter().zip(&self.weights) {
            for (q, wq) in other.points.iter().zip(&other.weights) {
                points.push(point_add(*p, *q));
                weights.push(wp * wq);
            }
        }
        Self::from_parts_unnormalized(
            self.group,
            self.window.minkowski_sum(&other.window),
            points,
            weights,
        )
    }

    /// `(mu * nu)(phi) = sum_{s,t} w_mu(s) w_nu(t) phi(s + t)` without
    /// materializing the convolution.
    pub fn convolve_apply(&self, other: &WeightedComb, phi: &TestFunction) -> Complex64 {
        let supp = phi.support();
        let mut acc = KahanComplex::new();
        for (q, wq) in other.points.iter().zip(&other.weights) {
            // s must lie in supp - q
            let blo = [supp.lo[0] - q[0], supp.lo[1] - q[1]];
            let bhi = [supp.hi[0] - q[0], supp.hi[1] - q[1]];
            let b = BoxRegion::from_bounds(blo, bhi, self.group.dim());
            self.for_each_in_closed(&b, |p, wp| {
                acc.add(wp * wq * phi.eval(point_add(p, *q)));
            });
        }
        acc.value()
    }
}
