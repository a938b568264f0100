//! Groups, points and axis-aligned boxes.
//!
//! The ambient group is one of the four kinds below. Points always carry two
//! coordinates; one-dimensional groups simply keep the second coordinate at
//! zero. Windows of combs are half-open boxes `[lo, hi)` per axis, so that
//! translated windows tile the group without overlap. Open boxes (used as
//! neighbourhoods of zero) and closed boxes (compact sets) reuse the same
//! representation with different membership tests.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the ambient group, stored as two coordinates.
pub type Point = [f64; 2];

pub fn point_add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

pub fn point_sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn point_neg(a: Point) -> Point {
    [-a[0], -a[1]]
}

/// Lexicographic total order on points (used to keep comb supports sorted).
pub fn point_cmp(a: &Point, b: &Point) -> std::cmp::Ordering {
    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
}

/// L-infinity distance restricted to the first `dim` coordinates.
pub fn linf_dist(a: Point, b: Point, dim: usize) -> f64 {
    let mut d = 0.0f64;
    for i in 0..dim {
        d = d.max((a[i] - b[i]).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    RealLine,
    RealPlane,
    IntegerLine,
    IntegerPlane,
}

/// The ambient group together with its Haar normalization: Lebesgue measure
/// for the real kinds, counting measure for the integer kinds. The dual
/// pairing is `(k, t) = exp(-2 pi i k.t)`; for integer kinds the dual
/// variable lives on the unit torus per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSpec {
    pub kind: GroupKind,
}

impl GroupSpec {
    pub const fn new(kind: GroupKind) -> Self {
        GroupSpec { kind }
    }

    pub const fn real_line() -> Self {
        Self::new(GroupKind::RealLine)
    }

    pub const fn real_plane() -> Self {
        Self::new(GroupKind::RealPlane)
    }

    pub const fn integer_line() -> Self {
        Self::new(GroupKind::IntegerLine)
    }

    pub const fn integer_plane() -> Self {
        Self::new(GroupKind::IntegerPlane)
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GroupKind::RealLine | GroupKind::IntegerLine => 1,
            GroupKind::RealPlane | GroupKind::IntegerPlane => 2,
        }
    }

    /// True for the counting-measure (integer) kinds.
    pub fn discrete(&self) -> bool {
        matches!(self.kind, GroupKind::IntegerLine | GroupKind::IntegerPlane)
    }

    /// Period of the dual torus per axis (`None` for self-dual real kinds).
    pub fn dual_period(&self) -> Option<f64> {
        if self.discrete() {
            Some(1.0)
        } else {
            None
        }
    }

    /// Haar volume of a half-open box `[lo, hi)`.
    pub fn volume(&self, b: &BoxRegion) -> f64 {
        if b.is_empty() {
            return 0.0;
        }
        let mut v = 1.0;
        for i in 0..self.dim() {
            v *= if self.discrete() {
                count_half_open(b.lo[i], b.hi[i])
            } else {
                b.hi[i] - b.lo[i]
            };
        }
        v
    }

    /// Haar volume of the closure `[lo, hi]` of a box.
    pub fn volume_closed(&self, b: &BoxRegion) -> f64 {
        if b.hi[0] < b.lo[0] || (self.dim() > 1 && b.hi[1] < b.lo[1]) {
            return 0.0;
        }
        let mut v = 1.0;
        for i in 0..self.dim() {
            v *= if self.discrete() {
                count_closed(b.lo[i], b.hi[i])
            } else {
                b.hi[i] - b.lo[i]
            };
        }
        v
    }
}

fn count_half_open(lo: f64, hi: f64) -> f64 {
    let n = hi.ceil() - lo.ceil();
    if n > 0.0 {
        n
    } else {
        0.0
    }
}

fn count_closed(lo: f64, hi: f64) -> f64 {
    let n = hi.floor() - lo.ceil() + 1.0;
    if n > 0.0 {
        n
    } else {
        0.0
    }
}

/// Axis-aligned box. Interpretation of the boundary (half-open window, open
/// neighbourhood, closed compact set) is chosen by the membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub lo: Point,
    pub hi: Point,
    pub dim: usize,
}

impl BoxRegion {
    pub fn line(lo: f64, hi: f64) -> Self {
        BoxRegion {
            lo: [lo, 0.0],
            hi: [hi, 0.0],
            dim: 1,
        }
    }

    pub fn plane(x: (f64, f64), y: (f64, f64)) -> Self {
        BoxRegion {
            lo: [x.0, y.0],
            hi: [x.1, y.1],
            dim: 2,
        }
    }

    pub fn from_bounds(lo: Point, hi: Point, dim: usize) -> Self {
        BoxRegion { lo, hi, dim }
    }

    /// Symmetric box `(-h_i, h_i)` around the origin.
    pub fn symmetric(halfwidths: Point, dim: usize) -> Self {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..dim {
            lo[i] = -halfwidths[i];
            hi[i] = halfwidths[i];
        }
        BoxRegion { lo, hi, dim }
    }

    pub fn is_empty(&self) -> bool {
        (0..self.dim).any(|i| self.hi[i] <= self.lo[i])
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; 2];
        for (i, ci) in c.iter_mut().enumerate().take(self.dim) {
            *ci = 0.5 * (self.lo[i] + self.hi[i]);
        }
        c
    }

    pub fn side(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    /// Largest side length (diameter in the L-infinity sense).
    pub fn diameter(&self) -> f64 {
        (0..self.dim).fold(0.0f64, |d, i| d.max(self.side(i)))
    }

    pub fn contains_half_open(&self, p: Point) -> bool {
        (0..self.dim).all(|i| p[i] >= self.lo[i] && p[i] < self.hi[i])
    }

    pub fn contains_open(&self, p: Point) -> bool {
        (0..self.dim).all(|i| p[i] > self.lo[i] && p[i] < self.hi[i])
    }

    pub fn contains_closed(&self, p: Point) -> bool {
        (0..self.dim).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    pub fn translate(&self, t: Point) -> Self {
        BoxRegion {
            lo: point_add(self.lo, t),
            hi: point_add(self.hi, t),
            dim: self.dim,
        }
    }

    pub fn reflect(&self) -> Self {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..self.dim {
            lo[i] = -self.hi[i];
            hi[i] = -self.lo[i];
        }
        BoxRegion { lo, hi, dim: self.dim }
    }

    /// Minkowski sum with another box.
    pub fn minkowski_sum(&self, other: &BoxRegion) -> Self {
        BoxRegion {
            lo: point_add(self.lo, other.lo),
            hi: point_add(self.hi, other.hi),
            dim: self.dim.max(other.dim),
        }
    }

    /// Grow every face outward by `margin >= 0`.
    pub fn dilate(&self, margin: f64) -> Self {
        let mut b = *self;
        for i in 0..self.dim {
            b.lo[i] -= margin;
            b.hi[i] += margin;
        }
        b
    }

    /// Shrink every face inward by `margin >= 0` (may become empty).
    pub fn erode(&self, margin: f64) -> Self {
        let mut b = *self;
        for i in 0..self.dim {
            b.lo[i] += margin;
            b.hi[i] -= margin;
        }
        b
    }

    pub fn intersect(&self, other: &BoxRegion) -> Self {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..self.dim {
            lo[i] = self.lo[i].max(other.lo[i]);
            hi[i] = self.hi[i].min(other.hi[i]);
        }
        BoxRegion { lo, hi, dim: self.dim }
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        (0..self.dim).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Hull of both boxes.
    pub fn hull(&self, other: &BoxRegion) -> Self {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..self.dim {
            lo[i] = self.lo[i].min(other.lo[i]);
            hi[i] = self.hi[i].max(other.hi[i]);
        }
        BoxRegion { lo, hi, dim: self.dim }
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            if !self.lo[i].is_finite() || !self.hi[i].is_finite() {
                return Err(Error::InvalidParameter("box bounds must be finite".into()));
            }
            if self.hi[i] <= self.lo[i] {
                return Err(Error::InvalidParameter(format!(
                    "box is empty on axis {i}: [{}, {})",
                    self.lo[i], self.hi[i]
                )));
            }
        }
        Ok(())
    }
}

/// Disjoint union of boxes, used for compact sets that arise from box
/// subtraction in the hit-and-miss constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxUnion {
    pub parts: Vec<BoxRegion>,
    pub dim: usize,
}

impl BoxUnion {
    pub fn empty(dim: usize) -> Self {
        BoxUnion { parts: Vec::new(), dim }
    }

    pub fn from_box(b: BoxRegion) -> Self {
        let dim = b.dim;
        if b.is_empty() {
            Self::empty(dim)
        } else {
            BoxUnion { parts: vec![b], dim }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains_closed(&self, p: Point) -> bool {
        self.parts.iter().any(|b| b.contains_closed(p))
    }

    pub fn translate(&self, t: Point) -> Self {
        BoxUnion {
            parts: self.parts.iter().map(|b| b.translate(t)).collect(),
            dim: self.dim,
        }
    }

    pub fn push(&mut self, b: BoxRegion) {
        if !b.is_empty() {
            self.parts.push(b);
        }
    }

    /// Hull box of the union (`None` when empty).
    pub fn bounding_box(&self) -> Option<BoxRegion> {
        let first = *self.parts.first()?;
        Some(self.parts.iter().skip(1).fold(first, |h, b| h.hull(b)))
    }

    pub fn volume(&self, group: &GroupSpec) -> f64 {
        // Parts are kept disjoint by construction.
        self.parts.iter().map(|b| group.volume_closed(b)).sum()
    }

    /// Subtract a list of open boxes from the closed base box, returning a
    /// disjoint cell decomposition of what remains. Cells are closed boxes;
    /// zero-thickness slivers at shared boundaries are kept (they are part of
    /// the closed difference) unless degenerate in every direction.
    pub fn subtract(base: &BoxRegion, holes: &[BoxRegion]) -> Self {
        let dim = base.dim;
        let mut xs = vec![base.lo[0], base.hi[0]];
        let mut ys = if dim > 1 {
            vec![base.lo[1], base.hi[1]]
        } else {
            vec![0.0, 0.0]
        };
        for h in holes {
            for v in [h.lo[0], h.hi[0]] {
                if v > base.lo[0] && v < base.hi[0] {
                    xs.push(v);
                }
            }
            if dim > 1 {
                for v in [h.lo[1], h.hi[1]] {
                    if v > base.lo[1] && v < base.hi[1] {
                        ys.push(v);
                    }
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        ys.sort_by(f64::total_cmp);
        ys.dedup();

        let mut out = BoxUnion::empty(dim);
        let y_cells = if dim > 1 { ys.len() - 1 } else { 1 };
        for ix in 0..xs.len() - 1 {
            for iy in 0..y_cells {
                let (ylo, yhi) = if dim > 1 { (ys[iy], ys[iy + 1]) } else { (0.0, 0.0) };
                let cell = BoxRegion {
                    lo: [xs[ix], ylo],
                    hi: [xs[ix + 1], yhi],
                    dim,
                };
                let c = cell.center();
                // A cell center in an open hole means the open part of the
                // cell is removed; its boundary faces shared with kept cells
                // remain covered by those neighbours.
                if !holes.iter().any(|h| h.contains_open(c)) {
                    out.push(cell);
                }
            }
        }
        out.coalesce();
        out
    }

    /// Merge adjacent cells that share a full face along the first axis.
    fn coalesce(&mut self) {
        if self.parts.len() < 2 {
            return;
        }
        self.parts.sort_by(|a, b| {
            a.lo[1]
                .total_cmp(&b.lo[1])
                .then(a.hi[1].total_cmp(&b.hi[1]))
                .then(a.lo[0].total_cmp(&b.lo[0]))
        });
        let mut merged: Vec<BoxRegion> = Vec::with_capacity(self.parts.len());
        for b in self.parts.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.lo[1] == b.lo[1] && last.hi[1] == b.hi[1] && last.hi[0] == b.lo[0] {
                    last.hi[0] = b.hi[0];
                    continue;
                }
            }
            merged.push(b);
        }
        self.parts = merged;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_volume_matches_kind() {
        let b = BoxRegion::line(0.0, 4.0);
        assert_eq!(GroupSpec::real_line().volume(&b), 4.0);
        assert_eq!(GroupSpec::integer_line().volume(&b), 4.0); // {0,1,2,3}
        let b2 = BoxRegion::line(-0.5, 2.5);
        assert_eq!(GroupSpec::integer_line().volume(&b2), 3.0); // {0,1,2}
        let p = BoxRegion::plane((0.0, 3.0), (0.0, 2.0));
        assert_eq!(GroupSpec::real_plane().volume(&p), 6.0);
        assert_eq!(GroupSpec::integer_plane().volume(&p), 6.0);
    }

    #[test]
    fn half_open_membership() {
        let b = BoxRegion::line(0.0, 1.0);
        assert!(b.contains_half_open([0.0, 0.0]));
        assert!(!b.contains_half_open([1.0, 0.0]));
        assert!(b.contains_closed([1.0, 0.0]));
        assert!(!b.contains_open([0.0, 0.0]));
    }

    #[test]
    fn subtract_interval() {
        let k = BoxRegion::line(-1.0, 1.0);
        let hole = BoxRegion::line(-0.2, 0.2);
        let c = BoxUnion::subtract(&k, &[hole]);
        assert_eq!(c.parts.len(), 2);
        assert!(c.contains_closed([-0.2, 0.0]));
        assert!(c.contains_closed([0.7, 0.0]));
        assert!(!c.contains_closed([0.0, 0.0]));
        let vol = c.volume(&GroupSpec::real_line());
        assert!((vol - 1.6).abs() < 1e-12);
    }

    #[test]
    fn subtract_plane_cells() {
        let k = BoxRegion::plane((0.0, 4.0), (0.0, 4.0));
        let hole = BoxRegion::plane((1.0, 2.0), (1.0, 2.0));
        let c = BoxUnion::subtract(&k, &[hole]);
        let vol = c.volume(&GroupSpec::real_plane());
        assert!((vol - 15.0).abs() < 1e-12, "vol = {vol}");
        assert!(!c.contains_closed([1.5, 1.5]));
        assert!(c.contains_closed([3.0, 3.0]));
    }
}
