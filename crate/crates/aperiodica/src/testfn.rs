//! Compactly supported bump functions with closed-form Fourier transforms.
//!
//! Every function here is a product over axes of a scaled copy of one of
//! three unit shapes on `[-1, 1]`, each with unit integral:
//!
//! * tent: `1 - |u|`
//! * raised cosine: `(1 + cos(pi u)) / 2`
//! * box-mollified tent: box of halfwidth 1/2 convolved with the tent of
//!   halfwidth 1/2 and peak 2 (continuously differentiable, piecewise
//!   quadratic)
//!
//! With the convention `f^(k) = int f(x) exp(-2 pi i k x) dx`, the unit
//! shapes transform to `sinc^2(k)`, `sinc(2k) / (1 - 4k^2)` and
//! `sinc(k) sinc^2(k/2)` respectively, where `sinc(x) = sin(pi x)/(pi x)`.
//! On the integer groups, integrals and transforms are the corresponding
//! finite sums over lattice points, evaluated exactly.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{BoxRegion, GroupSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpShape {
    Tent,
    RaisedCosineBump,
    BoxMollifiedTent,
}

/// `sin(pi x) / (pi x)` with a series fallback near zero.
pub fn sinc(x: f64) -> f64 {
    let px = std::f64::consts::PI * x;
    if px.abs() < 1e-6 {
        1.0 - px * px / 6.0
    } else {
        px.sin() / px
    }
}

impl BumpShape {
    /// Unit shape on `[-1, 1]`.
    pub fn eval_unit(&self, u: f64) -> f64 {
        let a = u.abs();
        if a >= 1.0 {
            return 0.0;
        }
        match self {
            BumpShape::Tent => 1.0 - a,
            BumpShape::RaisedCosineBump => 0.5 * (1.0 + (std::f64::consts::PI * u).cos()),
            BumpShape::BoxMollifiedTent => tent_cdf(u + 0.5) - tent_cdf(u - 0.5),
        }
    }

    /// Transform of the unit shape at frequency `k`.
    pub fn fourier_unit(&self, k: f64) -> f64 {
        match self {
            BumpShape::Tent => {
                let s = sinc(k);
                s * s
            }
            BumpShape::RaisedCosineBump => {
                let d = 1.0 - 4.0 * k * k;
                if d.abs() < 1e-6 {
                    // limit value 1/2 at k = +/- 1/2, linear correction in
                    // eps = |k| - 1/2
                    let eps = k.abs() - 0.5;
                    0.5 - 1.5 * eps
                } else {
                    sinc(2.0 * k) / d
                }
            }
            BumpShape::BoxMollifiedTent => {
                let s = sinc(0.5 * k);
                sinc(k) * s * s
            }
        }
    }

    /// Interior breakpoints of the unit shape (where smoothness drops).
    fn unit_kinks(&self) -> &'static [f64] {
        match self {
            BumpShape::Tent => &[-1.0, 0.0, 1.0],
            BumpShape::RaisedCosineBump => &[-1.0, 1.0],
            BumpShape::BoxMollifiedTent => &[-1.0, -0.5, 0.0, 0.5, 1.0],
        }
    }

    /// Maximum slope of the unit shape.
    fn unit_max_slope(&self) -> f64 {
        match self {
            BumpShape::Tent => 1.0,
            BumpShape::RaisedCosineBump => 0.5 * std::f64::consts::PI,
            BumpShape::BoxMollifiedTent => 2.0,
        }
    }
}

/// Antiderivative of the tent with halfwidth 1/2 and peak 2.
fn tent_cdf(v: f64) -> f64 {
    if v <= -0.5 {
        0.0
    } else if v < 0.0 {
        2.0 * v * v + 2.0 * v + 0.5
    } else if v < 0.5 {
        0.5 + 2.0 * v - 2.0 * v * v
    } else {
        1.0
    }
}

/// A complex multiple of a product of scaled unit shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub shape: BumpShape,
    pub center: Point,
    pub halfwidth: Point,
    #[serde(with = "crate::io::complex_serde")]
    pub amplitude: Complex64,
    pub dim: usize,
}

impl TestFunction {
    pub fn new(shape: BumpShape, center: Point, halfwidth: Point, amplitude: Complex64, dim: usize) -> Self {
        TestFunction { shape, center, halfwidth, amplitude, dim }
    }

    /// One-dimensional bump with real amplitude.
    pub fn bump1d(shape: BumpShape, center: f64, halfwidth: f64, amplitude: f64) -> Self {
        TestFunction {
            shape,
            center: [center, 0.0],
            halfwidth: [halfwidth, 1.0],
            amplitude: Complex64::new(amplitude, 0.0),
            dim: 1,
        }
    }

    pub fn tent(center: f64, halfwidth: f64, amplitude: f64) -> Self {
        Self::bump1d(BumpShape::Tent, center, halfwidth, amplitude)
    }

    pub fn raised_cosine(center: f64, halfwidth: f64, amplitude: f64) -> Self {
        Self::bump1d(BumpShape::RaisedCosineBump, center, halfwidth, amplitude)
    }

    pub fn eval(&self, p: Point) -> Complex64 {
        let mut v = 1.0;
        for i in 0..self.dim {
            v *= self.shape.eval_unit((p[i] - self.center[i]) / self.halfwidth[i]);
            if v == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
        }
        self.amplitude * v
    }

    /// Real part of the product profile without the amplitude.
    pub fn profile(&self, p: Point) -> f64 {
        let mut v = 1.0;
        for i in 0..self.dim {
            v *= self.shape.eval_unit((p[i] - self.center[i]) / self.halfwidth[i]);
        }
        v
    }

    /// Closed support `center +- halfwidth` as a box.
    pub fn support(&self) -> BoxRegion {
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for i in 0..self.dim {
            lo[i] = self.center[i] - self.halfwidth[i];
            hi[i] = self.center[i] + self.halfwidth[i];
        }
        BoxRegion { lo, hi, dim: self.dim }
    }

    /// Haar integral of the function.
    pub fn integral(&self, group: &GroupSpec) -> Complex64 {
        if group.discrete() {
            let mut s = 0.0;
            self.for_each_lattice_point(|p| s += self.profile(p));
            self.amplitude * s
        } else {
            let mut h = 1.0;
            for i in 0..self.dim {
                h *= self.halfwidth[i];
            }
            self.amplitude * h
        }
    }

    /// Fourier transform at `k` under `(k,t) = exp(-2 pi i k.t)`.
    pub fn fourier(&self, group: &GroupSpec, k: Point) -> Complex64 {
        if group.discrete() {
            let mut s = Complex64::new(0.0, 0.0);
            self.for_each_lattice_point(|p| {
                let phase = -2.0 * std::f64::consts::PI * (k[0] * p[0] + k[1] * p[1]);
                s += self.profile(p) * Complex64::new(phase.cos(), phase.sin());
            });
            self.amplitude * s
        } else {
            let mut v = self.amplitude;
            for i in 0..self.dim {
                let h = self.halfwidth[i];
                let phase = -2.0 * std::f64::consts::PI * k[i] * self.center[i];
                v *= h
                    * self.shape.fourier_unit(h * k[i])
                    * Complex64::new(phase.cos(), phase.sin());
            }
            v
        }
    }

    fn for_each_lattice_point(&self, mut f: impl FnMut(Point)) {
        let s = self.support();
        let x0 = s.lo[0].ceil() as i64;
        let x1 = s.hi[0].floor() as i64;
        if self.dim == 1 {
            for x in x0..=x1 {
                f([x as f64, 0.0]);
            }
        } else {
            let y0 = s.lo[1].ceil() as i64;
            let y1 = s.hi[1].floor() as i64;
            for x in x0..=x1 {
                for y in y0..=y1 {
                    f([x as f64, y as f64]);
                }
            }
        }
    }

    /// Reflection `x -> phi(-x)`; the shapes are even so only the center moves.
    pub fn reflected(&self) -> Self {
        let mut r = *self;
        for i in 0..self.dim {
            r.center[i] = -r.center[i];
        }
        r
    }

    /// Complex conjugate of the function.
    pub fn conjugated(&self) -> Self {
        let mut r = *self;
        r.amplitude = r.amplitude.conj();
        r
    }

    /// The function `phi~(t) = conj(phi(-t))`.
    pub fn adjoint(&self) -> Self {
        self.reflected().conjugated()
    }

    /// `beta_t(phi) = delta_t * phi`, i.e. `x -> phi(x - t)`.
    pub fn translated(&self, t: Point) -> Self {
        let mut r = *self;
        for i in 0..self.dim {
            r.center[i] += t[i];
        }
        r
    }

    /// Rescale the amplitude so the Haar integral is 1.
    pub fn with_unit_integral(&self, group: &GroupSpec) -> Self {
        let mut r = *self;
        let i = self.integral(group);
        r.amplitude = self.amplitude / i;
        r
    }

    /// Breakpoints of the profile along one axis, in increasing order.
    pub fn kinks_axis(&self, axis: usize) -> Vec<f64> {
        self.shape
            .unit_kinks()
            .iter()
            .map(|u| self.center[axis] + u * self.halfwidth[axis])
            .collect()
    }

    /// Upper bound for the Lipschitz constant of `|phi|` along any axis.
    pub fn lipschitz_bound(&self) -> f64 {
        let mut l: f64 = 0.0;
        for i in 0..self.dim {
            l = l.max(self.shape.unit_max_slope() / self.halfwidth[i]);
        }
        self.amplitude.norm() * l
    }

    /// Convolution `self * other` with respect to the group's Haar measure.
    pub fn convolve(&self, other: &TestFunction, group: &GroupSpec) -> PairConvolution {
        PairConvolution {
            a: *self,
            b: *other,
            group: *group,
        }
    }
}

/// Callable convolution of two family members.
///
/// On the real kinds the per-axis integrand is piecewise smooth between the
/// kinks of both factors, so fixed-order Gauss-Legendre quadrature on the
/// kink partition is exact for the polynomial shapes and accurate to machine
/// precision for the raised cosine. On the integer kinds the convolution is
/// a finite sum.
#[derive(Debug, Clone, Copy)]
pub struct PairConvolution {
    pub a: TestFunction,
    pub b: TestFunction,
    pub group: GroupSpec,
}

const GL_ORDER: usize = 24;

fn gl_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` via Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_p(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

fn legendre_p(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl PairConvolution {
    /// Support of the convolution (Minkowski sum of the factor supports).
    pub fn support(&self) -> BoxRegion {
        self.a.support().minkowski_sum(&self.b.support())
    }

    pub fn eval(&self, x: Point) -> Complex64 {
        let mut v = self.a.amplitude * self.b.amplitude;
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        for axis in 0..self.a.dim {
            v *= self.eval_axis(axis, x[axis]);
            if v == Complex64::new(0.0, 0.0) {
                return v;
            }
        }
        v
    }

    fn eval_axis(&self, axis: usize, x: f64) -> f64 {
        let (alo, ahi) = (
            self.a.center[axis] - self.a.halfwidth[axis],
            self.a.center[axis] + self.a.halfwidth[axis],
        );
        let (blo, bhi) = (
            self.b.center[axis] - self.b.halfwidth[axis],
            self.b.center[axis] + self.b.halfwidth[axis],
        );
        // integrand s -> a(s) b(x - s) supported on [alo, ahi] n [x-bhi, x-blo]
        let lo = alo.max(x - bhi);
        let hi = ahi.min(x - blo);
        if hi <= lo {
            return 0.0;
        }
        let fa = |s: f64| {
            self.a
                .shape
                .eval_unit((s - self.a.center[axis]) / self.a.halfwidth[axis])
        };
        let fb = |s: f64| {
            self.b
                .shape
                .eval_unit((s - self.b.center[axis]) / self.b.halfwidth[axis])
        };
        if self.group.discrete() {
            let mut s = 0.0;
            let i0 = lo.ceil() as i64;
            let i1 = hi.floor() as i64;
            for i in i0..=i1 {
                let si = i as f64;
                s += fa(si) * fb(x - si);
            }
            return s;
        }
        let mut cuts: Vec<f64> = vec![lo, hi];
        for k in self.a.kinks_axis(axis) {
            if k > lo && k < hi {
                cuts.push(k);
            }
        }
        for k in self.b.kinks_axis(axis) {
            let c = x - k;
            if c > lo && c < hi {
                cuts.push(c);
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (p, q) = (w[0], w[1]);
            let mid = 0.5 * (p + q);
            let half = 0.5 * (q - p);
            let mut acc = 0.0;
            for &(node, weight) in gl_nodes() {
                let s = mid + half * node;
                acc += weight * fa(s) * fb(x - s);
            }
            total += acc * half;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const RL: GroupSpec = GroupSpec::real_line();

    #[test]
    fn unit_shapes_have_unit_integral() {
        for shape in [BumpShape::Tent, BumpShape::RaisedCosineBump, BumpShape::BoxMollifiedTent] {
            // Riemann check of the closed-form normalization.
            let n = 200_000;
            let mut s = 0.0;
            for i in 0..n {
                let u = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                s += shape.eval_unit(u);
            }
            s *= 2.0 / n as f64;
            assert_relative_eq!(s, 1.0, max_relative = 1e-6);
        }
    }

    #[test]
    fn fourier_matches_quadrature() {
        for shape in [BumpShape::Tent, BumpShape::RaisedCosineBump, BumpShape::BoxMollifiedTent] {
            for k in [0.0, 0.17, 0.5, 1.0, 2.3] {
                let n = 400_000;
                let mut re = 0.0;
                let mut im = 0.0;
                for i in 0..n {
                    let u = -1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
                    let v = shape.eval_unit(u);
                    let phase = -2.0 * std::f64::consts::PI * k * u;
                    re += v * phase.cos();
                    im += v * phase.sin();
                }
                re *= 2.0 / n as f64;
                im *= 2.0 / n as f64;
                let cf = shape.fourier_unit(k);
                assert_relative_eq!(re, cf, epsilon = 1e-5);
                assert!(im.abs() < 1e-5);
            }
        }
    }

    #[test]
    fn raised_cosine_transform_at_half() {
        // exact value 1/2 at the removable singularity
        assert_relative_eq!(
            BumpShape::RaisedCosineBump.fourier_unit(0.5),
            0.5,
            epsilon = 1e-9
        );
        assert_relative_eq!(
            BumpShape::RaisedCosineBump.fourier_unit(0.5 + 1e-9),
            0.5,
            epsilon = 1e-6
        );
    }

    #[test]
    fn scaled_fourier_and_integral() {
        let phi = TestFunction::tent(0.75, 0.5, 2.0);
        assert_relative_eq!(phi.integral(&RL).re, 1.0, epsilon = 1e-12);
        let k = 1.3;
        let f = phi.fourier(&RL, [k, 0.0]);
        let expect = 2.0 * 0.5 * sinc(0.5 * k).powi(2);
        let phase = -2.0 * std::f64::consts::PI * k * 0.75;
        assert_relative_eq!(f.re, expect * phase.cos(), epsilon = 1e-12);
        assert_relative_eq!(f.im, expect * phase.sin(), epsilon = 1e-12);
    }

    #[test]
    fn tent_convolution_closed_values() {
        // (tent~ * tent)(0) for the unit tent is int tent^2 = 2/3
        let phi = TestFunction::tent(0.0, 1.0, 1.0);
        let conv = phi.adjoint().convolve(&phi, &RL);
        assert_relative_eq!(conv.eval([0.0, 0.0]).re, 2.0 / 3.0, epsilon = 1e-12);
        // at +-1 the overlap integral is 1/6
        assert_relative_eq!(conv.eval([1.0, 0.0]).re, 1.0 / 6.0, epsilon = 1e-12);
        assert_relative_eq!(conv.eval([-1.0, 0.0]).re, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(conv.eval([2.01, 0.0]).re, 0.0);
    }

    #[test]
    fn convolution_is_symmetric_in_factors() {
        let a = TestFunction::raised_cosine(0.3, 0.8, 1.5);
        let b = TestFunction::tent(-0.2, 0.6, 0.7);
        let ab = a.convolve(&b, &RL);
        let ba = b.convolve(&a, &RL);
        for x in [-1.0, -0.3, 0.0, 0.4, 1.2] {
            assert_relative_eq!(ab.eval([x, 0.0]).re, ba.eval([x, 0.0]).re, epsilon = 1e-12);
        }
    }

    #[test]
    fn discrete_fourier_is_finite_sum() {
        let phi = TestFunction::tent(0.0, 1.0, 1.0);
        let zl = GroupSpec::integer_line();
        // only lattice point in the open support is 0
        assert_relative_eq!(phi.integral(&zl).re, 1.0, epsilon = 1e-15);
        let f = phi.fourier(&zl, [0.3, 0.0]);
        assert_relative_eq!(f.re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn gl_nodes_integrate_polynomials() {
        let nodes = gl_nodes();
        // int_{-1}^{1} x^8 dx = 2/9
        let s: f64 = nodes.iter().map(|(x, w)| w * x.powi(8)).sum();
        assert_relative_eq!(s, 2.0 / 9.0, epsilon = 1e-13);
    }
}
