//! Coverage for the planar groups and the counting-measure (integer) kinds.

use aperiodica::autocorr::autocorr_comb;
use aperiodica::diffraction::{atom_intensity, structure_factor};
use aperiodica::dynamics::{correlation, weyl_sum};
use aperiodica::generators::{CombGenerator, WeightFn};
use aperiodica::geometry::{BoxRegion, GroupSpec};
use aperiodica::measures::{TranslationBound, WeightedComb};
use aperiodica::testfn::TestFunction;
use aperiodica::topology::{fell_refines_ukv, ukv_related, PointSetWindowed, UkvParams};
use approx::assert_relative_eq;
use num_complex::Complex64;

#[test]
fn planar_lattice_produce_and_autocorr() {
    let gen = CombGenerator::lattice(
        GroupSpec::real_plane(),
        vec![1.0, 1.0],
        WeightFn::Constant,
        0,
    )
    .unwrap();
    let w = BoxRegion::plane((0.0, 16.0), (0.0, 16.0));
    let comb = gen.produce(&w).unwrap();
    assert_eq!(comb.len(), 256);
    assert_relative_eq!(gen.density(), 1.0);

    let gamma = autocorr_comb(&comb, 0.0, 3.0, 0).unwrap();
    // eta((1,0)) counts 15*16 ordered pairs over volume 256
    assert_relative_eq!(
        gamma.lookup([1.0, 0.0]).re,
        15.0 * 16.0 / 256.0,
        epsilon = 1e-12
    );
    assert_relative_eq!(
        gamma.lookup([1.0, 1.0]).re,
        15.0 * 15.0 / 256.0,
        epsilon = 1e-12
    );
    assert!(gamma.hermitian_defect() < 1e-12);
}

#[test]
fn planar_structure_factor_bragg_points() {
    let gen = CombGenerator::lattice(
        GroupSpec::real_plane(),
        vec![1.0, 1.0],
        WeightFn::Constant,
        0,
    )
    .unwrap();
    let w = BoxRegion::plane((0.0, 32.0), (0.0, 32.0));
    let comb = gen.produce(&w).unwrap();
    // at a dual lattice point the normalized amplitude is the density
    assert_relative_eq!(atom_intensity(&comb, [1.0, 2.0]), 1.0, epsilon = 1e-9);
    assert_relative_eq!(
        structure_factor(&comb, [0.0, 0.0]),
        1024.0,
        epsilon = 1e-6
    );
    // generic k: product of 1D Dirichlet kernels
    let k = [0.21, 0.37];
    let d = |kk: f64| {
        let num = (std::f64::consts::PI * 32.0 * kk).sin();
        let den = (std::f64::consts::PI * kk).sin();
        (num / den).powi(2)
    };
    assert_relative_eq!(
        structure_factor(&comb, k),
        d(k[0]) * d(k[1]) / 1024.0,
        max_relative = 1e-8
    );
}

#[test]
fn alternating_weights_shift_the_peak() {
    let gen = CombGenerator::lattice(
        GroupSpec::real_line(),
        vec![1.0],
        WeightFn::Alternating,
        0,
    )
    .unwrap();
    let comb = gen.produce(&BoxRegion::line(0.0, 256.0)).unwrap();
    // (-1)^n comb diffracts at half-integers instead of integers
    assert!(atom_intensity(&comb, [0.5, 0.0]) > 0.99);
    assert!(atom_intensity(&comb, [0.0, 0.0]) < 1e-12);
}

#[test]
fn integer_group_counting_measure() {
    let zl = GroupSpec::integer_line();
    let gen = CombGenerator::lattice(zl, vec![1.0], WeightFn::Constant, 0).unwrap();
    let w = BoxRegion::line(0.0, 64.0);
    let comb = gen.produce(&w).unwrap();
    assert_eq!(comb.len(), 64);
    // Haar volume is the point count
    assert_relative_eq!(zl.volume(&w), 64.0);
    assert_relative_eq!(comb.density(), 1.0);

    let gamma = autocorr_comb(&comb, 0.0, 8.0, 0).unwrap();
    assert_relative_eq!(gamma.lookup([3.0, 0.0]).re, 61.0 / 64.0, epsilon = 1e-12);

    // discrete Weyl sum at the trivial character: density * sum phi
    let phi = TestFunction::tent(0.0, 1.0, 1.0);
    let inner = BoxRegion::line(2.0, 62.0);
    let wsum = weyl_sum(&comb, &phi, [0.0, 0.0], &inner).unwrap();
    assert_relative_eq!(wsum.re, 1.0, epsilon = 1e-12);
    // at the dual-torus point k=1 ~ 0 the value repeats exactly
    let w1 = weyl_sum(&comb, &phi, [1.0, 0.0], &inner).unwrap();
    assert_relative_eq!(w1.re, wsum.re, epsilon = 1e-12);

    // exact discrete correlation is real and nonnegative at t = 0
    let c0 = correlation(&comb, &phi, &phi, 0.0, &inner, 1.0).unwrap();
    assert!(c0.re > 0.0 && c0.im.abs() < 1e-12);
}

#[test]
fn integer_comb_bound_and_io() {
    let zl = GroupSpec::integer_line();
    let comb = WeightedComb::new(
        zl,
        BoxRegion::line(0.0, 16.0),
        (0..16).map(|n| [n as f64, 0.0]).collect(),
        (0..16).map(|_| Complex64::new(1.0, 0.0)).collect(),
    )
    .unwrap();
    let bound = TranslationBound::new(1.0, BoxRegion::symmetric([0.5, 0.0], 1)).unwrap();
    let (ok, _, _) = comb.is_translation_bounded(&bound, 0.25).unwrap();
    assert!(ok);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    aperiodica::io::write_comb_csv(&path, &comb, None).unwrap();
    let (back, sidecar) = aperiodica::io::read_comb_csv(&path).unwrap();
    assert_eq!(back.points(), comb.points());
    assert_eq!(sidecar.group, zl);
}

#[test]
fn planar_ukv_and_fell() {
    let dim = 2;
    let window = BoxRegion::plane((-4.0, 4.0), (-4.0, 4.0));
    let p1 = PointSetWindowed::new(vec![[0.0, 0.0], [1.0, 1.0]], window, dim);
    let p2 = PointSetWindowed::new(vec![[0.05, -0.05], [1.0, 1.08]], window, dim);
    let k = BoxRegion::plane((-2.0, 2.0), (-2.0, 2.0));
    let u = UkvParams::new(k, [0.2, 0.2], dim);
    assert!(ukv_related(&p1, &p2, &u).unwrap());
    let tight = UkvParams::new(k, [0.03, 0.03], dim);
    assert!(!ukv_related(&p1, &p2, &tight).unwrap());

    // planar basis construction: C is K minus two open squares
    let e = fell_refines_ukv(&p1, &u).unwrap();
    assert_eq!(e.f.len(), 2);
    assert!(!e.c.contains_closed([0.0, 0.0]));
    assert!(!e.c.contains_closed([1.0, 1.0]));
    assert!(e.c.contains_closed([-1.0, -1.0]));
    // a probe in the element is rubber-related to H
    let l = PointSetWindowed::new(
        vec![[0.02, 0.01], [0.98, 1.03], [3.5, -3.5]],
        window,
        dim,
    );
    assert!(e.contains(&l));
    assert!(ukv_related(&l, &p1, &u).unwrap());
}

#[test]
fn planar_evaluate_and_fourier_products() {
    let g = GroupSpec::real_plane();
    let phi = TestFunction::new(
        aperiodica::testfn::BumpShape::Tent,
        [0.0, 0.0],
        [1.0, 2.0],
        Complex64::new(1.0, 0.0),
        2,
    );
    assert_relative_eq!(phi.integral(&g).re, 2.0, epsilon = 1e-12);
    let f = phi.fourier(&g, [0.3, 0.1]);
    let sinc2 = |x: f64| {
        let s = aperiodica::testfn::sinc(x);
        s * s
    };
    assert_relative_eq!(
        f.re,
        1.0 * sinc2(0.3) * 2.0 * sinc2(0.2),
        epsilon = 1e-12
    );
    let comb = WeightedComb::new(
        g,
        BoxRegion::plane((-2.0, 2.0), (-2.0, 2.0)),
        vec![[0.5, -1.0]],
        vec![Complex64::new(2.0, 0.0)],
    )
    .unwrap();
    assert_relative_eq!(
        comb.evaluate(&phi).re,
        2.0 * 0.5 * 0.5,
        epsilon = 1e-12
    );
}
