//! Independent-oracle tests: brute-force or closed-form references computed
//! apart from the code paths they check.

use aperiodica::autocorr::{
    autocorr_closed_formula, autocorr_comb, autocorr_van_hove, boundary_ratio,
    eberlein_boundary_check, pairing, EmpiricalHullMeasure, VanHoveSequence,
};
use aperiodica::diffraction::{approximate_unit_check, peak_scan, ScanConfig};
use aperiodica::generators::CombGenerator;
use aperiodica::geometry::{BoxRegion, GroupSpec};
use aperiodica::kahan::KahanSum;
use aperiodica::testfn::TestFunction;
use num_complex::Complex64;

const RL: GroupSpec = GroupSpec::real_line();

/// Brute-force Thue-Morse letter sequence via bit parity.
fn thue_morse_letters(n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if (i as u64).count_ones() & 1 == 0 { 1 } else { -1 })
        .collect()
}

#[test]
fn thue_morse_generator_matches_parity_rule() {
    let gen = CombGenerator::thue_morse(0);
    let comb = gen.produce(&BoxRegion::line(0.0, 4096.0)).unwrap();
    let oracle = thue_morse_letters(4096);
    assert_eq!(comb.len(), 4096);
    for (p, w) in comb.points().iter().zip(comb.weights()) {
        let i = p[0] as usize;
        assert_eq!(w.re as i8, oracle[i], "letter mismatch at {i}");
    }
}

/// eta(1) of the +-1 Thue-Morse comb converges to -1/3 (brute force on a
/// 2^20-letter prefix).
#[test]
fn thue_morse_eta_one_is_minus_third() {
    let n = 1usize << 20;
    let letters = thue_morse_letters(n + 1);
    let mut acc = KahanSum::new();
    for i in 0..n {
        acc.add((letters[i] * letters[i + 1]) as f64);
    }
    let brute = acc.value() / n as f64;
    assert!(
        (brute + 1.0 / 3.0).abs() < 1e-3,
        "brute-force eta(1) = {brute}"
    );
    // the generator-driven autocorrelation agrees with the oracle
    let gen = CombGenerator::thue_morse(0);
    let comb = gen.produce(&BoxRegion::line(0.0, 65536.0)).unwrap();
    let gamma = autocorr_comb(&comb, 0.0, 4.0, 0).unwrap();
    let eta1 = gamma.lookup([1.0, 0.0]).re;
    assert!((eta1 - brute).abs() < 2e-3, "eta(1) = {eta1} vs {brute}");
}

/// Autocorrelations along the van Hove sequence form a Cauchy sequence with
/// sup-differences controlled by the boundary ratio.
#[test]
fn autocorr_convergence_bounded_by_boundary_ratio() {
    for gen in [
        CombGenerator::unit_lattice(0),
        CombGenerator::fibonacci(0),
        CombGenerator::thue_morse(0),
    ] {
        let seq = VanHoveSequence::geometric(&gen.group, 50.0, 2.0, 6).unwrap();
        let gammas = autocorr_van_hove(&gen, &seq, 0.0, 10.0).unwrap();
        let ratios = seq.boundary_ratios(&gen.group);
        let diffs: Vec<f64> = gammas
            .windows(2)
            .map(|w| w[0].sup_diff(&w[1]))
            .collect();
        // single constant fitted on the first half, verified on the rest
        let mut c = 0.0f64;
        for i in 0..3 {
            c = c.max(diffs[i] / ratios[i]);
        }
        for i in 3..diffs.len() {
            assert!(
                diffs[i] <= c * ratios[i] * 1.05 + 1e-12,
                "{:?}: diff {} exceeds {} at n={}",
                gen.kind,
                diffs[i],
                c * ratios[i],
                i
            );
        }
        // differences decrease towards the limit
        for i in 1..diffs.len() {
            assert!(
                diffs[i] <= diffs[i - 1] * 1.2 + 1e-12,
                "{:?}: diffs {:?}",
                gen.kind,
                diffs
            );
        }
    }
}

/// Hermitian symmetry and a positive-definiteness spot check through the
/// pairing quadratic form.
#[test]
fn autocorr_positive_definiteness_spot_check() {
    let gen = CombGenerator::fibonacci(0);
    let comb = gen.produce(&BoxRegion::line(0.0, 2000.0)).unwrap();
    let gamma = autocorr_comb(&comb, 0.0, 20.0, 0).unwrap();
    assert!(gamma.hermitian_defect() < 1e-9);
    assert!(gamma.lookup([0.0, 0.0]).re >= 0.0);

    let phi = TestFunction::tent(0.0, 0.5, 1.0);
    let mut state = 11u64;
    let mut uniform = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..20 {
        let m = 2 + (uniform() * 4.0) as usize;
        let ts: Vec<f64> = (0..m).map(|_| uniform() * 8.0 - 4.0).collect();
        let cs: Vec<Complex64> = (0..m)
            .map(|_| {
                Complex64::new(uniform() * 2.0 - 1.0, uniform() * 2.0 - 1.0)
            })
            .collect();
        let mut q = Complex64::new(0.0, 0.0);
        for (i, ci) in cs.iter().enumerate() {
            for (j, cj) in cs.iter().enumerate() {
                let p = pairing(&gamma, &phi, &phi, [ts[i] - ts[j], 0.0]).unwrap();
                q += ci.conj() * cj * p;
            }
        }
        assert!(q.re >= -1e-9, "quadratic form {q}");
        assert!(q.im.abs() <= 1e-9);
    }
}

/// The closed-formula autocorrelation of a single large lattice snapshot
/// matches the van Hove autocorrelation paired with the same test function.
#[test]
fn closed_formula_matches_van_hove_on_lattice() {
    let gen = CombGenerator::unit_lattice(0);
    let comb = gen.produce(&BoxRegion::line(0.0, 1e4)).unwrap();
    let m = EmpiricalHullMeasure::from_samples(vec![comb.clone()]).unwrap();
    let sigma = TestFunction::tent(5000.0, 3.0, 1.0 / 3.0);
    let gamma = autocorr_comb(&comb, 0.0, 8.0, 0).unwrap();
    for (center, h) in [(0.0, 1.0), (0.4, 0.7), (-1.2, 1.4)] {
        let phi = TestFunction::tent(center, h, 1.0);
        let closed = autocorr_closed_formula(&m, &sigma, &phi).unwrap();
        // gamma paired with phi directly: sum_z eta(z) phi(z)
        let mut direct = Complex64::new(0.0, 0.0);
        for (z, eta) in gamma.support.iter().zip(&gamma.eta) {
            direct += eta * phi.eval(*z);
        }
        let rel = (closed - direct).norm() / direct.norm().max(1e-12);
        assert!(rel <= 1e-2, "closed {closed} vs direct {direct} (rel {rel})");
    }
}

/// sigma-independence of the closed formula at the operation level.
#[test]
fn closed_formula_sigma_independent_on_lattice() {
    let gen = CombGenerator::unit_lattice(0);
    let m = EmpiricalHullMeasure::from_orbit(&gen, 512, 1.0, 32.0).unwrap();
    let sigma1 = TestFunction::tent(16.0, 3.0, 1.0 / 3.0);
    let sigma2 = TestFunction::raised_cosine(16.0, 4.0, 0.25);
    let phi = TestFunction::tent(0.3, 0.8, 1.0);
    let a = autocorr_closed_formula(&m, &sigma1, &phi).unwrap();
    let b = autocorr_closed_formula(&m, &sigma2, &phi).unwrap();
    assert!((a - b).norm() / a.norm() <= 1e-3, "{a} vs {b}");
}

/// Eberlein boundary defect decreases along the sequence and scales with the
/// boundary ratio on all three canonical examples.
#[test]
fn eberlein_decreases_on_canonical_examples() {
    let phi = TestFunction::tent(0.5, 1.0, 1.0);
    for gen in [
        CombGenerator::unit_lattice(0),
        CombGenerator::fibonacci(0),
        CombGenerator::thue_morse(0),
    ] {
        let seq = VanHoveSequence::geometric(&gen.group, 10.0, 2.0, 6).unwrap();
        let vals: Vec<f64> = seq
            .boxes
            .iter()
            .map(|b| eberlein_boundary_check(&gen, &gen, b, &phi).unwrap())
            .collect();
        for i in 3..vals.len() {
            assert!(
                vals[i] < vals[i - 1] + 1e-12,
                "{:?}: not decreasing {vals:?}",
                gen.kind
            );
        }
    }
}

/// Shrinking normalized tents recover the diffraction measure: the filtered
/// probe mass converges to the direct probe mass, and the normalized
/// transforms go to one pointwise.
#[test]
fn approximate_unit_recovers_atom_masses() {
    for h in [0.5, 0.25, 0.125] {
        let phi = TestFunction::tent(0.0, h, 1.0 / h);
        // |phi^| at 0 is exactly 1; pointwise convergence elsewhere
        assert!((phi.fourier(&RL, [0.0, 0.0]).norm() - 1.0).abs() < 1e-12);
        for k in [1.0, 2.0] {
            let v = phi.fourier(&RL, [k, 0.0]).norm();
            assert!(v <= 1.0 + 1e-12);
            let coarser = TestFunction::tent(0.0, 2.0 * h, 0.5 / h)
                .fourier(&RL, [k, 0.0])
                .norm();
            assert!(v >= coarser - 1e-12, "not improving at k={k}");
        }
    }
    let gen = CombGenerator::unit_lattice(0);
    let seq = VanHoveSequence::geometric(&gen.group, 512.0, 2.0, 2).unwrap();
    let spec = peak_scan(&gen, &seq, &ScanConfig::over(-2.5, 2.5)).unwrap();
    let probe = |k: f64| (1.0 + k * k).recip();
    let rows = approximate_unit_check(&spec, &gen.group, &[0.5, 0.25, 0.125, 0.0625], probe);
    for w in rows.windows(2) {
        assert!(
            w[1].difference <= 0.6 * w[0].difference + 1e-12,
            "differences do not contract: {:?}",
            rows
        );
    }
    let zero_comb_like: f64 = rows.iter().map(|r| r.weighted).sum();
    assert!(zero_comb_like.is_finite());
}

#[test]
fn boundary_ratio_interval_arithmetic_oracle() {
    // random boxes and probes against a quadrature-free direct construction
    let mut state = 5u64;
    let mut uniform = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..200 {
        let l = 4.0 + uniform() * 100.0;
        let a = 0.1 + uniform() * 1.5;
        let b = BoxRegion::line(0.0, l);
        let k = BoxRegion::line(-a, a);
        // direct: outer [-a,0] u [l, l+a]; inner [0,a] u [l-a, l)
        let expect = (2.0 * a + 2.0 * a.min(l)) / l;
        let got = boundary_ratio(&b, &k, &RL);
        assert!((got - expect).abs() <= 1e-12, "L={l} a={a}: {got} vs {expect}");
    }
}
