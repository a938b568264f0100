//! Fast self-checks of the arithmetic core, one line per check.
//!
//! These are the closed-form example values every module documents, plus a
//! reduced-size Poisson summation run and the algebraic identity of the
//! golden-ratio constant. The whole table runs in seconds and is wired to
//! the `selftest` CLI subcommand with TAP-style output.

use num_complex::Complex64;

use crate::autocorr;
use crate::diffraction;
use crate::dynamics;
use crate::generators::{CombGenerator, DisplacementRule};
use crate::geometry::{BoxRegion, BoxUnion, GroupSpec};
use crate::measures::{TranslationBound, WeightedComb};
use crate::quadratic;
use crate::testfn::TestFunction;
use crate::topology;

type CheckFn = fn() -> Result<(), String>;

pub struct Check {
    pub name: &'static str,
    pub run: CheckFn,
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), String> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {a} vs {b}"))
    }
}

const RL: GroupSpec = GroupSpec::real_line();

fn comb(window: (f64, f64), pts: &[(f64, f64, f64)]) -> WeightedComb {
    WeightedComb::new(
        RL,
        BoxRegion::line(window.0, window.1),
        pts.iter().map(|(x, _, _)| [*x, 0.0]).collect(),
        pts.iter()
            .map(|(_, re, im)| Complex64::new(*re, *im))
            .collect(),
    )
    .expect("valid selftest comb")
}

fn evaluate_tent_peak() -> Result<(), String> {
    let c = comb((-2.0, 2.0), &[(0.0, 1.0, 0.0)]);
    close(
        c.evaluate(&TestFunction::tent(0.0, 1.0, 1.0)).re,
        1.0,
        1e-12,
        "tent peak",
    )
}

fn evaluate_two_points() -> Result<(), String> {
    let c = comb((-2.0, 2.0), &[(0.0, 1.0, 0.0), (0.5, 1.0, 0.0)]);
    close(
        c.evaluate(&TestFunction::tent(0.0, 1.0, 1.0)).re,
        1.5,
        1e-12,
        "tent(0)+tent(0.5)",
    )
}

fn evaluate_empty() -> Result<(), String> {
    let c = WeightedComb::empty(RL, BoxRegion::line(-1.0, 1.0));
    ensure(
        c.evaluate(&TestFunction::tent(0.0, 1.0, 1.0)) == Complex64::new(0.0, 0.0),
        "empty comb evaluates to 0",
    )
}

fn total_variation_pair() -> Result<(), String> {
    let c = comb((-1.0, 2.0), &[(0.0, 1.0, 0.0), (1.0, -1.0, 0.0)]);
    close(
        c.total_variation_on(&BoxRegion::line(-0.5, 1.5)),
        2.0,
        1e-12,
        "|1| + |-1|",
    )
}

fn total_variation_modulus() -> Result<(), String> {
    let c = comb((-1.0, 1.0), &[(0.0, 0.0, 3.0)]);
    close(
        c.total_variation_on(&BoxRegion::line(-1.0, 1.0)),
        3.0,
        1e-12,
        "|3i|",
    )
}

fn translation_bound_lattice() -> Result<(), String> {
    let pts: Vec<(f64, f64, f64)> = (0..100).map(|n| (n as f64, 1.0, 0.0)).collect();
    let c = comb((0.0, 100.0), &pts);
    let v = BoxRegion::line(0.0, 1.5);
    let (ok2, _, _) = c
        .is_translation_bounded(&TranslationBound::new(2.0, v).unwrap(), 0.25)
        .map_err(|e| e.to_string())?;
    let (ok1, _, worst) = c
        .is_translation_bounded(&TranslationBound::new(1.0, v).unwrap(), 0.25)
        .map_err(|e| e.to_string())?;
    ensure(ok2, "C=2 holds")?;
    ensure(!ok1 && worst == 2.0, "C=1 fails with two points")?;
    let empty = WeightedComb::empty(RL, BoxRegion::line(0.0, 100.0));
    let (ok_e, _, _) = empty
        .is_translation_bounded(&TranslationBound::new(1.0, v).unwrap(), 0.5)
        .map_err(|e| e.to_string())?;
    ensure(ok_e, "empty comb is bounded")
}

fn translate_action() -> Result<(), String> {
    let c = comb((-1.0, 1.0), &[(0.0, 1.0, 0.0)]);
    ensure(c.translate([2.0, 0.0]).points()[0] == [2.0, 0.0], "shift by 2")?;
    let ab = c.translate([0.5, 0.0]).translate([1.5, 0.0]);
    ensure(ab.points() == c.translate([2.0, 0.0]).points(), "composition")?;
    ensure(c.translate([0.0, 0.0]) == c, "identity")
}

fn reflect_involution() -> Result<(), String> {
    let c = comb((0.0, 2.0), &[(1.0, 0.0, 1.0)]);
    let r = c.reflect();
    ensure(r.points()[0] == [-1.0, 0.0], "point negated")?;
    ensure(r.weights()[0] == Complex64::new(0.0, -1.0), "weight conjugated")?;
    ensure(r.reflect() == c, "involution")
}

fn f_phi_edge() -> Result<(), String> {
    let c = comb((-2.0, 2.0), &[(-1.0, 2.0, 0.0)]);
    ensure(
        c.f_phi(&TestFunction::tent(0.0, 1.0, 1.0)) == Complex64::new(0.0, 0.0),
        "tent(1) = 0",
    )
}

fn f_phi_equivariance() -> Result<(), String> {
    let phi = TestFunction::tent(0.2, 0.9, 1.3);
    let c = comb((-4.0, 4.0), &[(0.3, 1.0, 0.0), (1.7, -0.5, 0.25)]);
    let lhs = c.f_phi_at(&phi, [0.6, 0.0]);
    let rhs = c.translate([-0.6, 0.0]).f_phi(&phi);
    close(lhs.re, rhs.re, 1e-12, "re")?;
    close(lhs.im, rhs.im, 1e-12, "im")
}

fn convolve_deltas() -> Result<(), String> {
    let a = comb((0.0, 2.0), &[(1.0, 2.0, 0.0)]);
    let b = comb((0.0, 3.0), &[(2.0, 0.0, 3.0)]);
    let ab = a.convolve_finite(&b);
    ensure(ab.len() == 1 && ab.points()[0] == [3.0, 0.0], "delta sum point")?;
    ensure(ab.weights()[0] == Complex64::new(0.0, 6.0), "weight product")?;
    let ba = b.convolve_finite(&a);
    ensure(ab.points() == ba.points() && ab.weights() == ba.weights(), "commutativity")
}

fn lattice_window_points() -> Result<(), String> {
    let c = CombGenerator::unit_lattice(0)
        .produce(&BoxRegion::line(0.0, 4.0))
        .map_err(|e| e.to_string())?;
    let xs: Vec<f64> = c.points().iter().map(|p| p[0]).collect();
    ensure(xs == vec![0.0, 1.0, 2.0, 3.0], "points 0..4")
}

fn lattice_density_value() -> Result<(), String> {
    close(CombGenerator::unit_lattice(0).density(), 1.0, 1e-15, "density")
}

fn generator_consistency() -> Result<(), String> {
    for gen in [
        CombGenerator::unit_lattice(1),
        CombGenerator::fibonacci(1),
        CombGenerator::thue_morse(1),
    ] {
        let full = gen
            .produce(&BoxRegion::line(0.0, 64.0))
            .map_err(|e| e.to_string())?;
        let half = gen
            .produce(&BoxRegion::line(0.0, 32.0))
            .map_err(|e| e.to_string())?;
        if half.points() != full.restrict(&BoxRegion::line(0.0, 32.0)).points() {
            return Err(format!("window consistency broken for {:?}", gen.kind));
        }
    }
    Ok(())
}

fn perturbed_eps_zero() -> Result<(), String> {
    let gen = CombGenerator::perturbed_lattice(1.0, 0.0, DisplacementRule::Iid, 3)
        .map_err(|e| e.to_string())?;
    let lat = CombGenerator::unit_lattice(3);
    let w = BoxRegion::line(0.0, 32.0);
    ensure(
        gen.produce(&w).map_err(|e| e.to_string())?.points()
            == lat.produce(&w).map_err(|e| e.to_string())?.points(),
        "eps = 0 reproduces the lattice",
    )
}

fn tau_algebraic_identity() -> Result<(), String> {
    let tau = quadratic::TAU;
    close(tau * tau, tau + 1.0, 1e-12, "tau^2 = tau + 1")?;
    close(quadratic::SQRT5, 2.0 * tau - 1.0, 1e-12, "sqrt5 = 2 tau - 1")?;
    close(quadratic::SQRT5 * quadratic::SQRT5, 5.0, 1e-12, "sqrt5^2 = 5")
}

fn fibonacci_gap_membership() -> Result<(), String> {
    // gaps must match the runtime-computed golden ratio, independently of
    // the stored constant
    let golden = 0.5 * (1.0 + 5f64.sqrt());
    let c = CombGenerator::fibonacci(0)
        .produce(&BoxRegion::line(0.0, 200.0))
        .map_err(|e| e.to_string())?;
    for w in c.points().windows(2) {
        let gap = w[1][0] - w[0][0];
        if (gap - 1.0).abs() > 1e-9 && (gap - golden).abs() > 1e-9 {
            return Err(format!("gap {gap} is neither 1 nor the golden ratio"));
        }
    }
    Ok(())
}

fn golden_membership_roundtrip() -> Result<(), String> {
    let k = (3.0 - 2.0 * quadratic::TAU) / (quadratic::TAU + 2.0);
    ensure(
        quadratic::golden_dual_membership(k, 20, 1e-9) == Some((3, -2)),
        "module point recovered",
    )?;
    ensure(
        quadratic::golden_dual_membership(0.33, 5, 1e-6).is_none(),
        "non-module point rejected",
    )
}

fn dyadic_membership_values() -> Result<(), String> {
    ensure(
        quadratic::dyadic_membership(0.75, 10, 1e-9) == Some((3, 2)),
        "3/4 reduces",
    )?;
    ensure(
        quadratic::dyadic_membership(1.0 / 3.0, 10, 1e-6).is_none(),
        "1/3 is not dyadic",
    )
}

fn ukv_diagonal_and_examples() -> Result<(), String> {
    let p1 = topology::PointSetWindowed::new(vec![[0.0, 0.0]], BoxRegion::line(-2.0, 2.0), 1);
    let p2 = topology::PointSetWindowed::new(vec![[0.1, 0.0]], BoxRegion::line(-2.0, 2.0), 1);
    let u = topology::UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.2, 0.0], 1);
    ensure(
        topology::ukv_related(&p1, &p1, &u).map_err(|e| e.to_string())?,
        "diagonal",
    )?;
    ensure(
        topology::ukv_related(&p1, &p2, &u).map_err(|e| e.to_string())?,
        "|0 - 0.1| < 0.2",
    )?;
    let tight = topology::UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.05, 0.0], 1);
    ensure(
        !topology::ukv_related(&p1, &p2, &tight).map_err(|e| e.to_string())?,
        "0.1 not within 0.05",
    )
}

fn metric_zero_and_symmetry() -> Result<(), String> {
    let a = comb((-4.0, 4.0), &[(0.0, 1.0, 0.0)]);
    let b = comb((-4.0, 4.0), &[(0.3, 1.0, 0.0)]);
    ensure(topology::vague_metric(&a, &a, 16) == 0.0, "d(mu,mu) = 0")?;
    close(
        topology::vague_metric(&a, &b, 16),
        topology::vague_metric(&b, &a, 16),
        1e-15,
        "symmetry",
    )
}

fn fell_miss_only() -> Result<(), String> {
    let h = topology::PointSetWindowed::new(vec![], BoxRegion::line(-3.0, 3.0), 1);
    let u = topology::UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.4, 0.0], 1);
    let e = topology::fell_refines_ukv(&h, &u).map_err(|e| e.to_string())?;
    ensure(e.f.is_empty(), "no hitting family")?;
    ensure(e.c.contains_closed([0.5, 0.0]), "C = K")
}

fn fell_point_construction() -> Result<(), String> {
    let h = topology::PointSetWindowed::new(vec![[0.0, 0.0]], BoxRegion::line(-3.0, 3.0), 1);
    let u = topology::UkvParams::new(BoxRegion::line(-1.0, 1.0), [0.4, 0.0], 1);
    let e = topology::fell_refines_ukv(&h, &u).map_err(|e| e.to_string())?;
    ensure(e.f.len() == 1, "one hitting box")?;
    close(e.f[0].lo[0], -0.2, 1e-12, "W lo")?;
    close(e.f[0].hi[0], 0.2, 1e-12, "W hi")?;
    ensure(!e.c.contains_closed([0.0, 0.0]), "0 removed from C")
}

fn repetitivity_lattice_small() -> Result<(), String> {
    let c = CombGenerator::unit_lattice(0)
        .produce(&BoxRegion::line(-30.0, 40.0))
        .map_err(|e| e.to_string())?;
    let p = topology::PointSetWindowed::from_comb(&c);
    let u = topology::UkvParams::new(BoxRegion::line(0.0, 5.0), [0.1, 0.0], 1);
    let rep = topology::repetitivity_scan(&p, &u, 0.0, 20.0, 0.1, 1.01)
        .map_err(|e| e.to_string())?;
    ensure(rep.dense, "integer witnesses are 1-dense")
}

fn flc_lattice_single_patch() -> Result<(), String> {
    let c = CombGenerator::unit_lattice(0)
        .produce(&BoxRegion::line(0.0, 200.0))
        .map_err(|e| e.to_string())?;
    let rep = topology::flc_check(&topology::PointSetWindowed::from_comb(&c), 3.0, 1e-4);
    ensure(rep.counts[2] == 1 && rep.flc, "one interior patch class")
}

fn boundary_ratio_values() -> Result<(), String> {
    let k = BoxRegion::line(-1.0, 1.0);
    close(
        autocorr::boundary_ratio(&BoxRegion::line(0.0, 50.0), &k, &RL),
        4.0 / 50.0,
        1e-12,
        "4/L",
    )?;
    let k0 = BoxRegion::from_bounds([0.0, 0.0], [0.0, 0.0], 1);
    close(
        autocorr::boundary_ratio(&BoxRegion::line(0.0, 50.0), &k0, &RL),
        0.0,
        0.0,
        "degenerate probe",
    )
}

fn eta_zero_is_density() -> Result<(), String> {
    let c = CombGenerator::unit_lattice(0)
        .produce(&BoxRegion::line(0.0, 256.0))
        .map_err(|e| e.to_string())?;
    let g = autocorr::autocorr_comb(&c, 0.0, 4.0, 0).map_err(|e| e.to_string())?;
    close(g.lookup([0.0, 0.0]).re, 1.0, 1e-12, "eta(0) = density")
}

fn eberlein_disjoint_zero() -> Result<(), String> {
    let b = BoxRegion::line(0.0, 100.0);
    let mu = comb((-200.0, 200.0), &[(150.0, 1.0, 0.0)]);
    let nu = CombGenerator::unit_lattice(0)
        .produce(&b)
        .map_err(|e| e.to_string())?;
    ensure(
        autocorr::eberlein_defect(&mu, &nu, &b, &TestFunction::tent(0.0, 1.0, 1.0)) == 0.0,
        "no contributing pairs",
    )
}

fn closed_formula_empty() -> Result<(), String> {
    let m = autocorr::EmpiricalHullMeasure::from_samples(vec![WeightedComb::empty(
        RL,
        BoxRegion::line(0.0, 32.0),
    )])
    .map_err(|e| e.to_string())?;
    let sigma = TestFunction::tent(16.0, 3.0, 1.0 / 3.0);
    let phi = TestFunction::tent(0.0, 1.0, 1.0);
    ensure(
        autocorr::autocorr_closed_formula(&m, &sigma, &phi).map_err(|e| e.to_string())?
            == Complex64::new(0.0, 0.0),
        "empty samples give 0",
    )
}

fn pairing_single_atom() -> Result<(), String> {
    let gamma = autocorr::Autocorrelation {
        group: RL,
        support: vec![[0.0, 0.0]],
        eta: vec![Complex64::new(1.0, 0.0)],
        epsilon: 0.0,
        range: 4.0,
        volume: 1.0,
        n_index: 0,
    };
    let phi = TestFunction::tent(0.0, 1.0, 1.0);
    let p0 = autocorr::pairing(&gamma, &phi, &phi, [0.0, 0.0]).map_err(|e| e.to_string())?;
    close(p0.re, 2.0 / 3.0, 1e-12, "tent autocorrelation at 0")?;
    ensure(p0.re >= 0.0, "quadratic form nonnegative")
}

fn structure_factor_single_point() -> Result<(), String> {
    let c = comb((0.0, 10.0), &[(3.0, 1.0, 0.0)]);
    for k in [0.0, 0.3, 1.7] {
        close(
            diffraction::structure_factor(&c, [k, 0.0]),
            0.1,
            1e-12,
            "1/|B|",
        )?;
    }
    Ok(())
}

fn structure_factor_symmetry() -> Result<(), String> {
    let c = CombGenerator::unit_lattice(0)
        .produce(&BoxRegion::line(0.0, 64.0))
        .map_err(|e| e.to_string())?;
    close(
        diffraction::structure_factor(&c, [0.37, 0.0]),
        diffraction::structure_factor(&c, [-0.37, 0.0]),
        1e-9,
        "I(k) = I(-k) for real weights",
    )
}

fn wiener_delta_zero() -> Result<(), String> {
    let gamma = autocorr::Autocorrelation {
        group: RL,
        support: vec![[0.0, 0.0]],
        eta: vec![Complex64::new(1.0, 0.0)],
        epsilon: 0.0,
        range: 64.0,
        volume: 1.0,
        n_index: 0,
    };
    close(
        diffraction::wiener_oracle(&gamma, 64).map_err(|e| e.to_string())?,
        1.0 / 129.0,
        1e-15,
        "w_N of a single displacement",
    )
}

fn poisson_reduced() -> Result<(), String> {
    let gen = CombGenerator::unit_lattice(0);
    let seq = crate::autocorr::VanHoveSequence::geometric(&gen.group, 256.0, 2.0, 2)
        .map_err(|e| e.to_string())?;
    let spec = diffraction::peak_scan(&gen, &seq, &diffraction::ScanConfig::over(-1.5, 1.5))
        .map_err(|e| e.to_string())?;
    if spec.atoms.len() != 3 {
        return Err(format!("expected 3 atoms, found {}", spec.atoms.len()));
    }
    for a in &spec.atoms {
        if (a.k[0] - a.k[0].round()).abs() > 1e-5 {
            return Err(format!("atom off-integer at {}", a.k[0]));
        }
        if (a.intensity - 1.0).abs() > 0.05 {
            return Err(format!("atom intensity {} at {}", a.intensity, a.k[0]));
        }
    }
    Ok(())
}

fn weyl_trivial_character() -> Result<(), String> {
    let gen = CombGenerator::unit_lattice(0);
    let c = gen
        .produce(&BoxRegion::line(-10.0, 522.0))
        .map_err(|e| e.to_string())?;
    let phi = TestFunction::tent(0.0, 0.5, 1.0);
    let w = dynamics::weyl_sum(&c, &phi, [0.0, 0.0], &BoxRegion::line(0.0, 512.0))
        .map_err(|e| e.to_string())?;
    close(w.re, 0.5, 0.01, "W(0) -> density * int(phi)")
}

fn correlation_basics() -> Result<(), String> {
    let gen = CombGenerator::unit_lattice(0);
    let c = gen
        .produce(&BoxRegion::line(-10.0, 110.0))
        .map_err(|e| e.to_string())?;
    let phi = TestFunction::tent(0.0, 0.5, 1.0);
    let b = BoxRegion::line(0.0, 100.0);
    let v = dynamics::correlation(&c, &phi, &phi, 0.0, &b, 0.0625).map_err(|e| e.to_string())?;
    ensure(v.re >= 0.0 && v.im.abs() < 1e-12, "t = 0 value real nonnegative")?;
    let zero = WeightedComb::empty(RL, BoxRegion::line(-10.0, 110.0));
    let vz = dynamics::correlation(&zero, &phi, &phi, 1.0, &b, 0.0625)
        .map_err(|e| e.to_string())?;
    ensure(vz == Complex64::new(0.0, 0.0), "zero comb")
}

fn subtract_geometry() -> Result<(), String> {
    let c = BoxUnion::subtract(
        &BoxRegion::line(-1.0, 1.0),
        &[BoxRegion::line(-0.2, 0.2)],
    );
    close(c.volume(&RL), 1.6, 1e-12, "interval subtraction")
}

pub fn all_checks() -> Vec<Check> {
    vec![
        Check { name: "measures-evaluate-tent-peak", run: evaluate_tent_peak },
        Check { name: "measures-evaluate-two-points", run: evaluate_two_points },
        Check { name: "measures-evaluate-empty", run: evaluate_empty },
        Check { name: "measures-total-variation-pair", run: total_variation_pair },
        Check { name: "measures-total-variation-modulus", run: total_variation_modulus },
        Check { name: "measures-translation-bound-lattice", run: translation_bound_lattice },
        Check { name: "measures-translate-action", run: translate_action },
        Check { name: "measures-reflect-involution", run: reflect_involution },
        Check { name: "measures-f-phi-edge", run: f_phi_edge },
        Check { name: "measures-f-phi-equivariance", run: f_phi_equivariance },
        Check { name: "measures-convolve-deltas", run: convolve_deltas },
        Check { name: "generators-lattice-window", run: lattice_window_points },
        Check { name: "generators-lattice-density", run: lattice_density_value },
        Check { name: "generators-window-consistency", run: generator_consistency },
        Check { name: "generators-perturbed-eps-zero", run: perturbed_eps_zero },
        Check { name: "quadratic-tau-algebraic-identity", run: tau_algebraic_identity },
        Check { name: "generators-fibonacci-gap-membership", run: fibonacci_gap_membership },
        Check { name: "quadratic-golden-membership", run: golden_membership_roundtrip },
        Check { name: "quadratic-dyadic-membership", run: dyadic_membership_values },
        Check { name: "topology-ukv-examples", run: ukv_diagonal_and_examples },
        Check { name: "topology-metric-zero-symmetry", run: metric_zero_and_symmetry },
        Check { name: "topology-fell-miss-only", run: fell_miss_only },
        Check { name: "topology-fell-point-construction", run: fell_point_construction },
        Check { name: "topology-repetitivity-lattice", run: repetitivity_lattice_small },
        Check { name: "topology-flc-lattice", run: flc_lattice_single_patch },
        Check { name: "geometry-box-subtraction", run: subtract_geometry },
        Check { name: "autocorr-boundary-ratio", run: boundary_ratio_values },
        Check { name: "autocorr-eta-zero-density", run: eta_zero_is_density },
        Check { name: "autocorr-eberlein-disjoint", run: eberlein_disjoint_zero },
        Check { name: "autocorr-closed-formula-empty", run: closed_formula_empty },
        Check { name: "autocorr-pairing-single-atom", run: pairing_single_atom },
        Check { name: "diffraction-single-point", run: structure_factor_single_point },
        Check { name: "diffraction-symmetry", run: structure_factor_symmetry },
        Check { name: "diffraction-wiener-delta", run: wiener_delta_zero },
        Check { name: "diffraction-poisson-reduced", run: poisson_reduced },
        Check { name: "dynamics-weyl-trivial-character", run: weyl_trivial_character },
        Check { name: "dynamics-correlation-basics", run: correlation_basics },
    ]
}

/// Run (or just list) every check, printing one TAP-style line per check.
/// Returns `true` when all pass.
pub fn run_selftest(list_only: bool, out: &mut impl std::io::Write) -> bool {
    let checks = all_checks();
    let mut all_ok = true;
    if !list_only {
        let _ = writeln!(out, "1..{}", checks.len());
    }
    for (i, check) in checks.iter().enumerate() {
        if list_only {
            let _ = writeln!(out, "{}", check.name);
            continue;
        }
        match (check.run)() {
            Ok(()) => {
                let _ = writeln!(out, "ok {} - {}", i + 1, check.name);
            }
            Err(msg) => {
                all_ok = false;
                let _ = writeln!(out, "not ok {} - {}: {}", i + 1, check.name, msg);
            }
        }
    }
    all_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_is_green() {
        let mut buf = Vec::new();
        assert!(run_selftest(false, &mut buf), "{}", String::from_utf8_lossy(&buf));
    }

    #[test]
    fn list_prints_names_only() {
        let mut buf = Vec::new();
        run_selftest(true, &mut buf);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().count() >= 30);
        assert!(!text.contains("ok "));
    }
}
