//! Command-line surface for comb generation, autocorrelation, diffraction
//! and the dynamical-spectrum verification pipelines.
//!
//! Exit codes: 0 all gates pass, 1 a verification gate failed, 2 usage or
//! validation error.

mod parse;
mod pipeline;

use std::path::{Path, PathBuf};

use aperiodica::autocorr::{autocorr_comb, VanHoveSequence};
use aperiodica::diffraction::{peak_scan, purity, ScanConfig};
use aperiodica::dynamics::{
    dworkin_identity_report, eigenvalue_group_check, spectral_measure_zero_check,
};
use aperiodica::error::{Error, Result};
use aperiodica::generators::CombGenerator;
use aperiodica::geometry::BoxRegion;
use aperiodica::io;
use aperiodica::parallel::with_workers;
use aperiodica::testfn::TestFunction;
use aperiodica::topology::{
    fell_refines_ukv, flc_check, repetitivity_scan, ukv_refines_fell, ukv_related,
    PointSetWindowed, UkvParams,
};
use clap::{Parser, Subcommand};
use serde_json::json;

use parse::{parse_phi, parse_range, parse_window};
use pipeline::{generator_by_name, preset, run_pipeline, RunConfig};

#[derive(Parser)]
#[command(
    name = "aperiodica",
    about = "Diffraction and dynamical spectra of translation bounded Dirac combs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Produce a comb restricted to a window and write it as CSV + sidecar.
    Generate {
        /// Generator kind: lattice, fibonacci, cut-and-project-1d,
        /// fibonacci-substitution, thue-morse, period-doubling,
        /// perturbed-lattice, bernoulli-lattice
        #[arg(long)]
        kind: Option<String>,
        /// Generator spec JSON (alternative to --kind)
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "0,100", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Kind parameters as key=value, repeatable (e.g. -p spacing=0.5)
        #[arg(short, long = "param")]
        params: Vec<String>,
        #[arg(long, default_value = "comb.csv")]
        out: PathBuf,
    },
    /// Finite-volume autocorrelation at the largest van Hove box.
    Autocorr {
        /// Generator spec JSON
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value_t = 50.0)]
        range: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value = "gamma.csv")]
        out: PathBuf,
    },
    /// Scan the diffraction spectrum for Bragg atoms.
    Diffract {
        #[arg(long = "in")]
        input: PathBuf,
        /// Scan range lo,hi in the dual variable
        #[arg(long, default_value = "-2.5,2.5", allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value = "tent:0.5")]
        phi: String,
        #[arg(long)]
        floor: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        residual_tol: f64,
        #[arg(long, default_value = "spectrum.csv")]
        out: PathBuf,
    },
    /// Purity ratio of a stored spectrum against a stored autocorrelation.
    Purity {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, default_value = "tent:0.5")]
        phi: String,
    },
    /// Local rubber topology diagnostics on stored combs.
    Topology {
        #[command(subcommand)]
        cmd: TopoCmd,
    },
    /// Identity checks linking the diffraction and dynamical spectra.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Full pipeline: comb, autocorrelation, spectrum, gates, report.
    Run {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// RunConfig as JSON (.json) or flat key=value text
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads (default 1; env APERIODICA_WORKERS overrides)
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the built-in example table (TAP output).
    Selftest {
        /// Print check names without running them
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum TopoCmd {
    /// Are two combs U_{K,V}-related?
    Ukv {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        /// Compact box K as lo,hi
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
        /// Halfwidth of the symmetric open box V
        #[arg(long = "V")]
        v: f64,
    },
    /// Scan translation witnesses of U_{K,V}-repetitivity.
    Repetitivity {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
        #[arg(long = "V")]
        v: f64,
        #[arg(long, default_value = "0,50", allow_hyphen_values = true)]
        t_range: String,
        #[arg(long, default_value_t = 0.05)]
        t_step: f64,
        /// Witness density gate (max allowed gap)
        #[arg(long, default_value_t = 50.0)]
        dense_r: f64,
    },
    /// Finite-local-complexity patch census.
    Flc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
    },
    /// Construct both neighbourhood refinements around the stored point set
    /// and property-test their membership implications on random probes.
    Fell {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: String,
        #[arg(long = "V")]
        v: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Correlation average vs autocorrelation pairing over a t-grid.
    Dworkin {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 5e-2)]
        tol: f64,
        #[arg(long, default_value = "tent:0.5")]
        phi: String,
        #[arg(long, default_value = "tent:0.8:0.3")]
        psi: String,
    },
    /// |W(k)|^2 against |phi^(k)|^2 * atom mass on the strongest atoms.
    Spectralmass {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value = "-2.5,2.5", allow_hyphen_values = true)]
        krange: String,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long)]
        floor: Option<f64>,
    },
    /// Integer combinations of top atoms as numerical eigenvalues.
    Eigengroup {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value = "-3.5,3.5", allow_hyphen_values = true)]
        krange: String,
        #[arg(long, default_value_t = 1)]
        coeff_bound: i64,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, default_value_t = 0.95)]
        addition_gate: f64,
        #[arg(long)]
        floor: Option<f64>,
    },
    /// Spectral mass of f_phi inside an atom-free k-window.
    Zerowindow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
        #[arg(long, default_value_t = 100.0)]
        base: f64,
        #[arg(long, default_value_t = 0.5)]
        k_center: f64,
        #[arg(long, default_value_t = 0.2)]
        k_halfwidth: f64,
        #[arg(long, default_value_t = 30.0)]
        tmax: f64,
        #[arg(long, default_value = "tent:0.5")]
        phi: String,
        #[arg(long, default_value_t = 1e-2)]
        gate: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn read_generator(path: &Path) -> Result<CombGenerator> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("generator spec: {e}")))
}

fn load_comb(path: &Path) -> Result<aperiodica::WeightedComb> {
    Ok(io::read_comb_csv(path)?.0)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Generate {
            kind,
            spec,
            window,
            seed,
            params,
            out,
        } => {
            let gen = match (kind, spec) {
                (Some(k), None) => {
                    let mut map = std::collections::BTreeMap::new();
                    for p in params {
                        let (key, value) = p.split_once('=').ok_or_else(|| {
                            Error::Parse(format!("param {p:?}: expected key=value"))
                        })?;
                        map.insert(key.to_string(), value.to_string());
                    }
                    let gen = generator_by_name(&k, seed, &mut map)?;
                    if let Some(k) = map.keys().next() {
                        return Err(Error::Parse(format!("unused parameter {k:?}")));
                    }
                    gen
                }
                (None, Some(path)) => read_generator(&path)?,
                _ => {
                    return Err(Error::InvalidParameter(
                        "provide exactly one of --kind or --spec".into(),
                    ))
                }
            };
            let w = parse_window(&window)?;
            let comb = gen.produce(&w)?;
            io::write_comb_csv(&out, &comb, Some(&gen))?;
            eprintln!("wrote {} points to {}", comb.len(), out.display());
            Ok(0)
        }

        Cmd::Autocorr {
            input,
            nmax,
            base,
            range,
            eps,
            out,
        } => {
            let gen = read_generator(&input)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let gammas = aperiodica::autocorr::autocorr_van_hove(&gen, &seq, eps, range)?;
            let last = gammas.last().expect("nonempty sequence");
            io::write_gamma_csv(&out, last)?;
            eprintln!(
                "wrote {} displacement coefficients to {}",
                last.support.len(),
                out.display()
            );
            Ok(0)
        }

        Cmd::Diffract {
            input,
            range,
            nmax,
            base,
            phi,
            floor,
            residual_tol,
            out,
        } => {
            let gen = read_generator(&input)?;
            let (k_lo, k_hi) = parse_range(&range)?;
            let phi = parse_phi(&phi)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let scan = ScanConfig {
                k_lo,
                k_hi,
                coarse_step: None,
                refine_tol: 1e-8,
                residual_tol,
                floor,
                coarse_box_cap: 6,
            };
            let spectrum = peak_scan(&gen, &seq, &scan)?;
            let comb = gen.produce(seq.largest())?;
            let conv_reach = 2.0 * (phi.halfwidth[0] + phi.center[0].abs()) + 1.0;
            let gamma = autocorr_comb(&comb, 0.0, conv_reach, nmax)
                .or_else(|_| autocorr_comb(&comb, 1e-3, conv_reach, nmax))?;
            let (p, denom) = purity(&gamma, &spectrum, &phi)?;
            io::write_spectrum_csv(
                &out,
                &spectrum,
                &io::SpectrumSummary {
                    purity: Some(p),
                    denominator: Some(denom),
                    scan: spectrum.scan,
                },
            )?;
            eprintln!(
                "wrote {} atoms to {} (purity {:.4})",
                spectrum.atoms.len(),
                out.display(),
                p
            );
            Ok(0)
        }

        Cmd::Purity {
            gamma,
            spectrum,
            phi,
        } => {
            let gamma = io::read_gamma_csv(&gamma)?;
            let (atoms, summary) = io::read_spectrum_csv(&spectrum)?;
            let phi = parse_phi(&phi)?;
            let spec = aperiodica::diffraction::DiffractionSpectrum {
                dim: gamma.group.dim(),
                atoms: atoms
                    .iter()
                    .map(|(k, intensity, residual)| aperiodica::diffraction::Atom {
                        k: *k,
                        intensity: *intensity,
                        residual: *residual,
                    })
                    .collect(),
                total_mass_proxy: atoms.iter().map(|(_, i, _)| i).sum(),
                scan: summary.scan,
            };
            let (p, denom) = purity(&gamma, &spec, &phi)?;
            print_json(&json!({ "purity": p, "denominator": denom }));
            Ok(0)
        }

        Cmd::Topology { cmd } => topology_cmd(cmd),
        Cmd::Verify { cmd } => verify_cmd(cmd),

        Cmd::Run {
            preset: preset_name,
            config,
            out,
            workers,
        } => {
            let cfg = match (preset_name, config) {
                (Some(name), None) => preset(&name)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    if path.extension().map(|e| e == "json").unwrap_or(false)
                        || text.trim_start().starts_with('{')
                    {
                        RunConfig::from_json(&text)?
                    } else {
                        RunConfig::from_ini(&text)?
                    }
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "provide exactly one of --preset or --config".into(),
                    ))
                }
            };
            let workers = workers.or_else(|| {
                std::env::var("APERIODICA_WORKERS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            });
            let report = with_workers(workers.or(Some(1)), || run_pipeline(&cfg, &out))?;
            for g in &report.gates {
                eprintln!(
                    "gate {:<28} value {:>12.6e} vs {:>9.3e} [{}] {}",
                    g.name,
                    g.value,
                    g.tolerance,
                    if g.pass { "pass" } else { "FAIL" },
                    g.gate,
                );
            }
            Ok(if report.pass { 0 } else { 1 })
        }

        Cmd::Selftest { list } => {
            let mut out = std::io::stdout();
            let ok = aperiodica::selftest::run_selftest(list, &mut out);
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn topology_cmd(cmd: TopoCmd) -> Result<i32> {
    match cmd {
        TopoCmd::Ukv {
            input,
            input2,
            k,
            v,
        } => {
            let a = PointSetWindowed::from_comb(&load_comb(&input)?);
            let b = PointSetWindowed::from_comb(&load_comb(&input2)?);
            let (klo, khi) = parse_range(&k)?;
            let u = UkvParams::new(BoxRegion::line(klo, khi), [v, 0.0], 1);
            let related = ukv_related(&a, &b, &u)?;
            print_json(&json!({
                "related": related,
                "k": [klo, khi],
                "v_halfwidth": v,
            }));
            Ok(0)
        }
        TopoCmd::Repetitivity {
            input,
            k,
            v,
            t_range,
            t_step,
            dense_r,
        } => {
            let p = PointSetWindowed::from_comb(&load_comb(&input)?);
            let (klo, khi) = parse_range(&k)?;
            let (tlo, thi) = parse_range(&t_range)?;
            let u = UkvParams::new(BoxRegion::line(klo, khi), [v, 0.0], 1);
            let rep = repetitivity_scan(&p, &u, tlo, thi, t_step, dense_r)?;
            print_json(&json!({
                "dense": rep.dense,
                "max_gap": rep.max_gap,
                "witness_count": rep.witnesses.len(),
                "gate_r": dense_r,
            }));
            Ok(if rep.dense { 0 } else { 1 })
        }
        TopoCmd::Flc { input, radius, eps } => {
            let p = PointSetWindowed::from_comb(&load_comb(&input)?);
            let rep = flc_check(&p, radius, eps);
            print_json(&json!({
                "flc": rep.flc,
                "counts": rep.counts,
                "growth_ratio": rep.growth_ratio,
                "radius": radius,
                "eps": eps,
            }));
            Ok(0)
        }
        TopoCmd::Fell {
            input,
            k,
            v,
            samples,
            seed,
        } => {
            let h = PointSetWindowed::from_comb(&load_comb(&input)?);
            let (klo, khi) = parse_range(&k)?;
            let u = UkvParams::new(BoxRegion::line(klo, khi), [v, 0.0], 1);
            let (fwd_ok, fwd_total) = fell_forward_probes(&h, &u, samples, seed)?;
            let (bwd_ok, bwd_total) = fell_backward_probes(&h, &u, samples, seed ^ 0xf00d)?;
            let pass = fwd_ok == fwd_total && bwd_ok == bwd_total;
            print_json(&json!({
                "basis_from_ukv_probes": {"pass": fwd_ok, "total": fwd_total},
                "ukv_from_basis_probes": {"pass": bwd_ok, "total": bwd_total},
                "pass": pass,
            }));
            Ok(if pass { 0 } else { 1 })
        }
    }
}

/// Probe the rubber-to-basis direction: closed sets inside the constructed
/// basis element must be U_{K,V}-related to H.
fn fell_forward_probes(
    h: &PointSetWindowed,
    u: &UkvParams,
    samples: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let e = fell_refines_ukv(h, u)?;
    let bb = u.k.bounding_box().unwrap_or(BoxRegion::line(-1.0, 1.0));
    let window = bb.dilate(2.0 + u.v.hi[0]);
    let mut pass = 0;
    for i in 0..samples {
        let mut pts: Vec<[f64; 2]> = Vec::new();
        let uni = |j: u64| aperiodica::generators::site_uniform_pub(seed ^ (i as u64), j as i64);
        // one point inside each hitting box, biased to the interior
        for (a_idx, a) in e.f.iter().enumerate() {
            for attempt in 0..64u64 {
                let t = uni(a_idx as u64 * 101 + attempt);
                let x = a.lo[0] + (0.05 + 0.9 * t) * (a.hi[0] - a.lo[0]);
                if !e.c.contains_closed([x, 0.0]) {
                    pts.push([x, 0.0]);
                    break;
                }
            }
        }
        // background points anywhere that misses C
        for j in 0..8u64 {
            let t = uni(1000 + j);
            let x = window.lo[0] + t * (window.hi[0] - window.lo[0]);
            if !e.c.contains_closed([x, 0.0]) {
                pts.push([x, 0.0]);
            }
        }
        let l = PointSetWindowed::new(pts, window, 1);
        if !e.contains(&l) {
            continue; // sampler failed to land in the basis element; skip
        }
        if ukv_related(&l, h, u)? {
            pass += 1;
        } else {
            return Ok((pass, samples));
        }
    }
    Ok((pass, pass))
}

/// Probe the basis-to-rubber direction on the element built around H.
fn fell_backward_probes(
    h: &PointSetWindowed,
    u: &UkvParams,
    samples: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let e = fell_refines_ukv(h, u)?;
    let (h2, u2) = ukv_refines_fell(&e)?;
    let bb = u2.k.bounding_box().unwrap_or(BoxRegion::line(-1.0, 1.0));
    let window = bb.dilate(2.0 + u2.v.hi[0]).hull(&h2.window);
    let mut pass = 0;
    for i in 0..samples {
        let uni = |j: u64| aperiodica::generators::site_uniform_pub(seed ^ (i as u64), j as i64);
        let mut pts: Vec<[f64; 2]> = Vec::new();
        // jitter each H-point strictly inside V
        for (idx, p) in h2.points().iter().enumerate() {
            let t = uni(idx as u64);
            let jitter = (2.0 * t - 1.0) * 0.9 * u2.v.hi[0];
            pts.push([p[0] + jitter, 0.0]);
        }
        // background strictly outside K + V
        for j in 0..6u64 {
            let t = uni(500 + j);
            let x = bb.hi[0] + 1.0 + t * 3.0;
            pts.push([x, 0.0]);
        }
        let l = PointSetWindowed::new(pts, window, 1);
        if !ukv_related(&l, &h2, &u2)? {
            continue; // sampler missed the relation; skip
        }
        if e.contains(&l) {
            pass += 1;
        } else {
            return Ok((pass, samples));
        }
    }
    Ok((pass, pass))
}

fn verify_cmd(cmd: VerifyCmd) -> Result<i32> {
    match cmd {
        VerifyCmd::Dworkin {
            input,
            nmax,
            base,
            tmax,
            eps,
            tol,
            phi,
            psi,
        } => {
            let gen = read_generator(&input)?;
            let phi = parse_phi(&phi)?;
            let psi = parse_phi(&psi)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let rep = dworkin_identity_report(&gen, &phi, &psi, tmax, 20, &seq, eps)?;
            let pass = rep.max_rel_error <= tol;
            print_json(&json!({
                "max_rel_error": rep.max_rel_error,
                "tolerance": tol,
                "t_count": rep.t_grid.len(),
                "pass": pass,
            }));
            Ok(if pass { 0 } else { 1 })
        }

        VerifyCmd::Spectralmass {
            input,
            nmax,
            base,
            krange,
            top,
            tol,
            floor,
        } => {
            let gen = read_generator(&input)?;
            let (k_lo, k_hi) = parse_range(&krange)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let scan = ScanConfig {
                k_lo,
                k_hi,
                coarse_step: None,
                refine_tol: 1e-8,
                residual_tol: 0.05,
                floor,
                coarse_box_cap: 6,
            };
            let spectrum = peak_scan(&gen, &seq, &scan)?;
            let widths = [0.5, 0.75, 1.0 / 3.0];
            let mut rows = Vec::new();
            let mut all_pass = true;
            for atom in spectrum.top(top) {
                let mut best: Option<aperiodica::diffraction::SpectralMassReport> = None;
                for w in widths {
                    let phi = TestFunction::tent(0.0, w, 1.0);
                    let rep = aperiodica::diffraction::spectral_mass_check(
                        &gen, &phi, atom.k, &seq, 0.05,
                    )?;
                    if best
                        .as_ref()
                        .map(|b| rep.rel_error < b.rel_error)
                        .unwrap_or(true)
                    {
                        best = Some(rep);
                    }
                }
                let rep = best.expect("widths nonempty");
                let pass = rep.rel_error <= tol;
                all_pass &= pass;
                rows.push(json!({
                    "k": rep.k[0],
                    "lhs": rep.lhs,
                    "rhs": rep.rhs,
                    "rel_error": rep.rel_error,
                    "tolerance": tol,
                    "pass": pass,
                }));
            }
            print_json(&json!({ "atoms": rows, "pass": all_pass }));
            Ok(if all_pass { 0 } else { 1 })
        }

        VerifyCmd::Eigengroup {
            input,
            nmax,
            base,
            krange,
            coeff_bound,
            top,
            addition_gate,
            floor,
        } => {
            let gen = read_generator(&input)?;
            let (k_lo, k_hi) = parse_range(&krange)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let scan = ScanConfig {
                k_lo,
                k_hi,
                coarse_step: None,
                refine_tol: 1e-8,
                residual_tol: 0.05,
                floor,
                coarse_box_cap: 6,
            };
            let spectrum = peak_scan(&gen, &seq, &scan)?;
            let comb = gen.produce(seq.largest())?;
            let gamma = autocorr_comb(&comb, 0.0, 4.0, nmax)
                .or_else(|_| autocorr_comb(&comb, 1e-3, 4.0, nmax))?;
            let phi = TestFunction::tent(0.0, 0.5, 1.0);
            let (p, _) = purity(&gamma, &spectrum, &phi)?;
            let phis = [
                TestFunction::tent(0.0, 0.5, 1.0),
                TestFunction::tent(0.0, 0.75, 1.0),
                TestFunction::tent(0.0, 1.0 / 3.0, 1.0),
            ];
            let rep = eigenvalue_group_check(
                &spectrum,
                &gen,
                &phis,
                coeff_bound,
                p,
                &seq,
                top,
                gen.seed ^ 0x9e37,
            )?;
            let pass = rep.negation_closed && rep.addition_pass_rate() >= addition_gate;
            print_json(&json!({
                "purity": p,
                "threshold": rep.threshold,
                "baseline_c": rep.baseline_c,
                "candidates": rep.candidates.len(),
                "accepted": rep.accepted_count,
                "negation_closed": rep.negation_closed,
                "addition_pairs": [rep.addition_pairs_accepted, rep.addition_pairs_total],
                "addition_rate": rep.addition_pass_rate(),
                "addition_gate": addition_gate,
                "pass": pass,
            }));
            Ok(if pass { 0 } else { 1 })
        }

        VerifyCmd::Zerowindow {
            input,
            nmax,
            base,
            k_center,
            k_halfwidth,
            tmax,
            phi,
            gate,
        } => {
            let gen = read_generator(&input)?;
            let phi = parse_phi(&phi)?;
            let seq = VanHoveSequence::geometric(&gen.group, base, 2.0, nmax)?;
            let rep =
                spectral_measure_zero_check(&gen, &phi, k_center, k_halfwidth, &seq, tmax)?;
            let pass = rep.ratio <= gate;
            print_json(&json!({
                "k_center": rep.k_center,
                "k_halfwidth": rep.k_halfwidth,
                "mass": rep.mass,
                "norm_sq": rep.norm_sq,
                "ratio": rep.ratio,
                "gate": gate,
                "pass": pass,
            }));
            Ok(if pass { 0 } else { 1 })
        }
    }
}
