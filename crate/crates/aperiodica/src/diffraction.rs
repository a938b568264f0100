//! Diffraction spectra: structure factors, Bragg atom extraction, purity.
//!
//! The finite-volume structure factor is
//! `I_B(k) = (1/|B|) |sum_{x in B} w_x exp(-2 pi i k.x)|^2`, the Fourier
//! density of the finite autocorrelation. Atom (Bragg peak) masses are
//! estimated as `I_B(k) / |B|`, i.e. the squared volume-averaged amplitude;
//! an atom is accepted when that estimate is stable across the last three
//! van Hove boxes and clears an intensity floor. Scanning the dense k-grid
//! uses an exact FFT reindexing for lattice-supported combs and a chunked
//! phase-recurrence direct sum otherwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::autocorr::{lattice_profile, pairing, Autocorrelation, VanHoveSequence};
use crate::error::{Error, Result};
use crate::generators::CombGenerator;
use crate::geometry::{BoxRegion, Point};
use crate::kahan::KahanSum;
use crate::measures::WeightedComb;
use crate::parallel::block_ranges;
use crate::testfn::TestFunction;
use rayon::prelude::*;

/// `S_B(k) = sum_x w_x exp(-2 pi i k.x)`.
pub fn amplitude_sum(comb: &WeightedComb, k: Point) -> Complex64 {
    let dim = comb.group().dim();
    let mut acc = crate::kahan::KahanComplex::new();
    for (p, w) in comb.points().iter().zip(comb.weights()) {
        let mut phase = -2.0 * std::f64::consts::PI * k[0] * p[0];
        if dim > 1 {
            phase -= 2.0 * std::f64::consts::PI * k[1] * p[1];
        }
        let (s, c) = phase.sin_cos();
        acc.add(w * Complex64::new(c, s));
    }
    acc.value()
}

/// `I_B(k) = |S_B(k)|^2 / |B|`.
pub fn structure_factor(comb: &WeightedComb, k: Point) -> f64 {
    let vol = comb.group().volume(&comb.window());
    amplitude_sum(comb, k).norm_sqr() / vol
}

/// Bragg mass estimate `|S_B(k) / |B||^2 = I_B(k) / |B|`.
pub fn atom_intensity(comb: &WeightedComb, k: Point) -> f64 {
    let vol = comb.group().volume(&comb.window());
    amplitude_sum(comb, k).norm_sqr() / (vol * vol)
}

/// Uniform intensity grid covering `[k_lo, k_hi]` at a step no coarser than
/// `step_req` (1D combs).
///
/// Returns the actually used step (the FFT path snaps it down so the grid
/// lands on DFT frequencies) together with the values at
/// `k_lo + j * step` for `j = 0..=count`, where `count` is derived from the
/// final step so the grid always reaches `k_hi`.
pub fn intensity_grid(
    comb: &WeightedComb,
    k_lo: f64,
    k_hi: f64,
    step_req: f64,
) -> (f64, Vec<f64>) {
    if let Some((_, spacing)) = lattice_profile(comb) {
        fft_intensity_grid(comb, spacing, k_lo, k_hi, step_req)
    } else {
        let count = ((k_hi - k_lo) / step_req).ceil() as usize;
        (step_req, direct_intensity_grid(comb, k_lo, step_req, count))
    }
}

fn fft_intensity_grid(
    comb: &WeightedComb,
    spacing: f64,
    k_lo: f64,
    k_hi: f64,
    step_req: f64,
) -> (f64, Vec<f64>) {
    let pts = comb.points();
    let ws = comb.weights();
    let offset = pts[0][0];
    let n_sites = ((pts[pts.len() - 1][0] - offset) / spacing).round() as usize + 1;
    let m_min = (1.0 / (spacing * step_req)).ceil() as usize;
    let m = m_min.max(n_sites).next_power_of_two();
    let step = 1.0 / (m as f64 * spacing);
    let count = ((k_hi - k_lo) / step).ceil() as usize;
    // pre-twist so DFT bin j sits at frequency k_lo + j*step; the global
    // offset phase drops out of the modulus
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (p, w) in pts.iter().zip(ws) {
        let n = ((p[0] - offset) / spacing).round() as usize;
        let phase = -2.0 * std::f64::consts::PI * spacing * k_lo * n as f64;
        let (s, c) = phase.sin_cos();
        buf[n] += w * Complex64::new(c, s);
    }
    let mut planner = rustfft::FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let vol = comb.group().volume(&comb.window());
    let vals = (0..=count).map(|j| buf[j % m].norm_sqr() / vol).collect();
    (step, vals)
}

/// Direct evaluation via a per-point phase recurrence, parallel over fixed
/// j-chunks (every output value is produced by exactly one chunk).
fn direct_intensity_grid(comb: &WeightedComb, k_lo: f64, step: f64, count: usize) -> Vec<f64> {
    let pts = comb.points();
    let ws = comb.weights();
    let vol = comb.group().volume(&comb.window());
    let chunks = block_ranges(count + 1);
    let mut out = vec![0.0f64; count + 1];
    let pieces: Vec<(std::ops::Range<usize>, Vec<f64>)> = chunks
        .into_par_iter()
        .map(|r| {
            let mut local = vec![Complex64::new(0.0, 0.0); r.len()];
            for (p, w) in pts.iter().zip(ws) {
                let x = p[0];
                let phase0 = -2.0 * std::f64::consts::PI * (k_lo + r.start as f64 * step) * x;
                let (s0, c0) = phase0.sin_cos();
                let mut cur = w * Complex64::new(c0, s0);
                let dphase = -2.0 * std::f64::consts::PI * step * x;
                let (ds, dc) = dphase.sin_cos();
                let mult = Complex64::new(dc, ds);
                for slot in local.iter_mut() {
                    *slot += cur;
                    cur *= mult;
                }
            }
            let vals = local.iter().map(|z| z.norm_sqr() / vol).collect();
            (r, vals)
        })
        .collect();
    for (r, vals) in pieces {
        out[r].copy_from_slice(&vals);
    }
    out
}

/// Golden-section ascent of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub k: Point,
    /// Bragg mass estimate at the largest box.
    pub intensity: f64,
    /// Max relative change of the estimate over the last three boxes.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    pub k_lo: f64,
    pub k_hi: f64,
    pub coarse_step: f64,
    pub refine_tol: f64,
    pub residual_tol: f64,
    pub floor: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiffractionSpectrum {
    pub dim: usize,
    /// Accepted atoms, sorted by intensity descending.
    pub atoms: Vec<Atom>,
    /// Sum of accepted intensities within the scan range.
    pub total_mass_proxy: f64,
    pub scan: ScanParams,
}

impl DiffractionSpectrum {
    pub fn top(&self, n: usize) -> &[Atom] {
        &self.atoms[..n.min(self.atoms.len())]
    }
}

/// Scan configuration; `None` fields pick the documented defaults.
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub k_lo: f64,
    pub k_hi: f64,
    /// Coarse grid step; default: a quarter of the detection box main lobe.
    pub coarse_step: Option<f64>,
    pub refine_tol: f64,
    pub residual_tol: f64,
    /// Acceptance floor for atom intensities; default `1e-4 * density^2`.
    pub floor: Option<f64>,
    /// Cap for the index of the coarse detection box on the direct path.
    pub coarse_box_cap: usize,
}

impl ScanConfig {
    pub fn over(k_lo: f64, k_hi: f64) -> Self {
        ScanConfig {
            k_lo,
            k_hi,
            coarse_step: None,
            refine_tol: 1e-8,
            residual_tol: 0.05,
            floor: None,
            coarse_box_cap: 6,
        }
    }
}

/// Stability estimate for a single frequency: intensity at the largest box
/// and the max relative change across the last three boxes.
pub fn atom_estimate(gen: &CombGenerator, seq: &VanHoveSequence, k: Point) -> Result<(f64, f64)> {
    let n_max = seq.n_max();
    let first = n_max.saturating_sub(2);
    let mut intensities = Vec::with_capacity(3);
    for n in first..=n_max {
        let comb = gen.produce(&seq.boxes[n])?;
        intensities.push(atom_intensity(&comb, k));
    }
    Ok(summarize_estimates(&intensities, gen.density()))
}

fn summarize_estimates(intensities: &[f64], density: f64) -> (f64, f64) {
    let last = *intensities.last().expect("nonempty");
    let tiny = 1e-7 * density * density;
    let mut residual: f64 = 0.0;
    for w in intensities.windows(2) {
        let denom = w[1].abs().max(tiny);
        residual = residual.max(((w[1] - w[0]) / denom).abs());
    }
    (last, residual)
}

/// Scan for Bragg atoms on `[k_lo, k_hi]` (1D generators).
///
/// Coarse detection runs on the largest box for lattice-supported combs
/// (exact FFT grid) and on a capped box otherwise; candidates are then
/// sharpened box by box with golden-section ascent, so the final positions
/// and intensities always come from direct sums on the largest boxes.
pub fn peak_scan(
    gen: &CombGenerator,
    seq: &VanHoveSequence,
    cfg: &ScanConfig,
) -> Result<DiffractionSpectrum> {
    if gen.group.dim() != 1 {
        return Err(Error::InvalidParameter("peak_scan supports 1D groups".into()));
    }
    if cfg.k_hi <= cfg.k_lo {
        return Err(Error::InvalidParameter("empty scan range".into()));
    }
    let n_max = seq.n_max();
    let combs: Vec<WeightedComb> = seq
        .boxes
        .iter()
        .map(|b| gen.produce(b))
        .collect::<Result<_>>()?;
    let largest = &combs[n_max];
    let density = gen.density();
    let floor = cfg.floor.unwrap_or(1e-4 * density * density);

    let on_lattice = lattice_profile(largest).is_some();
    let coarse_idx = if on_lattice {
        n_max
    } else {
        n_max.min(cfg.coarse_box_cap)
    };
    let coarse_comb = &combs[coarse_idx];
    let coarse_len = seq.boxes[coarse_idx].side(0);
    let max_step = 1.0 / (4.0 * coarse_len);
    let step_req = cfg.coarse_step.unwrap_or(max_step);
    if step_req > max_step * (1.0 + 1e-9) {
        return Err(Error::GridTooCoarse {
            step: step_req,
            max_step,
        });
    }
    let (step, grid) = intensity_grid(coarse_comb, cfg.k_lo, cfg.k_hi, step_req);
    let coarse_vol = gen.group.volume(&seq.boxes[coarse_idx]);

    // Stability prefilter on the grid: the mass proxy |S|^2/|B|^2 of a true
    // atom is box-independent, while singular-continuous peaks and Dirichlet
    // sidelobes drift with the box. Comparing two smaller boxes on the same
    // grid rejects those before any refinement work.
    let pre_grids: Vec<(f64, Vec<f64>)> = (coarse_idx.saturating_sub(2)..coarse_idx)
        .map(|n| {
            let vol = gen.group.volume(&seq.boxes[n]);
            let (s, g) = intensity_grid(&combs[n], cfg.k_lo, cfg.k_hi, step);
            debug_assert!((s - step).abs() <= 1e-15);
            debug_assert_eq!(g.len(), grid.len());
            (vol, g)
        })
        .collect();
    let pre_tol = (8.0 * cfg.residual_tol).min(0.5);

    // local maxima above a permissive fraction of the floor
    let detect = floor * 0.35 * coarse_vol;
    let mut candidates: Vec<f64> = Vec::new();
    for j in 1..grid.len().saturating_sub(1) {
        if grid[j] >= grid[j - 1] && grid[j] > grid[j + 1] && grid[j] >= detect {
            let mut proxy = grid[j] / coarse_vol;
            let mut stable = true;
            for (vol, g) in pre_grids.iter().rev() {
                let p = g[j] / vol;
                if (proxy - p).abs() / proxy.max(1e-300) > pre_tol {
                    stable = false;
                    break;
                }
                proxy = p;
            }
            if stable {
                candidates.push(cfg.k_lo + j as f64 * step);
            }
        }
    }

    // ladder refinement towards the largest box
    let refined: Vec<f64> = candidates
        .par_iter()
        .map(|&k0| {
            let mut k = k0;
            for comb in combs.iter().take(n_max + 1).skip(coarse_idx) {
                let len = comb.window().side(0);
                let half = 0.75 / len;
                let tol = (0.02 / len).max(cfg.refine_tol * 0.5);
                k = golden_max(
                    |q| amplitude_sum(comb, [q, 0.0]).norm_sqr(),
                    k - half,
                    k + half,
                    tol,
                );
            }
            golden_max(
                |q| amplitude_sum(largest, [q, 0.0]).norm_sqr(),
                k - 2.0 * cfg.refine_tol,
                k + 2.0 * cfg.refine_tol,
                cfg.refine_tol * 0.25,
            )
        })
        .collect();

    // deduplicate within the refinement tolerance, then accept by stability
    let mut ks = refined;
    ks.sort_by(f64::total_cmp);
    ks.dedup_by(|b, a| (*b - *a).abs() <= cfg.refine_tol);
    let first = n_max.saturating_sub(2);
    let mut atoms: Vec<Atom> = ks
        .par_iter()
        .filter_map(|&k| {
            let ints: Vec<f64> = (first..=n_max)
                .map(|n| atom_intensity(&combs[n], [k, 0.0]))
                .collect();
            let (intensity, residual) = summarize_estimates(&ints, density);
            (residual <= cfg.residual_tol && intensity >= floor).then_some(Atom {
                k: [k, 0.0],
                intensity,
                residual,
            })
        })
        .collect();
    atoms.sort_by(|a, b| {
        b.intensity
            .total_cmp(&a.intensity)
            .then(a.k[0].total_cmp(&b.k[0]))
    });
    let total_mass_proxy = atoms.iter().map(|a| a.intensity).sum();
    Ok(DiffractionSpectrum {
        dim: 1,
        atoms,
        total_mass_proxy,
        scan: ScanParams {
            k_lo: cfg.k_lo,
            k_hi: cfg.k_hi,
            coarse_step: step,
            refine_tol: cfg.refine_tol,
            residual_tol: cfg.residual_tol,
            floor,
            n_max,
        },
    })
}

/// Purity ratio: the fraction of `||f_phi||^2` carried by the detected
/// atoms, `sum_k |phi^(k)|^2 I_k / (phi~ * phi * gamma)(0)`. Returns the
/// ratio together with the denominator.
pub fn purity(
    gamma: &Autocorrelation,
    spectrum: &DiffractionSpectrum,
    phi: &TestFunction,
) -> Result<(f64, f64)> {
    let denom = pairing(gamma, phi, phi, [0.0, 0.0])?.re;
    if denom <= 1e-12 {
        return Err(Error::ZeroDenominator);
    }
    let mut num = KahanSum::new();
    for a in &spectrum.atoms {
        num.add(phi.fourier(&gamma.group, a.k).norm_sqr() * a.intensity);
    }
    Ok((num.value() / denom, denom))
}

/// Wiener-type average `w_N = (1/(2N+1)) sum_{|z| <= N} |eta(z)|^2` for a
/// lattice-supported autocorrelation on the integers.
pub fn wiener_oracle(gamma: &Autocorrelation, n: usize) -> Result<f64> {
    if gamma.range + 1e-9 < n as f64 {
        return Err(Error::RangeExceeded {
            requested: n as f64,
            available: gamma.range,
        });
    }
    let mut s = KahanSum::new();
    for (z, eta) in gamma.support.iter().zip(&gamma.eta) {
        if (z[0] - z[0].round()).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "wiener oracle needs an integer-supported autocorrelation".into(),
            ));
        }
        if z[0].abs() <= n as f64 + 0.5 {
            s.add(eta.norm_sqr());
        }
    }
    Ok(s.value() / (2 * n + 1) as f64)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralMassReport {
    pub k: Point,
    /// `|phi^(k)|^2 * atom intensity`.
    pub lhs: f64,
    /// Squared Weyl-sum modulus at the largest box.
    pub rhs: f64,
    pub rel_error: f64,
}

/// Compare the diffraction-side mass `|phi^(k)|^2 gamma^({k})` with the
/// dynamical-side estimate `|W_B(k, phi)|^2` at the largest box.
pub fn spectral_mass_check(
    gen: &CombGenerator,
    phi: &TestFunction,
    k: Point,
    seq: &VanHoveSequence,
    residual_tol: f64,
) -> Result<SpectralMassReport> {
    let (intensity, residual) = atom_estimate(gen, seq, k)?;
    let floor = 1e-4 * gen.density() * gen.density();
    if residual > residual_tol || intensity < floor {
        return Err(Error::InvalidParameter(format!(
            "atom at k={} rejected: intensity {intensity:.3e}, residual {residual:.3e}",
            k[0]
        )));
    }
    let lhs = phi.fourier(&gen.group, k).norm_sqr() * intensity;
    let b = seq.largest();
    let margin = phi.halfwidth[0] + phi.center[0].abs() + 1.0;
    let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
    let comb = gen.produce(&wide)?;
    let w = crate::dynamics::weyl_sum(&comb, phi, k, b)?;
    let rhs = w.norm_sqr();
    let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1e-300);
    Ok(SpectralMassReport {
        k,
        lhs,
        rhs,
        rel_error: rel,
    })
}

/// Row of the approximate-unit convergence table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ApproxUnitRow {
    pub halfwidth: f64,
    /// Probe-weighted atom mass filtered through `|phi_j^|^2`.
    pub weighted: f64,
    /// Probe-weighted atom mass of the spectrum itself.
    pub direct: f64,
    pub difference: f64,
}

/// For shrinking normalized tents `phi_j`, compare the probe-weighted mass
/// of `|phi_j^|^2 gamma^` against the probe-weighted mass of `gamma^`.
pub fn approximate_unit_check(
    spectrum: &DiffractionSpectrum,
    group: &crate::geometry::GroupSpec,
    halfwidths: &[f64],
    probe: impl Fn(f64) -> f64,
) -> Vec<ApproxUnitRow> {
    let direct: f64 = spectrum
        .atoms
        .iter()
        .map(|a| probe(a.k[0]) * a.intensity)
        .sum();
    halfwidths
        .iter()
        .map(|&h| {
            let phi = TestFunction::tent(0.0, h, 1.0 / h);
            let weighted: f64 = spectrum
                .atoms
                .iter()
                .map(|a| probe(a.k[0]) * phi.fourier(group, a.k).norm_sqr() * a.intensity)
                .sum();
            ApproxUnitRow {
                halfwidth: h,
                weighted,
                direct,
                difference: (weighted - direct).abs(),
            }
        })
        .collect()
}
