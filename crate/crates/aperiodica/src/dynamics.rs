//! The dynamical-spectrum side: correlation averages, Weyl sums, and
//! eigenvalue-group diagnostics.
//!
//! The correlation `<f_phi, T^t f_psi>` is realized as the volume average
//! `(1/|B|) int_B conj((phi*omega)(v-t)) (psi*omega)(v) dv`; for tents the
//! integrand is piecewise polynomial between kinks, so a kink-scale
//! trapezoid grid is accurate at the averaging tolerances used here. Weyl
//! sums `W_B(k, phi) = (1/|B|) int_B e^{2 pi i k v} (phi*omega)(v) dv` carry
//! an oscillatory factor, so their grid step also shrinks with `|k|`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::autocorr::{pairing, VanHoveSequence};
use crate::diffraction::DiffractionSpectrum;
use crate::error::{Error, Result};
use crate::generators::CombGenerator;
use crate::geometry::{BoxRegion, GroupSpec, Point};
use crate::kahan::{KahanComplex, KahanSum};
use crate::measures::WeightedComb;
use crate::parallel::block_ranges;
use crate::testfn::TestFunction;
use rayon::prelude::*;

/// Sampled values of `(phi * omega)(v0 + j step)` for `j = 0..=count`.
fn convolution_grid(
    comb: &WeightedComb,
    phi: &TestFunction,
    v0: f64,
    step: f64,
    count: usize,
) -> Vec<Complex64> {
    let supp = phi.support();
    let pts = comb.points();
    let ws = comb.weights();
    let chunks = block_ranges(count + 1);
    let mut out = vec![Complex64::new(0.0, 0.0); count + 1];
    let pieces: Vec<(std::ops::Range<usize>, Vec<Complex64>)> = chunks
        .into_par_iter()
        .map(|r| {
            let mut local = vec![Complex64::new(0.0, 0.0); r.len()];
            // advancing window over sorted points: x in [v - hi, v - lo]
            let mut start = 0usize;
            for (slot, j) in r.clone().enumerate() {
                let v = v0 + j as f64 * step;
                let xlo = v - supp.hi[0];
                let xhi = v - supp.lo[0];
                while start < pts.len() && pts[start][0] < xlo {
                    start += 1;
                }
                let mut i = start;
                let mut acc = Complex64::new(0.0, 0.0);
                while i < pts.len() && pts[i][0] <= xhi {
                    acc += ws[i] * phi.eval([v - pts[i][0], 0.0]);
                    i += 1;
                }
                local[slot] = acc;
            }
            (r, local)
        })
        .collect();
    for (r, vals) in pieces {
        out[r].copy_from_slice(&vals);
    }
    out
}

fn require_window(comb: &WeightedComb, needed: &BoxRegion, what: &str) -> Result<()> {
    if comb.window().contains_box(needed) {
        Ok(())
    } else {
        Err(Error::TruncatedSupport(format!(
            "{what}: need [{:.3}, {:.3}), window is [{:.3}, {:.3})",
            needed.lo[0],
            needed.hi[0],
            comb.window().lo[0],
            comb.window().hi[0]
        )))
    }
}

/// Kink-scale trapezoid step for correlation grids.
fn base_step(phi: &TestFunction, psi: &TestFunction) -> f64 {
    let h = phi.halfwidth[0].min(psi.halfwidth[0]);
    h / 8.0
}

/// `<f_phi, T^t f_psi>` estimated over the box `B` (1D).
pub fn correlation(
    comb: &WeightedComb,
    phi: &TestFunction,
    psi: &TestFunction,
    t: f64,
    b: &BoxRegion,
    v_step: f64,
) -> Result<Complex64> {
    let group = comb.group();
    let psup = phi.support();
    let ssup = psi.support();
    let need_phi = BoxRegion::line(b.lo[0] - t - psup.hi[0], b.hi[0] - t - psup.lo[0]);
    let need_psi = BoxRegion::line(b.lo[0] - ssup.hi[0], b.hi[0] - ssup.lo[0]);
    require_window(comb, &need_phi, "correlation phi factor")?;
    require_window(comb, &need_psi, "correlation psi factor")?;
    let vol = group.volume(b);
    if group.discrete() {
        let lo = b.lo[0].ceil() as i64;
        let hi = (b.hi[0] - 1e-12).floor() as i64;
        let mut acc = KahanComplex::new();
        for v in lo..=hi {
            let vf = v as f64;
            let a = comb.f_phi_at(phi, [vf - t, 0.0]);
            let c = comb.f_phi_at(psi, [vf, 0.0]);
            acc.add(a.conj() * c);
        }
        return Ok(acc.value() / vol);
    }
    let len = b.side(0);
    let n = (len / v_step).ceil().max(1.0) as usize;
    let step = len / n as f64;
    let gphi = convolution_grid(comb, phi, b.lo[0] - t, step, n);
    let gpsi = convolution_grid(comb, psi, b.lo[0], step, n);
    let mut acc = KahanComplex::new();
    for j in 0..=n {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        acc.add(gphi[j].conj() * gpsi[j] * w);
    }
    Ok(acc.value() * step / vol)
}

/// Correlation values over a symmetric quantized t-grid, sharing one pair of
/// sampled convolution grids across all offsets.
#[derive(Debug, Clone)]
pub struct CorrelationCurve {
    pub t_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub b: BoxRegion,
    pub phi: TestFunction,
    pub psi: TestFunction,
}

pub fn correlation_curve(
    comb: &WeightedComb,
    phi: &TestFunction,
    psi: &TestFunction,
    t_max: f64,
    t_count: usize,
    b: &BoxRegion,
) -> Result<CorrelationCurve> {
    let group = comb.group();
    if group.discrete() {
        // exact sums: no grid sharing needed
        let mut t_grid = Vec::new();
        let mut values = Vec::new();
        let tm = t_max.floor() as i64;
        for t in -tm..=tm {
            t_grid.push(t as f64);
            values.push(correlation(comb, phi, psi, t as f64, b, 1.0)?);
        }
        return Ok(CorrelationCurve {
            t_grid,
            values,
            b: *b,
            phi: *phi,
            psi: *psi,
        });
    }
    let step = base_step(phi, psi);
    // quantize the requested t-resolution to whole grid steps
    let stride = ((2.0 * t_max / t_count.max(1) as f64) / step).round().max(1.0) as usize;
    let m_half = (t_max / (stride as f64 * step)).floor() as usize;
    let t_reach = m_half * stride;

    let psup = phi.support();
    let ssup = psi.support();
    let reach = t_reach as f64 * step;
    let need = BoxRegion::line(
        (b.lo[0] - reach - psup.hi[0]).min(b.lo[0] - ssup.hi[0]),
        (b.hi[0] + reach - psup.lo[0]).max(b.hi[0] - ssup.lo[0]),
    );
    require_window(comb, &need, "correlation curve")?;

    let len = b.side(0);
    let n = (len / step).ceil().max(1.0) as usize;
    let step = len / n as f64;
    // phi grid spans [lo - reach, hi + reach]; index j in the psi grid
    // corresponds to index j + t_reach - offset in the phi grid
    let gphi = convolution_grid(comb, phi, b.lo[0] - reach, step, n + 2 * t_reach);
    let gpsi = convolution_grid(comb, psi, b.lo[0], step, n);
    let vol = group.volume(b);
    let mut t_grid = Vec::with_capacity(2 * m_half + 1);
    let mut values = Vec::with_capacity(2 * m_half + 1);
    for m in -(m_half as i64)..=m_half as i64 {
        let offset = m * stride as i64;
        let t = offset as f64 * step;
        let mut acc = KahanComplex::new();
        for j in 0..=n {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            let pi = (j as i64 + t_reach as i64 - offset) as usize;
            acc.add(gphi[pi].conj() * gpsi[j] * w);
        }
        t_grid.push(t);
        values.push(acc.value() * step / vol);
    }
    Ok(CorrelationCurve {
        t_grid,
        values,
        b: *b,
        phi: *phi,
        psi: *psi,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DworkinReport {
    pub t_grid: Vec<f64>,
    pub correlation: Vec<[f64; 2]>,
    pub pairing: Vec<[f64; 2]>,
    pub rel_errors: Vec<f64>,
    pub max_rel_error: f64,
}

/// Consistency of the time-averaged correlation with the autocorrelation
/// pairing `(phi~ * psi * gamma)(t)` over a t-grid.
pub fn dworkin_identity_report(
    gen: &CombGenerator,
    phi: &TestFunction,
    psi: &TestFunction,
    t_max: f64,
    t_count: usize,
    seq: &VanHoveSequence,
    epsilon: f64,
) -> Result<DworkinReport> {
    let b = *seq.largest();
    let conv_sup = phi.adjoint().convolve(psi, &gen.group).support();
    let margin = t_max + conv_sup.hi[0].abs().max(conv_sup.lo[0].abs()) + 2.0;
    let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
    let comb_wide = gen.produce(&wide)?;
    let comb_b = gen.produce(&b)?;
    let range = margin;
    let gamma = crate::autocorr::autocorr_comb(&comb_b, epsilon, range, seq.n_max())?;
    let curve = correlation_curve(&comb_wide, phi, psi, t_max, t_count, &b)?;
    let mut rel_errors = Vec::with_capacity(curve.t_grid.len());
    let mut pair_vals = Vec::with_capacity(curve.t_grid.len());
    let mut max_rel: f64 = 0.0;
    for (t, corr) in curve.t_grid.iter().zip(&curve.values) {
        let pair = pairing(&gamma, phi, psi, [*t, 0.0])?;
        let rel = (corr - pair).norm() / (pair.norm() + 1e-12);
        rel_errors.push(rel);
        pair_vals.push(pair);
        max_rel = max_rel.max(rel);
    }
    Ok(DworkinReport {
        t_grid: curve.t_grid,
        correlation: curve.values.iter().map(|z| [z.re, z.im]).collect(),
        pairing: pair_vals.iter().map(|z| [z.re, z.im]).collect(),
        rel_errors,
        max_rel_error: max_rel,
    })
}

/// `W_B(k, phi) = (1/|B|) int_B e^{+2 pi i k v} (phi * omega)(v) dv`.
pub fn weyl_sum(
    comb: &WeightedComb,
    phi: &TestFunction,
    k: Point,
    b: &BoxRegion,
) -> Result<Complex64> {
    let group = comb.group();
    let supp = phi.support();
    let need = BoxRegion::line(b.lo[0] - supp.hi[0], b.hi[0] - supp.lo[0]);
    require_window(comb, &need, "weyl sum")?;
    let vol = group.volume(b);
    if group.discrete() {
        let lo = b.lo[0].ceil() as i64;
        let hi = (b.hi[0] - 1e-12).floor() as i64;
        let mut acc = KahanComplex::new();
        for v in lo..=hi {
            let vf = v as f64;
            let phase = 2.0 * std::f64::consts::PI * k[0] * vf;
            let (s, c) = phase.sin_cos();
            acc.add(Complex64::new(c, s) * comb.f_phi_at(phi, [vf, 0.0]));
        }
        return Ok(acc.value() / vol);
    }
    // oscillation-aware trapezoid step
    let step_req = (phi.halfwidth[0] / 8.0).min(1.0 / (16.0 * (k[0].abs() + 1.0)));
    let len = b.side(0);
    let n = (len / step_req).ceil().max(1.0) as usize;
    let step = len / n as f64;
    let grid = convolution_grid(comb, phi, b.lo[0], step, n);
    let chunks = block_ranges(n + 1);
    let partials: Vec<Complex64> = chunks
        .into_par_iter()
        .map(|r| {
            let mut acc = KahanComplex::new();
            for j in r {
                let v = b.lo[0] + j as f64 * step;
                let phase = 2.0 * std::f64::consts::PI * k[0] * v;
                let (s, c) = phase.sin_cos();
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                acc.add(Complex64::new(c, s) * grid[j] * w);
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanComplex::new();
    for p in partials {
        acc.add(p);
    }
    Ok(acc.value() * step / vol)
}

/// Weyl-sum moduli along a van Hove sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeylReport {
    pub k: f64,
    pub modulus_sq_per_n: Vec<f64>,
    pub accepted: bool,
    pub threshold: f64,
}

pub fn weyl_report(
    gen: &CombGenerator,
    phi: &TestFunction,
    k: f64,
    seq: &VanHoveSequence,
    threshold: f64,
) -> Result<WeylReport> {
    let margin = phi.halfwidth[0] + phi.center[0].abs() + 1.0;
    let mut moduli = Vec::with_capacity(seq.boxes.len());
    for b in &seq.boxes {
        let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
        let comb = gen.produce(&wide)?;
        moduli.push(weyl_sum(&comb, phi, [k, 0.0], b)?.norm_sqr());
    }
    let accepted = *moduli.last().unwrap() >= threshold;
    Ok(WeylReport {
        k,
        modulus_sq_per_n: moduli,
        accepted,
        threshold,
    })
}

/// Comb on the unit lattice with independent random phases; its Weyl sums
/// carry no atoms and decay like `c / |B|`, which calibrates the acceptance
/// threshold for true eigenvalues.
pub fn random_phase_comb(window: &BoxRegion, density: f64, seed: u64) -> WeightedComb {
    let spacing = 1.0 / density;
    let n_lo = (window.lo[0] / spacing).ceil() as i64;
    let n_hi = ((window.hi[0] - 1e-12) / spacing).floor() as i64;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for n in n_lo..=n_hi {
        let theta = 2.0 * std::f64::consts::PI * crate::generators::site_uniform_pub(seed, n);
        points.push([n as f64 * spacing, 0.0]);
        weights.push(Complex64::new(theta.cos(), theta.sin()));
    }
    WeightedComb::from_parts_unnormalized(
        GroupSpec::real_line(),
        *window,
        points,
        weights,
    )
}

/// Fit the random-phase baseline constant `c` in `|W|^2 ~ c / |B|`.
pub fn weyl_baseline(
    phi_set: &[TestFunction],
    density: f64,
    b: &BoxRegion,
    seed: u64,
) -> Result<f64> {
    let margin = phi_set
        .iter()
        .map(|p| p.halfwidth[0] + p.center[0].abs())
        .fold(0.0f64, f64::max)
        + 1.0;
    let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
    let comb = random_phase_comb(&wide, density, seed);
    let probes = [0.2371, 0.7413, 1.3331, 2.1117];
    let vol = GroupSpec::real_line().volume(b);
    let mut acc = KahanSum::new();
    let mut count = 0usize;
    for phi in phi_set {
        for k in probes {
            acc.add(weyl_sum(&comb, phi, [k, 0.0], b)?.norm_sqr() * vol);
            count += 1;
        }
    }
    Ok(acc.value() / count as f64)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenCandidate {
    pub k: f64,
    /// Integer coefficients of the generating combination.
    pub coeffs: Vec<i64>,
    /// Best squared Weyl modulus over the probe set.
    pub w2: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenGroupReport {
    pub baseline_c: f64,
    pub threshold: f64,
    pub candidates: Vec<EigenCandidate>,
    pub accepted_count: usize,
    /// Every accepted k has an accepted -k.
    pub negation_closed: bool,
    pub addition_pairs_total: usize,
    pub addition_pairs_accepted: usize,
}

impl EigenGroupReport {
    pub fn addition_pass_rate(&self) -> f64 {
        if self.addition_pairs_total == 0 {
            1.0
        } else {
            self.addition_pairs_accepted as f64 / self.addition_pairs_total as f64
        }
    }
}

/// Check that integer combinations of the strongest diffraction atoms are
/// numerical eigenvalues (Weyl threshold) and that the accepted set is
/// closed under negation and, statistically, under addition.
#[allow(clippy::too_many_arguments)]
pub fn eigenvalue_group_check(
    spectrum: &DiffractionSpectrum,
    gen: &CombGenerator,
    phi_set: &[TestFunction],
    coeff_bound: i64,
    purity: f64,
    seq: &VanHoveSequence,
    top_atoms: usize,
    seed: u64,
) -> Result<EigenGroupReport> {
    if purity < 0.95 {
        return Err(Error::NotPurePoint(purity));
    }
    let top: Vec<f64> = spectrum
        .top(top_atoms)
        .iter()
        .map(|a| a.k[0])
        .collect();
    if top.is_empty() {
        return Err(Error::InvalidParameter("no atoms to combine".into()));
    }
    let b = *seq.largest();
    let density = gen.density();
    let baseline_c = weyl_baseline(phi_set, density, &b, seed)?;
    let vol = gen.group.volume(&b);
    let threshold = 10.0 * baseline_c / vol;

    // all integer combinations of the top atoms with |m_i| <= coeff_bound
    let mut combos: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut stack = vec![0i64; top.len()];
    enumerate_coeffs(&top, coeff_bound, 0, &mut stack, &mut combos);
    combos.sort_by(|a, b| a.0.total_cmp(&b.0));
    combos.dedup_by(|b, a| (b.0 - a.0).abs() <= 1e-6);
    combos.retain(|(k, _)| *k >= spectrum.scan.k_lo && *k <= spectrum.scan.k_hi);

    let margin = phi_set
        .iter()
        .map(|p| p.halfwidth[0] + p.center[0].abs())
        .fold(0.0f64, f64::max)
        + 1.0;
    let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
    let comb = gen.produce(&wide)?;

    let candidates: Vec<EigenCandidate> = combos
        .par_iter()
        .map(|(k, coeffs)| {
            let mut best = 0.0f64;
            for phi in phi_set {
                let w2 = weyl_sum(&comb, phi, [*k, 0.0], &b)
                    .map(|w| w.norm_sqr())
                    .unwrap_or(0.0);
                best = best.max(w2);
            }
            EigenCandidate {
                k: *k,
                coeffs: coeffs.clone(),
                w2: best,
                accepted: best >= threshold,
            }
        })
        .collect();

    let accepted: Vec<f64> = candidates
        .iter()
        .filter(|c| c.accepted)
        .map(|c| c.k)
        .collect();
    let is_accepted = |k: f64| -> bool {
        accepted.iter().any(|a| (a - k).abs() <= 1e-6)
    };
    let negation_closed = accepted.iter().all(|k| is_accepted(-k));
    // closure under addition, tested on pairwise sums of the generating
    // atoms; sums outside the candidate enumeration get their own Weyl check
    let weyl_accept = |k: f64| -> bool {
        let mut best = 0.0f64;
        for phi in phi_set {
            let w2 = weyl_sum(&comb, phi, [k, 0.0], &b)
                .map(|w| w.norm_sqr())
                .unwrap_or(0.0);
            best = best.max(w2);
        }
        best >= threshold
    };
    let mut addition_total = 0usize;
    let mut addition_ok = 0usize;
    for i in 0..top.len() {
        for j in i..top.len() {
            let s = top[i] + top[j];
            if s >= spectrum.scan.k_lo && s <= spectrum.scan.k_hi {
                addition_total += 1;
                let candidate_hit = candidates
                    .iter()
                    .find(|c| (c.k - s).abs() <= 1e-6)
                    .map(|c| c.accepted);
                let ok = candidate_hit.unwrap_or_else(|| weyl_accept(s));
                if ok {
                    addition_ok += 1;
                }
            }
        }
    }
    let accepted_count = accepted.len();
    Ok(EigenGroupReport {
        baseline_c,
        threshold,
        candidates,
        accepted_count,
        negation_closed,
        addition_pairs_total: addition_total,
        addition_pairs_accepted: addition_ok,
    })
}

fn enumerate_coeffs(
    atoms: &[f64],
    bound: i64,
    idx: usize,
    stack: &mut Vec<i64>,
    out: &mut Vec<(f64, Vec<i64>)>,
) {
    if idx == atoms.len() {
        let k: f64 = atoms
            .iter()
            .zip(stack.iter())
            .map(|(a, m)| a * *m as f64)
            .sum();
        out.push((k, stack.clone()));
        return;
    }
    for m in -bound..=bound {
        stack[idx] = m;
        enumerate_coeffs(atoms, bound, idx + 1, stack, out);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroWindowReport {
    pub k_center: f64,
    pub k_halfwidth: f64,
    /// Smooth-window spectral mass estimate of `f_phi` near `k_center`.
    pub mass: f64,
    /// `||f_phi||^2 = C(0)`.
    pub norm_sq: f64,
    pub ratio: f64,
}

/// Estimate the spectral mass of `f_phi` in a k-window from the windowed
/// transform of the correlation curve `t -> <f_phi, T^t f_phi>`.
pub fn spectral_measure_zero_check(
    gen: &CombGenerator,
    phi: &TestFunction,
    k_center: f64,
    k_halfwidth: f64,
    seq: &VanHoveSequence,
    t_max: f64,
) -> Result<ZeroWindowReport> {
    let b = *seq.largest();
    let margin = t_max + phi.halfwidth[0] + phi.center[0].abs() + 2.0;
    let wide = BoxRegion::line(b.lo[0] - margin, b.hi[0] + margin);
    let comb = gen.produce(&wide)?;
    // t resolution ~ 1/16 resolves oscillations up to |k| ~ 4
    let t_count = (2.0 * t_max * 16.0).ceil() as usize;
    let curve = correlation_curve(&comb, phi, phi, t_max, t_count, &b)?;
    let window = TestFunction::raised_cosine(0.0, t_max, 1.0 / t_max)
        .with_unit_integral(&gen.group);
    let mut acc = KahanComplex::new();
    let n = curve.t_grid.len();
    for (i, (t, c)) in curve.t_grid.iter().zip(&curve.values).enumerate() {
        let dt = if n > 1 {
            curve.t_grid[1] - curve.t_grid[0]
        } else {
            1.0
        };
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let phase = 2.0 * std::f64::consts::PI * k_center * t;
        let (s, cs) = phase.sin_cos();
        let win = window.eval([*t, 0.0]).re;
        acc.add(Complex64::new(cs, s) * c * (win * w * dt));
    }
    let mass = acc.value().norm();
    let norm_sq = curve.values[n / 2].re;
    Ok(ZeroWindowReport {
        k_center,
        k_halfwidth,
        mass,
        norm_sq,
        ratio: mass / norm_sq.max(1e-300),
    })
}
