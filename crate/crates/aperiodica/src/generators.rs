//! Deterministic, window-parameterized comb producers.
//!
//! Every generator is a pure rule `(kind, params, seed, window) -> comb`;
//! producing a larger window and restricting gives bit-identical points, so
//! van Hove sequences can reuse one rule at every scale. Randomized kinds
//! (perturbed and Bernoulli lattices) derive their per-site values from a
//! counter-based hash of `(seed, site index)`, never from sequential RNG
//! state, which is what makes the window-consistency exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoxRegion, GroupSpec, Point};
use crate::measures::{TranslationBound, WeightedComb};
use crate::quadratic::{GoldenInt, SQRT5, TAU};

/// SplitMix64 finalizer; maps a counter to a well-mixed 64-bit word.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Uniform value in `[0, 1)` derived from `(seed, site)`.
fn site_uniform(seed: u64, site: i64) -> f64 {
    let h = splitmix64(seed ^ splitmix64(site as u64));
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Crate-facing accessor for the per-site uniform (used by the random-phase
/// baseline comb in `dynamics`).
pub fn site_uniform_pub(seed: u64, site: i64) -> f64 {
    site_uniform(seed, site)
}

fn site_uniform_2d(seed: u64, site: (i64, i64)) -> f64 {
    let h = splitmix64(seed ^ splitmix64(site.0 as u64) ^ splitmix64((site.1 as u64).rotate_left(32)));
    (h >> 11) as f64 / (1u64 << 53) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightFn {
    Constant,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeSpec {
    Golden,
    Custom(f64),
}

impl SlopeSpec {
    pub fn value(&self) -> f64 {
        match self {
            SlopeSpec::Golden => TAU,
            SlopeSpec::Custom(v) => *v,
        }
    }

    /// Galois conjugate used by the internal star map.
    pub fn star_value(&self) -> f64 {
        match self {
            SlopeSpec::Golden => 1.0 - TAU,
            // generic quadratic-like slope: reuse the mirror convention
            SlopeSpec::Custom(v) => 1.0 - v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubstRule {
    Fibonacci,
    ThueMorse,
    PeriodDoubling,
}

impl SubstRule {
    /// Substitution images of letters 0 and 1.
    fn images(&self) -> (&'static [u8], &'static [u8]) {
        match self {
            SubstRule::Fibonacci => (&[0, 1], &[0]),
            SubstRule::ThueMorse => (&[0, 1], &[1, 0]),
            SubstRule::PeriodDoubling => (&[0, 1], &[0, 0]),
        }
    }

    /// Prefix of the one-sided fixed point starting from letter 0, of total
    /// geometric length at least `target_len`.
    pub fn fixed_point_prefix(&self, lengths: [f64; 2], target_len: f64) -> Vec<u8> {
        let (img0, img1) = self.images();
        let mut word: Vec<u8> = vec![0];
        let geom_len = |w: &[u8]| -> f64 {
            w.iter().map(|&l| lengths[l as usize]).sum()
        };
        loop {
            if geom_len(&word) >= target_len {
                return word;
            }
            let mut next = Vec::with_capacity(word.len() * 2);
            for &l in &word {
                next.extend_from_slice(if l == 0 { img0 } else { img1 });
            }
            if next.len() == word.len() {
                // defensive: cannot happen for the built-in primitive rules
                return next;
            }
            word = next;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisplacementRule {
    /// Smooth quasiperiodic displacement `eps sin(2 pi (n beta + theta0))`
    /// with `beta = sqrt 2` and a seed-derived phase.
    Quasiperiodic,
    /// Independent uniform displacement in `(-eps, eps)` per site.
    Iid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    Lattice {
        spacing: Vec<f64>,
        weights: WeightFn,
    },
    #[serde(rename = "cut-and-project-1d")]
    CutAndProject1d {
        slope: SlopeSpec,
        wstar_lo: f64,
        wstar_hi: f64,
    },
    Substitution {
        rule: SubstRule,
        lengths: [f64; 2],
        #[serde(with = "weight_pair_serde")]
        letter_weights: [Complex64; 2],
    },
    PerturbedLattice {
        spacing: f64,
        epsilon: f64,
        rule: DisplacementRule,
    },
    BernoulliLattice {
        spacing: f64,
        p: f64,
    },
}

mod weight_pair_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(w: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
        [[w[0].re, w[0].im], [w[1].re, w[1].im]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 2], D::Error> {
        let v = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok([
            Complex64::new(v[0][0], v[0][1]),
            Complex64::new(v[1][0], v[1][1]),
        ])
    }
}

/// A deterministic rule producing the comb restricted to any requested box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombGenerator {
    pub group: GroupSpec,
    pub seed: u64,
    #[serde(flatten)]
    pub kind: GeneratorKind,
}

impl CombGenerator {
    pub fn lattice(group: GroupSpec, spacing: Vec<f64>, weights: WeightFn, seed: u64) -> Result<Self> {
        if spacing.len() != group.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} spacings for dim {}",
                spacing.len(),
                group.dim()
            )));
        }
        if spacing.iter().any(|s| *s <= 0.0) {
            return Err(Error::InvalidParameter("spacing must be positive".into()));
        }
        if group.discrete() && spacing.iter().any(|s| s.fract() != 0.0) {
            return Err(Error::InvalidParameter(
                "integer groups need integer spacing".into(),
            ));
        }
        Ok(CombGenerator {
            group,
            seed,
            kind: GeneratorKind::Lattice { spacing, weights },
        })
    }

    /// Unit lattice on the real line with weight 1.
    pub fn unit_lattice(seed: u64) -> Self {
        CombGenerator {
            group: GroupSpec::real_line(),
            seed,
            kind: GeneratorKind::Lattice {
                spacing: vec![1.0],
                weights: WeightFn::Constant,
            },
        }
    }

    pub fn cut_and_project_1d(slope: SlopeSpec, wstar: (f64, f64), seed: u64) -> Result<Self> {
        if wstar.1 - wstar.0 <= 0.0 {
            return Err(Error::DegenerateWindow(format!(
                "internal window [{}, {}) has empty interior",
                wstar.0, wstar.1
            )));
        }
        Ok(CombGenerator {
            group: GroupSpec::real_line(),
            seed,
            kind: GeneratorKind::CutAndProject1d {
                slope,
                wstar_lo: wstar.0,
                wstar_hi: wstar.1,
            },
        })
    }

    /// The Fibonacci chain: golden slope, canonical internal window
    /// `[-1, tau - 1)`, gaps `{1, tau}`, unit weights.
    pub fn fibonacci(seed: u64) -> Self {
        Self::cut_and_project_1d(SlopeSpec::Golden, (-1.0, TAU - 1.0), seed).unwrap()
    }

    pub fn substitution(
        rule: SubstRule,
        lengths: [f64; 2],
        letter_weights: [Complex64; 2],
        seed: u64,
    ) -> Result<Self> {
        if lengths.iter().any(|l| *l <= 0.0) {
            return Err(Error::InvalidParameter("letter lengths must be positive".into()));
        }
        Ok(CombGenerator {
            group: GroupSpec::real_line(),
            seed,
            kind: GeneratorKind::Substitution {
                rule,
                lengths,
                letter_weights,
            },
        })
    }

    /// Thue-Morse comb with unit lengths and weights +1 / -1.
    pub fn thue_morse(seed: u64) -> Self {
        Self::substitution(
            SubstRule::ThueMorse,
            [1.0, 1.0],
            [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            seed,
        )
        .unwrap()
    }

    /// Period-doubling comb with unit lengths and weights (1, c).
    pub fn period_doubling(c: Complex64, seed: u64) -> Self {
        Self::substitution(
            SubstRule::PeriodDoubling,
            [1.0, 1.0],
            [Complex64::new(1.0, 0.0), c],
            seed,
        )
        .unwrap()
    }

    /// Fibonacci substitution with lengths `(tau, 1)` and unit weights; the
    /// geometric realization of the golden substitution fixed point.
    pub fn fibonacci_substitution(seed: u64) -> Self {
        Self::substitution(
            SubstRule::Fibonacci,
            [TAU, 1.0],
            [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            seed,
        )
        .unwrap()
    }

    pub fn perturbed_lattice(
        spacing: f64,
        epsilon: f64,
        rule: DisplacementRule,
        seed: u64,
    ) -> Result<Self> {
        if spacing <= 0.0 {
            return Err(Error::InvalidParameter("spacing must be positive".into()));
        }
        if epsilon < 0.0 || epsilon >= spacing / 2.0 {
            return Err(Error::EpsilonTooLarge { epsilon, spacing });
        }
        Ok(CombGenerator {
            group: GroupSpec::real_line(),
            seed,
            kind: GeneratorKind::PerturbedLattice {
                spacing,
                epsilon,
                rule,
            },
        })
    }

    pub fn bernoulli_lattice(spacing: f64, p: f64, seed: u64) -> Result<Self> {
        if spacing <= 0.0 {
            return Err(Error::InvalidParameter("spacing must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter("occupation probability must be in [0,1]".into()));
        }
        Ok(CombGenerator {
            group: GroupSpec::real_line(),
            seed,
            kind: GeneratorKind::BernoulliLattice { spacing, p },
        })
    }

    /// Expected number of points per unit Haar volume.
    pub fn density(&self) -> f64 {
        match &self.kind {
            GeneratorKind::Lattice { spacing, .. } => {
                spacing.iter().map(|s| 1.0 / s).product()
            }
            GeneratorKind::CutAndProject1d { wstar_lo, wstar_hi, .. } => {
                (wstar_hi - wstar_lo) / SQRT5
            }
            GeneratorKind::Substitution { rule, lengths, .. } => {
                let f = rule.letter_frequencies();
                1.0 / (f[0] * lengths[0] + f[1] * lengths[1])
            }
            GeneratorKind::PerturbedLattice { spacing, .. } => 1.0 / spacing,
            GeneratorKind::BernoulliLattice { spacing, p } => p / spacing,
        }
    }

    /// A `(C, V)` bound that `produce` output satisfies for every window.
    pub fn published_bound(&self) -> TranslationBound {
        let dim = self.group.dim();
        let (c, hw) = match &self.kind {
            GeneratorKind::Lattice { spacing, .. } => {
                let hw = spacing.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
                (1.0, hw)
            }
            // minimal gap of the golden chain with the canonical window is 1
            GeneratorKind::CutAndProject1d { wstar_lo, wstar_hi, .. } => {
                let width = wstar_hi - wstar_lo;
                // gaps shrink as the internal window grows; stay conservative
                let hw = (1.0 / width.max(1.0)).min(0.5);
                (1.0, hw)
            }
            GeneratorKind::Substitution { lengths, letter_weights, .. } => {
                let c = letter_weights.iter().map(|w| w.norm()).fold(0.0, f64::max);
                (c.max(1.0), lengths.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0)
            }
            GeneratorKind::PerturbedLattice { spacing, epsilon, .. } => {
                (1.0, (spacing - 2.0 * epsilon) / 2.0)
            }
            GeneratorKind::BernoulliLattice { spacing, .. } => (1.0, spacing / 2.0),
        };
        TranslationBound {
            c,
            v: BoxRegion::symmetric([hw, hw], dim),
        }
    }

    /// Produce the comb restricted to `window`.
    pub fn produce(&self, window: &BoxRegion) -> Result<WeightedComb> {
        window.validate()?;
        if window.dim != self.group.dim() {
            return Err(Error::InvalidParameter(format!(
                "window dim {} vs group dim {}",
                window.dim,
                self.group.dim()
            )));
        }
        let mut points: Vec<Point> = Vec::new();
        let mut weights: Vec<Complex64> = Vec::new();
        match &self.kind {
            GeneratorKind::Lattice { spacing, weights: wf } => {
                self.produce_lattice(window, spacing, *wf, &mut points, &mut weights);
            }
            GeneratorKind::CutAndProject1d { slope, wstar_lo, wstar_hi } => {
                if wstar_hi - wstar_lo <= 0.0 {
                    return Err(Error::DegenerateWindow("internal window has empty interior".into()));
                }
                produce_cut_and_project(
                    window,
                    slope,
                    (*wstar_lo, *wstar_hi),
                    &mut points,
                    &mut weights,
                );
            }
            GeneratorKind::Substitution { rule, lengths, letter_weights } => {
                produce_substitution(window, *rule, *lengths, *letter_weights, &mut points, &mut weights);
            }
            GeneratorKind::PerturbedLattice { spacing, epsilon, rule } => {
                if *epsilon >= spacing / 2.0 {
                    return Err(Error::EpsilonTooLarge {
                        epsilon: *epsilon,
                        spacing: *spacing,
                    });
                }
                produce_perturbed(window, *spacing, *epsilon, *rule, self.seed, &mut points, &mut weights);
            }
            GeneratorKind::BernoulliLattice { spacing, p } => {
                produce_bernoulli(window, *spacing, *p, self.seed, &mut points, &mut weights);
            }
        }
        Ok(WeightedComb::from_parts_unnormalized(
            self.group,
            *window,
            points,
            weights,
        ))
    }

    fn produce_lattice(
        &self,
        window: &BoxRegion,
        spacing: &[f64],
        wf: WeightFn,
        points: &mut Vec<Point>,
        weights: &mut Vec<Complex64>,
    ) {
        let dim = self.group.dim();
        let idx_range = |axis: usize| -> (i64, i64) {
            let s = spacing[axis];
            let lo = (window.lo[axis] / s).ceil() as i64;
            // half-open upper end
            let mut hi = (window.hi[axis] / s).floor() as i64;
            if hi as f64 * s >= window.hi[axis] {
                hi -= 1;
            }
            (lo, hi)
        };
        let weight_of = |n: i64, m: i64| -> Complex64 {
            match wf {
                WeightFn::Constant => Complex64::new(1.0, 0.0),
                WeightFn::Alternating => {
                    if (n + m) % 2 == 0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(-1.0, 0.0)
                    }
                }
            }
        };
        let (x0, x1) = idx_range(0);
        if dim == 1 {
            for n in x0..=x1 {
                points.push([n as f64 * spacing[0], 0.0]);
                weights.push(weight_of(n, 0));
            }
        } else {
            let (y0, y1) = idx_range(1);
            for n in x0..=x1 {
                for m in y0..=y1 {
                    points.push([n as f64 * spacing[0], m as f64 * spacing[1]]);
                    weights.push(weight_of(n, m));
                }
            }
        }
    }
}

impl SubstRule {
    /// Letter frequencies in the fixed point (left Perron eigenvector).
    pub fn letter_frequencies(&self) -> [f64; 2] {
        match self {
            // substitution matrix [[1,1],[1,0]]: frequencies (tau, 1)/ (tau+1)
            SubstRule::Fibonacci => [TAU / (TAU + 1.0), 1.0 / (TAU + 1.0)],
            SubstRule::ThueMorse => [0.5, 0.5],
            SubstRule::PeriodDoubling => [2.0 / 3.0, 1.0 / 3.0],
        }
    }
}

fn produce_cut_and_project(
    window: &BoxRegion,
    slope: &SlopeSpec,
    wstar: (f64, f64),
    points: &mut Vec<Point>,
    weights: &mut Vec<Complex64>,
) {
    let (a, b) = (window.lo[0], window.hi[0]);
    match slope {
        SlopeSpec::Golden => {
            // x = m + n tau with x* = m + n tau' in [w0, w1);
            // n = (x - x*) / sqrt5, so n ranges over an explicit interval.
            let n_lo = ((a - wstar.1) / SQRT5).floor() as i64 - 1;
            let n_hi = ((b - wstar.0) / SQRT5).ceil() as i64 + 1;
            for n in n_lo..=n_hi {
                let g = GoldenInt::new(0, n);
                // m in [a - n tau, b - n tau) intersect [w0 - n tau', w1 - n tau')
                let phys_lo = a - g.value();
                let phys_hi = b - g.value();
                let int_lo = wstar.0 - g.star();
                let int_hi = wstar.1 - g.star();
                let m_lo = phys_lo.max(int_lo).ceil() as i64;
                let m_hi = {
                    let u = phys_hi.min(int_hi);
                    let mut m = u.floor() as i64;
                    if m as f64 >= u {
                        m -= 1;
                    }
                    m
                };
                for m in m_lo..=m_hi {
                    let x = GoldenInt::new(m, n);
                    let xv = x.value();
                    let xs = x.star();
                    if xv >= a && xv < b && xs >= wstar.0 && xs < wstar.1 {
                        points.push([xv, 0.0]);
                        weights.push(Complex64::new(1.0, 0.0));
                    }
                }
            }
        }
        SlopeSpec::Custom(tau_like) => {
            let t = *tau_like;
            let ts = 1.0 - t;
            let det = t - ts;
            let n_lo = ((a - wstar.1) / det).floor() as i64 - 1;
            let n_hi = ((b - wstar.0) / det).ceil() as i64 + 1;
            for n in n_lo..=n_hi {
                let nv = n as f64;
                let m_lo = (a - nv * t).max(wstar.0 - nv * ts).ceil() as i64;
                let m_hi = (b - nv * t).min(wstar.1 - nv * ts).floor() as i64;
                for m in m_lo..=m_hi {
                    let xv = m as f64 + nv * t;
                    let xs = m as f64 + nv * ts;
                    if xv >= a && xv < b && xs >= wstar.0 && xs < wstar.1 {
                        points.push([xv, 0.0]);
                        weights.push(Complex64::new(1.0, 0.0));
                    }
                }
            }
        }
    }
}

fn produce_substitution(
    window: &BoxRegion,
    rule: SubstRule,
    lengths: [f64; 2],
    letter_weights: [Complex64; 2],
    points: &mut Vec<Point>,
    weights: &mut Vec<Complex64>,
) {
    // One-sided fixed point realized from the origin; the comb lives on
    // [0, inf), so only the nonnegative part of the window is populated.
    let hi = window.hi[0];
    if hi <= 0.0 {
        return;
    }
    let word = rule.fixed_point_prefix(lengths, hi);
    // compensated left-to-right layout of letter lengths
    let mut pos = crate::kahan::KahanSum::new();
    for &letter in &word {
        let x = pos.value();
        if x >= hi {
            break;
        }
        if x >= window.lo[0] {
            points.push([x, 0.0]);
            weights.push(letter_weights[letter as usize]);
        }
        pos.add(lengths[letter as usize]);
    }
}

fn produce_perturbed(
    window: &BoxRegion,
    spacing: f64,
    epsilon: f64,
    rule: DisplacementRule,
    seed: u64,
    points: &mut Vec<Point>,
    weights: &mut Vec<Complex64>,
) {
    // displaced points can enter from up to eps outside the window
    let n_lo = ((window.lo[0] - epsilon) / spacing).floor() as i64;
    let n_hi = ((window.hi[0] + epsilon) / spacing).ceil() as i64;
    let theta0 = site_uniform(seed, i64::MIN + 1);
    for n in n_lo..=n_hi {
        let d = match rule {
            DisplacementRule::Iid => epsilon * (2.0 * site_uniform(seed, n) - 1.0),
            DisplacementRule::Quasiperiodic => {
                let beta = std::f64::consts::SQRT_2;
                epsilon * (2.0 * std::f64::consts::PI * (n as f64 * beta + theta0)).sin()
            }
        };
        let x = n as f64 * spacing + d;
        if x >= window.lo[0] && x < window.hi[0] {
            points.push([x, 0.0]);
            weights.push(Complex64::new(1.0, 0.0));
        }
    }
}

fn produce_bernoulli(
    window: &BoxRegion,
    spacing: f64,
    p: f64,
    seed: u64,
    points: &mut Vec<Point>,
    weights: &mut Vec<Complex64>,
) {
    let n_lo = (window.lo[0] / spacing).ceil() as i64;
    let n_hi = (window.hi[0] / spacing).ceil() as i64;
    for n in n_lo..n_hi {
        let x = n as f64 * spacing;
        if x < window.lo[0] || x >= window.hi[0] {
            continue;
        }
        if site_uniform_2d(seed, (n, 0x5eed)) < p {
            points.push([x, 0.0]);
            weights.push(Complex64::new(1.0, 0.0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lattice_window_and_density() {
        let gen = CombGenerator::unit_lattice(0);
        let c = gen.produce(&BoxRegion::line(0.0, 4.0)).unwrap();
        let xs: Vec<f64> = c.points().iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 1.0, 2.0, 3.0]);
        assert!(c.weights().iter().all(|w| *w == Complex64::new(1.0, 0.0)));
        assert_relative_eq!(gen.density(), 1.0);
    }

    #[test]
    fn window_consistency_all_kinds() {
        let gens = vec![
            CombGenerator::unit_lattice(1),
            CombGenerator::fibonacci(1),
            CombGenerator::thue_morse(1),
            CombGenerator::period_doubling(Complex64::new(0.0, 0.0), 1),
            CombGenerator::fibonacci_substitution(1),
            CombGenerator::perturbed_lattice(1.0, 0.3, DisplacementRule::Iid, 9).unwrap(),
            CombGenerator::perturbed_lattice(1.0, 0.3, DisplacementRule::Quasiperiodic, 9).unwrap(),
            CombGenerator::bernoulli_lattice(1.0, 0.6, 5).unwrap(),
        ];
        for gen in gens {
            let full = gen.produce(&BoxRegion::line(0.0, 64.0)).unwrap();
            let half = gen.produce(&BoxRegion::line(0.0, 32.0)).unwrap();
            let full_restricted = full.restrict(&BoxRegion::line(0.0, 32.0));
            assert_eq!(
                half.points(),
                full_restricted.points(),
                "window consistency broken for {:?}",
                gen.kind
            );
            assert_eq!(half.weights(), full_restricted.weights());
        }
    }

    #[test]
    fn fibonacci_gaps_are_golden() {
        let gen = CombGenerator::fibonacci(0);
        let c = gen.produce(&BoxRegion::line(0.0, 50.0)).unwrap();
        let xs: Vec<f64> = c.points().iter().map(|p| p[0]).collect();
        assert!(xs.len() > 20);
        for w in xs.windows(2) {
            let gap = w[1] - w[0];
            let ok = (gap - 1.0).abs() < 1e-9 || (gap - TAU).abs() < 1e-9;
            assert!(ok, "unexpected gap {gap}");
        }
    }

    #[test]
    fn fibonacci_density_stabilizes() {
        let gen = CombGenerator::fibonacci(0);
        let c3 = gen.produce(&BoxRegion::line(0.0, 1e3)).unwrap();
        let c4 = gen.produce(&BoxRegion::line(0.0, 1e4)).unwrap();
        let d3 = c3.len() as f64 / 1e3;
        let d4 = c4.len() as f64 / 1e4;
        assert!((d3 - d4).abs() / d4 < 0.01, "d3={d3} d4={d4}");
        // tau^2/(1+tau^2) = tau/sqrt5
        assert_relative_eq!(d4, TAU * TAU / (1.0 + TAU * TAU), epsilon = 1e-3);
        assert_relative_eq!(gen.density(), TAU / SQRT5, epsilon = 1e-12);
    }

    #[test]
    fn fibonacci_substitution_gap_sequence() {
        let gen = CombGenerator::fibonacci_substitution(0);
        let c = gen.produce(&BoxRegion::line(0.0, 12.0)).unwrap();
        let xs: Vec<f64> = c.points().iter().map(|p| p[0]).collect();
        let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let expect = [TAU, 1.0, TAU, TAU, 1.0];
        for (g, e) in gaps.iter().zip(expect.iter()) {
            assert_relative_eq!(g, e, epsilon = 1e-9);
        }
    }

    #[test]
    fn thue_morse_prefix_balance() {
        let gen = CombGenerator::thue_morse(0);
        for k in [6u32, 8, 10] {
            let n = 1u64 << k;
            let c = gen.produce(&BoxRegion::line(0.0, n as f64)).unwrap();
            let mean: Complex64 = c.weights().iter().sum::<Complex64>() / n as f64;
            // power-of-two prefixes are perfectly balanced
            assert!(mean.norm() <= 1.0 / (n as f64).sqrt(), "mean {mean} at n={n}");
        }
    }

    #[test]
    fn perturbed_eps_zero_is_lattice() {
        let gen = CombGenerator::perturbed_lattice(1.0, 0.0, DisplacementRule::Iid, 3).unwrap();
        let lat = CombGenerator::unit_lattice(3);
        let w = BoxRegion::line(0.0, 32.0);
        assert_eq!(gen.produce(&w).unwrap().points(), lat.produce(&w).unwrap().points());
    }

    #[test]
    fn perturbed_uniform_discreteness() {
        let eps = 0.2;
        let gen = CombGenerator::perturbed_lattice(1.0, eps, DisplacementRule::Iid, 17).unwrap();
        let c = gen.produce(&BoxRegion::line(0.0, 1000.0)).unwrap();
        let bound = gen.published_bound();
        assert_relative_eq!(bound.v.hi[0], (1.0 - 2.0 * eps) / 2.0);
        let (ok, _, worst) = c.is_translation_bounded(&bound, 0.05).unwrap();
        assert!(ok, "worst = {worst}");
    }

    #[test]
    fn epsilon_gate() {
        assert!(matches!(
            CombGenerator::perturbed_lattice(1.0, 0.5, DisplacementRule::Iid, 0),
            Err(Error::EpsilonTooLarge { .. })
        ));
    }

    #[test]
    fn published_bounds_hold() {
        let gens = vec![
            CombGenerator::unit_lattice(1),
            CombGenerator::fibonacci(1),
            CombGenerator::thue_morse(1),
            CombGenerator::fibonacci_substitution(1),
            CombGenerator::bernoulli_lattice(1.0, 0.5, 11).unwrap(),
        ];
        for gen in gens {
            let c = gen.produce(&BoxRegion::line(0.0, 500.0)).unwrap();
            let bound = gen.published_bound();
            let (ok, t, worst) = c.is_translation_bounded(&bound, 0.05).unwrap();
            assert!(ok, "{:?}: worst {worst} at {t:?}", gen.kind);
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let gen = CombGenerator::perturbed_lattice(1.0, 0.25, DisplacementRule::Iid, 42).unwrap();
        let w = BoxRegion::line(-50.0, 50.0);
        let a = gen.produce(&w).unwrap();
        let b = gen.produce(&w).unwrap();
        assert_eq!(a.points(), b.points());
    }

    #[test]
    fn generator_spec_json_roundtrip() {
        let gen = CombGenerator::fibonacci(7);
        let s = serde_json::to_string(&gen).unwrap();
        let back: CombGenerator = serde_json::from_str(&s).unwrap();
        assert_eq!(gen, back);
        assert!(s.contains("cut-and-project-1d"));
    }
}
