//! Reproducible generator-to-report pipelines.
//!
//! A run is described by a flat [`RunConfig`] (JSON or INI-style key=value
//! text), producing `comb.csv`, `gamma.csv`, `spectrum.csv` and a
//! `report.json` in which every numeric gate records its value, tolerance
//! and verdict. With a fixed seed the CSV outputs are byte-identical across
//! runs and worker counts.

use std::path::Path;

use aperiodica::autocorr::{autocorr_comb, VanHoveSequence};
use aperiodica::diffraction::{peak_scan, purity, ScanConfig};
use aperiodica::dynamics::{dworkin_identity_report, eigenvalue_group_check};
use aperiodica::error::{Error, Result};
use aperiodica::generators::{CombGenerator, DisplacementRule, SlopeSpec, WeightFn};
use aperiodica::geometry::GroupSpec;
use aperiodica::io;
use aperiodica::testfn::TestFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::parse::{parse_phi, parse_range};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    #[default]
    PurePoint,
    NotPurePoint,
}

fn d_nmax() -> usize {
    8
}
fn d_base() -> f64 {
    100.0
}
fn d_range() -> f64 {
    8.0
}
fn d_krange() -> (f64, f64) {
    (-2.5, 2.5)
}
fn d_rtol() -> f64 {
    0.05
}
fn d_purity_gate() -> f64 {
    0.98
}
fn d_phi() -> String {
    "tent:0.5".into()
}
fn d_dworkin_tol() -> f64 {
    5e-2
}
fn d_tmax() -> f64 {
    5.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub generator: CombGenerator,
    #[serde(default = "d_nmax")]
    pub n_max: usize,
    #[serde(default = "d_base")]
    pub base: f64,
    /// Displacement range of the stored autocorrelation.
    #[serde(default = "d_range")]
    pub range: f64,
    #[serde(default = "d_krange")]
    pub k_range: (f64, f64),
    /// Autocorrelation binning (0 = exact matching, FLC inputs only).
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "d_rtol")]
    pub residual_tol: f64,
    #[serde(default = "d_purity_gate")]
    pub purity_gate: f64,
    #[serde(default)]
    pub expect: Expectation,
    #[serde(default = "d_phi")]
    pub phi: String,
    /// Atom intensity floor; defaults to `1e-4 * density^2`.
    #[serde(default)]
    pub floor: Option<f64>,
    #[serde(default = "d_dworkin_tol")]
    pub dworkin_tol: f64,
    #[serde(default = "d_tmax")]
    pub t_max: f64,
    /// Gate on the strongest scanned atom (used by not-pure-point runs).
    #[serde(default)]
    pub max_atom_intensity: Option<f64>,
    #[serde(default)]
    pub skip_eigengroup: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 3 {
            return Err(Error::InvalidParameter(
                "n_max must be at least 3 (three boxes feed the residuals)".into(),
            ));
        }
        if self.epsilon < 0.0 {
            return Err(Error::InvalidParameter("epsilon must be >= 0".into()));
        }
        if self.base <= 0.0 || self.range <= 0.0 || self.t_max <= 0.0 {
            return Err(Error::InvalidParameter("sizes must be positive".into()));
        }
        if self.residual_tol <= 0.0 || self.purity_gate <= 0.0 || self.dworkin_tol <= 0.0 {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.k_range.1 <= self.k_range.0 {
            return Err(Error::InvalidParameter("empty k range".into()));
        }
        parse_phi(&self.phi)?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flat INI-style alternative: `key = value` lines, `#` comments.
    pub fn from_ini(text: &str) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_flat_map(map)
    }

    fn from_flat_map(mut map: std::collections::BTreeMap<String, String>) -> Result<Self> {
        let take = |map: &mut std::collections::BTreeMap<String, String>, k: &str| map.remove(k);
        let parse_f64 = |v: String, k: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|e| Error::Parse(format!("{k}: {e}")))
        };
        let kind = take(&mut map, "kind")
            .ok_or_else(|| Error::Parse("config needs kind=...".into()))?;
        let seed = match take(&mut map, "seed") {
            None => 1,
            Some(v) => v
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("seed: {e}")))?,
        };
        let generator = generator_by_name(&kind, seed, &mut map)?;
        let mut cfg = RunConfig {
            generator,
            n_max: d_nmax(),
            base: d_base(),
            range: d_range(),
            k_range: d_krange(),
            epsilon: 0.0,
            residual_tol: d_rtol(),
            purity_gate: d_purity_gate(),
            expect: Expectation::PurePoint,
            phi: d_phi(),
            floor: None,
            dworkin_tol: d_dworkin_tol(),
            t_max: d_tmax(),
            max_atom_intensity: None,
            skip_eigengroup: false,
        };
        if let Some(v) = take(&mut map, "nmax") {
            cfg.n_max = v
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("nmax: {e}")))?;
        }
        if let Some(v) = take(&mut map, "base") {
            cfg.base = parse_f64(v, "base")?;
        }
        if let Some(v) = take(&mut map, "range") {
            cfg.range = parse_f64(v, "range")?;
        }
        if let Some(v) = take(&mut map, "krange") {
            cfg.k_range = parse_range(&v)?;
        }
        if let Some(v) = take(&mut map, "eps") {
            cfg.epsilon = parse_f64(v, "eps")?;
        }
        if let Some(v) = take(&mut map, "residual_tol") {
            cfg.residual_tol = parse_f64(v, "residual_tol")?;
        }
        if let Some(v) = take(&mut map, "purity_gate") {
            cfg.purity_gate = parse_f64(v, "purity_gate")?;
        }
        if let Some(v) = take(&mut map, "expect") {
            cfg.expect = match v.as_str() {
                "pure-point" => Expectation::PurePoint,
                "not-pure-point" => Expectation::NotPurePoint,
                other => return Err(Error::Parse(format!("expect: unknown value {other:?}"))),
            };
        }
        if let Some(v) = take(&mut map, "phi") {
            cfg.phi = v;
        }
        if let Some(v) = take(&mut map, "floor") {
            cfg.floor = Some(parse_f64(v, "floor")?);
        }
        if let Some(v) = take(&mut map, "dworkin_tol") {
            cfg.dworkin_tol = parse_f64(v, "dworkin_tol")?;
        }
        if let Some(v) = take(&mut map, "tmax") {
            cfg.t_max = parse_f64(v, "tmax")?;
        }
        if let Some(v) = take(&mut map, "max_atom_intensity") {
            cfg.max_atom_intensity = Some(parse_f64(v, "max_atom_intensity")?);
        }
        if let Some(v) = take(&mut map, "skip_eigengroup") {
            cfg.skip_eigengroup = v == "true" || v == "1";
        }
        if let Some(key) = map.keys().next() {
            return Err(Error::Parse(format!("unknown config key {key:?}")));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Build a generator from a kind name and optional flat parameters.
pub fn generator_by_name(
    kind: &str,
    seed: u64,
    params: &mut std::collections::BTreeMap<String, String>,
) -> Result<CombGenerator> {
    let take_f64 = |params: &mut std::collections::BTreeMap<String, String>,
                    k: &str,
                    default: f64|
     -> Result<f64> {
        match params.remove(k) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{k}: {e}"))),
        }
    };
    match kind {
        "lattice" => {
            let spacing = take_f64(params, "spacing", 1.0)?;
            let weights = match params.remove("weights").as_deref() {
                None | Some("constant") => WeightFn::Constant,
                Some("alternating") => WeightFn::Alternating,
                Some(other) => {
                    return Err(Error::Parse(format!("weights: unknown value {other:?}")))
                }
            };
            CombGenerator::lattice(GroupSpec::real_line(), vec![spacing], weights, seed)
        }
        "fibonacci" | "cut-and-project-1d" => {
            let slope = match params.remove("slope").as_deref() {
                None | Some("golden") => SlopeSpec::Golden,
                Some(v) => SlopeSpec::Custom(
                    v.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("slope: {e}")))?,
                ),
            };
            let default_w = (-1.0, aperiodica::quadratic::TAU - 1.0);
            let wstar = match params.remove("wstar") {
                None => default_w,
                Some(v) => parse_range(&v)?,
            };
            CombGenerator::cut_and_project_1d(slope, wstar, seed)
        }
        "fibonacci-substitution" => Ok(CombGenerator::fibonacci_substitution(seed)),
        "thue-morse" => Ok(CombGenerator::thue_morse(seed)),
        "period-doubling" => {
            let re = take_f64(params, "c_re", 0.0)?;
            let im = take_f64(params, "c_im", 0.0)?;
            Ok(CombGenerator::period_doubling(Complex64::new(re, im), seed))
        }
        "perturbed-lattice" => {
            let spacing = take_f64(params, "spacing", 1.0)?;
            let epsilon = take_f64(params, "epsilon", 0.2)?;
            let rule = match params.remove("rule").as_deref() {
                None | Some("iid") => DisplacementRule::Iid,
                Some("quasiperiodic") => DisplacementRule::Quasiperiodic,
                Some(other) => return Err(Error::Parse(format!("rule: unknown {other:?}"))),
            };
            CombGenerator::perturbed_lattice(spacing, epsilon, rule, seed)
        }
        "bernoulli-lattice" => {
            let spacing = take_f64(params, "spacing", 1.0)?;
            let p = take_f64(params, "p", 0.5)?;
            CombGenerator::bernoulli_lattice(spacing, p, seed)
        }
        other => Err(Error::Parse(format!("unknown generator kind {other:?}"))),
    }
}

/// Built-in run presets.
pub fn preset(name: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig {
        generator: CombGenerator::unit_lattice(1),
        n_max: d_nmax(),
        base: d_base(),
        range: d_range(),
        k_range: d_krange(),
        epsilon: 0.0,
        residual_tol: d_rtol(),
        purity_gate: d_purity_gate(),
        expect: Expectation::PurePoint,
        phi: d_phi(),
        floor: None,
        dworkin_tol: d_dworkin_tol(),
        t_max: d_tmax(),
        max_atom_intensity: None,
        skip_eigengroup: false,
    };
    match name {
        "lattice-full" => {}
        "fibonacci-full" => {
            cfg.generator = CombGenerator::fibonacci(1);
            cfg.k_range = (-3.5, 3.5);
            // floor raised from the 1e-4 density^2 default so every
            // surviving atom resolves in the dual module at small
            // coefficients; see README
            let rho = cfg.generator.density();
            cfg.floor = Some(1.5e-4 * rho * rho);
        }
        "fibonacci-fast" => {
            cfg.generator = CombGenerator::fibonacci(1);
            cfg.n_max = 6;
            cfg.k_range = (-3.5, 3.5);
            let rho = cfg.generator.density();
            cfg.floor = Some(1.5e-4 * rho * rho);
            cfg.skip_eigengroup = true;
        }
        "thue-morse-full" => {
            cfg.generator = CombGenerator::thue_morse(1);
            cfg.expect = Expectation::NotPurePoint;
            cfg.purity_gate = 0.05;
            cfg.max_atom_intensity = Some(1e-2);
            cfg.k_range = (-3.5, 3.5);
        }
        "period-doubling-full" => {
            cfg.generator = CombGenerator::period_doubling(Complex64::new(0.0, 0.0), 1);
            cfg.k_range = (-0.6, 0.6);
            cfg.purity_gate = 0.95;
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown preset {other:?}; available: lattice-full, fibonacci-full, \
                 fibonacci-fast, thue-morse-full, period-doubling-full"
            )))
        }
    }
    Ok(cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct GateEntry {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub gate: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub gates: Vec<GateEntry>,
    pub atoms_detected: usize,
    pub pass: bool,
}

/// Execute the full pipeline; writes comb.csv, gamma.csv, spectrum.csv and
/// report.json into `out_dir`. Returns the report.
pub fn run_pipeline(cfg: &RunConfig, out_dir: &Path) -> Result<RunReport> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let gen = &cfg.generator;
    let phi = parse_phi(&cfg.phi)?;
    let seq = VanHoveSequence::geometric(&gen.group, cfg.base, 2.0, cfg.n_max)?;

    let comb = gen.produce(seq.largest())?;
    io::write_comb_csv(&out_dir.join("comb.csv"), &comb, Some(gen))?;

    let gamma = autocorr_comb(&comb, cfg.epsilon, cfg.range, cfg.n_max)?;
    io::write_gamma_csv(&out_dir.join("gamma.csv"), &gamma)?;

    let scan = ScanConfig {
        k_lo: cfg.k_range.0,
        k_hi: cfg.k_range.1,
        coarse_step: None,
        refine_tol: 1e-8,
        residual_tol: cfg.residual_tol,
        floor: cfg.floor,
        coarse_box_cap: 6,
    };
    let spectrum = peak_scan(gen, &seq, &scan)?;
    let (purity_val, denominator) = purity(&gamma, &spectrum, &phi)?;
    io::write_spectrum_csv(
        &out_dir.join("spectrum.csv"),
        &spectrum,
        &io::SpectrumSummary {
            purity: Some(purity_val),
            denominator: Some(denominator),
            scan: spectrum.scan,
        },
    )?;

    let mut gates: Vec<GateEntry> = Vec::new();
    match cfg.expect {
        Expectation::PurePoint => gates.push(GateEntry {
            name: "purity".into(),
            value: purity_val,
            tolerance: cfg.purity_gate,
            gate: format!("purity >= {} (expect pure point)", cfg.purity_gate),
            pass: purity_val >= cfg.purity_gate,
        }),
        Expectation::NotPurePoint => {
            gates.push(GateEntry {
                name: "purity".into(),
                value: purity_val,
                tolerance: cfg.purity_gate,
                gate: format!("purity <= {} (expect not pure point)", cfg.purity_gate),
                pass: purity_val <= cfg.purity_gate,
            });
            let max_atom = spectrum
                .atoms
                .first()
                .map(|a| a.intensity)
                .unwrap_or(0.0);
            let tol = cfg.max_atom_intensity.unwrap_or(1e-2);
            gates.push(GateEntry {
                name: "max-atom-intensity".into(),
                value: max_atom,
                tolerance: tol,
                gate: format!("strongest scanned atom <= {tol}"),
                pass: max_atom <= tol,
            });
        }
    }

    let psi = TestFunction::tent(0.3, 0.8, 1.0);
    let dworkin = dworkin_identity_report(gen, &phi, &psi, cfg.t_max, 20, &seq, cfg.epsilon)?;
    gates.push(GateEntry {
        name: "dworkin-max-rel-error".into(),
        value: dworkin.max_rel_error,
        tolerance: cfg.dworkin_tol,
        gate: format!("max |correlation - pairing| rel error <= {}", cfg.dworkin_tol),
        pass: dworkin.max_rel_error <= cfg.dworkin_tol,
    });

    if cfg.expect == Expectation::PurePoint && !cfg.skip_eigengroup {
        let phis = [
            TestFunction::tent(0.0, 0.5, 1.0),
            TestFunction::tent(0.0, 0.75, 1.0),
            TestFunction::tent(0.0, 1.0 / 3.0, 1.0),
        ];
        let eg = eigenvalue_group_check(
            &spectrum, gen, &phis, 1, purity_val, &seq, 5, gen.seed ^ 0x9e37,
        )?;
        gates.push(GateEntry {
            name: "eigengroup-negation".into(),
            value: if eg.negation_closed { 1.0 } else { 0.0 },
            tolerance: 1.0,
            gate: "accepted eigenvalues closed under negation".into(),
            pass: eg.negation_closed,
        });
        gates.push(GateEntry {
            name: "eigengroup-addition-rate".into(),
            value: eg.addition_pass_rate(),
            tolerance: 0.95,
            gate: "pairwise atom sums accepted at >= 0.95".into(),
            pass: eg.addition_pass_rate() >= 0.95,
        });
    }

    let pass = gates.iter().all(|g| g.pass);
    let report = RunReport {
        config: cfg.clone(),
        gates,
        atoms_detected: spectrum.atoms.len(),
        pass,
    };
    std::fs::write(
        out_dir.join("report.json"),
        serde_json::to_string_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?,
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ini_roundtrip_and_validation() {
        let cfg = RunConfig::from_ini(
            "# comment\nkind = fibonacci\nseed = 3\nnmax = 4\nkrange = -2,2\neps = 0\n",
        )
        .unwrap();
        assert_eq!(cfg.n_max, 4);
        assert!(matches!(
            cfg.generator.kind,
            aperiodica::GeneratorKind::CutAndProject1d { .. }
        ));
        // negative eps must be a validation error
        assert!(RunConfig::from_ini("kind = lattice\neps = -1\n").is_err());
        // unknown keys are rejected (diffable experiment records)
        assert!(RunConfig::from_ini("kind = lattice\nbogus = 1\n").is_err());
        // nmax below 3 rejected
        assert!(RunConfig::from_ini("kind = lattice\nnmax = 2\n").is_err());
    }

    #[test]
    fn presets_parse() {
        for name in [
            "lattice-full",
            "fibonacci-full",
            "fibonacci-fast",
            "thue-morse-full",
            "period-doubling-full",
        ] {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("nope").is_err());
    }
}
