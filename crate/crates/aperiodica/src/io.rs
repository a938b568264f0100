//! Serialization of combs, autocorrelations and spectra.
//!
//! Numeric CSV fields use the shortest round-trip decimal representation
//! (Rust's default float formatting), which keeps golden files byte-stable.
//! Each CSV carries a JSON sidecar next to it (same stem, `.json` extension)
//! with the metadata needed to reproduce it.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::autocorr::Autocorrelation;
use crate::diffraction::{DiffractionSpectrum, ScanParams};
use crate::error::{Error, Result};
use crate::generators::CombGenerator;
use crate::geometry::{BoxRegion, GroupSpec, Point};
use crate::measures::WeightedComb;

/// Serde adapter storing a complex number as `[re, im]`.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Path of the JSON sidecar belonging to a CSV artifact.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombSidecar {
    pub group: GroupSpec,
    pub window: BoxRegion,
    pub seed: u64,
    pub generator: Option<CombGenerator>,
}

pub fn write_comb_csv(path: &Path, comb: &WeightedComb, gen: Option<&CombGenerator>) -> Result<()> {
    let dim = comb.group().dim();
    let mut out = String::new();
    if dim == 1 {
        out.push_str("x1,re_w,im_w\n");
    } else {
        out.push_str("x1,x2,re_w,im_w\n");
    }
    for (p, w) in comb.points().iter().zip(comb.weights()) {
        if dim == 1 {
            let _ = writeln!(out, "{},{},{}", p[0], w.re, w.im);
        } else {
            let _ = writeln!(out, "{},{},{},{}", p[0], p[1], w.re, w.im);
        }
    }
    std::fs::write(path, out)?;
    let sidecar = CombSidecar {
        group: comb.group(),
        window: comb.window(),
        seed: gen.map(|g| g.seed).unwrap_or(0),
        generator: gen.cloned(),
    };
    std::fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Parse(e.to_string()))?,
    )?;
    Ok(())
}

pub fn read_comb_csv(path: &Path) -> Result<(WeightedComb, CombSidecar)> {
    let sidecar: CombSidecar = serde_json::from_str(
        &std::fs::read_to_string(sidecar_path(path))?,
    )
    .map_err(|e| Error::Parse(format!("sidecar: {e}")))?;
    let text = std::fs::read_to_string(path)?;
    let dim = sidecar.group.dim();
    let mut points: Vec<Point> = Vec::new();
    let mut weights: Vec<Complex64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 2 {
            return Err(Error::Parse(format!(
                "{}: line {} has {} fields, expected {}",
                path.display(),
                i + 1,
                fields.len(),
                dim + 2
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
        };
        let x0 = parse(fields[0])?;
        let x1 = if dim == 2 { parse(fields[1])? } else { 0.0 };
        let re = parse(fields[dim])?;
        let im = parse(fields[dim + 1])?;
        points.push([x0, x1]);
        weights.push(Complex64::new(re, im));
    }
    let comb = WeightedComb::new(sidecar.group, sidecar.window, points, weights)?;
    Ok((comb, sidecar))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaSidecar {
    pub epsilon: f64,
    #[serde(rename = "R")]
    pub range: f64,
    pub volume: f64,
    pub n: usize,
    pub group: GroupSpec,
}

pub fn write_gamma_csv(path: &Path, gamma: &Autocorrelation) -> Result<()> {
    let dim = gamma.group.dim();
    let mut out = String::new();
    if dim == 1 {
        out.push_str("z1,re_eta,im_eta\n");
    } else {
        out.push_str("z1,z2,re_eta,im_eta\n");
    }
    for (z, eta) in gamma.support.iter().zip(&gamma.eta) {
        if dim == 1 {
            let _ = writeln!(out, "{},{},{}", z[0], eta.re, eta.im);
        } else {
            let _ = writeln!(out, "{},{},{},{}", z[0], z[1], eta.re, eta.im);
        }
    }
    std::fs::write(path, out)?;
    let sidecar = GammaSidecar {
        epsilon: gamma.epsilon,
        range: gamma.range,
        volume: gamma.volume,
        n: gamma.n_index,
        group: gamma.group,
    };
    std::fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&sidecar).map_err(|e| Error::Parse(e.to_string()))?,
    )?;
    Ok(())
}

pub fn read_gamma_csv(path: &Path) -> Result<Autocorrelation> {
    let sidecar: GammaSidecar = serde_json::from_str(
        &std::fs::read_to_string(sidecar_path(path))?,
    )
    .map_err(|e| Error::Parse(format!("sidecar: {e}")))?;
    let text = std::fs::read_to_string(path)?;
    let dim = sidecar.group.dim();
    let mut support: Vec<Point> = Vec::new();
    let mut eta: Vec<Complex64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
        };
        let z0 = parse(fields[0])?;
        let z1 = if dim == 2 { parse(fields[1])? } else { 0.0 };
        support.push([z0, z1]);
        eta.push(Complex64::new(parse(fields[dim])?, parse(fields[dim + 1])?));
    }
    Ok(Autocorrelation {
        group: sidecar.group,
        support,
        eta,
        epsilon: sidecar.epsilon,
        range: sidecar.range,
        volume: sidecar.volume,
        n_index: sidecar.n,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub purity: Option<f64>,
    pub denominator: Option<f64>,
    pub scan: ScanParams,
}

pub fn write_spectrum_csv(
    path: &Path,
    spectrum: &DiffractionSpectrum,
    summary: &SpectrumSummary,
) -> Result<()> {
    let dim = spectrum.dim;
    let mut out = String::new();
    if dim == 1 {
        out.push_str("k1,intensity,residual\n");
    } else {
        out.push_str("k1,k2,intensity,residual\n");
    }
    for a in &spectrum.atoms {
        if dim == 1 {
            let _ = writeln!(out, "{},{},{}", a.k[0], a.intensity, a.residual);
        } else {
            let _ = writeln!(out, "{},{},{},{}", a.k[0], a.k[1], a.intensity, a.residual);
        }
    }
    std::fs::write(path, out)?;
    std::fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(summary).map_err(|e| Error::Parse(e.to_string()))?,
    )?;
    Ok(())
}

/// Rows of a spectrum CSV: position, intensity, residual.
pub type SpectrumRows = Vec<(Point, f64, f64)>;

pub fn read_spectrum_csv(path: &Path) -> Result<(SpectrumRows, SpectrumSummary)> {
    let summary: SpectrumSummary = serde_json::from_str(
        &std::fs::read_to_string(sidecar_path(path))?,
    )
    .map_err(|e| Error::Parse(format!("sidecar: {e}")))?;
    let text = std::fs::read_to_string(path)?;
    let mut atoms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
        };
        let dim = fields.len() - 2;
        let k = [parse(fields[0])?, if dim == 2 { parse(fields[1])? } else { 0.0 }];
        atoms.push((k, parse(fields[dim])?, parse(fields[dim + 1])?));
    }
    Ok((atoms, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::CombGenerator;

    #[test]
    fn comb_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let gen = CombGenerator::unit_lattice(7);
        let comb = gen.produce(&BoxRegion::line(0.0, 8.0)).unwrap();
        let path = dir.path().join("comb.csv");
        write_comb_csv(&path, &comb, Some(&gen)).unwrap();
        let (back, sidecar) = read_comb_csv(&path).unwrap();
        assert_eq!(back.points(), comb.points());
        assert_eq!(back.weights(), comb.weights());
        assert_eq!(sidecar.seed, 7);
    }
}
