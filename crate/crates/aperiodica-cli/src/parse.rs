//! Small parsers for CLI flag values.

use aperiodica::error::{Error, Result};
use aperiodica::geometry::BoxRegion;
use aperiodica::testfn::{BumpShape, TestFunction};
use num_complex::Complex64;

/// Parse `lo,hi[,lo2,hi2]` into a box.
pub fn parse_window(s: &str) -> Result<BoxRegion> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("window component {p:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    let b = match parts.len() {
        2 => BoxRegion::line(parts[0], parts[1]),
        4 => BoxRegion::plane((parts[0], parts[1]), (parts[2], parts[3])),
        n => {
            return Err(Error::Parse(format!(
                "window needs 2 or 4 comma-separated numbers, got {n}"
            )))
        }
    };
    b.validate()?;
    Ok(b)
}

/// Parse `lo,hi` into a pair.
pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("range {s:?} needs two numbers")));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("range lo: {e}")))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("range hi: {e}")))?;
    if hi <= lo {
        return Err(Error::Parse(format!("range {s:?} is empty")));
    }
    Ok((lo, hi))
}

/// Parse a test function spec `shape:halfwidth[:center[:amp_re[:amp_im]]]`,
/// e.g. `tent:0.5` or `raised-cosine:3:16`.
pub fn parse_phi(s: &str) -> Result<TestFunction> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() < 2 {
        return Err(Error::Parse(format!(
            "test function {s:?}: expected shape:halfwidth[:center[:amp_re[:amp_im]]]"
        )));
    }
    let shape = match parts[0] {
        "tent" => BumpShape::Tent,
        "raised-cosine" | "rc" => BumpShape::RaisedCosineBump,
        "box-mollified-tent" | "bmt" => BumpShape::BoxMollifiedTent,
        other => return Err(Error::Parse(format!("unknown shape {other:?}"))),
    };
    let num = |i: usize, default: f64| -> Result<f64> {
        match parts.get(i) {
            None => Ok(default),
            Some(p) => p
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("test function field {i}: {e}"))),
        }
    };
    let halfwidth = num(1, 1.0)?;
    if halfwidth <= 0.0 {
        return Err(Error::Parse("halfwidth must be positive".into()));
    }
    let center = num(2, 0.0)?;
    let amp_re = num(3, 1.0)?;
    let amp_im = num(4, 0.0)?;
    Ok(TestFunction::new(
        shape,
        [center, 0.0],
        [halfwidth, 1.0],
        Complex64::new(amp_re, amp_im),
        1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_phis() {
        let b = parse_window("0,100").unwrap();
        assert_eq!(b.dim, 1);
        assert!(parse_window("3,1").is_err());
        let phi = parse_phi("tent:0.5").unwrap();
        assert_eq!(phi.halfwidth[0], 0.5);
        let psi = parse_phi("rc:3:16").unwrap();
        assert_eq!(psi.center[0], 16.0);
        assert!(parse_phi("blob:1").is_err());
    }
}
