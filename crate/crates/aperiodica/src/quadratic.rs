//! Exact arithmetic in the golden-ratio ring and dyadic rationals.
//!
//! Cut-and-project geometry and dual-module membership tests work with
//! integer pairs `a + b*tau` (where `tau^2 = tau + 1`) and convert to floats
//! only when coordinates are needed. Membership of a measured frequency in
//! the golden dual module or in the dyadic rationals is decided by
//! enumerating exact candidates and comparing the float distance against a
//! stated tolerance; candidate generation never relies on float identities.

/// The golden ratio `tau = (1 + sqrt 5) / 2`.
pub const TAU: f64 = 1.618033988749894848204586834365638118_f64;

/// `sqrt 5 = 2 tau - 1`.
pub const SQRT5: f64 = 2.23606797749978969640917366873127624_f64;

/// Exact element `a + b tau` of the golden integer ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GoldenInt {
    pub a: i64,
    pub b: i64,
}

impl GoldenInt {
    pub const fn new(a: i64, b: i64) -> Self {
        GoldenInt { a, b }
    }

    pub fn value(&self) -> f64 {
        self.a as f64 + self.b as f64 * TAU
    }

    /// Galois conjugate `a + b tau'` with `tau' = 1 - tau = -1/tau`.
    pub fn star(&self) -> f64 {
        self.a as f64 + self.b as f64 * (1.0 - TAU)
    }

}

impl std::ops::Add for GoldenInt {
    type Output = GoldenInt;
    fn add(self, o: Self) -> Self {
        GoldenInt::new(self.a + o.a, self.b + o.b)
    }
}

impl std::ops::Sub for GoldenInt {
    type Output = GoldenInt;
    fn sub(self, o: Self) -> Self {
        GoldenInt::new(self.a - o.a, self.b - o.b)
    }
}

// product via tau^2 = tau + 1
impl std::ops::Mul for GoldenInt {
    type Output = GoldenInt;
    fn mul(self, o: Self) -> Self {
        GoldenInt::new(
            self.a * o.a + self.b * o.b,
            self.a * o.b + self.b * o.a + self.b * o.b,
        )
    }
}

/// Find integers `(m, n)` with `|m|, |n| <= max_coeff` such that
/// `k ~ (m + n tau) / (tau^2 + 1)` within `tol`. The denominator
/// `tau^2 + 1 = tau + 2 = sqrt5 * tau` generates the golden dual module.
/// Returns the best candidate.
pub fn golden_dual_membership(k: f64, max_coeff: i64, tol: f64) -> Option<(i64, i64)> {
    let denom = GoldenInt::new(2, 1).value(); // tau + 2
    let target = k * denom;
    let mut best: Option<((i64, i64), f64)> = None;
    for n in -max_coeff..=max_coeff {
        let m = (target - n as f64 * TAU).round();
        if m.abs() > max_coeff as f64 {
            continue;
        }
        let m = m as i64;
        let err = (k - GoldenInt::new(m, n).value() / denom).abs();
        if err <= tol && best.map(|(_, e)| err < e).unwrap_or(true) {
            best = Some(((m, n), err));
        }
    }
    best.map(|(mn, _)| mn)
}

/// Find a dyadic rational `m / 2^j` with `j <= max_j` within `tol` of `k`.
/// The representative is reduced (odd `m` unless zero).
pub fn dyadic_membership(k: f64, max_j: u32, tol: f64) -> Option<(i64, u32)> {
    let scale = (1i64) << max_j;
    let m = (k * scale as f64).round();
    if (k - m / scale as f64).abs() > tol {
        return None;
    }
    let mut m = m as i64;
    let mut j = max_j;
    if m == 0 {
        return Some((0, 0));
    }
    while j > 0 && m % 2 == 0 {
        m /= 2;
        j -= 1;
    }
    Some((m, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_satisfies_its_equation() {
        assert!((TAU * TAU - TAU - 1.0).abs() < 1e-15);
        assert!((SQRT5 - (2.0 * TAU - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn golden_mul_is_exact() {
        // (1 + tau)^2 = 1 + 2 tau + tau^2 = 2 + 3 tau
        let x = GoldenInt::new(1, 1);
        assert_eq!(x * x, GoldenInt::new(2, 3));
        assert!(((x * x).value() - x.value() * x.value()).abs() < 1e-12);
        assert_eq!(x + x, GoldenInt::new(2, 2));
        assert_eq!(x - x, GoldenInt::new(0, 0));
    }

    #[test]
    fn membership_finds_module_points() {
        let k = (3.0 - 2.0 * TAU) / (TAU + 2.0);
        assert_eq!(golden_dual_membership(k, 20, 1e-9), Some((3, -2)));
        assert_eq!(golden_dual_membership(0.33, 5, 1e-6), None);
        // sqrt5-form point (1 + 2 tau)/sqrt5 = (2 + 3 tau)/(tau + 2)
        let k2 = (1.0 + 2.0 * TAU) / SQRT5;
        assert_eq!(golden_dual_membership(k2, 20, 1e-9), Some((2, 3)));
    }

    #[test]
    fn dyadic_reduction() {
        assert_eq!(dyadic_membership(0.75, 10, 1e-9), Some((3, 2)));
        assert_eq!(dyadic_membership(0.0, 10, 1e-9), Some((0, 0)));
        assert_eq!(dyadic_membership(1.0 / 3.0, 10, 1e-6), None);
    }
}
