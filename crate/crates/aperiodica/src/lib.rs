//! Numerical diffraction theory for translation bounded Dirac combs.
//!
//! The crate works with finitely supported weighted point measures ("combs")
//! on the line or the plane, with either Lebesgue or counting Haar measure.
//! On top of those it builds the machinery that connects the autocorrelation
//! of a comb with its diffraction spectrum and with the spectral data of the
//! associated translation dynamical system:
//!
//! * [`measures`] — weighted combs, test functions, translation bounds and
//!   the `f_phi` embedding into functions on the hull.
//! * [`generators`] — deterministic window-consistent producers of the
//!   canonical example classes (lattices, cut-and-project sets, substitution
//!   combs, perturbed and Bernoulli lattices).
//! * [`topology`] — the local rubber uniformity `U_{K,V}` on point sets, a
//!   vague-topology proxy metric, repetitivity/FLC diagnostics and both
//!   constructive conversions between `U_{K,V}` relations and hit-and-miss
//!   basis elements.
//! * [`autocorr`] — van Hove averaging, boundary-term diagnostics, the
//!   closed-formula autocorrelation over empirical hull measures, and the
//!   pairing that evaluates smoothed autocorrelations.
//! * [`diffraction`] — structure factors, Bragg atom extraction with
//!   convergence residuals, purity ratios, and an independent Wiener-type
//!   oracle.
//! * [`dynamics`] — ergodic correlation averages, the consistency check
//!   between the smoothed autocorrelation and correlation functions, Weyl
//!   sums, and eigenvalue-group closure tests.
//!
//! All operations are pure functions of immutable value types; the optional
//! parallelism in the inner loops uses fixed logical blocks so results do not
//! depend on the worker count.

// coordinate loops over `0..dim` read several fixed-size arrays in lockstep;
// the indexed form is clearer than zipped iterators at dim <= 2
#![allow(clippy::needless_range_loop)]

pub mod autocorr;
pub mod diffraction;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod kahan;
pub mod measures;
pub mod parallel;
pub mod quadratic;
pub mod selftest;
pub mod testfn;
pub mod topology;

pub use error::{Error, Result};
pub use generators::{CombGenerator, GeneratorKind};
pub use geometry::{BoxRegion, BoxUnion, GroupKind, GroupSpec, Point};
pub use measures::{TranslationBound, WeightedComb};
pub use testfn::{BumpShape, TestFunction};

/// Absolute resolution below which two points are considered coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

pub use num_complex::Complex64;
