//! Numerical toolkit for the circle-method analysis of GL(3)×GL(1)
//! exponential sums.
//!
//! The crate verifies, at desk scale, every transformation used when a
//! smoothed coefficient sum `S(N) = Σ λ(1,n) n^{-it} χ(n) W(n/N)` is opened
//! with a divisor-detection delta symbol, conductor lowering, GL(1) Poisson
//! summation and GL(3) Voronoi summation, and then estimated through
//! stationary phase and elementary Kloosterman-sum bounds:
//!
//! * [`arith`] — exact modular arithmetic, Dirichlet characters, Gauss /
//!   Kloosterman / correlation sums and gcd sums;
//! * [`gl3`] — GL(3) Fourier-coefficient providers (triple divisor function,
//!   symmetric-square lifts, ingested tables) with Ramanujan-on-average
//!   profiling;
//! * [`delta`] — the delta symbol in divisor, Farey and `(q, x)`-integral
//!   form, plus the conductor-lowering window;
//! * [`oscint`] — oscillatory quadrature, stationary points of
//!   log/linear/cube-root phases and the specific integrals `I`, `𝒲`, `𝔍`;
//! * [`voronoi`] — dual-sum verifiers for GL(1) Poisson and GL(3) Voronoi
//!   summation, Mellin–Barnes kernels and the Eisenstein main term;
//! * [`estimates`] — parameter bookkeeping, the Ω-decomposition sweeps and
//!   the exact rational exponent optimizer;
//! * [`pipeline`] — end-to-end identities for `S(N)` and the empirical
//!   exponent explorer;
//! * [`report`] — CSV report rows shared with the command-line driver.

pub mod arith;
pub mod bump;
pub mod delta;
pub mod envelope;
pub mod estimates;
pub mod gl3;
pub mod oscint;
pub mod pipeline;
pub mod quad;
pub mod report;
pub mod special;
pub mod voronoi;

pub use num_complex::Complex64;

/// The additive character `e(x) = exp(2πi x)`.
#[inline]
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * x)
}
