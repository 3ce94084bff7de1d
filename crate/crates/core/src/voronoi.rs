//! Dual-sum verifiers: GL(1) Poisson summation for the character sum ℳ and
//! GL(3) Voronoi summation for the coefficient sum 𝒩, together with the
//! Mellin–Barnes kernels G_ℓ and the polar main term of the ζ³ source.
//!
//! The Voronoi kernel is
//!
//! ```text
//! G_ℓ(z) = κ · (1/2πi) ∫_(σ) (π³z)^{-s}
//!          Π_i Γ((1+s+α_i+ℓ)/2)/Γ((−s−α_i+ℓ)/2) · g̃(−s) ds,
//! G_± = G₀ ± i G₁,
//! ```
//!
//! and the summation formula reads
//!
//! ```text
//! Σ_n λ(1,n) e(an/q) g(n)
//!   = main term (ζ³ source only)
//!   + q Σ_± Σ_{n₁|q} Σ_{n₂≥1} λ(n₂,n₁)/(n₁n₂) S(ā, ±n₂; q/n₁) G_±(n₁²n₂/q³).
//! ```
//!
//! The constant κ is pinned by the ζ³ functional equation: unfolding
//! Σ d₃(n) g(n) through ζ(s)³ = π^{3s−3/2} [Γ((1−s)/2)/Γ(s/2)]³ ζ(1−s)³
//! forces κ = 1/(2π^{3/2}) (see [`voronoi_normalization`]), and the q = 1
//! identity test verifies it numerically. Gamma ratios are evaluated as
//! exp(Σ ln Γ − Σ ln Γ), which keeps |τ| ≈ T_max safe from overflow and is
//! insensitive to branch jumps of the individual terms.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{gauss_sum, kloosterman_table, mod_inv, psi_factor, DirichletCharacter};
use crate::bump::sqrt_window_12;
use crate::gl3::{CoefficientSource, Gl3Error, SourceKind};
use crate::oscint::{integrate_phase, PhaseSpec};
use crate::quad::QuadResult;
use crate::special::{hurwitz_zeta, ln_gamma, EULER_GAMMA, STIELTJES_1};

/// κ of the module docs: the kernel normalization making the summation
/// formula exact.
pub fn voronoi_normalization() -> f64 {
    0.5 * std::f64::consts::PI.powf(-1.5)
}

#[derive(Debug, Error)]
pub enum VoronoiError {
    #[error("contour Re s = {sigma} passes within {distance:.3} of a gamma-factor pole")]
    PoleProximity { sigma: f64, distance: f64 },
    #[error("abscissa {0} not supported (crossed poles not confined to the first cluster)")]
    UnsupportedSigma(f64),
    #[error("dual-sum tail estimate {0:.3e} exceeds the requested tolerance")]
    TailTooLarge(f64),
    #[error("the Poisson dual sum requires a primitive character (or modulus 1)")]
    NotPrimitive,
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error(transparent)]
    Gl3(#[from] Gl3Error),
}

// ---------------------------------------------------------------------------
// Mellin transforms of the test function
// ---------------------------------------------------------------------------

/// The test function g(y) = U(y/N) y^{iv} e(xy/qq_scale) with U the
/// canonical [1,2] window; `qq_scale` is the product qQ of the delta method.
#[derive(Debug, Clone, Copy)]
pub struct MellinParams {
    pub n_len: f64,
    pub v: f64,
    pub x: f64,
    pub qq_scale: f64,
}

impl MellinParams {
    /// Unweighted window without oscillation (x = v = 0).
    pub fn plain(n_len: f64) -> Self {
        MellinParams {
            n_len,
            v: 0.0,
            x: 0.0,
            qq_scale: 1.0,
        }
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        let u = sqrt_window_12(y / self.n_len);
        if u == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        u * crate::e(self.v * y.ln() / std::f64::consts::TAU + self.x * y / self.qq_scale)
    }

    /// g̃(s) = ∫ g(y) y^{s−1} dy, with an optional ln^k y weight (used by
    /// the residue oracle; k ≤ 2).
    pub fn mellin_logk(&self, s: Complex64, k: u32) -> Complex64 {
        let n = self.n_len;
        let osc = self.x * n / self.qq_scale;
        let spec = PhaseSpec {
            log_coeff: -(s.im + self.v),
            linear: osc,
            cbrt: 0.0,
            shift: 0.0,
        };
        let amp = move |xi: f64| {
            let w = sqrt_window_12(xi);
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let log_y = n.ln() + xi.ln();
            Complex64::new(w * xi.powf(s.re - 1.0) * log_y.powi(k as i32), 0.0)
        };
        let base = integrate_phase(amp, &spec, 1.0, 2.0, 1e-10);
        // y = Nξ contributes N^{s+iv}; the ξ^{iv} part sits in the phase
        // above, so restore the N-power here.
        let n_pow = ((s + Complex64::new(0.0, self.v)) * n.ln()).exp();
        base.value * n_pow
    }

    /// The Mellin transform g̃(s).
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        self.mellin_logk(s, 0)
    }
}

// ---------------------------------------------------------------------------
// The Mellin–Barnes kernel G_ℓ
// ---------------------------------------------------------------------------

/// Contour data for one G_ℓ on a uniform τ-grid: the gamma-ratio × g̃
/// factors (g̃ computed by one FFT over the log variable) are cached per
/// node, so evaluating at a new z is a phase recurrence over the grid.
/// Built for a declared z-range (the grid must resolve ln(π³z)).
#[derive(Debug)]
pub struct GEllContour {
    sigma: f64,
    tau0: f64,
    dtau: f64,
    /// Γ-ratio(σ+iτ_k) · g̃(−σ−iτ_k) · δτ/(2π).
    factors: Vec<Complex64>,
    /// Largest |ln(π³z)| the τ-step resolves.
    l_max: f64,
    /// Residue circle for poles crossed when σ sits left of the first
    /// pole cluster: node positions and cached R·g̃·(s−c)/M factors.
    residue_nodes: Vec<Complex64>,
    residue_factors: Vec<Complex64>,
    /// |integrand| at the truncation height.
    pub tail_density: f64,
}

/// Evaluator configuration: test function, Langlands parameters, abscissa
/// and truncation height.
#[derive(Debug, Clone)]
pub struct MellinEvaluator {
    pub test_fn: MellinParams,
    pub alpha: [Complex64; 3],
    pub sigma: f64,
    pub t_max: f64,
}

impl MellinEvaluator {
    /// Defaults: σ = −1/2 (bounded gamma growth along the contour) and the
    /// truncation height sized for the test function's concentration band
    /// |τ − v| ≲ 2π·xN/(qQ) plus the saddle scale of the largest zN in play.
    pub fn new(test_fn: MellinParams, alpha: [Complex64; 3], zn_cut: f64) -> Self {
        let band = 15.0 * test_fn.x.abs() * test_fn.n_len / test_fn.qq_scale;
        let saddle = std::f64::consts::TAU * (2.0 * zn_cut).cbrt() * 1.35;
        MellinEvaluator {
            test_fn,
            alpha,
            sigma: -0.5,
            t_max: (200.0 + 4.0 * test_fn.v.abs() + band).max(saddle),
        }
    }

    fn gamma_ratio(&self, s: Complex64, ell: u8) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.alpha {
            acc += ln_gamma((1.0 + s + a + ell as f64) / 2.0);
            acc -= ln_gamma((-s - a + ell as f64) / 2.0);
        }
        acc.exp()
    }

    /// Poles of the numerator gamma factors: s = −1 − α_i − ℓ − 2k.
    fn pole_positions(&self, ell: u8) -> Vec<Complex64> {
        let mut out = Vec::new();
        for a in self.alpha {
            for k in 0..4 {
                out.push(-1.0 - a - ell as f64 - 2.0 * k as f64);
            }
        }
        out
    }

    /// Build the contour cache of G_ℓ for z in [z_lo, z_hi].
    pub fn build_contour(
        &self,
        ell: u8,
        z_lo: f64,
        z_hi: f64,
    ) -> Result<GEllContour, VoronoiError> {
        let sigma = self.sigma;
        let poles = self.pole_positions(ell);
        for p in &poles {
            let d = (p.re - sigma).abs();
            if d < 0.1 {
                return Err(VoronoiError::PoleProximity { sigma, distance: d });
            }
        }
        let crossed: Vec<Complex64> = poles.iter().copied().filter(|p| p.re > sigma).collect();
        let (residue_nodes, residue_factors) = if crossed.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            // All crossed poles must lie in the first cluster around
            // −1 − ℓ − mean(α).
            let center: Complex64 = crossed.iter().sum::<Complex64>() / crossed.len() as f64;
            let spread = crossed
                .iter()
                .map(|p| (p - center).norm())
                .fold(0.0f64, f64::max);
            let radius = (spread + 0.25).min(0.45);
            if crossed.iter().any(|p| (p - center).norm() > radius - 0.04) {
                return Err(VoronoiError::UnsupportedSigma(sigma));
            }
            if poles
                .iter()
                .filter(|p| p.re <= sigma)
                .any(|p| (p - center).norm() < radius + 0.1)
            {
                return Err(VoronoiError::UnsupportedSigma(sigma));
            }
            if center.re - radius < sigma + 0.04 {
                return Err(VoronoiError::UnsupportedSigma(sigma));
            }
            const M: usize = 64;
            let mut nodes = Vec::with_capacity(M);
            for j in 0..M {
                let th = std::f64::consts::TAU * j as f64 / M as f64;
                nodes.push(center + radius * Complex64::new(th.cos(), th.sin()));
            }
            let factors: Vec<Complex64> = nodes
                .par_iter()
                .map(|&s| {
                    self.gamma_ratio(s, ell) * self.test_fn.mellin(-s) * (s - center) / M as f64
                })
                .collect();
            (nodes, factors)
        };

        // Uniform grid: the τ-step must resolve e^{-iτ·ln(π³z)}, the
        // gamma-ratio phase (rate 3·ln(τ/2)/2) and the oscillation of g̃
        // itself (rate ≈ ln(2N)); Nyquist of the μ-sampling must clear the
        // truncation height and the bandwidth of the log-variable samples.
        let tf = self.test_fn;
        let t = self.t_max;
        let two_pi = std::f64::consts::TAU;
        let pi = std::f64::consts::PI;
        let pi3 = pi.powi(3);
        let zlog = (pi3 * z_lo).ln().abs().max((pi3 * z_hi).ln().abs());
        let l_max = zlog + 0.5;
        let rate_tau = l_max + (2.0 * tf.n_len).ln() + 1.5 * (1.0 + t / 2.0).ln();
        let dtau_target = pi / (2.0 * rate_tau);
        let band_mu = tf.v.abs()
            + two_pi * tf.x.abs() * 2.0 * tf.n_len / tf.qq_scale
            + sigma.abs()
            + 48.0;
        let dmu = pi / (1.25 * t.max(2.0 * band_mu));
        let m = ((two_pi / (dtau_target * dmu)).ceil() as usize).next_power_of_two();
        let dtau = two_pi / (m as f64 * dmu);
        // Sample F(μ) = g(e^μ) e^{-σμ} on the μ-grid starting at ln N.
        let mu0 = tf.n_len.ln();
        let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); m];
        let j_hi = (2f64.ln() / dmu).ceil() as usize;
        for (j, slot) in buf.iter_mut().enumerate().take(j_hi + 1) {
            let mu = mu0 + j as f64 * dmu;
            let y = mu.exp();
            let g = tf.eval(y);
            *slot = g * (-sigma * mu).exp();
        }
        rustfft::FftPlanner::new().plan_fft_forward(m).process(&mut buf);
        // Bin k ↔ τ = kδτ (k ≤ m/2) or (k−m)δτ; keep |τ| ≤ T, sorted.
        let k_cap = ((t / dtau).floor() as usize).min(m / 2 - 1);
        let mut entries: Vec<(f64, Complex64)> = Vec::with_capacity(2 * k_cap + 1);
        for k in (1..=k_cap).rev() {
            let tau = -(k as f64) * dtau;
            entries.push((tau, buf[m - k]));
        }
        for k in 0..=k_cap {
            let tau = k as f64 * dtau;
            entries.push((tau, buf[k]));
        }
        let gammas: Vec<Complex64> = entries
            .par_iter()
            .map(|&(tau, _)| self.gamma_ratio(Complex64::new(sigma, tau), ell))
            .collect();
        let mut factors = Vec::with_capacity(entries.len());
        let mut tail_density = 0.0f64;
        for (idx, &(tau, raw)) in entries.iter().enumerate() {
            // g̃(−σ−iτ) = δμ e^{−iτ μ₀} FFT[F]_k.
            let gt = dmu * crate::e(-tau * mu0 / two_pi) * raw;
            let val = gammas[idx] * gt;
            if idx == 0 || idx == entries.len() - 1 {
                tail_density = tail_density.max(val.norm());
            }
            factors.push(val * (dtau / two_pi));
        }
        Ok(GEllContour {
            sigma,
            tau0: -(k_cap as f64) * dtau,
            dtau,
            factors,
            l_max,
            residue_nodes,
            residue_factors,
            tail_density,
        })
    }
}

impl GEllContour {
    /// G_ℓ(z) from the cached factors, with the half-grid discrepancy as a
    /// doubled-node validation.
    pub fn eval_checked(&self, z: f64) -> (Complex64, f64) {
        let log_z = (std::f64::consts::PI.powi(3) * z).ln();
        debug_assert!(
            log_z.abs() <= self.l_max + 0.75,
            "z = {z} outside the contour's resolved range"
        );
        let amp = (-self.sigma * log_z).exp();
        // e^{-iτ_k log z} by phase recurrence over the uniform grid.
        let rho = crate::e(-self.dtau * log_z / std::f64::consts::TAU);
        let mut ph = crate::e(-self.tau0 * log_z / std::f64::consts::TAU);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut acc_half = Complex64::new(0.0, 0.0);
        for (k, f) in self.factors.iter().enumerate() {
            let term = ph * f;
            acc += term;
            if k % 2 == 0 {
                acc_half += term;
            }
            ph *= rho;
            if k % 512 == 511 {
                ph /= ph.norm();
            }
        }
        let mut line = acc * amp;
        let line_half = acc_half * 2.0 * amp;
        for j in 0..self.residue_nodes.len() {
            line += (-self.residue_nodes[j] * log_z).exp() * self.residue_factors[j];
        }
        let value = voronoi_normalization() * line;
        (value, voronoi_normalization() * (line_half - acc * amp).norm())
    }

    pub fn eval(&self, z: f64) -> Complex64 {
        self.eval_checked(z).0
    }
}

/// Pair of contours giving G_± = G₀ ± i G₁.
#[derive(Debug)]
pub struct VoronoiKernel {
    pub c0: GEllContour,
    pub c1: GEllContour,
}

impl VoronoiKernel {
    pub fn build(ev: &MellinEvaluator, z_lo: f64, z_hi: f64) -> Result<Self, VoronoiError> {
        Ok(VoronoiKernel {
            c0: ev.build_contour(0, z_lo, z_hi)?,
            c1: ev.build_contour(1, z_lo, z_hi)?,
        })
    }

    pub fn g_pm(&self, z: f64, sign: f64) -> Complex64 {
        let g0 = self.c0.eval(z);
        let g1 = self.c1.eval(z);
        g0 + Complex64::new(0.0, sign.signum()) * g1
    }
}

// ---------------------------------------------------------------------------
// Main-range asymptotic of G_±
// ---------------------------------------------------------------------------

/// The bare oscillatory-integral shape of the main-range asymptotic:
/// z^{2/3} ∫ g(y) y^{−1/3} e(±3(zy)^{1/3}) dy. A constant α (depending only
/// on the underlying form) calibrated at one reference point makes this
/// match G_± to first order in the oscillation parameter.
pub fn g_asymptotic_bare(z: f64, sign: f64, tf: &MellinParams) -> Complex64 {
    let n = tf.n_len;
    let spec = PhaseSpec {
        log_coeff: -tf.v,
        linear: tf.x * n / tf.qq_scale,
        cbrt: sign.signum() * 3.0 * (z * n).cbrt(),
        shift: 0.0,
    };
    let amp = |xi: f64| Complex64::new(sqrt_window_12(xi) * xi.powf(-1.0 / 3.0), 0.0);
    let integral = integrate_phase(amp, &spec, 1.0, 2.0, 1e-9).value;
    // y = Nξ: dy = N dξ, y^{−1/3} = N^{−1/3} ξ^{−1/3}, y^{iv} = N^{iv} ξ^{iv}.
    let n_pow = (Complex64::new(0.0, tf.v) * n.ln()).exp() * n.powf(2.0 / 3.0);
    z.powf(2.0 / 3.0) * integral * n_pow
}

/// Calibrated asymptotic: α_± fixed by matching the contour kernel at z_ref.
#[derive(Debug, Clone, Copy)]
pub struct AsymCalibration {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub z_ref: f64,
}

pub fn calibrate_asymptotic(
    kernel: &VoronoiKernel,
    tf: &MellinParams,
    z_ref: f64,
) -> AsymCalibration {
    AsymCalibration {
        alpha_plus: kernel.g_pm(z_ref, 1.0) / g_asymptotic_bare(z_ref, 1.0, tf),
        alpha_minus: kernel.g_pm(z_ref, -1.0) / g_asymptotic_bare(z_ref, -1.0, tf),
        z_ref,
    }
}

impl AsymCalibration {
    pub fn eval(&self, z: f64, sign: f64, tf: &MellinParams) -> Complex64 {
        let alpha = if sign >= 0.0 {
            self.alpha_plus
        } else {
            self.alpha_minus
        };
        alpha * g_asymptotic_bare(z, sign, tf)
    }
}

// ---------------------------------------------------------------------------
// GL(1) Poisson: the ℳ sum
// ---------------------------------------------------------------------------

/// ℳ = Σ_m χ(m) m^{−i(t+v)} e(−am/q − mx/(qQ)) U(m/N), by direct summation.
pub fn m_direct(
    a: u64,
    q: u64,
    x: f64,
    t: f64,
    v: f64,
    chi: &DirichletCharacter,
    n_len: f64,
    q_cap: f64,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let lo = n_len.floor().max(1.0) as u64;
    let hi = (2.0 * n_len).ceil() as u64;
    for m in lo..=hi {
        let u = sqrt_window_12(m as f64 / n_len);
        if u == 0.0 {
            continue;
        }
        let rational = ((a as u128 * m as u128) % q as u128) as f64 / q as f64;
        let phase = -(t + v) * (m as f64).ln() / std::f64::consts::TAU
            - rational
            - m as f64 * x / (q as f64 * q_cap);
        acc += chi.eval(m as i64) * crate::e(phase) * u;
    }
    acc
}

/// Dual evaluation through Poisson summation modulo pq:
/// ℳ = N^{1−i(t+v)} (τ(χ)/p) Σ_{m ≡ ap (q)} ψ(m,q,a) I(m,x) + (tiny tail).
pub struct MDualResult {
    pub value: Complex64,
    pub m_lo: i64,
    pub m_hi: i64,
    pub terms: usize,
}

pub fn m_dual(
    a: u64,
    q: u64,
    x: f64,
    t: f64,
    v: f64,
    chi: &DirichletCharacter,
    n_len: f64,
    q_cap: f64,
) -> Result<MDualResult, VoronoiError> {
    let p = chi.modulus();
    if p > 1 && !chi.is_primitive() {
        return Err(VoronoiError::NotPrimitive);
    }
    let tau = gauss_sum(chi);
    // Stationary range of m over ξ ∈ [1/2, 4], with a margin wide enough
    // that the discarded tail sits far below the identity tolerance.
    let center = |xi: f64| {
        -(p as f64 * q as f64) * (t + v) / (std::f64::consts::TAU * n_len * xi)
            - p as f64 * x / q_cap
    };
    let c1 = center(0.5);
    let c2 = center(4.0);
    let span = (c1 - c2).abs();
    let m_lo = (c1.min(c2) - 8.0 - 0.5 * span).floor() as i64;
    let m_hi = (c1.max(c2) + 8.0 + 0.5 * span).ceil() as i64;
    let ap = (a as i64 * p as i64).rem_euclid(q as i64);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut m = m_lo + (ap - m_lo).rem_euclid(q as i64);
    while m <= m_hi {
        let psi = psi_factor(m, q, a, chi)?;
        if psi.norm() > 0.0 {
            let i_val = crate::oscint::i_of_m_x(m, x, q, p, n_len, t, v, q_cap);
            acc += psi * i_val.value;
            terms += 1;
        }
        m += q as i64;
    }
    let n_pow = n_len * crate::e(-(t + v) * n_len.ln() / std::f64::consts::TAU);
    Ok(MDualResult {
        value: n_pow * (tau / p as f64) * acc,
        m_lo,
        m_hi,
        terms,
    })
}

// ---------------------------------------------------------------------------
// GL(3) Voronoi: the 𝒩 sum
// ---------------------------------------------------------------------------

/// 𝒩 = Σ_n λ(1,n) n^{iv} e(an/q + nx/(qQ)) U(n/N), by direct summation.
pub fn n_direct(
    a: u64,
    q: u64,
    source: &CoefficientSource,
    tf: &MellinParams,
) -> Result<Complex64, Gl3Error> {
    let n_len = tf.n_len;
    let mut acc = Complex64::new(0.0, 0.0);
    let lo = n_len.floor().max(1.0) as u64;
    let hi = (2.0 * n_len).ceil() as u64;
    for n in lo..=hi {
        let u = sqrt_window_12(n as f64 / n_len);
        if u == 0.0 {
            continue;
        }
        let rational = ((a as u128 * n as u128) % q as u128) as f64 / q as f64;
        let phase = tf.v * (n as f64).ln() / std::f64::consts::TAU
            + rational
            + n as f64 * tf.x / tf.qq_scale;
        acc += source.lambda_1n(n)? * crate::e(phase) * u;
    }
    Ok(acc)
}

/// One dual-sum verification case.
pub struct VoronoiCase<'a> {
    pub source: &'a CoefficientSource,
    pub q: u64,
    pub a: u64,
    pub test_fn: MellinParams,
    /// Truncate the dual sum once zN = N·n₁²n₂/q³ exceeds this.
    pub zn_cut: f64,
}

pub struct NVoronoiResult {
    pub value: Complex64,
    pub main_term: Complex64,
    pub dual: Complex64,
    pub terms: usize,
    /// Magnitude bound on the discarded dual tail.
    pub tail_estimate: f64,
}

/// Evaluate the dual side of the summation formula; the main term is added
/// for the ζ³ source.
pub fn n_voronoi(
    case: &VoronoiCase,
    kernel: &VoronoiKernel,
) -> Result<NVoronoiResult, VoronoiError> {
    let q = case.q;
    let n_len = case.test_fn.n_len;
    let abar = mod_inv(case.a as i64, q).ok_or(crate::arith::ArithError::NotCoprime {
        a: case.a,
        q,
    })? as i64;
    let mut dual = Complex64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut tail_estimate = 0.0f64;
    for n1 in crate::arith::divisors(q) {
        let c = q / n1;
        let klo = kloosterman_table(abar, c);
        let n2_cap =
            (case.zn_cut * q.pow(3) as f64 / (n_len * (n1 * n1) as f64)).ceil() as u64;
        let mut recent_small = 0usize;
        for n2 in 1..=n2_cap.max(1) {
            let z = (n1 * n1 * n2) as f64 / q.pow(3) as f64;
            let lam = case.source.lambda_pair(n2, n1)?;
            let scale = lam / (n1 * n2) as f64;
            let s_plus = klo[(n2 % c) as usize];
            let s_minus = klo[((c - n2 % c) % c) as usize];
            let term = q as f64
                * scale
                * (s_plus * kernel.g_pm(z, 1.0) + s_minus * kernel.g_pm(z, -1.0));
            dual += term;
            terms += 1;
            let running = dual.norm().max(1e-12);
            if term.norm() < 1e-9 * running {
                recent_small += 1;
                if recent_small > 40 {
                    tail_estimate = tail_estimate.max(40.0 * term.norm());
                    break;
                }
            } else {
                recent_small = 0;
            }
            if n2 == n2_cap {
                tail_estimate = tail_estimate.max(40.0 * term.norm());
            }
        }
    }
    let main_term = if case.source.kind() == SourceKind::EisensteinD3 {
        main_term_d3(q, case.a, &case.test_fn)
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(NVoronoiResult {
        value: main_term + dual,
        main_term,
        dual,
        terms,
        tail_estimate,
    })
}

/// Polar main term of the ζ³ source:
/// Res_{s=1} [ D₃(s, a/q) g̃(s) ],  D₃(s, a/q) = q^{−3s} Σ_{β,γ,δ mod q}
/// e(aβγδ/q) ζ(s,β/q) ζ(s,γ/q) ζ(s,δ/q)
/// (residue classes ≡ 0 use the next period, ζ(s, 1)).
/// Computed on a circle |s−1| = 1/4 with 64-point trapezoid quadrature.
pub fn main_term_d3(q: u64, a: u64, tf: &MellinParams) -> Complex64 {
    const M: usize = 64;
    let radius = 0.25;
    let roots = crate::arith::unit_roots(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..M {
        let th = std::f64::consts::TAU * j as f64 / M as f64;
        let s = Complex64::new(1.0 + radius * th.cos(), radius * th.sin());
        let zeta: Vec<Complex64> = (1..=q)
            .map(|beta| hurwitz_zeta(s, beta as f64 / q as f64))
            .collect();
        let mut d3s = Complex64::new(0.0, 0.0);
        for beta in 1..=q {
            for gamma in 1..=q {
                let bg = (beta * gamma) % q;
                for delta in 1..=q {
                    let idx = ((a as u128 * ((bg * delta) % q) as u128) % q as u128) as usize;
                    d3s += roots[idx]
                        * zeta[(beta - 1) as usize]
                        * zeta[(gamma - 1) as usize]
                        * zeta[(delta - 1) as usize];
                }
            }
        }
        d3s *= (-3.0 * s * (q as f64).ln()).exp();
        acc += d3s * tf.mellin(s) * (s - 1.0);
    }
    acc / M as f64
}

/// Independent oracle for the q = 1 main term via the Laurent expansion
/// ζ(s)³ = (s−1)^{−3}(1 + 3γ(s−1) + 3(γ²−γ₁)(s−1)² + …):
/// Res = g̃''(1)/2 + 3γ g̃'(1) + 3(γ² − γ₁) g̃(1).
pub fn main_term_d3_stieltjes(tf: &MellinParams) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let g0 = tf.mellin_logk(one, 0);
    let g1 = tf.mellin_logk(one, 1);
    let g2 = tf.mellin_logk(one, 2);
    g2 * 0.5 + g1 * (3.0 * EULER_GAMMA) + g0 * 3.0 * (EULER_GAMMA * EULER_GAMMA - STIELTJES_1)
}

/// Crude-bound helper: Σ*_{a mod q} |ℳ(a, q, x, t+v)|.
pub fn m_sum_over_residues(
    q: u64,
    x: f64,
    t: f64,
    v: f64,
    chi: &DirichletCharacter,
    n_len: f64,
    q_cap: f64,
) -> f64 {
    (1..=q)
        .filter(|&a| crate::arith::gcd(a, q) == 1 || q == 1)
        .map(|a| m_direct(a, q, x, t, v, chi, n_len, q_cap).norm())
        .sum()
}

/// Evaluate one G_ℓ at a single point with its own small contour (used by
/// the contour-shift tests).
pub fn g_ell_single(
    tf: &MellinParams,
    alpha: [Complex64; 3],
    sigma: f64,
    t_max: f64,
    ell: u8,
    z: f64,
) -> Result<Complex64, VoronoiError> {
    let mut ev = MellinEvaluator::new(*tf, alpha, z * tf.n_len);
    ev.sigma = sigma;
    ev.t_max = ev.t_max.max(t_max);
    Ok(ev.build_contour(ell, z, z)?.eval(z))
}

/// Mellin transform with the quadrature convergence flags attached.
pub fn mellin_with_flags(tf: &MellinParams, s: Complex64) -> QuadResult {
    let n = tf.n_len;
    let osc = tf.x * n / tf.qq_scale;
    let spec = PhaseSpec {
        log_coeff: -(s.im + tf.v),
        linear: osc,
        cbrt: 0.0,
        shift: 0.0,
    };
    let amp = move |xi: f64| {
        let w = sqrt_window_12(xi);
        Complex64::new(w * xi.powf(s.re - 1.0), 0.0)
    };
    let mut r = integrate_phase(amp, &spec, 1.0, 2.0, 1e-10);
    let n_pow = ((s + Complex64::new(0.0, tf.v)) * n.ln()).exp();
    r.value *= n_pow;
    r
}


#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn zeros() -> [Complex64; 3] {
        [Complex64::new(0.0, 0.0); 3]
    }

    #[test]
    fn mellin_of_plain_window() {
        // s = 1: g̃(1) = ∫ g = N · (half bump mass).
        let tf = MellinParams::plain(100.0);
        let g1 = tf.mellin(Complex64::new(1.0, 0.0));
        assert_relative_eq!(g1.re, 100.0 * 0.707_985_684_893_1, max_relative = 1e-9);
        assert!(g1.im.abs() < 1e-9);
        // Support bracketing: g̃(2)/g̃(1) ∈ (N, 2N).
        let g2 = tf.mellin(Complex64::new(2.0, 0.0));
        let ratio = (g2 / g1).re;
        assert!(ratio > 100.0 && ratio < 200.0, "ratio={ratio}");
    }

    #[test]
    fn mellin_highfreq_decay_window() {
        // Oscillatory test function: |g̃(−σ+iτ)| is tiny far outside the
        // concentration band |τ − v| ≈ 2πxN/(qQ).
        let tf = MellinParams {
            n_len: 100.0,
            v: 10.0,
            x: 0.5,
            qq_scale: 10.0,
        };
        let band = std::f64::consts::TAU * tf.x * tf.n_len / tf.qq_scale; // ≈ 31.4
        // Stationary point of the transform sits at τ = −(v + band·ξ),
        // ξ ∈ [1, 2]; probe the center of that band and far outside it.
        let inside = tf.mellin(Complex64::new(0.5, -(tf.v + 1.5 * band)));
        let outside = tf.mellin(Complex64::new(0.5, -(tf.v + 6.0 * band)));
        assert!(
            outside.norm() < 1e-3 * inside.norm(),
            "inside={} outside={}",
            inside.norm(),
            outside.norm()
        );
    }

    #[test]
    fn contour_shift_invariance_ell1() {
        // σ = 1/2 vs σ = 3/2, ℓ = 1 (pole-free strip): same value. The
        // positive abscissas need a tall contour for the gamma growth.
        let tf = MellinParams::plain(50.0);
        let z = 10.0 / 50.0;
        let a = g_ell_single(&tf, zeros(), 0.5, 2500.0, 1, z).unwrap();
        let b = g_ell_single(&tf, zeros(), 1.5, 4000.0, 1, z).unwrap();
        assert!(
            (a - b).norm() < 1e-6 * a.norm().max(1.0),
            "sigma 1/2: {a}, sigma 3/2: {b}"
        );
    }

    #[test]
    fn contour_shift_across_pole_ell0() {
        // σ = −1/2 vs σ = −3/2 for ℓ = 0 crosses the triple pole at s = −1;
        // the circle residue restores equality.
        let tf = MellinParams::plain(50.0);
        let z = 10.0 / 50.0;
        let a = g_ell_single(&tf, zeros(), -0.5, 600.0, 0, z).unwrap();
        let b = g_ell_single(&tf, zeros(), -1.5, 600.0, 0, z).unwrap();
        assert!(
            (a - b).norm() < 1e-6 * a.norm().max(1.0),
            "sigma -1/2: {a}, sigma -3/2: {b}"
        );
    }

    #[test]
    fn pole_proximity_refused() {
        let tf = MellinParams::plain(50.0);
        let err = g_ell_single(&tf, zeros(), -1.05, 300.0, 0, 0.1).unwrap_err();
        assert!(matches!(err, VoronoiError::PoleProximity { .. }));
    }

    #[test]
    fn main_term_q1_matches_stieltjes_oracle() {
        for n_len in [50.0, 200.0] {
            let tf = MellinParams::plain(n_len);
            let circle = main_term_d3(1, 1, &tf);
            let series = main_term_d3_stieltjes(&tf);
            assert!(
                (circle - series).norm() < 1e-8 * series.norm(),
                "N={n_len}: circle={circle} series={series}"
            );
        }
    }

    #[test]
    fn main_term_dilation_scaling() {
        // Leading order in log: the residue scales like ∫g under dilation.
        let a = main_term_d3(1, 1, &MellinParams::plain(100.0));
        let b = main_term_d3(1, 1, &MellinParams::plain(200.0));
        let ratio = (b / a).re;
        // ∫g doubles; the log² factor adds ~30% at these sizes.
        assert!(ratio > 2.0 && ratio < 3.2, "ratio={ratio}");
    }

    #[test]
    fn poisson_identity_smoke() {
        // One (p, q) point of the identity grid; the full grid runs in the
        // acceptance suite.
        let chi = DirichletCharacter::legendre(5).unwrap();
        let (q, a, x, t, v, n_len, q_cap) = (3u64, 2u64, 0.5, 50.0, 5.0, 200.0, 20.0);
        let direct = m_direct(a, q, x, t, v, &chi, n_len, q_cap);
        let dual = m_dual(a, q, x, t, v, &chi, n_len, q_cap).unwrap();
        assert!(
            (direct - dual.value).norm() < 1e-4 * direct.norm(),
            "direct={direct} dual={}",
            dual.value
        );
    }

    #[test]
    fn poisson_identity_trivial_character() {
        // p = 1 reduces to classical Poisson mod q.
        let chi = DirichletCharacter::trivial();
        let (q, a, x, t, v, n_len, q_cap) = (4u64, 3u64, 0.0, 30.0, 0.0, 150.0, 12.0);
        let direct = m_direct(a, q, x, t, v, &chi, n_len, q_cap);
        let dual = m_dual(a, q, x, t, v, &chi, n_len, q_cap).unwrap();
        assert!(
            (direct - dual.value).norm() < 1e-4 * direct.norm().max(1.0),
            "direct={direct} dual={}",
            dual.value
        );
    }

    #[test]
    fn m_direct_conjugation() {
        let chi = DirichletCharacter::new(13, 1).unwrap();
        let (q, a, x, t, v, n_len, q_cap) = (5u64, 2u64, 0.3, 40.0, 2.0, 100.0, 15.0);
        let m1 = m_direct(a, q, x, t, v, &chi, n_len, q_cap);
        let m2 = m_direct(q - a, q, -x, -t, -v, &chi.conj(), n_len, q_cap);
        assert!((m1.conj() - m2).norm() < 1e-12 * m1.norm());
    }

    #[test]
    fn voronoi_normalization_pinned_at_q1() {
        // The q = 1 summation formula: Σ d₃(n) g(n) = Res + dual. With the
        // κ = 1/(2π^{3/2}) normalization the identity holds to quadrature
        // accuracy; this pins the kernel constant numerically.
        let source = CoefficientSource::eisenstein_d3(512).unwrap();
        let tf = MellinParams::plain(50.0);
        let ev = MellinEvaluator::new(tf, zeros(), 2.0e4);
        let kernel = VoronoiKernel::build(&ev, 1.0 / 50.0, 4.0e2).unwrap();
        let case = VoronoiCase {
            source: &source,
            q: 1,
            a: 1,
            test_fn: tf,
            zn_cut: 2.0e4,
        };
        let dualside = n_voronoi(&case, &kernel).unwrap();
        let direct = n_direct(1, 1, &source, &tf).unwrap();
        let rel = (dualside.value - direct).norm() / direct.norm();
        assert!(
            rel < 1e-3,
            "direct={direct} dual+main={} rel={rel}",
            dualside.value
        );
        // Ablation: dropping the main term breaks the identity badly.
        let rel_no_main = (dualside.dual - direct).norm() / direct.norm();
        assert!(
            rel_no_main > 0.5,
            "main term must be load-bearing: {rel_no_main}"
        );
    }

    #[test]
    fn voronoi_identity_q2() {
        let source = CoefficientSource::eisenstein_d3(512).unwrap();
        let tf = MellinParams::plain(50.0);
        let ev = MellinEvaluator::new(tf, zeros(), 2.0e4);
        let kernel = VoronoiKernel::build(&ev, 1.0 / (8.0 * 50.0), 4.0e2).unwrap();
        let case = VoronoiCase {
            source: &source,
            q: 2,
            a: 1,
            test_fn: tf,
            zn_cut: 2.0e4,
        };
        let dualside = n_voronoi(&case, &kernel).unwrap();
        let direct = n_direct(1, 2, &source, &tf).unwrap();
        let rel = (dualside.value - direct).norm() / direct.norm();
        assert!(
            rel < 1e-2,
            "direct={direct} dual+main={} rel={rel}",
            dualside.value
        );
    }
}
