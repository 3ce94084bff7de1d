//! Oscillatory integral engine: phases with log / linear / cube-root terms,
//! stationary-point solving (including the perturbed-cubic series),
//! first-order stationary phase, and the specific integrals `I`, `𝒲`, `𝔍`
//! of the dual-sum analysis.
//!
//! Panel counts are always derived from analytic bounds on the phase
//! derivative, never from sampled frequencies (sampled estimates alias on
//! cube-root phases).

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::bump::{sqrt_window_12, window_12};
use crate::delta::{ConductorWindow, DeltaExpansion};
use crate::quad::{integrate_oscillatory, QuadResult};

/// A phase of the shape φ(ξ) = −(t/2π)·ln ξ + A·ξ + B·(ξ+u)^{1/3},
/// in cycles (the integrand is e(φ(ξ))).
#[derive(Debug, Clone, Copy)]
pub struct PhaseSpec {
    /// t: coefficient of −(1/2π)·ln ξ.
    pub log_coeff: f64,
    /// A: linear coefficient.
    pub linear: f64,
    /// B: cube-root coefficient.
    pub cbrt: f64,
    /// u: shift inside (ξ + u)^{1/3}.
    pub shift: f64,
}

/// Analytic phase interface used by the quadrature and stationary-phase
/// routines. The derivative bound must hold on the whole interval.
pub trait Phase: Sync {
    fn phi(&self, xi: f64) -> f64;
    fn dphi(&self, xi: f64) -> f64;
    fn ddphi(&self, xi: f64) -> f64;
    fn dphi_bound(&self, lo: f64, hi: f64) -> f64;
}

impl PhaseSpec {
    /// Series solution of the stationary equation ξ + ε ξ^{1/3} = t/(2πA),
    /// ε = B/(3A): ξ_t = T − T^{1/3} ε + O(ε²).
    pub fn two_term_root(&self) -> Option<(f64, f64)> {
        if self.linear == 0.0 {
            return None;
        }
        let t_big = self.log_coeff / (std::f64::consts::TAU * self.linear);
        if t_big <= 0.0 {
            return None;
        }
        let eps = self.cbrt / (3.0 * self.linear);
        Some((t_big - t_big.cbrt() * eps, eps))
    }

    /// Newton-refined root of φ' = 0 in `window`, plus the two-term series.
    pub fn stationary_point(&self, window: (f64, f64)) -> StationaryPoint {
        let refined = find_stationary(self, window);
        let (two_term, epsilon) = match self.two_term_root() {
            Some((x, e)) => (Some(x), e),
            None => (None, 0.0),
        };
        StationaryPoint {
            refined,
            two_term,
            epsilon,
        }
    }
}

impl Phase for PhaseSpec {
    fn phi(&self, xi: f64) -> f64 {
        -self.log_coeff * xi.ln() / std::f64::consts::TAU
            + self.linear * xi
            + self.cbrt * (xi + self.shift).cbrt()
    }

    fn dphi(&self, xi: f64) -> f64 {
        -self.log_coeff / (std::f64::consts::TAU * xi)
            + self.linear
            + self.cbrt / (3.0 * (xi + self.shift).powf(2.0 / 3.0))
    }

    fn ddphi(&self, xi: f64) -> f64 {
        self.log_coeff / (std::f64::consts::TAU * xi * xi)
            - 2.0 * self.cbrt / (9.0 * (xi + self.shift).powf(5.0 / 3.0))
    }

    fn dphi_bound(&self, lo: f64, hi: f64) -> f64 {
        let _ = hi;
        assert!(lo > 0.0 && lo + self.shift > 0.0);
        self.log_coeff.abs() / (std::f64::consts::TAU * lo)
            + self.linear.abs()
            + self.cbrt.abs() / (3.0 * (lo + self.shift).powf(2.0 / 3.0))
    }
}

/// Root of φ' = 0 found numerically, with the perturbative companion.
#[derive(Debug, Clone, Copy)]
pub struct StationaryPoint {
    pub refined: Option<f64>,
    pub two_term: Option<f64>,
    /// ε = B/(3A) of the perturbed cubic.
    pub epsilon: f64,
}

/// Locate a sign change of φ' on a grid over `window` and polish it by
/// bisection + Newton. Returns None when φ' is single-signed there.
pub fn find_stationary(phase: &dyn Phase, window: (f64, f64)) -> Option<f64> {
    let (lo, hi) = window;
    const GRID: usize = 256;
    let step = (hi - lo) / GRID as f64;
    let mut prev_x = lo;
    let mut prev = phase.dphi(lo);
    for i in 1..=GRID {
        let x = lo + i as f64 * step;
        let cur = phase.dphi(x);
        if prev == 0.0 {
            return Some(prev_x);
        }
        if prev * cur < 0.0 {
            // Bisection, then a few Newton steps.
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev;
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                let fm = phase.dphi(mid);
                if fa * fm <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            let mut root = 0.5 * (a + b);
            for _ in 0..4 {
                let d2 = phase.ddphi(root);
                if d2.abs() < 1e-300 {
                    break;
                }
                root -= phase.dphi(root) / d2;
            }
            return Some(root);
        }
        prev_x = x;
        prev = cur;
    }
    None
}

/// First-order stationary phase approximation of ∫ amp(ξ) e(φ(ξ)) dξ.
#[derive(Debug, Clone, Copy)]
pub struct StationaryPhaseValue {
    pub value: Complex64,
    /// |amp(ξ_t)| / √|φ''(ξ_t)|, the second-derivative magnitude bound.
    pub magnitude_bound: f64,
    pub stationary_point: f64,
    /// Set when φ''(ξ_t) is too small for the first-order formula.
    pub degenerate: bool,
}

pub fn stationary_phase_value<F: Fn(f64) -> f64>(
    amp: F,
    phase: &dyn Phase,
    window: (f64, f64),
) -> Option<StationaryPhaseValue> {
    let xi_t = find_stationary(phase, window)?;
    let dd = phase.ddphi(xi_t);
    let degenerate = dd.abs() < 1e-8 * (1.0 + phase.dphi_bound(window.0, window.1));
    let a = amp(xi_t);
    let value = if degenerate {
        Complex64::new(0.0, 0.0)
    } else {
        crate::e(phase.phi(xi_t) + dd.signum() / 8.0) * (a / dd.abs().sqrt())
    };
    Some(StationaryPhaseValue {
        value,
        magnitude_bound: a.abs() / dd.abs().sqrt(),
        stationary_point: xi_t,
        degenerate,
    })
}

/// ∫ amp(ξ) e(φ(ξ)) dξ with panels sized from the analytic phase bound.
pub fn integrate_phase<F: Fn(f64) -> Complex64>(
    amp: F,
    phase: &dyn Phase,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> QuadResult {
    integrate_oscillatory(amp, |x| phase.phi(x), phase.dphi_bound(lo, hi), lo, hi, rel_tol)
}

// ---------------------------------------------------------------------------
// The specific integrals of the dual-sum analysis
// ---------------------------------------------------------------------------

/// I(m, x) = ∫ ξ^{−i(t+v)} e(−Nmξ/(pq) − Nxξ/(qQ)) U(ξ) dξ, U supported
/// in [1, 2].
pub fn i_of_m_x(
    m: i64,
    x: f64,
    q: u64,
    p: u64,
    n_len: f64,
    t: f64,
    v: f64,
    q_cap: f64,
) -> QuadResult {
    let spec = i_of_m_x_phase(m, x, q, p, n_len, t, v, q_cap);
    integrate_phase(
        |xi| Complex64::new(sqrt_window_12(xi), 0.0),
        &spec,
        1.0,
        2.0,
        1e-8,
    )
}

pub fn i_of_m_x_phase(
    m: i64,
    x: f64,
    q: u64,
    p: u64,
    n_len: f64,
    t: f64,
    v: f64,
    q_cap: f64,
) -> PhaseSpec {
    PhaseSpec {
        log_coeff: t + v,
        linear: -(n_len * m as f64) / (p as f64 * q as f64) - n_len * x / (q as f64 * q_cap),
        cbrt: 0.0,
        shift: 0.0,
    }
}

/// The post-Voronoi ξ-integral
/// I(m, n, q, p) = ∫ U(ξ)U(ξ+u)(ξ+u)^{−1/3} ξ^{−it}
///                 e(−Nmξ/(pq) + (Nn(ξ+u))^{1/3}/q) dξ
/// with n standing for n₁²n₂ (or the Poisson-dual N₀w).
pub fn i_voronoi(m: i64, n: f64, q: u64, p: u64, n_len: f64, t: f64, u: f64) -> QuadResult {
    let spec = i_voronoi_phase(m, n, q, p, n_len, t, u);
    let lo = 1f64.max(1.0 - u);
    let hi = 2f64.min(2.0 - u);
    if hi <= lo {
        return QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            panels: 0,
            converged: true,
        };
    }
    let amp = move |xi: f64| {
        let y = xi + u;
        if y <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(
            sqrt_window_12(xi) * sqrt_window_12(y) * y.powf(-1.0 / 3.0),
            0.0,
        )
    };
    integrate_phase(amp, &spec, lo, hi, 1e-7)
}

pub fn i_voronoi_phase(m: i64, n: f64, q: u64, p: u64, n_len: f64, t: f64, u: f64) -> PhaseSpec {
    PhaseSpec {
        log_coeff: t,
        linear: -(n_len * m as f64) / (p as f64 * q as f64),
        cbrt: (n_len * n).cbrt() / q as f64,
        shift: u,
    }
}

/// The combined x/v factor
/// 𝒲(y, ξ) = [∫ g(q,x) e(Nx(y−ξ)/(qQ)) dx] · [(1/K)∫V(v/K)(y/ξ)^{iv} dv].
/// The two integrals are independent, so the nesting factors exactly.
pub fn w_integral(
    y: f64,
    xi: f64,
    q: u64,
    n_len: f64,
    exp: &DeltaExpansion,
    win: &ConductorWindow,
    x_cut: f64,
) -> Complex64 {
    let table = exp.g_table(q, x_cut);
    let freq = n_len * (y - xi) / (q as f64 * exp.q_cap());
    let x_part = table.integrate_cos(freq, x_cut);
    let v_part = win.phase_factor(win.k() * (y / xi).ln()).value;
    v_part * x_part
}

// ---------------------------------------------------------------------------
// The Poisson-dual correlation integral 𝔍
// ---------------------------------------------------------------------------

/// Fixed parameters of the 𝔍 family.
#[derive(Debug, Clone, Copy)]
pub struct FrakParams {
    pub p: u64,
    pub n_len: f64,
    pub t: f64,
    /// N₀, the dual-length scale of the n₁²n₂ variable.
    pub n0: f64,
    /// Shift u of the inner integrals (|u| ≪ 1/K in the pipeline).
    pub u_shift: f64,
}

/// Evaluator for 𝔍(m, m', q, q', n₂) =
/// ∫ φ(w) I(m, N₀w, q) conj(I(m', N₀w, q')) e(−N₀n₂w/(qq')) dw
/// with inner profiles cached per (m, q) on a fixed outer grid.
pub struct FrakEvaluator {
    params: FrakParams,
    coarse: Grid,
    fine: Grid,
    cache: Mutex<HashMap<(u64, i64, bool), Arc<Vec<Complex64>>>>,
}

struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights of 16-point Gauss–Legendre panels over [lo, hi],
/// shared with the contour machinery.
pub fn panel_grid(lo: f64, hi: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let g = gl16_grid(lo, hi, panels);
    (g.nodes, g.weights)
}

/// 16-point Gauss–Legendre panels over [lo, hi].
fn gl16_grid(lo: f64, hi: f64, panels: usize) -> Grid {
    const XS: [f64; 8] = [
        0.095_012_509_837_637_44,
        0.281_603_550_779_258_9,
        0.458_016_777_657_227_4,
        0.617_876_244_402_643_7,
        0.755_404_408_355_003_0,
        0.865_631_202_387_831_7,
        0.944_575_023_073_232_6,
        0.989_400_934_991_649_9,
    ];
    const WS: [f64; 8] = [
        0.189_450_610_455_068_5,
        0.182_603_415_044_923_6,
        0.169_156_519_395_002_5,
        0.149_595_988_816_576_7,
        0.124_628_971_255_533_9,
        0.095_158_511_682_492_79,
        0.062_253_523_938_647_89,
        0.027_152_459_411_754_095,
    ];
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * 16);
    let mut weights = Vec::with_capacity(panels * 16);
    for pnl in 0..panels {
        let mid = lo + (pnl as f64 + 0.5) * h;
        for i in 0..8 {
            nodes.push(mid - 0.5 * h * XS[i]);
            weights.push(0.5 * h * WS[i]);
            nodes.push(mid + 0.5 * h * XS[i]);
            weights.push(0.5 * h * WS[i]);
        }
    }
    Grid { nodes, weights }
}

impl FrakEvaluator {
    /// Grid sized for moduli ≥ q_min and frequencies |n₂| ≤ n2_max.
    pub fn new(params: FrakParams, q_min: u64, n2_max: f64) -> Self {
        let qf = q_min as f64;
        // d/dw of the inner cube-root phase is ≤ (NN₀·2)^{1/3}·2^{1/3}/(3q);
        // the explicit frequency adds N₀·n₂/(qq').
        let freq = (2.0 * params.n_len * params.n0).cbrt() * 1.26 / (3.0 * qf)
            + params.n0 * n2_max / (qf * qf);
        let panels = ((freq / 2.5).ceil() as usize).max(6);
        FrakEvaluator {
            params,
            coarse: gl16_grid(1.0, 2.0, panels),
            fine: gl16_grid(1.0, 2.0, panels * 2),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &FrakParams {
        &self.params
    }

    fn inner_profile(&self, q: u64, m: i64, fine: bool) -> Arc<Vec<Complex64>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&(q, m, fine)) {
            return hit.clone();
        }
        use rayon::prelude::*;
        let grid = if fine { &self.fine } else { &self.coarse };
        let p = self.params;
        let profile: Vec<Complex64> = grid
            .nodes
            .par_iter()
            .map(|&w| i_voronoi(m, p.n0 * w, q, p.p, p.n_len, p.t, p.u_shift).value)
            .collect();
        let arc = Arc::new(profile);
        self.cache.lock().unwrap().insert((q, m, fine), arc.clone());
        arc
    }

    fn pass(&self, m: i64, m2: i64, q: u64, q2: u64, n2: i64, fine: bool) -> Complex64 {
        let grid = if fine { &self.fine } else { &self.coarse };
        let p1 = self.inner_profile(q, m, fine);
        let p2 = self.inner_profile(q2, m2, fine);
        let gamma = self.params.n0 * n2 as f64 / (q as f64 * q2 as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..grid.nodes.len() {
            let w = grid.nodes[j];
            acc += grid.weights[j] * window_12(w) * p1[j] * p2[j].conj() * crate::e(-gamma * w);
        }
        acc
    }

    /// 𝔍 with doubled-grid validation.
    pub fn frak(&self, m: i64, m2: i64, q: u64, q2: u64, n2: i64) -> QuadResult {
        let coarse = self.pass(m, m2, q, q2, n2, false);
        let fine = self.pass(m, m2, q, q2, n2, true);
        let err = (fine - coarse).norm();
        QuadResult {
            value: fine,
            error_estimate: err,
            panels: self.fine.nodes.len() / 16,
            converged: err <= 1e-4 * fine.norm().max(1e-12),
        }
    }
}

// ---------------------------------------------------------------------------
// Window reports
// ---------------------------------------------------------------------------

/// Magnitude sweep against a predicted negligibility boundary.
#[derive(Debug, Clone)]
pub struct WindowReport {
    pub rows: Vec<(f64, f64)>,
    pub boundary: f64,
    pub in_window_max: f64,
    pub out_window_max: f64,
}

impl WindowReport {
    /// Split a sweep at the boundary; "out" only counts parameters at least
    /// `out_factor` times the boundary, leaving the transition region out
    /// of both maxima.
    pub fn from_sweep(rows: Vec<(f64, f64)>, boundary: f64, out_factor: f64) -> Self {
        let mut in_max = 0.0f64;
        let mut out_max = 0.0f64;
        for &(param, mag) in &rows {
            if param <= boundary {
                in_max = in_max.max(mag);
            } else if param >= out_factor * boundary {
                out_max = out_max.max(mag);
            }
        }
        WindowReport {
            rows,
            boundary,
            in_window_max: in_max,
            out_window_max: out_max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_phase_reduces_to_plain_mass() {
        let spec = PhaseSpec {
            log_coeff: 0.0,
            linear: 0.0,
            cbrt: 0.0,
            shift: 0.0,
        };
        let r = integrate_phase(
            |x| Complex64::new(window_12(x), 0.0),
            &spec,
            1.0,
            2.0,
            1e-12,
        );
        // Half the bump mass (frozen from the dual-rule oracle in quad).
        assert_relative_eq!(r.value.re, 0.603_450_161_218_9, epsilon = 1e-9);
        assert!(r.value.im.abs() < 1e-14);
    }

    #[test]
    fn stationary_point_pure_linear() {
        // B = 0, u = 0: ξ_t = t/(2πA) exactly.
        let t = 500.0;
        let a = t / (std::f64::consts::TAU * 1.4);
        let spec = PhaseSpec {
            log_coeff: t,
            linear: a,
            cbrt: 0.0,
            shift: 0.0,
        };
        let sp = spec.stationary_point((0.5, 4.0));
        let expected = t / (std::f64::consts::TAU * a);
        assert_relative_eq!(sp.refined.unwrap(), expected, epsilon = 1e-10);
        assert_relative_eq!(sp.two_term.unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn stationary_point_perturbed_cubic() {
        // Newton root vs two-term series agree to O(ε²).
        let t = 1e3;
        let a = t / (std::f64::consts::TAU * 1.3);
        let b = 0.05 * a;
        let spec = PhaseSpec {
            log_coeff: t,
            linear: a,
            cbrt: b,
            shift: 0.0,
        };
        let sp = spec.stationary_point((0.5, 4.0));
        let refined = sp.refined.expect("root in window");
        let series = sp.two_term.unwrap();
        let eps = sp.epsilon;
        assert_relative_eq!(eps, b / (3.0 * a), epsilon = 1e-15);
        assert!(
            (refined - series).abs() <= eps * eps,
            "|{refined} - {series}| vs eps^2 = {}",
            eps * eps
        );
        // And the residual really is quadratic, not linear, in ε.
        assert!((refined - series).abs() > 0.01 * eps * eps);
    }

    #[test]
    fn stationary_point_wrong_sign_is_none() {
        let spec = PhaseSpec {
            log_coeff: 1e3,
            linear: -40.0,
            cbrt: 0.0,
            shift: 0.0,
        };
        assert!(spec.stationary_point((0.5, 4.0)).refined.is_none());
    }

    struct QuadraticPhase {
        lambda: f64,
        center: f64,
    }

    impl Phase for QuadraticPhase {
        fn phi(&self, x: f64) -> f64 {
            self.lambda * (x - self.center) * (x - self.center)
        }
        fn dphi(&self, x: f64) -> f64 {
            2.0 * self.lambda * (x - self.center)
        }
        fn ddphi(&self, _x: f64) -> f64 {
            2.0 * self.lambda
        }
        fn dphi_bound(&self, lo: f64, hi: f64) -> f64 {
            2.0 * self.lambda.abs() * (hi - self.center).abs().max((self.center - lo).abs())
        }
    }

    #[test]
    fn fresnel_first_order_formula() {
        // ∫ W(ξ) e(λ(ξ−3/2)²) dξ against the first-order formula; relative
        // error is O(1/λ).
        let lambda = 1e4;
        let phase = QuadraticPhase {
            lambda,
            center: 1.5,
        };
        let quadrature = integrate_phase(
            |x| Complex64::new(window_12(x), 0.0),
            &phase,
            1.0,
            2.0,
            1e-11,
        );
        let sp = stationary_phase_value(window_12, &phase, (1.0, 2.0)).unwrap();
        assert!(!sp.degenerate);
        assert_relative_eq!(sp.stationary_point, 1.5, epsilon = 1e-9);
        let rel = (quadrature.value - sp.value).norm() / quadrature.value.norm();
        assert!(rel < 10.0 / lambda, "rel={rel}");
    }

    #[test]
    fn paper_phase_second_derivative_scale() {
        // φ''(ξ_t) ≍ t when B = o(t).
        let t = 1e3;
        let a = t / (std::f64::consts::TAU * 1.3);
        let spec = PhaseSpec {
            log_coeff: t,
            linear: a,
            cbrt: t.powf(0.6),
            shift: 0.0,
        };
        let xi_t = spec.stationary_point((0.5, 4.0)).refined.unwrap();
        let ratio = spec.ddphi(xi_t) / t;
        assert!(ratio > 5e-3 && ratio < 1.0, "phi''/t = {ratio}");
    }

    #[test]
    fn i_integral_t_half_magnitude() {
        // Stationary point inside the support: |I| ≍ t^{-1/2}.
        let t = 1e3;
        let p = 5u64;
        let q = 6u64;
        let n_len = 1e3;
        for m in [-4i64, -3] {
            // ξ_t = pqt/(2πN|m|) ∈ {1.19, 1.59}, inside the support.
            let xi_t = p as f64 * q as f64 * t
                / (std::f64::consts::TAU * n_len * m.unsigned_abs() as f64);
            assert!(xi_t > 1.1 && xi_t < 1.9);
            let r = i_of_m_x(m, 0.0, q, p, n_len, t, 0.0, 100.0);
            let scaled = r.value.norm() * t.sqrt();
            assert!(
                scaled > 0.05 && scaled < 5.0,
                "m={m}: |I|·sqrt(t) = {scaled}"
            );
        }
    }

    #[test]
    fn i_voronoi_reduces_to_linear_phase_at_zero() {
        // n = 0 kills the cube-root term; u = 0 reduces the amplitude to
        // U(ξ)² ξ^{-1/3} — cross-check against a directly-built integral.
        let (m, q, p, n_len, t) = (-3i64, 4u64, 5u64, 2e3, 150.0);
        let got = i_voronoi(m, 0.0, q, p, n_len, t, 0.0);
        let spec = PhaseSpec {
            log_coeff: t,
            linear: -(n_len * m as f64) / (p as f64 * q as f64),
            cbrt: 0.0,
            shift: 0.0,
        };
        let expect = integrate_phase(
            |xi| Complex64::new(window_12(xi) * xi.powf(-1.0 / 3.0), 0.0),
            &spec,
            1.0,
            2.0,
            1e-9,
        );
        assert!((got.value - expect.value).norm() < 1e-7);
    }

    #[test]
    fn w_integral_diagonal_and_offdiagonal() {
        let exp = DeltaExpansion::new(5.0);
        let win = ConductorWindow::new(8.0);
        let q = 2u64;
        let n_len = 400.0;
        // Diagonal: v-factor is 1, x-part is ∫ g(q,x) dx.
        let diag = w_integral(1.5, 1.5, q, n_len, &exp, &win, 64.0);
        let table = exp.g_table(q, 64.0);
        let mass = table.integrate_cos(0.0, 64.0);
        assert!((diag - Complex64::new(mass, 0.0)).norm() < 1e-8);
        // Far off-diagonal: |y−ξ| at 40·qQ/N is strongly suppressed.
        let sep = 40.0 * q as f64 * exp.q_cap() / n_len;
        let far = w_integral(1.5 + sep, 1.5, q, n_len, &exp, &win, 64.0);
        assert!(
            far.norm() < 2e-2 * diag.norm(),
            "far={} diag={}",
            far.norm(),
            diag.norm()
        );
    }

    #[test]
    fn frak_conjugation_symmetry() {
        let params = FrakParams {
            p: 5,
            n_len: 11_180.0,
            t: 100.0,
            n0: 4.4e3,
            u_shift: 0.01,
        };
        let ev = FrakEvaluator::new(params, 24, 4.0);
        let a = ev.frak(-1, -2, 24, 26, 3).value;
        let b = ev.frak(-2, -1, 26, 24, -3).value;
        assert!(
            (a - b.conj()).norm() < 1e-9 * (1.0 + a.norm()),
            "a={a} b*={}",
            b.conj()
        );
    }
}
