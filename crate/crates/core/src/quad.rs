//! Panel-based Gauss–Legendre quadrature with doubled-node validation.
//!
//! Two entry points:
//!
//! * [`integrate`] — smooth (possibly complex) integrands, panels doubled
//!   until two consecutive refinements agree;
//! * [`integrate_oscillatory`] — integrands `amp(x)·e(phase(x))` where the
//!   caller supplies an *analytic* bound on `|phase'|`; the initial panel
//!   count is sized from that bound (never from sampled values, which alias
//!   on cube-root phases) and the same doubling validation then applies.
//!
//! Every returned value carries the difference against the half-resolution
//! pass as its error estimate.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::e;

/// Nodes and weights of an n-point Gauss–Legendre rule on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Outcome of a panel quadrature, with the doubled-node discrepancy.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    /// |value − previous half-resolution value|.
    pub error_estimate: f64,
    /// Panels used by the final pass.
    pub panels: usize,
    /// False when the doubling cap was hit before the tolerance.
    pub converged: bool,
}

impl QuadResult {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

fn panel_pass<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize) -> Complex64 {
    let (nodes, weights) = gl16();
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel += f(mid + 0.5 * h * x) * *w;
        }
        acc += panel * (0.5 * h);
    }
    acc
}

/// Integrate a smooth complex integrand over [a, b].
///
/// Starts from `min_panels` and doubles until consecutive passes agree to
/// `rel_tol` relative (or below the absolute floor `abs_floor`, for values
/// that cancel to far below the integrand scale) or the refinement cap is
/// reached.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    min_panels: usize,
    rel_tol: f64,
    abs_floor: f64,
) -> QuadResult {
    let mut panels = min_panels.max(1);
    let mut prev = panel_pass(&f, a, b, panels);
    for _ in 0..8 {
        panels *= 2;
        let cur = panel_pass(&f, a, b, panels);
        let err = (cur - prev).norm();
        if err <= (rel_tol * cur.norm()).max(abs_floor) {
            return QuadResult {
                value: cur,
                error_estimate: err,
                panels,
                converged: true,
            };
        }
        prev = cur;
    }
    let cur = panel_pass(&f, a, b, panels * 2);
    QuadResult {
        value: cur,
        error_estimate: (cur - prev).norm(),
        panels: panels * 2,
        converged: false,
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    min_panels: usize,
    rel_tol: f64,
) -> f64 {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, min_panels, rel_tol, 1e-300)
        .value
        .re
}

/// Integrate `amp(x)·e(phase(x))` over [a, b].
///
/// `max_abs_dphase` must bound `|phase'|` (in cycles per unit length) over
/// the whole interval; the initial panel count allots a panel per ~2.5
/// cycles so the 16-point rule resolves each panel, then the usual doubling
/// validation runs on top.
pub fn integrate_oscillatory<F, P>(
    amp: F,
    phase: P,
    max_abs_dphase: f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> QuadResult
where
    F: Fn(f64) -> Complex64,
    P: Fn(f64) -> f64,
{
    let cycles = (b - a).abs() * max_abs_dphase;
    let min_panels = ((cycles / 2.5).ceil() as usize).max(4);
    // Highly oscillatory integrals of smooth windows are often far below
    // the amplitude scale; convergence below this absolute floor (set from
    // the amplitude mass) counts as converged.
    let (nodes, weights) = gl16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let amp_mass: f64 = nodes
        .iter()
        .zip(weights.iter())
        .map(|(x, w)| amp(mid + half * x).norm() * w)
        .sum::<f64>()
        * half;
    let abs_floor = 1e-13 * amp_mass.max(1e-300);
    integrate(|x| amp(x) * e(phase(x)), a, b, min_panels, rel_tol, abs_floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bump::bump;

    #[test]
    fn gl_rule_integrates_polynomials_exactly() {
        // 16-point rule is exact through degree 31.
        let (nodes, weights) = gl16().clone();
        let val: f64 = nodes
            .iter()
            .zip(weights.iter())
            .map(|(x, w)| w * x.powi(20))
            .sum();
        assert!((val - 2.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn bump_mass_two_rules_agree() {
        // Independent low-order rule (composite Simpson) against the panel
        // GL engine, per the dual-quadrature oracle convention.
        let gl = integrate_real(bump, -1.0, 1.0, 8, 1e-13);
        let n = 1 << 16;
        let h = 2.0 / n as f64;
        let mut simpson = bump(-1.0) + bump(1.0);
        for i in 1..n {
            let x = -1.0 + i as f64 * h;
            simpson += bump(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        simpson *= h / 3.0;
        assert!((gl - simpson).abs() < 1e-12, "gl={gl} simpson={simpson}");
        // Frozen from the two agreeing rules.
        assert!((gl - 1.206_900_322_437_9).abs() < 1e-9);
    }

    fn simpson_oracle(lambda: f64, n: usize) -> Complex64 {
        let h = 1.0 / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let x = 1.0 + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += bump(2.0 * x - 3.0) * crate::e(lambda * x) * w;
        }
        acc * (h / 3.0)
    }

    #[test]
    fn oscillatory_linear_phase_against_brute_force() {
        // ∫ bump(2x−3) e(λx) dx against dense Simpson oracles: a moderate λ
        // where the value is well above rounding (relative agreement), and
        // λ = 1000 per the absolute 1e−8 target.
        for (lambda, nodes) in [(40.0, 1 << 18), (1000.0, 1 << 21)] {
            let fast = integrate_oscillatory(
                |x| Complex64::new(bump(2.0 * x - 3.0), 0.0),
                |x| lambda * x,
                lambda,
                1.0,
                2.0,
                1e-10,
            );
            assert!(fast.converged, "lambda={lambda}");
            let oracle = simpson_oracle(lambda, nodes);
            assert!(
                (fast.value - oracle).norm() < 1e-8,
                "lambda={lambda}: engine={} oracle={}",
                fast.value,
                oracle
            );
            if lambda < 100.0 {
                assert!(
                    (fast.value - oracle).norm() < 1e-7 * oracle.norm(),
                    "relative check at lambda={lambda}"
                );
            }
        }
    }

    #[test]
    fn conjugate_phase_symmetry() {
        let f = |x: f64| Complex64::new(bump(2.0 * x - 3.0), 0.0);
        let plus = integrate_oscillatory(f, |x| 37.0 * x * x, 160.0, 1.0, 2.0, 1e-11);
        let minus = integrate_oscillatory(f, |x| -37.0 * x * x, 160.0, 1.0, 2.0, 1e-11);
        assert!((plus.value - minus.value.conj()).norm() < 1e-10);
    }
}
