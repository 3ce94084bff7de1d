//! The delta symbol in three equivalent forms, and the conductor-lowering
//! window.
//!
//! Fix Q ≥ 2 and a smooth weight w supported in (Q, 2Q), normalized so that
//! Σ_{d≥1} w(d) = 1. Then for integer h
//!
//! ```text
//! δ(h) = Σ_{d | h} (w(d) − w(|h|/d))          (h ≠ 0; telescopes to 0)
//!      = Σ_q Σ*_{a mod q} e(ha/q) Δ_q(h),     Δ_q(u) = Σ_r (w(qr) − w(|u|/(qr)))/(qr)
//! ```
//!
//! the second line being the Farey dissection of the divisor condition.
//! The analytic `(q, x)` form replaces Δ_q by a Fourier integral: with
//!
//! ```text
//! g(q, x) = qQ ∫ Δ_q(qQu) T_q(u) e(−ux) du
//! ```
//!
//! (T_q a smooth taper that is 1 on the reconstruction window), one has
//!
//! ```text
//! Δ_q(h) = (1/(qQ)) ∫ g(q, x) e(hx/(qQ)) dx   for |h| ≤ h_range,
//! ```
//!
//! so that δ(h) = (1/Q) Σ_q (1/q) Σ*_a e(ha/q) ∫ g(q,x) e(hx/(qQ)) dx on
//! the detector's validity window. The taper is required because Δ_q(qQ·)
//! tends to a small constant at infinity (the Euler–Maclaurin defect of the
//! r-sum against its integral); without it the transform only exists as a
//! distribution. g is smooth, even, real, bounded, and decays faster than
//! any power of |x|.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::arith::ramanujan_sum;
use crate::bump::{bump, smooth_step};
use crate::quad::{integrate, integrate_oscillatory, QuadResult};

/// Width of the smooth taper beyond the flat reconstruction window.
const TAPER_WIDTH: f64 = 8.0;

/// Divisor-detection expansion with modulus cap Q and weight w.
#[derive(Debug)]
pub struct DeltaExpansion {
    q_cap: f64,
    /// Normalization constant: w(x) = norm · bump((x − 3Q/2)/(Q/2)).
    norm: f64,
    /// h-range the (q, x) form must reconstruct: |h| ≤ h_range.
    h_range: f64,
    tables: Mutex<HashMap<(u64, u32), Arc<GTable>>>,
}

impl DeltaExpansion {
    /// Expansion with the standard validity window |h| ≤ 2Q².
    pub fn new(q_cap: f64) -> Self {
        Self::with_h_range(q_cap, 2.0 * q_cap * q_cap)
    }

    /// Expansion whose (q, x)-integral form reconstructs δ on |h| ≤ h_range.
    pub fn with_h_range(q_cap: f64, h_range: f64) -> Self {
        assert!(q_cap >= 2.0, "modulus cap must be at least 2, got {q_cap}");
        let raw: f64 = (1..=(2.0 * q_cap).ceil() as u64)
            .map(|d| bump((d as f64 - 1.5 * q_cap) / (0.5 * q_cap)))
            .sum();
        assert!(raw > 0.0, "no integer in the weight support ({q_cap}, {})", 2.0 * q_cap);
        DeltaExpansion {
            q_cap,
            norm: 1.0 / raw,
            h_range: h_range.max(2.0 * q_cap * q_cap),
            tables: Mutex::new(HashMap::new()),
        }
    }

    pub fn q_cap(&self) -> f64 {
        self.q_cap
    }

    /// The weight w: supported in (Q, 2Q), Σ_d w(d) = 1.
    #[inline]
    pub fn w(&self, x: f64) -> f64 {
        self.norm * bump((x - 1.5 * self.q_cap) / (0.5 * self.q_cap))
    }

    /// Exact divisor form: δ_{h=0} up to rounding, for every integer h.
    pub fn delta_exact(&self, h: i64) -> f64 {
        if h == 0 {
            return (1..=(2.0 * self.q_cap).ceil() as u64)
                .map(|d| self.w(d as f64))
                .sum();
        }
        let habs = h.unsigned_abs();
        crate::arith::divisors(habs)
            .into_iter()
            .map(|d| self.w(d as f64) - self.w(habs as f64 / d as f64))
            .sum()
    }

    /// Δ_q(u) = Σ_{r≥1} (w(qr) − w(|u|/(qr)))/(qr), finitely many terms.
    pub fn delta_q(&self, q: u64, u: f64) -> f64 {
        let qf = q as f64;
        let ua = u.abs();
        // w(qr) needs qr < 2Q; w(|u|/(qr)) needs qr > |u|/(2Q).
        let r_max = ((2.0 * self.q_cap / qf).ceil() as u64)
            .max((ua / (self.q_cap * qf)).ceil() as u64);
        let mut acc = 0.0;
        for r in 1..=r_max {
            let d = qf * r as f64;
            acc += (self.w(d) - self.w(ua / d)) / d;
        }
        acc
    }

    /// Largest modulus with a nonzero Δ_q(h) for |h| ≤ bound.
    pub fn q_support(&self, h_bound: f64) -> u64 {
        ((2.0 * self.q_cap).ceil() as u64).max((h_bound / self.q_cap).ceil() as u64)
    }

    /// Farey form: Σ_q c_q(h) Δ_q(h), an exact rearrangement of
    /// [`Self::delta_exact`].
    pub fn delta_farey(&self, h: i64) -> f64 {
        let q_max = self.q_support(h.unsigned_abs() as f64);
        let mut acc = 0.0;
        for q in 1..=q_max {
            let cq = ramanujan_sum(q, h);
            if cq != 0 {
                acc += cq as f64 * self.delta_q(q, h as f64);
            }
        }
        acc
    }

    /// Flat reconstruction radius of the taper for modulus q (in the scaled
    /// variable u = h/(qQ)).
    fn u_flat(&self, q: u64) -> f64 {
        self.h_range / (q as f64 * self.q_cap) + TAPER_WIDTH
    }

    fn taper(&self, q: u64, u: f64) -> f64 {
        let flat = self.u_flat(q);
        smooth_step((flat + TAPER_WIDTH - u.abs()) / TAPER_WIDTH)
    }

    /// Direct quadrature evaluation of g(q, x); real and even in x.
    pub fn g_eval(&self, q: u64, x: f64) -> f64 {
        let u_hi = self.u_flat(q) + TAPER_WIDTH;
        let scale = self.q_cap * q as f64;
        let f = |u: f64| Complex64::new(self.delta_q(q, scale * u) * self.taper(q, u), 0.0);
        let r = integrate_oscillatory(f, |u| -u * x, x.abs().max(1e-9), -u_hi, u_hi, 1e-10);
        scale * r.value.re
    }

    /// FFT-backed table of g(q, ·) on [0, x_max], cached per modulus.
    pub fn g_table(&self, q: u64, x_max: f64) -> Arc<GTable> {
        let x_pow = (x_max.max(4.0)).log2().ceil() as u32;
        if let Some(t) = self.tables.lock().unwrap().get(&(q, x_pow)) {
            return t.clone();
        }
        let table = Arc::new(self.build_g_table(q, 2f64.powi(x_pow as i32)));
        self.tables
            .lock()
            .unwrap()
            .insert((q, x_pow), table.clone());
        table
    }

    fn build_g_table(&self, q: u64, x_max: f64) -> GTable {
        let u_hi = self.u_flat(q) + TAPER_WIDTH;
        let du = 1.0 / (2.0 * x_max);
        // Resolution in x: at least 32 samples per feature scale 1/u_hi.
        let n_min = (32.0 * u_hi * 2.0 * x_max) as usize;
        let n = n_min.next_power_of_two();
        let mut buf: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
        let scale = self.q_cap * q as f64;
        let half = n / 2;
        for (j, slot) in buf.iter_mut().enumerate() {
            let u = (j as f64 - half as f64) * du;
            if u.abs() <= u_hi {
                let val = self.delta_q(q, scale * u) * self.taper(q, u);
                *slot = Complex64::new(val, 0.0);
            }
        }
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let keep = half + 1;
        let mut vals = Vec::with_capacity(keep);
        for (k, z) in buf.iter().take(keep).enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            vals.push(scale * du * sign * z.re);
        }
        GTable {
            dx: 1.0 / (n as f64 * du),
            x_max,
            vals,
        }
    }

    /// Single-q reconstruction (1/(qQ)) ∫_{|x| ≤ x_cut} g(q,x) e(hx/(qQ)) dx,
    /// which recovers Δ_q(h) on the validity window.
    pub fn delta_q_from_g(&self, q: u64, h: i64, x_cut: f64) -> f64 {
        let table = self.g_table(q, x_cut);
        let freq = h as f64 / (q as f64 * self.q_cap);
        table.integrate_cos(freq, x_cut) / (q as f64 * self.q_cap)
    }

    /// Full (q, x)-integral detector
    /// (1/Q) Σ_q (1/q) Σ*_a e(ha/q) ∫ g(q,x) e(hx/(qQ)) dx.
    pub fn delta_via_g(&self, h: i64, x_cut: f64) -> f64 {
        let q_max = self.q_support(h.unsigned_abs() as f64);
        let mut acc = 0.0;
        for q in 1..=q_max {
            let cq = ramanujan_sum(q, h);
            if cq != 0 {
                acc += cq as f64 * self.delta_q_from_g(q, h, x_cut);
            }
        }
        acc
    }
}

/// Sampled g(q, ·) on a uniform half-grid (g is even).
#[derive(Debug)]
pub struct GTable {
    dx: f64,
    x_max: f64,
    vals: Vec<f64>,
}

impl GTable {
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Cubic (Catmull–Rom) interpolation; zero beyond the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let xa = x.abs();
        let pos = xa / self.dx;
        let i = pos.floor() as usize;
        if i + 2 >= self.vals.len() {
            return 0.0;
        }
        let t = pos - i as f64;
        let pm1 = if i == 0 { self.vals[1] } else { self.vals[i - 1] };
        let p0 = self.vals[i];
        let p1 = self.vals[i + 1];
        let p2 = self.vals[i + 2];
        0.5 * (2.0 * p0
            + (p1 - pm1) * t
            + (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * t * t
            + (3.0 * p0 - pm1 - 3.0 * p1 + p2) * t * t * t)
    }

    /// ∫_{|x| ≤ x_cut} g(x) e(freq·x) dx = 2 ∫_0^{x_cut} g(x) cos(2π freq x) dx
    /// by Simpson on the stored grid.
    pub fn integrate_cos(&self, freq: f64, x_cut: f64) -> f64 {
        let mut kmax = ((x_cut.min(self.x_max) / self.dx).floor() as usize)
            .min(self.vals.len() - 1);
        if kmax % 2 == 1 {
            kmax -= 1;
        }
        let two_pi_f = std::f64::consts::TAU * freq;
        let mut acc = self.vals[0] + self.vals[kmax] * ((kmax as f64 * self.dx) * two_pi_f).cos();
        for k in 1..kmax {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * self.vals[k] * ((k as f64 * self.dx) * two_pi_f).cos();
        }
        2.0 * acc * self.dx / 3.0
    }
}

// ---------------------------------------------------------------------------
// Conductor-lowering window
// ---------------------------------------------------------------------------

/// Smooth window V supported in [1, 2] with ∫V = 1, dilated by K:
/// the conductor-lowering factor is (1/K)∫V(v/K)(n/m)^{iv} dv.
#[derive(Debug, Clone)]
pub struct ConductorWindow {
    k: f64,
    norm: f64,
}

impl ConductorWindow {
    pub fn new(k: f64) -> Self {
        assert!(k > 0.0);
        let raw = integrate(
            |y| Complex64::new(bump(2.0 * y - 3.0), 0.0),
            1.0,
            2.0,
            8,
            1e-13,
            1e-300,
        );
        ConductorWindow {
            k,
            norm: 1.0 / raw.value.re,
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// V(y), unit mass on [1, 2].
    #[inline]
    pub fn v(&self, y: f64) -> f64 {
        self.norm * bump(2.0 * y - 3.0)
    }

    /// ∫ V(s) e^{isθ} ds, the conductor factor at log-ratio θ/K.
    pub fn phase_factor(&self, theta: f64) -> QuadResult {
        let two_pi = std::f64::consts::TAU;
        integrate_oscillatory(
            |s| Complex64::new(self.v(s), 0.0),
            |s| s * theta / two_pi,
            theta.abs() / two_pi + 1e-12,
            1.0,
            2.0,
            1e-12,
        )
    }

    /// (1/K) ∫ V(v/K) (n/m)^{iv} dv, exactly 1 on the diagonal n = m.
    pub fn conductor_integral(&self, n: u64, m: u64) -> Complex64 {
        let theta = self.k * (n as f64 / m as f64).ln();
        self.phase_factor(theta).value
    }

    /// Envelope reference (K|n−m|/m)^{−a}.
    pub fn envelope(&self, n: u64, m: u64, a: f64) -> f64 {
        let arg = self.k * (n as f64 - m as f64).abs() / m as f64;
        arg.powf(-a)
    }
}
