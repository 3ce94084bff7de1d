//! The canonical C^∞ compactly supported bump and windows built from it.
//!
//! Every smooth weight in the crate (the sum window `W`, its square root
//! `U`, the conductor window `V`, the dyadic cutoff `φ`) is a translate /
//! dilate of the same template `bump(y) = exp(1 − 1/(1−y²))` on (−1, 1).

/// `exp(1 − 1/(1−y²))` on (−1, 1), zero elsewhere. Peak value 1 at y = 0.
#[inline]
pub fn bump(y: f64) -> f64 {
    if y.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - y * y)).exp()
    } else {
        0.0
    }
}

/// Smooth window supported on [1, 2], the weight `W` of the main sums.
#[inline]
pub fn window_12(x: f64) -> f64 {
    bump(2.0 * x - 3.0)
}

/// `U = W^{1/2}`, again a smooth bump on [1, 2].
#[inline]
pub fn sqrt_window_12(x: f64) -> f64 {
    window_12(x).sqrt()
}

/// C^∞ step: 0 for s ≤ 0, 1 for s ≥ 1, strictly increasing in between.
#[inline]
pub fn smooth_step(s: f64) -> f64 {
    #[inline]
    fn half(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp()
        } else {
            0.0
        }
    }
    let a = half(s);
    let b = half(1.0 - s);
    a / (a + b)
}
