//! Envelope-fitting helpers shared by the verification sweeps.
//!
//! Asymptotic statements with ε-powers are checked at desk scale as fitted
//! envelopes: a sweep produces (parameter, magnitude) points, and the suite
//! records the least-squares log-log slope and/or the fitted constant
//! `max value/bound`.

/// Least-squares slope of ln(y) against ln(x); points with y ≤ 0 are
/// skipped. Returns 0 when fewer than two usable points remain.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 0.0 && y > 0.0)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return 0.0;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in logs {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Largest ratio value/bound over a sweep, with the argmax parameter.
pub fn fitted_constant(points: &[(f64, f64, f64)]) -> (f64, f64) {
    let mut best = (0.0, f64::NAN);
    for &(param, value, bound) in points {
        if bound > 0.0 {
            let r = value / bound;
            if r > best.0 {
                best = (r, param);
            }
        }
    }
    best
}

/// Residual power-law exponent after removing a known polylog degree:
/// least-squares slope of ln(y / (1 + ln x)^degree) against ln x.
pub fn residual_exponent(points: &[(f64, f64)], polylog_degree: f64) -> f64 {
    let adjusted: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, y)| x > 1.0 && y > 0.0)
        .map(|&(x, y)| (x, y / (1.0 + x.ln()).powf(polylog_degree)))
        .collect();
    log_log_slope(&adjusted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_pure_power() {
        let pts: Vec<(f64, f64)> = (1..=20).map(|k| {
            let x = 1.5f64.powi(k);
            (x, 3.0 * x.powf(-0.5))
        }).collect();
        assert!((log_log_slope(&pts) + 0.5).abs() < 1e-10);
    }

    #[test]
    fn polylog_has_small_residual_exponent() {
        let pts: Vec<(f64, f64)> = (4..=40).map(|k| {
            let x = (1.3f64).powi(k) * 10.0;
            (x, 0.7 * (1.0 + x.ln()).powi(3))
        }).collect();
        let raw = log_log_slope(&pts);
        assert!(raw > 0.2, "raw slope should look like growth: {raw}");
        let resid = residual_exponent(&pts, 3.0);
        assert!(resid.abs() < 1e-9, "resid={resid}");
    }

    #[test]
    fn fitted_constant_picks_argmax() {
        let pts = [(1.0, 2.0, 1.0), (2.0, 9.0, 3.0), (3.0, 4.0, 4.0)];
        let (c, at) = fitted_constant(&pts);
        assert_eq!(c, 3.0);
        assert_eq!(at, 2.0);
    }
}
