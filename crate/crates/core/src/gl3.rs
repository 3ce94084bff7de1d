//! GL(3) Fourier-coefficient providers λ(m, n) with Langlands parameters.
//!
//! Three sources:
//!
//! * `Eisenstein` — the triple divisor function d₃(n) (coefficients of ζ³),
//!   Langlands parameters (0, 0, 0). Exactly computable, the default
//!   numerical stand-in for a cuspidal form; the Voronoi identity then
//!   carries an explicit polar main term (see [`crate::voronoi`]).
//! * `SymSquare` — the symmetric-square lift of a holomorphic GL(2) form
//!   (weight 12, level 1 by default), seeded from normalized Hecke
//!   eigenvalues λ_f; exercises a non-Eisenstein coefficient pattern in the
//!   Cauchy–Schwarz sweeps. Its archimedean parameters are not spherical,
//!   so it is excluded from Voronoi identity checks.
//! * `Ingested` — a coefficient table read from a CSV file with a declared
//!   parameter triple.
//!
//! Pair coefficients come from Möbius inversion of the Hecke relation:
//! λ(m, n) = Σ_{d | (m,n)} μ(d) λ(m/d, 1) λ(1, n/d), with λ(m, 1) = λ(1, m)
//! for self-dual sources.

use num_complex::Complex64;
use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

use crate::arith::{divisors, gcd, mobius};

#[derive(Debug, Error)]
pub enum Gl3Error {
    #[error("index {n} outside table bound {bound}")]
    OutOfRange { n: u64, bound: u64 },
    #[error("sieve bound {0} exceeds the configured cap {1}")]
    SieveTooLarge(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("Langlands parameters must sum to zero, got sum {0}")]
    AlphaSum(f64),
    #[error("duplicate entry for ({m}, {n})")]
    Duplicate { m: u64, n: u64 },
    #[error("table incomplete: expected {expected} entries for bounds {max_m}x{max_n}, found {found}")]
    Incomplete { expected: usize, found: usize, max_m: u64, max_n: u64 },
    #[error("lambda(1,1) must be 1, got {0}")]
    NotNormalized(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const D3_SIEVE_CAP: usize = 100_000_000;

/// d₃(n): number of ordered triples (a, b, c) with abc = n.
pub fn d3(n: u64) -> u64 {
    let mut count = 0;
    for a in divisors(n) {
        count += divisors(n / a).len() as u64;
    }
    count
}

/// Table of d₃(n) for 1 ≤ n ≤ bound, by two rounds of divisor convolution.
/// O(N log N) time; index 0 is unused.
pub fn d3_sieve(bound: usize) -> Result<Vec<u32>, Gl3Error> {
    if bound > D3_SIEVE_CAP {
        return Err(Gl3Error::SieveTooLarge(bound, D3_SIEVE_CAP));
    }
    let mut tau = vec![0u32; bound + 1];
    for d in 1..=bound {
        for m in (d..=bound).step_by(d) {
            tau[m] += 1;
        }
    }
    let mut out = vec![0u32; bound + 1];
    for d in 1..=bound {
        for m in (d..=bound).step_by(d) {
            out[m] += tau[m / d];
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ramanujan tau and GL(2) Hecke eigenvalues (symmetric-square seed)
// ---------------------------------------------------------------------------

/// q-expansion of Δ = q·Π(1−q^n)^24 up to `bound`: returns τ(n) for
/// n ≤ bound. Uses η³ = Σ (−1)^k (2k+1) q^{k(k+1)/2} and three squarings.
pub fn ramanujan_tau_table(bound: usize) -> Vec<i128> {
    let len = bound; // coefficients of q^0..q^{bound-1} for η^24
    let mut e3 = vec![0i128; len];
    let mut k = 0u64;
    loop {
        let idx = (k * (k + 1) / 2) as usize;
        if idx >= len {
            break;
        }
        e3[idx] = if k % 2 == 0 { 1 } else { -1 } * (2 * k as i128 + 1);
        k += 1;
    }
    fn square(a: &[i128], len: usize) -> Vec<i128> {
        let mut out = vec![0i128; len];
        for i in 0..len {
            if a[i] == 0 {
                continue;
            }
            for j in 0..len - i {
                if a[j] != 0 {
                    out[i + j] += a[i] * a[j];
                }
            }
        }
        out
    }
    let e6 = square(&e3, len);
    let e12 = square(&e6, len);
    let e24 = square(&e12, len);
    // τ(n) is the coefficient of q^n in q·η^24, i.e. e24[n−1].
    let mut tau = vec![0i128; bound + 1];
    for n in 1..=bound {
        tau[n] = e24[n - 1];
    }
    tau
}

/// Normalized Hecke eigenvalues of the weight-12 level-1 form:
/// λ_f(p^k) by the recursion λ_f(p)λ_f(p^k) = λ_f(p^{k+1}) + λ_f(p^{k−1}),
/// extended multiplicatively.
#[derive(Debug, Clone)]
pub struct Gl2Eigenvalues {
    lambda_p: HashMap<u64, f64>,
    bound: u64,
}

impl Gl2Eigenvalues {
    /// Seed from τ(p) for primes p ≤ bound.
    pub fn weight12(bound: u64) -> Self {
        let tau = ramanujan_tau_table(bound as usize);
        let mut lambda_p = HashMap::new();
        for p in crate::arith::primes_up_to(bound) {
            lambda_p.insert(p, tau[p as usize] as f64 / (p as f64).powf(5.5));
        }
        Gl2Eigenvalues { lambda_p, bound }
    }

    fn prime_power(&self, p: u64, k: u32) -> f64 {
        let lp = self.lambda_p[&p];
        let mut prev = 1.0;
        let mut cur = lp;
        if k == 0 {
            return 1.0;
        }
        for _ in 1..k {
            let next = lp * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// λ_f(n) for n whose prime factors are ≤ the seed bound (arguments up
    /// to bound² arise as λ_f(m²)).
    pub fn eval(&self, n: u64) -> f64 {
        let mut n = n;
        let mut acc = 1.0;
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut k = 0u32;
                while n % p == 0 {
                    n /= p;
                    k += 1;
                }
                acc *= self.prime_power(p, k);
            }
            p += 1;
        }
        if n > 1 {
            assert!(n <= self.bound, "prime {n} beyond the eigenvalue seed bound");
            acc *= self.prime_power(n, 1);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Coefficient sources
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    EisensteinD3,
    SymSquareLift,
    Ingested,
}

#[derive(Debug, Clone)]
pub enum CoefficientSource {
    Eisenstein {
        row: Vec<u32>,
    },
    SymSquare {
        seed: Vec<f64>,
        eigen: Gl2Eigenvalues,
        row: Vec<f64>,
        alpha: [Complex64; 3],
    },
    Ingested {
        alpha: [Complex64; 3],
        max_m: u64,
        max_n: u64,
        entries: Vec<f64>,
    },
}

impl CoefficientSource {
    /// ζ³ coefficients d₃(n) up to `row_bound`, parameters (0, 0, 0).
    pub fn eisenstein_d3(row_bound: usize) -> Result<Self, Gl3Error> {
        Ok(CoefficientSource::Eisenstein {
            row: d3_sieve(row_bound)?,
        })
    }

    /// Symmetric-square lift of the weight-12 level-1 form with
    /// A(1, n) = Σ_{d²m = n} λ_f(m²), for n ≤ row_bound.
    pub fn sym_square_weight12(row_bound: u64) -> Self {
        let eigen = Gl2Eigenvalues::weight12(row_bound);
        let seed: Vec<f64> = (0..=row_bound)
            .map(|n| if n == 0 { 0.0 } else { eigen.eval(n) })
            .collect();
        let mut row = vec![0.0; row_bound as usize + 1];
        for n in 1..=row_bound {
            let mut acc = 0.0;
            let mut d = 1u64;
            while d * d <= n {
                if n % (d * d) == 0 {
                    let m = n / (d * d);
                    acc += eigen.eval(m * m);
                }
                d += 1;
            }
            row[n as usize] = acc;
        }
        // Motivic-weight parameters of the lift; sum is zero by symmetry.
        let alpha = [
            Complex64::new(11.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-11.0, 0.0),
        ];
        CoefficientSource::SymSquare { seed, eigen, row, alpha }
    }

    /// Build an ingested source directly from a row table λ(1, n) (index 0
    /// unused). Skips file-format validation; used for composite sources.
    pub fn from_rows_unchecked(rows: Vec<f64>, alpha: [Complex64; 3]) -> Self {
        let max_n = rows.len().saturating_sub(1) as u64;
        CoefficientSource::Ingested {
            alpha,
            max_m: 1,
            max_n,
            entries: rows[1..].to_vec(),
        }
    }

    pub fn kind(&self) -> SourceKind {
        match self {
            CoefficientSource::Eisenstein { .. } => SourceKind::EisensteinD3,
            CoefficientSource::SymSquare { .. } => SourceKind::SymSquareLift,
            CoefficientSource::Ingested { .. } => SourceKind::Ingested,
        }
    }

    pub fn alpha(&self) -> [Complex64; 3] {
        match self {
            CoefficientSource::Eisenstein { .. } => [Complex64::new(0.0, 0.0); 3],
            CoefficientSource::SymSquare { alpha, .. } => *alpha,
            CoefficientSource::Ingested { alpha, .. } => *alpha,
        }
    }

    /// Largest n for which λ(1, n) is available.
    pub fn row_bound(&self) -> u64 {
        match self {
            CoefficientSource::Eisenstein { row } => row.len() as u64 - 1,
            CoefficientSource::SymSquare { row, .. } => row.len() as u64 - 1,
            CoefficientSource::Ingested { max_n, .. } => *max_n,
        }
    }

    /// Order of the pole of the Rankin–Selberg series Σ |λ(n₂,n₁)|²(n₁²n₂)^{-s}
    /// at s = 1; 9 for ζ³, 1 for the (conjecturally cuspidal) others. Used to
    /// pick the polylog degree of mean-value envelopes.
    pub fn rankin_pole_order(&self) -> u32 {
        match self {
            CoefficientSource::Eisenstein { .. } => 9,
            _ => 1,
        }
    }

    pub fn lambda_1n(&self, n: u64) -> Result<f64, Gl3Error> {
        if n == 0 || n > self.row_bound() {
            return Err(Gl3Error::OutOfRange { n, bound: self.row_bound() });
        }
        Ok(match self {
            CoefficientSource::Eisenstein { row } => row[n as usize] as f64,
            CoefficientSource::SymSquare { row, .. } => row[n as usize],
            // Row-major layout puts λ(1, n) at offset n−1 in every case.
            CoefficientSource::Ingested { entries, .. } => entries[(n - 1) as usize],
        })
    }

    /// λ(m, n) by table lookup (ingested rectangular tables) or by Möbius
    /// inversion through the first row for self-dual sources.
    pub fn lambda_pair(&self, m: u64, n: u64) -> Result<f64, Gl3Error> {
        if let CoefficientSource::Ingested { max_m, max_n, entries, .. } = self {
            if *max_m > 1 {
                if m == 0 || n == 0 || m > *max_m || n > *max_n {
                    return Err(Gl3Error::OutOfRange {
                        n: m.max(n),
                        bound: (*max_m).max(*max_n),
                    });
                }
                return Ok(entries[((m - 1) * *max_n + (n - 1)) as usize]);
            }
        }
        if m == 1 {
            return self.lambda_1n(n);
        }
        if n == 1 {
            return self.lambda_1n(m);
        }
        let mut acc = 0.0;
        for d in divisors(gcd(m, n)) {
            let mu = mobius(d);
            if mu != 0 {
                acc += mu as f64 * self.lambda_1n(m / d)? * self.lambda_1n(n / d)?;
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Ramanujan-on-average profile
// ---------------------------------------------------------------------------

/// Profile of A(n) = Σ_{n₁²n₂ ≤ n} |λ(n₂, n₁)|² / (n₁²n₂) with envelope
/// diagnostics.
#[derive(Debug, Clone)]
pub struct RamanujanReport {
    /// A(n) sampled at the requested checkpoints.
    pub profile: Vec<(u64, f64)>,
    /// sup_{n ≤ x} A(n)/n^{0.1}.
    pub sup_ratio: f64,
    /// Fitted constant sup A(n)/(1 + ln n)^degree over the checkpoints.
    pub polylog_constant: f64,
    /// Residual power-law exponent after removing the polylog envelope of
    /// the source's Rankin–Selberg pole order.
    pub residual_exponent: f64,
    pub polylog_degree: u32,
}

/// Accumulate the Ramanujan-on-average profile up to x.
pub fn ramanujan_average_check(
    source: &CoefficientSource,
    x: u64,
    checkpoints: &[u64],
) -> Result<RamanujanReport, Gl3Error> {
    let mut events: Vec<(u64, f64)> = Vec::new();
    let mut n1 = 1u64;
    while n1 * n1 <= x {
        let n2_max = x / (n1 * n1);
        for n2 in 1..=n2_max {
            let lam = source.lambda_pair(n2, n1)?;
            events.push((n1 * n1 * n2, lam * lam / (n1 * n1 * n2) as f64));
        }
        n1 += 1;
    }
    events.sort_unstable_by_key(|e| e.0);
    let mut acc = 0.0;
    let mut sup_ratio = 0.0f64;
    let mut profile = Vec::with_capacity(checkpoints.len());
    let mut cp_iter = checkpoints.iter().peekable();
    for (key, val) in &events {
        while let Some(&&cp) = cp_iter.peek() {
            if cp < *key {
                profile.push((cp, acc));
                cp_iter.next();
            } else {
                break;
            }
        }
        acc += val;
        sup_ratio = sup_ratio.max(acc / (*key as f64).powf(0.1));
    }
    for &cp in cp_iter {
        profile.push((cp, acc));
    }
    let degree = source.rankin_pole_order();
    let pts: Vec<(f64, f64)> = profile.iter().map(|&(n, a)| (n as f64, a)).collect();
    let polylog_constant = pts
        .iter()
        .map(|&(n, a)| a / (1.0 + n.ln()).powi(degree as i32))
        .fold(0.0f64, f64::max);
    let residual_exponent = crate::envelope::residual_exponent(&pts, degree as f64);
    Ok(RamanujanReport {
        profile,
        sup_ratio,
        polylog_constant,
        residual_exponent,
        polylog_degree: degree,
    })
}

// ---------------------------------------------------------------------------
// File ingestion
// ---------------------------------------------------------------------------

fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if let Some(stripped) = s.strip_suffix('i') {
        // Split re±im at the last +/- that is not a leading sign or exponent.
        let bytes = stripped.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = stripped[..i].trim().parse().ok()?;
                let im_str = stripped[i..].trim();
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().ok()?
                };
                Some(Complex64::new(re, im))
            }
            None => {
                let im: f64 = stripped.trim().parse().ok()?;
                Some(Complex64::new(0.0, im))
            }
        }
    } else {
        s.parse().ok().map(|re| Complex64::new(re, 0.0))
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

/// Read a coefficient table: a `# alpha = a1,a2,a3` sidecar header, a
/// `m,n,value` header line, one row per pair. Validates λ(1,1) = 1,
/// Σα = 0 (tolerance 1e−6), duplicates and rectangular completeness.
pub fn ingest_coefficients(path: &Path) -> Result<CoefficientSource, Gl3Error> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut alpha: Option<[Complex64; 3]> = None;
    let mut header_seen = false;
    let mut cells: HashMap<(u64, u64), f64> = HashMap::new();
    let mut max_m = 0u64;
    let mut max_n = 0u64;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(spec) = rest.strip_prefix("alpha") {
                let spec = spec.trim_start().strip_prefix('=').ok_or(Gl3Error::Parse {
                    line: lineno,
                    msg: "expected '# alpha = a1,a2,a3'".into(),
                })?;
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() != 3 {
                    return Err(Gl3Error::Parse {
                        line: lineno,
                        msg: "alpha needs three comma-separated values".into(),
                    });
                }
                let mut a = [Complex64::new(0.0, 0.0); 3];
                for (i, p) in parts.iter().enumerate() {
                    a[i] = parse_complex(p).ok_or(Gl3Error::Parse {
                        line: lineno,
                        msg: format!("bad complex number '{p}'"),
                    })?;
                }
                alpha = Some(a);
            }
            continue;
        }
        if !header_seen {
            if trimmed != "m,n,value" {
                return Err(Gl3Error::Parse {
                    line: lineno,
                    msg: format!("expected header 'm,n,value', got '{trimmed}'"),
                });
            }
            header_seen = true;
            continue;
        }
        let parts: Vec<&str> = trimmed.split(',').collect();
        if parts.len() != 3 {
            return Err(Gl3Error::Parse {
                line: lineno,
                msg: "expected 'm,n,value'".into(),
            });
        }
        let m: u64 = parts[0].trim().parse().map_err(|_| Gl3Error::Parse {
            line: lineno,
            msg: format!("bad m '{}'", parts[0]),
        })?;
        let n: u64 = parts[1].trim().parse().map_err(|_| Gl3Error::Parse {
            line: lineno,
            msg: format!("bad n '{}'", parts[1]),
        })?;
        let value: f64 = parts[2].trim().parse().map_err(|_| Gl3Error::Parse {
            line: lineno,
            msg: format!("bad value '{}'", parts[2]),
        })?;
        if m == 0 || n == 0 {
            return Err(Gl3Error::Parse {
                line: lineno,
                msg: "indices are 1-based".into(),
            });
        }
        if cells.insert((m, n), value).is_some() {
            return Err(Gl3Error::Duplicate { m, n });
        }
        max_m = max_m.max(m);
        max_n = max_n.max(n);
    }
    let alpha = alpha.ok_or(Gl3Error::Parse {
        line: 0,
        msg: "missing '# alpha = ...' header".into(),
    })?;
    let sum = alpha[0] + alpha[1] + alpha[2];
    if sum.norm() > 1e-6 {
        return Err(Gl3Error::AlphaSum(sum.norm()));
    }
    let expected = (max_m * max_n) as usize;
    if cells.len() != expected {
        return Err(Gl3Error::Incomplete {
            expected,
            found: cells.len(),
            max_m,
            max_n,
        });
    }
    let lam11 = cells[&(1, 1)];
    if (lam11 - 1.0).abs() > 1e-9 {
        return Err(Gl3Error::NotNormalized(lam11));
    }
    let mut entries = vec![0.0; expected];
    for ((m, n), v) in cells {
        entries[((m - 1) * max_n + (n - 1)) as usize] = v;
    }
    Ok(CoefficientSource::Ingested {
        alpha,
        max_m,
        max_n,
        entries,
    })
}

/// Write the first-row table of a source in the ingestion format.
pub fn export_coefficients(
    source: &CoefficientSource,
    path: &Path,
    up_to: u64,
) -> Result<(), Gl3Error> {
    let mut file = std::fs::File::create(path)?;
    let a = source.alpha();
    writeln!(
        file,
        "# alpha = {},{},{}",
        format_complex(a[0]),
        format_complex(a[1]),
        format_complex(a[2])
    )?;
    writeln!(file, "m,n,value")?;
    for n in 1..=up_to.min(source.row_bound()) {
        writeln!(file, "1,{},{}", n, source.lambda_1n(n)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn d3_small_values() {
        assert_eq!(d3(1), 1);
        assert_eq!(d3(4), 6);
        for p in [2u64, 3, 5, 7, 97] {
            assert_eq!(d3(p), 3);
        }
        assert_eq!(d3(6), 9);
    }

    #[test]
    fn d3_sieve_matches_direct() {
        let sieve = d3_sieve(10).unwrap();
        assert_eq!(&sieve[1..], &[1, 3, 3, 6, 3, 9, 3, 10, 6, 9]);
        let sieve = d3_sieve(10_000).unwrap();
        for n in 1..=10_000u64 {
            assert_eq!(sieve[n as usize] as u64, d3(n), "n={n}");
        }
    }

    #[test]
    fn d3_hecke_multiplicativity() {
        let sieve = d3_sieve(10_000).unwrap();
        for m in 2..=100u64 {
            for n in 2..=(10_000 / m) {
                if gcd(m, n) == 1 {
                    assert_eq!(
                        sieve[(m * n) as usize],
                        sieve[m as usize] * sieve[n as usize],
                        "m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn d3_dirichlet_series_oracle() {
        // Σ d₃(n) n^{-2} → ζ(2)³.
        let sieve = d3_sieve(1_000_000).unwrap();
        let mut acc = 0.0;
        for n in 1..=1_000_000usize {
            acc += sieve[n] as f64 / (n as f64 * n as f64);
        }
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert_relative_eq!(acc, zeta2.powi(3), max_relative = 1e-3);
    }

    #[test]
    fn d3_partial_sum_asymptotic() {
        // Partial-summation oracle: Σ_{n≤N} d₃(n) = Σ_{a≤N} T(N/a) with
        // T(x) ≈ x ln x + (2γ−1)x (Dirichlet); agreement within 10%.
        let n = 1_000_000usize;
        let sieve = d3_sieve(n).unwrap();
        let total: f64 = sieve[1..].iter().map(|&v| v as f64).sum();
        let gamma = crate::special::EULER_GAMMA;
        let mut oracle = 0.0;
        for a in 1..=n {
            let x = n as f64 / a as f64;
            oracle += x * x.ln() + (2.0 * gamma - 1.0) * x;
        }
        assert!(
            (total - oracle).abs() <= 0.10 * oracle,
            "total={total} oracle={oracle}"
        );
    }

    #[test]
    fn ramanujan_tau_seed_values() {
        let tau = ramanujan_tau_table(20);
        assert_eq!(tau[1], 1);
        assert_eq!(tau[2], -24);
        assert_eq!(tau[3], 252);
        assert_eq!(tau[4], -1472);
        assert_eq!(tau[11], 534_612);
        // Hecke at 16 from the recursion on τ(2).
        assert_eq!(tau[16], 987_136);
    }

    #[test]
    fn sym_square_row_values() {
        let src = CoefficientSource::sym_square_weight12(100);
        assert_relative_eq!(src.lambda_1n(1).unwrap(), 1.0, epsilon = 1e-12);
        // A(1,4) = λ_f(16) + λ_f(1) = τ(16)/16^{11/2} + 1.
        let expect = 987_136.0 / (16f64).powf(5.5) + 1.0;
        assert_relative_eq!(src.lambda_1n(4).unwrap(), expect, epsilon = 1e-10);
    }

    #[test]
    fn eisenstein_pairs() {
        let src = CoefficientSource::eisenstein_d3(1000).unwrap();
        assert_relative_eq!(src.lambda_1n(6).unwrap(), 9.0, epsilon = 1e-12);
        // λ(2,2) = d₃(2)² − 1 = 8 by Möbius inversion.
        assert_relative_eq!(src.lambda_pair(2, 2).unwrap(), 8.0, epsilon = 1e-12);
        // Row/column reduction and symmetry.
        for m in 1..=30u64 {
            for n in 1..=30u64 {
                let a = src.lambda_pair(m, n).unwrap();
                let b = src.lambda_pair(n, m).unwrap();
                assert_relative_eq!(a, b, epsilon = 1e-12);
            }
            assert_relative_eq!(
                src.lambda_pair(1, m).unwrap(),
                src.lambda_1n(m).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ramanujan_profile_basics() {
        let src = CoefficientSource::eisenstein_d3(10_000).unwrap();
        let report = ramanujan_average_check(&src, 10_000, &[1, 10, 100, 1000, 10_000]).unwrap();
        // A(1) = 1, and the profile is nondecreasing.
        assert_relative_eq!(report.profile[0].1, 1.0, epsilon = 1e-12);
        for w in report.profile.windows(2) {
            assert!(w[1].1 >= w[0].1);
        }
        assert!(report.sup_ratio.is_finite());
        assert_eq!(report.polylog_degree, 9);
    }

    #[test]
    fn ingest_round_trip() {
        let dir = std::env::temp_dir().join("subconvex_gl3_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("d3_row.csv");
        let src = CoefficientSource::eisenstein_d3(200).unwrap();
        export_coefficients(&src, &path, 200).unwrap();
        let back = ingest_coefficients(&path).unwrap();
        assert_eq!(back.row_bound(), 200);
        for n in 1..=200u64 {
            assert_relative_eq!(
                back.lambda_1n(n).unwrap(),
                src.lambda_1n(n).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn ingest_rejections() {
        let dir = std::env::temp_dir().join("subconvex_gl3_test");
        std::fs::create_dir_all(&dir).unwrap();

        let single = dir.join("single.csv");
        std::fs::write(&single, "# alpha = 0,0,0\nm,n,value\n1,1,1.0\n").unwrap();
        let src = ingest_coefficients(&single).unwrap();
        assert_eq!(src.row_bound(), 1);

        let bad_alpha = dir.join("bad_alpha.csv");
        std::fs::write(&bad_alpha, "# alpha = 1,1,1\nm,n,value\n1,1,1.0\n").unwrap();
        assert!(matches!(
            ingest_coefficients(&bad_alpha),
            Err(Gl3Error::AlphaSum(_))
        ));

        let dup = dir.join("dup.csv");
        std::fs::write(&dup, "# alpha = 0,0,0\nm,n,value\n1,1,1.0\n1,1,2.0\n").unwrap();
        assert!(matches!(
            ingest_coefficients(&dup),
            Err(Gl3Error::Duplicate { .. })
        ));

        let malformed = dir.join("malformed.csv");
        std::fs::write(&malformed, "# alpha = 0,0,0\nm,n,value\n1,x,1.0\n").unwrap();
        assert!(matches!(
            ingest_coefficients(&malformed),
            Err(Gl3Error::Parse { .. })
        ));
    }

    #[test]
    fn complex_alpha_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("0.5+1.2i").unwrap(), Complex64::new(0.5, 1.2));
        assert_eq!(parse_complex("-0.5-2i").unwrap(), Complex64::new(-0.5, -2.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
    }
}
