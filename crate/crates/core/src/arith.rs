//! Exact modular arithmetic, Dirichlet characters and complete exponential
//! sums.
//!
//! Characters modulo a prime p are materialized as full value tables via a
//! primitive root, so evaluation inside hot sum loops is a table lookup.
//! All residue arithmetic (inverses, products, indices) is exact integer
//! arithmetic; only the final `e(x/c)` evaluation is floating point.
//!
//! Conventions:
//! * `gcd(0, n) = n`;
//! * sums over an empty modulus `c = 1` evaluate to the single term at the
//!   zero residue, so `S(a, b; 1) = 1`;
//! * p = 1 is admitted as a degenerate "trivial character" with χ ≡ 1 and
//!   Gauss sum τ = 1.

use num_complex::Complex64;
use thiserror::Error;

use crate::e;

#[derive(Debug, Error, PartialEq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue {a} is not coprime to modulus {q}")]
    NotCoprime { a: u64, q: u64 },
    #[error("congruence violated: m = {m} is not {residue} mod {q}")]
    CongruenceViolation { m: i64, residue: u64, q: u64 },
    #[error("invalid correlation parameters: {0}")]
    BadCorrelationParams(String),
}

// ---------------------------------------------------------------------------
// Elementary integer arithmetic
// ---------------------------------------------------------------------------

/// Binary gcd with the convention gcd(0, n) = n.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Iterated binary gcd of a triple.
pub fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    gcd(gcd(a, b), c)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse of a modulo m, when it exists.
pub fn mod_inv(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let a = a.rem_euclid(m as i64);
    let (mut r0, mut r1) = (m as i64, a);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        None
    } else {
        Some(s0.rem_euclid(m as i64) as u64)
    }
}

/// Distinct prime factors by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for p in distinct_prime_factors(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Smallest generator of (ℤ/pℤ)^× for prime p; p = 2 returns 1.
pub fn primitive_root(p: u64) -> Result<u64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    'outer: for g in 2..p {
        for &f in &factors {
            if mod_pow(g, order / f, p) == 1 {
                continue 'outer;
            }
        }
        return Ok(g);
    }
    unreachable!("every prime has a primitive root");
}

/// e(k/c) for k = 0..c.
pub fn unit_roots(c: u64) -> Vec<Complex64> {
    (0..c).map(|k| e(k as f64 / c as f64)).collect()
}

// ---------------------------------------------------------------------------
// Dirichlet characters
// ---------------------------------------------------------------------------

/// A Dirichlet character modulo a prime p (or the degenerate p = 1), stored
/// as a full value table over residue classes.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Index r: χ(g^k) = e(rk/(p−1)) for the fixed primitive root g.
    index: u64,
    order: u64,
    values: Vec<Complex64>,
    is_primitive: bool,
    is_principal: bool,
}

impl DirichletCharacter {
    /// The character of index r modulo prime p.
    pub fn new(p: u64, index: u64) -> Result<Self, ArithError> {
        if p == 1 {
            return Ok(Self::trivial());
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        let g = primitive_root(p)?;
        let group = p - 1;
        let r = index % group;
        let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
        let mut pow = 1u64; // g^k
        for k in 0..group {
            values[pow as usize] = e((r as f64 * k as f64 / group as f64).fract());
            pow = pow * g % p;
        }
        let order = group / gcd(r, group);
        Ok(DirichletCharacter {
            modulus: p,
            index: r,
            order,
            values,
            is_primitive: r != 0,
            is_principal: r == 0,
        })
    }

    /// The degenerate character modulo 1: χ ≡ 1.
    pub fn trivial() -> Self {
        DirichletCharacter {
            modulus: 1,
            index: 0,
            order: 1,
            values: vec![Complex64::new(1.0, 0.0)],
            is_primitive: false,
            is_principal: true,
        }
    }

    pub fn principal(p: u64) -> Result<Self, ArithError> {
        Self::new(p, 0)
    }

    /// The quadratic (Legendre-symbol) character, for odd primes.
    pub fn legendre(p: u64) -> Result<Self, ArithError> {
        if p == 2 || !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Self::new(p, (p - 1) / 2)
    }

    /// All p−1 characters modulo p.
    pub fn all(p: u64) -> Result<Vec<Self>, ArithError> {
        if p == 1 {
            return Ok(vec![Self::trivial()]);
        }
        (0..p - 1).map(|r| Self::new(p, r)).collect()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_primitive(&self) -> bool {
        self.is_primitive
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    /// χ(n), by table lookup of n mod p.
    #[inline]
    pub fn eval(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// The conjugate character χ̄.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        if self.modulus > 1 {
            out.index = (self.modulus - 1 - self.index) % (self.modulus - 1);
        }
        for v in &mut out.values {
            *v = v.conj();
        }
        out
    }
}

/// Gauss sum τ(χ) = Σ_{n mod p} χ(n) e(n/p). For p = 1 this is 1.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let p = chi.modulus();
    let roots = unit_roots(p);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..p {
        acc += chi.eval(n as i64) * roots[n as usize];
    }
    acc
}

// ---------------------------------------------------------------------------
// Kloosterman and correlation sums
// ---------------------------------------------------------------------------

/// Kloosterman sum S(a, b; c) = Σ_{x mod c, (x,c)=1} e((ax + b·x̄)/c).
///
/// The sum is invariant under conjugation (x ↦ −x), hence real; the tiny
/// imaginary part of the floating accumulation is dropped.
pub fn kloosterman(a: i64, b: i64, c: u64) -> f64 {
    if c == 1 {
        return 1.0;
    }
    let roots = unit_roots(c);
    let a = a.rem_euclid(c as i64) as u64;
    let b = b.rem_euclid(c as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 1..c {
        if let Some(xinv) = mod_inv(x as i64, c) {
            let idx = ((a as u128 * x as u128 + b as u128 * xinv as u128) % c as u128) as usize;
            acc += roots[idx];
        }
    }
    debug_assert!(acc.im.abs() < 1e-7 * (c as f64), "S({a},{b};{c}) im={}", acc.im);
    acc.re
}

/// Table of S(a, r; c) over r mod c.
pub fn kloosterman_table(a: i64, c: u64) -> Vec<f64> {
    if c == 1 {
        return vec![1.0];
    }
    let roots = unit_roots(c);
    let a = a.rem_euclid(c as i64) as u64;
    let mut acc = vec![Complex64::new(0.0, 0.0); c as usize];
    for x in 1..c {
        if let Some(xinv) = mod_inv(x as i64, c) {
            let base = (a * x) % c;
            for r in 0..c {
                let idx = ((base as u128 + r as u128 * xinv as u128) % c as u128) as usize;
                acc[r as usize] += roots[idx];
            }
        }
    }
    acc.iter().map(|z| z.re).collect()
}

/// Ramanujan sum c_q(n) = Σ*_{a mod q} e(na/q), by the divisor formula
/// Σ_{d | (q,n)} d·μ(q/d).
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    // gcd(q, n) with n taken mod q; gcd(q, 0) = q covers q | n.
    let g = gcd(q, n.unsigned_abs() % q);
    let mut acc = 0i64;
    for d in divisors(g) {
        acc += d as i64 * mobius(q / d);
    }
    acc
}

/// Direct enumeration oracle for [`ramanujan_sum`].
pub fn ramanujan_sum_direct(q: u64, n: i64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..q {
        if gcd(a, q) == 1 || q == 1 {
            acc += e((n as f64 * a as f64 / q as f64).fract());
        }
    }
    acc.re
}

/// Index data for the correlation sum 𝔠: moduli q, q′ with a common divisor
/// n₁, coprime residues a, a′ and an integer frequency n₂; the derived
/// modulus is B = qq′/n₁².
#[derive(Debug, Clone, Copy)]
pub struct CorrelationParams {
    pub q: u64,
    pub q2: u64,
    pub n1: u64,
    pub a: u64,
    pub a2: u64,
    pub n2: i64,
}

impl CorrelationParams {
    pub fn new(q: u64, q2: u64, n1: u64, a: u64, a2: u64, n2: i64) -> Result<Self, ArithError> {
        if n1 == 0 || q % n1 != 0 || q2 % n1 != 0 {
            return Err(ArithError::BadCorrelationParams(format!(
                "n1 = {n1} must divide both q = {q} and q' = {q2}"
            )));
        }
        if gcd(a, q) != 1 {
            return Err(ArithError::NotCoprime { a, q });
        }
        if gcd(a2, q2) != 1 {
            return Err(ArithError::NotCoprime { a: a2, q: q2 });
        }
        Ok(CorrelationParams { q, q2, n1, a, a2, n2 })
    }

    /// B = qq′/n₁².
    pub fn b_modulus(&self) -> u64 {
        (self.q / self.n1) * (self.q2 / self.n1)
    }
}

/// The correlation sum
/// 𝔠 = Σ_{r mod B} S(ā, r; q/n₁) · S(ā′, r; q′/n₁) · e(n₂ r / B),
/// evaluated exactly (brute force over r, with per-modulus Kloosterman
/// tables).
pub fn correlation_sum(params: &CorrelationParams) -> Complex64 {
    let c = params.q / params.n1;
    let c2 = params.q2 / params.n1;
    let b = params.b_modulus();
    let abar = mod_inv(params.a as i64, params.q).expect("coprimality checked") as i64;
    let a2bar = mod_inv(params.a2 as i64, params.q2).expect("coprimality checked") as i64;
    let t1 = kloosterman_table(abar, c);
    let t2 = kloosterman_table(a2bar, c2);
    let roots = unit_roots(b);
    let n2 = params.n2.rem_euclid(b as i64) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..b {
        let phase = roots[((n2 as u128 * r as u128) % b as u128) as usize];
        acc += t1[(r % c) as usize] * t2[(r % c2) as usize] * phase;
    }
    acc
}

// ---------------------------------------------------------------------------
// ψ-factor of the Poisson dual sum
// ---------------------------------------------------------------------------

/// The arithmetic factor ψ(m, q, a) of the GL(1) Poisson dual sum:
/// χ(q)·χ̄(m) when (p, q) = 1, and χ(q/p^ℓ)·χ̄((m − ap)/p^ℓ) when p^ℓ ‖ q.
///
/// Requires gcd(a, q) = 1 and m ≡ ap (mod q).
pub fn psi_factor(
    m: i64,
    q: u64,
    a: u64,
    chi: &DirichletCharacter,
) -> Result<Complex64, ArithError> {
    if gcd(a, q) != 1 && q > 1 {
        return Err(ArithError::NotCoprime { a, q });
    }
    let p = chi.modulus();
    let ap = (a as i64) * (p as i64);
    if (m - ap).rem_euclid(q as i64) != 0 {
        return Err(ArithError::CongruenceViolation {
            m,
            residue: (ap).rem_euclid(q as i64) as u64,
            q,
        });
    }
    if p == 1 || q % p != 0 {
        return Ok(chi.eval(q as i64) * chi.conj().eval(m));
    }
    let mut ell = 0u32;
    let mut q_rest = q;
    while q_rest % p == 0 {
        q_rest /= p;
        ell += 1;
    }
    let p_ell = p.pow(ell) as i64;
    if (m - ap) % p_ell != 0 {
        return Err(ArithError::CongruenceViolation {
            m,
            residue: (ap).rem_euclid(p_ell as u64 as i64) as u64,
            q: p_ell as u64,
        });
    }
    Ok(chi.eval(q_rest as i64) * chi.conj().eval((m - ap) / p_ell))
}

// ---------------------------------------------------------------------------
// gcd sums
// ---------------------------------------------------------------------------

/// Exact value of Σ_{a≤X, b≤Y, c≤Z} gcd(a,b,c) / (a^α b^β c^γ).
pub fn gcd_triple_sum(x: u64, y: u64, z: u64, alpha: f64, beta: f64, gamma: f64) -> f64 {
    let mut acc = 0.0;
    for a in 1..=x {
        let fa = (a as f64).powf(-alpha);
        for b in 1..=y {
            let g_ab = gcd(a, b);
            let fab = fa * (b as f64).powf(-beta);
            for c in 1..=z {
                acc += gcd(g_ab, c) as f64 * fab * (c as f64).powf(-gamma);
            }
        }
    }
    acc
}

/// Reference envelope X^{1−α} Y^{1−β} Z^{1−γ} (XYZ)^ε for the gcd sum.
pub fn gcd_triple_bound(x: u64, y: u64, z: u64, alpha: f64, beta: f64, gamma: f64, eps: f64) -> f64 {
    let (x, y, z) = (x as f64, y as f64, z as f64);
    x.powf(1.0 - alpha) * y.powf(1.0 - beta) * z.powf(1.0 - gamma) * (x * y * z).powf(eps)
}
