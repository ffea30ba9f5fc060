//! Dirichlet characters mod k and two independent evaluators for L(s,χ):
//! the Hurwitz-zeta combination L(s,χ) = k^{−s} Σ_r χ(r) ζ(s, r/k), and a
//! per-residue Euler–Maclaurin route assembled from the truncated
//! Dirichlet series plus correction terms.
//!
//! The group (ℤ/kℤ)* is decomposed by CRT into cyclic factors (primitive
//! roots for odd prime powers, {−1, 5} for 2^e with e ≥ 3); characters are
//! indexed by exponent tuples in mixed-radix order, the principal
//! character first.

use num_complex::Complex64;

use crate::bernoulli::shared_cache;
use crate::error::Error;
use crate::hurwitz::{hurwitz_zeta_reg, EMParams, HurwitzEval};
use crate::numerics::{expm1_complex, Complex};
use crate::Result;

/// Table cap for character groups.
const MODULUS_CAP: u64 = 1_000_000;

/// A character χ mod k stored as its full period-k value table.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    values: Vec<Complex>,
    principal: bool,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position in the canonical enumeration order of the group.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// χ(n), for any n (reduced mod k).
    pub fn eval(&self, n: u64) -> Complex {
        self.values[(n % self.modulus) as usize]
    }

    /// The period-k value table χ(0), …, χ(k−1).
    pub fn values(&self) -> &[Complex] {
        &self.values
    }
}

/// All φ(k) characters mod k.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    characters: Vec<DirichletCharacter>,
}

impl CharacterGroup {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn principal(&self) -> &DirichletCharacter {
        &self.characters[0]
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primitive root mod p^e for odd prime p.
fn primitive_root_odd(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let factors = prime_factors(phi_p);
    let mut g = 2u64;
    loop {
        if factors.iter().all(|q| mod_pow(g, phi_p / q, p) != 1) {
            break;
        }
        g += 1;
    }
    if e == 1 {
        return g;
    }
    // g stays primitive mod p^e unless g^{p−1} ≡ 1 (mod p²)
    let p2 = p * p;
    if mod_pow(g, p - 1, p2) == 1 {
        g + p
    } else {
        g
    }
}

/// One cyclic factor of (ℤ/kℤ)*: the component modulus and a discrete-log
/// table residue → exponent.
struct CyclicFactor {
    component: u64,
    order: u64,
    log: Vec<u64>, // indexed by residue mod component; only units filled
}

fn cyclic_factors(k: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, e) in factorize(k) {
        let q = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => {
                    // ⟨3⟩ of order 2 mod 4
                    let mut log = vec![0u64; 4];
                    log[3] = 1;
                    out.push(CyclicFactor { component: 4, order: 2, log });
                }
                _ => {
                    // ⟨−1⟩ × ⟨5⟩, orders 2 and 2^{e−2}
                    let half = q / 4;
                    let mut sign_log = vec![0u64; q as usize];
                    let mut five_log = vec![0u64; q as usize];
                    for s1 in 0..2u64 {
                        let mut v = if s1 == 0 { 1 } else { q - 1 };
                        for t in 0..half {
                            sign_log[v as usize] = s1;
                            five_log[v as usize] = t;
                            v = v * 5 % q;
                        }
                    }
                    out.push(CyclicFactor { component: q, order: 2, log: sign_log });
                    out.push(CyclicFactor { component: q, order: half, log: five_log });
                }
            }
        } else {
            let g = primitive_root_odd(p, e);
            let order = q / p * (p - 1);
            let mut log = vec![0u64; q as usize];
            let mut v = 1u64;
            for t in 0..order {
                log[v as usize] = t;
                v = v * g % q;
            }
            out.push(CyclicFactor { component: q, order, log });
        }
    }
    out
}

/// Construct the full character group mod k.
pub fn character_group(k: u64) -> Result<CharacterGroup> {
    if k == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if k > MODULUS_CAP {
        return Err(Error::CapExceeded { requested: k as usize, cap: MODULUS_CAP as usize });
    }
    let factors = cyclic_factors(k);
    let phi: u64 = factors.iter().map(|f| f.order).product();

    // exponent tuple of every unit
    let unit_logs: Vec<Option<Vec<u64>>> = (0..k)
        .map(|n| {
            if gcd(n, k) == 1 {
                Some(factors.iter().map(|f| f.log[(n % f.component) as usize]).collect())
            } else {
                None
            }
        })
        .collect();

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut characters = Vec::with_capacity(phi as usize);
    for index in 0..phi {
        // mixed-radix digits of the character index, first factor fastest
        let mut digits = Vec::with_capacity(factors.len());
        let mut rest = index;
        for f in &factors {
            digits.push(rest % f.order);
            rest /= f.order;
        }
        let values: Vec<Complex> = unit_logs
            .iter()
            .map(|logs| match logs {
                None => Complex64::new(0.0, 0.0),
                Some(ls) => {
                    let mut phase = 0.0f64;
                    for ((t, l), f) in digits.iter().zip(ls.iter()).zip(factors.iter()) {
                        phase += (t * l % f.order) as f64 / f.order as f64;
                    }
                    // quarter-turn phases are exact in binary; snap them so
                    // real characters come out exactly ±1
                    match phase.fract() {
                        p if p == 0.0 => Complex64::new(1.0, 0.0),
                        p if p == 0.25 => Complex64::new(0.0, 1.0),
                        p if p == 0.5 => Complex64::new(-1.0, 0.0),
                        p if p == 0.75 => Complex64::new(0.0, -1.0),
                        p => {
                            let angle = two_pi * p;
                            Complex64::new(angle.cos(), angle.sin())
                        }
                    }
                }
            })
            .collect();
        characters.push(DirichletCharacter {
            modulus: k,
            index: index as usize,
            values,
            principal: index == 0,
        });
    }
    Ok(CharacterGroup { modulus: k, characters })
}

/// Which of the two independent evaluation routes to use for L(s,χ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LMethod {
    /// k^{−s} Σ_r χ(r) ζ(s, r/k), with the per-residue Hurwitz poles
    /// cancelled analytically against Σχ(r) before any subtraction.
    Hurwitz,
    /// Truncated Dirichlet series plus per-residue Euler–Maclaurin
    /// corrections at a shared (M, K).
    EulerMaclaurin,
}

/// L(s,χ) with estimated error ≤ tol.
///
/// s = 1 is a pole for the principal character; for non-principal χ the
/// value at s = 1 is finite and both routes evaluate it by the
/// pole-cancelling pairing.
pub fn dirichlet_l(
    s: Complex,
    chi: &DirichletCharacter,
    method: LMethod,
    tol: f64,
) -> Result<Complex> {
    Ok(dirichlet_l_eval(s, chi, method, tol)?.value)
}

/// As [`dirichlet_l`], returning the error estimate alongside.
pub fn dirichlet_l_eval(
    s: Complex,
    chi: &DirichletCharacter,
    method: LMethod,
    tol: f64,
) -> Result<HurwitzEval> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument s = {s}")));
    }
    if chi.is_principal() && s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleAtOne);
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    match method {
        LMethod::Hurwitz => l_by_hurwitz(s, chi, tol),
        LMethod::EulerMaclaurin => l_by_euler_maclaurin(s, chi, tol),
    }
}

/// Σ_r χ(r) x_r^{1−s} / (s−1) with the pole removed analytically for
/// non-principal χ: subtract anchor^{1−s}·Σχ(r) (= 0) and use expm1.
fn paired_pole_sum(
    s: Complex,
    chi: &DirichletCharacter,
    bases: &[(u64, f64)], // (r, x_r)
    anchor: f64,
) -> Complex {
    let one_minus_s = Complex64::new(1.0, 0.0) - s;
    let at_one = s.re == 1.0 && s.im == 0.0;
    let anchor_pow = (one_minus_s * anchor.ln()).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for &(r, x) in bases {
        let c = chi.eval(r);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ratio_log = (x / anchor).ln();
        if at_one {
            acc += c * ratio_log; // lim (x^{1−s} − anchor^{1−s})/(s−1) = −ln(x/anchor)
        } else {
            acc += c * expm1_complex(one_minus_s * ratio_log);
        }
    }
    if at_one {
        -acc * anchor_pow
    } else {
        acc * anchor_pow / (s - 1.0)
    }
}

fn l_by_hurwitz(s: Complex, chi: &DirichletCharacter, tol: f64) -> Result<HurwitzEval> {
    let k = chi.modulus();
    let kf = k as f64;
    let k_pow = (-s * kf.ln()).exp(); // k^{−s}
    let amp = k_pow.norm();
    let active: Vec<u64> = (1..=k).filter(|r| gcd(*r, k) == 1).collect();
    let tol_r = (tol / (1.2 * amp * active.len() as f64)).max(1e-15);

    let mut reg_sum = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    let mut params = EMParams { head_terms: 1, order: 1, target_tol: tol };
    for &r in &active {
        let eval = hurwitz_zeta_reg(s, r as f64 / kf, tol_r)?;
        reg_sum += chi.eval(r) * eval.value;
        est += eval.est_error * amp;
        params = eval.params_used;
    }

    let pole = if chi.is_principal() {
        // keep the genuine pole explicit; s ≠ 1 was checked upstream
        let one_minus_s = Complex64::new(1.0, 0.0) - s;
        let mut acc = Complex64::new(0.0, 0.0);
        for &r in &active {
            acc += chi.eval(r) * (one_minus_s * (r as f64 / kf).ln()).exp();
        }
        acc / (s - 1.0)
    } else {
        let bases: Vec<(u64, f64)> = active.iter().map(|&r| (r, r as f64 / kf)).collect();
        paired_pole_sum(s, chi, &bases, 1.0)
    };

    Ok(HurwitzEval {
        value: k_pow * (reg_sum + pole),
        est_error: est,
        params_used: EMParams { target_tol: tol, ..params },
    })
}

fn l_by_euler_maclaurin(s: Complex, chi: &DirichletCharacter, tol: f64) -> Result<HurwitzEval> {
    let k = chi.modulus();
    let kf = k as f64;
    let cache = shared_cache();
    let k_pow = (-s * kf.ln()).exp(); // k^{−s}
    let amp = k_pow.norm();
    let active: Vec<u64> = (1..=k).filter(|r| gcd(*r, k) == 1).collect();
    let tol_r = (tol / (1.2 * amp * active.len() as f64)).max(1e-15);

    // shared (M, K) sized for the hardest residue a = 1/k
    let probe = hurwitz_zeta_reg(s, 1.0 / kf, tol_r)?;
    let (m, korder) = (probe.params_used.head_terms, probe.params_used.order);

    // truncated Dirichlet series Σ_{n ≤ kM} χ(n) n^{−s}; equals
    // k^{−s} Σ_r χ(r)·[head of ζ(s, r/k)] but assembled over the integers
    let mut series = Complex64::new(0.0, 0.0);
    for n in 1..=(k * m as u64) {
        let c = chi.eval(n);
        if c != Complex64::new(0.0, 0.0) {
            series += c * (-s * (n as f64).ln()).exp();
        }
    }

    // paired pole part at the per-residue anchors M + r/k
    let bases: Vec<(u64, f64)> = active.iter().map(|&r| (r, m as f64 + r as f64 / kf)).collect();
    let pole = if chi.is_principal() {
        let one_minus_s = Complex64::new(1.0, 0.0) - s;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(r, x) in &bases {
            acc += chi.eval(r) * (one_minus_s * x.ln()).exp();
        }
        acc / (s - 1.0)
    } else {
        paired_pole_sum(s, chi, &bases, m as f64 + 1.0)
    };

    // half terms and Bernoulli corrections per residue
    let mut corr_total = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    for &(r, x) in &bases {
        let xp = (-s * x.ln()).exp();
        let w = 1.0 / (x * x);
        let mut rising_scaled = s * w;
        let mut corr = Complex64::new(0.0, 0.0);
        for l in 1..=korder {
            corr += cache.over_factorial(2 * l).expect("order within cache") * rising_scaled;
            if l < korder {
                let j = (2 * l - 1) as f64;
                rising_scaled = rising_scaled * ((s + j) * (s + j + 1.0)) * w;
            }
        }
        corr_total += chi.eval(r) * (0.5 * xp + corr * xp * x);
        est += remainder_bound(s, x, korder) * amp;
    }

    Ok(HurwitzEval {
        value: series + k_pow * (pole + corr_total),
        est_error: est,
        params_used: EMParams { head_terms: m, order: korder, target_tol: tol },
    })
}

/// |R_K| at anchor x (same shape as the hurwitz engine bound, local form).
fn remainder_bound(s: Complex, x: f64, k: usize) -> f64 {
    let cache = shared_cache();
    let exponent = s.re + (2 * k) as f64 + 1.0;
    let mut rise = 1.0f64;
    for j in 0..(2 * k + 1) {
        rise *= (s + j as f64).norm();
    }
    let c = cache.even_poly_sup(2 * k + 2).expect("order within cache");
    let mut fact = 1.0f64;
    for i in 2..=(2 * k + 2) {
        fact *= i as f64;
    }
    let fac = 1.0 + (s + (2 * k + 1) as f64).norm() / exponent;
    c / fact * rise * x.powf(-exponent) * fac
}
