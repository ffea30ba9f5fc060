//! Complex scalar kernel: gamma, rising factorials, and real-base powers.
//!
//! Everything here is pure and reentrant; these are the primitives every
//! other module leans on.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Double-precision complex scalar used throughout the crate.
pub type Complex = Complex64;

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

// Lanczos approximation, g = 607/128, 15 coefficients (the Godfrey set
// used by GSL and Boost). Delivers ~15 significant digits in double
// precision over the right half-plane.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEFFS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_4e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_274e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

fn lanczos_sum(z: Complex) -> Complex {
    let mut acc = Complex::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    acc
}

fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// sin(πz) with the real part reduced modulo 1 first, so accuracy near
/// integers does not degrade with |Re z|.
fn sin_pi(z: Complex) -> Complex {
    let n = z.re.round();
    let reduced = Complex::new(z.re - n, z.im);
    let s = (reduced * std::f64::consts::PI).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Gamma function on ℂ minus the non-positive integers.
///
/// Lanczos approximation for Re z ≥ 0.5, reflection formula otherwise.
/// Relative error is ≤ 1e-12 for |z| ≤ 50.
pub fn complex_gamma(z: Complex) -> Result<Complex> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole(z));
    }
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let reflected = gamma_right_half(Complex::new(1.0, 0.0) - z);
        return Ok(Complex::new(std::f64::consts::PI, 0.0) / (sin_pi(z) * reflected));
    }
    Ok(gamma_right_half(z))
}

fn gamma_right_half(z: Complex) -> Complex {
    let zm1 = z - 1.0;
    let base = zm1 + LANCZOS_G + 0.5;
    // Γ(z) = √(2π) · base^(z−0.5) · e^(−base) · A_g(z−1)
    let half = Complex::new(zm1.re + 0.5, zm1.im);
    SQRT_TWO_PI * base.powc(half) * (-base).exp() * lanczos_sum(zm1)
}

/// Rising factorial (s)_n = s (s+1) ⋯ (s+n−1); the empty product is 1.
pub fn pochhammer(s: Complex, n: usize) -> Complex {
    let mut prod = Complex::new(1.0, 0.0);
    for j in 0..n {
        prod *= s + j as f64;
    }
    prod
}

/// a^w for a real positive base, via the real natural logarithm. There is
/// no branch ambiguity because the base is real and positive.
pub fn real_base_pow(a: f64, w: Complex) -> Result<Complex> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("real power base must be positive, got {a}")));
    }
    if a == 1.0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    Ok((w * a.ln()).exp())
}

/// exp(u) − 1 without cancellation for small |u|.
pub(crate) fn expm1_complex(u: Complex) -> Complex {
    if u.norm() < 0.25 {
        // Σ_{k≥1} u^k / k!, truncated where the tail drops below 1e-18·|u|.
        let mut term = u;
        let mut acc = u;
        for k in 2..=14 {
            term *= u / k as f64;
            acc += term;
        }
        acc
    } else {
        u.exp() - 1.0
    }
}
