//! Exact Bernoulli numbers, Bernoulli polynomials, and the periodic
//! function ψ_k(x) = B_k({x}) used by the Euler–Maclaurin engine.
//!
//! Bernoulli numbers are kept as exact big-integer rationals (the values
//! grow super-exponentially and a floating recursion loses every digit
//! near n ≈ 40); they are converted to f64 only at use sites.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Exact arbitrary-precision fraction, stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Default table size; q_n and Euler–Maclaurin orders stay well below
/// this at desk scale.
pub const DEFAULT_N_MAX: usize = 128;

/// Bernoulli numbers B_0 .. B_{n_max}, computed once at construction.
///
/// Uses the convention B_1 = −1/2 (only even indices matter downstream).
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    values: Vec<Rational>,
    floats: Vec<f64>,
    over_factorial: Vec<f64>,
    n_max: usize,
}

impl BernoulliCache {
    /// Build the table up to index `n_max` from the recursion
    /// B_0 = 1, (n+1) B_n = −Σ_{k<n} C(n+1,k) B_k.
    pub fn new(n_max: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(n_max + 1);
        values.push(Rational::one());
        for n in 1..=n_max {
            if n > 1 && n % 2 == 1 {
                values.push(Rational::zero());
                continue;
            }
            let mut acc = Rational::zero();
            let mut binom = BigInt::one(); // C(n+1, 0)
            for (k, b) in values.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * Rational::from_integer(binom.clone());
                }
                // C(n+1, k+1) = C(n+1, k) · (n+1−k) / (k+1)
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            values.push(-acc / Rational::from_integer(BigInt::from(n + 1)));
        }

        let floats: Vec<f64> = values
            .iter()
            .map(|q| q.to_f64().expect("Bernoulli number fits in f64"))
            .collect();
        let mut factorial = Rational::one();
        let over_factorial: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(n, q)| {
                if n > 0 {
                    factorial *= Rational::from_integer(BigInt::from(n));
                }
                (q / &factorial).to_f64().expect("B_n/n! fits in f64")
            })
            .collect();

        BernoulliCache { values, floats, over_factorial, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.n_max {
            Err(Error::CapExceeded { requested: n, cap: self.n_max })
        } else {
            Ok(())
        }
    }

    /// Exact B_n.
    pub fn number(&self, n: usize) -> Result<&Rational> {
        self.check(n)?;
        Ok(&self.values[n])
    }

    /// B_n rounded to f64.
    pub fn number_f64(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.floats[n])
    }

    /// B_n / n! rounded to f64 (the combination the Euler–Maclaurin and
    /// q_n closed forms actually consume; computed exactly first so n! never
    /// overflows on its own).
    pub fn over_factorial(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.over_factorial[n])
    }

    /// sup over [0,1] of |B_k(x)| for even k ≥ 2; equals |B_k|.
    pub fn even_poly_sup(&self, k: usize) -> Result<f64> {
        debug_assert!(k >= 2 && k % 2 == 0);
        Ok(self.number_f64(k)?.abs())
    }

    /// B_k(x) from the expansion Σ_j C(k,j) B_j x^{k−j}.
    pub fn polynomial(&self, k: usize, x: f64) -> Result<f64> {
        self.check(k)?;
        let mut pow_table = vec![1.0; k + 1];
        for i in 1..=k {
            pow_table[i] = pow_table[i - 1] * x;
        }
        let mut acc = 0.0;
        let mut binom = 1.0; // C(k, 0)
        for j in 0..=k {
            if self.floats[j] != 0.0 {
                acc += binom * self.floats[j] * pow_table[k - j];
            }
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        Ok(acc)
    }

    /// ψ_k(x) = B_k({x}), the period-1 kernel of the Euler–Maclaurin
    /// remainder.
    pub fn periodic(&self, k: usize, x: f64) -> Result<f64> {
        let frac = x - x.floor();
        self.polynomial(k, frac)
    }
}

static SHARED: OnceLock<BernoulliCache> = OnceLock::new();

/// Process-wide cache with the default size, built on first use.
pub fn shared_cache() -> &'static BernoulliCache {
    SHARED.get_or_init(|| BernoulliCache::new(DEFAULT_N_MAX))
}

/// Exact B_n from the shared cache.
pub fn bernoulli_number(n: usize) -> Result<Rational> {
    shared_cache().number(n).cloned()
}

/// B_k(x) from the shared cache.
pub fn bernoulli_polynomial(k: usize, x: f64) -> Result<f64> {
    shared_cache().polynomial(k, x)
}

/// B_k({x}) from the shared cache.
pub fn periodic_bernoulli(k: usize, x: f64) -> Result<f64> {
    shared_cache().periodic(k, x)
}
