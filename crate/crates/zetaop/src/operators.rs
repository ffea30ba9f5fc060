//! The shift-operator machinery: forward coefficients p_n(s), inverse
//! coefficients q_n(s), the operator G[f](s) = Σ p_n(s) f(s+n) with
//! certified adaptive truncation on the zeta family, finite truncations
//! G_N, the convolution inverse at non-positive integers, and the
//! divergence diagnostics that stand in for the non-convergent
//! differential-operator form.

use num_complex::Complex64;

use crate::bernoulli::shared_cache;
use crate::characters::{gcd, DirichletCharacter};
use crate::diagnostics::{SeriesDiagnostics, Verdict};
use crate::error::Error;
use crate::hurwitz::{
    hurwitz_zeta_reg, taylor_coefficients_with_radius, zeta_family, ZetaFamily,
};
use crate::numerics::{complex_gamma, real_base_pow, Complex};
use crate::Result;

/// Default cap on partial-sum growth before a diverging verdict.
const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Monotone-growth window for divergence evidence.
const GROWTH_WINDOW: usize = 8;

// ---------------------------------------------------------------------------
// Coefficients
// ---------------------------------------------------------------------------

/// p_n(s) = (s)_n / (n+1)! — equal to 1 at n = 0 — computed as the exact
/// ratio product Π_{j<n} (s+j)/(j+2) so large n stays in range.
pub fn p_coeff(n: usize, s: Complex) -> Complex {
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        prod *= (s + j as f64) / (j + 2) as f64;
    }
    prod
}

/// Continuous extension p(x, s) = Γ(s+x) / (Γ(x+2) Γ(s)) for real x ≥ 0,
/// restricting to p_n(s) at integer x.
pub fn p_continuous(x: f64, s: Complex) -> Result<Complex> {
    if x < 0.0 {
        return Err(Error::Domain(format!("continuous index must be ≥ 0, got {x}")));
    }
    let num = complex_gamma(s + x)?;
    let den = complex_gamma(Complex64::new(x + 2.0, 0.0))? * complex_gamma(s)?;
    Ok(num / den)
}

/// Evaluation route for q_n(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMethod {
    /// q_n(s) = −Σ_{k<n} q_k(s) p_{n−k}(s+k), memoised.
    Recursive,
    /// q_n(s) = B_n/n! · (s)_n.
    Closed,
}

/// q_n(s) by the requested method.
pub fn q_coeff(n: usize, s: Complex, method: QMethod) -> Result<Complex> {
    match method {
        QMethod::Closed => q_closed(n, s),
        QMethod::Recursive => {
            let mut seq = CoefficientSeq::q_recursive(s);
            Ok(seq.value(n))
        }
    }
}

fn q_closed(n: usize, s: Complex) -> Result<Complex> {
    let cache = shared_cache();
    if n > cache.n_max() {
        return Err(Error::CapExceeded { requested: n, cap: cache.n_max() });
    }
    let b = cache.number_f64(n)?;
    if b == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // B_n · Π_{j<n} (s+j)/(j+1) keeps intermediates in range
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        prod *= (s + j as f64) / (j + 1) as f64;
    }
    Ok(prod * b)
}

/// Which coefficient family a [`CoefficientSeq`] extends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffKind {
    P,
    Q,
}

/// Lazily extended coefficient sequence anchored at s.
///
/// The q sequence uses the convolution recursion and keeps the triangular
/// table of p_{j}(s+k) values it needs; the p sequence is a running
/// product.
#[derive(Debug, Clone)]
pub struct CoefficientSeq {
    kind: CoeffKind,
    anchor: Complex,
    values: Vec<Complex>,
    // P: the last ratio-product state; Q: p_j(s+k) rows, row k holding j ≥ 1
    p_state: Complex,
    p_rows: Vec<Vec<Complex>>,
}

impl CoefficientSeq {
    pub fn p(anchor: Complex) -> Self {
        CoefficientSeq {
            kind: CoeffKind::P,
            anchor,
            values: vec![Complex64::new(1.0, 0.0)],
            p_state: Complex64::new(1.0, 0.0),
            p_rows: Vec::new(),
        }
    }

    pub fn q_recursive(anchor: Complex) -> Self {
        CoefficientSeq {
            kind: CoeffKind::Q,
            anchor,
            values: vec![Complex64::new(1.0, 0.0)],
            p_state: Complex64::new(0.0, 0.0),
            p_rows: vec![Vec::new()],
        }
    }

    pub fn kind(&self) -> CoeffKind {
        self.kind
    }

    pub fn anchor(&self) -> Complex {
        self.anchor
    }

    /// Coefficient at index n, extending the sequence as needed.
    pub fn value(&mut self, n: usize) -> Complex {
        while self.values.len() <= n {
            self.extend_one();
        }
        self.values[n]
    }

    pub fn computed(&self) -> &[Complex] {
        &self.values
    }

    fn extend_one(&mut self) {
        let t = self.values.len();
        match self.kind {
            CoeffKind::P => {
                // p_t = p_{t−1} · (s+t−1)/(t+1)
                self.p_state *= (self.anchor + (t - 1) as f64) / (t + 1) as f64;
                self.values.push(self.p_state);
            }
            CoeffKind::Q => {
                // grow each p row by one entry, then convolve
                for (k, row) in self.p_rows.iter_mut().enumerate() {
                    let j = row.len() + 1; // next p index for anchor s+k
                    let prev = if j == 1 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        row[j - 2]
                    };
                    let sk = self.anchor + k as f64;
                    row.push(prev * (sk + (j - 1) as f64) / (j + 1) as f64);
                }
                self.p_rows.push(Vec::new());
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, q) in self.values.iter().enumerate() {
                    // p_{t−k}(s+k) sits at position t−k−1 of row k
                    acc += q * self.p_rows[k][t - k - 1];
                }
                self.values.push(-acc);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The operator G
// ---------------------------------------------------------------------------

/// Operand families for [`apply_g`]. The zeta and L families carry enough
/// structure for removable-term limits and certified tail bounds; custom
/// operands get heuristic stopping only.
pub enum GOperand<'a> {
    /// f(z) = ζ(z, a) − a^{−z}.
    ZetaFamily { a: f64 },
    /// f(z) = k^z L(z,χ) − Σ_r χ(r)(k/r)^z = Σ_r χ(r)[ζ(z, r/k) − (r/k)^{−z}].
    LFamily { chi: &'a DirichletCharacter },
    /// f(z) = x^z for a fixed base 0 < x < 1.
    PowerBase { x: f64 },
    /// Arbitrary function with declared non-removable poles.
    Custom {
        f: &'a dyn Fn(Complex) -> Result<Complex>,
        poles: &'a [Complex],
    },
}

/// G[f](s) = Σ_{n≥0} p_n(s) f(s+n), summed adaptively.
///
/// On the zeta and L families the truncation is certified by the
/// absolute-convergence tail bound (term majorant
/// (σ+n+a)/(σ+n−1)·(1+a)^{−σ−n} times |p_n|); shifts with s+n = 1 follow
/// the removable-limit rule.
/// Custom operands stop on two stable partial sums and are flagged
/// uncertified.
pub fn apply_g(operand: &GOperand, s: Complex, tol: f64, n_cap: usize) -> Result<SeriesDiagnostics> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    match operand {
        GOperand::ZetaFamily { a } => apply_g_zeta(s, *a, tol, n_cap),
        GOperand::LFamily { chi } => apply_g_l(s, chi, tol, n_cap),
        GOperand::PowerBase { x } => apply_g_power(s, *x, tol, n_cap),
        GOperand::Custom { f, poles } => apply_g_custom(s, f, poles, tol, n_cap),
    }
}

/// Majorant of |p_n(s)|: Π_{j<n} (|s|+j)/(j+2).
fn p_abs_majorant_next(state: f64, s_abs: f64, n: usize) -> f64 {
    // advances Π for index n → n+1
    state * (s_abs + n as f64) / (n + 2) as f64
}

/// Geometric tail certificate for Σ_{n>N} |p_n(s)| |f(s+n)| from the
/// absolute-convergence bound |f(s+n)| ≤ (σ+n+a)/(σ+n−1) · (1+a)^{−(σ+n)}
/// (head term plus integral tail of Σ_{m≥1}(m+a)^{−σ−n}); the sum is
/// majorised by m_{N+1}/(1 − ρ̄) when the step ratio ρ̄ < 1. `a_sup` is the
/// largest shift among the summed families and `weight` multiplies the
/// whole bound (φ(k) for the L family).
fn lemma2_tail(
    s: Complex,
    base: f64,
    a_sup: f64,
    p_abs_next: f64,
    n_next: usize,
    weight: f64,
) -> Option<f64> {
    let sigma = s.re;
    let nf = n_next as f64;
    if sigma + nf - 1.0 <= 0.2 {
        return None;
    }
    let u_sup = ((s.norm() + nf) / (nf + 2.0)).max(1.0);
    let rho = u_sup / base;
    if rho >= 0.995 {
        return None;
    }
    let v = (sigma + nf + a_sup) / (sigma + nf - 1.0);
    let m_next = p_abs_next * v * base.powf(-(sigma + nf));
    Some(weight * m_next / (1.0 - rho))
}

/// Removable-limit term at the shift with s+n = 1 on the zeta family:
/// lim_{z→s} p_n(z) ζ(z+n, a) − p_n(s) a^{−(z+n)} = p_{n−1}(s)/(n+1) − p_n(s)/a.
fn removable_term(s: Complex, n: usize, a: f64) -> Complex {
    debug_assert!(n >= 1);
    p_coeff(n - 1, s) / (n + 1) as f64 - p_coeff(n, s) / a
}

struct GRun {
    partial_sums: Vec<Complex>,
    term_magnitudes: Vec<f64>,
    term_ratios: Vec<f64>,
}

impl GRun {
    fn new() -> Self {
        GRun { partial_sums: Vec::new(), term_magnitudes: Vec::new(), term_ratios: Vec::new() }
    }

    fn push(&mut self, term: Complex) {
        let prev = self.partial_sums.last().copied().unwrap_or(Complex64::new(0.0, 0.0));
        self.partial_sums.push(prev + term);
        let mag = term.norm();
        if let Some(last) = self.term_magnitudes.last() {
            if *last > 0.0 {
                self.term_ratios.push(mag / last);
            }
        }
        self.term_magnitudes.push(mag);
    }

    fn sum(&self) -> Complex {
        self.partial_sums.last().copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn into_diagnostics(self, verdict: Verdict, certified: bool) -> SeriesDiagnostics {
        SeriesDiagnostics {
            partial_sums: self.partial_sums,
            term_ratios: self.term_ratios,
            term_magnitudes: self.term_magnitudes,
            verdict,
            certified,
        }
    }
}

/// Monotone |partial sums| growth past the threshold over a trailing window.
fn growth_evidence(partials: &[Complex], threshold: f64) -> Option<String> {
    if partials.len() < GROWTH_WINDOW + 1 {
        return None;
    }
    let tail = &partials[partials.len() - GROWTH_WINDOW - 1..];
    if tail.windows(2).all(|w| w[1].norm() > w[0].norm())
        && tail.last().unwrap().norm() > threshold
    {
        Some(format!(
            "|partial sums| grew monotonically over the last {GROWTH_WINDOW} terms and exceeded {threshold:e}"
        ))
    } else {
        None
    }
}

/// Expected certified truncation length for a geometric-ish tail with
/// ratio rho; sizes the per-term evaluation budget.
fn n_estimate(rho: f64, s_norm: f64) -> f64 {
    let base = 36.8 / (-rho.ln()).max(1e-3);
    (base + 2.0 * s_norm + 16.0).clamp(48.0, 4096.0)
}

/// Evaluate the family, relaxing the inner tolerance up to tol/4 when the
/// noise floor rejects it.
fn family_with_ladder(
    s: Complex,
    a: f64,
    n_max: usize,
    inner_tol: &mut f64,
    tol: f64,
) -> Result<ZetaFamily> {
    loop {
        match zeta_family(s, a, n_max, *inner_tol) {
            Ok(f) => return Ok(f),
            Err(Error::UnattainableTolerance { best, .. }) if *inner_tol < tol * 0.25 => {
                *inner_tol = (*inner_tol * 10.0).max(best * 1.2).min(tol * 0.25);
            }
            Err(e) => return Err(e),
        }
    }
}

fn apply_g_zeta(s: Complex, a: f64, tol: f64, n_cap: usize) -> Result<SeriesDiagnostics> {
    if s.re == 1.0 && s.im == 0.0 {
        // the n = 0 term ζ(s,a) − a^{−s} is itself the pole
        return Err(Error::PoleAtOne);
    }
    // integer s ≤ 0 terminates exactly: p_n(s) = 0 for n ≥ max(1, 1−s)
    let termination = zero_tail_index(s);
    let mut n_max = 48usize.min(n_cap);
    let n_est = n_estimate(1.0 / (1.0 + a), s.norm());
    let mut inner_tol = (tol / (8.0 * n_est)).max(1e-14);

    'retry: loop {
        let fam = family_with_ladder(s, a, n_max, &mut inner_tol, tol)?;
        let mut run = GRun::new();
        let mut p = Complex64::new(1.0, 0.0); // p_n(s)
        let mut p_abs = 1.0; // Π (|s|+j)/(j+2)
        let mut eval_err = 0.0;
        for n in 0..=n_max {
            let term = if fam.pole_index == Some(n) {
                removable_term(s, n, a)
            } else {
                p * fam.values[n]
            };
            eval_err += p.norm() * fam.bounds[n];
            run.push(term);

            if let Some(t0) = termination {
                // p_n(s) vanishes for n > t0 and the removable limit at
                // n = t0 has been taken: the tail is exactly zero
                if n >= t0 {
                    let value = run.sum();
                    return Ok(run.into_diagnostics(
                        Verdict::Converged { value, n_used: n },
                        true,
                    ));
                }
            }

            let p_abs_next = p_abs_majorant_next(p_abs, s.norm(), n);
            if fam.pole_index.map_or(true, |pi| n >= pi) {
                if let Some(tail) = lemma2_tail(s, 1.0 + a, a, p_abs_next, n + 1, 1.0) {
                    if tail + eval_err <= tol {
                        let value = run.sum();
                        return Ok(run.into_diagnostics(
                            Verdict::Converged { value, n_used: n },
                            true,
                        ));
                    }
                }
            }
            p *= (s + n as f64) / (n + 2) as f64;
            p_abs = p_abs_next;
        }
        // did the evaluation budget dominate? tighten once, then grow N
        if eval_err > tol * 0.5 && inner_tol > 1.2e-14 {
            inner_tol = (inner_tol * 1e-2).max(1e-14);
            continue 'retry;
        }
        if n_max < n_cap {
            n_max = (n_max * 2).min(n_cap);
            continue 'retry;
        }
        if eval_err > tol * 0.5 {
            // the per-term noise floor, not the tail, blocks the certificate
            return Err(Error::UnattainableTolerance { requested: tol, best: eval_err });
        }
        return Err(Error::NonConvergence { cap: n_cap, last_change: run_last_change(&run) });
    }
}

fn run_last_change(run: &GRun) -> f64 {
    let n = run.partial_sums.len();
    if n >= 2 {
        (run.partial_sums[n - 1] - run.partial_sums[n - 2]).norm()
    } else {
        f64::INFINITY
    }
}

/// First index from which p_n(s) vanishes identically (integer s ≤ 0).
fn zero_tail_index(s: Complex) -> Option<usize> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        Some((1.0 - s.re) as usize)
    } else {
        None
    }
}

fn apply_g_l(s: Complex, chi: &DirichletCharacter, tol: f64, n_cap: usize) -> Result<SeriesDiagnostics> {
    if chi.is_principal() && s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleAtOne);
    }
    let k = chi.modulus();
    let kf = k as f64;
    let active: Vec<u64> = (1..=k).filter(|r| gcd(*r, k) == 1).collect();
    let phi = active.len() as f64;
    let mut n_max = 48usize.min(n_cap);
    let n_est = n_estimate(kf / (kf + 1.0), s.norm());
    let mut inner_tol = (tol / (8.0 * phi * n_est)).max(1e-14);

    'retry: loop {
        let mut fams: Vec<(u64, ZetaFamily)> = Vec::with_capacity(active.len());
        for &r in &active {
            let fam = family_with_ladder(s, r as f64 / kf, n_max, &mut inner_tol, tol)?;
            fams.push((r, fam));
        }
        let pole_index = fams[0].1.pole_index;
        let mut run = GRun::new();
        let mut p = Complex64::new(1.0, 0.0);
        let mut p_abs = 1.0;
        let mut eval_err = 0.0;
        for n in 0..=n_max {
            let term = if pole_index == Some(n) {
                if chi.is_principal() {
                    return Err(Error::UndefinedTerm { index: n });
                }
                // Σχ(r)·[ζ(z, r/k) − (r/k)^{−z}] extends to z = 1 because
                // the residues cancel against Σχ(r) = 0
                let mut limit = Complex64::new(0.0, 0.0);
                for &r in &active {
                    let a = r as f64 / kf;
                    let reg = hurwitz_zeta_reg(Complex64::new(1.0, 0.0), a, inner_tol)?.value;
                    limit += chi.eval(r) * (reg - 1.0 / a - a.ln());
                }
                p * limit
            } else {
                let mut f_n = Complex64::new(0.0, 0.0);
                for (r, fam) in &fams {
                    f_n += chi.eval(*r) * fam.values[n];
                    eval_err += p.norm() * fam.bounds[n];
                }
                p * f_n
            };
            run.push(term);

            let p_abs_next = p_abs_majorant_next(p_abs, s.norm(), n);
            if pole_index.map_or(true, |pi| n >= pi) {
                if let Some(tail) = lemma2_tail(s, 1.0 + 1.0 / kf, 1.0, p_abs_next, n + 1, phi) {
                    if tail + eval_err <= tol {
                        let value = run.sum();
                        return Ok(run.into_diagnostics(
                            Verdict::Converged { value, n_used: n },
                            true,
                        ));
                    }
                }
            }
            p *= (s + n as f64) / (n + 2) as f64;
            p_abs = p_abs_next;
        }
        if eval_err > tol * 0.5 && inner_tol > 1.2e-14 {
            inner_tol = (inner_tol * 1e-2).max(1e-14);
            continue 'retry;
        }
        if n_max < n_cap {
            n_max = (n_max * 2).min(n_cap);
            continue 'retry;
        }
        if eval_err > tol * 0.5 {
            return Err(Error::UnattainableTolerance { requested: tol, best: eval_err });
        }
        return Err(Error::NonConvergence { cap: n_cap, last_change: run_last_change(&run) });
    }
}

fn apply_g_power(s: Complex, x: f64, tol: f64, n_cap: usize) -> Result<SeriesDiagnostics> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("power base must lie in (0,1), got {x}")));
    }
    let mut run = GRun::new();
    let mut p = Complex64::new(1.0, 0.0);
    let mut p_abs = 1.0;
    let mut x_pow = real_base_pow(x, s)?; // x^{s+n}
    for n in 0..=n_cap {
        run.push(p * x_pow);
        let p_abs_next = p_abs_majorant_next(p_abs, s.norm(), n);
        // tail Σ |p| x^{σ+n} against the geometric majorant
        let nf = (n + 1) as f64;
        let u_sup = ((s.norm() + nf) / (nf + 2.0)).max(1.0);
        let rho = u_sup * x;
        if rho < 0.995 {
            let tail = p_abs_next * x.powf(s.re + nf) / (1.0 - rho);
            if tail <= tol {
                let value = run.sum();
                return Ok(run.into_diagnostics(Verdict::Converged { value, n_used: n }, true));
            }
        }
        p *= (s + n as f64) / (n + 2) as f64;
        p_abs = p_abs_next;
        x_pow *= x;
    }
    Err(Error::NonConvergence { cap: n_cap, last_change: run_last_change(&GRun::new()) })
}

fn apply_g_custom(
    s: Complex,
    f: &dyn Fn(Complex) -> Result<Complex>,
    poles: &[Complex],
    tol: f64,
    n_cap: usize,
) -> Result<SeriesDiagnostics> {
    let mut run = GRun::new();
    let mut p = Complex64::new(1.0, 0.0);
    for n in 0..=n_cap {
        let z = s + n as f64;
        if poles.iter().any(|pole| (z - pole).norm() == 0.0) {
            return Err(Error::UndefinedTerm { index: n });
        }
        run.push(p * f(z)?);
        let len = run.partial_sums.len();
        if len >= 3 {
            let d1 = (run.partial_sums[len - 1] - run.partial_sums[len - 2]).norm();
            let d2 = (run.partial_sums[len - 2] - run.partial_sums[len - 3]).norm();
            if d1 <= tol && d2 <= tol {
                let value = run.sum();
                // two-successive-sums heuristic: not certified
                return Ok(run.into_diagnostics(Verdict::Converged { value, n_used: n }, false));
            }
        }
        if let Some(evidence) = growth_evidence(&run.partial_sums, DIVERGENCE_THRESHOLD) {
            return Ok(run.into_diagnostics(Verdict::Diverging { evidence }, false));
        }
        p *= (s + n as f64) / (n + 2) as f64;
    }
    Err(Error::NonConvergence { cap: n_cap, last_change: run_last_change(&run) })
}

// ---------------------------------------------------------------------------
// Truncations
// ---------------------------------------------------------------------------

/// One row of the truncation study: G_N against the closed reference.
#[derive(Debug, Clone, Copy)]
pub struct TruncationResult {
    pub n: usize,
    pub value: Complex,
    pub reference: Complex,
    pub abs_error: f64,
}

/// G_N(s,a) = Σ_{n≤N} p_n(s)[ζ(s+n,a) − a^{−(s+n)}] with the
/// removable-limit rule at integer s ≤ 0; reference 1/((s−1)a^{s−1}).
pub fn truncated_g(s: Complex, a: f64, n: usize) -> Result<TruncationResult> {
    if s.re == 1.0 && s.im == 0.0 {
        return Err(Error::PoleAtOne);
    }
    // tolerance ladder: prefer tight evaluation, degrade where the noise
    // floor forbids it
    let mut fam = None;
    for tol in [1e-13, 1e-11, 1e-9, 1e-7] {
        match zeta_family(s, a, n, tol) {
            Ok(f) => {
                fam = Some(f);
                break;
            }
            Err(Error::UnattainableTolerance { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let fam = fam.ok_or(Error::UnattainableTolerance { requested: 1e-7, best: f64::NAN })?;
    let value = truncated_g_from_family(s, a, n, &fam.values, fam.pole_index);
    let reference = real_base_pow(a, Complex64::new(1.0, 0.0) - s)? / (s - 1.0);
    Ok(TruncationResult { n, value, reference, abs_error: (value - reference).norm() })
}

/// Shared assembly of G_N from precomputed family values (renderer path).
pub(crate) fn truncated_g_from_family(
    s: Complex,
    a: f64,
    n: usize,
    values: &[Complex],
    pole_index: Option<usize>,
) -> Complex {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for j in 0..=n {
        if pole_index == Some(j) {
            acc += removable_term(s, j, a);
        } else {
            acc += p * values[j];
        }
        p *= (s + j as f64) / (j + 2) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// The inverse operator
// ---------------------------------------------------------------------------

/// G⁻¹[f](−M) = Σ_{n=0}^{M} q_n(−M) f(−M+n), the finite sum the inverse
/// series collapses to at non-positive integers, with
/// q_n(−M) = (−1)^n B_n M!/(n!(M−n)!) evaluated exactly before rounding.
pub fn apply_g_inverse_at_neg_int(
    f: &dyn Fn(Complex) -> Result<Complex>,
    m: usize,
) -> Result<Complex> {
    let cache = shared_cache();
    if m > cache.n_max() {
        return Err(Error::CapExceeded { requested: m, cap: cache.n_max() });
    }
    let s = Complex64::new(-(m as f64), 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut binom = 1.0f64; // C(M, n)
    for n in 0..=m {
        let b = cache.number_f64(n)?;
        if b != 0.0 {
            let q = if n % 2 == 0 { b * binom } else { -b * binom };
            acc += q * f(s + n as f64)?;
        }
        binom = binom * (m - n) as f64 / (n + 1) as f64;
    }
    Ok(acc)
}

/// Partial sums of the inverse series Σ q_n(s) f(s+n) with even-index term
/// ratios (odd Bernoulli numbers vanish, so odd terms are identically
/// zero). At s = −M the coefficients vanish for n > M and f is never
/// evaluated there; the series terminates exactly.
pub fn g_inverse_partial_sums(
    f: &dyn Fn(Complex) -> Result<Complex>,
    s: Complex,
    n_terms: usize,
) -> Result<SeriesDiagnostics> {
    let cache = shared_cache();
    if n_terms > cache.n_max() {
        return Err(Error::CapExceeded { requested: n_terms, cap: cache.n_max() });
    }
    let termination = if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        Some((-s.re) as usize)
    } else {
        None
    };

    let mut partial_sums = Vec::with_capacity(n_terms + 1);
    let mut magnitudes = Vec::with_capacity(n_terms + 1);
    let mut even_mags: Vec<f64> = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0); // Π (s+j)/(j+1)
    for n in 0..=n_terms {
        let beyond = termination.map_or(false, |t| n > t);
        let term = if beyond {
            Complex64::new(0.0, 0.0)
        } else {
            let b = cache.number_f64(n)?;
            if b == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                b * prod * f(s + n as f64)?
            }
        };
        acc += term;
        partial_sums.push(acc);
        magnitudes.push(term.norm());
        if n % 2 == 0 {
            even_mags.push(term.norm());
        }
        prod *= (s + n as f64) / (n + 1) as f64;
    }
    let term_ratios: Vec<f64> = even_mags
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .collect();

    let verdict = if termination.is_some() {
        Verdict::Converged { value: acc, n_used: termination.unwrap().min(n_terms) }
    } else {
        let growing = term_ratios.len() >= 4
            && term_ratios.last().unwrap() > &1.0
            && term_ratios[term_ratios.len() - 1] > 4.0 * term_ratios[0].max(1e-300);
        if growing {
            Verdict::Diverging {
                evidence: format!(
                    "even-term ratios grow without bound (last {:.3e} vs first {:.3e}), consistent with |(s+2n)(s+2n−1)|/(2πa)²",
                    term_ratios.last().unwrap(),
                    term_ratios[0]
                ),
            }
        } else if let Some(evidence) = growth_evidence(&partial_sums, DIVERGENCE_THRESHOLD) {
            Verdict::Diverging { evidence }
        } else {
            Verdict::Diverging {
                evidence: format!("no stabilisation within {n_terms} terms"),
            }
        }
    };
    let certified = termination.is_some();
    Ok(SeriesDiagnostics { partial_sums, term_ratios, term_magnitudes: magnitudes, verdict, certified })
}

// ---------------------------------------------------------------------------
// Taylor-shift diagnostics (the differential-operator view)
// ---------------------------------------------------------------------------

/// Partial sums of Σ_k D^k[ζ(s,a) − a^{−s}]/k! · n^k, the shift
/// exp(nD) written as a Taylor series at s. Converges only inside the
/// disc n < |s−1| (the pole of ζ caps the radius).
pub fn taylor_shift_partial(
    s: Complex,
    a: f64,
    n_shift: usize,
    k_terms: usize,
    tol: f64,
) -> Result<SeriesDiagnostics> {
    if s.re == 1.0 && s.im == 0.0 {
        // the k = 0 term is already undefined at the pole
        return Ok(SeriesDiagnostics {
            partial_sums: Vec::new(),
            term_ratios: Vec::new(),
            term_magnitudes: Vec::new(),
            verdict: Verdict::UndefinedTerm { index: 0 },
            certified: false,
        });
    }
    let radius_cap = (s - Complex64::new(1.0, 0.0)).norm();
    // ring radius: keep coefficient noise (n/r)^k bounded for shifts near
    // the convergence radius, while staying inside analyticity
    let r = if n_shift == 0 {
        0.5 * radius_cap
    } else {
        (1.25 * n_shift as f64).clamp(0.5 * radius_cap, 0.9 * radius_cap)
    };
    let tol_ring = (0.1 * tol).max(1e-13);
    let zeta_coeffs = taylor_coefficients_with_radius(s, a, k_terms, tol_ring, r)?;

    // coefficients of f = ζ(·,a) − a^{−·}: subtract (−ln a)^k a^{−s}/k!
    let a_pow = real_base_pow(a, -s)?;
    let neg_ln_a = -a.ln();
    let mut head_coeff = a_pow; // (−ln a)^k a^{−s} / k!
    let nf = n_shift as f64;
    let mut n_pow = 1.0f64;

    let mut partial_sums = Vec::with_capacity(k_terms + 1);
    let mut magnitudes = Vec::with_capacity(k_terms + 1);
    let mut term_ratios = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut stabilised: Option<usize> = None;
    for (k, c) in zeta_coeffs.iter().enumerate() {
        let coeff = c - head_coeff;
        let term = coeff * n_pow;
        acc += term;
        partial_sums.push(acc);
        let mag = term.norm();
        if let Some(last) = magnitudes.last() {
            let last: &f64 = last;
            if *last > 0.0 {
                term_ratios.push(mag / last);
            }
        }
        magnitudes.push(mag);

        if stabilised.is_none() && k >= 2 {
            let d1 = (partial_sums[k] - partial_sums[k - 1]).norm();
            let d2 = (partial_sums[k - 1] - partial_sums[k - 2]).norm();
            if d1 <= tol && d2 <= tol {
                stabilised = Some(k);
            }
        }
        head_coeff = head_coeff * neg_ln_a / (k + 1) as f64;
        n_pow *= nf;
    }

    let len = partial_sums.len();
    let verdict = if let Some(evidence) = growth_evidence(&partial_sums, DIVERGENCE_THRESHOLD) {
        Verdict::Diverging { evidence }
    } else if let Some(k) = stabilised {
        Verdict::Converged { value: partial_sums[len - 1], n_used: k }
    } else {
        let window = GROWTH_WINDOW.min(len.saturating_sub(1));
        let tail_growing = window >= 4
            && magnitudes[len - window..].windows(2).all(|w| w[1] >= w[0] * 1.02);
        if tail_growing {
            Verdict::Diverging {
                evidence: format!(
                    "term magnitudes still growing after {len} terms (shift {n_shift} ≥ radius {radius_cap:.3})"
                ),
            }
        } else {
            Verdict::Diverging {
                evidence: format!("no stabilisation within {len} terms"),
            }
        }
    };
    Ok(SeriesDiagnostics {
        partial_sums,
        term_ratios,
        term_magnitudes: magnitudes,
        verdict,
        certified: false,
    })
}

// ---------------------------------------------------------------------------
// The coefficient series Σ p_n(s)
// ---------------------------------------------------------------------------

/// Partial sums of Σ p_n(s): converges exactly for integer s ≤ 0 (the
/// coefficients vanish), grows without bound for Re s ≥ 1.
pub fn p_series_diagnostics(s: Complex, n_terms: usize) -> SeriesDiagnostics {
    let termination = zero_tail_index(s);
    let mut partial_sums = Vec::with_capacity(n_terms + 1);
    let mut magnitudes = Vec::with_capacity(n_terms + 1);
    let mut term_ratios = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for n in 0..=n_terms {
        acc += p;
        partial_sums.push(acc);
        let mag = p.norm();
        if n > 0 && magnitudes[n - 1] > 0.0 {
            term_ratios.push(mag / magnitudes[n - 1]);
        }
        magnitudes.push(mag);
        p *= (s + n as f64) / (n + 2) as f64;
    }

    let verdict = if let Some(t0) = termination {
        if n_terms + 1 > t0 {
            Verdict::Converged { value: acc, n_used: t0.saturating_sub(1) }
        } else {
            Verdict::Diverging { evidence: format!("run of {n_terms} terms too short to reach the zero tail at {t0}") }
        }
    } else {
        let len = partial_sums.len();
        let window = 16usize.min(len / 2).max(2);
        let monotone = partial_sums[len - window..]
            .windows(2)
            .all(|w| w[1].norm() > w[0].norm());
        let last_deltas_small = len >= 3
            && (partial_sums[len - 1] - partial_sums[len - 2]).norm()
                <= 1e-12 * partial_sums[len - 1].norm().max(1.0)
            && (partial_sums[len - 2] - partial_sums[len - 3]).norm()
                <= 1e-12 * partial_sums[len - 1].norm().max(1.0);
        if last_deltas_small {
            Verdict::Converged { value: acc, n_used: len - 1 }
        } else if monotone {
            Verdict::Diverging {
                evidence: format!(
                    "|partial sums| increased monotonically over the last {window} terms with no stabilisation"
                ),
            }
        } else {
            Verdict::Diverging { evidence: format!("no stabilisation within {n_terms} terms") }
        }
    };
    let certified = matches!(verdict, Verdict::Converged { .. }) && termination.is_some();
    SeriesDiagnostics { partial_sums, term_ratios, term_magnitudes: magnitudes, verdict, certified }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::hurwitz_zeta;
    use crate::numerics::pochhammer;

    fn c(re: f64, im: f64) -> Complex {
        Complex64::new(re, im)
    }

    #[test]
    fn p_coefficients() {
        for &s in &[c(0.3, 0.0), c(2.0, 0.0), c(-3.0, 0.0), c(1.5, -2.0)] {
            assert_eq!(p_coeff(0, s), c(1.0, 0.0));
        }
        // p_n(1) = 1/(n+1), p_n(2) = 1
        for n in 1..=40usize {
            assert!((p_coeff(n, c(1.0, 0.0)).re - 1.0 / (n as f64 + 1.0)).abs() < 1e-15);
            assert_eq!(p_coeff(n, c(2.0, 0.0)), c(1.0, 0.0));
        }
        assert_eq!(p_coeff(4, c(-3.0, 0.0)), c(0.0, 0.0));
        // direct product cross-check
        for n in [1usize, 3, 7, 19] {
            let s = c(-0.7, 1.3);
            let mut fact = 1.0f64;
            for i in 2..=(n + 1) {
                fact *= i as f64;
            }
            let direct = pochhammer(s, n) / fact;
            assert!((p_coeff(n, s) - direct).norm() < 1e-13 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn p_continuous_matches_discrete() {
        for &s in &[c(2.5, 0.0), c(0.5, 1.0), c(3.0, -2.0)] {
            for n in [0usize, 1, 2, 5, 9] {
                let cont = p_continuous(n as f64, s).unwrap();
                let disc = p_coeff(n, s);
                assert!((cont - disc).norm() < 1e-9 * disc.norm().max(1.0), "n={n} s={s}");
            }
        }
        assert!(p_continuous(-0.5, c(2.0, 0.0)).is_err());
    }

    #[test]
    fn q_coefficients_and_prop13() {
        // q_0 = 1, q_1 = −s/2, q_2 = s(s+1)/12
        for &s in &[c(2.0, 0.0), c(-0.5, 0.0), c(1.0, 2.0), c(-3.7, 0.0)] {
            for method in [QMethod::Recursive, QMethod::Closed] {
                assert_eq!(q_coeff(0, s, method).unwrap(), c(1.0, 0.0));
                let q1 = q_coeff(1, s, method).unwrap();
                assert!((q1 + s / 2.0).norm() < 1e-14, "{method:?}");
                let q2 = q_coeff(2, s, method).unwrap();
                assert!((q2 - s * (s + 1.0) / 12.0).norm() < 1e-13, "{method:?}");
            }
            // closed vs recursive through n = 30, relative to the running
            // coefficient scale (odd-n values are exactly zero)
            let mut scale = 1.0f64;
            for n in 0..=30usize {
                let closed = q_coeff(n, s, QMethod::Closed).unwrap();
                let rec = q_coeff(n, s, QMethod::Recursive).unwrap();
                scale = scale.max(closed.norm());
                assert!(
                    (closed - rec).norm() <= 1e-9 * scale,
                    "n={n} s={s}: {closed} vs {rec}"
                );
            }
        }
    }

    #[test]
    fn inverse_convolution_identity() {
        // Σ_{k≤n} q_k(s) p_{n−k}(s+k) = δ_{n,0}, with closed-form q. The
        // floating check is relative to the largest convolution term (the
        // Bernoulli growth pushes terms past 1e10 by n = 30); the exact
        // δ_{n,0} statement is verified in integer arithmetic by the
        // acceptance suite.
        for &s in &[c(2.0, 0.0), c(-0.5, 0.0), c(1.0, 2.0), c(-3.7, 0.0)] {
            for n in 0..=30usize {
                let mut acc = c(0.0, 0.0);
                let mut biggest = 0.0f64;
                for k in 0..=n {
                    let term = q_coeff(k, s, QMethod::Closed).unwrap()
                        * p_coeff(n - k, s + k as f64);
                    biggest = biggest.max(term.norm());
                    acc += term;
                }
                let want = if n == 0 { 1.0 } else { 0.0 };
                assert!(
                    (acc - c(want, 0.0)).norm() < 1e-9 * biggest.max(1.0),
                    "s={s} n={n}: {acc} (scale {biggest:e})"
                );
            }
        }
    }

    #[test]
    fn coefficient_seq_lazy_extension() {
        let mut p = CoefficientSeq::p(c(2.0, 0.0));
        assert_eq!(p.value(10), c(1.0, 0.0));
        assert_eq!(p.computed().len(), 11);
        assert_eq!(p.kind(), CoeffKind::P);
        let mut q = CoefficientSeq::q_recursive(c(-1.0, 0.0));
        assert!((q.value(1) - c(0.5, 0.0)).norm() < 1e-15); // −s/2 at s = −1
        assert_eq!(q.anchor(), c(-1.0, 0.0));
    }

    #[test]
    fn apply_g_on_riemann_family() {
        // G[ζ(·,1) − 1](2) = 1/(2−1) = 1
        let d = apply_g(&GOperand::ZetaFamily { a: 1.0 }, c(2.0, 0.0), 1e-12, 4096).unwrap();
        match d.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - c(1.0, 0.0)).norm() < 1e-11, "{value}");
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }
        assert!(d.certified);
    }

    #[test]
    fn apply_g_removable_terms_at_negative_integers() {
        // hand-checked: G[ζ − 1](−2) = −1/3 with the n = 3 limit term 1/12
        let d = apply_g(&GOperand::ZetaFamily { a: 1.0 }, c(-2.0, 0.0), 1e-12, 4096).unwrap();
        match d.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - c(-1.0 / 3.0, 0.0)).norm() < 1e-11, "{value}");
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }
        // and G[ζ − 1](0) = −1
        let d0 = apply_g(&GOperand::ZetaFamily { a: 1.0 }, c(0.0, 0.0), 1e-12, 4096).unwrap();
        match d0.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - c(-1.0, 0.0)).norm() < 1e-11, "{value}");
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn apply_g_geometric_oracle() {
        // Σ p_n(s) x^{s+n} = x^s · ((1−x)^{1−s} − 1)/(x(s−1)); at s = 3,
        // x = 1/2 the bracket is 3, so the G value is 0.375
        let d = apply_g(&GOperand::PowerBase { x: 0.5 }, c(3.0, 0.0), 1e-12, 4096).unwrap();
        match d.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - c(0.375, 0.0)).norm() < 1e-11, "{value}");
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }
        for &(x, s) in &[(0.1, c(3.0, 0.0)), (0.25, c(2.0, 1.0)), (0.5, c(-1.5, 0.0))] {
            let d = apply_g(&GOperand::PowerBase { x }, s, 1e-11, 4096).unwrap();
            let value = match d.verdict {
                Verdict::Converged { value, .. } => value,
                ref v => panic!("unexpected verdict {v:?}"),
            };
            let bracket = ((1.0 - x).powf(1.0) as f64).ln(); // placeholder, replaced below
            let _ = bracket;
            let closed = real_base_pow(1.0 - x, c(1.0, 0.0) - s).unwrap() - 1.0;
            let want = real_base_pow(x, s).unwrap() * closed / (x * (s - 1.0));
            assert!((value - want).norm() < 1e-10, "x={x} s={s}: {value} vs {want}");
        }
    }

    #[test]
    fn apply_g_custom_heuristic() {
        // a plainly convergent custom operand: f(z) = 2^{−z}
        let f = |z: Complex| real_base_pow(2.0, -z);
        let d = apply_g(
            &GOperand::Custom { f: &f, poles: &[] },
            c(3.0, 0.0),
            1e-12,
            4096,
        )
        .unwrap();
        assert!(!d.certified);
        assert!(matches!(d.verdict, Verdict::Converged { .. }));
        // declared pole is reported
        let g = |z: Complex| Ok(1.0 / (z - 5.0));
        let err = apply_g(
            &GOperand::Custom { f: &g, poles: &[c(5.0, 0.0)] },
            c(2.0, 0.0),
            1e-10,
            64,
        );
        assert!(matches!(err, Err(Error::UndefinedTerm { index: 3 })));
    }

    #[test]
    fn truncated_g_examples() {
        let t0 = truncated_g(c(2.0, 0.0), 1.0, 0).unwrap();
        let zeta2 = hurwitz_zeta(c(2.0, 0.0), 1.0, 1e-13).unwrap().value;
        assert!((t0.value - (zeta2 - 1.0)).norm() < 1e-12);
        assert_eq!(t0.reference, c(1.0, 0.0));
        assert!((t0.abs_error - (t0.value - t0.reference).norm()).abs() < 1e-15);

        let t60 = truncated_g(c(2.0, 0.0), 1.0, 60).unwrap();
        assert!((t60.value - c(1.0, 0.0)).norm() < 1e-10, "{}", t60.abs_error);

        // contract: any non-pole input yields a finite report
        let wild = truncated_g(c(0.5, 14.0), 1.0, 10).unwrap();
        assert!(wild.value.re.is_finite() && wild.value.im.is_finite());
        assert!(wild.abs_error.is_finite());

        assert!(matches!(truncated_g(c(1.0, 0.0), 1.0, 5), Err(Error::PoleAtOne)));
    }

    #[test]
    fn inverse_at_negative_integers() {
        // f = 1/(z−1): every truncation value is −1
        let f = |z: Complex| Ok(1.0 / (z - 1.0));
        for m in 0..=6usize {
            let v = apply_g_inverse_at_neg_int(&f, m).unwrap();
            assert!((v - c(-1.0, 0.0)).norm() < 1e-12, "M={m}: {v}");
        }
    }

    #[test]
    fn g_inverse_terminates_at_negative_integers() {
        let f = |z: Complex| Ok(1.0 / (z - 1.0));
        let d = g_inverse_partial_sums(&f, c(-3.0, 0.0), 20).unwrap();
        assert!(d.certified);
        match &d.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - c(-1.0, 0.0)).norm() < 1e-12);
            }
            v => panic!("unexpected verdict {v:?}"),
        }
        // terms beyond n = 3 are exactly zero
        for n in 4..=20 {
            assert_eq!(d.term_magnitudes[n], 0.0);
        }
    }

    #[test]
    fn g_inverse_ratio_growth() {
        // f(z) = 1/((z−1)a^{z−1}) at a = 1, s = 2.5: ratios grow ~ n²
        let f = |z: Complex| Ok(1.0 / (z - 1.0));
        let d = g_inverse_partial_sums(&f, c(2.5, 0.0), 50).unwrap();
        assert!(!d.certified);
        assert!(matches!(d.verdict, Verdict::Diverging { .. }));
        assert!(
            d.term_ratios[20] > 10.0 * d.term_ratios[5],
            "ratios {:?}",
            &d.term_ratios[..21]
        );
    }

    #[test]
    fn g_inverse_constant_operand_diverges() {
        let f = |_z: Complex| Ok(c(1.0, 0.0));
        let d = g_inverse_partial_sums(&f, c(2.0, 0.0), 40).unwrap();
        assert!(matches!(d.verdict, Verdict::Diverging { .. }));
        // |q_{2n}(2)| grows
        let mags: Vec<f64> = d.term_magnitudes.iter().copied().collect();
        assert!(mags[40] > mags[10] * 1e3);
    }

    #[test]
    fn taylor_shift_inside_radius() {
        // s = 3, a = 1, shift 1 < |s−1| = 2: converges to ζ(4) − 1
        let d = taylor_shift_partial(c(3.0, 0.0), 1.0, 1, 80, 1e-9).unwrap();
        let zeta4 = hurwitz_zeta(c(4.0, 0.0), 1.0, 1e-13).unwrap().value;
        match d.verdict {
            Verdict::Converged { value, .. } => {
                assert!((value - (zeta4 - 1.0)).norm() < 1e-6, "{value} vs {}", zeta4 - 1.0);
            }
            ref v => panic!("unexpected verdict {v:?}"),
        }
    }

    #[test]
    fn taylor_shift_outside_radius() {
        // s = 3, shift 4 > 2: partial sums blow past 1e6 by K = 200
        let d = taylor_shift_partial(c(3.0, 0.0), 1.0, 4, 200, 1e-9).unwrap();
        assert!(matches!(d.verdict, Verdict::Diverging { .. }));
        let max_mag = d.partial_sums.iter().map(|s| s.norm()).fold(0.0, f64::max);
        assert!(max_mag > 1e6, "max |partial| = {max_mag:e}");
    }

    #[test]
    fn taylor_shift_radius_dichotomy() {
        // convergent inside the disc n < |s−1|, divergent for n > |s−1|+0.5;
        // twenty pairs at a = 1 with a margin on either side
        let convergent: [(Complex, usize); 10] = [
            (c(4.0, 0.0), 1),
            (c(4.0, 0.0), 2),
            (c(1.0, 3.0), 1),
            (c(1.0, 3.0), 2),
            (c(-2.5, 0.0), 1),
            (c(-2.5, 0.0), 2),
            (c(5.0, 2.0), 1),
            (c(5.0, 2.0), 3),
            (c(10.0, 0.0), 2),
            (c(10.0, 0.0), 4),
        ];
        for (s, n) in convergent {
            let d = taylor_shift_partial(s, 1.0, n, 160, 1e-6).unwrap();
            assert!(
                matches!(d.verdict, Verdict::Converged { .. }),
                "expected convergence at s={s}, n={n}: {:?}",
                d.verdict
            );
        }
        let divergent: [(Complex, usize); 10] = [
            (c(4.0, 0.0), 4),
            (c(4.0, 0.0), 5),
            (c(1.0, 3.0), 4),
            (c(1.0, 3.0), 6),
            (c(-2.5, 0.0), 5),
            (c(-2.5, 0.0), 6),
            (c(5.0, 2.0), 6),
            (c(2.2, 0.0), 2),
            (c(2.2, 0.0), 3),
            (c(3.0, 0.0), 3),
        ];
        for (s, n) in divergent {
            let d = taylor_shift_partial(s, 1.0, n, 200, 1e-6).unwrap();
            assert!(
                matches!(d.verdict, Verdict::Diverging { .. }),
                "expected divergence at s={s}, n={n}: {:?}",
                d.verdict
            );
        }
    }

    #[test]
    fn truncation_equals_shift_expansion_inside_disc() {
        // for N < |s−1| the truncation of the differential form equals the
        // truncation of the shift form: Σ_{n≤N} p_n(s)·exp(nD)[f] = G_N
        let s = c(10.0, 0.0);
        let mut total = c(0.0, 0.0);
        for n in 0..=3usize {
            let d = taylor_shift_partial(s, 1.0, n, 200, 1e-9).unwrap();
            let value = match d.verdict {
                Verdict::Converged { value, .. } => value,
                v => panic!("shift n={n} did not converge: {v:?}"),
            };
            total += p_coeff(n, s) * value;
        }
        let g = truncated_g(s, 1.0, 3).unwrap();
        assert!(
            (total - g.value).norm() < 1e-6,
            "{total} vs {}",
            g.value
        );
    }

    #[test]
    fn taylor_shift_pole_is_undefined() {
        let d = taylor_shift_partial(c(1.0, 0.0), 1.0, 3, 50, 1e-9).unwrap();
        assert_eq!(d.verdict, Verdict::UndefinedTerm { index: 0 });
    }

    #[test]
    fn p_series_examples() {
        // s = 2: every term is exactly 1, so S_100 = 101 exactly
        let d = p_series_diagnostics(c(2.0, 0.0), 100);
        assert_eq!(d.partial_sums[100], c(101.0, 0.0));
        assert!(matches!(d.verdict, Verdict::Diverging { .. }));

        // s = −3: terms vanish from n = 4 on
        let d = p_series_diagnostics(c(-3.0, 0.0), 100);
        assert!(d.certified);
        assert!(matches!(d.verdict, Verdict::Converged { .. }));
        for n in 4..=100 {
            assert_eq!(d.term_magnitudes[n], 0.0);
        }

        // s = 1: partial sum is the harmonic number H_{N+1}
        let n = 10_000usize;
        let d = p_series_diagnostics(c(1.0, 0.0), n);
        let harmonic: f64 = (1..=(n + 1)).map(|i| 1.0 / i as f64).sum();
        assert!((d.partial_sums[n].re - harmonic).abs() < 1e-9 * harmonic);
        assert!(matches!(d.verdict, Verdict::Diverging { .. }));
    }

    #[test]
    fn p_series_lower_bound_for_positive_integers() {
        // p_n(s) ≥ 1/((s−1)!(n+1)) for integer s ≥ 1
        for s_int in 1..=4usize {
            let s = c(s_int as f64, 0.0);
            let mut fact = 1.0f64;
            for i in 2..s_int {
                fact *= i as f64;
            }
            for n in 1..=50usize {
                let p = p_coeff(n, s).re;
                let lower = 1.0 / (fact * (n as f64 + 1.0));
                assert!(p >= lower - 1e-12, "s={s_int} n={n}: {p} < {lower}");
            }
        }
    }
}
