//! Domain-coloring renderer for the truncation figures: complex plots of
//! the reference pole 1/((s−1)a^{s−1}), the truncation G_N(s,a), and their
//! difference, with optional circle overlays.
//!
//! Hue follows the argument (positive real axis red, increasing through
//! orange and yellow, positive imaginary green); lightness is
//! |z|/(1+|z|), black at zero and white at infinity. Pixels are pure
//! functions of the spec, so renders are bit-identical across runs and
//! across worker counts.

use num_complex::Complex64;

use crate::error::Error;
use crate::hurwitz::plan_for_region;
use crate::numerics::Complex;
use crate::Result;

/// Pixel-count cap.
const PIXEL_CAP: u64 = 100_000_000;
/// Analytic tolerance for the per-image evaluation plan; far below one
/// 8-bit color step at every magnitude.
const RENDER_TOL: f64 = 1e-7;

/// Which function a plot shows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlotFunction {
    /// 1/((s−1) a^{s−1})
    ReferencePole,
    /// G_N(s, a)
    TruncatedG { n: usize },
    /// G_N(s, a) − 1/((s−1) a^{s−1})
    Difference { n: usize },
}

/// Full description of one raster: function, region, resolution, overlays.
#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub function: PlotFunction,
    /// (re_min, re_max, im_min, im_max)
    pub region: (f64, f64, f64, f64),
    /// (width, height) in pixels
    pub resolution: (u32, u32),
    /// circles |s − c| = r drawn in white with a one-pixel stroke
    pub overlay_circles: Vec<(Complex, f64)>,
    pub a: f64,
}

/// Row-major RGB buffer, 8 bits per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl ImageBuffer {
    /// Binary PPM (P6) bytes, the canonical output container.
    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }
}

/// Map one complex value to RGB.
///
/// Argument 0 is red and hue increases counter-clockwise with green at
/// +iπ/2 and blue at the negative real axis; lightness |z|/(1+|z|) runs
/// from black at 0 to white at ∞. Non-finite values render white.
pub fn domain_color(z: Complex) -> [u8; 3] {
    if !z.re.is_finite() || !z.im.is_finite() {
        return [255, 255, 255];
    }
    let mag = z.norm();
    if mag == 0.0 {
        return [0, 0, 0];
    }
    if !mag.is_finite() {
        return [255, 255, 255];
    }
    let mut theta = z.arg();
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    // piecewise-linear hue: 0 → red, π/2 → green (120°), π → blue (240°)
    let pi = std::f64::consts::PI;
    let hue = if theta <= pi {
        240.0 * theta / pi
    } else {
        240.0 + 120.0 * (theta - pi) / pi
    };
    let lightness = mag / (1.0 + mag);
    hsl_to_rgb(hue, 1.0, lightness)
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [u8; 3] {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = (h / 60.0).rem_euclid(6.0);
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to_byte = |v: f64| ((v + m).clamp(0.0, 1.0) * 255.0).round() as u8;
    [to_byte(r1), to_byte(g1), to_byte(b1)]
}

fn check_spec(spec: &PlotSpec) -> Result<()> {
    let (re_min, re_max, im_min, im_max) = spec.region;
    if !(re_min < re_max && im_min < im_max) {
        return Err(Error::Domain(format!(
            "degenerate region ({re_min}, {re_max}) × ({im_min}, {im_max})"
        )));
    }
    if !(spec.a > 0.0 && spec.a <= 1.0) {
        return Err(Error::Domain(format!("shift a must lie in (0, 1], got {}", spec.a)));
    }
    let pixels = spec.resolution.0 as u64 * spec.resolution.1 as u64;
    if pixels == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    if pixels > PIXEL_CAP {
        return Err(Error::ResolutionCap { pixels, cap: PIXEL_CAP });
    }
    Ok(())
}

/// Render with a worker count chosen from the machine.
pub fn render(spec: &PlotSpec) -> Result<ImageBuffer> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    render_with_workers(spec, workers)
}

/// Render with an explicit worker count. Pixels are evaluated
/// independently, so the buffer is identical for every worker count.
pub fn render_with_workers(spec: &PlotSpec, workers: usize) -> Result<ImageBuffer> {
    check_spec(spec)?;
    let (width, height) = spec.resolution;
    let (re_min, re_max, im_min, im_max) = spec.region;
    let dx = (re_max - re_min) / width as f64;
    let dy = (im_max - im_min) / height as f64;
    let half_diag = 0.5 * (dx * dx + dy * dy).sqrt();

    // one conservative evaluation plan for the whole image
    let plan = match spec.function {
        PlotFunction::ReferencePole => None,
        PlotFunction::TruncatedG { n } | PlotFunction::Difference { n } => {
            Some(plan_for_region(re_min, re_max, im_min, im_max, spec.a, n, RENDER_TOL)?)
        }
    };

    let mut data = vec![0u8; width as usize * height as usize * 3];
    let row_bytes = width as usize * 3;
    let workers = workers.max(1).min(height as usize);
    let rows_per_band = height as usize / workers + usize::from(height as usize % workers != 0);

    std::thread::scope(|scope| {
        for (band, chunk) in data.chunks_mut(rows_per_band * row_bytes).enumerate() {
            let plan = &plan;
            let spec = &spec;
            scope.spawn(move || {
                let plan_dims = plan.as_ref().map(|p| (p.m, p.k));
                let mut scratch = PixelScratch::new(plan_dims, spec.a);
                let y0 = band * rows_per_band;
                for (row_in_band, row) in chunk.chunks_mut(row_bytes).enumerate() {
                    let py = y0 + row_in_band;
                    let im = im_max - (py as f64 + 0.5) * dy;
                    for px in 0..width as usize {
                        let re = re_min + (px as f64 + 0.5) * dx;
                        let s = Complex64::new(re, im);
                        let rgb = pixel_color(spec, plan_dims, &mut scratch, s, half_diag);
                        row[3 * px..3 * px + 3].copy_from_slice(&rgb);
                    }
                }
            });
        }
    });

    Ok(ImageBuffer { width, height, data })
}

fn pixel_color(
    spec: &PlotSpec,
    plan: Option<(usize, usize)>,
    scratch: &mut PixelScratch,
    s: Complex,
    half_diag: f64,
) -> [u8; 3] {
    for (center, radius) in &spec.overlay_circles {
        if ((s - center).norm() - radius).abs() < half_diag {
            return [255, 255, 255];
        }
    }
    let value = evaluate_function(spec, plan, scratch, s);
    domain_color(value)
}

/// Reused per-worker buffers for the fused truncation evaluation.
struct PixelScratch {
    pows: Vec<Complex>,
    invs: Vec<f64>,
    over_fact: Vec<f64>,
}

impl PixelScratch {
    fn new(plan: Option<(usize, usize)>, a: f64) -> Self {
        let (m, k) = plan.unwrap_or((1, 1));
        let cache = crate::bernoulli::shared_cache();
        PixelScratch {
            pows: vec![Complex64::new(0.0, 0.0); m.saturating_sub(1)],
            invs: (1..m).map(|i| 1.0 / (i as f64 + a)).collect(),
            over_fact: (1..=k)
                .map(|l| cache.over_factorial(2 * l).expect("order within cache"))
                .collect(),
        }
    }
}

fn evaluate_function(
    spec: &PlotSpec,
    plan: Option<(usize, usize)>,
    scratch: &mut PixelScratch,
    s: Complex,
) -> Complex {
    let a = spec.a;
    let reference = || -> Complex {
        if s.re == 1.0 && s.im == 0.0 {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            // a^{1−s} / (s−1)
            ((Complex64::new(1.0, 0.0) - s) * a.ln()).exp() / (s - 1.0)
        }
    };
    match spec.function {
        PlotFunction::ReferencePole => reference(),
        PlotFunction::TruncatedG { n } | PlotFunction::Difference { n } => {
            if s.re == 1.0 && s.im == 0.0 {
                // the lone genuine pole of the family
                return Complex64::new(f64::INFINITY, 0.0);
            }
            let (m, k) = plan.expect("plan present for truncation plots");
            let g = fused_truncated_g(s, a, n, m, k, scratch);
            match spec.function {
                PlotFunction::Difference { .. } => g - reference(),
                _ => g,
            }
        }
    }
}

/// G_N assembled in one pass without materialising the shifted family:
/// identical arithmetic to the family evaluator followed by the p_n dot
/// product, with per-worker scratch buffers.
fn fused_truncated_g(
    s: Complex,
    a: f64,
    n_trunc: usize,
    m: usize,
    k: usize,
    scratch: &mut PixelScratch,
) -> Complex {
    let pole_index = crate::hurwitz::pole_shift(s, n_trunc);
    for (i, p) in scratch.pows.iter_mut().enumerate() {
        *p = (-s * ((i + 1) as f64 + a).ln()).exp();
    }
    let x = m as f64 + a;
    let w = 1.0 / (x * x);
    let inv_x = 1.0 / x;
    let mut xp = (-s * x.ln()).exp();

    let mut acc = Complex64::new(0.0, 0.0);
    let mut p_n = Complex64::new(1.0, 0.0);
    let mut p_prev = Complex64::new(0.0, 0.0);
    for n in 0..=n_trunc {
        let sn = s + n as f64;
        if pole_index == Some(n) {
            // removable limit: p_{n−1}(s)/(n+1) − p_n(s)/a; the previous
            // coefficient is carried, the ratio form would divide by zero
            acc += p_prev / (n + 1) as f64 - p_n / a;
        } else {
            let mut head = Complex64::new(0.0, 0.0);
            for p in scratch.pows.iter() {
                head += p;
            }
            let pole = xp * x / (sn - 1.0);
            let mut rising_scaled = sn * w;
            let mut corr = Complex64::new(0.0, 0.0);
            for (l, of) in scratch.over_fact.iter().enumerate() {
                corr += *of * rising_scaled;
                if l + 1 < k {
                    let j = (2 * l + 1) as f64;
                    rising_scaled = rising_scaled * ((sn + j) * (sn + j + 1.0)) * w;
                }
            }
            acc += p_n * (head + pole + 0.5 * xp + corr * xp * x);
        }
        for (p, inv) in scratch.pows.iter_mut().zip(scratch.invs.iter()) {
            *p *= *inv;
        }
        xp *= inv_x;
        p_prev = p_n;
        p_n *= (s + n as f64) / (n + 2) as f64;
    }
    acc
}
