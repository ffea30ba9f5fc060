//! Command-line surface: evaluation, coefficient tables, identity
//! verification, series diagnostics, character tables, and figure
//! rendering.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric error (poles, caps, unattainable tolerances).

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zetaop::bernoulli::shared_cache;
use zetaop::characters::{character_group, dirichlet_l_eval, LMethod};
use zetaop::diagnostics::SeriesDiagnostics;
use zetaop::hurwitz::hurwitz_zeta;
use zetaop::identities::{verify_identity, IdentityId, IdentityParams};
use zetaop::numerics::Complex;
use zetaop::operators::{
    g_inverse_partial_sums, p_coeff, p_series_diagnostics, q_coeff, taylor_shift_partial, QMethod,
};
use zetaop::plots::{render_with_workers, ImageBuffer, PlotFunction, PlotSpec};

/// Outcome of one CLI invocation.
#[derive(Debug, Clone)]
pub struct ExitReport {
    /// 0 success, 1 verification failure, 2 usage error, 3 numeric error.
    pub exit_code: i32,
    pub artifacts_written: Vec<PathBuf>,
}

impl ExitReport {
    fn ok() -> Self {
        ExitReport { exit_code: 0, artifacts_written: Vec::new() }
    }

    fn code(exit_code: i32) -> Self {
        ExitReport { exit_code, artifacts_written: Vec::new() }
    }
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_complex(z: Complex) -> String {
    format!("{{\"re\": {}, \"im\": {}}}", fmt17(z.re), fmt17(z.im))
}

/// "RE,IM" (or bare "RE") into a complex number.
fn parse_complex(text: &str) -> Result<Complex, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = |_| format!("expected RE,IM, got '{text}'");
    match parts.as_slice() {
        [re] => Ok(Complex::new(re.trim().parse::<f64>().map_err(bad)?, 0.0)),
        [re, im] => Ok(Complex::new(
            re.trim().parse::<f64>().map_err(bad)?,
            im.trim().parse::<f64>().map_err(bad)?,
        )),
        _ => Err(format!("expected RE,IM, got '{text}'")),
    }
}

/// "WxH" into a resolution pair.
fn parse_resolution(text: &str) -> Result<(u32, u32), String> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{text}'"))?;
    let bad = |_| format!("expected WxH, got '{text}'");
    Ok((w.trim().parse().map_err(bad)?, h.trim().parse().map_err(bad)?))
}

/// "RE_MIN,RE_MAX,IM_MIN,IM_MAX".
fn parse_region(text: &str) -> Result<(f64, f64, f64, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected RE_MIN,RE_MAX,IM_MIN,IM_MAX, got '{text}'"));
    }
    let mut vals = [0.0f64; 4];
    for (v, p) in vals.iter_mut().zip(parts.iter()) {
        *v = p.trim().parse().map_err(|_| format!("bad number '{p}' in region"))?;
    }
    Ok((vals[0], vals[1], vals[2], vals[3]))
}

/// "CX,CY,R" overlay circle.
fn parse_circle(text: &str) -> Result<(Complex, f64), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected CX,CY,R, got '{text}'"));
    }
    let bad = |_| format!("bad number in circle '{text}'");
    Ok((
        Complex::new(
            parts[0].trim().parse().map_err(bad)?,
            parts[1].trim().parse().map_err(bad)?,
        ),
        parts[2].trim().parse().map_err(bad)?,
    ))
}

#[derive(Parser)]
#[command(name = "zetaop", version, about = "Hurwitz zeta / Dirichlet L numerics and shift-operator diagnostics", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate zeta and L-functions
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
    /// Coefficient tables (CSV on stdout)
    Coeff {
        #[command(subcommand)]
        which: CoeffTarget,
    },
    /// Verify an identity over a grid; exit 1 if any residual exceeds --tol
    Verify(VerifyArgs),
    /// Series diagnostics (CSV trace, then one JSON verdict line)
    Diagnose {
        #[command(subcommand)]
        which: DiagnoseTarget,
    },
    /// Dirichlet character tables
    Characters {
        #[command(subcommand)]
        which: CharactersTarget,
    },
    /// Render figures (PPM, or PNG when --out ends in .png)
    Plot {
        #[command(subcommand)]
        which: PlotTarget,
    },
}

#[derive(Subcommand)]
enum EvalTarget {
    /// Riemann zeta ζ(s) = ζ(s, 1)
    Zeta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Hurwitz zeta ζ(s, a)
    Hurwitz {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Dirichlet L(s, χ), χ addressed by (modulus, index)
    Lfunc {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long)]
        modulus: u64,
        #[arg(long = "char-index", default_value_t = 0)]
        char_index: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Hurwitz)]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Hurwitz,
    #[value(name = "euler_maclaurin", alias = "euler-maclaurin")]
    EulerMaclaurin,
}

#[derive(Subcommand)]
enum CoeffTarget {
    /// p_0(s) .. p_N(s)
    P {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
    },
    /// q_0(s) .. q_N(s)
    Q {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, value_enum, default_value_t = QMethodArg::Closed)]
        method: QMethodArg,
    },
    /// Bernoulli numbers B_0 .. B_N as exact fractions
    Bernoulli {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum QMethodArg {
    Recursive,
    Closed,
}

#[derive(Args)]
struct VerifyArgs {
    /// hurwitz-identity | van-gorder-zeta | l-function | trivial-zero-direct | trivial-zero-taylor
    identity: String,
    /// "default" for the built-in grid, "custom" to use --s/--a/--modulus/--m
    #[arg(long, default_value = "default")]
    grid: String,
    /// Residual threshold deciding the exit code
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long = "s", value_parser = parse_complex, allow_hyphen_values = true)]
    s_values: Vec<Complex>,
    #[arg(long = "a")]
    a_values: Vec<f64>,
    #[arg(long = "modulus")]
    moduli: Vec<u64>,
    #[arg(long = "m")]
    m_values: Vec<usize>,
    /// Derivative terms for trivial-zero-taylor
    #[arg(long, default_value_t = 40)]
    terms: usize,
}

#[derive(Subcommand)]
enum DiagnoseTarget {
    /// Partial sums of Σ p_n(s)
    PSeries {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, default_value_t = 100)]
        terms: usize,
    },
    /// Taylor-shift series exp(nD) at s (converges only for n < |s−1|)
    TaylorShift {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        terms: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Inverse-operator series Σ q_n(s) f(s+n) on f(z) = a^{1−z}/(z−1)
    GInverse {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 50)]
        terms: usize,
    },
}

#[derive(Subcommand)]
enum CharactersTarget {
    /// CSV table: index, r, Re χ(r), Im χ(r)
    List {
        #[arg(long)]
        modulus: u64,
    },
}

#[derive(Subcommand)]
enum PlotTarget {
    /// Truncation panel G_N(s,1) (n = 0 renders the reference pole instead)
    Figure1 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_resolution, default_value = "400x400")]
        resolution: (u32, u32),
        #[arg(long)]
        out: PathBuf,
    },
    /// Difference panel G_N(s,1) − 1/(s−1) with the circle |s−1| = N
    Figure2 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_resolution, default_value = "400x400")]
        resolution: (u32, u32),
        #[arg(long)]
        out: PathBuf,
    },
    /// Fully specified plot
    Custom {
        #[arg(long, value_enum)]
        function: FunctionArg,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: (f64, f64, f64, f64),
        #[arg(long, value_parser = parse_resolution, default_value = "400x400")]
        resolution: (u32, u32),
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long = "circle", value_parser = parse_circle, allow_hyphen_values = true)]
        circles: Vec<(Complex, f64)>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    #[value(name = "reference-pole")]
    ReferencePole,
    #[value(name = "truncated-g")]
    TruncatedG,
    Difference,
}

/// Run the CLI on argv (without the program name).
pub fn run<I, S>(args: I) -> ExitReport
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv: Vec<String> = vec!["zetaop".into()];
    argv.extend(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage; version/help requests exit 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitReport::code(code);
        }
    };
    match dispatch(cli) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            ExitReport::code(3)
        }
    }
}

fn dispatch(cli: Cli) -> zetaop::Result<ExitReport> {
    match cli.command {
        Command::Eval { target } => run_eval(target),
        Command::Coeff { which } => run_coeff(which),
        Command::Verify(args) => run_verify(args),
        Command::Diagnose { which } => run_diagnose(which),
        Command::Characters { which } => run_characters(which),
        Command::Plot { which } => run_plot(which),
    }
}

fn run_eval(target: EvalTarget) -> zetaop::Result<ExitReport> {
    let (value, est) = match target {
        EvalTarget::Zeta { s, tol } => {
            let e = hurwitz_zeta(s, 1.0, tol)?;
            (e.value, e.est_error)
        }
        EvalTarget::Hurwitz { s, a, tol } => {
            let e = hurwitz_zeta(s, a, tol)?;
            (e.value, e.est_error)
        }
        EvalTarget::Lfunc { s, modulus, char_index, method, tol } => {
            let group = character_group(modulus)?;
            let chi = group.characters().get(char_index).ok_or_else(|| {
                zetaop::Error::Domain(format!(
                    "character index {char_index} out of range (φ({modulus}) = {})",
                    group.len()
                ))
            })?;
            let m = match method {
                MethodArg::Hurwitz => LMethod::Hurwitz,
                MethodArg::EulerMaclaurin => LMethod::EulerMaclaurin,
            };
            let e = dirichlet_l_eval(s, chi, m, tol)?;
            (e.value, e.est_error)
        }
    };
    println!("{{\"value\": {}, \"est_error\": {}}}", json_complex(value), fmt17(est));
    Ok(ExitReport::ok())
}

fn run_coeff(which: CoeffTarget) -> zetaop::Result<ExitReport> {
    match which {
        CoeffTarget::P { n, s } => {
            println!("n,re,im");
            for i in 0..=n {
                let v = p_coeff(i, s);
                println!("{i},{},{}", fmt17(v.re), fmt17(v.im));
            }
        }
        CoeffTarget::Q { n, s, method } => {
            let method = match method {
                QMethodArg::Recursive => QMethod::Recursive,
                QMethodArg::Closed => QMethod::Closed,
            };
            println!("n,re,im");
            for i in 0..=n {
                let v = q_coeff(i, s, method)?;
                println!("{i},{},{}", fmt17(v.re), fmt17(v.im));
            }
        }
        CoeffTarget::Bernoulli { n } => {
            let cache = shared_cache();
            println!("n,numerator,denominator");
            for i in 0..=n {
                let b = cache.number(i)?;
                println!("{i},{},{}", b.numer(), b.denom());
            }
        }
    }
    Ok(ExitReport::ok())
}

fn run_verify(args: VerifyArgs) -> zetaop::Result<ExitReport> {
    let id = match IdentityId::from_str(&args.identity) {
        Ok(id) => id,
        Err(e) => {
            // an unknown identity name reads as a usage mistake
            eprintln!("error: {e}");
            return Ok(ExitReport::code(2));
        }
    };
    let mut params = IdentityParams::default_for(id);
    match args.grid.as_str() {
        "default" => {}
        "custom" => {
            if !args.s_values.is_empty() {
                params.s_values = args.s_values.clone();
            }
            if !args.a_values.is_empty() {
                params.a_values = args.a_values.clone();
            }
            if !args.moduli.is_empty() {
                params.moduli = args.moduli.clone();
            }
            if !args.m_values.is_empty() {
                params.m_values = args.m_values.clone();
            }
            params.deriv_terms = args.terms;
        }
        other => {
            return Err(zetaop::Error::Domain(format!(
                "unknown grid '{other}' (expected default or custom)"
            )))
        }
    }
    // keep the evaluators above the double-precision floor even when the
    // requested residual threshold is far below it
    params.eval_tol = (args.tol * 0.1).clamp(1e-13, 1e-6);

    let rows = verify_identity(id, &params)?;
    let mut max_residual = 0.0f64;
    let mut body = Vec::new();
    for r in &rows {
        max_residual = max_residual.max(r.residual);
        let mut fields = vec![
            format!("\"label\": \"{}\"", r.label),
            format!("\"value\": {}", json_complex(r.value)),
            format!("\"reference\": {}", json_complex(r.reference)),
            format!("\"residual\": {}", fmt17(r.residual)),
        ];
        if let Some(t) = r.est_truncation {
            fields.push(format!("\"est_truncation\": {}", fmt17(t)));
        }
        body.push(format!("{{{}}}", fields.join(", ")));
    }
    let pass = max_residual <= args.tol;
    println!(
        "{{\"identity\": \"{id}\", \"tol\": {}, \"rows\": [{}], \"max_residual\": {}, \"pass\": {pass}}}",
        fmt17(args.tol),
        body.join(", "),
        fmt17(max_residual),
    );
    Ok(if pass { ExitReport::ok() } else { ExitReport::code(1) })
}

fn print_diagnostics(d: &SeriesDiagnostics) {
    print!("{}", d.to_csv());
    println!("{}", d.to_json());
}

fn run_diagnose(which: DiagnoseTarget) -> zetaop::Result<ExitReport> {
    match which {
        DiagnoseTarget::PSeries { s, terms } => {
            print_diagnostics(&p_series_diagnostics(s, terms));
        }
        DiagnoseTarget::TaylorShift { s, a, n, terms, tol } => {
            print_diagnostics(&taylor_shift_partial(s, a, n, terms, tol)?);
        }
        DiagnoseTarget::GInverse { s, a, terms } => {
            let f = move |z: Complex| {
                // a^{1−z}/(z−1), the closed side of the inverse identity
                Ok(((Complex::new(1.0, 0.0) - z) * a.ln()).exp() / (z - 1.0))
            };
            print_diagnostics(&g_inverse_partial_sums(&f, s, terms)?);
        }
    }
    Ok(ExitReport::ok())
}

fn run_characters(which: CharactersTarget) -> zetaop::Result<ExitReport> {
    match which {
        CharactersTarget::List { modulus } => {
            let group = character_group(modulus)?;
            println!("index,r,re,im");
            for chi in group.characters() {
                for (r, v) in chi.values().iter().enumerate() {
                    println!("{},{r},{},{}", chi.index(), fmt17(v.re), fmt17(v.im));
                }
            }
        }
    }
    Ok(ExitReport::ok())
}

fn figure_region(n: usize) -> (f64, f64, f64, f64) {
    if n <= 10 {
        (-20.0, 20.0, -20.0, 20.0)
    } else {
        (-40.0, 40.0, -40.0, 40.0)
    }
}

fn run_plot(which: PlotTarget) -> zetaop::Result<ExitReport> {
    let (spec, out) = match which {
        PlotTarget::Figure1 { n, resolution, out } => {
            let function =
                if n == 0 { PlotFunction::ReferencePole } else { PlotFunction::TruncatedG { n } };
            let spec = PlotSpec {
                function,
                region: figure_region(n),
                resolution,
                overlay_circles: vec![],
                a: 1.0,
            };
            (spec, out)
        }
        PlotTarget::Figure2 { n, resolution, out } => {
            let spec = PlotSpec {
                function: PlotFunction::Difference { n },
                region: figure_region(n),
                resolution,
                overlay_circles: vec![(Complex::new(1.0, 0.0), n as f64)],
                a: 1.0,
            };
            (spec, out)
        }
        PlotTarget::Custom { function, n, region, resolution, a, circles, out } => {
            let function = match function {
                FunctionArg::ReferencePole => PlotFunction::ReferencePole,
                FunctionArg::TruncatedG => PlotFunction::TruncatedG { n },
                FunctionArg::Difference => PlotFunction::Difference { n },
            };
            let spec = PlotSpec { function, region, resolution, overlay_circles: circles, a };
            (spec, out)
        }
    };

    let workers = std::env::var("ZOL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let image = render_with_workers(&spec, workers)?;
    write_image(&image, &out)?;
    println!("{{\"written\": \"{}\"}}", out.display());
    Ok(ExitReport { exit_code: 0, artifacts_written: vec![out] })
}

fn write_image(image: &ImageBuffer, out: &PathBuf) -> zetaop::Result<()> {
    let is_png = out.extension().map(|e| e.eq_ignore_ascii_case("png")).unwrap_or(false);
    if is_png {
        let file = std::fs::File::create(out)?;
        let mut encoder = png::Encoder::new(std::io::BufWriter::new(file), image.width, image.height);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| zetaop::Error::Io(e.to_string()))?;
        writer
            .write_image_data(&image.data)
            .map_err(|e| zetaop::Error::Io(e.to_string()))?;
    } else {
        std::fs::write(out, image.ppm_bytes())?;
    }
    Ok(())
}
