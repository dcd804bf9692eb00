//! The `dlfold` command line. Angles on the command line are in degrees;
//! CSV output uses 12 significant digits.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crease_pattern::{
    is_flat_foldable_deg4, kawasaki_residual, load_fold, save_fold, save_svg, vertex_star, Assignment, CreasePattern,
    FoldAngleVector, SvgStyle, VertexStar,
};
use crate::double_line::{
    build_dl, canonical_star, classify_theta, corner_coefficients, dl_multipliers, double_line_ratio, parse_signs,
    theta_for_even_minor, fit_radii, Axis, DLMode, DoubleLineError, DoubleLineParams, ThetaRegime,
};
use crate::fold3d::{continuation, export_obj, log_grid, propagate_fold, sweep_motion, MotionSample, SolveOptions};
use crate::kinematics::{angles_from_multipliers, mode_vector, p_coeff, q_coeff, FoldMode, NetworkModes};
use crate::patterns::{
    gen_dl_miura, gen_dl_yoshimura, gen_miura, gen_single_deg4, gen_symmetric_vertex, gen_yoshimura, motion_of,
};
use crate::symmetric::{count_modes, enumerate_mode_sequences_capped};
use crate::thickening::{
    clearance_log, closing_fold_max, export_solids_obj, thicken, thicken_unchecked, thickness_bound, Side,
    ThickPanelParams,
};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "dlfold", version, about = "Double-line rigid origami: vertex analysis, construction, folding and thick panels")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Largest closure residual accepted in folded states.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps and clearance checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Fold,
    Svg,
    Obj,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize a pattern file, or the coefficients of a degree-4 vertex.
    Analyze(AnalyzeArgs),
    /// Double-line a single vertex.
    Doubleline(DoublelineArgs),
    /// Regime of the pair sums over θ for each double-line mode.
    Classify(ClassifyArgs),
    /// Count (and list) the folding modes of the symmetric degree-2n double-line vertex.
    Modes(ModesArgs),
    /// Fold angles along the motion of a pattern.
    Sweep(SweepArgs),
    /// Folded state of a pattern at one motion parameter.
    Fold(FoldArgs),
    /// Newton continuation with one crease driven to a target angle.
    Solve(SolveArgs),
    /// Thick panels for a pattern and their clearance over the motion.
    Thicken(ThickenArgs),
    /// Generate a pattern.
    Gen(GenArgs),
    /// Convert a FOLD file.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("input").required(true).multiple(true).args(["file", "alpha", "random"])))]
pub struct AnalyzeArgs {
    pub file: Option<PathBuf>,
    #[arg(long, requires = "beta", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Also report the double-line modes at this θ.
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Check the corner-coefficient products of this many random vertices.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("vertex").required(true).args(["alpha", "sectors"])))]
pub struct DoublelineArgs {
    #[arg(long, requires = "beta", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Sector angles of any flat-foldable vertex, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub sectors: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, conflicts_with = "signs")]
    pub mode: Option<DLMode>,
    /// Corner signs in star order, such as "-++-".
    #[arg(long, allow_hyphen_values = true)]
    pub signs: Option<String>,
    /// Radius along each crease, comma separated. Defaults to 1, or to
    /// fitted radii when equal ones push a corner out of its sector.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub radii: Vec<f64>,
    #[arg(long)]
    pub outer_radius: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long)]
    pub mode: Option<DLMode>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Grid step in degrees.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Add the major and minor double-line ratios to the table.
    #[arg(long)]
    pub ratios: bool,
    /// Print the θ of each mode whose minor double-line ratio is 1:1.
    #[arg(long, conflicts_with_all = ["theta", "ratios"])]
    pub even_minor: bool,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    #[arg(long)]
    pub n: usize,
    /// Print the canonical sign sequence of every mode.
    #[arg(long)]
    pub list: bool,
    /// Compare the count against brute-force enumeration.
    #[arg(long)]
    pub check: bool,
    /// Largest n enumerated by brute force.
    #[arg(long, default_value_t = 12)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct MotionArgs {
    /// Largest motion parameter, tan(ρ/2) per unit multiplier.
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub t_min: f64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Stop where the fastest crease reaches this fold angle; overrides --t-max.
    #[arg(long)]
    pub max_fold: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub motion: MotionArgs,
}

#[derive(Args, Debug)]
pub struct FoldArgs {
    pub file: PathBuf,
    /// Motion parameter; the file's own fold angles are used when absent.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub file: PathBuf,
    /// Crease index held at the target.
    #[arg(long)]
    pub driver: usize,
    /// Target fold angle of the driver.
    #[arg(long, allow_negative_numbers = true)]
    pub target: f64,
    /// Largest continuation step of the driver.
    #[arg(long, default_value_t = 5.0)]
    pub max_step: f64,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("thickness").required(true).args(["tau", "tau_fraction"])))]
pub struct ThickenArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Thickness as a fraction of the largest admissible one.
    #[arg(long)]
    pub tau_fraction: Option<f64>,
    #[arg(long, default_value = "above")]
    pub side: Side,
    /// Build panels above the bound instead of refusing.
    #[arg(long)]
    pub unchecked: bool,
    #[command(flatten)]
    pub motion: MotionArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Miura,
    Yoshimura,
    DlMiura,
    DlYoshimura,
    Single,
    Symmetric,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 3)]
    pub cols: usize,
    /// Miura sector angle, or α of a single vertex.
    #[arg(long, default_value_t = 60.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// β of a single vertex.
    #[arg(long, default_value_t = 80.0, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Yoshimura cell width over the length of the split crease.
    #[arg(long, default_value_t = 1.5)]
    pub elongation: f64,
    /// Half the degree of a symmetric vertex.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    pub file: PathBuf,
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.into())
    }
}

type Out = Result<Vec<u8>, CliError>;

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    let g = &cli.global;
    let result = validate_global(g).and_then(|()| dispatch(&cli.command, g, stderr));
    let result = result.and_then(|bytes| emit(g, &bytes, stdout));
    match result {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn validate_global(g: &Global) -> Result<(), CliError> {
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        return Err(CliError::Usage(format!("--tolerance {} must be positive", g.tolerance)));
    }
    if g.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    Ok(())
}

fn emit(g: &Global, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |path: &Path, e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    match &g.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| io(path, e))?,
        None => stdout.write_all(bytes).map_err(|e| io(Path::new("<stdout>"), e))?,
    }
    Ok(())
}

fn dispatch(cmd: &Command, g: &Global, stderr: &mut dyn Write) -> Out {
    match cmd {
        Command::Analyze(a) => analyze(a, g),
        Command::Doubleline(a) => doubleline(a, g),
        Command::Classify(a) => classify(a, g),
        Command::Modes(a) => modes(a, g),
        Command::Sweep(a) => sweep(a, g),
        Command::Fold(a) => fold(a, g),
        Command::Solve(a) => solve(a, g),
        Command::Thicken(a) => thicken_cmd(a, g, stderr),
        Command::Gen(a) => gen(a, g),
        Command::Export(a) => export(a, g),
    }
}

fn format(g: &Global, cmd: &str, allowed: &[Format]) -> Result<Format, CliError> {
    match g.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(CliError::Usage(format!(
            "--format {} is not available for {cmd}",
            f.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string())
        ))),
    }
}

/// Formats `x` with 12 significant digits, without trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    let s = if (-5..15).contains(&exp) {
        trim(&format!("{:.*}", (11 - exp).max(0) as usize, x))
    } else {
        format!("{}e{exp}", trim(mantissa))
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn deg(x: f64) -> String {
    fmt_num(x.to_degrees())
}

fn angle(name: &str, value: f64, lo: f64, hi: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > lo && value < hi {
        Ok(value.to_radians())
    } else {
        Err(CliError::Usage(format!("--{name} {value} outside ({lo}, {hi}) degrees")))
    }
}

fn read_pattern(path: &Path) -> Result<CreasePattern, CliError> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(load_fold(&bytes)?)
}

fn pattern_output(pattern: &CreasePattern, g: &Global, cmd: &str) -> Out {
    Ok(match format(g, cmd, &[Format::Fold, Format::Svg])? {
        Format::Svg => save_svg(pattern, &SvgStyle::default()),
        _ => save_fold(pattern),
    })
}

/// Maps `f` over contiguous chunks on up to `jobs` threads, keeping order.
fn par_chunks<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&[T]) -> Result<Vec<R>, Error> + Sync,
) -> Result<Vec<R>, Error> {
    if jobs <= 1 || items.len() < 2 {
        return f(items);
    }
    let size = items.len().div_ceil(jobs);
    let parts: Vec<Result<Vec<R>, Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(size).map(|c| s.spawn(|| f(c))).collect();
        handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect()
    });
    let mut out = Vec::with_capacity(items.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn analyze(a: &AnalyzeArgs, g: &Global) -> Out {
    format(g, "analyze", &[Format::Csv])?;
    let mut out = String::new();
    if let Some(path) = &a.file {
        analyze_pattern(&read_pattern(path)?, &mut out)?;
    }
    if let (Some(alpha), Some(beta)) = (a.alpha, a.beta) {
        let (alpha, beta) = (angle("alpha", alpha, 0.0, 180.0)?, angle("beta", beta, 0.0, 180.0)?);
        let theta = a.theta.map(|t| angle("theta", t, 0.0, 180.0)).transpose()?;
        analyze_vertex(alpha, beta, theta, &mut out)?;
    }
    if let Some(n) = a.random {
        random_check(n, g, &mut out)?;
    }
    Ok(out.into_bytes())
}

fn analyze_pattern(p: &CreasePattern, out: &mut String) -> Result<(), CliError> {
    let count = |a: Assignment| p.creases().iter().filter(|c| c.assignment == a).count();
    let interior = p.interior_vertices();
    let mut degree4 = 0;
    let mut flat = 0;
    let mut kawasaki: f64 = 0.0;
    for &v in &interior {
        let star = vertex_star(p, v)?;
        kawasaki = kawasaki.max(kawasaki_residual(&star)?.abs());
        if star.degree() == 4 {
            degree4 += 1;
            if is_flat_foldable_deg4(&star)? {
                flat += 1;
            }
        }
    }
    let _ = writeln!(out, "vertices {}", p.vertices().len());
    let _ = writeln!(
        out,
        "creases {} (mountain {}, valley {}, boundary {}, unassigned {})",
        p.creases().len(),
        count(Assignment::Mountain),
        count(Assignment::Valley),
        count(Assignment::Boundary),
        count(Assignment::Unassigned)
    );
    let _ = writeln!(out, "faces {}", p.faces().len());
    let _ = writeln!(out, "interior_vertices {}", interior.len());
    let _ = writeln!(out, "degree4_vertices {degree4}");
    let _ = writeln!(out, "flat_foldable {flat}");
    let _ = writeln!(out, "max_kawasaki_residual_deg {}", deg(kawasaki));
    match motion_of(p) {
        Ok(m) => {
            let _ = writeln!(out, "motion found");
            for (v, mode) in &m.modes {
                let _ = writeln!(out, "vertex {v} mode {mode}");
            }
        }
        Err(e) => {
            let _ = writeln!(out, "motion none: {e}");
        }
    }
    Ok(())
}

fn analyze_vertex(alpha: f64, beta: f64, theta: Option<f64>, out: &mut String) -> Result<(), CliError> {
    let star = canonical_star(alpha, beta)?;
    let _ = writeln!(out, "sectors_deg {}", join(star.sectors().iter().map(|s| deg(*s))));
    let _ = writeln!(out, "p {}", fmt_num(p_coeff(alpha, beta)?));
    let _ = writeln!(out, "q {}", fmt_num(q_coeff(alpha, beta)?));
    for mode in [FoldMode::A, FoldMode::B] {
        let mv = mode_vector(&star, mode)?;
        let _ = writeln!(out, "mode {mode} multipliers {}", join(mv.m.iter().map(|x| fmt_num(*x))));
    }
    let Some(theta) = theta else { return Ok(()) };
    for mode in DLMode::ALL {
        let (Ok(c), Ok(regime)) = (corner_coefficients(mode, alpha, beta, theta), classify_theta(mode, alpha, beta, theta))
        else {
            continue;
        };
        let product: f64 = c.iter().product();
        let _ = writeln!(
            out,
            "dl {mode} corners {} product {} regime {}",
            join(c.iter().map(|x| fmt_num(*x))),
            fmt_num(product),
            regime_text(&regime)
        );
    }
    Ok(())
}

fn regime_text(r: &ThetaRegime) -> String {
    match r {
        ThetaRegime::Finite { m, .. } => format!("Finite {}", deg(*m)),
        other => other.name().to_string(),
    }
}

fn random_check(n: usize, g: &Global, out: &mut String) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..n {
        let a: f64 = rng.gen_range(0.01..PI / 2.0 - 0.01);
        let b: f64 = rng.gen_range(0.01..PI / 2.0 - 0.01);
        let (alpha, beta) = (a.min(b), a.max(b));
        let theta: f64 = rng.gen_range(0.01..PI - 0.01);
        let sectors = [PI - alpha, PI - beta, alpha, beta];
        for mode in DLMode::GENERIC {
            if dl_multipliers(&sectors, theta, &mode.signs()).is_err() {
                failures += 1;
            }
            if let Ok(c) = corner_coefficients(mode, alpha, beta, theta) {
                if c.iter().all(|x| x.is_finite()) {
                    worst = worst.max((c.iter().product::<f64>() - 1.0).abs());
                }
            }
        }
    }
    let _ = writeln!(out, "random_vertices {n} seed {}", g.seed);
    let _ = writeln!(out, "max_product_error {}", fmt_num(worst));
    let _ = writeln!(out, "rejected_modes {failures}");
    if failures > 0 {
        return Err(Error::Invalid(format!("{failures} generic modes failed the product check")).into());
    }
    Ok(())
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}

fn doubleline(a: &DoublelineArgs, g: &Global) -> Out {
    let theta = angle("theta", a.theta, 0.0, 180.0)?;
    let star = match (a.alpha, a.beta) {
        (Some(alpha), Some(beta)) => canonical_star(angle("alpha", alpha, 0.0, 180.0)?, angle("beta", beta, 0.0, 180.0)?)?,
        _ => {
            for (i, s) in a.sectors.iter().enumerate() {
                angle(&format!("sectors[{i}]"), *s, 0.0, 180.0)?;
            }
            VertexStar::from_degrees(&a.sectors)?
        }
    };
    let mut params = DoubleLineParams::new(theta, star.degree());
    if !a.radii.is_empty() {
        params.radii = a.radii.clone();
    }
    params.mode = a.mode;
    if let Some(s) = &a.signs {
        params.signs = Some(parse_signs(s).map_err(|e| CliError::Usage(format!("--signs: {e}")))?);
    }
    params.outer_radius = a.outer_radius;
    let dl = match build_dl(&star, &params) {
        Err(DoubleLineError::CornerInversion(_)) if a.radii.is_empty() => {
            params.radii = fit_radii(&star, theta)?;
            build_dl(&star, &params)?
        }
        r => r?,
    };
    pattern_output(&dl.pattern, g, "doubleline")
}

fn classify(a: &ClassifyArgs, g: &Global) -> Out {
    format(g, "classify", &[Format::Csv])?;
    let alpha = angle("alpha", a.alpha, 0.0, 180.0)?;
    let beta = angle("beta", a.beta, 0.0, 180.0)?;
    let modes: Vec<DLMode> = match a.mode {
        Some(m) => vec![m],
        None => DLMode::ALL.into_iter().filter(|m| classify_theta(*m, alpha, beta, PI / 2.0).is_ok()).collect(),
    };
    let mut out = String::new();
    if a.even_minor {
        let _ = writeln!(out, "mode,theta_deg");
        for m in modes.iter().filter(|m| !m.is_symmetric()) {
            let _ = writeln!(out, "{m},{}", deg(theta_for_even_minor(*m, alpha, beta)?));
        }
        return Ok(out.into_bytes());
    }
    if let (Some(mode), Some(theta)) = (a.mode, a.theta) {
        let regime = classify_theta(mode, alpha, beta, angle("theta", theta, 0.0, 180.0)?)?;
        let _ = writeln!(out, "{}", regime.name());
        return Ok(out.into_bytes());
    }
    let thetas: Vec<f64> = match a.theta {
        Some(t) => vec![angle("theta", t, 0.0, 180.0)?],
        None => {
            if !(a.step > 0.0 && a.step < 180.0) {
                return Err(CliError::Usage(format!("--step {} outside (0, 180)", a.step)));
            }
            (1..).map(|k| k as f64 * a.step).take_while(|t| *t < 180.0 - 1e-9).map(f64::to_radians).collect()
        }
    };
    let _ = write!(out, "mode,theta_deg,regime,m_deg");
    if a.ratios {
        let _ = write!(out, ",major_first,major_second,minor_first,minor_second");
    }
    out.push('\n');
    for mode in &modes {
        for &theta in &thetas {
            let regime = classify_theta(*mode, alpha, beta, theta)?;
            let m = match regime {
                ThetaRegime::Finite { m, .. } => deg(m),
                _ => String::new(),
            };
            let _ = write!(out, "{mode},{},{},{m}", deg(theta), regime.name());
            if a.ratios {
                for axis in [Axis::Major, Axis::Minor] {
                    match double_line_ratio(*mode, axis, alpha, beta, theta) {
                        Ok(r) => {
                            let _ = write!(out, ",{},{}", fmt_num(r.first), fmt_num(r.second));
                        }
                        Err(_) => out.push_str(",,"),
                    }
                }
            }
            out.push('\n');
        }
    }
    Ok(out.into_bytes())
}

fn modes(a: &ModesArgs, g: &Global) -> Out {
    format(g, "modes", &[Format::Csv])?;
    let count = count_modes(a.n)?;
    let mut out = format!("{count}\n");
    if a.list || a.check {
        let seqs = enumerate_mode_sequences_capped(a.n, a.cap)?;
        if a.list {
            for s in &seqs {
                let _ = writeln!(out, "{}", crate::double_line::format_signs(s.signs()));
            }
        }
        if a.check {
            if seqs.len() as u128 != count {
                return Err(Error::Invalid(format!("brute force finds {} modes, formula gives {count}", seqs.len())).into());
            }
            let _ = writeln!(out, "check: brute force agrees ({} modes)", seqs.len());
        }
    }
    Ok(out.into_bytes())
}

fn motion_grid(m: &MotionArgs, modes: &NetworkModes) -> Result<Vec<f64>, CliError> {
    let t_max = match m.max_fold {
        Some(f) => {
            let peak = modes.multipliers.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if peak == 0.0 {
                return Err(Error::Invalid("the motion folds no crease".into()).into());
            }
            (angle("max-fold", f, 0.0, 180.0)? / 2.0).tan() / peak
        }
        None => m.t_max,
    };
    if m.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !(m.t_min > 0.0 && t_max > m.t_min && t_max.is_finite()) {
        return Err(CliError::Usage(format!("need 0 < --t-min < --t-max, got {} and {t_max}", m.t_min)));
    }
    Ok(log_grid(m.t_min, t_max, m.samples))
}

fn motion(pattern: &CreasePattern, modes: &NetworkModes, ts: &[f64], g: &Global) -> Result<Vec<MotionSample>, CliError> {
    let samples = par_chunks(ts, g.jobs, |chunk| Ok(sweep_motion(pattern, modes, chunk)?))?;
    if let Some(s) = samples.iter().find(|s| !(s.residual <= g.tolerance)) {
        return Err(Error::Invalid(format!("closure residual {:.3e} at t = {} exceeds the tolerance", s.residual, s.t)).into());
    }
    Ok(samples)
}

fn sweep(a: &SweepArgs, g: &Global) -> Out {
    format(g, "sweep", &[Format::Csv])?;
    let pattern = read_pattern(&a.file)?;
    let modes = motion_of(&pattern)?;
    let ts = motion_grid(&a.motion, &modes)?;
    let samples = motion(&pattern, &modes, &ts, g)?;
    let n = pattern.creases().len();
    let mut out = String::from("t");
    for e in 0..n {
        let _ = write!(out, ",rho_{e}");
    }
    out.push_str(",residual\n");
    for s in &samples {
        out.push_str(&fmt_num(s.t));
        for x in s.angles.iter() {
            out.push(',');
            out.push_str(&deg(*x));
        }
        let _ = writeln!(out, ",{}", fmt_num(s.residual));
    }
    Ok(out.into_bytes())
}

fn angles_csv(angles: &FoldAngleVector) -> String {
    let mut out = String::from("crease,rho_deg\n");
    for (e, x) in angles.iter().enumerate() {
        let _ = writeln!(out, "{e},{}", deg(*x));
    }
    out
}

fn folded_output(pattern: &CreasePattern, angles: &FoldAngleVector, g: &Global, cmd: &str) -> Out {
    let f = format(g, cmd, &[Format::Obj, Format::Fold, Format::Csv])?;
    let state = propagate_fold(pattern, angles)?;
    if !(state.max_residual() <= g.tolerance) {
        return Err(Error::Invalid(format!("closure residual {:.3e} exceeds the tolerance", state.max_residual())).into());
    }
    Ok(match f {
        Format::Fold => save_fold(&pattern.clone().with_fold_angles(angles)?),
        Format::Csv => angles_csv(angles).into_bytes(),
        _ => export_obj(pattern, &state).into_bytes(),
    })
}

fn fold(a: &FoldArgs, g: &Global) -> Out {
    let pattern = read_pattern(&a.file)?;
    let angles = match a.t {
        Some(t) if !t.is_finite() => return Err(CliError::Usage(format!("--t {t} is not finite"))),
        Some(t) => angles_from_multipliers(&motion_of(&pattern)?.multipliers, t),
        None => pattern
            .fold_angles()
            .ok_or_else(|| CliError::Usage("the pattern stores no fold angles; pass --t".into()))?,
    };
    folded_output(&pattern, &angles, g, "fold")
}

fn solve(a: &SolveArgs, g: &Global) -> Out {
    let f = format(g, "solve", &[Format::Csv, Format::Fold, Format::Obj])?;
    let target = angle("target", a.target, -180.0, 180.0)?;
    let max_step = angle("max-step", a.max_step, 0.0, 90.0)?;
    let pattern = read_pattern(&a.file)?;
    if a.driver >= pattern.creases().len() {
        return Err(CliError::Usage(format!("--driver {} but the pattern has {} creases", a.driver, pattern.creases().len())));
    }
    let opts = SolveOptions { tol: g.tolerance.min(1e-10), max_step, ..SolveOptions::default() };
    let initial = FoldAngleVector::zeros(pattern.creases().len());
    let path = continuation(&pattern, a.driver, target, &initial, &opts)?;
    let last = path.last().expect("continuation returns the initial state");
    Ok(match f {
        Format::Csv => {
            let mut out = String::from("step");
            for e in 0..pattern.creases().len() {
                let _ = write!(out, ",rho_{e}");
            }
            out.push_str(",residual\n");
            for (k, s) in path.iter().enumerate() {
                let _ = write!(out, "{k}");
                for x in s.angles.iter() {
                    out.push(',');
                    out.push_str(&deg(*x));
                }
                let _ = writeln!(out, ",{}", fmt_num(s.residual));
            }
            out.into_bytes()
        }
        _ => {
            let g = Global { format: Some(f), ..g.clone() };
            folded_output(&pattern, &last.angles, &g, "solve")?
        }
    })
}

fn thicken_cmd(a: &ThickenArgs, g: &Global, stderr: &mut dyn Write) -> Out {
    let f = format(g, "thicken", &[Format::Obj, Format::Csv])?;
    let pattern = read_pattern(&a.file)?;
    let modes = motion_of(&pattern)?;
    let ts = motion_grid(&a.motion, &modes)?;
    let samples = motion(&pattern, &modes, &ts, g)?;
    let rho = closing_fold_max(&pattern, &samples, a.side);
    let bound = thickness_bound(&pattern, &rho);
    let tau = match (a.tau, a.tau_fraction) {
        (Some(t), _) => t,
        (None, Some(frac)) => {
            let Some((_, b)) = bound else {
                return Err(Error::Invalid(format!("no crease folds toward the {} side; the thickness is unbounded", a.side)).into());
            };
            frac * b
        }
        (None, None) => unreachable!("clap requires one of --tau and --tau-fraction"),
    };
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(CliError::Usage(format!("thickness {tau} must be positive")));
    }
    let params = ThickPanelParams::new(tau, a.side);
    let solids = if a.unchecked {
        thicken_unchecked(&pattern, &samples, &params)?
    } else {
        thicken(&pattern, &samples, &params)?
    };
    let log = par_chunks(&samples, g.jobs, |chunk| Ok(clearance_log(&pattern, &solids, chunk)?))?;
    let min = log.iter().map(|s| s.clearance).fold(f64::INFINITY, f64::min);
    match bound {
        Some((e, b)) => {
            let _ = writeln!(stderr, "tau {} bound {} at crease {e}", fmt_num(tau), fmt_num(b));
        }
        None => {
            let _ = writeln!(stderr, "tau {} unbounded", fmt_num(tau));
        }
    }
    let _ = writeln!(stderr, "min clearance {}", fmt_num(min));
    Ok(match f {
        Format::Csv => {
            let mut out = String::from("t,clearance,face_a,face_b\n");
            for s in &log {
                let (fa, fb) = s.faces.map_or((String::new(), String::new()), |(a, b)| (a.to_string(), b.to_string()));
                let _ = writeln!(out, "{},{},{fa},{fb}", fmt_num(s.t), fmt_num(s.clearance));
            }
            out.into_bytes()
        }
        _ => {
            let last = samples.last().expect("grid has at least one sample");
            let state = propagate_fold(&pattern, &last.angles)?;
            export_solids_obj(&solids, Some(&state)).into_bytes()
        }
    })
}

fn gen(a: &GenArgs, g: &Global) -> Out {
    let pattern = match a.kind {
        GenKind::Miura => gen_miura(a.rows, a.cols, angle("alpha", a.alpha, 0.0, 90.0 + 1e-12)?)?.pattern,
        GenKind::Yoshimura => gen_yoshimura(a.rows, a.cols, a.elongation)?.pattern,
        GenKind::DlMiura => {
            gen_dl_miura(a.rows, a.cols, angle("alpha", a.alpha, 0.0, 90.0 + 1e-12)?, angle("theta", a.theta, 0.0, 180.0)?)?
                .pattern
        }
        GenKind::DlYoshimura => gen_dl_yoshimura(a.rows, a.cols, a.elongation, angle("theta", a.theta, 0.0, 180.0)?)?.pattern,
        GenKind::Single => {
            gen_single_deg4(angle("alpha", a.alpha, 0.0, 180.0)?, angle("beta", a.beta, 0.0, 180.0)?)?.pattern
        }
        GenKind::Symmetric => gen_symmetric_vertex(a.n)?,
    };
    pattern_output(&pattern, g, "gen")
}

fn export(a: &ExportArgs, g: &Global) -> Out {
    let f = format(g, "export", &[Format::Fold, Format::Svg, Format::Obj, Format::Csv])?;
    let pattern = read_pattern(&a.file)?;
    Ok(match f {
        Format::Fold => save_fold(&pattern),
        Format::Svg => save_svg(&pattern, &SvgStyle::default()),
        Format::Obj => {
            let angles = pattern.fold_angles().unwrap_or_else(|| FoldAngleVector::zeros(pattern.creases().len()));
            export_obj(&pattern, &propagate_fold(&pattern, &angles)?).into_bytes()
        }
        Format::Csv => {
            let angles = pattern.fold_angles();
            let mut out = String::from("crease,v0,v1,assignment,rho_deg\n");
            for (e, c) in pattern.creases().iter().enumerate() {
                let rho = angles.as_ref().map_or_else(String::new, |a| deg(a[e]));
                let _ = writeln!(out, "{e},{},{},{},{rho}", c.vertices[0], c.vertices[1], c.assignment.fold_code());
            }
            out.into_bytes()
        }
    })
}
