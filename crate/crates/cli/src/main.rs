//! `ihq`: build, validate and reduce circle-action instances.
//!
//! Exit codes: 0 success, 1 a check failed or the engine refused the
//! input, 2 bad arguments or an unreadable/invalid document.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ihq_core::engine::{crosscheck, duality_check, CrosscheckReport, DualityReport, Reduction};
use ihq_core::instances::{build_projective_space, build_sphere_product, load_instance, save_instance};
use ihq_core::model::{index_of, validate_abbv, validate_morse, AbbvReport, MorseReport};
use ihq_core::rational::{parse_rational, Compact};
use ihq_core::{IHPresentation, Instance, KernelReport, Mode, Rational, Side};
use num_traits::{One, Zero};
use serde::Serialize;

const MAX_DEGREE_VAR: &str = "IHQ_MAX_DEGREE";

#[derive(Parser)]
#[command(
    name = "ihq",
    version,
    about = "Intersection cohomology of circle quotients from fixed-point data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance document.
    MakeExample {
        kind: Kind,
        /// Comma-separated integer weights.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<i64>,
        /// Moment-map shift, as p/q.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        shift: String,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the localization and Morse-count validators on a document.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Reduce at a level and report the intersection cohomology.
    Compute {
        #[arg(short, long)]
        input: PathBuf,
        /// Reduction level, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        level: String,
        #[arg(long, value_enum, default_value_t = Report::All)]
        report: Report,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// ℂP^n with a linear action; one weight per homogeneous coordinate.
    Cpn,
    /// A product of rotated two-spheres; one weight per factor.
    Spheres,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Betti,
    Pairing,
    Ring,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::MakeExample {
            kind,
            weights,
            shift,
            output,
        } => make_example(kind, &weights, &shift, output.as_deref()),
        Command::Validate { input } => validate(&input),
        Command::Compute {
            input,
            level,
            report,
            format,
        } => compute(&input, &level, report, format),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_level(s: &str, what: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(|e| Failure::usage(format!("--{what}: {e}")))
}

fn make_example(kind: Kind, weights: &[i64], shift: &str, output: Option<&Path>) -> Result<ExitCode, Failure> {
    let shift = parse_level(shift, "shift")?;
    let built = match kind {
        Kind::Cpn => build_projective_space(weights, &shift),
        Kind::Spheres => build_sphere_product(weights, &shift),
    };
    let inst = built.map_err(|e| Failure::usage(e.to_string()))?;
    let text = save_instance(&inst);
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {} to {}", inst.name(), path.display());
        }
        None => emit(&text),
    }
    Ok(ExitCode::SUCCESS)
}

/// Reads a document and applies `IHQ_MAX_DEGREE`.
fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let inst = load_instance(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let inst = match std::env::var(MAX_DEGREE_VAR) {
        Ok(v) => {
            let cap: u32 = v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{MAX_DEGREE_VAR}={v:?} is not a non-negative integer")))?;
            inst.capped(cap)
        }
        Err(_) => inst,
    };
    for w in inst.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(inst)
}

fn validate(path: &Path) -> Result<ExitCode, Failure> {
    let inst = load(path)?;
    println!(
        "load: ok ({}, dim M = {}, {} components, {} classes, degree bound {})",
        inst.name(),
        inst.dim_m(),
        inst.components().len(),
        inst.classes().len(),
        inst.degree_bound()
    );
    let mut ok = true;

    let abbv = validate_abbv(&inst);
    if abbv.passed() {
        println!("validate_abbv: pass ({} classes)", abbv.checked);
    } else {
        ok = false;
        println!(
            "validate_abbv: FAIL ({} of {} classes)",
            abbv.failures.len(),
            abbv.checked
        );
        for f in &abbv.failures {
            let terms: Vec<String> = f.exponents.iter().map(|(p, c)| format!("{c}·t^{p}")).collect();
            println!("  class {:?}: surviving negative powers {}", f.class, terms.join(" + "));
        }
    }

    let morse = validate_morse(&inst);
    if morse.passed() {
        println!("validate_morse: pass (degrees 0..={})", inst.degree_bound());
    } else {
        ok = false;
        println!("validate_morse: FAIL in degrees {:?}", morse.mismatches());
        for d in morse.degrees.iter().filter(|d| d.expected != d.found) {
            println!(
                "  degree {}: expected {} classes, found {}",
                d.degree, d.expected, d.found
            );
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ComponentRow {
    id: String,
    dim: u32,
    #[serde(serialize_with = "ihq_core::rational::serialize")]
    moment_value: Rational,
    index: u32,
    codim: u32,
    side: Side,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Checks {
    abbv: AbbvReport,
    morse: MorseReport,
    duality: DualityReport,
    crosscheck: CrosscheckReport,
    passed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ComputeReport<'a> {
    instance: &'a str,
    #[serde(serialize_with = "ihq_core::rational::serialize")]
    level: Rational,
    mode: Mode,
    reduced_dim: u32,
    components: Vec<ComponentRow>,
    betti: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    kernels: Option<&'a KernelReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    presentation: Option<&'a IHPresentation>,
    checks: Checks,
    warnings: Vec<String>,
}

fn compute(path: &Path, level: &str, report: Report, format: Format) -> Result<ExitCode, Failure> {
    let level = parse_level(level, "level")?;
    let inst = load(path)?;
    let engine = |e: ihq_core::EngineError| Failure::check(e.to_string());
    let red = Reduction::new(&inst, level.clone()).map_err(engine)?;
    let kernels = red.kernel_report().map_err(engine)?;
    let presentation = red.presentation().map_err(engine)?;
    let duality = duality_check(&presentation, inst.dim_m());
    let cross = crosscheck(&red).map_err(engine)?;
    let abbv = validate_abbv(&inst);
    let morse = validate_morse(&inst);
    let passed = abbv.passed() && morse.passed() && duality.passed() && cross.passed();

    let components = inst
        .components()
        .iter()
        .zip(red.sides())
        .map(|(f, s)| ComponentRow {
            id: f.id().to_owned(),
            dim: f.dim(),
            moment_value: f.moment().clone(),
            index: index_of(f),
            codim: f.codim(),
            side: *s,
        })
        .collect();
    let wants = |r: Report| report == r || report == Report::All;
    let out = ComputeReport {
        instance: inst.name(),
        level,
        mode: red.mode(),
        reduced_dim: inst.reduced_dim(),
        components,
        betti: &presentation.betti,
        kernels: wants(Report::Betti).then_some(&kernels),
        presentation: (wants(Report::Pairing) || wants(Report::Ring)).then_some(&presentation),
        checks: Checks {
            abbv,
            morse,
            duality,
            crosscheck: cross,
            passed,
        },
        warnings: inst.warnings(),
    };
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&out).expect("reports serialize");
            emit(&(text + "\n"));
        }
        Format::Md => emit(&markdown(&out, &presentation, report)),
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Writes to stdout; a reader that goes away early is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing output: {e}");
        }
    }
}

fn side_symbol(s: Side) -> &'static str {
    match s {
        Side::Plus => "𝓕⁺",
        Side::Minus => "𝓕⁻",
    }
}

fn markdown(r: &ComputeReport<'_>, p: &IHPresentation, report: Report) -> String {
    let mut s = String::new();
    let mode = match r.mode {
        Mode::Singular => "singular",
        Mode::Regular => "regular",
    };
    let _ = writeln!(s, "# {} at level {}\n", r.instance, Compact(&r.level));
    let _ = writeln!(s, "Level type: {mode}; dim M_red = {}.\n", r.reduced_dim);
    let rows: Vec<Vec<String>> = r
        .components
        .iter()
        .map(|c| {
            vec![
                c.id.clone(),
                c.dim.to_string(),
                Compact(&c.moment_value).to_string(),
                c.index.to_string(),
                c.codim.to_string(),
                side_symbol(c.side).to_owned(),
            ]
        })
        .collect();
    s += &table(&strings(["component", "dim", "Φ", "index", "codim", "side"]), &rows);
    let betti: Vec<String> = r.betti.iter().map(usize::to_string).collect();
    let _ = writeln!(s, "\nIH: {}", betti.join(" "));

    if report == Report::Betti || report == Report::All {
        if let Some(k) = r.kernels {
            let rows: Vec<Vec<String>> = k
                .per_degree
                .iter()
                .take(r.reduced_dim as usize + 1)
                .map(|d| {
                    [d.degree as usize, d.dim_h, d.dim_k_plus, d.dim_k_minus, d.dim_ih]
                        .iter()
                        .map(usize::to_string)
                        .collect()
                })
                .collect();
            s.push('\n');
            s += &table(&strings(["degree", "dim H", "dim K₊", "dim K₋", "dim IH"]), &rows);
        }
    }

    if report == Report::Pairing || report == Report::All {
        let _ = writeln!(s, "\n## Pairing");
        let top = p.reduced_dim as usize;
        for (d, m) in p.pairing_matrices.iter().enumerate() {
            if m.rows() == 0 {
                continue;
            }
            let _ = writeln!(s, "\nDegree {d} × {}:\n", top - d);
            let mut header = vec![String::new()];
            header.extend(p.representatives[top - d].iter().cloned());
            let rows: Vec<Vec<String>> = p.representatives[d]
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    std::iter::once(name.clone())
                        .chain(m.row(i).iter().map(|q| Compact(q).to_string()))
                        .collect()
                })
                .collect();
            s += &table(&header, &rows);
        }
    }

    if report == Report::Ring || report == Report::All {
        let _ = writeln!(s, "\n## Ring\n");
        for (d, reps) in p.representatives.iter().enumerate() {
            if !reps.is_empty() {
                let _ = writeln!(s, "- degree {d}: {}", reps.join(", "));
            }
        }
        let _ = writeln!(s);
        for c in &p.products {
            let names = &p.representatives[(c.left.0 + c.right.0) as usize];
            let _ = writeln!(
                s,
                "- {} · {} = {}",
                p.representatives[c.left.0 as usize][c.left.1],
                p.representatives[c.right.0 as usize][c.right.1],
                linear_combination(&c.value, names)
            );
        }
        for (name, v) in p.representatives[p.reduced_dim as usize].iter().zip(&p.integration) {
            let _ = writeln!(s, "- ∫ {name} = {}", Compact(v));
        }
    }

    let _ = writeln!(s, "\n## Checks\n");
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
    let _ = writeln!(s, "- validate_abbv: {}", verdict(r.checks.abbv.passed()));
    for f in &r.checks.abbv.failures {
        let _ = writeln!(s, "  - class {:?} leaves negative powers of t", f.class);
    }
    let _ = writeln!(s, "- validate_morse: {}", verdict(r.checks.morse.passed()));
    let _ = writeln!(s, "- duality_check: {}", verdict(r.checks.duality.passed()));
    for v in &r.checks.duality.violations {
        let _ = writeln!(s, "  - {v}");
    }
    let _ = writeln!(s, "- crosscheck_theorems: {}", verdict(r.checks.crosscheck.passed()));
    for d in r.checks.crosscheck.degrees.iter().filter(|d| !d.agrees()) {
        let _ = writeln!(
            s,
            "  - degree {}: form rank {}, quotient dim {}, radical = K: {}",
            d.degree, d.form_rank, d.quotient_dim, d.radical_equals_kernel
        );
    }
    if let Some(agree) = r.checks.crosscheck.regular_agreement {
        let _ = writeln!(s, "- regular pipeline agreement: {}", verdict(agree));
    }
    for w in &r.warnings {
        let _ = writeln!(s, "- warning: {w}");
    }
    s
}

/// A markdown table with columns padded to a common width.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |c: &str| c.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h).max(3)).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - width(c))))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out += &line(&rule);
    for row in rows {
        out += &line(row);
    }
    out
}

fn strings<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

fn linear_combination(coeffs: &[Rational], names: &[String]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| {
            if c.is_one() {
                n.clone()
            } else if (-c).is_one() {
                format!("-{n}")
            } else {
                format!("{}·{n}", Compact(c))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}
