use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gasket_forms::complex::spectrum::DEFAULT_TOL;
use gasket_forms::fractal::{build, standard_measure, Family, FractalSpec, Word};
use gasket_forms::measure::{kusuoka_growth, singularity_report, GROWTH_DEPTH_CAP, SAMPLE_LEVEL_CAP};
use gasket_forms::rational::{display, parse, to_f64, Rational};
use gasket_forms::sg::{d1_approx, trace_edge_data};
use gasket_forms::{io as codec, sg, sg3, verify, Error};

const EXIT_INVARIANT: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Deepest trace table the CLI builds; the measure has 3^depth cells.
const TRACE_DEPTH_CAP: usize = 12;

#[derive(Parser)]
#[command(name = "gasket-forms", version, about = "Discrete forms on Sierpinski gasket approximations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Target {
    /// Gasket family: sg or sg3.
    #[arg(long, default_value = "sg")]
    family: Family,
    /// Approximation level m.
    #[arg(long, default_value_t = 1)]
    level: usize,
    /// Directory for output files; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Export the level-m complex as JSON.
    Build(Target),
    /// Run the invariant suite; exits 2 if any check fails.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Harmonic 1-form basis with its cycle pairings.
    Basis(Target),
    /// Dual basis of the SG cycle pairing.
    DualBasis(Target),
    /// Eigenvalue CSV of the degree-k Laplacian.
    Spectrum {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Hodge decomposition of a KForm JSON file.
    Hodge {
        #[command(flatten)]
        target: Target,
        input: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
    },
    /// L1 differences of dyadic approximants along an edge, up to --level.
    Singularity {
        #[command(flatten)]
        target: Target,
        /// Harmonic boundary values on q0,q1,q2.
        #[arg(long, default_value = "0,1,0")]
        boundary: String,
        #[arg(long, default_value_t = 0)]
        edge: usize,
    },
    /// Growth of the energy measure of a harmonic function along the bottom edge.
    Kusuoka {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "1,0,0")]
        boundary: String,
        #[arg(long, default_value_t = GROWTH_DEPTH_CAP)]
        depth: usize,
    },
    /// Edge-trace and derivative approximants for unit density.
    Trace {
        #[command(flatten)]
        target: Target,
        /// Measure level n; defaults to level + 4.
        #[arg(long)]
        depth: Option<usize>,
    },
}

/// Failure of a command, carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceCap(_) => EXIT_CAP,
            Error::Consistency(_) | Error::Numeric(_) => EXIT_INVARIANT,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn cap_level(target: &Target) -> Result<(), Failure> {
    let cap = verify::level_cap(target.family);
    if target.level > cap {
        return Err(Error::ResourceCap(format!("{} level {} exceeds {cap}", target.family.name(), target.level)).into());
    }
    Ok(())
}

/// Writes `text` to `out/name`, or to stdout without `--out`.
fn emit(out: &Option<PathBuf>, name: &str, text: &[u8]) -> Outcome {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), text)?;
        }
        None => io::stdout().lock().write_all(text)?,
    }
    Ok(())
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> gasket_forms::Result<()>) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn parse_triple(text: &str) -> Result<[Rational; 3], Failure> {
    let values: Vec<Rational> = text
        .split(',')
        .map(|s| parse(s).ok_or_else(|| input_error(format!("`{s}` is not a rational"))))
        .collect::<Result<_, _>>()?;
    values.try_into().map_err(|_| input_error(format!("expected three values, got `{text}`")))
}

fn with_newline(mut text: String) -> Vec<u8> {
    text.push('\n');
    text.into_bytes()
}

fn run_build(target: &Target) -> Outcome {
    let g = build(target.family, target.level)?;
    emit(&target.out, "complex.json", &with_newline(codec::complex_to_json(g.complex())))
}

fn run_verify(target: &Target, seed: u64) -> Outcome {
    let checks = verify::run(target.family, target.level, seed)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut report = String::new();
    for c in &checks {
        report.push_str(&format!("{c}\n"));
    }
    report.push_str(&format!(
        "summary: {} level {}: {} checks, {failed} violations\n",
        target.family.name(),
        target.level,
        checks.len()
    ));
    emit(&target.out, "verify.txt", report.as_bytes())?;
    if failed > 0 {
        return Err(Failure { code: EXIT_INVARIANT, message: format!("{failed} checks failed") });
    }
    Ok(())
}

fn run_basis(target: &Target, dual: bool) -> Outcome {
    cap_level(target)?;
    let m = target.level;
    match target.family {
        Family::Sg => {
            let (forms, table) = if dual { sg::dual_basis(m)? } else { sg::pairing_table(m)? };
            emit(&target.out, "forms.json", &with_newline(codec::harmonic_family_to_json(&forms)))?;
            if target.out.is_some() {
                emit(&target.out, "pairing.csv", &csv_bytes(|b| codec::write_pairing_csv(b, &table))?)?;
            }
        }
        Family::Sg3 => {
            if dual {
                return Err(input_error("dual-basis is defined for sg only"));
            }
            let forms = sg3::basis(m)?;
            emit(&target.out, "forms.json", &with_newline(codec::harmonic_family_to_json(&forms)))?;
            if target.out.is_some() {
                emit(&target.out, "face_cycles.csv", &face_cycle_table(&forms)?)?;
            }
        }
    }
    Ok(())
}

/// One row per form, simplex and face.
fn face_cycle_table(forms: &[sg3::TetraForm]) -> Result<Vec<u8>, Failure> {
    let mut rows = Vec::new();
    for h in forms {
        for ((word, face), v) in sg3::face_cycle_data(h)? {
            rows.push((h.provenance.to_string(), word, face, v));
        }
    }
    csv_bytes(|b| codec::write_face_cycles_csv(b, &rows))
}

fn run_spectrum(target: &Target, degree: usize, tol: f64) -> Outcome {
    cap_level(target)?;
    let g = build(target.family, target.level)?;
    let report = g.complex().spectrum(degree, tol)?;
    emit(&target.out, "spectrum.csv", &csv_bytes(|b| codec::write_spectrum_csv(b, &report))?)
}

fn run_hodge(target: &Target, input: &Path, mode: Mode) -> Outcome {
    cap_level(target)?;
    let text = fs::read_to_string(input).map_err(|e| input_error(format!("{}: {e}", input.display())))?;
    let g = build(target.family, target.level)?;
    let c = g.complex();
    let f = codec::kform_from_json(&text, c)?;
    let out = match mode {
        Mode::Exact => codec::hodge_parts_to_json(&c.hodge_decompose(&f)?),
        Mode::Float => {
            let values: Vec<f64> = f.values().iter().map(to_f64).collect();
            let (exact, coexact, harmonic) = c.hodge_decompose_float(f.degree(), &values)?;
            codec::float_parts_to_json(c.id(), f.degree(), &exact, &coexact, &harmonic)
        }
    };
    emit(&target.out, "hodge.json", &with_newline(out))
}

fn run_singularity(target: &Target, boundary: &str, edge: usize) -> Outcome {
    if target.level > SAMPLE_LEVEL_CAP {
        return Err(Error::ResourceCap(format!("level {} exceeds {SAMPLE_LEVEL_CAP}", target.level)).into());
    }
    let report = singularity_report(&parse_triple(boundary)?, edge, target.level)?;
    emit(&target.out, "singularity.csv", &csv_bytes(|b| codec::write_singularity_csv(b, &report))?)
}

fn run_kusuoka(target: &Target, boundary: &str, depth: usize) -> Outcome {
    let rows = kusuoka_growth(&parse_triple(boundary)?, depth)?;
    emit(&target.out, "growth.csv", &csv_bytes(|b| codec::write_growth_csv(b, &rows))?)
}

fn run_trace(target: &Target, depth: Option<usize>) -> Outcome {
    let m = target.level;
    let n = depth.unwrap_or(m + 4);
    if n > TRACE_DEPTH_CAP {
        return Err(Error::ResourceCap(format!("trace depth {n} exceeds {TRACE_DEPTH_CAP}")).into());
    }
    if n <= m {
        return Err(input_error(format!("trace depth {n} must exceed the level {m}")));
    }
    // f ≡ 1: the measure is the standard one
    let mu = standard_measure(&FractalSpec::sg(), n)?;
    let traces = trace_edge_data(&mu, m)?;
    let edge_data = trace_edge_data(&mu, n - 1)?;
    let mut rows = Vec::new();
    for (id, v) in traces.iter().enumerate() {
        let word = Word::from_index(m, id / 3, 3);
        rows.push(vec!["trace".into(), word.to_string(), (id % 3).to_string(), display(v)]);
    }
    for word in Word::all(m, 3) {
        let v = d1_approx(&edge_data, &word, n - 1)?;
        rows.push(vec!["derivative".into(), word.to_string(), String::new(), display(&v)]);
    }
    emit(&target.out, "trace.csv", &csv_bytes(|b| codec::write_table(b, &["kind", "word", "edge", "value"], rows))?)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Build(t) => run_build(&t),
        Command::Verify { target, seed } => run_verify(&target, seed),
        Command::Basis(t) => run_basis(&t, false),
        Command::DualBasis(t) => run_basis(&t, true),
        Command::Spectrum { target, degree, tol } => run_spectrum(&target, degree, tol),
        Command::Hodge { target, input, mode } => run_hodge(&target, &input, mode),
        Command::Singularity { target, boundary, edge } => run_singularity(&target, &boundary, edge),
        Command::Kusuoka { target, boundary, depth } => run_kusuoka(&target, &boundary, depth),
        Command::Trace { target, depth } => run_trace(&target, depth),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
