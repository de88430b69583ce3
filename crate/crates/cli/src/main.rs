//! `invhankel` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
//! 3 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use invhankel::caratheodory::SampleMode;
use invhankel::classes::{h3, FunctionClass};
use invhankel::objectives::{compare_transcribed_partials, monomials_csv, Objective};
use invhankel::optimizer::{maximize_on_box, BoxMaxResult, PointKind, MIN_GRID};
use invhankel::verification::{sample_class, sample_rows, verify_class, TheoremReport, VerifyConfig, VerifyError};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "invhankel",
    version,
    about = "Sharp third Hankel determinant bounds for inverse coefficients of R and R1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full reproduction of the bound for a class (r: 44/135, r1: 1/64)
    Verify {
        class: FunctionClass,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Global maximum of g, g1, h or h1 on the unit square
    MaxObjective {
        which: Objective,
        #[arg(long, default_value_t = 128)]
        grid_n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Monte Carlo sampling of |H3| over the Schur polydisk
    Sample {
        class: FunctionClass,
        #[command(flatten)]
        run: RunOpts,
    },
    /// H3(1) of the coefficients a2 a3 a4 a5, each given as `re` or `re,im`
    Hankel {
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        a2: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        a3: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        a4: Complex64,
        #[arg(allow_hyphen_values = true, value_parser = parse_complex)]
        a5: Complex64,
        #[command(flatten)]
        out: OutOpts,
    },
    /// Monomial table of an objective as `i,j,coeff`
    DumpObjective {
        which: Objective,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the formal partial derivatives with their transcriptions
    CheckPartials,
}

#[derive(Args, Debug)]
struct RunOpts {
    #[arg(long, default_value_t = 128)]
    grid_n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value = "boundary-biased")]
    mode: SampleMode,
    #[command(flatten)]
    out: OutOpts,
}

#[derive(Args, Debug)]
struct OutOpts {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

fn parse_complex(tok: &str) -> Result<Complex64, String> {
    let bad = || format!("malformed coefficient `{tok}` (expected `re` or `re,im`)");
    let mut parts = tok.split(',');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_csv<T: serde::Serialize>(w: Box<dyn Write>, rows: impl IntoIterator<Item = T>) -> Result<(), Failure> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

fn config(run: &RunOpts) -> VerifyConfig {
    VerifyConfig {
        grid_n: run.grid_n,
        n_samples: run.n,
        seed: run.seed,
        tol: run.tol,
        mode: run.mode,
        ..Default::default()
    }
}

fn fmt_point(s: f64, u: f64) -> String {
    format!("({s}, {u})")
}

fn write_candidates(w: &mut dyn Write, r: &BoxMaxResult) -> io::Result<()> {
    let sections =
        [("I    vertices", PointKind::Vertex), ("II   edges", PointKind::Edge), ("III  interior", PointKind::Interior)];
    for (title, kind) in sections {
        writeln!(w, "{title}")?;
        let mut any = false;
        for c in r.all_candidates.iter().filter(|c| c.kind == kind) {
            any = true;
            writeln!(w, "     {:<44} {:>22}   residual {:.1e}", fmt_point(c.s, c.u), c.value, c.residual)?;
        }
        if !any {
            writeln!(w, "     none")?;
        }
    }
    writeln!(w, "max {} at {} [{:?}]", r.max_value, fmt_point(r.argmax.0, r.argmax.1), r.argmax_kind)
}

fn write_report_text(w: &mut dyn Write, r: &TheoremReport) -> io::Result<()> {
    writeln!(w, "class {}  normalizer {}", r.class.label(), r.normalizer)?;
    for (o, m) in &r.branch_maxima {
        writeln!(w, "\nobjective {o}")?;
        write_candidates(w, m)?;
    }
    writeln!(w)?;
    match r.bound {
        Some(b) => writeln!(w, "bound {}/{} = {}", b.num, b.den, r.bound_float)?,
        None => writeln!(w, "bound {} (not exact)", r.bound_float)?,
    }
    writeln!(w, "extremal |H3| {}", r.extremal_value)?;
    let s = &r.sampling;
    writeln!(
        w,
        "sampling n={} seed={} sup={} violations={} envelope_violations={}",
        s.n, s.seed, s.sup, s.violations, s.envelope_violations
    )?;
    writeln!(w, "consistency max relative error {:e}\n", r.consistency_max_err)?;
    for c in &r.checks {
        writeln!(w, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    writeln!(w, "{}", if r.passed { "PASSED" } else { "FAILED" })
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Verify { class, run } => {
            let report = verify_class(class, &config(&run)).map_err(|e: VerifyError| Failure::Usage(e.to_string()))?;
            let mut w = sink(&run.out.out)?;
            match run.out.format {
                Format::Json => writeln!(w, "{}", report.to_json())?,
                Format::Csv => {
                    write_csv(w, &report.checks)?;
                    return Ok(report.passed);
                }
                Format::Text => write_report_text(&mut w, &report)?,
            }
            w.flush()?;
            Ok(report.passed)
        }
        Command::MaxObjective { which, grid_n, tol, out } => {
            if grid_n < MIN_GRID {
                return Err(Failure::Usage(format!("--grid-n must be at least {MIN_GRID}")));
            }
            let r = maximize_on_box(which.poly(), grid_n, tol).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut w = sink(&out.out)?;
            match out.format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&r).expect("serializable"))?,
                Format::Csv => return write_csv(w, &r.all_candidates).map(|_| true),
                Format::Text => {
                    writeln!(w, "objective {which} (class {})", which.class().label())?;
                    write_candidates(&mut w, &r)?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::Sample { class, run } => {
            let cfg = config(&run);
            if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
                return Err(Failure::Usage("--tol must be positive".into()));
            }
            let mut w = sink(&run.out.out)?;
            if run.out.format == Format::Csv {
                write_csv(w, sample_rows(class, cfg.n_samples, cfg.seed, cfg.mode, cfg.exec))?;
                return Ok(true);
            }
            let s = sample_class(class, cfg.n_samples, cfg.seed, cfg.mode, cfg.tol, cfg.exec);
            match run.out.format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&s).expect("serializable"))?,
                _ => {
                    writeln!(w, "class {}  n {}  seed {}  mode {:?}", class.label(), s.n, s.seed, s.mode)?;
                    writeln!(w, "sup |H3| {}  (bound {})", s.sup, class.sharp_bound_f64())?;
                    writeln!(w, "violations {}  envelope_violations {}", s.violations, s.envelope_violations)?;
                }
            }
            w.flush()?;
            Ok(s.violations == 0)
        }
        Command::Hankel { a2, a3, a4, a5, out } => {
            let v = h3(a2, a3, a4, a5);
            let mut w = sink(&out.out)?;
            match out.format {
                Format::Json => writeln!(w, "{}", serde_json::json!({ "re": v.re, "im": v.im, "abs": v.norm() }))?,
                Format::Csv => writeln!(w, "re,im,abs\n{},{},{}", v.re, v.im, v.norm())?,
                Format::Text => writeln!(w, "H3 = {} + {}i\n|H3| = {}", v.re, v.im, v.norm())?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::DumpObjective { which, out } => {
            let mut w = sink(&out)?;
            w.write_all(monomials_csv(which.poly()).as_bytes())?;
            w.flush()?;
            Ok(true)
        }
        Command::CheckPartials => {
            let mut w = io::stdout().lock();
            for c in compare_transcribed_partials() {
                let status = if c.matches() { "match" } else { "differs" };
                writeln!(w, "d{}/d{}: {status}", c.objective, c.variable)?;
                for (i, j, formal, written) in &c.mismatches {
                    writeln!(w, "    s^{i} u^{j}: formal {formal}, transcribed {written}")?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
