//! Command-line front end.
//!
//! Exit codes: 0 for success or a passing check, 2 for a semantic failure
//! (invalid circuit, failing suite, failed pipeline stage), 1 for usage,
//! parse and schema errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::circuit::{self, Circuit};
use crate::matrix::residual;
use crate::rewrite;
use crate::structures::builtins::{builtin, BUILTIN_NAMES};
use crate::structures::ops::{self, Splitting};
use crate::structures::pipeline::run_pipeline;
use crate::structures::{check_suite, Gadget, StructureError, Suite, Window};
use crate::validity;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ldc",
    version,
    about = "Check, rewrite and evaluate linearly distributive circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Relative tolerance for matrix comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Truncation degree of the exponential.
    #[arg(long, global = true, default_value_t = 3)]
    pub degree: usize,
    /// Print rule applications as JSON lines on stderr.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Write a machine-readable JSON report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Seed for randomized rule orders.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the boxing procedure on a circuit file.
    Validate {
        path: PathBuf,
        /// Also rerun with this many random rule orders and require agreement.
        #[arg(long, default_value_t = 0)]
        orders: u64,
    },
    /// Reduce a circuit to normal form.
    Normalize { path: PathBuf },
    /// Render a circuit.
    Render {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Check an equation suite on a gadget.
    Check {
        /// Suite name, for example `complementary` or `dagger-linear-monoid`.
        #[arg(long)]
        suite: String,
        /// Built-in gadget name or path to a gadget JSON file.
        #[arg(long)]
        gadget: String,
        /// Only compare entries of total degree at most this value.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Split the idempotents of a gadget and print the result.
    Split {
        /// Built-in gadget name or path to a gadget JSON file.
        #[arg(long)]
        gadget: String,
        /// Which splitting to perform.
        #[arg(long = "as", value_enum)]
        structure: SplitKind,
    },
    /// Truncated exponential tools.
    Exp {
        #[command(subcommand)]
        command: ExpCommand,
    },
    /// List the built-in gadgets, or write them as JSON into `-o DIR`.
    Examples,
}

#[derive(Debug, Subcommand)]
pub enum ExpCommand {
    /// Lift, retract and split a complementary system through `!A`.
    Demo {
        /// Built-in gadget name or path to a gadget JSON file.
        #[arg(long, default_value = "qubit-zx")]
        gadget: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitKind {
    /// Binary idempotent `(u, v)`: prints the isomorphisms between images.
    Binary,
    /// Linear monoid along `(ea, eb)`.
    Monoid,
    /// Linear comonoid along `(ea, eb)`.
    Comonoid,
    /// Linear bialgebra along `(ea, eb)`.
    Bialgebra,
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<StructureError> for Failure {
    fn from(e: StructureError) -> Self {
        let code = match e {
            StructureError::SuiteFailure { .. }
            | StructureError::NotIdempotent(..)
            | StructureError::NotInvertible(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<i32, Failure> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    if cli.degree < 1 {
        return Err(Failure::usage("--degree must be at least 1"));
    }
    match &cli.command {
        Command::Validate { path, orders } => cmd_validate(cli, path, *orders),
        Command::Normalize { path } => cmd_normalize(cli, path),
        Command::Render { path, format } => cmd_render(cli, path, *format),
        Command::Check { suite, gadget, window } => cmd_check(cli, suite, gadget, *window),
        Command::Split { gadget, structure } => cmd_split(cli, gadget, *structure),
        Command::Exp {
            command: ExpCommand::Demo { gadget },
        } => cmd_exp_demo(cli, gadget),
        Command::Examples => cmd_examples(cli),
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    circuit::parse(&bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Resolves a built-in gadget name or reads a gadget JSON file.
pub fn load_gadget(name_or_path: &str) -> Result<Gadget, Failure> {
    if let Some(g) = builtin(name_or_path) {
        return Ok(g);
    }
    let text = fs::read_to_string(name_or_path).map_err(|e| {
        Failure::usage(format!(
            "`{name_or_path}` is neither a built-in gadget ({}) nor a readable file: {e}",
            BUILTIN_NAMES.join(", ")
        ))
    })?;
    Ok(Gadget::parse(&text)?)
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

fn write_report(cli: &Cli, value: &serde_json::Value) -> Result<(), Failure> {
    if let Some(p) = &cli.report {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        fs::write(p, text + "\n").map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_validate(cli: &Cli, path: &Path, orders: u64) -> Result<i32, Failure> {
    let c = read_circuit(path)?;
    let report = validity::validate(&c).map_err(|e| Failure::usage(e.to_string()))?;
    if cli.trace {
        eprint!("{}", validity::trace_json_lines(&report));
    }
    write_report(cli, &serde_json::to_value(&report).expect("reports serialize"))?;
    let mut out = String::new();
    if report.valid {
        out.push_str("valid\n");
    } else {
        out.push_str("invalid: boxing is stuck\n");
        if let Some(st) = &report.stuck {
            for b in &st.boxes {
                out.push_str(&format!("  box {} nodes {:?} wires {:?}\n", b.id, b.nodes, b.wires));
            }
            if !st.pending.is_empty() {
                out.push_str(&format!("  pending nodes {:?}\n", st.pending));
            }
            if !st.cut.is_empty() {
                out.push_str(&format!("  cut wires {:?}\n", st.cut));
            }
        }
    }
    let mut agree = true;
    if orders > 0 {
        let seeds: Vec<u64> = (0..orders).map(|k| cli.seed.wrapping_add(k)).collect();
        agree = validity::validate_all_orders(&c, &seeds);
        out.push_str(&format!(
            "{orders} random rule orders: {}\n",
            if agree { "agree" } else { "DISAGREE" }
        ));
    }
    emit(cli, out.as_bytes())?;
    Ok(if report.valid && agree { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_normalize(cli: &Cli, path: &Path) -> Result<i32, Failure> {
    let c = read_circuit(path)?;
    let (n, log) = rewrite::normalize_with_log(&c);
    if cli.trace {
        for rule in &log {
            eprintln!("{}", serde_json::json!({ "rule": rule }));
        }
    }
    eprintln!("nodes: {} -> {}", c.nodes().len(), n.nodes().len());
    emit(cli, &circuit::serialize(&n))?;
    Ok(EXIT_OK)
}

fn cmd_render(cli: &Cli, path: &Path, format: Format) -> Result<i32, Failure> {
    let c = read_circuit(path)?;
    let bytes = match format {
        Format::Dot => circuit::render_dot(&c),
        Format::Json => circuit::serialize(&c),
    };
    emit(cli, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_check(cli: &Cli, suite: &str, gadget: &str, window: Option<usize>) -> Result<i32, Failure> {
    let suite: Suite = suite.parse()?;
    let g = load_gadget(gadget)?;
    let window = window.map_or(Window::Full, Window::Total);
    let report = check_suite(&g, suite, cli.tol, window)?;
    write_report(cli, &report.to_json())?;
    let mut out = String::new();
    for eq in &report.equations {
        out.push_str(&format!(
            "{:<4} {:>10.3e}  {}\n",
            if eq.pass { "ok" } else { "FAIL" },
            eq.residual,
            eq.label
        ));
    }
    out.push_str(&format!(
        "{}: {} (worst residual {:.3e}, tol {:e})\n",
        report.suite,
        if report.pass { "pass" } else { "fail" },
        report.worst,
        report.tol
    ));
    emit(cli, out.as_bytes())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_split(cli: &Cli, gadget: &str, kind: SplitKind) -> Result<i32, Failure> {
    let g = load_gadget(gadget)?;
    let value = match kind {
        SplitKind::Binary => {
            let b = ops::split_binary_idempotent(&g, cli.tol)?;
            let k = b.alpha.rows();
            let id = crate::matrix::ComplexMatrix::identity(k);
            serde_json::json!({
                "rank": k,
                "alpha": b.alpha.to_json(),
                "beta": b.beta.to_json(),
                "alpha_beta_residual": residual(&b.alpha.then(&b.beta), &id),
                "beta_alpha_residual": residual(&b.beta.then(&b.alpha), &id),
            })
        }
        SplitKind::Monoid | SplitKind::Comonoid | SplitKind::Bialgebra => {
            let sp = Splitting::from_idempotents(g.morphism("ea")?, g.morphism("eb")?, cli.tol)?;
            let split = match kind {
                SplitKind::Monoid => ops::split_linear_monoid(&g, &sp, cli.tol, Window::Full)?,
                SplitKind::Comonoid => ops::split_linear_comonoid(&g, &sp, cli.tol, Window::Full)?,
                _ => ops::split_linear_bialgebra(&g, &sp, cli.tol, Window::Full)?,
            };
            split.to_json()
        }
    };
    let mut text = serde_json::to_string_pretty(&value).expect("json serializes");
    text.push('\n');
    emit(cli, text.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_exp_demo(cli: &Cli, gadget: &str) -> Result<i32, Failure> {
    let g = load_gadget(gadget)?;
    let (report, _) = run_pipeline(&g, cli.degree, cli.tol)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    write_report(cli, &serde_json::to_value(&report).expect("reports serialize"))?;
    let mut out = String::new();
    out.push_str(&format!("degree {}  tol {:e}\n", report.degree, report.tol));
    out.push_str(&format!(
        "retraction   1♭;ε = 1      residual {:.3e}\n",
        report.retraction
    ));
    out.push_str(&format!(
        "idempotent   e_!;e_! = e_!  residual {:.3e}\n",
        report.idempotent_bang
    ));
    out.push_str(&format!(
        "idempotent   e_?;e_? = e_?  residual {:.3e}\n",
        report.idempotent_quest
    ));
    match &report.conditions {
        Some(c) => out.push_str(&format!(
            "conditions   {}  worst {:.3e}\n",
            if c.pass { "pass" } else { "fail" },
            c.worst
        )),
        None => out.push_str("conditions   skipped\n"),
    }
    out.push_str(&format!(
        "split        complementary {}  worst {:.3e}\n",
        if report.split.pass { "pass" } else { "fail" },
        report.split.worst
    ));
    out.push_str(&format!("recovered    max difference {:.3e}\n", report.recovered));
    out.push_str(if report.pass {
        "pipeline: pass\n"
    } else {
        "pipeline: fail\n"
    });
    emit(cli, out.as_bytes())?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_examples(cli: &Cli) -> Result<i32, Failure> {
    if let Some(dir) = &cli.output {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
        for name in BUILTIN_NAMES {
            let g = builtin(name).expect("listed built-ins exist");
            let path = dir.join(format!("{name}.json"));
            let text = serde_json::to_string_pretty(&g.to_json()).expect("gadgets serialize") + "\n";
            fs::write(&path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            println!("{}", path.display());
        }
        return Ok(EXIT_OK);
    }
    for name in BUILTIN_NAMES {
        let g = builtin(name).expect("listed built-ins exist");
        println!("{name:<11} {}", g.kind);
    }
    Ok(EXIT_OK)
}
