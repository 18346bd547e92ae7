//! Front end for `fdim-core`: algebra files, module expressions, commands and
//! JSON/text reports.
//!
//! Exit status: 0 on success, 2 when the outcome is a mathematical refutation
//! (a refuted hypothesis, a violated bound, a failed corpus invariant), 1 on
//! operational errors.

pub mod commands;
pub mod corpus;
pub mod names;
pub mod render;
pub mod specfile;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use fdim_core::homology::{DEFAULT_CUTOFF, MAX_CUTOFF};
use fdim_core::FieldSpec;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub use specfile::{parse_spec, render_spec, AlgebraSpecFile, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Core(#[from] fdim_core::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(name = "fdim", version, about = "Homological invariants of monomial quiver algebras")]
pub struct Cli {
    /// Algebra file.
    #[arg(long, global = true)]
    pub alg: Option<PathBuf>,
    /// Resolution cutoff (default 12; the corpus defaults to 8).
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Override the field of the algebra file: Q or F<p>.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Idempotent subset that puts the context atoms (AeA, Abar, Ae, ...) in
    /// scope for module arguments of resolve, pd, injdim, tor and ext.
    #[arg(long, global = true, value_name = "E")]
    pub idem: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Basis, projectives and their Loewy layers.
    Info,
    /// Minimal projective resolution.
    Resolve { module: String },
    /// Projective dimension.
    Pd { module: String },
    /// Injective dimension.
    Injdim { module: String },
    /// dim Tor_k(right, left) for k <= n.
    Tor { right: String, left: String, n: usize },
    /// dim Ext^k(x, y) for k <= n.
    Ext { x: String, y: String, n: usize },
    /// The idempotent ideal context for a vertex subset.
    Context { subset: String },
    /// Strong idempotency of AeA by both routes.
    IdealCheck { subset: String },
    /// Membership of a module in P_e^k for k up to the cutoff.
    PeCheck { subset: String, module: String },
    /// pd over A against pd over eAe for a module in P_e^∞.
    PdTransfer { subset: String, module: String },
    /// Finitistic dimension bounds on a witness battery.
    Bounds {
        subset: String,
        /// Witness modules (default: the standard battery).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        witnesses: Vec<String>,
        /// Restrict to these bounds (1-6).
        #[arg(long = "bound", value_delimiter = ',')]
        bounds: Vec<u8>,
        #[command(flatten)]
        asserted: AssertedFdims,
    },
    /// The trace lemmas and the short exact sequence bounds for one module.
    LemmaCheck {
        subset: String,
        module: String,
        /// Syzygy degree for the syzygy-trace lemma.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[command(flatten)]
        asserted: AssertedFdims,
    },
    /// The bound fdim(A) <= n + fdim(B) + fdim(Ā) + 2 under a Tor-vanishing hypothesis.
    GeneralCheck {
        subset: String,
        n: usize,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        witnesses: Vec<String>,
        #[command(flatten)]
        asserted: AssertedFdims,
    },
    /// A certified value (or lower bound) for fdim of the algebra.
    Fdim {
        /// auto, local, global, search or a number to assert.
        #[arg(long, default_value = "auto")]
        method: String,
        /// Dimension limit for `search`.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Look for a standardly stratifying chain of idempotent ideals.
    StratifiedSearch,
    /// Random monomial algebras through the cross-check suite.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
    },
}

/// User-asserted fdim values, overriding automatic certificates.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct AssertedFdims {
    #[arg(long)]
    pub fdim_b: Option<usize>,
    #[arg(long)]
    pub fdim_abar: Option<usize>,
    #[arg(long)]
    pub fidim_b: Option<usize>,
    #[arg(long)]
    pub fidim_abar: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    /// Command line without the file paths.
    pub command: Vec<String>,
    pub input_digest: String,
    pub result: serde_json::Value,
}

/// What a command produced.
#[derive(Debug)]
pub struct CommandOutput {
    pub result: serde_json::Value,
    pub text: String,
    pub refuted: bool,
}

#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
    /// Where `stdout` should go instead of standard output.
    pub out: Option<PathBuf>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Deterministic JSON: object keys sorted, two-space indentation.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

fn echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        match a.as_str() {
            "--alg" | "--out" => {
                it.next();
            }
            "--json" => {}
            s if s.starts_with("--alg=") || s.starts_with("--out=") => {}
            s => out.push(s.to_string()),
        }
    }
    out
}

/// Parses `argv` (program name first), runs the command and renders the
/// report. Does not write files or touch the process exit status.
pub fn run<S: AsRef<str>>(argv: &[S]) -> Outcome {
    let argv: Vec<String> = argv.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let exit = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let msg = e.render().to_string();
            let (stdout, stderr) = if exit == EXIT_OK { (msg, String::new()) } else { (String::new(), msg) };
            return Outcome { stdout, stderr, exit, out: None };
        }
    };
    match execute(&cli, &argv) {
        Ok((report, out)) => {
            let stdout = if cli.json {
                let mut s = to_json(&report);
                s.push('\n');
                s
            } else {
                out.text
            };
            Outcome {
                stdout,
                stderr: String::new(),
                exit: if out.refuted { EXIT_REFUTED } else { EXIT_OK },
                out: cli.out.clone(),
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit: EXIT_ERROR,
            out: None,
        },
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<(Report, CommandOutput), CliError> {
    if let Some(c) = cli.cutoff.filter(|&c| c > MAX_CUTOFF) {
        return Err(CliError::Usage(format!("cutoff {c} exceeds the maximum {MAX_CUTOFF}")));
    }
    let field: Option<FieldSpec> = cli.field.as_deref().map(str::parse).transpose()?;
    let command = echo(argv);
    if let Command::Corpus { seed, count } = cli.command {
        let out = corpus::corpus_command(seed, count, field, cli.cutoff.unwrap_or(corpus::CORPUS_CUTOFF))?;
        let digest = sha256_hex(command.join(" ").as_bytes());
        let report = Report {
            command,
            input_digest: digest,
            result: out.result.clone(),
        };
        return Ok((report, out));
    }
    let path = cli
        .alg
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --alg <file>".into()))?;
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{}: not UTF-8", path.display())))?;
    let mut spec = parse_spec(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })?;
    if let Some(f) = field {
        spec = reinterpret(&spec, f)?;
    }
    let out = commands::dispatch(cli, &spec)?;
    let report = Report {
        command,
        input_digest: sha256_hex(&bytes),
        result: out.result.clone(),
    };
    Ok((report, out))
}

/// Re-reads a parsed file over another field, so literals are canonical there.
fn reinterpret(spec: &AlgebraSpecFile, field: FieldSpec) -> Result<AlgebraSpecFile, CliError> {
    let mut s = spec.clone();
    s.field = field;
    parse_spec(&render_spec(&s)).map_err(|source| CliError::Parse {
        path: "--field".into(),
        source,
    })
}

impl Cli {
    pub fn cutoff(&self) -> usize {
        self.cutoff.unwrap_or(DEFAULT_CUTOFF)
    }
}
