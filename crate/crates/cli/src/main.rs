//! `logcl`: logarithmic class groups and capitulation from the command line.
//!
//! Every command prints one JSON document. Exit status: 0 on success, 1 on
//! invalid input, 2 when a cap is exceeded or the computation is
//! unsupported, 3 when a self-test suite fails.

mod jobs;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use logcl::numfield::FieldCaps;
use logcl::units_classes::SearchCaps;
use logcl::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "logcl", version, about = "Logarithmic class groups and capitulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Compact single-line JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Logarithmic class group of one field.
    Compute {
        #[arg(long)]
        field: String,
        #[command(flatten)]
        common: Common,
    },
    /// Capitulation of logarithmic classes from a base field in an extension.
    Capitulate {
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        ext: Option<String>,
        /// Image of the generator of the base, as comma-separated
        /// power-basis coordinates in the extension.
        #[arg(long)]
        embedding: Option<String>,
        /// Extension fixture supplying units and S-units of the extension.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Imaginary and real quadratic fields `x^2 - d` over a range of `d`.
    Scan {
        /// Inclusive range `a..b`.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant suites with a fixed seed.
    Selftest {
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compares group invariants with a fixture file or directory.
    Compare {
        #[arg(long)]
        fixtures: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// The prime `l` (default 3, or the fixture's).
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long, default_value_t = 32)]
    prec: u32,
    #[arg(long = "caps.degree", default_value_t = 8)]
    caps_degree: usize,
    #[arg(long = "caps.disc", default_value = "10000000000")]
    caps_disc: String,
    #[arg(long = "caps.box", default_value_t = 96)]
    caps_box: i64,
    #[arg(long = "caps.elements", default_value_t = 400_000)]
    caps_elements: usize,
    #[arg(long = "caps.samples", default_value_t = 200)]
    caps_samples: usize,
    /// Largest number of rows of a scan.
    #[arg(long = "caps.rows", default_value_t = 5000)]
    caps_rows: usize,
}

/// Validated job parameters.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub ell: u64,
    pub ell_given: bool,
    pub prec: u32,
    pub field_caps: FieldCaps,
    pub search: SearchCaps,
    pub max_rows: usize,
}

impl JobSpec {
    fn from_common(c: &Common) -> Result<Self, Error> {
        let ell = c.ell.unwrap_or(3);
        if !is_prime(ell) {
            return Err(Error::Invalid(format!("l = {} is not prime", ell)));
        }
        if c.prec < 16 {
            return Err(Error::Invalid(format!("precision {} below 16", c.prec)));
        }
        let max_disc: BigUint =
            c.caps_disc.parse().map_err(|_| Error::Invalid(format!("bad discriminant cap {:?}", c.caps_disc)))?;
        if c.caps_degree == 0 || c.caps_box <= 0 || c.caps_elements == 0 || c.caps_samples == 0 || c.caps_rows == 0 {
            return Err(Error::Invalid("caps must be positive".into()));
        }
        Ok(JobSpec {
            ell,
            ell_given: c.ell.is_some(),
            prec: c.prec,
            field_caps: FieldCaps { max_degree: c.caps_degree, max_disc },
            search: SearchCaps { max_box: c.caps_box, max_elements: c.caps_elements, degree_samples: c.caps_samples },
            max_rows: c.caps_rows,
        })
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Outcome of a command: a document and an exit status.
pub struct Outcome {
    pub doc: Value,
    pub status: u8,
}

impl Outcome {
    pub fn ok(doc: Value) -> Self {
        Outcome { doc, status: 0 }
    }
}

fn error_doc(e: &Error) -> Outcome {
    let status = if matches!(e, Error::Invalid(_)) { 1 } else { 2 };
    Outcome { doc: json!({"error": {"kind": e.kind(), "message": e.to_string()}}), status }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Compute { field, common } => jobs::compute(&JobSpec::from_common(common)?, field),
        Command::Capitulate { base, ext, embedding, fixtures, common } => jobs::capitulate(
            &JobSpec::from_common(common)?,
            base.as_deref(),
            ext.as_deref(),
            embedding.as_deref(),
            fixtures.as_deref(),
        ),
        Command::Scan { range, common } => jobs::scan(&JobSpec::from_common(common)?, range),
        Command::Selftest { seed, common } => selftest::run(&JobSpec::from_common(common)?, *seed),
        Command::Compare { fixtures, common } => jobs::compare(&JobSpec::from_common(common)?, fixtures),
    }
}

fn emit(cli: Option<&Cli>, outcome: &Outcome) -> ExitCode {
    let compact = cli.is_some_and(|c| c.json);
    let text = if compact {
        serde_json::to_string(&outcome.doc)
    } else {
        serde_json::to_string_pretty(&outcome.doc)
    }
    .expect("JSON values serialize");
    match cli.and_then(|c| c.out.as_ref()) {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("cannot write {}: {}", path.display(), e);
                return ExitCode::from(2);
            }
        }
        None => println!("{}", text),
    }
    ExitCode::from(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return emit(None, &error_doc(&Error::Invalid(e.to_string().trim().to_string())));
        }
    };
    let outcome = run(&cli).unwrap_or_else(|e| error_doc(&e));
    emit(Some(&cli), &outcome)
}
