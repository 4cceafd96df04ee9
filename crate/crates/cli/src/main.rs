//! `primeq`: primitive transfers, size-1 decompositions and primitive
//! equivalence from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use primeq::decompose::check;
use primeq::format::{
    parse_certificate, parse_matrix, write_atlas, write_certificate, write_matrix,
};
use primeq::search::{Filter, Verdict, CLASS_HARD_LIMIT, DEFAULT_MAX_STATES};
use primeq::{Error, Limits, PrimitiveTransfer, VertexSet, ZeroOneMatrix};

const FORMATS: &str = "\
FORMATS
  All indices are 0-based. Worked examples in the literature count rows
  from 1, so their row 1 is row 0 here.

  Matrix file: optional '#' comment lines, then the dimension n, then n rows
  of n characters from {0,1}; single spaces between entries are ignored.
  The 8x8 example pair shipped as fixtures/paperA.mat:

      # A
      8
      11011111
      00000000
      01000000
      00011000
      00000000
      10000000
      00000101
      00000010

  and fixtures/paperB.mat (row 0 becomes 00110111).

  Transfer flags: --p 0 --M 2,3,5,6,7 --K \"\" means
  A_0 = A_2 + A_3 + A_5 + A_6 + A_7 (K empty).

  Transfer listing (enumerate): one line per transfer, p=0;M=2,3,5,6,7;K=

  Certificate (decompose, equivalent -o): a JSON document
      {\"initial\": [rows], \"moves\": [...], \"final\": [rows]}
  with moves {\"kind\": \"forward_transfer\" | \"reverse_transfer\", \"p\", \"M\", \"K\"}
  or {\"kind\": \"permute\", \"perm\": [images of 0..n-1]}. A reverse move's
  transfer is stated relative to the next matrix in the chain.

  Atlas (classify): a header (n, filter, classes) and one record per class:
  class index, size (canonical forms), members (labelled matrices),
  irreducible (representative strongly connected), representative matrix.

EXAMPLE
  primeq validate paperA.mat --p 0 --M 2,3,5,6,7 --K \"\"
  primeq decompose paperA.mat --p 0 --M 2,3,5,6,7 --K \"\" -o cert.json
  primeq verify cert.json
  primeq equivalent paperA.mat paperB.mat -o eq.json

EXIT STATUS
  0 success / true, 1 false / invalid, 2 usage or input error,
  3 undecided because a resource cap was reached";

#[derive(Parser)]
#[command(
    name = "primeq",
    version,
    about = "Primitive transfers and primitive equivalence of 0-1 matrices"
)]
#[command(after_long_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the row equation A_p = sum A_m + sum E_k (exit 0 valid, 1 invalid)
    Validate {
        file: PathBuf,
        #[command(flatten)]
        transfer: TransferArgs,
    },
    /// Apply a transfer and print the resulting matrix
    Apply {
        file: PathBuf,
        #[command(flatten)]
        transfer: TransferArgs,
        /// Write the matrix here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List every valid transfer of a matrix
    Enumerate {
        file: PathBuf,
        /// Also list size-0 transfers
        #[arg(long)]
        include_trivial: bool,
    },
    /// Print the transfer graph (subgraph induced by M) and its weak components
    Graph {
        file: PathBuf,
        #[command(flatten)]
        transfer: TransferArgs,
    },
    /// Write a certificate chaining size-1 transfers from A to the transfer's result
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        transfer: TransferArgs,
        /// Record every intermediate matrix in the certificate
        #[arg(long)]
        embed_intermediates: bool,
        /// Write the certificate here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a certificate (exit 0 valid, 1 invalid)
    Verify { certificate: PathBuf },
    /// Decide primitive equivalence (exit 0 yes, 1 no, 3 unknown)
    Equivalent {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Give up (exit 3) after visiting this many canonical states
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Write the certificate here when equivalent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Partition all n x n matrices into primitive-equivalence classes
    Classify {
        /// Matrix dimension, 1..=4
        #[arg(long)]
        n: usize,
        /// all | irreducible
        #[arg(long, default_value = "all")]
        filter: Filter,
        /// Give up (exit 3) after visiting this many canonical states
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        /// Permit n = 5 (2^25 matrices)
        #[arg(long)]
        allow_n5: bool,
        /// Write the atlas here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TransferArgs {
    /// Pivot row
    #[arg(long = "p")]
    pivot: usize,
    /// Summed rows, comma-separated
    #[arg(long = "M", default_value = "")]
    summed: VertexSet,
    /// Unit columns, comma-separated ("" for none)
    #[arg(long = "K", default_value = "")]
    units: VertexSet,
}

impl TransferArgs {
    fn transfer(&self) -> PrimitiveTransfer {
        PrimitiveTransfer::new(self.pivot, self.summed, self.units)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success = 0,
    False = 1,
    Usage = 2,
    Unknown = 3,
}

/// Failure carrying the exit status it maps to.
struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: Status::Usage,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            status: Status::False,
            message: message.into(),
        }
    }
}

type Outcome = Result<Status, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<ZeroOneMatrix, Failure> {
    let text = read(path)?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Failure::usage(format!("{}:{line}:{column}: {message}", path.display())),
        other => Failure::usage(format!("{}: {other}", path.display())),
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Library errors on a transfer: range problems are usage errors, anything
/// else means the transfer does not apply.
fn transfer_failure(e: Error) -> Failure {
    match e {
        Error::IndexOutOfRange { .. } | Error::DimensionTooLarge { .. } => {
            Failure::usage(e.to_string())
        }
        other => Failure::invalid(other.to_string()),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file, transfer } => {
            let a = load_matrix(&file)?;
            let t = transfer.transfer();
            if primeq::validate(&a, &t).map_err(transfer_failure)? {
                println!("valid {t}");
                Ok(Status::Success)
            } else {
                println!("invalid {t}");
                Ok(Status::False)
            }
        }
        Command::Apply {
            file,
            transfer,
            output,
        } => {
            let a = load_matrix(&file)?;
            let b = primeq::apply(&a, &transfer.transfer()).map_err(transfer_failure)?;
            emit(output.as_deref(), &write_matrix(&b))?;
            Ok(Status::Success)
        }
        Command::Enumerate {
            file,
            include_trivial,
        } => {
            let a = load_matrix(&file)?;
            let mut out = String::new();
            for t in primeq::enumerate(&a, include_trivial) {
                out.push_str(&t.to_string());
                out.push('\n');
            }
            emit(None, &out)?;
            Ok(Status::Success)
        }
        Command::Graph { file, transfer } => {
            let a = load_matrix(&file)?;
            let g = primeq::transfer_graph(&a, &transfer.transfer()).map_err(transfer_failure)?;
            let edges: Vec<String> = g.edges.iter().map(|(u, v)| format!("({u},{v})")).collect();
            let comps: Vec<String> = g.components.iter().map(|c| format!("{{{c}}}")).collect();
            println!("vertices {}", g.vertices);
            println!("edges {}", edges.join(" "));
            println!("components {}", comps.join(" "));
            Ok(Status::Success)
        }
        Command::Decompose {
            file,
            transfer,
            embed_intermediates,
            output,
        } => {
            let a = load_matrix(&file)?;
            let mut seq = primeq::decompose(&a, &transfer.transfer()).map_err(transfer_failure)?;
            if embed_intermediates {
                seq.embed_intermediates()
                    .map_err(|e| Failure::invalid(e.to_string()))?;
            }
            emit(output.as_deref(), &write_certificate(&seq))?;
            if output.is_some() {
                println!(
                    "moves {} (forward {}, reverse {})",
                    seq.moves.len(),
                    seq.forward_count(),
                    seq.reverse_count()
                );
            }
            Ok(Status::Success)
        }
        Command::Verify { certificate } => {
            let text = read(&certificate)?;
            let seq = parse_certificate(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", certificate.display())))?;
            match check(&seq) {
                Ok(()) => {
                    println!("valid certificate ({} moves)", seq.moves.len());
                    Ok(Status::Success)
                }
                Err(e) => {
                    println!("invalid certificate: {e}");
                    Ok(Status::False)
                }
            }
        }
        Command::Equivalent {
            file_a,
            file_b,
            max_states,
            output,
        } => {
            let a = load_matrix(&file_a)?;
            let b = load_matrix(&file_b)?;
            let limits = Limits {
                max_states,
                ..Limits::default()
            };
            match primeq::are_equivalent(&a, &b, &limits).map_err(transfer_failure)? {
                Verdict::Equivalent(seq) => {
                    if let Some(path) = output.as_deref() {
                        emit(Some(path), &write_certificate(&seq))?;
                    }
                    println!("equivalent ({} moves)", seq.moves.len());
                    Ok(Status::Success)
                }
                Verdict::NotEquivalent => {
                    println!("not equivalent");
                    Ok(Status::False)
                }
                Verdict::Unknown => {
                    println!("unknown: state cap {max_states} reached");
                    Ok(Status::Unknown)
                }
            }
        }
        Command::Classify {
            n,
            filter,
            max_states,
            allow_n5,
            output,
        } => {
            let max_n = if allow_n5 {
                CLASS_HARD_LIMIT
            } else {
                Limits::default().max_n
            };
            if n == 0 || n > max_n {
                let hint = if n == 5 { " (pass --allow-n5)" } else { "" };
                return Err(Failure::usage(format!("--n must be in 1..={max_n}{hint}")));
            }
            let limits = Limits { max_states, max_n };
            match primeq::classify(n, filter, &limits) {
                Ok(atlas) => {
                    emit(output.as_deref(), &write_atlas(&atlas))?;
                    Ok(Status::Success)
                }
                Err(Error::StateCapExceeded { cap }) => {
                    eprintln!("unknown: state cap {cap} reached");
                    Ok(Status::Unknown)
                }
                Err(e) => Err(Failure::usage(e.to_string())),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match run(cli) {
        Ok(status) => status,
        Err(failure) => {
            eprintln!("primeq: {}", failure.message);
            failure.status
        }
    };
    ExitCode::from(status as u8)
}
