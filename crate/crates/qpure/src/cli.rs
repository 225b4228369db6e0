//! Command line interface and JSON interchange format.
//!
//! Files carry a `kind` tag (`state`, `channel` or `vector`), a `dims`
//! sequence, and row-major `data` with each complex number serialized as a
//! two-element `[re, im]` array. Floats are printed with 17 significant
//! digits so that write-read-write round trips are byte identical.
//!
//! Exit codes: 0 on success, 1 on a negative verdict (invalid channel,
//! violated bound, infeasible discrimination), 2 on usage errors such as
//! dimension mismatches, 3 on malformed files.

use std::io::Write as IoWrite;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::geometry::{jordan, p_med, p_wcd, wcd};
use crate::matcore::{ComplexMatrix, Tolerances};
use crate::purify::{optimal_purifier, product_bound};
use crate::setanalysis::{
    counter_example, two_state_criterion, usd_feasible, StateSet, TwoStateVerdict,
};
use crate::states::{random_density, support, trace_distance, DensityOperator};

/// On-disk representation of states, channels and vectors.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixFile {
    /// Square matrix of a density operator; `dims = [dim]`.
    State {
        dims: Vec<usize>,
        data: Vec<Vec<[f64; 2]>>,
    },
    /// Kraus operator list; `dims = [dim_out, dim_in]`.
    Channel {
        dims: Vec<usize>,
        data: Vec<Vec<Vec<[f64; 2]>>>,
    },
    /// Column vector; `dims = [dim]`.
    Vector {
        dims: Vec<usize>,
        data: Vec<[f64; 2]>,
    },
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn rows_to_matrix(
    rows: &[Vec<[f64; 2]>],
    expect_rows: usize,
    expect_cols: usize,
) -> Result<ComplexMatrix> {
    if rows.len() != expect_rows || rows.iter().any(|r| r.len() != expect_cols) {
        return Err(Error::MalformedFile(format!(
            "matrix data does not match declared dims {expect_rows}x{expect_cols}"
        )));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::new(expect_rows, expect_cols, entries)
        .map_err(|e| Error::MalformedFile(e.to_string()))
}

impl MatrixFile {
    pub fn from_state(rho: &DensityOperator) -> Self {
        MatrixFile::State {
            dims: vec![rho.dim()],
            data: matrix_to_rows(rho.matrix()),
        }
    }

    pub fn from_channel(ch: &KrausChannel) -> Self {
        MatrixFile::Channel {
            dims: vec![ch.dim_out(), ch.dim_in()],
            data: ch.kraus().iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn from_vector(v: &ComplexMatrix) -> Self {
        MatrixFile::Vector {
            dims: vec![v.rows()],
            data: (0..v.rows())
                .map(|i| [v[(i, 0)].re, v[(i, 0)].im])
                .collect(),
        }
    }

    /// Reconstructs the state, enforcing the density-operator invariants.
    pub fn to_state(&self, tol: &Tolerances) -> Result<DensityOperator> {
        match self {
            MatrixFile::State { dims, data } => {
                let &[dim] = dims.as_slice() else {
                    return Err(Error::MalformedFile("state dims must be [dim]".into()));
                };
                let m = rows_to_matrix(data, dim, dim)?;
                DensityOperator::new(m, tol).map_err(|e| Error::MalformedFile(e.to_string()))
            }
            _ => Err(Error::MalformedFile("expected a state file".into())),
        }
    }

    /// Reconstructs the channel. Shapes are enforced; the trace-preserving
    /// flag is inferred from the completeness sum so that `check` can judge
    /// the file content.
    pub fn to_channel(&self, tol: &Tolerances) -> Result<KrausChannel> {
        match self {
            MatrixFile::Channel { dims, data } => {
                let &[dim_out, dim_in] = dims.as_slice() else {
                    return Err(Error::MalformedFile(
                        "channel dims must be [dim_out, dim_in]".into(),
                    ));
                };
                let kraus: Result<Vec<ComplexMatrix>> = data
                    .iter()
                    .map(|rows| rows_to_matrix(rows, dim_out, dim_in))
                    .collect();
                let probe = KrausChannel::from_kraus_unchecked(kraus?, true)
                    .map_err(|e| Error::MalformedFile(e.to_string()))?;
                let tp = probe.validate(tol)?.ok;
                let kraus = probe.kraus().to_vec();
                KrausChannel::from_kraus_unchecked(kraus, tp)
                    .map_err(|e| Error::MalformedFile(e.to_string()))
            }
            _ => Err(Error::MalformedFile("expected a channel file".into())),
        }
    }

    pub fn to_vector(&self) -> Result<ComplexMatrix> {
        match self {
            MatrixFile::Vector { dims, data } => {
                let &[dim] = dims.as_slice() else {
                    return Err(Error::MalformedFile("vector dims must be [dim]".into()));
                };
                if data.len() != dim {
                    return Err(Error::MalformedFile(
                        "vector data does not match declared dims".into(),
                    ));
                }
                let entries: Vec<Complex64> = data
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                ComplexMatrix::new(dim, 1, entries).map_err(|e| Error::MalformedFile(e.to_string()))
            }
            _ => Err(Error::MalformedFile("expected a vector file".into())),
        }
    }
}

/// JSON formatter printing every float with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + std::io::Write>(
        &mut self,
        writer: &mut W,
        value: f64,
    ) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value with the crate's float convention, newline-terminated.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serializer emits utf-8"))
}

pub fn write_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(to_json_string(value)?.as_bytes())?;
    Ok(())
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::MalformedFile(format!("{}: {e}", path.display())))
}

pub fn load_state(path: &Path, tol: &Tolerances) -> Result<DensityOperator> {
    read_matrix_file(path)?.to_state(tol)
}

pub fn load_channel(path: &Path, tol: &Tolerances) -> Result<KrausChannel> {
    read_matrix_file(path)?.to_channel(tol)
}

#[derive(Parser)]
#[command(
    name = "qpure",
    about = "Purifying and reversible quantum processes on finite-dimensional states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random density operator and write it as a state file.
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report distance and distinguishability quantities for two states.
    Analyze { state1: PathBuf, state2: PathBuf },
    /// Build the optimal purifying channel for two states.
    Purify {
        state1: PathBuf,
        state2: PathBuf,
        out_channel: PathBuf,
    },
    /// Validate a channel file.
    Check { channel: PathBuf },
    /// Apply a channel file to a state file.
    Apply {
        channel: PathBuf,
        state: PathBuf,
        /// Output path for the resulting state; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the product-state trace distance bound.
    Bound {
        rho1: PathBuf,
        rho2: PathBuf,
        sigma1: PathBuf,
        sigma2: PathBuf,
    },
    /// Decide feasibility of unambiguous discrimination for a set of states.
    Usd {
        #[arg(required = true, num_args = 2..)]
        states: Vec<PathBuf>,
    },
    /// Write the reference counter-example pair for a mixing parameter.
    Counterexample {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out1: PathBuf,
        #[arg(long)]
        out2: PathBuf,
    },
}

#[derive(Serialize)]
struct AnalyzeReport {
    trace_distance: f64,
    wcd: f64,
    jordan_angles: Vec<f64>,
    p_med: f64,
    p_wcd: f64,
    two_state_criterion: &'static str,
}

#[derive(Serialize)]
struct PurifyReport {
    achieved_distance: f64,
    wcd: f64,
}

#[derive(Serialize)]
struct CheckReport {
    ok: bool,
    max_deviation: f64,
    trace_preserving: bool,
    kraus_count: usize,
}

#[derive(Serialize)]
struct BoundReport {
    lhs: f64,
    rhs: f64,
    satisfied: bool,
}

#[derive(Serialize)]
struct UsdReport {
    feasible: bool,
}

#[derive(Serialize)]
struct CounterexampleReport {
    p: f64,
    wcd: f64,
    trace_distance: f64,
}

fn emit<T: Serialize>(out: &mut impl IoWrite, value: &T) -> Result<()> {
    out.write_all(to_json_string(value)?.as_bytes())?;
    Ok(())
}

fn criterion_label(verdict: TwoStateVerdict) -> &'static str {
    match verdict {
        TwoStateVerdict::EssentiallyPureOrOrthogonal => "essentially_pure_or_orthogonal",
        TwoStateVerdict::Not => "not",
    }
}

fn execute(command: Command, out: &mut impl IoWrite) -> Result<i32> {
    let tol = Tolerances::default();
    match command {
        Command::Gen {
            dim,
            rank,
            seed,
            out: path,
        } => {
            let rho = random_density(dim, rank, seed)?;
            let file = MatrixFile::from_state(&rho);
            match path {
                Some(p) => write_file(&p, &file)?,
                None => emit(out, &file)?,
            }
            Ok(0)
        }
        Command::Analyze { state1, state2 } => {
            let a = load_state(&state1, &tol)?;
            let b = load_state(&state2, &tol)?;
            let jd = jordan(&support(&a, &tol), &support(&b, &tol))?;
            let report = AnalyzeReport {
                trace_distance: trace_distance(&a, &b)?,
                wcd: wcd(&a, &b)?,
                jordan_angles: jd.angles().to_vec(),
                p_med: p_med(&a, &b)?,
                p_wcd: p_wcd(&a, &b)?,
                two_state_criterion: criterion_label(two_state_criterion(&a, &b)?),
            };
            emit(out, &report)?;
            Ok(0)
        }
        Command::Purify {
            state1,
            state2,
            out_channel,
        } => {
            let a = load_state(&state1, &tol)?;
            let b = load_state(&state2, &tol)?;
            let bundle = optimal_purifier(&a, &b)?;
            write_file(&out_channel, &MatrixFile::from_channel(&bundle.full))?;
            let report = PurifyReport {
                achieved_distance: bundle.achieved_distance,
                wcd: wcd(&a, &b)?,
            };
            emit(out, &report)?;
            Ok(0)
        }
        Command::Check { channel } => {
            let ch = load_channel(&channel, &tol)?;
            let report = ch.validate(&tol)?;
            emit(
                out,
                &CheckReport {
                    ok: report.ok,
                    max_deviation: report.max_deviation,
                    trace_preserving: report.trace_preserving,
                    kraus_count: ch.kraus().len(),
                },
            )?;
            Ok(if report.ok { 0 } else { 1 })
        }
        Command::Apply {
            channel,
            state,
            out: path,
        } => {
            let ch = load_channel(&channel, &tol)?;
            let rho = load_state(&state, &tol)?;
            if !ch.validate(&tol)?.ok {
                return Ok(1);
            }
            let result = ch.apply(&rho)?;
            let file = if ch.is_trace_preserving() {
                MatrixFile::from_state(&DensityOperator::new(result, &tol)?)
            } else {
                MatrixFile::State {
                    dims: vec![result.rows()],
                    data: matrix_to_rows(&result),
                }
            };
            match path {
                Some(p) => write_file(&p, &file)?,
                None => emit(out, &file)?,
            }
            Ok(0)
        }
        Command::Bound {
            rho1,
            rho2,
            sigma1,
            sigma2,
        } => {
            let r1 = load_state(&rho1, &tol)?;
            let r2 = load_state(&rho2, &tol)?;
            let s1 = load_state(&sigma1, &tol)?;
            let s2 = load_state(&sigma2, &tol)?;
            let (lhs, rhs) = product_bound(&r1, &r2, &s1, &s2)?;
            let satisfied = lhs >= rhs - 1e-9;
            emit(
                out,
                &BoundReport {
                    lhs,
                    rhs,
                    satisfied,
                },
            )?;
            Ok(if satisfied { 0 } else { 1 })
        }
        Command::Usd { states } => {
            let loaded: Result<Vec<DensityOperator>> =
                states.iter().map(|p| load_state(p, &tol)).collect();
            let set = StateSet::new(loaded?)?;
            let feasible = usd_feasible(&set)?;
            emit(out, &UsdReport { feasible })?;
            Ok(if feasible { 0 } else { 1 })
        }
        Command::Counterexample { p, out1, out2 } => {
            let (r1, r2) = counter_example(p)?;
            write_file(&out1, &MatrixFile::from_state(&r1))?;
            write_file(&out2, &MatrixFile::from_state(&r2))?;
            emit(
                out,
                &CounterexampleReport {
                    p,
                    wcd: wcd(&r1, &r2)?,
                    trace_distance: trace_distance(&r1, &r2)?,
                },
            )?;
            Ok(0)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::MalformedFile(_) | Error::Io(_) | Error::Json(_) => 3,
        _ => 2,
    }
}

/// Parses and runs a full argument vector (including the program name) and
/// returns the process exit code.
pub fn run<I, S>(args: I, out: &mut impl IoWrite) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // let clap print its usage or version text; usage errors exit 2
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 2 };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
