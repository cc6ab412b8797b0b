//! Command-line front end over JSON files.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 a verification
//! check failed, 4 the request is outside the domain of the command (for
//! example an active netlist given to the Fock simulator).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::apps::{cz_gate_target, naimark_extension, verify_cz, RankOnePovm};
use crate::blocks::{circuit_smatrix, Circuit};
use crate::closedform::{analytic_circuit, analytic_params};
use crate::error::Error;
use crate::io::{
    parse_amplitudes, parse_occupation, read_json, to_json_string, write_json, Analytic2x2File, MeansTable,
    NaimarkFile, NetlistFile, OutcomeTable, ReadError, VerificationReport, SCHEMA,
};
use crate::mesh::MeshScheme;
use crate::numkit::{ComplexMatrix, DEFAULT_TOL};
use crate::random::{disk_matrix, rng};
use crate::sim::{evolve_moments, fock_evolve, passive_block, postselect, CountPredicate, GaussianMoments};
use crate::synth::{nominal_means, synthesize, SynthConfig, DEFAULT_EPS_SIGMA};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_DOMAIN: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "qsynth",
    version,
    about = "Synthesise lossy and amplifying linear optical networks"
)]
pub struct Cli {
    /// Absolute max-entry tolerance for every verification check.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Singular values within this distance of 1 need no ancilla.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS_SIGMA)]
    pub eps_sigma: f64,
    /// Seed for randomised self-tests.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Mesh::Reck)]
    pub mesh: Mesh,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mesh {
    Reck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Fock,
    Moments,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a matrix in a quasiunitary network and emit its netlist.
    Synth {
        matrix: PathBuf,
        /// Netlist output; printed together with the report when omitted.
        #[arg(short = 'o', long)]
        netlist: Option<PathBuf>,
        #[arg(short, long)]
        report: Option<PathBuf>,
    },
    /// Simulate a netlist on Fock or coherent inputs.
    Simulate {
        netlist: PathBuf,
        #[arg(long, value_enum, default_value_t = SimMode::Fock)]
        mode: SimMode,
        /// Input occupation such as "1,1"; missing trailing modes are vacuum.
        #[arg(long)]
        input: Option<String>,
        /// Postselection windows, inline JSON or a file.
        #[arg(long)]
        predicate: Option<String>,
        /// Coherent amplitudes `[[re, im], ...]`, inline JSON or a file.
        #[arg(long)]
        coherent: Option<String>,
    },
    /// Naimark extension of a rank-one POVM.
    Naimark {
        povm: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Closed-form parameters and circuit for a 2 x 2 matrix.
    Analytic2x2 {
        matrix: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Synthesise and verify the postselected controlled-Z gate.
    Cz {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

impl Cli {
    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            tol: self.tol,
            eps_sigma: self.eps_sigma,
            mesh: match self.mesh {
                Mesh::Reck => MeshScheme::Reck,
            },
            ..SynthConfig::default()
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<ReadError> for Failure {
    fn from(e: ReadError) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            // NotUnitary here comes from numerically computed factors failing
            // the requested tolerance, not from user input
            Error::Verification { .. }
            | Error::CzMismatch(_)
            | Error::SvdNoConvergence { .. }
            | Error::NotUnitary { .. } => EXIT_VERIFY,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: format!("cannot write output: {e}"),
        }
    }
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_PARSE,
        message: message.into(),
    }
}

/// Parses `args` (program name first) and runs the command, printing results
/// to `stdout` and diagnostics to stderr.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdout),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_PARSE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> u8 {
    let outcome = if cli.tol > 0.0 && cli.eps_sigma > 0.0 {
        dispatch(cli, stdout)
    } else {
        Err(parse_failure("--tol and --eps-sigma must be positive"))
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("qsynth: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, Failure> {
    match &cli.command {
        Command::Synth {
            matrix,
            netlist,
            report,
        } => cmd_synth(cli, matrix, netlist.as_deref(), report.as_deref(), stdout),
        Command::Simulate {
            netlist,
            mode,
            input,
            predicate,
            coherent,
        } => {
            let circuit = NetlistFile::read(netlist)?;
            match mode {
                SimMode::Fock => cmd_fock(cli, &circuit, input.as_deref(), predicate.as_deref(), stdout),
                SimMode::Moments => cmd_moments(&circuit, coherent.as_deref(), stdout),
            }
        }
        Command::Naimark { povm, out } => cmd_naimark(cli, povm, out.as_deref(), stdout),
        Command::Analytic2x2 { matrix, out } => cmd_analytic2x2(cli, matrix, out.as_deref(), stdout),
        Command::Cz { out } => cmd_cz(cli, out.as_deref(), stdout),
    }
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => write_json(path, value)?,
        None => writeln!(stdout, "{}", to_json_string(value))?,
    }
    Ok(())
}

/// Inline JSON when the argument starts with `{` or `[`, a file path otherwise.
fn inline_or_file<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| parse_failure(format!("malformed inline JSON: {e}")))
    } else {
        Ok(read_json(Path::new(arg))?)
    }
}

fn cmd_synth(
    cli: &Cli,
    matrix: &Path,
    netlist: Option<&Path>,
    report: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let t: ComplexMatrix = read_json(matrix)?;
    let result = synthesize(&t, &cli.synth_config())?;

    let alpha = disk_matrix(&mut rng(cli.seed), t.cols(), 1, 1.0).column(0);
    let expected = t.mul_vec(&alpha)?;
    let got = nominal_means(&result, &alpha)?;
    let mean_dev = got
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let rep = VerificationReport::new(&result, cli.tol).with_mean_field(cli.seed, mean_dev);
    let net = NetlistFile::new(result.circuit);

    match (netlist, report) {
        (None, None) => {
            #[derive(Serialize)]
            struct Combined<'a> {
                schema: &'static str,
                netlist: &'a NetlistFile,
                report: &'a VerificationReport,
            }
            let combined = Combined {
                schema: SCHEMA,
                netlist: &net,
                report: &rep,
            };
            emit(None, &combined, stdout)?;
        }
        (net_path, rep_path) => {
            emit(net_path, &net, stdout)?;
            emit(rep_path, &rep, stdout)?;
        }
    }
    Ok(if rep.ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_fock(
    cli: &Cli,
    circuit: &Circuit,
    input: Option<&str>,
    predicate: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let input = input.ok_or_else(|| parse_failure("--input is required in fock mode"))?;
    let mut occ = parse_occupation(input).map_err(parse_failure)?;
    if occ.len() > circuit.n_modes {
        return Err(parse_failure(format!(
            "input has {} entries for a {}-mode netlist",
            occ.len(),
            circuit.n_modes
        )));
    }
    occ.resize(circuit.n_modes, 0);
    let predicate: CountPredicate = match predicate {
        Some(p) => inline_or_file(p)?,
        None => CountPredicate::default(),
    };

    let s = circuit_smatrix(circuit)?;
    let a = passive_block(&s, cli.tol)?;
    let state = fock_evolve(&a, &occ)?;
    let (kept, acceptance) = postselect(&state, |o| predicate.accepts(o))?;
    emit(None, &OutcomeTable::new(occ, &kept, acceptance), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_moments(circuit: &Circuit, coherent: Option<&str>, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let pairs: Vec<[f64; 2]> = match coherent {
        Some(c) => inline_or_file(c)?,
        None => Vec::new(),
    };
    let alpha = parse_amplitudes(&pairs);
    let s = circuit_smatrix(circuit)?;
    let input = GaussianMoments::coherent(circuit.n_modes, &alpha)?;
    let out = evolve_moments(&s, &input)?;
    emit(None, &MeansTable::new(&out), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_naimark(cli: &Cli, povm: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let povm: RankOnePovm = read_json(povm)?;
    let extension = naimark_extension(&povm, cli.tol)?;
    let result = synthesize(&extension, &cli.synth_config())?;
    let file = NaimarkFile {
        schema: SCHEMA.into(),
        unitarity_deviation: extension.unitarity_deviation(),
        extension,
        netlist: NetlistFile::new(result.circuit),
    };
    emit(out, &file, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_analytic2x2(
    cli: &Cli,
    matrix: &Path,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<u8, Failure> {
    let t: ComplexMatrix = read_json(matrix)?;
    let params = analytic_params(&t)?;
    let reconstruction_deviation = params.reconstruct().max_abs_diff(&t);
    let result = analytic_circuit(&params, cli.eps_sigma)?;
    let file = Analytic2x2File {
        schema: SCHEMA.into(),
        params,
        reconstruction_deviation,
        netlist: NetlistFile::new(result.circuit),
    };
    emit(out, &file, stdout)?;
    let ok = reconstruction_deviation < cli.tol && result.block_deviation < cli.tol;
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_cz(cli: &Cli, out: Option<&Path>, stdout: &mut dyn Write) -> Result<u8, Failure> {
    let result = synthesize(&cz_gate_target(), &cli.synth_config())?;
    let report = verify_cz(&result, cli.tol)?;

    #[derive(Serialize)]
    struct CzFile<'a> {
        schema: &'static str,
        success_prob: f64,
        singular_values: &'a [f64],
        #[serde(flatten)]
        report: &'a crate::apps::CzReport,
    }
    let success_prob = report.success_probs.iter().copied().fold(f64::NAN, f64::min);
    let file = CzFile {
        schema: SCHEMA,
        success_prob,
        singular_values: &result.singular_values,
        report: &report,
    };
    emit(out, &file, stdout)?;
    Ok(EXIT_OK)
}
