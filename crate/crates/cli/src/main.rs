//! `qsynth`: decompose, time, compile and check pulse programs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input
//! (non-unitary matrix, zero or oversized drive), 3 parse error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsynth_cli::commands::{self, DiagramFormat};
use qsynth_cli::{CliError, GateSpecFile, ProgramFile};
use qsynth_core::{DriveSpec, SystemParams};

#[derive(Parser)]
#[command(
    name = "qsynth",
    version,
    about = "Time-optimal pulse synthesis for a fast/slow qubit pair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DriveArgs {
    /// Drive amplitude fraction on the β-branch transition.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b1: f64,
    /// Drive amplitude fraction on the α-branch transition.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b2: f64,
    /// Peak nuclear Rabi frequency in rad/s.
    #[arg(long = "omega-r-i", default_value_t = SystemParams::default().omega_r_i)]
    omega_r_i: f64,
}

impl DriveArgs {
    fn spec(&self) -> Result<DriveSpec, CliError> {
        Ok(DriveSpec::new(self.b1, self.b2, self.omega_r_i)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the KAK factors and canonical angles of a gate.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print the minimal slow-drive time and its schedule.
    Mintime {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        drive: DriveArgs,
    },
    /// Compile a gate into a pulse program file.
    Compile {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        drive: DriveArgs,
        /// Coupling J in rad/s.
        #[arg(long = "j", default_value_t = SystemParams::default().j)]
        j: f64,
    },
    /// Print the unitary produced by a program.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the unitary as a gate file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a program against a target gate.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Gate file; defaults to the target stored in the program.
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long, default_value_t = commands::COMPILE_TOL)]
        tol: f64,
    },
    /// Draw a timing diagram.
    Diagram {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "ascii")]
        svg: bool,
        #[arg(long)]
        ascii: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Checks {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose { input } => commands::decompose(&GateSpecFile::load(&input)?, out),
        Command::Mintime { input, drive } => {
            let spec = GateSpecFile::load(&input)?;
            commands::mintime(&spec, &drive.spec()?, out)
        }
        Command::Compile {
            input,
            out: path,
            drive,
            j,
        } => {
            let spec = GateSpecFile::load(&input)?;
            let drive_spec = drive.spec()?;
            if !(j.is_finite() && j > 0.0) {
                return Err(CliError::Input("J must be positive".into()));
            }
            let params = SystemParams {
                j,
                omega_r_i: drive.omega_r_i,
                ..SystemParams::default()
            };
            commands::compile(&spec, &drive_spec, &params, &path, out)
        }
        Command::Simulate { input, out: path } => {
            commands::simulate_cmd(&ProgramFile::load(&input)?, path.as_deref(), out)
        }
        Command::Verify { input, target, tol } => {
            let file = ProgramFile::load(&input)?;
            let target = target.map(|p| GateSpecFile::load(&p)).transpose()?;
            commands::verify_cmd(&file, target.as_ref(), tol, out)
        }
        Command::Diagram {
            input,
            svg,
            ascii: _,
            out: path,
        } => {
            let format = if svg { DiagramFormat::Svg } else { DiagramFormat::Ascii };
            commands::diagram_cmd(&ProgramFile::load(&input)?, format, path.as_deref(), out)
        }
        Command::Checks { seed } => commands::checks(seed, &SystemParams::default(), out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
