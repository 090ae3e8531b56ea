//! Subcommand implementations. Each writes its report to `out` and returns
//! the error that decides the exit code.

use std::io::Write;
use std::path::Path;

use qsynth_core::checks::run_all;
use qsynth_core::pulseprog::{cnot12_program, swap_program};
use qsynth_core::{
    assemble, assemble_schedule, kak_decompose, min_time, simulate, verify, Complex4x4, DriveSpec, PulseProgram,
    SystemParams, Unitary4,
};

use crate::diagram;
use crate::error::CliError;
use crate::files::{GateName, GateSpecFile, ProgramFile};

pub type CmdResult = Result<(), CliError>;

fn io(e: std::io::Error) -> CliError {
    CliError::Parse(format!("write failed: {e}"))
}

macro_rules! out {
    ($w:expr, $($arg:tt)*) => {
        writeln!($w, $($arg)*).map_err(io)?
    };
}

fn write_matrix(out: &mut dyn Write, m: &Complex4x4) -> CmdResult {
    for row in &m.0 {
        let cells: Vec<String> = row.iter().map(|z| format!("{:+.10}{:+.10}i", z.re, z.im)).collect();
        out!(out, "  [{}]", cells.join(", "));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Determinant-one representative `e^{−i arg(det G)/4}·G` and its phase.
fn project(u: &Unitary4) -> (f64, Unitary4) {
    let phase = -u.det().arg() / 4.0;
    (phase, u.phase_shifted(phase))
}

pub fn decompose(spec: &GateSpecFile, out: &mut dyn Write) -> CmdResult {
    let u = spec.unitary()?;
    let (phase, rep) = project(&u);
    let f = kak_decompose(&rep)?;
    let residual = f.reconstruct().dist(rep.matrix());
    out!(out, "phase: {phase:.17e}");
    out!(out, "angles: t1 = {:.17e}, t2 = {:.17e}", f.angles.t1, f.angles.t2);
    out!(out, "residual: {residual:.3e}");
    out!(out, "K1:");
    write_matrix(out, f.k1.matrix())?;
    out!(out, "K2:");
    write_matrix(out, f.k2.matrix())?;
    Ok(())
}

pub fn mintime(spec: &GateSpecFile, drive: &DriveSpec, out: &mut dyn Write) -> CmdResult {
    let u = spec.unitary()?;
    let opt = min_time(&u, drive)?;
    out!(out, "t_opt: {:.17e}", opt.t_opt);
    out!(out, "time_seconds: {:.17e}", opt.physical_time());
    out!(out, "center: i^{}", opt.center.k);
    out!(out, "phase: {:.17e}", opt.phase);
    out!(
        out,
        "angles: t1 = {:.17e}, t2 = {:.17e}",
        opt.factors.angles.t1,
        opt.factors.angles.t2
    );
    out!(out, "schedule: {} entries", opt.schedule.len());
    for e in &opt.schedule {
        out!(
            out,
            "  weight {:.17e} point ({:+.17e}, {:+.17e}) conjugator {}",
            e.weight,
            e.orbit_point.0,
            e.orbit_point.1,
            e.conjugator_index
        );
    }
    Ok(())
}

fn report(
    out: &mut dyn Write,
    program: &PulseProgram,
    params: &SystemParams,
    target: &Unitary4,
    tol: f64,
) -> CmdResult {
    let rep = verify(program, params, target, tol);
    out!(out, "distance: {:.3e}", rep.distance);
    out!(out, "tolerance: {tol:.3e}");
    out!(out, "slow_time: {:.17e}", rep.budgets.slow_time);
    out!(out, "coupling_time: {:.17e}", rep.budgets.coupling_time);
    out!(out, "fast_pulse_count: {}", rep.budgets.fast_pulse_count);
    out!(out, "result: {}", if rep.pass { "PASS" } else { "FAIL" });
    if rep.pass {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "distance {:.3e} exceeds {tol:.3e}",
            rep.distance
        )))
    }
}

pub const COMPILE_TOL: f64 = 1e-8;

/// Picks the synthesis route: the known CNOT and SWAP programs for named
/// gates, the canonical KAK sequence for a single-transition drive, and the
/// Weyl-orbit schedule otherwise.
pub fn build_program(spec: &GateSpecFile, drive: &DriveSpec, params: &SystemParams) -> Result<PulseProgram, CliError> {
    let u = spec.unitary()?;
    let single = drive.pair() == (1.0, 0.0);
    if single {
        match spec.name {
            Some(GateName::Cnot12) => return Ok(cnot12_program(params)),
            Some(GateName::Swap) => return Ok(swap_program(params)),
            _ => {}
        }
    }
    let opt = min_time(&u, drive)?;
    Ok(if single {
        assemble(&opt.factors, params)
    } else {
        assemble_schedule(&opt, params)
    })
}

pub fn compile(
    spec: &GateSpecFile,
    drive: &DriveSpec,
    params: &SystemParams,
    out_path: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    let u = spec.unitary()?;
    let program = build_program(spec, drive, params)?;
    out!(out, "segments: {}", program.segments.len());
    report(out, &program, params, &u, COMPILE_TOL)?;
    let file = ProgramFile::from_program(&program, params, Some(spec.clone()));
    write_file(out_path, &file.to_json())?;
    out!(out, "wrote {}", out_path.display());
    Ok(())
}

pub fn simulate_cmd(file: &ProgramFile, out_path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let params = file.params()?;
    let u = simulate(&file.program()?, &params);
    out!(out, "unitary:");
    write_matrix(out, u.matrix())?;
    if let Some(p) = out_path {
        write_file(p, &GateSpecFile::from_matrix(u.matrix()).to_json())?;
    }
    Ok(())
}

pub fn verify_cmd(file: &ProgramFile, target: Option<&GateSpecFile>, tol: f64, out: &mut dyn Write) -> CmdResult {
    let params = file.params()?;
    let spec = target
        .or(file.target.as_ref())
        .ok_or_else(|| CliError::Parse("no target given and the program has none".into()))?;
    let u = spec.unitary()?;
    report(out, &file.program()?, &params, &u, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Svg,
    Ascii,
}

pub fn diagram_cmd(
    file: &ProgramFile,
    format: DiagramFormat,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let program = file.program()?;
    let text = match format {
        DiagramFormat::Svg => diagram::svg(&program),
        DiagramFormat::Ascii => diagram::ascii(&program),
    };
    match out_path {
        Some(p) => write_file(p, &text),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

pub fn checks(seed: u64, params: &SystemParams, out: &mut dyn Write) -> CmdResult {
    let results = run_all(seed, params);
    let mut failed = Vec::new();
    for r in &results {
        out!(out, "{}", r.line());
        if !r.ok() {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("failing suites: {}", failed.join(", "))))
    }
}
