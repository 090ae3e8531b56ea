//! Pulse programs built from fast electron rotations, free evolution under
//! `H₀ = J·I_z + 2J·S_zI_z` and selective nuclear drives, together with the
//! canonical assembly of a KAK factorization and exact rotating-frame simulation.

use std::f64::consts::PI;

use crate::kak::{k_factorize, weyl_conjugator, KAKFactors, KElement, KFactorization};
use crate::linalg::{Complex4x4, Mat2, C64, ONE};
use crate::su4core::{basis, expm_hermitian, matrix_distance_up_to_phase, pauli_x, pauli_y, pauli_z, Unitary4};
use crate::timeopt::OptResult;

const TWO_PI: f64 = 2.0 * PI;
/// Angles this close to a trivial value are dropped during compaction.
const TRIVIAL_ANGLE: f64 = 1e-13;

/// Optional lab-frame quantities. Stored for bookkeeping only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabMetadata {
    pub omega_s: f64,
    pub omega_i: f64,
    pub carrier_s: f64,
    pub carrier_i: f64,
    pub phase_s: f64,
}

/// Coupling and Rabi frequencies in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub j: f64,
    pub omega_r_i: f64,
    pub omega_r_s: f64,
    pub lab: Option<LabMetadata>,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            j: 2.0e7,
            omega_r_i: 1.0e6,
            omega_r_s: 1.0e9,
            lab: None,
        }
    }
}

impl SystemParams {
    pub fn new(j: f64, omega_r_i: f64, omega_r_s: f64) -> Self {
        SystemParams {
            j,
            omega_r_i,
            omega_r_s,
            lab: None,
        }
    }

    /// `ω_r^I / J`, the parameter entering every selective drive.
    pub fn slow_ratio(&self) -> f64 {
        self.omega_r_i / self.j
    }

    /// Violations of the time-scale hierarchy `ω_r^I ≪ J ≪ ω_r^S`.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let check = |lo: f64, hi: f64, what: &str, out: &mut Vec<String>| {
            if hi < 10.0 * lo {
                out.push(format!("{what} ratio {:.3} is below 10", hi / lo));
            }
        };
        check(self.omega_r_i, self.j, "J/omega_r_I", &mut out);
        check(self.j, self.omega_r_s, "omega_r_S/J", &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Alpha,
    Beta,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Alpha => "alpha",
            Branch::Beta => "beta",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PulseSegment {
    /// `exp(−i·angle·(axis·S))`, zero duration.
    FastRotation { axis: [f64; 3], angle: f64 },
    /// `exp(−i·angle·H₀/J)`, duration `angle/J`.
    FreeEvolution { angle: f64 },
    /// `exp(−i·angle·H^branch(phase)/ω_r^I)`, duration `angle/ω_r^I`.
    SelectiveDrive { branch: Branch, phase: f64, angle: f64 },
}

impl PulseSegment {
    /// Fast rotation realizing the electron unitary `v ∈ SU(2)` exactly,
    /// with `angle ∈ [0, 2π]`.
    pub fn fast_from_su2(v: &Mat2) -> PulseSegment {
        // v = cos(θ/2) − i·sin(θ/2)·n·σ
        let c = 0.5 * (v.0[0][0] + v.0[1][1]).re;
        let m = (*v - v.adjoint()).scale(C64::new(0.0, 0.5));
        let sn = [m.0[1][0].re, m.0[1][0].im, m.0[0][0].re];
        let s = (sn[0] * sn[0] + sn[1] * sn[1] + sn[2] * sn[2]).sqrt();
        let angle = 2.0 * s.atan2(c);
        let axis = if s > 0.0 { sn.map(|x| x / s) } else { [0.0, 0.0, 1.0] };
        PulseSegment::FastRotation { axis, angle }
    }

    pub fn fast(axis: [f64; 3], angle: f64) -> PulseSegment {
        PulseSegment::fast_from_su2(&fast_su2(axis, angle))
    }

    pub fn free(angle: f64) -> PulseSegment {
        PulseSegment::FreeEvolution {
            angle: angle.rem_euclid(TWO_PI),
        }
    }

    /// Exact unitary of the segment.
    pub fn unitary(&self, params: &SystemParams) -> Complex4x4 {
        match *self {
            PulseSegment::FastRotation { axis, angle } => fast_su2(axis, angle).kron(&Mat2::identity()),
            PulseSegment::FreeEvolution { angle } => {
                // H₀/J = diag(1, −1, 0, 0)
                Complex4x4::diag([C64::from_polar(1.0, -angle), C64::from_polar(1.0, angle), ONE, ONE])
            }
            PulseSegment::SelectiveDrive { branch, phase, angle } => {
                let ratio = params.j / params.omega_r_i;
                let idle = su2_exp([0.0, 0.0, ratio], angle);
                let driven = su2_exp([0.5 * phase.cos(), 0.5 * phase.sin(), 0.0], angle);
                match branch {
                    Branch::Alpha => Complex4x4::block_diag(&idle, &driven),
                    Branch::Beta => Complex4x4::block_diag(&driven, &idle),
                }
            }
        }
    }

    pub fn duration(&self, params: &SystemParams) -> f64 {
        match *self {
            PulseSegment::FastRotation { .. } => 0.0,
            PulseSegment::FreeEvolution { angle } => angle / params.j,
            PulseSegment::SelectiveDrive { angle, .. } => angle / params.omega_r_i,
        }
    }
}

/// `exp(−iθ·v·σ)` for a real 3-vector `v`.
fn su2_exp(v: [f64; 3], theta: f64) -> Mat2 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 {
        return Mat2::identity();
    }
    let (c, s) = ((theta * n).cos(), (theta * n).sin());
    let gen = pauli_x().scale_re(v[0] / n) + pauli_y().scale_re(v[1] / n) + pauli_z().scale_re(v[2] / n);
    Mat2::identity().scale_re(c) + gen.scale(C64::new(0.0, -s))
}

/// `exp(−iθ·n·σ/2)` with `n` normalized.
fn fast_su2(axis: [f64; 3], angle: f64) -> Mat2 {
    su2_exp(axis.map(|x| 0.5 * x), angle)
}

/// Angles of the canonical sequence built from a KAK factorization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssemblyAngles {
    pub t1: f64,
    pub t2: f64,
    /// `τ₁…τ₄` from factorizing `K₁` and `K₂`.
    pub taus: [f64; 4],
    /// ZXZ Euler angles of the four fast rotations `L₁…L₄`.
    pub theta: [[f64; 3]; 4],
    pub v: [f64; 4],
    pub w: f64,
    pub tau: f64,
    pub t3: f64,
    pub t4: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budgets {
    pub slow_time: f64,
    pub coupling_time: f64,
    pub fast_pulse_count: usize,
}

/// Segments in operator order: `segments[0]` is the leftmost factor and is
/// applied last.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PulseProgram {
    pub segments: Vec<PulseSegment>,
    pub target: Option<Unitary4>,
    pub assembly: Option<AssemblyAngles>,
}

impl PulseProgram {
    pub fn new(segments: Vec<PulseSegment>) -> Self {
        PulseProgram {
            segments,
            target: None,
            assembly: None,
        }
    }

    pub fn budgets(&self, params: &SystemParams) -> Budgets {
        let mut slow = 0.0;
        let mut free = 0.0;
        let mut fast = 0;
        for s in &self.segments {
            match *s {
                PulseSegment::FastRotation { .. } => fast += 1,
                PulseSegment::FreeEvolution { angle } => free += angle,
                PulseSegment::SelectiveDrive { angle, .. } => slow += angle,
            }
        }
        Budgets {
            slow_time: slow / params.omega_r_i,
            coupling_time: free / params.j,
            fast_pulse_count: fast,
        }
    }

    /// Sum of selective drive angles, in units of `1/ω_r^I`.
    pub fn slow_angle(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match *s {
                PulseSegment::SelectiveDrive { angle, .. } => angle,
                _ => 0.0,
            })
            .sum()
    }

    /// Operator product `self · other`.
    pub fn concat(&self, other: &PulseProgram) -> PulseProgram {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        PulseProgram::new(segments)
    }

    pub fn count_drives(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, PulseSegment::SelectiveDrive { .. }))
            .count()
    }
}

/// `H₀ = J·I_z + 2J·S_zI_z`.
pub fn hamiltonian_free(params: &SystemParams) -> Complex4x4 {
    let b = basis();
    (b.iz() + b.products[2][2]).scale_re(params.j)
}

/// `H^α(φ) = 2J·S^βI_z + ω_r^I·S^α(I_x cos φ + I_y sin φ)`, Hermitian.
pub fn hamiltonian_alpha(phi: f64, params: &SystemParams) -> Complex4x4 {
    let b = basis();
    let drive = b.ix().scale_re(phi.cos()) + b.iy().scale_re(phi.sin());
    (b.s_beta * b.iz()).scale_re(2.0 * params.j) + (b.s_alpha * drive).scale_re(params.omega_r_i)
}

/// `H^β(φ) = 2J·S^αI_z + ω_r^I·S^β(I_x cos φ + I_y sin φ)`, Hermitian.
pub fn hamiltonian_beta(phi: f64, params: &SystemParams) -> Complex4x4 {
    let b = basis();
    let drive = b.ix().scale_re(phi.cos()) + b.iy().scale_re(phi.sin());
    (b.s_alpha * b.iz()).scale_re(2.0 * params.j) + (b.s_beta * drive).scale_re(params.omega_r_i)
}

/// Product of the segment unitaries in operator order.
pub fn simulate(program: &PulseProgram, params: &SystemParams) -> Unitary4 {
    let m = program
        .segments
        .iter()
        .fold(Complex4x4::identity(), |acc, s| acc * s.unitary(params));
    Unitary4::from_trusted(m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyReport {
    pub distance: f64,
    pub budgets: Budgets,
    pub pass: bool,
}

pub fn verify(program: &PulseProgram, params: &SystemParams, target: &Unitary4, tol: f64) -> VerifyReport {
    let u = simulate(program, params);
    let distance = matrix_distance_up_to_phase(u.matrix(), target.matrix());
    VerifyReport {
        distance,
        budgets: program.budgets(params),
        pass: distance <= tol,
    }
}

fn r_axis(v: f64) -> [f64; 3] {
    [v.cos(), -v.sin(), 0.0]
}

/// `exp(−iwI_z)` as `e^{−iπS_x}·exp(−iwH₀/2J)·e^{iπS_x}·exp(−iwH₀/2J)`.
fn iz_elimination(w: f64) -> [PulseSegment; 4] {
    [
        PulseSegment::fast([1.0, 0.0, 0.0], PI),
        PulseSegment::free(w / 2.0),
        PulseSegment::fast([-1.0, 0.0, 0.0], PI),
        PulseSegment::free(w / 2.0),
    ]
}

/// Canonical sequence for `K₁·exp(t₁X_β + t₂X_α)·K₂` after moving the
/// angles into the Weyl chamber.
pub fn assemble(factors: &KAKFactors, params: &SystemParams) -> PulseProgram {
    let f = factors.canonicalized();
    let (t1, t2) = f.angles.as_pair();
    let k1 = k_factorize(&f.k1);
    let k2 = k_factorize(&f.k2);
    let theta = [k1.euler1, k1.euler2, k2.euler1, k2.euler2].map(|(a, b, c)| [a, b, c]);
    let taus = [k1.tau1, k1.tau2, k2.tau1, k2.tau2];
    let ratio = params.j / params.omega_r_i;

    let t3 = (2.0 * ratio * t1).rem_euclid(2.0 * TWO_PI);
    let t4 = (ratio * (t1 - t2)).rem_euclid(TWO_PI);
    let v3 = theta[2][2] + theta[3][0] + theta[3][2];
    let v2 = theta[1][2] + theta[2][0] + v3;
    let v1 = theta[0][2] + theta[1][0] + v2;
    let v0 = theta[0][0] + v1;
    let tau = taus[3] - taus[2];
    let w = taus[0] - taus[1] + taus[2] - taus[3] - t3;

    let mut raw = vec![PulseSegment::fast([0.0, 0.0, 1.0], v0)];
    raw.extend(iz_elimination(w));
    raw.extend([
        PulseSegment::fast(r_axis(v1), theta[0][1]),
        PulseSegment::free(taus[1]),
        PulseSegment::fast(r_axis(v2), theta[1][1]),
        PulseSegment::SelectiveDrive {
            branch: Branch::Beta,
            phase: (t3 + tau).rem_euclid(TWO_PI),
            angle: t1,
        },
        PulseSegment::free(t4),
        PulseSegment::SelectiveDrive {
            branch: Branch::Alpha,
            phase: tau.rem_euclid(TWO_PI),
            angle: t2,
        },
        PulseSegment::fast(r_axis(v3), theta[2][1]),
        PulseSegment::free(taus[3]),
        PulseSegment::fast(r_axis(theta[3][2]), theta[3][1]),
    ]);

    PulseProgram {
        segments: compact(raw),
        target: Some(Unitary4::from_trusted(f.reconstruct())),
        assembly: Some(AssemblyAngles {
            t1,
            t2,
            taus,
            theta,
            v: [v0, v1, v2, v3],
            w,
            tau,
            t3,
            t4,
        }),
    }
}

/// Segments realizing a K-element.
fn emit_k(k: &Complex4x4) -> Vec<PulseSegment> {
    let kf: KFactorization = k_factorize(&KElement::from_trusted(*k));
    // exp(−iτ₂·2S_zI_z) = exp(−iτ₂H₀/J)·exp(iτ₂I_z), and I_z commutes with L₁.
    let mut out = iz_elimination(kf.tau1 - kf.tau2).to_vec();
    out.push(PulseSegment::fast_from_su2(&kf.l1()));
    out.push(PulseSegment::free(kf.tau2));
    out.push(PulseSegment::fast_from_su2(&kf.l2()));
    out
}

enum Piece {
    K(Box<Complex4x4>),
    Drive(PulseSegment),
}

/// `exp(θ·(−iS^bI_x))` for `θ ≥ 0` as K-dressing times a selective drive
/// at phase `phase`.
fn push_branch_step(pieces: &mut Vec<Piece>, branch: Branch, signed_angle: f64, params: &SystemParams) {
    if signed_angle == 0.0 {
        return;
    }
    let b = basis();
    let angle = signed_angle.abs();
    let phase = if signed_angle > 0.0 { 0.0 } else { PI };
    let idle = match branch {
        Branch::Beta => b.s_alpha * b.iz(),
        Branch::Alpha => b.s_beta * b.iz(),
    };
    // The drive carries the coupling term exp(−iθ(2J/ω)·S^{b'}I_z); undo it.
    let ratio = params.j / params.omega_r_i;
    pieces.push(Piece::K(Box::new(expm_hermitian(&idle, -2.0 * ratio * angle))));
    pieces.push(Piece::Drive(PulseSegment::SelectiveDrive { branch, phase, angle }));
}

/// Realizes the convex Weyl-orbit schedule of `opt` as a pulse program whose
/// simulation matches `opt.factors` and whose slow budget is `t_opt/ω_r^I`
/// when `|b₁| + |b₂| = 1`.
pub fn assemble_schedule(opt: &OptResult, params: &SystemParams) -> PulseProgram {
    let (b1, b2) = opt.drive.pair();
    let mut pieces = vec![Piece::K(Box::new(*opt.factors.k1.matrix()))];
    for entry in &opt.schedule {
        let w = weyl_conjugator(entry.conjugator_index);
        pieces.push(Piece::K(Box::new(w)));
        push_branch_step(&mut pieces, Branch::Beta, entry.weight * b1, params);
        push_branch_step(&mut pieces, Branch::Alpha, entry.weight * b2, params);
        pieces.push(Piece::K(Box::new(w.adjoint())));
    }
    pieces.push(Piece::K(Box::new(*opt.factors.k2.matrix())));

    let mut raw = Vec::new();
    let mut pending = Complex4x4::identity();
    for p in pieces {
        match p {
            Piece::K(k) => pending = pending * *k,
            Piece::Drive(d) => {
                raw.extend(emit_k(&pending));
                raw.push(d);
                pending = Complex4x4::identity();
            }
        }
    }
    raw.extend(emit_k(&pending));

    PulseProgram {
        segments: compact(raw),
        target: Some(Unitary4::from_trusted(opt.factors.reconstruct())),
        assembly: None,
    }
}

fn is_trivial(s: &PulseSegment) -> bool {
    match *s {
        PulseSegment::FastRotation { angle, .. } => angle <= TRIVIAL_ANGLE || (TWO_PI - angle).abs() <= TRIVIAL_ANGLE,
        PulseSegment::FreeEvolution { angle } => angle <= TRIVIAL_ANGLE || TWO_PI - angle <= TRIVIAL_ANGLE,
        PulseSegment::SelectiveDrive { angle, .. } => angle == 0.0,
    }
}

fn merge(a: &PulseSegment, b: &PulseSegment) -> Option<PulseSegment> {
    match (*a, *b) {
        (PulseSegment::FastRotation { axis: x, angle: s }, PulseSegment::FastRotation { axis: y, angle: t }) => {
            Some(PulseSegment::fast_from_su2(&(fast_su2(x, s) * fast_su2(y, t))))
        }
        (PulseSegment::FreeEvolution { angle: s }, PulseSegment::FreeEvolution { angle: t }) => {
            Some(PulseSegment::free(s + t))
        }
        _ => None,
    }
}

/// Merges adjacent fast rotations and adjacent free evolutions and drops
/// identity segments. Fast rotations by `2π` are `−id`, a global phase.
pub fn compact(raw: Vec<PulseSegment>) -> Vec<PulseSegment> {
    let mut out: Vec<PulseSegment> = Vec::with_capacity(raw.len());
    for seg in raw {
        let mut cur = Some(seg);
        while let (Some(top), Some(c)) = (out.last(), cur) {
            match merge(top, &c) {
                Some(m) => {
                    out.pop();
                    cur = Some(m);
                }
                None => break,
            }
        }
        if let Some(c) = cur {
            if !is_trivial(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// `t′ = (−πJ/ω_r^I) mod 2π`, the free-evolution angle of the CNOT and SWAP programs.
fn t_prime(params: &SystemParams) -> f64 {
    (-PI * params.j / params.omega_r_i).rem_euclid(TWO_PI)
}

/// `exp(iπS_z/2)·exp(−it′H₀/J)·exp(−iπH^α(π)/ω_r^I)`, equal to
/// `e^{iπ/4}·CNOT[1,2]` up to global phase.
pub fn cnot12_program(params: &SystemParams) -> PulseProgram {
    PulseProgram::new(vec![
        PulseSegment::fast([0.0, 0.0, -1.0], PI / 2.0),
        PulseSegment::free(t_prime(params)),
        PulseSegment::SelectiveDrive {
            branch: Branch::Alpha,
            phase: PI,
            angle: PI,
        },
    ])
}

/// SWAP program with `R̃₅ = exp(iπS_z/2)·exp(−iπS_x/2)` merged into one pulse.
pub fn swap_program(params: &SystemParams) -> PulseProgram {
    let r5 = fast_su2([0.0, 0.0, -1.0], PI / 2.0) * fast_su2([1.0, 0.0, 0.0], PI / 2.0);
    PulseProgram::new(vec![
        PulseSegment::fast_from_su2(&r5),
        PulseSegment::free(1.5 * PI),
        PulseSegment::fast([0.0, -1.0, 0.0], PI / 2.0),
        PulseSegment::free(t_prime(params)),
        PulseSegment::SelectiveDrive {
            branch: Branch::Alpha,
            phase: PI,
            angle: PI,
        },
        PulseSegment::fast([1.0, 0.0, 0.0], PI / 2.0),
        PulseSegment::free(PI / 2.0),
        PulseSegment::fast([0.0, 1.0, 0.0], PI / 2.0),
    ])
}

/// Phase-blind distance between the driven evolution with both hyperfine
/// transitions excited and its selective (truncated) form, in units `ω_r^I = 1`.
pub fn truncation_error(ratio: f64, phi: f64, total_angle: f64) -> f64 {
    let b = basis();
    let drive = b.ix().scale_re(phi.cos()) + b.iy().scale_re(phi.sin());
    let ising = (b.s_beta * b.iz()).scale_re(2.0 * ratio);
    let full = ising + drive;
    let truncated = ising + b.s_alpha * drive;
    let u = expm_hermitian(&full, total_angle);
    let v = expm_hermitian(&truncated, total_angle);
    matrix_distance_up_to_phase(&u, &v)
}

/// `exp_abelian` of `(t₁, t₂)` rebuilt from selective drives with exact
/// K-dressing, for checking the drive identity in isolation.
pub fn abelian_via_drives(t1: f64, t2: f64, params: &SystemParams) -> Complex4x4 {
    let mut pieces = Vec::new();
    push_branch_step(&mut pieces, Branch::Beta, t1, params);
    push_branch_step(&mut pieces, Branch::Alpha, t2, params);
    pieces.iter().fold(Complex4x4::identity(), |acc, p| match p {
        Piece::K(k) => acc * **k,
        Piece::Drive(d) => acc * d.unitary(params),
    })
}
