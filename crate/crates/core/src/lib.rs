//! Time-optimal control toolkit for a coupled fast/slow qubit pair.
//!
//! The crate decomposes any element of SU(4) as `K₁·exp(t₁(−iS^βI_x) + t₂(−iS^αI_x))·K₂`
//! with `K₁, K₂ ∈ S[U(2)×U(2)]`, computes the minimal slow-qubit drive time
//! under r-majorization, and assembles pulse programs built only from fast
//! rotations, free evolution under `H₀` and selective nuclear drives.

pub mod checks;
pub mod error;
pub mod kak;
pub mod linalg;
pub mod pulseprog;
pub mod random;
pub mod su4core;
pub mod timeopt;

pub use error::{Error, Result};
pub use kak::{
    canonicalize, euler_zxz, exp_abelian, k_factorize, k_membership, kak_decompose, lattice_equivalents, AbelianAngles,
    KAKFactors, KElement, KFactorization, LatticeShift, WeylMove,
};
pub use linalg::{Complex4x4, Mat2, C64};
pub use pulseprog::{
    assemble, assemble_schedule, simulate, truncation_error, verify, AssemblyAngles, Branch, PulseProgram,
    PulseSegment, SystemParams, VerifyReport,
};
pub use su4core::{
    build_operator_basis, cartan_project, commutator, distance_up_to_phase, expm_skew, lie_closure, logm_unitary,
    AlgebraElement, OperatorBasis, Unitary4,
};
pub use timeopt::{
    conjugator_verify, convex_weyl_decompose, min_time, r_majorizes, t_opt_angles, weyl_orbit, CenterElement,
    DriveSpec, OptResult, ScheduleEntry, WeylOrbit,
};
