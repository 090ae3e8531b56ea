use std::f64::consts::PI;

use qsynth_core::pulseprog::{cnot12_program, swap_program};
use qsynth_core::su4core::{basis, expm_hermitian, swap_matrix};
use qsynth_core::{
    assemble, distance_up_to_phase, k_membership, kak_decompose, min_time, simulate, verify, Complex4x4, DriveSpec,
    SystemParams, Unitary4, C64,
};

fn cnot12() -> Unitary4 {
    Unitary4::new(Complex4x4::from_real([
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
    ]))
    .unwrap()
}

fn cnot21() -> Unitary4 {
    Unitary4::new(Complex4x4::from_real([
        [1., 0., 0., 0.],
        [0., 0., 0., 1.],
        [0., 0., 1., 0.],
        [0., 1., 0., 0.],
    ]))
    .unwrap()
}

#[test]
fn cnot12_has_angles_pi_zero() {
    let rep = cnot12().phase_shifted(PI / 4.0);
    assert!(rep.is_special());
    let a = kak_decompose(&rep).unwrap().angles;
    assert!((a.t1 - PI).abs() < 1e-12 && a.t2.abs() < 1e-12, "{a:?}");
}

#[test]
fn cnot21_is_local_up_to_phase() {
    let rep = cnot21().phase_shifted(PI / 4.0);
    assert!(k_membership(&rep));
    let opt = min_time(&cnot21(), &DriveSpec::single_transition(1.0)).unwrap();
    assert!(opt.t_opt.abs() < 1e-12);
    assert!(opt.schedule.is_empty());
}

#[test]
fn balanced_drive_doubles_cnot_time() {
    let opt = min_time(&cnot12(), &DriveSpec::new(0.5, 0.5, 1.0).unwrap()).unwrap();
    assert!((opt.t_opt - 2.0 * PI).abs() < 1e-9);
}

#[test]
fn heisenberg_exponential_is_phased_swap() {
    let b = basis();
    let dot = b.sx() * b.ix() + b.sy() * b.iy() + b.sz() * b.iz();
    let u = expm_hermitian(&dot, PI);
    let expect = swap_matrix().scale(C64::from_polar(1.0, -PI / 4.0));
    assert!(u.dist(&expect) < 1e-12);
}

#[test]
fn library_programs_match_their_gates() {
    for j in [10.0, 37.5, 1e3] {
        let params = SystemParams::new(j, 1.0, 1e4 * j);
        assert!(verify(&cnot12_program(&params), &params, &cnot12(), 1e-10).pass);
        let swap = Unitary4::new(swap_matrix()).unwrap();
        assert!(verify(&swap_program(&params), &params, &swap, 1e-10).pass);
    }
}

#[test]
fn assembled_cnot_uses_a_single_drive_of_angle_pi() {
    let params = SystemParams::default();
    let opt = min_time(&cnot12(), &DriveSpec::single_transition(params.omega_r_i)).unwrap();
    let prog = assemble(&opt.factors, &params);
    assert_eq!(prog.count_drives(), 1);
    assert_eq!(prog.slow_angle(), PI);
    assert!(distance_up_to_phase(&simulate(&prog, &params), &cnot12()) < 1e-8);
}
