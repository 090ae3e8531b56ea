//! End-to-end acceptance run. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use qsynth_core::checks::{cartan_residual, full_closure_dimension, k_closure_dimension, unit_drive};
use qsynth_core::kak::weyl_action;
use qsynth_core::random::{haar_su4, rng};
use qsynth_core::{
    assemble, assemble_schedule, kak_decompose, min_time, r_majorizes, truncation_error, verify, Complex4x4, DriveSpec,
    SystemParams, Unitary4,
};
use rand::Rng;

const SEED: u64 = 20_240_611;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn perm(rows: [[f64; 4]; 4]) -> Unitary4 {
    Unitary4::new(Complex4x4::from_real(rows)).unwrap()
}

fn cnot12() -> Unitary4 {
    perm([[1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.]])
}

fn cnot21() -> Unitary4 {
    perm([[1., 0., 0., 0.], [0., 0., 0., 1.], [0., 0., 1., 0.], [0., 1., 0., 0.]])
}

fn swap() -> Unitary4 {
    perm([[1., 0., 0., 0.], [0., 0., 1., 0.], [0., 1., 0., 0.], [0., 0., 0., 1.]])
}

fn kak_roundtrip() -> Outcome {
    let mut r = rng(SEED);
    let targets: Vec<_> = (0..1000).map(|_| haar_su4(&mut r)).collect();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for g in &targets {
        match kak_decompose(g) {
            Ok(f) => {
                let res = f.reconstruct().dist(g.matrix());
                worst = worst.max(res);
                failures += (res > 1e-9) as usize;
            }
            Err(_) => failures += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && secs < 10.0,
        format!("1000 targets, max residual {worst:.2e}, {secs:.3} s"),
    )
}

fn named_gate_times() -> Outcome {
    let drive = DriveSpec::single_transition(1.0);
    let t = |g: &Unitary4| min_time(g, &drive).unwrap().t_opt;
    let (c12, sw, c21) = (t(&cnot12()), t(&swap()), t(&cnot21()));
    outcome(
        (c12 - PI).abs() <= 1e-9 && (sw - PI).abs() <= 1e-9 && c21.abs() <= 1e-12,
        format!("CNOT12 {c12:.12}, SWAP {sw:.12}, CNOT21 {c21:.3e}"),
    )
}

fn lie_closures() -> Outcome {
    let full = full_closure_dimension(&SystemParams::default());
    let k = k_closure_dimension();
    outcome(full == 15 && k == 7, format!("full {full}, k {k}"))
}

fn cartan() -> Outcome {
    let mut r = rng(SEED + 4);
    let worst = (0..100).map(|_| cartan_residual(&mut r)).fold(0.0, f64::max);
    outcome(worst <= 1e-12, format!("100 samples, max residual {worst:.2e}"))
}

fn seg_distance(p: (f64, f64), q: (f64, f64), a: (f64, f64)) -> f64 {
    let d = (q.0 - p.0, q.1 - p.1);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((a.0 - p.0) * d.0 + (a.1 - p.1) * d.1) / len2).clamp(0.0, 1.0)
    };
    (a.0 - p.0 - t * d.0).hypot(a.1 - p.1 - t * d.1)
}

/// Distance from `a` to the triangle `pqr`, zero inside.
fn triangle_distance(p: (f64, f64), q: (f64, f64), r: (f64, f64), a: (f64, f64)) -> f64 {
    let side = |u: (f64, f64), v: (f64, f64)| (v.0 - u.0) * (a.1 - u.1) - (v.1 - u.1) * (a.0 - u.0);
    let s = [side(p, q), side(q, r), side(r, p)];
    if s.iter().all(|&x| x >= 0.0) || s.iter().all(|&x| x <= 0.0) {
        let area = (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
        if area != 0.0 {
            return 0.0;
        }
    }
    seg_distance(p, q, a)
        .min(seg_distance(q, r, a))
        .min(seg_distance(r, p, a))
}

/// Hull membership by covering the hull with triangles of orbit points.
fn in_weyl_hull(a: (f64, f64), b: (f64, f64), slack: f64) -> bool {
    let pts: Vec<_> = (0..8).map(|w| weyl_action(w, b)).collect();
    let mut best = f64::INFINITY;
    for i in 0..8 {
        for j in i + 1..8 {
            for k in j + 1..8 {
                best = best.min(triangle_distance(pts[i], pts[j], pts[k], a));
            }
        }
    }
    best <= slack
}

fn weyl_equivalence() -> Outcome {
    let mut r = rng(SEED + 5);
    let mut disagreements = 0;
    let mut inside = 0;
    for _ in 0..10_000 {
        let b = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let a = (r.random_range(-1.5..1.5), r.random_range(-1.5..1.5));
        let hull = in_weyl_hull(a, b, 1e-9);
        inside += hull as usize;
        disagreements += (hull != r_majorizes(a, b)) as usize;
    }
    outcome(
        disagreements == 0 && inside > 0 && inside < 10_000,
        format!("10000 pairs, {inside} inside, {disagreements} disagreements"),
    )
}

fn lattice_property() -> Outcome {
    let mut count = 0;
    let mut failures = 0;
    for i in -20..=20 {
        for j in -20..=20 {
            let a = (i as f64 * PI / 20.0, j as f64 * PI / 20.0);
            for z1 in -3..=3 {
                for z2 in -3..=3 {
                    let s = (a.0 + 2.0 * PI * z1 as f64, a.1 + 2.0 * PI * z2 as f64);
                    count += 1;
                    failures += !r_majorizes(a, s) as usize;
                }
            }
        }
    }
    outcome(failures == 0, format!("{count} checks, {failures} failures"))
}

fn program_fidelity() -> Outcome {
    let params = SystemParams::default();
    let drive = DriveSpec::single_transition(params.omega_r_i);
    let mut r = rng(SEED + 7);
    let mut targets = vec![cnot12(), cnot21(), swap()];
    targets.extend((0..200).map(|_| haar_su4(&mut r)));

    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut budget_kak = 0;
    let mut budget_schedule = 0;
    for g in &targets {
        let opt = min_time(g, &drive).unwrap();
        let prog = assemble(&opt.factors, &params);
        let rep = verify(&prog, &params, g, 1e-8);
        let a = prog.assembly.unwrap();
        worst = worst.max(rep.distance);
        failures += !rep.pass as usize;
        budget_kak += (rep.budgets.slow_time != (a.t1.abs() + a.t2.abs()) / params.omega_r_i) as usize;

        let sched = assemble_schedule(&opt, &params);
        let rep = verify(&sched, &params, g, 1e-8);
        worst = worst.max(rep.distance);
        failures += !rep.pass as usize;
        let expect = opt.t_opt / params.omega_r_i;
        budget_schedule += ((rep.budgets.slow_time - expect).abs() > 1e-12 * expect.max(1e-300)) as usize;
    }
    outcome(
        failures == 0 && budget_kak == 0 && budget_schedule == 0,
        format!(
            "{} targets x 2 paths, max distance {worst:.2e}, budget mismatches kak {budget_kak} schedule {budget_schedule}",
            targets.len()
        ),
    )
}

/// Canonical chamber point computed independently of the library.
fn chamber(x: (f64, f64)) -> (f64, f64) {
    let wrap = |t: f64| {
        let r = t.rem_euclid(2.0 * PI);
        if r > PI {
            r - 2.0 * PI
        } else {
            r
        }
    };
    let (u, v) = (wrap(x.0).abs(), wrap(x.1).abs());
    (u.max(v), u.min(v))
}

fn brute_force_oracle() -> Outcome {
    let step = PI / 200.0;
    let mut r = rng(SEED + 8);
    let drive = DriveSpec::single_transition(1.0);
    let mut violations = 0;
    let mut vacuous = 0;
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..50 {
        let g = haar_su4(&mut r);
        let t_opt = min_time(&g, &drive).unwrap().t_opt;
        // Canonical angles of the four determinant-one representatives.
        let base = -g.det().arg() / 4.0;
        let centers: Vec<(f64, f64)> = (0..4)
            .map(|k| {
                let rep = g.phase_shifted(base + k as f64 * PI / 2.0);
                chamber(kak_decompose(&rep).unwrap().angles.as_pair())
            })
            .collect();
        let feasible = |x: (f64, f64)| {
            let c = chamber(x);
            centers
                .iter()
                .any(|a| (c.0 - a.0).abs() <= step / 2.0 + 1e-12 && (c.1 - a.1).abs() <= step / 2.0 + 1e-12)
        };
        // Products of up to three segments along ±e₁, ±e₂ reach the grid
        // point (m₁, m₂)·step in time (|m₁| + |m₂|)·step at best.
        let radius = ((t_opt + 2.0 * step) / step).ceil() as i64;
        let mut best = f64::INFINITY;
        for m1 in -radius..=radius {
            let rest = radius - m1.abs();
            for m2 in -rest..=rest {
                let t = (m1.abs() + m2.abs()) as f64 * step;
                if t < best && feasible((m1 as f64 * step, m2 as f64 * step)) {
                    best = t;
                }
            }
        }
        worst_gap = worst_gap.max(t_opt - best);
        violations += (best < t_opt - step - 1e-12) as usize;
        vacuous += best.is_infinite() as usize;
    }
    outcome(
        violations == 0 && vacuous == 0,
        format!("50 targets, max t_opt - T_grid = {worst_gap:.3e} (step {step:.3e}), {vacuous} without grid solution"),
    )
}

fn truncation() -> Outcome {
    let e10 = truncation_error(10.0, 0.0, PI);
    let e100 = truncation_error(100.0, 0.0, PI);
    let e_inf = truncation_error(1e5, 0.0, PI);
    let ratio = e10 / e100;
    outcome(
        (5.0..=20.0).contains(&ratio) && e_inf <= 1e-4,
        format!("error(10) {e10:.3e}, error(100) {e100:.3e}, ratio {ratio:.3}, error(1e5) {e_inf:.3e}"),
    )
}

fn dominance() -> Outcome {
    let mut r = rng(SEED + 10);
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let g = haar_su4(&mut r);
        let single = min_time(&g, &DriveSpec::single_transition(1.0)).unwrap().t_opt;
        for _ in 0..20 {
            let (b1, b2) = unit_drive(&mut r);
            let t = min_time(&g, &DriveSpec::new(b1, b2, 1.0).unwrap()).unwrap().t_opt;
            worst = worst.max(single - t);
            failures += (single > t + 1e-9) as usize;
        }
    }
    outcome(failures == 0, format!("2000 pairs, max t(1,0) - t(b) = {worst:.3e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("kak roundtrip", kak_roundtrip),
        ("optimal times of CNOT and SWAP", named_gate_times),
        ("lie closure dimensions", lie_closures),
        ("cartan relations", cartan),
        ("r-majorization equals weyl hull membership", weyl_equivalence),
        ("lattice shifts majorize", lattice_property),
        ("program fidelity and budgets", program_fidelity),
        ("brute-force time oracle", brute_force_oracle),
        ("truncation scaling", truncation),
        ("single-transition dominance", dominance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("acceptance {:>2} {verdict} {name}: {}", i + 1, o.detail);
        failed += !o.pass as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
