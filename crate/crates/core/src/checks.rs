//! Invariant suites run by `qsynth checks` and reused by the acceptance tests.

use std::f64::consts::PI;

use rand::Rng;

use crate::kak::{kak_decompose, weyl_action};
use crate::linalg::Complex4x4;
use crate::pulseprog::{hamiltonian_alpha, hamiltonian_free, truncation_error, SystemParams};
use crate::random::{algebra_element_on, haar_su4, rng};
use crate::su4core::{basis, cartan_project, commutator, lie_closure, AlgebraElement, K_INDICES, P_INDICES};
use crate::timeopt::{min_time, r_majorizes, DriveSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub detail: String,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn line(&self) -> String {
        let verdict = if self.ok() { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            format!("{}: {}/{} {}", self.name, self.passed, self.total, verdict)
        } else {
            format!(
                "{}: {}/{} {} ({})",
                self.name, self.passed, self.total, verdict, self.detail
            )
        }
    }
}

fn algebra(h: &Complex4x4) -> AlgebraElement {
    AlgebraElement::from_hamiltonian(h)
}

/// Dimension of the algebra generated by `−iS_μ`, `−iH^α(0)` and `−iH₀`.
pub fn full_closure_dimension(params: &SystemParams) -> usize {
    let b = basis();
    let gens = [
        algebra(&b.sx()),
        algebra(&b.sy()),
        algebra(&b.sz()),
        algebra(&hamiltonian_alpha(0.0, params).scale_re(1.0 / params.omega_r_i)),
        algebra(&hamiltonian_free(params).scale_re(1.0 / params.j)),
    ];
    lie_closure(&gens).0
}

/// Dimension of the algebra generated by `−iS_x`, `−iS_y`, `−iI_z` and `−i2S_zI_z`.
pub fn k_closure_dimension() -> usize {
    let b = basis();
    let gens = [
        algebra(&b.sx()),
        algebra(&b.sy()),
        algebra(&b.iz()),
        algebra(&b.products[2][2]),
    ];
    lie_closure(&gens).0
}

pub fn lie_closure_full(params: &SystemParams) -> SuiteResult {
    SuiteResult {
        name: "lie_closure_full",
        passed: full_closure_dimension(params),
        total: 15,
        detail: String::new(),
    }
}

pub fn k_closure() -> SuiteResult {
    SuiteResult {
        name: "k_closure",
        passed: k_closure_dimension(),
        total: 7,
        detail: String::new(),
    }
}

/// Largest cross-projection residual of `[k,k] ⊂ k`, `[k,p] ⊂ p`, `[p,p] ⊂ k`
/// for one random draw.
pub fn cartan_residual<R: Rng + ?Sized>(r: &mut R) -> f64 {
    let k1 = algebra_element_on(r, &K_INDICES, 1.0);
    let k2 = algebra_element_on(r, &K_INDICES, 1.0);
    let p1 = algebra_element_on(r, &P_INDICES, 1.0);
    let p2 = algebra_element_on(r, &P_INDICES, 1.0);
    let kk = cartan_project(&commutator(&k1, &k2)).1.norm();
    let kp = cartan_project(&commutator(&k1, &p1)).0.norm();
    let pp = cartan_project(&commutator(&p1, &p2)).1.norm();
    kk.max(kp).max(pp)
}

pub fn cartan_relations(seed: u64, samples: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut worst: f64 = 0.0;
    let mut passed = 0;
    for _ in 0..samples {
        let res = cartan_residual(&mut r);
        worst = worst.max(res);
        if res <= 1e-12 {
            passed += 1;
        }
    }
    SuiteResult {
        name: "cartan_relations",
        passed,
        total: samples,
        detail: format!("max residual {worst:.2e}"),
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Whether `a` lies in the convex hull of `points`, allowing `slack` of
/// outward distance from every edge.
pub fn hull_contains(points: &[(f64, f64)], a: (f64, f64), slack: f64) -> bool {
    let hull = convex_hull(points);
    match hull.len() {
        0 => false,
        1 => (a.0 - hull[0].0).hypot(a.1 - hull[0].1) <= slack,
        2 => segment_distance(hull[0], hull[1], a) <= slack,
        n => (0..n).all(|i| {
            let (p, q) = (hull[i], hull[(i + 1) % n]);
            let len = (q.0 - p.0).hypot(q.1 - p.1);
            cross(p, q, a) / len >= -slack
        }),
    }
}

fn segment_distance(p: (f64, f64), q: (f64, f64), a: (f64, f64)) -> f64 {
    let d = (q.0 - p.0, q.1 - p.1);
    let t = (((a.0 - p.0) * d.0 + (a.1 - p.1) * d.1) / (d.0 * d.0 + d.1 * d.1)).clamp(0.0, 1.0);
    (a.0 - p.0 - t * d.0).hypot(a.1 - p.1 - t * d.1)
}

/// All eight signed permutations of `b`, duplicates included.
pub fn signed_permutations(b: (f64, f64)) -> Vec<(f64, f64)> {
    (0..8).map(|w| weyl_action(w, b)).collect()
}

pub fn weyl_convexity(seed: u64, samples: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut passed = 0;
    let mut inside = 0;
    for _ in 0..samples {
        let b = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let a = (r.random_range(-1.5..1.5), r.random_range(-1.5..1.5));
        let hull = hull_contains(&signed_permutations(b), a, 1e-9);
        if hull == r_majorizes(a, b) {
            passed += 1;
        }
        inside += hull as usize;
    }
    SuiteResult {
        name: "weyl_convexity",
        passed,
        total: samples,
        detail: format!("{inside} inside"),
    }
}

/// `a ≺_r a + 2πz` over the grid `a ∈ [−π, π]²` with step `π/20`, `z ∈ {−3..3}²`.
pub fn lattice_majorization() -> SuiteResult {
    let mut passed = 0;
    let mut total = 0;
    for i in -20..=20 {
        for j in -20..=20 {
            let a = (i as f64 * PI / 20.0, j as f64 * PI / 20.0);
            for z1 in -3..=3 {
                for z2 in -3..=3 {
                    let shifted = (a.0 + 2.0 * PI * z1 as f64, a.1 + 2.0 * PI * z2 as f64);
                    total += 1;
                    passed += r_majorizes(a, shifted) as usize;
                }
            }
        }
    }
    SuiteResult {
        name: "lattice_majorization",
        passed,
        total,
        detail: String::new(),
    }
}

/// Random drive with `|b₁| + |b₂| = 1`.
pub fn unit_drive<R: Rng + ?Sized>(r: &mut R) -> (f64, f64) {
    let b1: f64 = r.random_range(-1.0..1.0);
    let rest = 1.0 - b1.abs();
    let b2 = if r.random_bool(0.5) { rest } else { -rest };
    (b1, b2)
}

pub fn drive_dominance(seed: u64, targets: usize, drives: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut passed = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..targets {
        let g = haar_su4(&mut r);
        let single = min_time(&g, &DriveSpec::single_transition(1.0))
            .expect("valid target")
            .t_opt;
        for _ in 0..drives {
            let (b1, b2) = unit_drive(&mut r);
            let t = min_time(&g, &DriveSpec::new(b1, b2, 1.0).expect("unit drive"))
                .expect("valid target")
                .t_opt;
            worst = worst.max(single - t);
            if single <= t + 1e-9 {
                passed += 1;
            }
        }
    }
    SuiteResult {
        name: "drive_dominance",
        passed,
        total: targets * drives,
        detail: format!("max t(1,0) - t(b) = {worst:.2e}"),
    }
}

pub fn truncation_scaling() -> SuiteResult {
    let e10 = truncation_error(10.0, 0.0, PI);
    let e100 = truncation_error(100.0, 0.0, PI);
    let e_inf = truncation_error(1e5, 0.0, PI);
    let ratio = e10 / e100;
    let checks = [(5.0..=20.0).contains(&ratio), e_inf <= 1e-4, e100 < 0.05];
    SuiteResult {
        name: "truncation_scaling",
        passed: checks.iter().filter(|&&c| c).count(),
        total: checks.len(),
        detail: format!("ratio {ratio:.3}, error(1e5) {e_inf:.2e}"),
    }
}

pub fn kak_roundtrip(seed: u64, samples: usize) -> SuiteResult {
    let mut r = rng(seed);
    let mut passed = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let g = haar_su4(&mut r);
        let res = match kak_decompose(&g) {
            Ok(f) => f.reconstruct().dist(g.matrix()),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(res);
        if res <= 1e-9 {
            passed += 1;
        }
    }
    SuiteResult {
        name: "kak_roundtrip",
        passed,
        total: samples,
        detail: format!("max residual {worst:.2e}"),
    }
}

/// Every suite, in display order.
pub fn run_all(seed: u64, params: &SystemParams) -> Vec<SuiteResult> {
    vec![
        lie_closure_full(params),
        k_closure(),
        cartan_relations(seed, 100),
        weyl_convexity(seed, 10_000),
        lattice_majorization(),
        drive_dominance(seed, 100, 20),
        truncation_scaling(),
        kak_roundtrip(seed, 1000),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_diamond() {
        let pts = signed_permutations((1.0, 0.0));
        assert_eq!(convex_hull(&pts).len(), 4);
        assert!(hull_contains(&pts, (0.5, 0.5), 1e-12));
        assert!(!hull_contains(&pts, (0.6, 0.5), 1e-12));
        assert!(hull_contains(&pts, (0.0, 0.0), 0.0));
    }

    #[test]
    fn hull_of_octagon() {
        let pts = signed_permutations((0.6, 0.2));
        assert_eq!(convex_hull(&pts).len(), 8);
        assert!(hull_contains(&pts, (0.4, 0.4), 1e-12));
        assert!(!hull_contains(&pts, (0.45, 0.45), 1e-12));
    }

    #[test]
    fn degenerate_hulls() {
        assert!(hull_contains(&[(0.0, 0.0)], (0.0, 0.0), 1e-12));
        assert!(hull_contains(&[(-1.0, 0.0), (1.0, 0.0)], (0.3, 0.0), 1e-12));
        assert!(!hull_contains(&[(-1.0, 0.0), (1.0, 0.0)], (0.3, 0.1), 1e-12));
    }

    #[test]
    fn closures() {
        assert_eq!(full_closure_dimension(&SystemParams::default()), 15);
        assert_eq!(k_closure_dimension(), 7);
    }

    #[test]
    fn small_suites_pass() {
        assert!(cartan_relations(1, 20).ok());
        assert!(weyl_convexity(1, 500).ok());
        assert!(truncation_scaling().ok());
        assert!(kak_roundtrip(1, 20).ok());
    }

    #[test]
    fn suite_line_format() {
        let s = SuiteResult {
            name: "k_closure",
            passed: 7,
            total: 7,
            detail: String::new(),
        };
        assert_eq!(s.line(), "k_closure: 7/7 PASS");
    }
}
