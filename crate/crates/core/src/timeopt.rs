//! Minimal slow-drive time for a target unitary.
//!
//! A drive with amplitude fractions `(b₁, b₂)` on the two nuclear transitions
//! produces, after K-dressing, commuting abelian steps drawn from the Weyl
//! orbit of `b`. A target with canonical abelian angles `a` is reachable in
//! time `t` iff `a` is r-majorized by `t·b`, so the optimum is a closed-form
//! ratio minimized over the four determinant-one center representatives.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kak::{kak_decompose, weyl_action, weyl_conjugator, AbelianAngles, KAKFactors};
use crate::linalg::{Complex4x4, C64, I};
use crate::su4core::{basis, Unitary4};

pub const ORBIT_DEDUP_TOL: f64 = 1e-12;
pub const MAJORIZATION_SLACK: f64 = 1e-12;
pub const CONJUGATION_TOL: f64 = 1e-12;

/// Amplitude split across the two nuclear transitions and the peak nuclear
/// Rabi frequency (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSpec {
    pub b1: f64,
    pub b2: f64,
    pub omega_r_i: f64,
}

impl DriveSpec {
    pub fn new(b1: f64, b2: f64, omega_r_i: f64) -> Result<Self> {
        if !(b1.is_finite() && b2.is_finite() && omega_r_i.is_finite()) {
            return Err(Error::InvalidDrive("non-finite value".into()));
        }
        if b1.abs() + b2.abs() > 1.0 + 1e-12 {
            return Err(Error::InvalidDrive(format!(
                "|b1| + |b2| = {} exceeds 1",
                b1.abs() + b2.abs()
            )));
        }
        if omega_r_i <= 0.0 {
            return Err(Error::InvalidDrive("omega_r_I must be positive".into()));
        }
        if b1 == 0.0 && b2 == 0.0 {
            return Err(Error::ZeroDrive);
        }
        Ok(DriveSpec { b1, b2, omega_r_i })
    }

    /// All amplitude on the β-branch transition.
    pub fn single_transition(omega_r_i: f64) -> Self {
        DriveSpec {
            b1: 1.0,
            b2: 0.0,
            omega_r_i,
        }
    }

    pub fn pair(&self) -> (f64, f64) {
        (self.b1, self.b2)
    }
}

/// Distinct images of `b` under the Weyl group with the first conjugator index
/// producing each.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOrbit {
    pub points: Vec<(f64, f64)>,
    pub conjugators: Vec<usize>,
}

impl WeylOrbit {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn weyl_orbit(b: (f64, f64)) -> WeylOrbit {
    let mut points: Vec<(f64, f64)> = Vec::with_capacity(8);
    let mut conjugators = Vec::with_capacity(8);
    for w in 0..8 {
        let p = weyl_action(w, b);
        let dup = points
            .iter()
            .any(|q| (q.0 - p.0).abs() <= ORBIT_DEDUP_TOL && (q.1 - p.1).abs() <= ORBIT_DEDUP_TOL);
        if !dup {
            points.push(p);
            conjugators.push(w);
        }
    }
    WeylOrbit { points, conjugators }
}

/// `b₁(−iS^βI_x) + b₂(−iS^αI_x)` as a matrix.
pub fn abelian_generator((b1, b2): (f64, f64)) -> Complex4x4 {
    let bs = basis();
    let h = (bs.s_beta * bs.ix()).scale_re(b1) + (bs.s_alpha * bs.ix()).scale_re(b2);
    h.scale(-I)
}

/// Checks every orbit point against explicit conjugation of `b` by its
/// recorded K-element.
pub fn conjugator_verify(orbit: &WeylOrbit, b: (f64, f64)) -> bool {
    let gen = abelian_generator(b);
    orbit.points.iter().zip(&orbit.conjugators).all(|(&p, &w)| {
        let k = weyl_conjugator(w);
        (k * gen * k.adjoint()).dist(&abelian_generator(p)) <= CONJUGATION_TOL
    })
}

pub fn r_majorizes(a: (f64, f64), b: (f64, f64)) -> bool {
    let max_a = a.0.abs().max(a.1.abs());
    let max_b = b.0.abs().max(b.1.abs());
    let sum_a = a.0.abs() + a.1.abs();
    let sum_b = b.0.abs() + b.1.abs();
    max_a <= max_b + MAJORIZATION_SLACK && sum_a <= sum_b + MAJORIZATION_SLACK
}

/// One abelian step of a schedule: `weight` units of drive time spent on the
/// orbit point reached through Weyl conjugator `conjugator_index`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleEntry {
    pub orbit_point: (f64, f64),
    pub weight: f64,
    pub conjugator_index: usize,
}

/// Writes `a` as a convex combination of at most three Weyl-orbit points of `b`.
///
/// Triples are tried in lexicographic order; the first with a nonnegative
/// barycentric solution wins.
pub fn convex_weyl_decompose(a: (f64, f64), b: (f64, f64)) -> Result<Vec<ScheduleEntry>> {
    if !r_majorizes(a, b) {
        return Err(Error::NotMajorized {
            a1: a.0,
            a2: a.1,
            b1: b.0,
            b2: b.1,
        });
    }
    let orbit = weyl_orbit(b);
    if orbit.len() == 1 {
        return Ok(vec![ScheduleEntry {
            orbit_point: orbit.points[0],
            weight: 1.0,
            conjugator_index: orbit.conjugators[0],
        }]);
    }

    for tol in [1e-12, 1e-9] {
        if let Some(entries) = first_feasible_triple(&orbit, a, tol) {
            return Ok(entries);
        }
    }
    Err(Error::NotMajorized {
        a1: a.0,
        a2: a.1,
        b1: b.0,
        b2: b.1,
    })
}

fn first_feasible_triple(orbit: &WeylOrbit, a: (f64, f64), tol: f64) -> Option<Vec<ScheduleEntry>> {
    let n = orbit.len();
    let p = &orbit.points;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(w) = barycentric(p[i], p[j], p[k], a) else {
                    continue;
                };
                if w.iter().any(|&x| x < -tol) {
                    continue;
                }
                let w = w.map(|x| if x < 1e-14 { 0.0 } else { x });
                let total: f64 = w.iter().sum();
                let entries = [i, j, k]
                    .iter()
                    .zip(w)
                    .filter(|(_, x)| *x > 0.0)
                    .map(|(&idx, x)| ScheduleEntry {
                        orbit_point: p[idx],
                        weight: x / total,
                        conjugator_index: orbit.conjugators[idx],
                    })
                    .collect();
                return Some(entries);
            }
        }
    }
    None
}

/// Solves `w₀p₀ + w₁p₁ + w₂p₂ = a`, `Σw = 1` by Cramer's rule.
fn barycentric(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64), a: (f64, f64)) -> Option<[f64; 3]> {
    let area = |u: (f64, f64), v: (f64, f64), w: (f64, f64)| (v.0 - u.0) * (w.1 - u.1) - (w.0 - u.0) * (v.1 - u.1);
    let det = area(p0, p1, p2);
    let scale = [p0, p1, p2].iter().map(|q| q.0.abs() + q.1.abs()).fold(0.0, f64::max);
    if det.abs() <= 1e-14 * scale * scale.max(1e-300) {
        return None;
    }
    Some([area(a, p1, p2) / det, area(p0, a, p2) / det, area(p0, p1, a) / det])
}

/// Smallest `t ≥ 0` with `a ≺_r t·b`.
pub fn t_opt_angles(a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    let max_b = b.0.abs().max(b.1.abs());
    if max_b == 0.0 {
        return Err(Error::ZeroDrive);
    }
    let sum_ratio = (a.0.abs() + a.1.abs()) / (b.0.abs() + b.1.abs());
    let max_a = a.0.abs().max(a.1.abs());
    let max_ratio = if max_a == 0.0 { 0.0 } else { max_a / max_b };
    Ok(sum_ratio.max(max_ratio))
}

/// Scalar `i^k·id`, one of the four determinant-one multiples of the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CenterElement {
    pub k: u8,
}

impl CenterElement {
    pub fn all() -> [CenterElement; 4] {
        [0, 1, 2, 3].map(|k| CenterElement { k })
    }

    pub fn phase(&self) -> f64 {
        self.k as f64 * PI / 2.0
    }

    pub fn scalar(&self) -> C64 {
        [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][self.k as usize]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptResult {
    /// Optimal time in units of `1/ω_r^I`.
    pub t_opt: f64,
    pub factors: KAKFactors,
    pub center: CenterElement,
    /// Total phase `θ` with `e^{iθ}·G` the synthesized SU(4) representative.
    pub phase: f64,
    pub schedule: Vec<ScheduleEntry>,
    pub drive: DriveSpec,
}

impl OptResult {
    pub fn physical_time(&self) -> f64 {
        self.t_opt / self.drive.omega_r_i
    }

    /// The determinant-one representative actually synthesized.
    pub fn representative(&self, g: &Unitary4) -> Unitary4 {
        g.phase_shifted(self.phase)
    }
}

/// Determinant-one representatives `e^{iθ_k}·G`, `k = 0..4`.
pub fn center_representatives(g: &Unitary4) -> [(CenterElement, f64, Unitary4); 4] {
    let base = -g.det().arg() / 4.0;
    CenterElement::all().map(|c| {
        let phase = base + c.phase();
        let m = g.matrix().scale(C64::from_polar(1.0, phase));
        (c, phase, Unitary4::from_trusted(m))
    })
}

pub fn min_time(g: &Unitary4, drive: &DriveSpec) -> Result<OptResult> {
    let b = drive.pair();
    if b.0 == 0.0 && b.1 == 0.0 {
        return Err(Error::ZeroDrive);
    }
    let mut best: Option<(f64, CenterElement, f64, KAKFactors)> = None;
    for (center, phase, rep) in center_representatives(g) {
        let factors = kak_decompose(&rep)?;
        let t = t_opt_angles(factors.angles.as_pair(), b)?;
        if best.as_ref().is_none_or(|(bt, ..)| t < bt - 1e-12) {
            best = Some((t, center, phase, factors));
        }
    }
    let (t_opt, center, phase, factors) = best.expect("four representatives");
    let schedule = schedule_for(&factors.angles, b, t_opt)?;
    Ok(OptResult {
        t_opt,
        factors,
        center,
        phase,
        schedule,
        drive: *drive,
    })
}

/// Convex schedule for angles `a` at total time `t_opt`.
pub fn schedule_for(a: &AbelianAngles, b: (f64, f64), t_opt: f64) -> Result<Vec<ScheduleEntry>> {
    if t_opt == 0.0 {
        return Ok(Vec::new());
    }
    let unit = (a.t1 / t_opt, a.t2 / t_opt);
    let entries = convex_weyl_decompose(unit, b)?;
    Ok(entries
        .into_iter()
        .map(|e| ScheduleEntry {
            weight: e.weight * t_opt,
            ..e
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v
    }

    #[test]
    fn orbit_sizes() {
        let o = weyl_orbit((1.0, 0.0));
        assert_eq!(
            sorted(o.points.clone()),
            sorted(vec![(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)])
        );
        assert_eq!(weyl_orbit((1.0, 1.0)).len(), 4);
        assert_eq!(weyl_orbit((0.6, 0.2)).len(), 8);
        // Degenerate drives keep the first listed conjugator.
        assert_eq!(weyl_orbit((1.0, 1.0)).conjugators, vec![0, 1, 2, 3]);
    }

    #[test]
    fn orbit_conjugators_check_out() {
        for b in [(1.0, 0.0), (0.6, 0.2), (0.5, 0.5), (-0.3, 0.7)] {
            assert!(conjugator_verify(&weyl_orbit(b), b));
        }
    }

    #[test]
    fn conjugator_verify_detects_wrong_assignment() {
        let mut o = weyl_orbit((0.6, 0.2));
        o.conjugators.swap(1, 2);
        assert!(!conjugator_verify(&o, (0.6, 0.2)));
    }

    #[test]
    fn majorization_examples() {
        assert!(r_majorizes((1.0, 0.0), (1.0, 0.0)));
        assert!(r_majorizes((0.5, 0.5), (1.0, 0.0)));
        assert!(!r_majorizes((1.0, 0.2), (1.0, 0.0)));
    }

    #[test]
    fn convex_examples() {
        let e = convex_weyl_decompose((0.6, 0.2), (0.6, 0.2)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].weight, 1.0);

        let e = convex_weyl_decompose((0.0, 0.0), (1.0, 0.0)).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|x| (x.weight - 0.5).abs() < 1e-15));
        let pts: Vec<_> = e.iter().map(|x| x.orbit_point).collect();
        assert_eq!(pts, vec![(1.0, 0.0), (-1.0, 0.0)]);

        assert!(matches!(
            convex_weyl_decompose((1.0, 0.2), (1.0, 0.0)),
            Err(Error::NotMajorized { .. })
        ));
    }

    #[test]
    fn t_opt_examples() {
        assert_eq!(t_opt_angles((PI, 0.0), (1.0, 0.0)).unwrap(), PI);
        assert_eq!(t_opt_angles((0.0, 0.0), (0.3, 0.1)).unwrap(), 0.0);
        assert_eq!(t_opt_angles((PI, 0.0), (0.5, 0.5)).unwrap(), 2.0 * PI);
        assert_eq!(t_opt_angles((1.0, 1.0), (0.0, 0.0)), Err(Error::ZeroDrive));
    }

    #[test]
    fn drive_validation() {
        assert!(DriveSpec::new(0.7, 0.4, 1.0).is_err());
        assert_eq!(DriveSpec::new(0.0, 0.0, 1.0), Err(Error::ZeroDrive));
        assert!(DriveSpec::new(0.5, -0.5, 1.0).is_ok());
        assert!(DriveSpec::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn center_scalars_have_unit_fourth_power() {
        for c in CenterElement::all() {
            let s = c.scalar();
            assert!((s.powi(4) - C64::new(1.0, 0.0)).norm() < 1e-15);
            assert!((C64::from_polar(1.0, c.phase()) - s).norm() < 1e-15);
        }
    }
}
