//! KAK decomposition over `K = S[U(2)×U(2)]` and the factorization of
//! K-elements into fast-qubit rotations, `I_z` phases and Ising evolution.
//!
//! In the SWAP-conjugated basis a K-element is block diagonal and the abelian
//! factor `exp(t₁(−iS^βI_x) + t₂(−iS^αI_x))` is the cosine–sine middle factor
//! `[[C, −iS], [−iS, C]]` with `C = diag(cos(t_j/2))`, `S = diag(sin(t_j/2))`,
//! so the decomposition is computed as a 2×2-block cosine–sine decomposition.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{complete_su2_column, svd2, Complex4x4, Mat, Mat2, C64, I, ONE, ZERO};
use crate::su4core::{basis, expm_hermitian, swap_matrix, Unitary4, SPECIAL_TOL};

/// Off-diagonal block norm below which a SWAP-conjugated matrix counts as block diagonal.
pub const BLOCK_TOL: f64 = 1e-10;
/// Reconstruction residual above which the decomposition is reported as failed.
pub const RECONSTRUCTION_FAIL: f64 = 1e-9;
/// Lattice shifts searched exhaustively by [`canonicalize_exhaustive`].
pub const CANONICAL_ZMAX: i64 = 2;

/// Coordinates `(β, α)` of an abelian element `β(−iS^βI_x) + α(−iS^αI_x)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AbelianAngles {
    pub t1: f64,
    pub t2: f64,
}

impl AbelianAngles {
    pub fn new(t1: f64, t2: f64) -> Self {
        AbelianAngles { t1, t2 }
    }

    pub fn as_pair(&self) -> (f64, f64) {
        (self.t1, self.t2)
    }

    /// Whether `0 ≤ t₂ ≤ t₁ ≤ π` holds to within `tol`.
    pub fn is_canonical(&self, tol: f64) -> bool {
        self.t2 >= -tol && self.t2 <= self.t1 + tol && self.t1 <= PI + tol
    }

    pub fn l1_norm(&self) -> f64 {
        self.t1.abs() + self.t2.abs()
    }

    pub fn shifted(&self, shift: LatticeShift) -> Self {
        AbelianAngles {
            t1: self.t1 + 2.0 * PI * shift.z1 as f64,
            t2: self.t2 + 2.0 * PI * shift.z2 as f64,
        }
    }
}

/// Integer shift `(z₁, z₂)` by the 2π lattice of abelian coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LatticeShift {
    pub z1: i64,
    pub z2: i64,
}

/// A Weyl-group move `a ↦ W·(a + 2πz)·W⁻¹`, `W` taken from [`weyl_conjugator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct WeylMove {
    pub conjugator: usize,
    pub shift: LatticeShift,
}

/// Signed permutation of abelian coordinates induced by conjugation with
/// `weyl_conjugator(index)`. Index order matches the conjugator list.
pub fn weyl_action(index: usize, (b1, b2): (f64, f64)) -> (f64, f64) {
    match index {
        0 => (b1, b2),
        1 => (b1, -b2),
        2 => (-b1, b2),
        3 => (-b1, -b2),
        4 => (b2, b1),
        5 => (-b2, b1),
        6 => (b2, -b1),
        7 => (-b2, -b1),
        _ => panic!("Weyl index {index} out of range"),
    }
}

/// The eight K-elements realizing the Weyl group on the abelian subalgebra:
/// `id, e^{−iπS^αI_z}, e^{−iπS^βI_z}, e^{−iπI_z}, e^{−iπS_x},
/// e^{−iπS_x}e^{−iπS^αI_z}, e^{−iπS_x}e^{−iπS^βI_z}, e^{−i2πS_xI_z}`.
pub fn weyl_conjugator(index: usize) -> Complex4x4 {
    let b = basis();
    let sa_iz = b.s_alpha * b.iz();
    let sb_iz = b.s_beta * b.iz();
    let flip = expm_hermitian(&b.sx(), PI);
    match index {
        0 => Complex4x4::identity(),
        1 => expm_hermitian(&sa_iz, PI),
        2 => expm_hermitian(&sb_iz, PI),
        3 => expm_hermitian(&b.iz(), PI),
        4 => flip,
        5 => flip * expm_hermitian(&sa_iz, PI),
        6 => flip * expm_hermitian(&sb_iz, PI),
        7 => expm_hermitian(&(b.sx() * b.iz()), 2.0 * PI),
        _ => panic!("Weyl index {index} out of range"),
    }
}

/// Diagonal K-element `exp(2πz₁(−iS^βI_x) + 2πz₂(−iS^αI_x))`.
pub fn lattice_element(shift: LatticeShift) -> Complex4x4 {
    let s1 = if shift.z1.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s2 = if shift.z2.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Complex4x4::diag([s1, s1, s2, s2].map(|x| C64::new(x, 0.0)))
}

/// Element of `K = S[U(2)×U(2)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KElement {
    matrix: Unitary4,
}

impl KElement {
    pub fn new(u: Unitary4) -> Result<Self> {
        if !u.is_special() {
            return Err(Error::NotSpecial {
                defect: (u.det() - ONE).norm(),
            });
        }
        let off = off_block_norm(u.matrix());
        if off > BLOCK_TOL {
            return Err(Error::NotInK {
                reason: format!("off-diagonal block norm {off:.3e} after SWAP conjugation"),
            });
        }
        Ok(KElement { matrix: u })
    }

    pub(crate) fn from_trusted(m: Complex4x4) -> Self {
        KElement {
            matrix: Unitary4::from_trusted(m),
        }
    }

    pub fn identity() -> Self {
        KElement {
            matrix: Unitary4::identity(),
        }
    }

    pub fn unitary(&self) -> &Unitary4 {
        &self.matrix
    }

    pub fn matrix(&self) -> &Complex4x4 {
        self.matrix.matrix()
    }

    /// The electron-space blocks conditioned on the nuclear state:
    /// `(V₊, V₋)` for `I_z = +½` and `I_z = −½`.
    pub fn conditional_blocks(&self) -> (Mat2, Mat2) {
        let m = self.matrix();
        let plus = Mat2::new(m.0[0][0], m.0[0][2], m.0[2][0], m.0[2][2]);
        let minus = Mat2::new(m.0[1][1], m.0[1][3], m.0[3][1], m.0[3][3]);
        (plus, minus)
    }
}

fn off_block_norm(m: &Complex4x4) -> f64 {
    let sw = swap_matrix();
    let c = sw * *m * sw;
    (c.block(0, 1).frobenius_norm().powi(2) + c.block(1, 0).frobenius_norm().powi(2)).sqrt()
}

/// `G = K1 · exp_abelian(angles) · K2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KAKFactors {
    pub k1: KElement,
    pub k2: KElement,
    pub angles: AbelianAngles,
}

impl KAKFactors {
    pub fn reconstruct(&self) -> Complex4x4 {
        *self.k1.matrix() * exp_abelian(&self.angles) * *self.k2.matrix()
    }

    /// Rewrites the factors after the Weyl move that takes `angles` to `target`.
    pub fn apply_move(&self, mv: WeylMove) -> KAKFactors {
        let shifted = self.angles.shifted(mv.shift);
        let (t1, t2) = weyl_action(mv.conjugator, shifted.as_pair());
        let w = weyl_conjugator(mv.conjugator);
        let k1 = *self.k1.matrix() * w.adjoint();
        let k2 = w * lattice_element(mv.shift) * *self.k2.matrix();
        KAKFactors {
            k1: KElement::from_trusted(k1),
            k2: KElement::from_trusted(k2),
            angles: AbelianAngles::new(t1, t2),
        }
    }

    /// Same group element with canonical angles.
    pub fn canonicalized(&self) -> KAKFactors {
        let (_, mv) = canonicalize(&self.angles);
        self.apply_move(mv)
    }
}

/// `exp(t₁(−iS^βI_x) + t₂(−iS^αI_x))` in closed form.
pub fn exp_abelian(a: &AbelianAngles) -> Complex4x4 {
    let (c1, s1) = ((a.t1 / 2.0).cos(), (a.t1 / 2.0).sin());
    let (c2, s2) = ((a.t2 / 2.0).cos(), (a.t2 / 2.0).sin());
    let c = |x: f64| C64::new(x, 0.0);
    let ms = |x: f64| C64::new(0.0, -x);
    // Cosine–sine pattern in the SWAP-conjugated basis.
    let csd = Mat([
        [c(c1), ZERO, ms(s1), ZERO],
        [ZERO, c(c2), ZERO, ms(s2)],
        [ms(s1), ZERO, c(c1), ZERO],
        [ZERO, ms(s2), ZERO, c(c2)],
    ]);
    let sw = swap_matrix();
    sw * csd * sw
}

pub fn k_membership(g: &Unitary4) -> bool {
    (g.det() - ONE).norm() <= SPECIAL_TOL && off_block_norm(g.matrix()) <= BLOCK_TOL
}

/// Cosine–sine decomposition of a 4×4 unitary in 2×2 blocks:
/// `m = diag(l0, l1)·[[C, −S], [S, C]]·diag(r0, r1)` with cosines ascending.
struct Csd {
    l0: Mat2,
    l1: Mat2,
    r0: Mat2,
    r1: Mat2,
    theta: [f64; 2],
}

fn cosine_sine(m: &Complex4x4) -> Csd {
    let (m00, m01, m10, m11) = (m.block(0, 0), m.block(0, 1), m.block(1, 0), m.block(1, 1));

    let (u, sv, v) = svd2(&m00);
    // Reverse to ascending cosines so the sines come out descending.
    let l0 = Mat::from_fn(|i, j| u.0[i][1 - j]);
    let r0 = Mat::from_fn(|i, j| v.0[j][1 - i].conj());
    let c = [sv[1].min(1.0), sv[0].min(1.0)];

    // QR of m10·r0† = l1·S, completed to a unitary column by column.
    let x = m10 * r0.adjoint();
    let x0 = x.column(0);
    let x1 = x.column(1);
    let n0 = (x0[0].norm_sqr() + x0[1].norm_sqr()).sqrt();
    let q0 = if n0 > 1e-300 {
        [x0[0] / n0, x0[1] / n0]
    } else {
        [ONE, ZERO]
    };
    let mut q1 = complete_su2_column(q0);
    let r11 = q1[0].conj() * x1[0] + q1[1].conj() * x1[1];
    let s1 = r11.norm();
    if s1 > 1e-300 {
        let ph = r11 / s1;
        q1 = [q1[0] * ph, q1[1] * ph];
    }
    let l1 = Mat([[q0[0], q1[0]], [q0[1], q1[1]]]);
    let s = [n0, s1];

    // Rows of r1 from whichever block divides by the larger of (s, c).
    let a = l0.adjoint() * m01;
    let b = l1.adjoint() * m11;
    let mut r1 = Mat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            r1.0[i][j] = if s[i] > c[i] {
                -a.0[i][j] / s[i]
            } else {
                b.0[i][j] / c[i]
            };
        }
    }

    Csd {
        l0,
        l1,
        r0,
        r1,
        theta: [s[0].atan2(c[0]), s[1].atan2(c[1])],
    }
}

/// KAK decomposition of a determinant-one unitary with canonical angles.
pub fn kak_decompose(g: &Unitary4) -> Result<KAKFactors> {
    if !g.is_special() {
        return Err(Error::NotSpecial {
            defect: (g.det() - ONE).norm(),
        });
    }
    let sw = swap_matrix();
    let m = sw * *g.matrix() * sw;
    let csd = cosine_sine(&m);

    // Convert [[C, −S], [S, C]] to [[C, −iS], [−iS, C]]:
    // the middle factor is diag(1, i)·(ours)·diag(1, −i).
    let u1 = csd.l0;
    let u2 = csd.l1.scale(I);
    let u3 = csd.r0;
    let u4 = csd.r1.scale(-I);
    let mut k1 = sw * Complex4x4::block_diag(&u1, &u2) * sw;
    let mut k2 = sw * Complex4x4::block_diag(&u3, &u4) * sw;

    // det(K1)·det(K2) = 1; a common scalar moves both to determinant one.
    let lambda = C64::from_polar(1.0, -k1.det().arg() / 4.0);
    k1 = k1.scale(lambda);
    k2 = k2.scale(lambda.conj());

    let raw = KAKFactors {
        k1: KElement::from_trusted(k1),
        k2: KElement::from_trusted(k2),
        angles: AbelianAngles::new(2.0 * csd.theta[0], 2.0 * csd.theta[1]),
    };
    let residual = raw.reconstruct().dist(g.matrix());
    if !residual.is_finite() || residual > RECONSTRUCTION_FAIL {
        return Err(Error::CsdFailure { residual });
    }
    Ok(raw.canonicalized())
}

/// Reduces `x` into (−π, π] by a multiple of 2π; returns the reduced value and the multiple.
fn reduce_angle(x: f64) -> (f64, i64) {
    let z = ((PI - x) / (2.0 * PI)).floor();
    let mut r = x + 2.0 * PI * z;
    let mut z = z as i64;
    if r <= -PI {
        r += 2.0 * PI;
        z += 1;
    } else if r > PI {
        r -= 2.0 * PI;
        z -= 1;
    }
    (r, z)
}

/// Canonical representative `0 ≤ t₂ ≤ t₁ ≤ π` of the class of `a` under the
/// 2π lattice and the Weyl group, together with the move that reaches it.
pub fn canonicalize(a: &AbelianAngles) -> (AbelianAngles, WeylMove) {
    let (x1, z1) = reduce_angle(a.t1);
    let (x2, z2) = reduce_angle(a.t2);
    let (p, q) = (x1.abs(), x2.abs());
    let target = if p >= q { (p, q) } else { (q, p) };
    let conjugator = (0..8)
        .find(|&w| weyl_action(w, (x1, x2)) == target)
        .expect("signed permutations cover |x| sorted");
    (
        AbelianAngles::new(target.0, target.1),
        WeylMove {
            conjugator,
            shift: LatticeShift { z1, z2 },
        },
    )
}

/// Brute-force canonical form: the minimum-ℓ¹ fundamental-domain point over
/// shifts `|z_j| ≤ CANONICAL_ZMAX` and all eight Weyl moves.
pub fn canonicalize_exhaustive(a: &AbelianAngles) -> AbelianAngles {
    let mut best: Option<AbelianAngles> = None;
    for cand in lattice_equivalents(a, CANONICAL_ZMAX as usize) {
        for w in 0..8 {
            let (t1, t2) = weyl_action(w, cand.as_pair());
            let c = AbelianAngles::new(t1, t2);
            if !c.is_canonical(1e-12) {
                continue;
            }
            if best.is_none_or(|b| c.l1_norm() < b.l1_norm() - 1e-12) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or(*a)
}

/// All `(t₁ + 2πz₁, t₂ + 2πz₂)` with `|z_j| ≤ zmax`, `z₁` varying slowest.
pub fn lattice_equivalents(a: &AbelianAngles, zmax: usize) -> Vec<AbelianAngles> {
    let zmax = zmax as i64;
    let mut out = Vec::with_capacity(((2 * zmax + 1) * (2 * zmax + 1)) as usize);
    for z1 in -zmax..=zmax {
        for z2 in -zmax..=zmax {
            out.push(a.shifted(LatticeShift { z1, z2 }));
        }
    }
    out
}

/// ZXZ Euler angles of `V ∈ SU(2)`:
/// `V = exp(−iθ₁σ_z/2)·exp(−iθ₂σ_x/2)·exp(−iθ₃σ_z/2)` with `θ₂ ∈ [0, π]`.
/// Gimbal-locked inputs get `θ₃ = 0`.
pub fn euler_zxz(v: &Mat2) -> (f64, f64, f64) {
    const GIMBAL: f64 = 1e-12;
    let (v11, v21) = (v.0[0][0], v.0[1][0]);
    let theta2 = 2.0 * v21.norm().atan2(v11.norm());
    let sigma = -v11.arg();
    let delta = wrap_pi(v21.arg() + PI / 2.0);
    if v21.norm() < GIMBAL {
        (2.0 * sigma, theta2, 0.0)
    } else if v11.norm() < GIMBAL {
        (2.0 * delta, theta2, 0.0)
    } else {
        (sigma + delta, theta2, sigma - delta)
    }
}

/// `exp(−iθ₁σ_z/2)·exp(−iθ₂σ_x/2)·exp(−iθ₃σ_z/2)`.
pub fn euler_matrix((t1, t2, t3): (f64, f64, f64)) -> Mat2 {
    let rz = |t: f64| Mat2::diag([C64::from_polar(1.0, -t / 2.0), C64::from_polar(1.0, t / 2.0)]);
    let (c, s) = ((t2 / 2.0).cos(), (t2 / 2.0).sin());
    let rx = Mat2::new(C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0));
    rz(t1) * rx * rz(t3)
}

/// Wraps into (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    reduce_angle(x).0
}

/// `K = exp(−iτ₁I_z)·L₁·exp(−iτ₂·2S_zI_z)·L₂` with `L_j` fast-qubit rotations
/// given by their ZXZ Euler angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KFactorization {
    pub tau1: f64,
    pub tau2: f64,
    pub euler1: (f64, f64, f64),
    pub euler2: (f64, f64, f64),
}

impl KFactorization {
    pub fn l1(&self) -> Mat2 {
        euler_matrix(self.euler1)
    }

    pub fn l2(&self) -> Mat2 {
        euler_matrix(self.euler2)
    }

    pub fn reconstruct(&self) -> Complex4x4 {
        let b = basis();
        let id2 = Mat2::identity();
        expm_hermitian(&b.iz(), self.tau1)
            * self.l1().kron(&id2)
            * expm_hermitian(&b.products[2][2], self.tau2)
            * self.l2().kron(&id2)
    }
}

/// Factorizes a K-element into `I_z` phase, two fast rotations and an Ising step.
pub fn k_factorize(k: &KElement) -> KFactorization {
    let (v_plus, v_minus) = k.conditional_blocks();
    // det V₊ = e^{−iτ₁}, det V₋ = e^{iτ₁}.
    let tau1 = -v_plus.det().arg();
    let w_plus = v_plus.scale(C64::from_polar(1.0, tau1 / 2.0));
    let w_minus = v_minus.scale(C64::from_polar(1.0, -tau1 / 2.0));

    // W₊W₋† = L₁·exp(−iτ₂σ_z)·L₁†.
    let u = w_plus * w_minus.adjoint();
    let h = (u - u.adjoint()).scale(C64::new(0.0, 0.5));
    let l1 = if h.frobenius_norm() < 1e-12 {
        Mat2::identity()
    } else {
        let (_, vecs) = crate::linalg::eigh(&h);
        // Largest eigenvalue of h ↔ eigenvalue e^{−iτ₂} of u, τ₂ ∈ [0, π].
        let hi = vecs.column(1);
        let lo = vecs.column(0);
        let d = Mat2::new(hi[0], lo[0], hi[1], lo[1]).det().conj();
        Mat2::new(hi[0], lo[0] * d, hi[1], lo[1] * d)
    };
    let lambda = (l1.adjoint() * u * l1).0[0][0];
    let tau2 = -lambda.arg();
    let half = Mat2::diag([C64::from_polar(1.0, -tau2 / 2.0), C64::from_polar(1.0, tau2 / 2.0)]);
    let l2 = half.adjoint() * l1.adjoint() * w_plus;

    KFactorization {
        tau1,
        tau2,
        euler1: euler_zxz(&l1),
        euler2: euler_zxz(&l2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
        (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
    }

    #[test]
    fn exp_abelian_examples() {
        assert!(exp_abelian(&AbelianAngles::new(0.0, 0.0)).dist(&Complex4x4::identity()) < 1e-15);
        let m = exp_abelian(&AbelianAngles::new(PI, 0.0));
        // β-branch block (indices 0, 1) becomes −iσ_x.
        assert!(m.0[0][0].norm() < 1e-15);
        assert!((m.0[0][1] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((m.0[2][2] - ONE).norm() < 1e-15);
    }

    #[test]
    fn identity_decomposes_trivially() {
        let f = kak_decompose(&Unitary4::identity()).unwrap();
        assert!(approx(f.angles.as_pair(), (0.0, 0.0), 1e-14));
        assert!((*f.k1.matrix() * *f.k2.matrix()).dist(&Complex4x4::identity()) < 1e-13);
    }

    #[test]
    fn rejects_non_special() {
        let u = Unitary4::new(swap_matrix()).unwrap();
        assert!(matches!(kak_decompose(&u), Err(Error::NotSpecial { .. })));
    }

    #[test]
    fn canonicalize_examples() {
        let (c, _) = canonicalize(&AbelianAngles::new(-PI / 2.0, 3.0 * PI));
        assert!(approx(c.as_pair(), (PI, PI / 2.0), 1e-12));
        let (c, mv) = canonicalize(&AbelianAngles::new(PI, 0.0));
        assert_eq!(c, AbelianAngles::new(PI, 0.0));
        assert_eq!(mv, WeylMove::default());
        let (c, _) = canonicalize(&AbelianAngles::new(0.0, -0.3));
        assert!(approx(c.as_pair(), (0.3, 0.0), 1e-15));
    }

    #[test]
    fn canonicalize_agrees_with_exhaustive_search() {
        let samples = [
            (-PI / 2.0, 3.0 * PI),
            (5.0, -7.5),
            (0.1, 0.2),
            (-3.0, 3.1),
            (PI, -PI),
            (9.0, 0.0),
        ];
        for (x, y) in samples {
            let a = AbelianAngles::new(x, y);
            let (fast, _) = canonicalize(&a);
            let slow = canonicalize_exhaustive(&a);
            assert!(
                approx(fast.as_pair(), slow.as_pair(), 1e-12),
                "{a:?}: {fast:?} vs {slow:?}"
            );
        }
    }

    #[test]
    fn lattice_enumeration() {
        let v = lattice_equivalents(&AbelianAngles::new(0.0, 0.0), 1);
        assert_eq!(v.len(), 9);
        assert!(v.contains(&AbelianAngles::new(2.0 * PI, -2.0 * PI)));
        assert_eq!(
            lattice_equivalents(&AbelianAngles::new(PI, 0.0), 0),
            vec![AbelianAngles::new(PI, 0.0)]
        );
    }

    #[test]
    fn euler_examples() {
        let (a, b, c) = euler_zxz(&Mat2::identity());
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15 && c.abs() < 1e-15);
        let rx = euler_matrix((0.0, 1.1, 0.0));
        let (a, b, c) = euler_zxz(&rx);
        assert!(a.abs() < 1e-15 && (b - 1.1).abs() < 1e-14 && c.abs() < 1e-15);
    }

    #[test]
    fn euler_gimbal_cases_reconstruct() {
        for m in [
            euler_matrix((0.7, 0.0, 0.0)),
            euler_matrix((0.7, PI, 0.2)),
            euler_matrix((0.0, 0.0, -2.5)),
        ] {
            let e = euler_zxz(&m);
            assert!(euler_matrix(e).dist(&m) < 1e-12);
            assert_eq!(e.2, 0.0);
        }
    }

    #[test]
    fn k_factorize_identity_and_ising() {
        let f = k_factorize(&KElement::identity());
        assert!(f.tau1.abs() < 1e-15 && f.tau2.abs() < 1e-15);
        assert!(f.reconstruct().dist(&Complex4x4::identity()) < 1e-14);

        let tau = 0.9;
        let zz = expm_hermitian(&basis().products[2][2], tau);
        let k = KElement::new(Unitary4::new(zz).unwrap()).unwrap();
        let f = k_factorize(&k);
        assert!((f.tau2 - tau).abs() < 1e-13);
        assert!(f.tau1.abs() < 1e-13);
        assert!(f.reconstruct().dist(&zz) < 1e-13);
    }

    #[test]
    fn k_factorize_handles_minus_identity_ratio() {
        // V₊ = −V₋ gives W₊W₋† = −id.
        let zz = expm_hermitian(&basis().products[2][2], PI);
        let k = KElement::new(Unitary4::new(zz).unwrap()).unwrap();
        let f = k_factorize(&k);
        assert!(f.reconstruct().dist(&zz) < 1e-13);
        assert_eq!(f.euler1, (0.0, 0.0, 0.0));
    }

    #[test]
    fn weyl_action_matches_conjugation() {
        let b = basis();
        let xb = (b.s_beta * b.ix()).scale(-I);
        let xa = (b.s_alpha * b.ix()).scale(-I);
        let (b1, b2) = (0.6, 0.2);
        let gen = xb.scale_re(b1) + xa.scale_re(b2);
        for w in 0..8 {
            let k = weyl_conjugator(w);
            assert!((k.det() - ONE).norm() < 1e-12);
            let conj = k * gen * k.adjoint();
            let (p1, p2) = weyl_action(w, (b1, b2));
            let expect = xb.scale_re(p1) + xa.scale_re(p2);
            assert!(conj.dist(&expect) < 1e-12, "index {w}");
        }
    }

    #[test]
    fn membership_examples() {
        let cnot21 = Complex4x4::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ])
        .scale(C64::from_polar(1.0, PI / 4.0));
        let cnot12 = Complex4x4::from_real([
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .scale(C64::from_polar(1.0, PI / 4.0));
        assert!(k_membership(&Unitary4::new(cnot21).unwrap()));
        assert!(!k_membership(&Unitary4::new(cnot12).unwrap()));
        let rx = expm_hermitian(&basis().sx(), 1.3);
        assert!(k_membership(&Unitary4::new(rx).unwrap()));
    }
}
