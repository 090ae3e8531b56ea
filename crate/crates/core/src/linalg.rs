//! Fixed-size dense complex matrices.
//!
//! Everything in this crate lives in dimension 2 or 4, so matrices are plain
//! stack arrays indexed `[row][col]` and all routines are written for those
//! sizes. The Hermitian eigensolver is a cyclic complex Jacobi iteration.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 30;

/// Square complex matrix of size `N`, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Complex4x4 = Mat<4>;

impl<const N: usize> Mat<N> {
    pub fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag(d: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flat_map(|row| row.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `‖U†U − id‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).frobenius_norm()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for col in 0..N {
            let pivot = (col..N)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap();
            if a[pivot][col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col];
            det *= p;
            let pivot_row = a[col];
            for row in a.iter_mut().skip(col + 1) {
                let f = row[col] / p;
                for (x, v) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                    *x -= f * v;
                }
            }
        }
        det
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                m = m.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        m
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    pub fn column(&self, j: usize) -> [C64; N] {
        let mut c = [ZERO; N];
        for (i, x) in c.iter_mut().enumerate() {
            *x = self.0[i][j];
        }
        c
    }
}

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat([[a, b], [c, d]])
    }

    /// `a ⊗ b` as a 4×4 matrix; `a` acts on the first tensor factor.
    pub fn kron(&self, b: &Mat2) -> Complex4x4 {
        Mat::from_fn(|i, j| self.0[i / 2][j / 2] * b.0[i % 2][j % 2])
    }
}

impl Complex4x4 {
    /// 2×2 block `(bi, bj)` with `bi, bj ∈ {0, 1}`.
    pub fn block(&self, bi: usize, bj: usize) -> Mat2 {
        Mat::from_fn(|i, j| self.0[2 * bi + i][2 * bj + j])
    }

    pub fn from_blocks(b00: &Mat2, b01: &Mat2, b10: &Mat2, b11: &Mat2) -> Self {
        Mat::from_fn(|i, j| {
            let b = match (i / 2, j / 2) {
                (0, 0) => b00,
                (0, 1) => b01,
                (1, 0) => b10,
                _ => b11,
            };
            b.0[i % 2][j % 2]
        })
    }

    pub fn block_diag(b00: &Mat2, b11: &Mat2) -> Self {
        Self::from_blocks(b00, &Mat2::zeros(), &Mat2::zeros(), b11)
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Mat<N>;
    fn mul(self, rhs: Mat<N>) -> Mat<N> {
        let mut out = Mat::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Mat<N>;
    fn add(self, rhs: Mat<N>) -> Mat<N> {
        Mat::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> AddAssign for Mat<N> {
    fn add_assign(&mut self, rhs: Mat<N>) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Mat<N>;
    fn sub(self, rhs: Mat<N>) -> Mat<N> {
        Mat::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for Mat<N> {
    type Output = Mat<N>;
    fn neg(self) -> Mat<N> {
        Mat::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> fmt::Debug for Mat<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.0 {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors, so that `h = V·diag(λ)·V†`. Only the Hermitian part of
/// `h` is used.
pub fn eigh<const N: usize>(h: &Mat<N>) -> ([f64; N], Mat<N>) {
    let mut a = Mat::<N>::from_fn(|i, j| (h.0[i][j] + h.0[j][i].conj()) * 0.5);
    let mut v = Mat::<N>::identity();
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i][j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let apq = a.0[p][q];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                // Phase the (p, q) entry to a positive real, then apply a real rotation.
                let phase = apq / mag;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G restricted to (p, q): [[c, s], [-s·conj(phase), c·conj(phase)]].
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                // a ← a·G
                for k in 0..N {
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    a.0[k][p] = akp * gpp + akq * gqp;
                    a.0[k][q] = akp * gpq + akq * gqq;
                }
                // a ← G†·a
                for k in 0..N {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = gpp.conj() * apk + gqp.conj() * aqk;
                    a.0[q][k] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
                a.0[q][q] = C64::new(a.0[q][q].re, 0.0);
                for k in 0..N {
                    let vkp = v.0[k][p];
                    let vkq = v.0[k][q];
                    v.0[k][p] = vkp * gpp + vkq * gqp;
                    v.0[k][q] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&x, &y| a.0[x][x].re.total_cmp(&a.0[y][y].re));
    let values = std::array::from_fn(|k| a.0[order[k]][order[k]].re);
    let vectors = Mat::from_fn(|i, k| v.0[i][order[k]]);
    (values, vectors)
}

/// Unit vector orthogonal to `u` (a unit 2-vector) completing it to a
/// determinant-one unitary `[u | w]`.
pub fn complete_su2_column(u: [C64; 2]) -> [C64; 2] {
    [-u[1].conj(), u[0].conj()]
}

/// Singular value decomposition `a = U·diag(σ)·V†` of a 2×2 matrix with
/// `σ₀ ≥ σ₁ ≥ 0`.
pub fn svd2(a: &Mat2) -> (Mat2, [f64; 2], Mat2) {
    let (vals, vecs) = eigh(&(a.adjoint() * *a));
    // Descending order.
    let v = Mat::from_fn(|i, j| vecs.0[i][1 - j]);
    let _ = vals;
    let b = *a * v;
    let b0 = b.column(0);
    let b1 = b.column(1);
    let n0 = (b0[0].norm_sqr() + b0[1].norm_sqr()).sqrt();
    let u0 = if n0 > 1e-300 {
        [b0[0] / n0, b0[1] / n0]
    } else {
        [ONE, ZERO]
    };
    let mut u1 = complete_su2_column(u0);
    let r11 = u1[0].conj() * b1[0] + u1[1].conj() * b1[1];
    let s1 = r11.norm();
    if s1 > 1e-300 {
        let ph = r11 / s1;
        u1 = [u1[0] * ph, u1[1] * ph];
    }
    let u = Mat([[u0[0], u1[0]], [u0[1], u1[1]]]);
    (u, [n0, s1], v)
}
