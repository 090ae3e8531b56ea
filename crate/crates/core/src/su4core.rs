//! Spin-operator basis, the 15-dimensional algebra su(4), exponential and
//! logarithm maps, Lie closure, the Cartan split k ⊕ p and the phase-blind
//! unitary distance.
//!
//! Basis ordering is {00, 01, 10, 11} with the fast (electron) qubit as the
//! first tensor factor: `S_μ = (σ_μ ⊗ id₂)/2`, `I_ν = (id₂ ⊗ σ_ν)/2`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{eigh, Complex4x4, Mat, Mat2, C64, I, ONE, ZERO};

pub const UNITARY_TOL: f64 = 1e-12;
pub const SPECIAL_TOL: f64 = 1e-10;
/// Rank threshold for unit-normalized candidate directions in [`lie_closure`].
pub const CLOSURE_RANK_TOL: f64 = 1e-9;
/// Half-width of the excluded band around the logarithm branch cut.
pub const BRANCH_CUT_TOL: f64 = 1e-9;

/// Indices of the k-subalgebra in the 15-element product-operator basis:
/// `S_x, S_y, S_z, I_z, 2S_xI_z, 2S_yI_z, 2S_zI_z`.
pub const K_INDICES: [usize; 7] = [0, 1, 2, 5, 8, 11, 14];
/// Indices of p: `I_x, I_y, 2S_μI_x, 2S_μI_y`.
pub const P_INDICES: [usize; 8] = [3, 4, 6, 7, 9, 10, 12, 13];

pub fn pauli_x() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, -ONE)
}

/// Product-operator constants for the two-spin system.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    pub s: [Complex4x4; 3],
    pub i: [Complex4x4; 3],
    pub s_alpha: Complex4x4,
    pub s_beta: Complex4x4,
    /// `products[μ][ν] = 2·S_μ·I_ν`.
    pub products: [[Complex4x4; 3]; 3],
}

impl OperatorBasis {
    pub fn sx(&self) -> Complex4x4 {
        self.s[0]
    }
    pub fn sy(&self) -> Complex4x4 {
        self.s[1]
    }
    pub fn sz(&self) -> Complex4x4 {
        self.s[2]
    }
    pub fn ix(&self) -> Complex4x4 {
        self.i[0]
    }
    pub fn iy(&self) -> Complex4x4 {
        self.i[1]
    }
    pub fn iz(&self) -> Complex4x4 {
        self.i[2]
    }

    /// The Hermitian operator behind algebra basis element `k`
    /// (the element itself is `−i` times this).
    pub fn hermitian(&self, k: usize) -> Complex4x4 {
        match k {
            0..=2 => self.s[k],
            3..=5 => self.i[k - 3],
            6..=14 => self.products[(k - 6) / 3][(k - 6) % 3],
            _ => panic!("basis index {k} out of range"),
        }
    }
}

pub fn build_operator_basis() -> OperatorBasis {
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let id2 = Mat2::identity();
    let s = paulis.map(|p| p.kron(&id2).scale_re(0.5));
    let i = paulis.map(|p| id2.kron(&p).scale_re(0.5));
    let id4 = Complex4x4::identity();
    let s_beta = id4.scale_re(0.5) + s[2];
    let s_alpha = id4.scale_re(0.5) - s[2];
    let products = std::array::from_fn(|mu| std::array::from_fn(|nu| (s[mu] * i[nu]).scale_re(2.0)));
    OperatorBasis {
        s,
        i,
        s_alpha,
        s_beta,
        products,
    }
}

/// Shared, lazily built operator basis.
pub fn basis() -> &'static OperatorBasis {
    static BASIS: OnceLock<OperatorBasis> = OnceLock::new();
    BASIS.get_or_init(build_operator_basis)
}

/// The SWAP permutation in the standard basis.
pub fn swap_matrix() -> Complex4x4 {
    Complex4x4::from_real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// A 4×4 unitary, optionally certified to have unit determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary4 {
    matrix: Complex4x4,
    special: bool,
}

impl Unitary4 {
    /// Validates unitarity; the special flag is set when `|det − 1| ≤ 1e−10`.
    pub fn new(matrix: Complex4x4) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = matrix.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        let special = (matrix.det() - ONE).norm() <= SPECIAL_TOL;
        Ok(Unitary4 { matrix, special })
    }

    /// Like [`Unitary4::new`] but also requires determinant one.
    pub fn new_special(matrix: Complex4x4) -> Result<Self> {
        let u = Self::new(matrix)?;
        if !u.special {
            return Err(Error::NotSpecial {
                defect: (matrix.det() - ONE).norm(),
            });
        }
        Ok(u)
    }

    /// Wraps a matrix known to be unitary by construction.
    pub(crate) fn from_trusted(matrix: Complex4x4) -> Self {
        let special = (matrix.det() - ONE).norm() <= SPECIAL_TOL;
        Unitary4 { matrix, special }
    }

    pub fn identity() -> Self {
        Unitary4 {
            matrix: Complex4x4::identity(),
            special: true,
        }
    }

    pub fn matrix(&self) -> &Complex4x4 {
        &self.matrix
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn det(&self) -> C64 {
        self.matrix.det()
    }

    pub fn adjoint(&self) -> Self {
        Unitary4 {
            matrix: self.matrix.adjoint(),
            special: self.special,
        }
    }

    /// Multiplies by a unit-modulus scalar.
    pub fn phase_shifted(&self, phase: f64) -> Self {
        Self::from_trusted(self.matrix.scale(C64::from_polar(1.0, phase)))
    }
}

impl Mul for Unitary4 {
    type Output = Unitary4;
    fn mul(self, rhs: Unitary4) -> Unitary4 {
        Unitary4::from_trusted(self.matrix * rhs.matrix)
    }
}

/// Traceless skew-Hermitian 4×4 matrix, stored as 15 real coefficients over
/// `{−iS_x, −iS_y, −iS_z, −iI_x, −iI_y, −iI_z, −i2S_μI_ν (μ major)}`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AlgebraElement {
    pub coeffs: [f64; 15],
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis_element(k: usize) -> Self {
        let mut coeffs = [0.0; 15];
        coeffs[k] = 1.0;
        AlgebraElement { coeffs }
    }

    pub fn from_coeffs(coeffs: [f64; 15]) -> Self {
        AlgebraElement { coeffs }
    }

    /// `−i·h` for Hermitian `h`, projected onto the basis. The trace part of
    /// `h` is dropped.
    pub fn from_hamiltonian(h: &Complex4x4) -> Self {
        let b = basis();
        let coeffs = std::array::from_fn(|k| (b.hermitian(k) * *h).trace().re);
        AlgebraElement { coeffs }
    }

    /// Projects a skew-Hermitian matrix onto the basis.
    pub fn from_matrix(m: &Complex4x4) -> Self {
        Self::from_hamiltonian(&m.scale(I))
    }

    pub fn matrix(&self) -> Complex4x4 {
        let b = basis();
        let mut h = Complex4x4::zeros();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                h += b.hermitian(k).scale_re(c);
            }
        }
        h.scale(-I)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

impl Add for AlgebraElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        AlgebraElement {
            coeffs: std::array::from_fn(|k| self.coeffs[k] + rhs.coeffs[k]),
        }
    }
}

impl Sub for AlgebraElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        AlgebraElement {
            coeffs: std::array::from_fn(|k| self.coeffs[k] - rhs.coeffs[k]),
        }
    }
}

impl Neg for AlgebraElement {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraElement {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl Mul<AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: rhs.coeffs.map(|c| self * c),
        }
    }
}

/// `exp(−i·t·h)` for a Hermitian 4×4 `h`, via the Jacobi eigensolver.
pub fn expm_hermitian(h: &Complex4x4, t: f64) -> Complex4x4 {
    let (vals, v) = eigh(h);
    let d = Mat::diag(vals.map(|x| C64::from_polar(1.0, -t * x)));
    v * d * v.adjoint()
}

/// `exp(−i·t·h)` for a Hermitian 2×2 `h`.
pub fn expm_hermitian2(h: &Mat2, t: f64) -> Mat2 {
    let (vals, v) = eigh(h);
    let d = Mat::diag(vals.map(|x| C64::from_polar(1.0, -t * x)));
    v * d * v.adjoint()
}

/// Matrix exponential of an algebra element. The result has determinant one.
pub fn expm_skew(a: &AlgebraElement) -> Result<Unitary4> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let h = a.matrix().scale(I);
    Ok(Unitary4::from_trusted(expm_hermitian(&h, 1.0)))
}

/// Principal logarithm: `u = e^{i·phase}·expm_skew(generator)`.
#[derive(Clone, Copy, Debug)]
pub struct Logarithm {
    pub generator: AlgebraElement,
    pub phase: f64,
}

/// Eigenphases in (−π, π] and a unitary eigenbasis of a unitary matrix.
///
/// Diagonalizes a generic Hermitian combination of `u` and `u†`, then splits
/// any near-degenerate cluster with a second combination.
pub fn unitary_eigen(u: &Complex4x4) -> ([f64; 4], Complex4x4) {
    let herm_combo = |m: &Complex4x4, delta: f64| {
        let re = (*m + m.adjoint()).scale_re(0.5);
        let im = (*m - m.adjoint()).scale(C64::new(0.0, -0.5));
        re.scale_re(delta.cos()) + im.scale_re(delta.sin())
    };
    let (vals, mut v) = eigh(&herm_combo(u, 0.618_033_988_749_894_9));

    let mut group = [0usize; 4];
    for k in 1..4 {
        group[k] = if (vals[k] - vals[k - 1]).abs() < 1e-7 {
            group[k - 1]
        } else {
            group[k - 1] + 1
        };
    }
    if group[3] < 3 {
        let second = v.adjoint() * herm_combo(u, 2.399_963_229_728_653) * v;
        let restricted = Mat::from_fn(|i, j| if group[i] == group[j] { second.0[i][j] } else { ZERO });
        let (_, w) = eigh(&restricted);
        v = v * w;
    }

    let d = v.adjoint() * *u * v;
    (std::array::from_fn(|k| d.0[k][k].arg()), v)
}

pub fn logm_unitary(u: &Unitary4) -> Result<Logarithm> {
    let (phases, v) = unitary_eigen(u.matrix());
    if let Some(&p) = phases.iter().find(|p| p.abs() > std::f64::consts::PI - BRANCH_CUT_TOL) {
        return Err(Error::BranchCut { phase: p });
    }
    let mean = phases.iter().sum::<f64>() / 4.0;
    let d = Mat::diag(phases.map(|p| C64::new(0.0, p - mean)));
    let generator = AlgebraElement::from_matrix(&(v * d * v.adjoint()));
    Ok(Logarithm { generator, phase: mean })
}

pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    AlgebraElement::from_matrix(&a.matrix().commutator(&b.matrix()))
}

/// Dimension and an orthonormal basis of the real Lie algebra generated by
/// `generators`.
pub fn lie_closure(generators: &[AlgebraElement]) -> (usize, Vec<AlgebraElement>) {
    let mut span: Vec<AlgebraElement> = Vec::new();
    let try_add = |span: &mut Vec<AlgebraElement>, candidate: AlgebraElement| -> bool {
        let n = candidate.norm();
        if n == 0.0 {
            return false;
        }
        let mut r = (1.0 / n) * candidate;
        // Two Gram-Schmidt passes.
        for _ in 0..2 {
            for e in span.iter() {
                r = r - r.dot(e) * *e;
            }
        }
        let rn = r.norm();
        if rn > CLOSURE_RANK_TOL {
            span.push((1.0 / rn) * r);
            true
        } else {
            false
        }
    };
    for g in generators {
        try_add(&mut span, *g);
    }
    loop {
        let mut grew = false;
        let n = span.len();
        for i in 0..n {
            for j in i + 1..n {
                let c = commutator(&span[i], &span[j]);
                grew |= try_add(&mut span, c);
            }
        }
        if !grew {
            break;
        }
    }
    (span.len(), span)
}

/// Splits an element into its k and p components.
pub fn cartan_project(a: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let mut k = AlgebraElement::zero();
    let mut p = AlgebraElement::zero();
    for &i in &K_INDICES {
        k.coeffs[i] = a.coeffs[i];
    }
    for &i in &P_INDICES {
        p.coeffs[i] = a.coeffs[i];
    }
    (k, p)
}

/// Phase that best aligns `v` with `u`: `e^{iφ} = tr(V†U)/|tr(V†U)|`.
pub fn optimal_phase(u: &Complex4x4, v: &Complex4x4) -> C64 {
    let t = (v.adjoint() * *u).trace();
    if t.norm() < 1e-300 {
        ONE
    } else {
        t / t.norm()
    }
}

/// `min_φ ‖U − e^{iφ}V‖_F`, equal to `sqrt(8 − 2|tr(U†V)|)`.
///
/// Evaluated as the residual at the optimal phase, which keeps full precision
/// near zero where the square-root form bottoms out around 1e−8.
pub fn distance_up_to_phase(u: &Unitary4, v: &Unitary4) -> f64 {
    matrix_distance_up_to_phase(u.matrix(), v.matrix())
}

pub fn matrix_distance_up_to_phase(u: &Complex4x4, v: &Complex4x4) -> f64 {
    let ph = optimal_phase(u, v);
    (*u - v.scale(ph)).frobenius_norm()
}
