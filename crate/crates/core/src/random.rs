//! Seeded samplers for Haar-random unitaries and algebra elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Complex4x4, Mat, Mat2, C64};
use crate::su4core::{AlgebraElement, Unitary4};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized, const N: usize>(rng: &mut R) -> Mat<N> {
    Mat::from_fn(|_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Gram-Schmidt QR of a Ginibre matrix; phases fixed so the law is Haar on U(N).
fn haar_from_ginibre<const N: usize>(g: Mat<N>) -> Mat<N> {
    let mut q = Mat::<N>::zeros();
    for j in 0..N {
        let mut v = g.column(j);
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..N).map(|i| q.0[i][k].conj() * v[i]).sum();
                for (i, x) in v.iter_mut().enumerate() {
                    *x -= proj * q.0[i][k];
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (i, x) in v.iter().enumerate() {
            q.0[i][j] = *x / n;
        }
    }
    q
}

/// Haar-distributed element of U(4).
pub fn haar_u4<R: Rng + ?Sized>(rng: &mut R) -> Complex4x4 {
    haar_from_ginibre(gaussian::<R, 4>(rng))
}

/// Haar-distributed element of SU(4).
pub fn haar_su4<R: Rng + ?Sized>(rng: &mut R) -> Unitary4 {
    let u = haar_u4(rng);
    let d = u.det();
    let fix = C64::from_polar(1.0, -d.arg() / 4.0);
    Unitary4::from_trusted(u.scale(fix))
}

/// Haar-distributed element of SU(2).
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let u = haar_from_ginibre(gaussian::<R, 2>(rng));
    let d = u.det();
    u.scale(C64::from_polar(1.0, -d.arg() / 2.0))
}

/// Algebra element with i.i.d. standard normal coefficients times `scale`.
pub fn algebra_element<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> AlgebraElement {
    AlgebraElement::from_coeffs(std::array::from_fn(|_| {
        let x: f64 = rng.sample(StandardNormal);
        scale * x
    }))
}

/// Random element restricted to the coordinates in `indices`.
pub fn algebra_element_on<R: Rng + ?Sized>(rng: &mut R, indices: &[usize], scale: f64) -> AlgebraElement {
    let mut a = AlgebraElement::zero();
    for &k in indices {
        let x: f64 = rng.sample(StandardNormal);
        a.coeffs[k] = scale * x;
    }
    a
}
