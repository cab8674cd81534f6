//! Seeded sampling of test inputs and group elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::hypercomplex::{FieldTag, HyperComplex};
use super::linalg::expm;
use super::matrix::MatF;
use super::scalar::Scalar;
use crate::error::Result;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dyadic rational `k/2^bits` with `|k| <= range·2^bits`. Exact in both
/// arithmetic modes, so rational and float runs see the same input.
pub fn dyadic<T: Scalar, R: Rng>(rng: &mut R, range: i64, bits: u32) -> T {
    let den = 1_i64 << bits;
    let k = rng.random_range(-range * den..=range * den);
    T::ratio(k, den)
}

pub fn dyadic_vec<T: Scalar, R: Rng>(rng: &mut R, len: usize, range: i64, bits: u32) -> Vec<T> {
    (0..len).map(|_| dyadic(rng, range, bits)).collect()
}

pub fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Skew-Hermitian matrix with Gaussian coefficients of standard deviation
/// `scale`.
pub fn random_skew_hermitian<R: Rng>(rng: &mut R, tag: FieldTag, n: usize, scale: f64) -> Result<MatF<f64>> {
    let d = tag.dim();
    let mut m = MatF::zeros(tag, n)?;
    for i in 0..n {
        for c in 1..d {
            let v: f64 = rng.sample(StandardNormal);
            m.set_coeff(i, i, c, v * scale);
        }
        for j in (i + 1)..n {
            for c in 0..d {
                let v: f64 = rng.sample::<f64, _>(StandardNormal) * scale;
                m.set_coeff(i, j, c, v);
                // (U*)_{ji} = conj(U_ij), skew: U_ji = -conj(U_ij)
                m.set_coeff(j, i, c, if c == 0 { -v } else { v });
            }
        }
    }
    Ok(m)
}

/// Skew-Hermitian matrix with dyadic coefficients.
pub fn random_skew_hermitian_dyadic<T: Scalar, R: Rng>(rng: &mut R, tag: FieldTag, n: usize) -> Result<MatF<T>> {
    let d = tag.dim();
    let mut m = MatF::zeros(tag, n)?;
    for i in 0..n {
        for c in 1..d {
            m.set_coeff(i, i, c, dyadic(rng, 2, 3));
        }
        for j in (i + 1)..n {
            for c in 0..d {
                let v: T = dyadic(rng, 2, 3);
                let w = if c == 0 { -v.clone() } else { v.clone() };
                m.set_coeff(i, j, c, v);
                m.set_coeff(j, i, c, w);
            }
        }
    }
    Ok(m)
}

/// Element `exp(Z)` of the unitary group for a random skew-Hermitian `Z`.
pub fn random_unitary<R: Rng>(rng: &mut R, tag: FieldTag, n: usize) -> Result<MatF<f64>> {
    expm(&random_skew_hermitian(rng, tag, n, 1.0)?)
}

/// Unit vector in ℝ^m with rational coordinates, by inverse stereographic
/// projection of a dyadic point of ℝ^{m-1}.
pub fn rational_unit_vector<T: Scalar, R: Rng>(rng: &mut R, m: usize) -> Vec<T> {
    if m == 0 {
        return Vec::new();
    }
    let y: Vec<T> = dyadic_vec(rng, m - 1, 2, 3);
    let n2 = y.iter().fold(T::zero(), |acc, v| acc + v.clone() * v.clone());
    let den = n2.clone() + T::one();
    let two = T::from_i64(2);
    let mut out: Vec<T> = y.into_iter().map(|v| two.clone() * v / den.clone()).collect();
    let last = (n2 - T::one()) / den;
    // m = 1 would always give -1 otherwise
    out.push(if m == 1 && rng.random_bool(0.5) { -last } else { last });
    out
}

/// Tangent vector at `x0 = e₀` of the sphere in 𝔽^{n+1} for which `‖v‖`,
/// `|v₁…|` and `|v₂…|` are all rational, so the Clifford–Wolf construction
/// stays exact. Over ℝ the first coordinate is zero.
pub fn pythagorean_tangent<T: Scalar, R: Rng>(rng: &mut R, tag: FieldTag, n: usize) -> Vec<HyperComplex<T>> {
    let d = tag.dim();
    let radius: T = T::ratio(rng.random_range(1..=8), rng.random_range(1..=4));
    let mut v = vec![HyperComplex::zero(tag); n + 1];
    // (Im v₀, |u|) on a sphere of radius ‖v‖
    let rho = if d == 1 {
        radius
    } else {
        let w: Vec<T> = rational_unit_vector(rng, d);
        let mut c = vec![T::zero()];
        c.extend(w[..d - 1].iter().map(|x| x.clone() * radius.clone()));
        v[0] = HyperComplex::new(tag, c).expect("width");
        Scalar::abs(&w[d - 1]) * radius
    };
    if n == 0 {
        return v;
    }
    if n == 1 {
        let a: Vec<T> = rational_unit_vector(rng, d);
        v[1] = HyperComplex::new(tag, a.into_iter().map(|x| x * rho.clone()).collect()).expect("width");
        return v;
    }
    // (v₁, |v₂…|) on a sphere of radius |u|
    let a: Vec<T> = rational_unit_vector(rng, d + 1);
    v[1] = HyperComplex::new(tag, a[..d].iter().map(|x| x.clone() * rho.clone()).collect()).expect("width");
    let beta = Scalar::abs(&a[d]) * rho;
    let b: Vec<T> = rational_unit_vector(rng, d * (n - 1));
    for (k, chunk) in b.chunks(d).enumerate() {
        v[k + 2] = HyperComplex::new(tag, chunk.iter().map(|x| x.clone() * beta.clone()).collect()).expect("width");
    }
    v
}
