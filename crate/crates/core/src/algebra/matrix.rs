//! Dense square matrices over ℝ, ℂ or ℍ.
//!
//! Entries are stored as contiguous coefficient blocks of length d(𝔽), row
//! major. Matrices act on column vectors from the left, so over ℍ the
//! column space is a right module: `U(x·λ) = (Ux)·λ`.

use std::fmt;

use super::hypercomplex::{cd_conj, mul_acc, FieldTag, HyperComplex};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MatF<T> {
    tag: FieldTag,
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> MatF<T> {
    pub fn zeros(tag: FieldTag, n: usize) -> Result<Self> {
        if !tag.is_associative() {
            return Err(Error::UnsupportedField(
                tag,
                "matrices need an associative field".into(),
            ));
        }
        Ok(MatF {
            tag,
            n,
            data: vec![T::zero(); n * n * tag.dim()],
        })
    }

    pub fn identity(tag: FieldTag, n: usize) -> Result<Self> {
        let mut m = Self::zeros(tag, n)?;
        for i in 0..n {
            m.entry_mut(i, i)[0] = T::one();
        }
        Ok(m)
    }

    /// Build from row-major entries.
    pub fn from_entries(tag: FieldTag, n: usize, entries: &[HyperComplex<T>]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "{n}x{n} matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut m = Self::zeros(tag, n)?;
        for (k, e) in entries.iter().enumerate() {
            if e.tag() != tag {
                return Err(Error::TagMismatch(tag, e.tag()));
            }
            m.entry_mut(k / n, k % n).clone_from_slice(e.coeffs());
        }
        Ok(m)
    }

    /// Real matrix from row-major values.
    pub fn from_real(n: usize, values: &[T]) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Shape(format!(
                "{n}x{n} real matrix needs {} values, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(MatF {
            tag: FieldTag::R,
            n,
            data: values.to_vec(),
        })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(tag: FieldTag, diag: &[HyperComplex<T>]) -> Result<Self> {
        let n = diag.len();
        let mut m = Self::zeros(tag, n)?;
        for (i, e) in diag.iter().enumerate() {
            if e.tag() != tag {
                return Err(Error::TagMismatch(tag, e.tag()));
            }
            m.entry_mut(i, i).clone_from_slice(e.coeffs());
        }
        Ok(m)
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.n + j) * self.tag.dim()
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &[T] {
        let d = self.tag.dim();
        let o = self.offset(i, j);
        &self.data[o..o + d]
    }

    #[inline]
    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [T] {
        let d = self.tag.dim();
        let o = self.offset(i, j);
        &mut self.data[o..o + d]
    }

    pub fn get(&self, i: usize, j: usize) -> HyperComplex<T> {
        HyperComplex::new(self.tag, self.entry(i, j).to_vec()).expect("entry width")
    }

    pub fn set(&mut self, i: usize, j: usize, v: &HyperComplex<T>) -> Result<()> {
        if v.tag() != self.tag {
            return Err(Error::TagMismatch(self.tag, v.tag()));
        }
        self.entry_mut(i, j).clone_from_slice(v.coeffs());
        Ok(())
    }

    /// Sets coefficient `c` (0 = real part, 1 = i, ...) of entry `(i, j)`.
    pub fn set_coeff(&mut self, i: usize, j: usize, c: usize, v: T) {
        self.entry_mut(i, j)[c] = v;
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch(self.tag, other.tag));
        }
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        MatF {
            tag: self.tag,
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Multiplication by a real scalar.
    pub fn scale(&self, s: &T) -> Self {
        MatF {
            tag: self.tag,
            n: self.n,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// `self += s * other` for real `s`.
    pub fn axpy(&mut self, s: &T, other: &Self) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += s.clone() * b.clone();
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.n;
        let mut out = Self::zeros(self.tag, n)?;
        let d = self.tag.dim();
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.iter().all(|x| x.is_zero()) {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if b.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let o = (i * n + j) * d;
                    mul_acc(&mut out.data[o..o + d], a, b);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose `U* = Ū^T`.
    pub fn adjoint(&self) -> Self {
        let mut out = MatF {
            tag: self.tag,
            n: self.n,
            data: self.data.clone(),
        };
        for i in 0..self.n {
            for j in 0..self.n {
                out.entry_mut(j, i)
                    .clone_from_slice(&cd_conj(self.entry(i, j)));
            }
        }
        out
    }

    /// Lie bracket `[U, V] = UV - VU`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn trace(&self) -> HyperComplex<T> {
        let mut acc = HyperComplex::zero(self.tag);
        for i in 0..self.n {
            acc = acc.add(&self.get(i, i)).expect("same tag");
        }
        acc
    }

    /// Ad-invariant inner product `½ Re tr(U V*)`.
    ///
    /// `Re(p q̄)` is the Euclidean dot product of the coefficient vectors, so
    /// this is half the coefficient-wise dot product.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_same(other)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            if !a.is_zero() && !b.is_zero() {
                acc += a.clone() * b.clone();
            }
        }
        acc * T::ratio(1, 2)
    }

    /// Squared Frobenius norm `Σ |U_ij|^2`.
    pub fn frob_sqr(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, a| acc + a.clone() * a.clone())
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_sqr().to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Zero test at `tol` (exact for rationals).
    pub fn is_negligible(&self, tol: f64) -> bool {
        if T::EXACT {
            self.is_zero()
        } else {
            self.frob_norm() <= tol
        }
    }

    /// `U + U*`, zero exactly when U is skew-Hermitian.
    pub fn hermitian_part2(&self) -> Self {
        self.add(&self.adjoint()).expect("same shape")
    }

    pub fn is_skew_hermitian(&self, tol: f64) -> bool {
        self.hermitian_part2().is_negligible(tol)
    }

    pub fn is_scalar_multiple_of_identity(&self, tol: f64) -> Option<HyperComplex<T>> {
        if self.n == 0 {
            return Some(HyperComplex::zero(self.tag));
        }
        let c = self.get(0, 0);
        let mut scaled = Self::zeros(self.tag, self.n).expect("tag");
        for i in 0..self.n {
            scaled.set(i, i, &c).expect("tag");
        }
        if self.sub(&scaled).expect("shape").is_negligible(tol) {
            Some(c)
        } else {
            None
        }
    }

    /// Applies the matrix to a column vector stored as `n` consecutive
    /// coefficient blocks.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        let d = self.tag.dim();
        if x.len() != self.n * d {
            return Err(Error::Dimension(format!(
                "vector of length {} for {}x{} matrix over {}",
                x.len() / d.max(1),
                self.n,
                self.n,
                self.tag
            )));
        }
        let mut out = vec![T::zero(); self.n * d];
        for i in 0..self.n {
            for j in 0..self.n {
                mul_acc(&mut out[i * d..(i + 1) * d], self.entry(i, j), &x[j * d..(j + 1) * d]);
            }
        }
        Ok(out)
    }

    /// First column, i.e. the image of `x0 = (1, 0, ..., 0)^T`.
    pub fn first_column(&self) -> Vec<T> {
        (0..self.n).flat_map(|i| self.entry(i, 0).to_vec()).collect()
    }

    /// Real matrix of the action on the realified column space.
    ///
    /// Each entry `q` becomes the d×d matrix of left multiplication by `q`,
    /// so `realify(UV) = realify(U) realify(V)`.
    pub fn realify(&self) -> MatF<T> {
        let d = self.tag.dim();
        let big = self.n * d;
        let mut out = MatF {
            tag: FieldTag::R,
            n: big,
            data: vec![T::zero(); big * big],
        };
        for i in 0..self.n {
            for j in 0..self.n {
                let q = self.entry(i, j);
                for c in 0..d {
                    let mut unit = vec![T::zero(); d];
                    unit[c] = T::one();
                    let mut col = vec![T::zero(); d];
                    mul_acc(&mut col, q, &unit);
                    for (r, v) in col.into_iter().enumerate() {
                        out.data[(i * d + r) * big + j * d + c] = v;
                    }
                }
            }
        }
        out
    }

    /// Inverse of [`realify`](Self::realify) for real matrices that commute
    /// with the 𝔽-structure: reads each entry from the first column of its
    /// block.
    pub fn derealify(tag: FieldTag, real: &MatF<T>) -> Result<Self> {
        if real.tag != FieldTag::R {
            return Err(Error::Precondition("derealify expects a real matrix".into()));
        }
        let d = tag.dim();
        if !real.n.is_multiple_of(d) {
            return Err(Error::Dimension(format!(
                "size {} is not a multiple of {d}",
                real.n
            )));
        }
        let n = real.n / d;
        let mut out = Self::zeros(tag, n)?;
        for i in 0..n {
            for j in 0..n {
                for r in 0..d {
                    out.entry_mut(i, j)[r] = real.data[(i * d + r) * real.n + j * d].clone();
                }
            }
        }
        Ok(out)
    }

    /// Embeds a real matrix into 𝔽 (imaginary parts zero).
    pub fn promote(&self, tag: FieldTag) -> Result<Self> {
        if self.tag != FieldTag::R {
            if self.tag == tag {
                return Ok(self.clone());
            }
            return Err(Error::TagMismatch(self.tag, tag));
        }
        let mut out = Self::zeros(tag, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                out.entry_mut(i, j)[0] = self.entry(i, j)[0].clone();
            }
        }
        Ok(out)
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> MatF<S> {
        MatF {
            tag: self.tag,
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> MatF<f64> {
        self.map(|x| x.to_f64())
    }

    /// Largest coefficient-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Block-diagonal embedding of `self` into a larger matrix at `offset`.
    pub fn embed(&self, size: usize, offset: usize) -> Result<Self> {
        if offset + self.n > size {
            return Err(Error::Dimension(format!(
                "cannot place {}x{} block at {offset} in {size}x{size}",
                self.n, self.n
            )));
        }
        let mut out = Self::zeros(self.tag, size)?;
        for i in 0..self.n {
            for j in 0..self.n {
                out.entry_mut(offset + i, offset + j)
                    .clone_from_slice(self.entry(i, j));
            }
        }
        Ok(out)
    }

    /// Square sub-block starting at `offset`.
    pub fn block(&self, offset: usize, size: usize) -> Result<Self> {
        if offset + size > self.n {
            return Err(Error::Dimension("block out of range".into()));
        }
        let mut out = Self::zeros(self.tag, size)?;
        for i in 0..size {
            for j in 0..size {
                out.entry_mut(i, j)
                    .clone_from_slice(self.entry(offset + i, offset + j));
            }
        }
        Ok(out)
    }

    /// Conjugation `a U a*`; equals `Ad(a) U` for unitary `a`.
    pub fn conjugate_by(&self, a: &Self) -> Result<Self> {
        a.mul(self)?.mul(&a.adjoint())
    }
}

impl<T: Scalar> fmt::Display for MatF<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::textfmt::format_matrix(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, qi, Rational};

    fn c(re: i64, im: i64) -> HyperComplex<Rational> {
        HyperComplex::new(FieldTag::C, vec![qi(re), qi(im)]).unwrap()
    }

    #[test]
    fn octonion_matrices_are_rejected() {
        assert!(matches!(
            MatF::<Rational>::zeros(FieldTag::O, 2),
            Err(Error::UnsupportedField(FieldTag::O, _))
        ));
    }

    #[test]
    fn inner_of_diag_i_is_one_half() {
        let u = MatF::diagonal(FieldTag::C, &[c(0, 1)]).unwrap();
        assert_eq!(u.inner(&u).unwrap(), q(1, 2));
    }

    #[test]
    fn realify_diag_i() {
        let u = MatF::diagonal(FieldTag::C, &[c(0, 1)]).unwrap();
        let r = u.realify();
        assert_eq!(r, MatF::from_real(2, &[qi(0), qi(-1), qi(1), qi(0)]).unwrap());
        let z = MatF::<Rational>::zeros(FieldTag::H, 3).unwrap();
        assert!(z.realify().is_zero());
        assert_eq!(MatF::derealify(FieldTag::C, &r).unwrap(), u);
    }

    #[test]
    fn bracket_of_self_vanishes() {
        let u = MatF::from_entries(FieldTag::C, 2, &[c(0, 1), c(2, 3), c(-2, 3), c(0, -5)]).unwrap();
        assert!(u.bracket(&u).unwrap().is_zero());
    }

    #[test]
    fn shape_mismatch_errors() {
        let a = MatF::<Rational>::zeros(FieldTag::C, 2).unwrap();
        let b = MatF::<Rational>::zeros(FieldTag::C, 3).unwrap();
        let h = MatF::<Rational>::zeros(FieldTag::H, 2).unwrap();
        assert!(matches!(a.inner(&b), Err(Error::Dimension(_))));
        assert!(matches!(a.bracket(&h), Err(Error::TagMismatch(..))));
    }
}
