//! Real, complex, quaternion and octonion scalars as coefficient vectors
//! under the Cayley–Dickson doubling product.
//!
//! The doubling rule is `(a, b)(c, d) = (ac - d̄b, da + bc̄)` with
//! conjugation `(a, b)‾ = (ā, -b)`. Starting from ℝ this gives ℂ, then ℍ with
//! `i·j = k`, then the octonions. Basis element `e_m` of a `2^r`-dimensional
//! algebra is the coefficient vector with a single one at index `m`.

use std::fmt;

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use super::scalar::{qi, Rational, Scalar};
use crate::error::{Error, Result};

/// Which of ℝ, ℂ, ℍ, 𝕆 a scalar or matrix lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    R,
    C,
    H,
    O,
}

impl FieldTag {
    /// Real dimension d(𝔽).
    pub const fn dim(self) -> usize {
        match self {
            FieldTag::R => 1,
            FieldTag::C => 2,
            FieldTag::H => 4,
            FieldTag::O => 8,
        }
    }

    pub fn from_dim(d: usize) -> Option<FieldTag> {
        match d {
            1 => Some(FieldTag::R),
            2 => Some(FieldTag::C),
            4 => Some(FieldTag::H),
            8 => Some(FieldTag::O),
            _ => None,
        }
    }

    /// Matrices are only defined over the associative fields.
    pub fn is_associative(self) -> bool {
        self != FieldTag::O
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FieldTag::R => "R",
            FieldTag::C => "C",
            FieldTag::H => "H",
            FieldTag::O => "O",
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" => Ok(FieldTag::R),
            "C" | "c" => Ok(FieldTag::C),
            "H" | "h" => Ok(FieldTag::H),
            "O" | "o" => Ok(FieldTag::O),
            other => Err(Error::Parse(format!("unknown field tag `{other}`"))),
        }
    }
}

/// Cayley–Dickson product of two coefficient slices of equal power-of-two
/// length.
pub fn cd_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    debug_assert_eq!(a.len(), b.len());
    match a.len() {
        1 => vec![a[0].clone() * b[0].clone()],
        2 => vec![
            a[0].clone() * b[0].clone() - a[1].clone() * b[1].clone(),
            a[0].clone() * b[1].clone() + a[1].clone() * b[0].clone(),
        ],
        4 => {
            let mut out = vec![T::zero(), T::zero(), T::zero(), T::zero()];
            quat_mul_acc(&mut out, a, b);
            out
        }
        len => {
            let h = len / 2;
            let (a0, a1) = a.split_at(h);
            let (b0, b1) = b.split_at(h);
            let b0c = cd_conj(b0);
            let b1c = cd_conj(b1);
            let first = sub_vec(cd_mul(a0, b0), cd_mul(&b1c, a1));
            let second = add_vec(cd_mul(b1, a0), cd_mul(a1, &b0c));
            first.into_iter().chain(second).collect()
        }
    }
}

/// Conjugation `(a, b)‾ = (ā, -b)`; negates every imaginary coefficient.
pub fn cd_conj<T: Scalar>(a: &[T]) -> Vec<T> {
    a.iter()
        .enumerate()
        .map(|(i, x)| if i == 0 { x.clone() } else { -x.clone() })
        .collect()
}

/// `out += a * b` for quaternion coefficient slices.
#[inline]
pub(crate) fn quat_mul_acc<T: Scalar>(out: &mut [T], a: &[T], b: &[T]) {
    let (a0, a1, a2, a3) = (&a[0], &a[1], &a[2], &a[3]);
    let (b0, b1, b2, b3) = (&b[0], &b[1], &b[2], &b[3]);
    let m = |x: &T, y: &T| x.clone() * y.clone();
    out[0] += m(a0, b0) - m(a1, b1) - m(a2, b2) - m(a3, b3);
    out[1] += m(a0, b1) + m(a1, b0) + m(a2, b3) - m(a3, b2);
    out[2] += m(a0, b2) - m(a1, b3) + m(a2, b0) + m(a3, b1);
    out[3] += m(a0, b3) + m(a1, b2) - m(a2, b1) + m(a3, b0);
}

/// `out += a * b` for coefficient slices of length 1, 2 or 4.
#[inline]
pub(crate) fn mul_acc<T: Scalar>(out: &mut [T], a: &[T], b: &[T]) {
    match a.len() {
        1 => out[0] += a[0].clone() * b[0].clone(),
        2 => {
            out[0] += a[0].clone() * b[0].clone() - a[1].clone() * b[1].clone();
            out[1] += a[0].clone() * b[1].clone() + a[1].clone() * b[0].clone();
        }
        4 => quat_mul_acc(out, a, b),
        _ => {
            for (o, v) in out.iter_mut().zip(cd_mul(a, b)) {
                *o += v;
            }
        }
    }
}

fn add_vec<T: Scalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec<T: Scalar>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A scalar of ℝ, ℂ, ℍ or 𝕆.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperComplex<T> {
    tag: FieldTag,
    coeffs: Vec<T>,
}

impl<T: Scalar> HyperComplex<T> {
    pub fn new(tag: FieldTag, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != tag.dim() {
            return Err(Error::Shape(format!(
                "{} scalar needs {} coefficients, got {}",
                tag,
                tag.dim(),
                coeffs.len()
            )));
        }
        Ok(HyperComplex { tag, coeffs })
    }

    pub fn zero(tag: FieldTag) -> Self {
        HyperComplex {
            tag,
            coeffs: vec![T::zero(); tag.dim()],
        }
    }

    pub fn real(tag: FieldTag, v: T) -> Self {
        let mut z = Self::zero(tag);
        z.coeffs[0] = v;
        z
    }

    /// Basis unit `e_m` (`e_0 = 1`).
    pub fn unit(tag: FieldTag, m: usize) -> Result<Self> {
        if m >= tag.dim() {
            return Err(Error::Shape(format!("{tag} has no unit e{m}")));
        }
        let mut z = Self::zero(tag);
        z.coeffs[m] = T::one();
        Ok(z)
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn re(&self) -> &T {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_imaginary(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn conj(&self) -> Self {
        HyperComplex {
            tag: self.tag,
            coeffs: cd_conj(&self.coeffs),
        }
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm_sqr(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        HyperComplex {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_tag(other)?;
        Ok(HyperComplex {
            tag: self.tag,
            coeffs: add_vec(self.coeffs.clone(), other.coeffs.clone()),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_tag(other)?;
        Ok(HyperComplex {
            tag: self.tag,
            coeffs: sub_vec(self.coeffs.clone(), other.coeffs.clone()),
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    fn check_tag(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            return Err(Error::TagMismatch(self.tag, other.tag));
        }
        Ok(())
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> HyperComplex<S> {
        HyperComplex {
            tag: self.tag,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// Cayley–Dickson product. Associative over ℝ, ℂ, ℍ; only alternative over 𝕆.
pub fn hc_mul<T: Scalar>(a: &HyperComplex<T>, b: &HyperComplex<T>) -> Result<HyperComplex<T>> {
    a.check_tag(b)?;
    Ok(HyperComplex {
        tag: a.tag,
        coeffs: cd_mul(&a.coeffs, &b.coeffs),
    })
}

/// Signed index table of the octonion units: entry `[a][b] = ±(c+1)` means
/// `e_a · e_b = ±e_c`.
pub fn octonion_table() -> [[i8; 8]; 8] {
    let unit = |m: usize| -> Vec<Rational> { (0..8).map(|i| qi(i64::from(i == m))).collect() };
    let mut table = [[0i8; 8]; 8];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let prod = cd_mul(&unit(a), &unit(b));
            let (c, v) = prod
                .iter()
                .enumerate()
                .find(|(_, v)| !v.is_zero())
                .expect("product of units is a signed unit");
            let sign: i8 = if v.is_positive() { 1 } else { -1 };
            *slot = sign * (c as i8 + 1);
        }
    }
    table
}
