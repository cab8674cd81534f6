//! The Clifford algebra Cl^n (n ≤ 9) with `x·y + y·x = -2(x, y)`, its
//! bivectors spin(n), and the isomorphism spin(n) → so(n).

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FieldTag, MatF, Rational, Scalar};
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 9;

/// Basis blade `e_{i1}…e_{ik}` encoded as a bitmask; bit `i-1` is generator `e_i`.
pub type Blade = u16;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(format!("Cl^{n} is outside 1..={MAX_DIM}")));
    }
    Ok(())
}

/// Sign of `e_A · e_B` as a blade product, with `e_i² = -1`.
pub fn blade_sign(a: Blade, b: Blade) -> i8 {
    // transpositions needed to move each generator of b past the higher
    // generators of a
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let low = rest.trailing_zeros();
        swaps += (a >> (low + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement<T = Rational> {
    n: usize,
    terms: BTreeMap<Blade, T>,
}

impl<T: Scalar> CliffordElement<T> {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(CliffordElement {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(n: usize, v: T) -> Result<Self> {
        Self::blade(n, 0, v)
    }

    /// Generator `e_i`, 1-based.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        Self::basis(n, &[i])
    }

    /// `coeff · e_A` for a blade mask.
    pub fn blade(n: usize, mask: Blade, coeff: T) -> Result<Self> {
        let mut x = Self::zero(n)?;
        if mask >> n != 0 {
            return Err(Error::Dimension(format!("blade {mask:#b} outside Cl^{n}")));
        }
        x.add_term(mask, coeff);
        Ok(x)
    }

    /// Ordered product `e_{i1}·…·e_{ik}` of 1-based generators.
    pub fn basis(n: usize, indices: &[usize]) -> Result<Self> {
        let mut x = Self::scalar(n, T::one())?;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::Dimension(format!("no generator e{i} in Cl^{n}")));
            }
            x = x.mul(&Self::blade(n, 1 << (i - 1), T::one())?)?;
        }
        Ok(x)
    }

    /// Grade-one element `Σ v_i e_i`.
    pub fn vector(n: usize, v: &[T]) -> Result<Self> {
        if v.len() > n {
            return Err(Error::Dimension(format!(
                "vector of length {} in Cl^{n}",
                v.len()
            )));
        }
        let mut x = Self::zero(n)?;
        for (i, c) in v.iter().enumerate() {
            x.add_term(1 << i, c.clone());
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &T)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coeff(&self, mask: Blade) -> T {
        self.terms.get(&mask).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mask: Blade, c: T) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(T::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "Cl^{} vs Cl^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = CliffordElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (b, c) in &self.terms {
            out.add_term(*b, c.clone() * s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    /// Clifford product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = CliffordElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let v = ca.clone() * cb.clone();
                let v = if blade_sign(*a, *b) < 0 { -v } else { v };
                out.add_term(a ^ b, v);
            }
        }
        Ok(out)
    }

    /// Commutator `xy - yx`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Part of the given grade.
    pub fn grade(&self, k: u32) -> Self {
        CliffordElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.count_ones() == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|b| b.count_ones() % 2 == 0)
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> CliffordElement<S> {
        let mut out = CliffordElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }
}

/// `e1e2e5` style name of a blade.
fn blade_name(mask: Blade) -> String {
    (0..16)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("e{}", i + 1))
        .collect()
}

impl<T: Scalar> fmt::Display for CliffordElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // grade-then-lexicographic order reads naturally
        let mut keys: Vec<&Blade> = self.terms.keys().collect();
        keys.sort_by_key(|b| (b.count_ones(), (0..16).filter(|i| *b >> i & 1 == 1).collect::<Vec<_>>()));
        for (k, b) in keys.into_iter().enumerate() {
            let s = self.terms[b].to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, s),
            };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *b == 0 {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&blade_name(*b))?;
            } else {
                write!(f, "{body}*{}", blade_name(*b))?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> CliffordElement<T> {
    /// Parses the text format, e.g. `-3*e1e2 + e3e4 - 1/2`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut out = Self::zero(n)?;
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty Clifford element".into()));
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(b) => (-T::one(), b),
                None => (T::one(), term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coeff, blade) = match body.find('e') {
                Some(pos) => (body[..pos].trim_end_matches('*'), &body[pos..]),
                None => (body, ""),
            };
            let c = if coeff.is_empty() {
                T::one()
            } else {
                T::parse_token(coeff)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{coeff}`")))?
            };
            let mut indices = Vec::new();
            for part in blade.split('e').skip(1) {
                let i: usize = part
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad generator in `{term}`")))?;
                indices.push(i);
            }
            let x = Self::basis(n, &indices)?.scale(&(sign * c));
            out = out.add(&x)?;
        }
        Ok(out)
    }
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Position of the pair `(i, j)`, `1 <= i < j <= n`, in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    let i0 = i - 1;
    i0 * (2 * n - i0 - 1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `1 <= i < j <= n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect()
}

/// Element `Σ γ_ij e_i·e_j` of spin(n), stored densely in [`pairs`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct Bivector<T = Rational> {
    n: usize,
    gamma: Vec<T>,
}

impl<T: Scalar> Bivector<T> {
    pub fn zero(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Bivector {
            n,
            gamma: vec![T::zero(); pair_count(n)],
        })
    }

    /// `e_i·e_j` (sign flips when `i > j`).
    pub fn basis(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut b = Self::zero(n)?;
        b.set(i, j, T::one())?;
        Ok(b)
    }

    pub fn from_coords(n: usize, gamma: Vec<T>) -> Result<Self> {
        check_dim(n)?;
        if gamma.len() != pair_count(n) {
            return Err(Error::Dimension(format!(
                "spin({n}) has {} coordinates, got {}",
                pair_count(n),
                gamma.len()
            )));
        }
        Ok(Bivector { n, gamma })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[T] {
        &self.gamma
    }

    /// `γ_ij`, antisymmetric in `i, j`.
    pub fn get(&self, i: usize, j: usize) -> T {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.gamma[pair_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => -self.gamma[pair_index(self.n, j, i)].clone(),
            std::cmp::Ordering::Equal => T::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) -> Result<()> {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(Error::Dimension(format!("no bivector e{i}e{j} in spin({})", self.n)));
        }
        if i < j {
            self.gamma[pair_index(self.n, i, j)] = v;
        } else {
            self.gamma[pair_index(self.n, j, i)] = -v;
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        pairs(self.n)
            .into_iter()
            .zip(&self.gamma)
            .map(|((i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.iter().all(|c| c.is_zero())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "spin({}) vs spin({})",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Bivector {
            n: self.n,
            gamma: self
                .gamma
                .iter()
                .zip(&other.gamma)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        Bivector {
            n: self.n,
            gamma: self.gamma.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn to_clifford(&self) -> CliffordElement<T> {
        let mut x = CliffordElement::zero(self.n).expect("checked");
        for (i, j, c) in self.iter() {
            x.add_term((1 << (i - 1)) | (1 << (j - 1)), c.clone());
        }
        x
    }

    /// Reads the grade-two part; errors if anything else is present.
    pub fn from_clifford(x: &CliffordElement<T>) -> Result<Self> {
        let mut b = Self::zero(x.n())?;
        for (mask, c) in x.terms() {
            if mask.count_ones() != 2 {
                return Err(Error::Precondition(format!(
                    "term of grade {} in a bivector",
                    mask.count_ones()
                )));
            }
            let i = mask.trailing_zeros() as usize + 1;
            let j = (15 - mask.leading_zeros()) as usize + 1;
            b.set(i, j, c.clone())?;
        }
        Ok(b)
    }

    /// Lie bracket in spin(n), the Clifford commutator.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Self::from_clifford(&self.to_clifford().bracket(&other.to_clifford())?)
    }

    /// `W·W` in Cl^n.
    pub fn square(&self) -> CliffordElement<T> {
        let w = self.to_clifford();
        w.mul(&w).expect("same n")
    }

    /// Euclidean `Σ γ_ij²`.
    pub fn norm_sqr(&self) -> T {
        self.gamma
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Bivector<S> {
        Bivector {
            n: self.n,
            gamma: self.gamma.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Bivector<f64> {
        self.map(|c| c.to_f64())
    }
}

impl<T: Scalar> fmt::Display for Bivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_clifford().fmt(f)
    }
}

/// `v·w` for orthogonal `v, w`: components `γ_ij = α_iβ_j - β_iα_j`.
pub fn bivector_from_vectors<T: Scalar>(n: usize, v: &[T], w: &[T]) -> Result<Bivector<T>> {
    if v.len() > n || w.len() > n {
        return Err(Error::Dimension(format!("vectors longer than {n}")));
    }
    let get = |x: &[T], i: usize| x.get(i - 1).cloned().unwrap_or_else(T::zero);
    let vw = v
        .iter()
        .zip(w)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    if !vw.is_negligible(1e-12) {
        return Err(Error::Precondition(format!(
            "v and w are not orthogonal: v·w has scalar part -(v, w) = {}",
            -vw
        )));
    }
    let mut b = Bivector::zero(n)?;
    for (i, j) in pairs(n) {
        let g = get(v, i) * get(w, j) - get(w, i) * get(v, j);
        b.gamma[pair_index(n, i, j)] = g;
    }
    Ok(b)
}

/// Result of the squaring test `W² = -C²·1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Simple<T = Rational> {
    pub c_squared: T,
}

impl<T: Scalar> Simple<T> {
    /// `C` when it is representable in `T` (perfect squares for rationals).
    pub fn c_exact(&self) -> Option<T> {
        self.c_squared.sqrt()
    }

    pub fn c(&self) -> f64 {
        self.c_squared.to_f64().sqrt()
    }
}

/// Returns `C` when `W·W = -C²·1`, i.e. when `W` is a simple bivector.
pub fn is_simple<T: Scalar>(w: &Bivector<T>) -> Option<Simple<T>> {
    let sq = w.square();
    if sq.terms().any(|(b, c)| b != 0 && !c.is_negligible(1e-12)) {
        return None;
    }
    Some(Simple {
        c_squared: -sq.coeff(0),
    })
}

/// `L: spin(n) → so(n)`, `e_i·e_j ↦ 2(E_ji - E_ij)`.
pub fn spin_to_so<T: Scalar>(w: &Bivector<T>) -> MatF<T> {
    let n = w.n();
    let mut m = MatF::zeros(FieldTag::R, n).expect("real");
    let two = T::from_i64(2);
    for (i, j, c) in w.iter() {
        if c.is_zero() {
            continue;
        }
        let v = two.clone() * c.clone();
        m.set_coeff(j - 1, i - 1, 0, v.clone());
        m.set_coeff(i - 1, j - 1, 0, -v);
    }
    m
}

/// The spin(9) inner product `8 Σ γ^U_ij γ^V_ij`, which is the pullback of
/// `½ Re tr(UV*)` on so(16).
pub fn spin9_inner<T: Scalar>(u: &Bivector<T>, v: &Bivector<T>) -> Result<T> {
    if u.n() != 9 || v.n() != 9 {
        return Err(Error::Dimension(format!(
            "spin9_inner needs n = 9, got {} and {}",
            u.n(),
            v.n()
        )));
    }
    let s = u
        .gamma
        .iter()
        .zip(&v.gamma)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
    Ok(T::from_i64(8) * s)
}
