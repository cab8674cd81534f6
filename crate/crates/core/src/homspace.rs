//! Reductive decompositions `𝔤 = 𝔥 ⊕ 𝔭₁ ⊕ 𝔭₂` of the sphere families and
//! their diagonal invariant metrics.
//!
//! The isotropy point is `x0 = (1, 0, …, 0)^T`. For the two families with an
//! extra factor (`Sp(n+1)×U(1)` and `Sp(n+1)×Sp(1)`) the algebra is stored as
//! an `(n+2)×(n+2)` quaternionic block matrix whose last diagonal slot holds
//! the extra factor; it acts on the right, so `U·x0 = U_top x0 - x0·u_extra`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::random::gaussian_vec;
use crate::algebra::{expm, qi, Affine, FieldTag, HyperComplex, MatF, Rational, Scalar};
use crate::error::{Error, Result};
use crate::spin9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// `U_𝔽(n+1)/U_𝔽(n)`: SO, U or Sp.
    Unitary { field: FieldTag, n: usize },
    /// `SU(n+1)/SU(n)`.
    SpecialUnitary { n: usize },
    /// `Sp(n+1)×U(1)/Sp(n)×U(1)` with `𝔭₂ = 𝔭₂,₁ ⊕ 𝔭₂,₂`.
    SpSplit { n: usize },
    /// `Sp(n+1)×Sp(1)/Sp(n)×Sp(1)`.
    SpSp1 { n: usize },
    /// `Spin(9)/Spin(7)` on S¹⁵.
    Spin9,
}

/// Names accepted by [`Family::parse`].
pub const FAMILY_NAMES: [&str; 7] = ["so", "u", "su", "sp", "sp-split", "sp-sp1", "spin9"];

impl Family {
    pub fn parse(name: &str, n: usize) -> Result<Family> {
        let f = match name {
            "so" => Family::Unitary {
                field: FieldTag::R,
                n,
            },
            "u" => Family::Unitary {
                field: FieldTag::C,
                n,
            },
            "sp" => Family::Unitary {
                field: FieldTag::H,
                n,
            },
            "su" => Family::SpecialUnitary { n },
            "sp-split" => Family::SpSplit { n },
            "sp-sp1" => Family::SpSp1 { n },
            "spin9" => Family::Spin9,
            other => {
                return Err(Error::Parse(format!(
                    "unknown family `{other}` (expected one of {})",
                    FAMILY_NAMES.join(", ")
                )))
            }
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Unitary { field: FieldTag::O, .. } => Err(Error::UnsupportedField(
                FieldTag::O,
                "no unitary group over the octonions".into(),
            )),
            Family::Spin9 => Ok(()),
            _ if self.n() == 0 => Err(Error::Precondition("n must be at least 1".into())),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Unitary { field: FieldTag::R, .. } => "so",
            Family::Unitary { field: FieldTag::C, .. } => "u",
            Family::Unitary { .. } => "sp",
            Family::SpecialUnitary { .. } => "su",
            Family::SpSplit { .. } => "sp-split",
            Family::SpSp1 { .. } => "sp-sp1",
            Family::Spin9 => "spin9",
        }
    }

    /// `n` of `G(n+1)/G(n)`; 7 for Spin(9)/Spin(7).
    pub fn n(&self) -> usize {
        match *self {
            Family::Unitary { n, .. }
            | Family::SpecialUnitary { n }
            | Family::SpSplit { n }
            | Family::SpSp1 { n } => n,
            Family::Spin9 => 7,
        }
    }

    /// Field and side length of the matrices housing 𝔤.
    pub fn ambient(&self) -> (FieldTag, usize) {
        match *self {
            Family::Unitary { field, n } => (field, n + 1),
            Family::SpecialUnitary { n } => (FieldTag::C, n + 1),
            Family::SpSplit { n } | Family::SpSp1 { n } => (FieldTag::H, n + 2),
            Family::Spin9 => (FieldTag::R, 16),
        }
    }

    /// Field of the sphere's ambient vector space.
    pub fn vector_field(&self) -> FieldTag {
        match *self {
            Family::Unitary { field, .. } => field,
            Family::SpecialUnitary { .. } => FieldTag::C,
            Family::SpSplit { .. } | Family::SpSp1 { .. } => FieldTag::H,
            Family::Spin9 => FieldTag::R,
        }
    }

    /// Number of 𝔽-coordinates of `x0`'s vector space.
    pub fn vector_len(&self) -> usize {
        match *self {
            Family::Spin9 => 16,
            _ => self.n() + 1,
        }
    }

    pub fn sphere_dim(&self) -> usize {
        self.vector_len() * self.vector_field().dim() - 1
    }

    fn extended(&self) -> bool {
        matches!(self, Family::SpSplit { .. } | Family::SpSp1 { .. })
    }

    /// Whether the metric has a second parameter `s`.
    pub fn has_s(&self) -> bool {
        matches!(self, Family::SpSplit { .. })
    }

    /// The 𝔭-parts carrying separate metric coefficients.
    pub fn p_parts(&self) -> &'static [Part] {
        match self {
            Family::Unitary { field: FieldTag::R, .. } => &[Part::P1],
            Family::SpSplit { .. } => &[Part::P1, Part::P21, Part::P22],
            _ => &[Part::P1, Part::P2],
        }
    }

    /// Coefficient of `⟨·,·⟩` on a part, affine in `(t, s)`.
    pub fn coefficient(&self, part: Part) -> Result<Affine<Rational>> {
        let r = Rational::ratio;
        let c = match (self, part) {
            (Family::Spin9, Part::P1) => Affine::constant(r(1, 8)),
            (Family::Spin9, Part::P2) => Affine::t(r(1, 2)),
            (_, Part::P1) => Affine::constant(qi(1)),
            (Family::Unitary { field: FieldTag::R, .. }, _) => {
                return Err(Error::Precondition("SO(n+1)/SO(n) has no 𝔭₂".into()))
            }
            (Family::Unitary { .. }, Part::P2) => Affine::t(qi(2)),
            (Family::SpecialUnitary { n }, Part::P2) => {
                let n = *n as i64;
                Affine::t(r(2 * n, n + 1))
            }
            (Family::SpSp1 { .. }, Part::P2) => Affine::t(qi(4)),
            (Family::SpSplit { .. }, Part::P21) => Affine::t(qi(2)),
            (Family::SpSplit { .. }, Part::P22) => Affine::s(qi(4)),
            (f, p) => return Err(Error::Precondition(format!("{f} has no metric part {p}"))),
        };
        Ok(c)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Spin9 => f.write_str("spin9"),
            other => write!(f, "{}(n={})", other.name(), other.n()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    H,
    P1,
    P2,
    P21,
    P22,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::H => "h",
            Part::P1 => "p1",
            Part::P2 => "p2",
            Part::P21 => "p21",
            Part::P22 => "p22",
        })
    }
}

fn unit<T: Scalar>(tag: FieldTag, c: usize) -> HyperComplex<T> {
    HyperComplex::unit(tag, c).expect("unit index below dim")
}

/// Matrix with `q` at `(i, j)` and `-q̄` at `(j, i)` (skew-Hermitian).
pub fn skew_pair<T: Scalar>(tag: FieldTag, size: usize, i: usize, j: usize, q: &HyperComplex<T>) -> MatF<T> {
    let mut m = MatF::zeros(tag, size).expect("associative");
    if i == j {
        let im = HyperComplex::new(tag, {
            let mut c = q.coeffs().to_vec();
            c[0] = T::zero();
            c
        })
        .expect("width");
        m.set(i, i, &im).expect("tag");
    } else {
        m.set(i, j, q).expect("tag");
        m.set(j, i, &q.conj().neg()).expect("tag");
    }
    m
}

/// `q` at `(i, i)` and `σ·q` at `(k, k)`.
fn diag_pair<T: Scalar>(tag: FieldTag, size: usize, i: usize, k: usize, q: &HyperComplex<T>, sigma: i64) -> MatF<T> {
    let mut m = MatF::zeros(tag, size).expect("associative");
    m.set(i, i, q).expect("tag");
    m.set(k, k, &q.scale(&T::from_i64(sigma))).expect("tag");
    m
}

/// Orthogonal basis of `u_𝔽(m)` placed on the indices `offset..offset+m`.
fn unitary_basis<T: Scalar>(tag: FieldTag, size: usize, offset: usize, m: usize, traceless: bool) -> Vec<MatF<T>> {
    let d = tag.dim();
    let mut out = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            for c in 0..d {
                out.push(skew_pair(tag, size, offset + a, offset + b, &unit(tag, c)));
            }
        }
    }
    if traceless {
        // i·(E_11 + … + E_kk - k E_{k+1,k+1})
        for k in 1..m {
            let mut x = MatF::zeros(tag, size).expect("associative");
            for a in 0..k {
                x.set_coeff(offset + a, offset + a, 1, T::one());
            }
            x.set_coeff(offset + k, offset + k, 1, T::from_i64(-(k as i64)));
            out.push(x);
        }
    } else {
        for a in 0..m {
            for c in 1..d {
                out.push(skew_pair(tag, size, offset + a, offset + a, &unit(tag, c)));
            }
        }
    }
    out
}

/// Orthogonal bases of 𝔥 and the 𝔭-parts of a family.
#[derive(Clone, Debug)]
pub struct ReductiveDecomposition<T = Rational> {
    family: Family,
    parts: Vec<(Part, Vec<MatF<T>>)>,
}

impl<T: Scalar> ReductiveDecomposition<T> {
    /// Builds the bases and checks orthogonality, isotropy and dimensions.
    pub fn build(family: Family) -> Result<Self> {
        family.validate()?;
        let d = Self {
            family,
            parts: Self::bases(family)?,
        };
        d.verify()?;
        Ok(d)
    }

    fn bases(family: Family) -> Result<Vec<(Part, Vec<MatF<T>>)>> {
        let (tag, size) = family.ambient();
        let p1 = |fld: FieldTag| -> Vec<MatF<T>> {
            let mut out = Vec::new();
            for j in 1..=family.n() {
                for c in 0..fld.dim() {
                    // U x0 = unit_c e_j
                    out.push(skew_pair(tag, size, j, 0, &unit(tag, c)));
                }
            }
            out
        };
        let corner_im = |units: &[usize]| -> Vec<MatF<T>> {
            units
                .iter()
                .map(|&c| skew_pair(tag, size, 0, 0, &unit(tag, c)))
                .collect()
        };
        let parts = match family {
            Family::Unitary { field, n } => {
                let h = unitary_basis(field, size, 1, n, false);
                let mut parts = vec![(Part::H, h), (Part::P1, p1(field))];
                if field != FieldTag::R {
                    let units: Vec<usize> = (1..field.dim()).collect();
                    parts.push((Part::P2, corner_im(&units)));
                }
                parts
            }
            Family::SpecialUnitary { n } => {
                let h = unitary_basis(FieldTag::C, size, 1, n, true);
                let mut x = MatF::zeros(FieldTag::C, size)?;
                x.set_coeff(0, 0, 1, T::from_i64(n as i64));
                for a in 1..=n {
                    x.set_coeff(a, a, 1, -T::one());
                }
                vec![(Part::H, h), (Part::P1, p1(FieldTag::C)), (Part::P2, vec![x])]
            }
            Family::SpSplit { n } => {
                let e = n + 1;
                let mut h = unitary_basis(FieldTag::H, size, 1, n, false);
                h.push(diag_pair(tag, size, 0, e, &unit(tag, 1), 1));
                let p22 = vec![diag_pair(tag, size, 0, e, &unit(tag, 1), -1)];
                vec![
                    (Part::H, h),
                    (Part::P1, p1(FieldTag::H)),
                    (Part::P21, corner_im(&[2, 3])),
                    (Part::P22, p22),
                ]
            }
            Family::SpSp1 { n } => {
                let e = n + 1;
                let mut h = unitary_basis(FieldTag::H, size, 1, n, false);
                let mut p2 = Vec::new();
                for c in 1..4 {
                    h.push(diag_pair(tag, size, 0, e, &unit(tag, c), 1));
                    p2.push(diag_pair(tag, size, 0, e, &unit(tag, c), -1));
                }
                vec![(Part::H, h), (Part::P1, p1(FieldTag::H)), (Part::P2, p2)]
            }
            Family::Spin9 => {
                let emb = spin9::embedding();
                let sp = spin9::parts_as::<T>();
                let conv = |bs: &[crate::clifford::Bivector<T>]| -> Result<Vec<MatF<T>>> {
                    bs.iter().map(|b| emb.theta(b)).collect()
                };
                vec![
                    (Part::H, conv(&sp.h)?),
                    (Part::P1, conv(&sp.p1)?),
                    (Part::P2, conv(&sp.p2)?),
                ]
            }
        };
        Ok(parts)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Basis of one stored part. `P2` of the split family is the union of
    /// `P21` and `P22`.
    pub fn basis(&self, part: Part) -> Vec<&MatF<T>> {
        let wanted: &[Part] = match (self.family, part) {
            (Family::SpSplit { .. }, Part::P2) => &[Part::P21, Part::P22],
            _ => std::slice::from_ref(match part {
                Part::H => &Part::H,
                Part::P1 => &Part::P1,
                Part::P2 => &Part::P2,
                Part::P21 => &Part::P21,
                Part::P22 => &Part::P22,
            }),
        };
        self.parts
            .iter()
            .filter(|(p, _)| wanted.contains(p))
            .flat_map(|(_, b)| b.iter())
            .collect()
    }

    pub fn dim(&self, part: Part) -> usize {
        self.basis(part).len()
    }

    /// Stored parts in order, 𝔥 first.
    pub fn parts(&self) -> &[(Part, Vec<MatF<T>>)] {
        &self.parts
    }

    fn check_ambient(&self, u: &MatF<T>) -> Result<()> {
        let (tag, size) = self.family.ambient();
        if u.tag() != tag || u.n() != size {
            return Err(Error::Dimension(format!(
                "{} expects {size}×{size} matrices over {tag}, got {}×{} over {}",
                self.family,
                u.n(),
                u.n(),
                u.tag()
            )));
        }
        Ok(())
    }

    /// `⟨·,·⟩`-orthogonal projection onto a part.
    pub fn project(&self, u: &MatF<T>, part: Part) -> Result<MatF<T>> {
        self.check_ambient(u)?;
        let mut out = MatF::zeros(u.tag(), u.n())?;
        for b in self.basis(part) {
            let c = u.inner_unchecked(b) / b.inner_unchecked(b);
            if !c.is_zero() {
                out.axpy(&c, b)?;
            }
        }
        Ok(out)
    }

    /// Projection onto `𝔭 = 𝔭₁ ⊕ 𝔭₂`.
    pub fn project_p(&self, u: &MatF<T>) -> Result<MatF<T>> {
        let mut out = MatF::zeros(u.tag(), u.n())?;
        for &p in self.family.p_parts() {
            out = out.add(&self.project(u, p)?)?;
        }
        Ok(out)
    }

    /// `U·x0` as a column of 𝔽-coordinates.
    pub fn act_x0(&self, u: &MatF<T>) -> Result<Vec<T>> {
        self.check_ambient(u)?;
        let d = u.tag().dim();
        let n1 = self.family.vector_len();
        let mut col: Vec<T> = u.first_column();
        col.truncate(n1 * d);
        if self.family.extended() {
            let e = self.family.n() + 1;
            for (c, v) in u.entry(e, e).iter().enumerate() {
                col[c] -= v.clone();
            }
        }
        Ok(col)
    }

    /// Checks orthogonality across and within parts, isotropy of 𝔥 and the
    /// expected dimensions.
    pub fn verify(&self) -> Result<()> {
        let all: Vec<(Part, &MatF<T>)> = self
            .parts
            .iter()
            .flat_map(|(p, b)| b.iter().map(move |m| (*p, m)))
            .collect();
        for (a, (_, x)) in all.iter().enumerate() {
            if !x.is_skew_hermitian(1e-12) {
                return Err(Error::Precondition("basis vector is not skew-Hermitian".into()));
            }
            for (_, y) in all.iter().skip(a + 1) {
                if !x.inner_unchecked(y).is_negligible(1e-10) {
                    return Err(Error::Precondition("basis vectors are not orthogonal".into()));
                }
            }
        }
        for h in self.basis(Part::H) {
            if !self.act_x0(h)?.iter().all(|c| c.is_negligible(1e-10)) {
                return Err(Error::Precondition("𝔥 does not annihilate x0".into()));
            }
        }
        let expected = expected_dims(self.family);
        for (part, want) in expected {
            if self.dim(part) != want {
                return Err(Error::Precondition(format!(
                    "dim {part} = {}, expected {want}",
                    self.dim(part)
                )));
            }
        }
        Ok(())
    }

    /// Random element of 𝔥 with Gaussian coordinates.
    pub fn random_h<R: Rng>(&self, rng: &mut R) -> MatF<f64> {
        let basis = self.basis(Part::H);
        let coords = gaussian_vec(rng, basis.len());
        let (tag, size) = self.family.ambient();
        let mut z = MatF::zeros(tag, size).expect("associative");
        for (b, c) in basis.iter().zip(coords) {
            let bf = b.to_f64();
            let norm = bf.inner_unchecked(&bf).sqrt();
            z.axpy(&(c / norm), &bf).expect("shape");
        }
        z
    }

    pub fn to_f64(&self) -> ReductiveDecomposition<f64> {
        ReductiveDecomposition {
            family: self.family,
            parts: self
                .parts
                .iter()
                .map(|(p, b)| (*p, b.iter().map(MatF::to_f64).collect()))
                .collect(),
        }
    }
}

/// Expected `(part, dim)` pairs.
pub fn expected_dims(family: Family) -> Vec<(Part, usize)> {
    match family {
        Family::Unitary { field, n } => {
            let d = field.dim();
            let mut v = vec![
                (Part::H, n * (d - 1) + n * (n - 1) / 2 * d),
                (Part::P1, n * d),
            ];
            if field != FieldTag::R {
                v.push((Part::P2, d - 1));
            }
            v
        }
        Family::SpecialUnitary { n } => vec![(Part::H, n * n - 1), (Part::P1, 2 * n), (Part::P2, 1)],
        Family::SpSplit { n } => vec![
            (Part::H, n * (2 * n + 1) + 1),
            (Part::P1, 4 * n),
            (Part::P21, 2),
            (Part::P22, 1),
        ],
        Family::SpSp1 { n } => vec![(Part::H, n * (2 * n + 1) + 3), (Part::P1, 4 * n), (Part::P2, 3)],
        Family::Spin9 => vec![(Part::H, 21), (Part::P2, 7), (Part::P1, 8)],
    }
}

impl ReductiveDecomposition<f64> {
    /// Largest `‖Ad(h)b - proj_part(Ad(h)b)‖` over `samples` random
    /// `h = exp(Z)`, `Z ∈ 𝔥`, and every basis vector `b` of every part.
    pub fn ad_invariance_residual<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<f64> {
        let mut worst = 0.0_f64;
        for _ in 0..samples {
            let h = expm(&self.random_h(rng))?;
            for (part, basis) in &self.parts {
                for b in basis {
                    let moved = b.conjugate_by(&h)?;
                    let back = self.project(&moved, *part)?;
                    let r = moved.sub(&back)?.frob_norm() / b.frob_norm();
                    worst = worst.max(r);
                }
            }
        }
        Ok(worst)
    }
}

/// Diagonal invariant metric `Σ x_i(t, s)⟨·,·⟩|𝔭_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalMetric<T = Rational> {
    family: Family,
    t: T,
    s: T,
}

impl<T: Scalar> DiagonalMetric<T> {
    /// `s` is ignored (set to `t`) for families without a second parameter.
    pub fn new(family: Family, t: T, s: Option<T>) -> Result<Self> {
        let s = match s {
            Some(s) if family.has_s() => s,
            _ => t.clone(),
        };
        if t <= T::zero() || s <= T::zero() {
            return Err(Error::Precondition(format!(
                "metric parameters must be positive (t = {t}, s = {s})"
            )));
        }
        Ok(DiagonalMetric { family, t, s })
    }

    /// The round metric (`t = s = 1`).
    pub fn round(family: Family) -> Self {
        Self::new(family, T::one(), None).expect("positive")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    pub fn s(&self) -> &T {
        &self.s
    }

    pub fn coefficient(&self, part: Part) -> Result<T> {
        let a = self.family.coefficient(part)?;
        Ok(a.map(T::from_rational).eval(&self.t, &self.s))
    }
}

fn check_in_p<T: Scalar>(d: &ReductiveDecomposition<T>, x: &MatF<T>) -> Result<()> {
    let h = d.project(x, Part::H)?;
    if !h.is_negligible(1e-9) {
        return Err(Error::Precondition(format!(
            "argument has an 𝔥-component of norm {:e}",
            h.frob_norm()
        )));
    }
    Ok(())
}

/// `(X, Y)` under the metric, as an affine function of `(t, s)`.
pub fn metric_inner_affine<T: Scalar>(d: &ReductiveDecomposition<T>, x: &MatF<T>, y: &MatF<T>) -> Result<Affine<T>> {
    check_in_p(d, x)?;
    check_in_p(d, y)?;
    let mut acc = Affine::constant(T::zero());
    for &p in d.family().p_parts() {
        let ip = d.project(x, p)?.inner(&d.project(y, p)?)?;
        let coef = d.family().coefficient(p)?.map(T::from_rational);
        acc = acc.add(&coef.scale(&ip));
    }
    Ok(acc)
}

/// `(X, Y)_m`; errors if either argument has an 𝔥-component.
pub fn metric_inner<T: Scalar>(m: &DiagonalMetric<T>, d: &ReductiveDecomposition<T>, x: &MatF<T>, y: &MatF<T>) -> Result<T> {
    if m.family() != d.family() {
        return Err(Error::Precondition(format!(
            "metric of {} used with decomposition of {}",
            m.family(),
            d.family()
        )));
    }
    Ok(metric_inner_affine(d, x, y)?.eval(m.t(), m.s()))
}
