//! Constant-length Killing fields `K(x) = Ux` on round spheres, the
//! Clifford–Wolf fields through a given tangent vector, δ-vector fields for
//! `SU(n+1)` and the orbit label of unit fields in `u(n+1)`.
//!
//! Tangent vectors at `x0 = (1, 0, …, 0)^T` are columns `v = (u₁, u)` with
//! `u₁ ∈ Im 𝔽`.

use serde::Serialize;

use crate::algebra::{hc_mul, sym_eigvals, FieldTag, HyperComplex, MatF, Rational, Scalar, NUMERIC_TOL};
use crate::error::{Error, Result};
use crate::homspace::Family;

/// Certificate that `U² = -C² Id`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingCertificate<T = Rational> {
    #[serde(skip)]
    pub u: MatF<T>,
    /// `C²`, exact in rational mode.
    pub c_squared: String,
    pub c: f64,
    /// `‖U² + C² Id‖`; exactly 0 in rational mode.
    pub residual: f64,
    /// For `C = 1`: whether `UU* = Id`, i.e. U lies in the group as well.
    pub in_group: Option<bool>,
}

fn tol_for<T: Scalar>(u: &MatF<T>) -> f64 {
    NUMERIC_TOL * u.frob_sqr().to_f64().max(1.0)
}

fn require_skew<T: Scalar>(u: &MatF<T>) -> Result<()> {
    if !u.is_skew_hermitian(tol_for(u)) {
        return Err(Error::Precondition("U is not skew-Hermitian".into()));
    }
    Ok(())
}

/// Returns a certificate iff `U²` is a nonpositive real multiple of `Id`.
pub fn constant_length_test<T: Scalar>(u: &MatF<T>) -> Result<Option<KillingCertificate<T>>> {
    require_skew(u)?;
    let tol = tol_for(u);
    let sq = u.mul(u)?;
    let Some(c) = sq.is_scalar_multiple_of_identity(tol) else {
        return Ok(None);
    };
    if !c.coeffs()[1..].iter().all(|x| x.is_negligible(tol)) {
        return Ok(None);
    }
    let c_squared = -c.re().clone();
    let mut scaled = MatF::identity(u.tag(), u.n())?.scale(&c_squared);
    scaled = sq.add(&scaled)?;
    let residual = if T::EXACT { 0.0 } else { scaled.frob_norm() };
    let in_group = if (c_squared.clone() - T::one()).is_negligible(tol) {
        let id = MatF::identity(u.tag(), u.n())?;
        Some(u.mul(&u.adjoint())?.sub(&id)?.is_negligible(tol))
    } else {
        None
    };
    Ok(Some(KillingCertificate {
        u: u.clone(),
        c: c_squared.to_f64().max(0.0).sqrt(),
        c_squared: c_squared.to_string(),
        residual,
        in_group,
    }))
}

/// Matrix with entries `x_i q ȳ_j`.
fn outer<T: Scalar>(tag: FieldTag, x: &[HyperComplex<T>], q: &HyperComplex<T>, y: &[HyperComplex<T>]) -> Result<MatF<T>> {
    let n = x.len();
    let mut m = MatF::zeros(tag, n)?;
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let xq = hc_mul(xi, q)?;
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                m.set(i, j, &hc_mul(&xq, &yj.conj())?)?;
            }
        }
    }
    Ok(m)
}

fn norm_sqr<T: Scalar>(v: &[HyperComplex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr())
}

fn exact_sqrt<T: Scalar>(x: &T, what: &str) -> Result<T> {
    x.sqrt()
        .ok_or_else(|| Error::NotExact(format!("{what} = √({x}) is irrational; use numeric mode")))
}

/// A `g ∈ U_𝔽(n)` with `g e₁ = a` for a unit vector `a`, acting as the
/// identity on the orthocomplement of `span{e₁, a}`.
///
/// With `a = e₁α + b̂β`, `β = |b| ≥ 0`, the 2×2 block on `(e₁, b̂)` is
/// `[[α, -β], [β, ᾱ]]`.
pub fn two_frame_rotation<T: Scalar>(a: &[HyperComplex<T>]) -> Result<MatF<T>> {
    let n = a.len();
    let tag = a.first().map(HyperComplex::tag).ok_or_else(|| Error::Dimension("empty vector".into()))?;
    let tol = 1e-12;
    if !(norm_sqr(a) - T::one()).is_negligible(tol) {
        return Err(Error::Precondition("rotation target is not a unit vector".into()));
    }
    let alpha = a[0].clone();
    let mut b = a.to_vec();
    b[0] = HyperComplex::zero(tag);
    let beta_sq = norm_sqr(&b);
    let mut g = MatF::identity(tag, n)?;
    g.set(0, 0, &alpha)?;
    if beta_sq.is_negligible(tol) {
        return Ok(g);
    }
    let beta = exact_sqrt(&beta_sq, "|b|")?;
    let bh: Vec<HyperComplex<T>> = b.iter().map(|x| x.scale(&(T::one() / beta.clone()))).collect();
    let mut e1 = vec![HyperComplex::zero(tag); n];
    e1[0] = HyperComplex::real(tag, T::one());
    let one = HyperComplex::real(tag, T::one());
    let beta_h = HyperComplex::real(tag, beta);
    g = g.sub(&outer(tag, &bh, &one, &bh)?)?;
    g = g.add(&outer(tag, &bh, &beta_h, &e1)?)?;
    g = g.sub(&outer(tag, &e1, &beta_h, &bh)?)?;
    g = g.add(&outer(tag, &bh, &alpha.conj(), &bh)?)?;
    Ok(g)
}

fn check_tangent<T: Scalar>(tag: FieldTag, n: usize, v: &[HyperComplex<T>]) -> Result<()> {
    if v.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "tangent vector has {} entries, expected {}",
            v.len(),
            n + 1
        )));
    }
    for x in v {
        if x.tag() != tag {
            return Err(Error::TagMismatch(x.tag(), tag));
        }
    }
    if !v[0].re().is_zero() {
        return Err(Error::Precondition(format!(
            "not tangent at x0: Re v₁ = {} ≠ 0",
            v[0].re()
        )));
    }
    Ok(())
}

/// `U = [[u₁, -u*], [u, W]]` for a given lower-right block `W`.
fn assemble<T: Scalar>(v: &[HyperComplex<T>], w: &MatF<T>) -> Result<MatF<T>> {
    let n1 = v.len();
    let mut u = w.embed(n1, 1)?;
    u.set(0, 0, &v[0])?;
    for (j, x) in v.iter().enumerate().skip(1) {
        u.set(j, 0, x)?;
        u.set(0, j, &x.conj().neg())?;
    }
    Ok(u)
}

/// `Ad(g)(B(u₁)) = -a u₁ a*` with `a = u/|u|`; `B(u₁)` itself when `u = 0`.
fn corner_block<T: Scalar>(tag: FieldTag, u1: &HyperComplex<T>, u: &[HyperComplex<T>]) -> Result<MatF<T>> {
    let n = u.len();
    let us = norm_sqr(u);
    if us.is_zero() {
        let mut w = MatF::zeros(tag, n)?;
        w.set(0, 0, &u1.neg())?;
        return Ok(w);
    }
    Ok(outer(tag, u, &u1.neg(), u)?.scale(&(T::one() / us)))
}

/// Constant-length `U ∈ u_𝔽(n+1)` with `Ux0 = v` and `C = ‖v‖`.
///
/// Accepts `Unitary` families (ℝ needs `n+1` even) and `SpecialUnitary` with
/// `n+1` even, where the alternating completion is traceless. In rational
/// mode this fails with `NotExact` when `|u|`, `|u₂…|` or `‖v‖` is irrational.
pub fn cw_field_for_vector<T: Scalar>(family: Family, v: &[HyperComplex<T>]) -> Result<MatF<T>> {
    let (tag, n) = match family {
        Family::Unitary { field, n } => (field, n),
        Family::SpecialUnitary { n } => (FieldTag::C, n),
        other => {
            return Err(Error::Precondition(format!(
                "no matrix Clifford–Wolf construction for {other}"
            )))
        }
    };
    family.validate()?;
    check_tangent(tag, n, v)?;
    let even_needed = tag == FieldTag::R || matches!(family, Family::SpecialUnitary { .. });
    if even_needed && (n + 1) % 2 != 0 {
        return Err(Error::Precondition(format!(
            "{family}: unit Killing fields need n+1 even, got n+1 = {}",
            n + 1
        )));
    }
    if tag == FieldTag::R && !v[0].is_zero() {
        return Err(Error::Precondition("over ℝ the first coordinate must vanish".into()));
    }
    let (u1, u) = (&v[0], &v[1..]);
    let us = norm_sqr(u);
    if us.is_zero() && u1.is_zero() {
        return MatF::zeros(tag, n + 1);
    }
    // case 3: diag(u₁, -u₁, u₁, …)
    if us.is_zero() {
        let diag: Vec<HyperComplex<T>> = (0..n)
            .map(|k| if k % 2 == 0 { u1.neg() } else { u1.clone() })
            .collect();
        return assemble(v, &MatF::diagonal(tag, &diag)?);
    }
    let mut w = corner_block(tag, u1, u)?;
    if n >= 2 {
        let r = exact_sqrt(&(us.clone() + u1.norm_sqr()), "‖v‖")?;
        let len = exact_sqrt(&us, "|u|")?;
        let a: Vec<HyperComplex<T>> = u.iter().map(|x| x.scale(&(T::one() / len.clone()))).collect();
        let g = two_frame_rotation(&a)?;
        let mut j = MatF::zeros(tag, n)?;
        if tag == FieldTag::R {
            for k in (1..n).step_by(2) {
                j.set_coeff(k + 1, k, 0, r.clone());
                j.set_coeff(k, k + 1, 0, -r.clone());
            }
        } else {
            for k in 1..n {
                let sign = if k % 2 == 1 { r.clone() } else { -r.clone() };
                j.set_coeff(k, k, 1, sign);
            }
        }
        w = w.add(&j.conjugate_by(&g)?)?;
    }
    assemble(v, &w)
}

/// `U = X + Y + Ad(g)B(u₁) ∈ su(n+1)` with `Ux0 = v`; a δ-vector for the
/// round metric.
pub fn su_delta_field<T: Scalar>(v: &[HyperComplex<T>], n: usize) -> Result<MatF<T>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    check_tangent(FieldTag::C, n, v)?;
    let w = corner_block(FieldTag::C, &v[0], &v[1..])?;
    assemble(v, &w)
}

/// Accepted δ-vector at `x0` for the round metric: `-U² = diag(λ², B)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaCertificate<T = Rational> {
    #[serde(skip)]
    pub u: MatF<T>,
    pub lambda: f64,
    /// Smallest eigenvalue of `λ² Id - B`; values within rounding noise of
    /// zero are reported as 0.
    pub psd_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum DeltaOutcome<T = Rational> {
    Accepted(DeltaCertificate<T>),
    Rejected { reason: String, psd_margin: Option<f64> },
}

impl<T> DeltaOutcome<T> {
    pub fn is_accepted(&self) -> bool {
        matches!(self, DeltaOutcome::Accepted(_))
    }
}

/// Margin below which `λ² Id - B` counts as indefinite.
pub const PSD_TOL: f64 = 1e-9;

/// Exact δ-vector criterion at `x0` for the round metric.
pub fn round_delta_test<T: Scalar>(u: &MatF<T>) -> Result<DeltaOutcome<T>> {
    require_skew(u)?;
    let tol = tol_for(u);
    let s = u.mul(u)?.neg();
    for j in 1..s.n() {
        if !s.get(0, j).coeffs().iter().all(|c| c.is_negligible(tol)) {
            return Ok(DeltaOutcome::Rejected {
                reason: format!("-U² is not block diagonal (entry (1,{}) ≠ 0)", j + 1),
                psd_margin: None,
            });
        }
    }
    let lambda_sq = s.get(0, 0).re().clone();
    let b = s.block(1, s.n() - 1)?;
    let mut m = MatF::identity(u.tag(), b.n())?.scale(&lambda_sq).sub(&b)?.to_f64().realify();
    // symmetrize away rounding noise before the eigen solver
    m = m.add(&m.adjoint())?.scale(&0.5);
    let margin = sym_eigvals(&m)?.first().copied().unwrap_or(f64::INFINITY);
    // a zero eigenvalue comes back as ±1e-14 or so
    let noise = PSD_TOL * lambda_sq.to_f64().abs().max(1.0);
    let margin = if margin.abs() <= noise { 0.0 } else { margin };
    let lambda = lambda_sq.to_f64().max(0.0).sqrt();
    if margin < -PSD_TOL {
        return Ok(DeltaOutcome::Rejected {
            reason: format!("λ² Id - B has eigenvalue {margin:.3e} < 0"),
            psd_margin: Some(margin),
        });
    }
    Ok(DeltaOutcome::Accepted(DeltaCertificate {
        u: u.clone(),
        lambda,
        psd_margin: margin,
    }))
}

/// Component label of a unit field in `u(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitLabel {
    /// Multiplicity of the eigenvalue `+i`.
    pub l: usize,
    /// `α = 2l/(n+1) - 1`.
    pub alpha: String,
}

/// `l` from `Im tr U = 2l - (n+1)`, cross-checked against the spectrum of
/// the realified Hermitian matrix `iU`.
pub fn orbit_label_u<T: Scalar>(u: &MatF<T>) -> Result<OrbitLabel> {
    if u.tag() != FieldTag::C {
        return Err(Error::UnsupportedField(u.tag(), "orbit labels are defined for u(n+1)".into()));
    }
    let cert = constant_length_test(u)?.ok_or_else(|| Error::Precondition("U is not of constant length".into()))?;
    if cert.in_group != Some(true) {
        return Err(Error::Precondition(format!("U is not a unit field (C² = {})", cert.c_squared)));
    }
    let n1 = u.n();
    let im_tr = u.trace().coeffs()[1].to_f64();
    let twice = im_tr + n1 as f64;
    let l = twice.round();
    if (twice - l).abs() > 1e-6 || l < 0.0 || !(l as usize).is_multiple_of(2) {
        return Err(Error::Numeric(format!("Im tr U = {im_tr} is not an integer of the right parity")));
    }
    let l = l as usize / 2;
    // iU is Hermitian with eigenvalue -1 exactly on the +i eigenspace of U
    let i = HyperComplex::new(FieldTag::C, vec![0.0, 1.0])?;
    let iu = u.to_f64().mul(&MatF::diagonal(FieldTag::C, &vec![i; n1])?)?;
    let eig = sym_eigvals(&iu.realify())?;
    let count = eig.iter().filter(|&&x| (x + 1.0).abs() < 1e-6).count();
    if count != 2 * l {
        return Err(Error::Numeric(format!(
            "trace gives l = {l} but the spectrum has {} eigenvalues +i",
            count / 2
        )));
    }
    let alpha = Rational::new((2 * l as i64).into(), (n1 as i64).into()) - Rational::from_integer(1.into());
    Ok(OrbitLabel {
        l,
        alpha: alpha.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{dyadic_vec, gaussian_vec, seeded};
    use crate::algebra::{q, qi, Zero};

    fn c(re: Rational, im: Rational) -> HyperComplex<Rational> {
        HyperComplex::new(FieldTag::C, vec![re, im]).unwrap()
    }

    fn cf(re: f64, im: f64) -> HyperComplex<f64> {
        HyperComplex::new(FieldTag::C, vec![re, im]).unwrap()
    }

    fn assert_field<T: Scalar>(u: &MatF<T>, v: &[HyperComplex<T>]) {
        let col = u.first_column();
        let want: Vec<T> = v.iter().flat_map(|x| x.coeffs().to_vec()).collect();
        for (a, b) in col.iter().zip(&want) {
            assert!((a.clone() - b.clone()).is_negligible(1e-12), "Ux0 ≠ v");
        }
        let cert = constant_length_test(u).unwrap().expect("constant length");
        let vv: f64 = v.iter().map(|x| x.norm_sqr().to_f64()).sum();
        assert!((cert.c * cert.c - vv).abs() < 1e-10);
        assert!(cert.residual < 1e-10);
    }

    #[test]
    fn diag_i_has_unit_length() {
        let u = MatF::diagonal(FieldTag::C, &[c(qi(0), qi(1)), c(qi(0), qi(1)), c(qi(0), qi(1))]).unwrap();
        let cert = constant_length_test(&u).unwrap().unwrap();
        assert_eq!(cert.c_squared, "1");
        assert_eq!(cert.in_group, Some(true));
        assert_eq!(cert.residual, 0.0);
    }

    #[test]
    fn real_blocks_have_length_u2() {
        let r = MatF::from_real(4, &[qi(0), qi(-3), qi(0), qi(0), qi(3), qi(0), qi(0), qi(0), qi(0), qi(0), qi(0), qi(-3), qi(0), qi(0), qi(3), qi(0)]).unwrap();
        let cert = constant_length_test(&r).unwrap().unwrap();
        assert_eq!(cert.c, 3.0);
        assert_eq!(cert.in_group, None);
    }

    #[test]
    fn non_scalar_square_is_absent() {
        let u = MatF::diagonal(FieldTag::C, &[c(qi(0), qi(1)), c(qi(0), qi(-1)), c(qi(0), qi(0))]).unwrap();
        assert!(constant_length_test(&u).unwrap().is_none());
        let h = MatF::diagonal(FieldTag::C, &[c(qi(1), qi(0))]).unwrap();
        assert!(constant_length_test(&h).is_err());
    }

    #[test]
    fn case_1a_real_rotation() {
        let f = Family::parse("so", 3).unwrap();
        let v: Vec<HyperComplex<Rational>> = [0, 5, 0, 0]
            .iter()
            .map(|&x| HyperComplex::real(FieldTag::R, qi(x)))
            .collect();
        let u = cw_field_for_vector(f, &v).unwrap();
        assert_field(&u, &v);
        assert_eq!(u.get(3, 2).re(), &qi(5));
        assert_eq!(u.get(2, 3).re(), &qi(-5));
        assert!(cw_field_for_vector(Family::parse("so", 2).unwrap(), &v[..3]).is_err());
    }

    #[test]
    fn case_3_diagonal() {
        let f = Family::parse("u", 3).unwrap();
        let mut v = vec![c(qi(0), qi(0)); 4];
        v[0] = c(qi(0), qi(2));
        let u = cw_field_for_vector(f, &v).unwrap();
        for k in 0..4 {
            let want = if k % 2 == 0 { 2 } else { -2 };
            assert_eq!(u.get(k, k), c(qi(0), qi(want)));
        }
        assert_field(&u, &v);
    }

    #[test]
    fn pythagorean_vector_is_exact() {
        // |u| = 5, |u₂…| = 4, ‖v‖ = 13
        let f = Family::parse("u", 3).unwrap();
        let v = vec![c(qi(0), qi(12)), c(qi(3), qi(0)), c(qi(0), qi(4)), c(qi(0), qi(0))];
        let u = cw_field_for_vector(f, &v).unwrap();
        assert_field(&u, &v);
        let sq = u.mul(&u).unwrap();
        assert_eq!(sq, MatF::identity(FieldTag::C, 4).unwrap().scale(&qi(-169)));
    }

    #[test]
    fn irrational_norm_is_not_exact() {
        let f = Family::parse("u", 2).unwrap();
        let v = vec![c(qi(0), qi(1)), c(qi(1), qi(0)), c(qi(0), qi(0))];
        assert!(matches!(cw_field_for_vector(f, &v), Err(Error::NotExact(_))));
        let vf: Vec<_> = v.iter().map(|x| x.map(|c| c.to_f64())).collect();
        let u = cw_field_for_vector(f, &vf).unwrap();
        assert_field(&u, &vf);
    }

    #[test]
    fn random_fields_all_fields() {
        let mut rng = seeded(11);
        for name in ["so", "u", "sp", "su"] {
            for n in [1usize, 2, 3, 5] {
                let f = Family::parse(name, n).unwrap();
                let tag = f.vector_field();
                let even = name == "so" || name == "su";
                if even && (n + 1) % 2 != 0 {
                    continue;
                }
                for _ in 0..10 {
                    let g = gaussian_vec(&mut rng, (n + 1) * tag.dim());
                    let mut v: Vec<HyperComplex<f64>> = g
                        .chunks(tag.dim())
                        .map(|ch| HyperComplex::new(tag, ch.to_vec()).unwrap())
                        .collect();
                    let mut c0 = v[0].coeffs().to_vec();
                    c0[0] = 0.0;
                    v[0] = HyperComplex::new(tag, c0).unwrap();
                    let u = cw_field_for_vector(f, &v).unwrap();
                    assert_field(&u, &v);
                    if name == "su" {
                        let tr = u.trace();
                        assert!(tr.coeffs().iter().all(|x| x.abs() < 1e-10), "trace {tr:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_is_unitary() {
        let mut rng = seeded(3);
        for tag in [FieldTag::R, FieldTag::C, FieldTag::H] {
            let g = gaussian_vec(&mut rng, 4 * tag.dim());
            let nrm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a: Vec<HyperComplex<f64>> = g
                .chunks(tag.dim())
                .map(|ch| HyperComplex::new(tag, ch.iter().map(|x| x / nrm).collect()).unwrap())
                .collect();
            let r = two_frame_rotation(&a).unwrap();
            let id = MatF::identity(tag, 4).unwrap();
            assert!(r.mul(&r.adjoint()).unwrap().max_abs_diff(&id) < 1e-12);
            let col = r.first_column();
            let want: Vec<f64> = a.iter().flat_map(|x| x.coeffs().to_vec()).collect();
            assert!(col.iter().zip(&want).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }

    #[test]
    fn su_delta_aligned_case() {
        let v = vec![c(qi(0), qi(2)), c(qi(3), qi(0)), c(qi(0), qi(0)), c(qi(0), qi(0))];
        let u = su_delta_field(&v, 3).unwrap();
        assert!(u.trace().is_zero());
        let s = u.mul(&u).unwrap().neg();
        let want = MatF::diagonal(
            FieldTag::C,
            &[c(qi(13), qi(0)), c(qi(13), qi(0)), c(qi(0), qi(0)), c(qi(0), qi(0))],
        )
        .unwrap();
        assert_eq!(s, want);
        assert!(round_delta_test(&u).unwrap().is_accepted());
    }

    #[test]
    fn su_delta_without_corner() {
        let v = vec![c(qi(0), qi(0)), c(qi(0), qi(0)), c(q(3, 5), qi(0)), c(qi(0), q(4, 5))];
        let u = su_delta_field(&v, 3).unwrap();
        let DeltaOutcome::Accepted(cert) = round_delta_test(&u).unwrap() else {
            panic!("rejected")
        };
        assert!((cert.lambda - 1.0).abs() < 1e-12);
        // C = |u| on the plane spanned by x0 and u, zero elsewhere
        let sq = u.mul(&u).unwrap().neg().to_f64();
        let eig = sym_eigvals(&sq.realify()).unwrap();
        assert!(eig.iter().filter(|x| x.abs() < 1e-12).count() == 4);
        assert!(eig.iter().filter(|x| (*x - 1.0).abs() < 1e-12).count() == 4);
    }

    #[test]
    fn su_delta_random_exact() {
        let mut rng = seeded(21);
        for n in 1..=5 {
            for _ in 0..5 {
                let co: Vec<Rational> = dyadic_vec(&mut rng, 2 * (n + 1), 4, 3);
                let mut v: Vec<HyperComplex<Rational>> =
                    co.chunks(2).map(|ch| c(ch[0].clone(), ch[1].clone())).collect();
                v[0] = c(Rational::zero(), v[0].coeffs()[1].clone());
                let u = su_delta_field(&v, n).unwrap();
                assert!(u.trace().is_zero());
                let col = u.first_column();
                let want: Vec<Rational> = v.iter().flat_map(|x| x.coeffs().to_vec()).collect();
                assert_eq!(col, want);
                let DeltaOutcome::Accepted(cert) = round_delta_test(&u).unwrap() else {
                    panic!("rejected")
                };
                assert!(cert.psd_margin >= 0.0);
            }
        }
    }

    #[test]
    fn delta_test_examples() {
        let u = MatF::diagonal(FieldTag::C, &[cf(0.0, 2.0), cf(0.0, 1.0), cf(0.0, 0.0)]).unwrap();
        let DeltaOutcome::Accepted(cert) = round_delta_test(&u).unwrap() else {
            panic!("rejected")
        };
        assert_eq!(cert.lambda, 2.0);
        assert!((cert.psd_margin - 3.0).abs() < 1e-12);
        let w = MatF::diagonal(FieldTag::C, &[cf(0.0, 1.0), cf(0.0, 2.0), cf(0.0, 0.0)]).unwrap();
        assert!(!round_delta_test(&w).unwrap().is_accepted());
        let unit = MatF::diagonal(FieldTag::C, &[cf(0.0, 1.0), cf(0.0, -1.0)]).unwrap();
        let DeltaOutcome::Accepted(cert) = round_delta_test(&unit).unwrap() else {
            panic!("rejected")
        };
        assert!(cert.psd_margin.abs() < 1e-12);
    }

    #[test]
    fn orbit_labels() {
        let i = c(qi(0), qi(1));
        let mi = c(qi(0), qi(-1));
        let u = MatF::diagonal(FieldTag::C, &vec![i.clone(); 4]).unwrap();
        let lab = orbit_label_u(&u).unwrap();
        assert_eq!((lab.l, lab.alpha.as_str()), (4, "1"));
        let u = MatF::diagonal(FieldTag::C, &[i.clone(), i.clone(), mi.clone(), mi.clone()]).unwrap();
        let lab = orbit_label_u(&u).unwrap();
        assert_eq!((lab.l, lab.alpha.as_str()), (2, "0"));
        let u = MatF::diagonal(FieldTag::C, &[i.clone(), mi.clone(), mi]).unwrap();
        assert_eq!(orbit_label_u(&u).unwrap().alpha, "-1/3");
        let twice = MatF::diagonal(FieldTag::C, &[c(qi(0), qi(2))]).unwrap();
        assert!(orbit_label_u(&twice).is_err());
    }
}
