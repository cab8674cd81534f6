//! Support functions of ellipsoids, dual p-means and the induced
//! combination of diagonal invariant metrics.
//!
//! The body `E = {v : (v, Av) ≤ 1}` has support function
//! `h(u) = √(u·A⁻¹u)`, and the dual 2-mean of two such bodies is again an
//! ellipsoid, with `A = ((1-θ)A₁⁻¹ + θA₂⁻¹)⁻¹`. On diagonal metrics this is
//! a componentwise harmonic interpolation of the coefficients.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{FieldTag, MatF, Rational, Scalar};
use crate::error::{Error, Result};
use crate::homspace::Family;

/// Largest condition number accepted when inverting.
pub const MAX_CONDITION: f64 = 1e12;

const SYMMETRY_TOL: f64 = 1e-12;

/// `A⁻¹` through the symmetric eigendecomposition.
fn spd_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = a.clone().symmetric_eigen();
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &x| (lo.min(x), hi.max(x.abs())));
    if lo <= 0.0 {
        return Err(Error::Precondition(format!(
            "matrix is not positive definite (smallest eigenvalue {lo:e})"
        )));
    }
    if hi / lo > MAX_CONDITION {
        return Err(Error::Numeric(format!("condition number {:.3e} exceeds {MAX_CONDITION:e}", hi / lo)));
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x));
    let inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
    Ok((&inv + inv.transpose()) * 0.5)
}

/// Ellipsoid `{v : (v, Av) ≤ 1}` with `A` symmetric positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    a: DMatrix<f64>,
    a_inv: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(a: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || a.nrows() == 0 {
            return Err(Error::Shape(format!("{}×{} is not a nonempty square matrix", a.nrows(), a.ncols())));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > SYMMETRY_TOL * a.amax().max(1.0) {
            return Err(Error::Precondition(format!("matrix is not symmetric (defect {asym:e})")));
        }
        let a_inv = spd_inverse(&a)?;
        Ok(Ellipsoid { a, a_inv })
    }

    pub fn from_matf(m: &MatF<f64>) -> Result<Self> {
        if m.tag() != FieldTag::R {
            return Err(Error::UnsupportedField(m.tag(), "ellipsoids are real".into()));
        }
        Self::new(DMatrix::from_row_slice(m.n(), m.n(), m.data()))
    }

    pub fn to_matf(&self) -> MatF<f64> {
        let n = self.dim();
        let vals: Vec<f64> = (0..n * n).map(|k| self.a[(k / n, k % n)]).collect();
        MatF::from_real(n, &vals).expect("square")
    }

    /// Ball of radius `r`.
    pub fn ball(m: usize, r: f64) -> Result<Self> {
        Self::new(DMatrix::identity(m, m) / (r * r))
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    /// Orthogonal projection onto the column span of `p` (orthonormal
    /// columns), written in those coordinates: `(PᵀA⁻¹P)⁻¹`.
    pub fn project(&self, p: &DMatrix<f64>) -> Result<Self> {
        if p.nrows() != self.dim() {
            return Err(Error::Dimension(format!("projection from ℝ^{} on ℝ^{}", p.nrows(), self.dim())));
        }
        let gram = p.transpose() * p;
        let defect = (&gram - DMatrix::identity(p.ncols(), p.ncols())).amax();
        if defect > 1e-10 {
            return Err(Error::Precondition(format!("projection columns are not orthonormal (defect {defect:e})")));
        }
        let m = p.transpose() * &self.a_inv * p;
        Self::new(spd_inverse(&((&m + m.transpose()) * 0.5))?)
    }
}

/// `h_E(u) = √(u·A⁻¹u)`.
pub fn support(e: &Ellipsoid, u: &[f64]) -> Result<f64> {
    if u.len() != e.dim() {
        return Err(Error::Dimension(format!("vector in ℝ^{} for ellipsoid in ℝ^{}", u.len(), e.dim())));
    }
    let v = nalgebra::DVector::from_column_slice(u);
    Ok(v.dot(&(&e.a_inv * &v)).max(0.0).sqrt())
}

/// `M_p(h₁, h₂) = ((1-θ)h₁^p + θh₂^p)^{1/p}`.
pub fn dual_p_mean_support(h1: f64, h2: f64, p: f64, theta: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Precondition(format!("p = {p} < 1")));
    }
    if !(h1 >= 0.0 && h2 >= 0.0) {
        return Err(Error::Precondition("support values must be nonnegative".into()));
    }
    check_theta(theta)?;
    Ok(((1.0 - theta) * h1.powf(p) + theta * h2.powf(p)).powf(1.0 / p))
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Precondition(format!("θ = {theta} outside [0, 1]")));
    }
    Ok(())
}

/// The dual 2-mean `((1-θ)A₁⁻¹ + θA₂⁻¹)⁻¹`.
pub fn dual_2_mean_ellipsoid(e1: &Ellipsoid, e2: &Ellipsoid, theta: f64) -> Result<Ellipsoid> {
    if e1.dim() != e2.dim() {
        return Err(Error::Dimension(format!("ellipsoids in ℝ^{} and ℝ^{}", e1.dim(), e2.dim())));
    }
    check_theta(theta)?;
    let m = &e1.a_inv * (1.0 - theta) + &e2.a_inv * theta;
    Ellipsoid::new(spd_inverse(&m)?)
}

/// Diagonal coefficients `x₁, …, x_l` of `Σ x_i⟨·,·⟩|𝔭_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricParams<T = Rational>(Vec<T>);

impl<T: Scalar> MetricParams<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Precondition("no metric coefficients".into()));
        }
        if let Some(bad) = x.iter().find(|v| **v <= T::zero()) {
            return Err(Error::Precondition(format!("metric coefficient {bad} is not positive")));
        }
        Ok(MetricParams(x))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn scale(&self, alpha: &T) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v.clone() * alpha.clone()).collect())
    }

    /// Coefficients of the family's metric at `(t, s)`, ordered as
    /// [`Family::p_parts`].
    pub fn for_family(family: Family, t: &T, s: &T) -> Result<Self> {
        let x = family
            .p_parts()
            .iter()
            .map(|&p| Ok(family.coefficient(p)?.map(T::from_rational).eval(t, s)))
            .collect::<Result<Vec<T>>>()?;
        Self::new(x)
    }

    /// Inverse of [`MetricParams::for_family`]: recovers `(t, s)`.
    pub fn family_ts(&self, family: Family) -> Result<(T, T)> {
        let parts = family.p_parts();
        if parts.len() != self.0.len() {
            return Err(Error::Dimension(format!(
                "{family} has {} metric coefficients, got {}",
                parts.len(),
                self.0.len()
            )));
        }
        let (mut t, mut s) = (None, None);
        for (&p, x) in parts.iter().zip(&self.0) {
            let c = family.coefficient(p)?.map(T::from_rational);
            if !c.ct.is_zero() {
                t = Some(x.clone() / c.ct.clone());
            } else if !c.cs.is_zero() {
                s = Some(x.clone() / c.cs.clone());
            } else if !(x.clone() - c.c0.clone()).is_negligible(1e-12) {
                return Err(Error::Precondition(format!(
                    "coefficient on {p} is {x}, but {family} fixes it to {}",
                    c.c0
                )));
            }
        }
        let t = t.ok_or_else(|| Error::Precondition(format!("{family} has no metric parameter")))?;
        let s = s.unwrap_or_else(|| t.clone());
        Ok((t, s))
    }
}

/// Componentwise `((1-θ)x⁻¹ + θy⁻¹)⁻¹`.
pub fn combine_metrics<T: Scalar>(x: &MetricParams<T>, y: &MetricParams<T>, theta: &T) -> Result<MetricParams<T>> {
    if x.0.len() != y.0.len() {
        return Err(Error::Dimension(format!("{} vs {} coefficients", x.0.len(), y.0.len())));
    }
    check_theta(theta.to_f64())?;
    let one = T::one();
    MetricParams::new(
        x.0.iter()
            .zip(&y.0)
            .map(|(a, b)| {
                one.clone() / ((one.clone() - theta.clone()) / a.clone() + theta.clone() / b.clone())
            })
            .collect(),
    )
}

/// The dual metric: componentwise inverse.
pub fn dual_params<T: Scalar>(x: &MetricParams<T>) -> Result<MetricParams<T>> {
    MetricParams::new(x.0.iter().map(|v| T::one() / v.clone()).collect())
}

/// `θ = rγ/((1-r)β + rγ)`: the weight for which combining `β` with `γ`
/// gives `(1-r)β + rγ`.
pub fn theta_for_linear<T: Scalar>(beta: &T, gamma: &T, r: &T) -> Result<T> {
    if *beta <= T::zero() || *gamma <= T::zero() {
        return Err(Error::Precondition("β and γ must be positive".into()));
    }
    check_theta(r.to_f64())?;
    let num = r.clone() * gamma.clone();
    Ok(num.clone() / ((T::one() - r.clone()) * beta.clone() + num))
}

/// `s₁ = s(1-t)/(t-(2t-1)s)`, the second parameter of the metric to
/// combine with the round one (`θ = (2t-1)/t`) to reach `μ_{t,s}`.
pub fn s1_for_target<T: Scalar>(t: &T, s: &T) -> Result<T> {
    let half = T::ratio(1, 2);
    if !(*t > half && *t < T::one() && *s > T::zero() && s < t) {
        return Err(Error::Precondition(format!(
            "need 1/2 < t < 1 and 0 < s < t, got t = {t}, s = {s}"
        )));
    }
    let two = T::from_i64(2);
    let den = t.clone() - (two.clone() * t.clone() - T::one()) * s.clone();
    let s1 = s.clone() * (T::one() - t.clone()) / den;
    if !(s1 > T::zero() && s1 < half) {
        return Err(Error::Numeric(format!("s₁ = {s1} fell outside (0, 1/2)")));
    }
    Ok(s1)
}

/// `θ = (2t-1)/t`.
pub fn theta_for_sp_target<T: Scalar>(t: &T) -> T {
    (T::from_i64(2) * t.clone() - T::one()) / t.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{gaussian_vec, seeded};
    use crate::algebra::{q, qi};
    use rand::Rng;

    fn diag(v: &[f64]) -> Ellipsoid {
        Ellipsoid::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))).unwrap()
    }

    /// max (u, v) over a mesh of the boundary `v = A^{-1/2} w`, `|w| = 1`.
    fn mesh_support(e: &Ellipsoid, u: &[f64], points: usize) -> f64 {
        let eig = e.matrix().clone().symmetric_eigen();
        let root_inv = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()))
            * eig.eigenvectors.transpose();
        let uu = nalgebra::DVector::from_column_slice(u);
        let mut rng = seeded(77);
        (0..points)
            .map(|k| {
                let w = if e.dim() == 2 {
                    let a = std::f64::consts::TAU * k as f64 / points as f64;
                    nalgebra::DVector::from_column_slice(&[a.cos(), a.sin()])
                } else {
                    let g = nalgebra::DVector::from_vec(gaussian_vec(&mut rng, e.dim()));
                    let n = g.norm();
                    g / n
                };
                uu.dot(&(&root_inv * w))
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn support_examples() {
        let id = diag(&[1.0, 1.0]);
        assert!((support(&id, &[3.0, 4.0]).unwrap() - 5.0).abs() < 1e-14);
        let e = diag(&[4.0, 1.0]);
        assert!((support(&e, &[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-14);
        assert!((mesh_support(&e, &[1.0, 0.0], 10_000) - 0.5).abs() < 1e-6);
        let h = support(&e, &[0.3, -0.7]).unwrap();
        assert!((support(&e, &[0.9, -2.1]).unwrap() - 3.0 * h).abs() < 1e-14);
    }

    #[test]
    fn support_matches_mesh_on_random_ellipsoids() {
        let mut rng = seeded(4);
        for m in [2usize, 3] {
            for _ in 0..5 {
                let g = DMatrix::from_vec(m, m, gaussian_vec(&mut rng, m * m));
                let a = &g * g.transpose() + DMatrix::identity(m, m) * 0.5;
                let e = Ellipsoid::new(a).unwrap();
                let u = gaussian_vec(&mut rng, m);
                let h = support(&e, &u).unwrap();
                let mesh = mesh_support(&e, &u, 10_000);
                assert!(mesh <= h + 1e-12);
                let slack = if m == 2 { 1e-6 } else { 5e-2 };
                assert!(h - mesh < slack * h, "m={m}: {h} vs {mesh}");
            }
        }
    }

    #[test]
    fn support_is_convex() {
        let mut rng = seeded(8);
        let e = diag(&[2.0, 0.5, 3.0]);
        for _ in 0..1000 {
            let (a, b) = (gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 3));
            let th: f64 = rng.random();
            let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (1.0 - th) * x + th * y).collect();
            let lhs = support(&e, &mid).unwrap();
            let rhs = (1.0 - th) * support(&e, &a).unwrap() + th * support(&e, &b).unwrap();
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn p_mean_examples() {
        assert_eq!(dual_p_mean_support(3.0, 4.0, 2.0, 0.0).unwrap(), 3.0);
        let m = dual_p_mean_support(3.0, 4.0, 2.0, 0.5).unwrap();
        assert!((m - 12.5_f64.sqrt()).abs() < 1e-14);
        for p in [1.0, 2.0, 3.5] {
            assert!((dual_p_mean_support(2.5, 2.5, p, 0.3).unwrap() - 2.5).abs() < 1e-14);
        }
        assert!(dual_p_mean_support(1.0, 1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn two_mean_examples() {
        let e = diag(&[3.0, 0.25]);
        let same = dual_2_mean_ellipsoid(&e, &e, 0.4).unwrap();
        assert!((same.matrix() - e.matrix()).amax() < 1e-12);
        let f = diag(&[1.0, 5.0]);
        let one = dual_2_mean_ellipsoid(&e, &f, 1.0).unwrap();
        assert!((one.matrix() - f.matrix()).amax() < 1e-12);
        let g = dual_2_mean_ellipsoid(&diag(&[1.0, 1.0]), &diag(&[0.5, 0.5]), 0.5).unwrap();
        assert!((g.matrix() - DMatrix::identity(2, 2) * (2.0 / 3.0)).amax() < 1e-12);
        assert!(dual_2_mean_ellipsoid(&e, &diag(&[1.0]), 0.5).is_err());
    }

    #[test]
    fn two_mean_support_is_m2() {
        let mut rng = seeded(12);
        let e1 = diag(&[2.0, 0.3, 1.0]);
        let e2 = Ellipsoid::new(DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, 4.0, 0.1, 0.0, 0.1, 0.7])).unwrap();
        for _ in 0..200 {
            let th: f64 = rng.random();
            let u = gaussian_vec(&mut rng, 3);
            let e = dual_2_mean_ellipsoid(&e1, &e2, th).unwrap();
            let want = dual_p_mean_support(support(&e1, &u).unwrap(), support(&e2, &u).unwrap(), 2.0, th).unwrap();
            assert!((support(&e, &u).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn ill_conditioned_is_rejected() {
        assert!(matches!(
            Ellipsoid::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[1.0, 1e-13]))),
            Err(Error::Numeric(_))
        ));
        assert!(Ellipsoid::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0])).is_err());
    }

    #[test]
    fn combine_examples() {
        let x = MetricParams::new(vec![q(1, 2)]).unwrap();
        let y = MetricParams::new(vec![qi(1)]).unwrap();
        let th = theta_for_linear(&q(1, 2), &qi(1), &q(1, 2)).unwrap();
        assert_eq!(th, q(2, 3));
        assert_eq!(combine_metrics(&x, &y, &th).unwrap().values(), &[q(3, 4)]);
        assert_eq!(combine_metrics(&x, &x, &q(1, 3)).unwrap(), x);
    }

    #[test]
    fn combine_sweeps_the_interval() {
        let (b, g) = (q(2, 5), q(7, 3));
        let x = MetricParams::new(vec![b.clone()]).unwrap();
        let y = MetricParams::new(vec![g.clone()]).unwrap();
        let mut prev = None;
        for k in 0..=50 {
            let v = combine_metrics(&x, &y, &q(k, 50)).unwrap().values()[0].clone();
            assert!(v >= b && v <= g);
            if let Some(p) = prev {
                assert!(v > p);
            }
            prev = Some(v);
        }
        assert_eq!(prev, Some(g));
    }

    #[test]
    fn dual_examples() {
        let x = MetricParams::new(vec![qi(1), qi(2)]).unwrap();
        assert_eq!(dual_params(&x).unwrap().values(), &[qi(1), q(1, 2)]);
        assert_eq!(dual_params(&dual_params(&x).unwrap()).unwrap(), x);
        let three = x.scale(&qi(3)).unwrap();
        assert_eq!(dual_params(&three).unwrap(), dual_params(&x).unwrap().scale(&q(1, 3)).unwrap());
        assert!(MetricParams::new(vec![qi(0)]).is_err());
    }

    #[test]
    fn s1_examples() {
        assert_eq!(s1_for_target(&q(3, 4), &q(1, 2)).unwrap(), q(1, 4));
        let near = s1_for_target(&q(3, 4), &q(749_999, 1_000_000)).unwrap();
        assert!(near < q(1, 2) && near > q(499, 1000));
        assert!(s1_for_target(&q(3, 4), &q(3, 4)).is_err());
        assert!(s1_for_target(&q(1, 2), &q(1, 4)).is_err());
    }

    #[test]
    fn s1_round_trip() {
        let f = Family::SpSplit { n: 2 };
        for (t, s) in [(q(3, 4), q(1, 2)), (q(5, 8), q(1, 10)), (q(9, 10), q(8, 9))] {
            let s1 = s1_for_target(&t, &s).unwrap();
            let a = MetricParams::for_family(f, &q(1, 2), &s1).unwrap();
            let b = MetricParams::for_family(f, &qi(1), &qi(1)).unwrap();
            let c = combine_metrics(&a, &b, &theta_for_sp_target(&t)).unwrap();
            assert_eq!(c.family_ts(f).unwrap(), (t, s));
        }
    }

    #[test]
    fn projection_commutes_with_mean() {
        let mut rng = seeded(31);
        let e1 = diag(&[2.0, 0.3, 1.0, 5.0]);
        let e2 = diag(&[0.4, 1.5, 2.5, 1.0]);
        for _ in 0..20 {
            let g = DMatrix::from_vec(4, 2, gaussian_vec(&mut rng, 8));
            let p = g.qr().q();
            let th: f64 = rng.random();
            let a = dual_2_mean_ellipsoid(&e1.project(&p).unwrap(), &e2.project(&p).unwrap(), th).unwrap();
            let b = dual_2_mean_ellipsoid(&e1, &e2, th).unwrap().project(&p).unwrap();
            let ea = a.matrix().clone().symmetric_eigen().eigenvalues;
            let eb = b.matrix().clone().symmetric_eigen().eigenvalues;
            let (mut ea, mut eb): (Vec<f64>, Vec<f64>) = (ea.iter().copied().collect(), eb.iter().copied().collect());
            ea.sort_by(f64::total_cmp);
            eb.sort_by(f64::total_cmp);
            for (x, y) in ea.iter().zip(&eb) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
