//! Necessary conditions for generalized normal homogeneity of the diagonal
//! metrics, evaluated exactly as affine forms in `(t, s)`.
//!
//! Two inequalities are used. For `X ∈ 𝔭₁`, `Y ∈ 𝔭₂` and `V = [[Y,X],X]`:
//!
//! `x₁⟨V_𝔥, V_𝔥⟩ ≥ (x₂ - x₁)⟨V_𝔭₂, V_𝔭₂⟩`
//!
//! and, for a δ-vector `X` and any `U ∈ 𝔤`:
//!
//! `(X, [U,[U,X]]_𝔭) + ([U,X]_𝔭, [U,X]_𝔭) ≤ 0`.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{expm, qi, Affine, FieldTag, HyperComplex, MatF, Rational, Scalar, Zero};
use crate::error::{Error, Result};
use crate::homspace::{metric_inner_affine, DiagonalMetric, Family, Part, ReductiveDecomposition};
use crate::report::{CheckRecord, Verdict};
use crate::spin9;

/// Slack in `holds ⇔ lhs ≥ rhs - HOLD_TOL` for numeric evaluation.
pub const HOLD_TOL: f64 = 1e-10;

/// Slack for Monte-Carlo δ-vector violations.
pub const SAMPLED_TOL: f64 = 1e-8;

/// Condition on `(t, s)` implied by `expr ≥ 0`, `expr = a + b t + c s`.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    TAtMost(Rational),
    TAtLeast(Rational),
    SAtMost(Rational),
    SAtLeast(Rational),
    SAtMostT,
    SAtLeastT,
    Always,
    Never,
    Other(String),
}

impl Threshold {
    pub fn from_form(e: &Affine<Rational>) -> Threshold {
        let z = Rational::zero();
        let (a, b, c) = (&e.c0, &e.ct, &e.cs);
        if b.is_zero() && c.is_zero() {
            return if *a >= z { Threshold::Always } else { Threshold::Never };
        }
        if c.is_zero() {
            let v = -a / b;
            return if *b > z { Threshold::TAtLeast(v) } else { Threshold::TAtMost(v) };
        }
        if b.is_zero() {
            let v = -a / c;
            return if *c > z { Threshold::SAtLeast(v) } else { Threshold::SAtMost(v) };
        }
        if a.is_zero() && *b == -c.clone() {
            return if *b > z { Threshold::SAtMostT } else { Threshold::SAtLeastT };
        }
        Threshold::Other(format!("{e} ≥ 0"))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::TAtMost(v) => write!(f, "t ≤ {v}"),
            Threshold::TAtLeast(v) => write!(f, "t ≥ {v}"),
            Threshold::SAtMost(v) => write!(f, "s ≤ {v}"),
            Threshold::SAtLeast(v) => write!(f, "s ≥ {v}"),
            Threshold::SAtMostT => f.write_str("s ≤ t"),
            Threshold::SAtLeastT => f.write_str("s ≥ t"),
            Threshold::Always => f.write_str("always"),
            Threshold::Never => f.write_str("never"),
            Threshold::Other(s) => f.write_str(s),
        }
    }
}

/// `lhs ≥ rhs` with both sides affine in `(t, s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Inequality {
    pub name: String,
    pub anchor: String,
    pub lhs: Affine<Rational>,
    pub rhs: Affine<Rational>,
}

impl Inequality {
    pub fn threshold(&self) -> Threshold {
        Threshold::from_form(&self.lhs.sub(&self.rhs))
    }

    pub fn holds_exact(&self, t: &Rational, s: &Rational) -> bool {
        self.lhs.eval(t, s) >= self.rhs.eval(t, s)
    }

    pub fn record(&self, t: &Rational, s: &Rational) -> InequalityRecord {
        let (l, r) = (self.lhs.eval(t, s), self.rhs.eval(t, s));
        InequalityRecord {
            name: self.name.clone(),
            lhs: l.to_f64(),
            rhs: r.to_f64(),
            lhs_exact: l.to_string(),
            rhs_exact: r.to_string(),
            holds: l >= r,
            threshold_implied: self.threshold().to_string(),
        }
    }

    /// Numeric evaluation with the `HOLD_TOL` slack.
    pub fn record_f64(&self, t: f64, s: f64) -> InequalityRecord {
        let f = |a: &Affine<Rational>| a.map(|c| c.to_f64()).eval(&t, &s);
        let (l, r) = (f(&self.lhs), f(&self.rhs));
        InequalityRecord {
            name: self.name.clone(),
            lhs: l,
            rhs: r,
            lhs_exact: format!("{l}"),
            rhs_exact: format!("{r}"),
            holds: l >= r - HOLD_TOL,
            threshold_implied: self.threshold().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_exact: String,
    pub rhs_exact: String,
    pub holds: bool,
    pub threshold_implied: String,
}

/// The stored 𝔭-part containing `y` entirely.
fn part_of(d: &ReductiveDecomposition, y: &MatF<Rational>) -> Result<Part> {
    for &p in d.family().p_parts() {
        if !y.is_zero() && d.project(y, p)? == *y {
            return Ok(p);
        }
    }
    Err(Error::Precondition("vector does not lie in a single 𝔭-part".into()))
}

/// Symbolic form of `x₁⟨V_𝔥,V_𝔥⟩ ≥ (x₂-x₁)⟨V_𝔭₂,V_𝔭₂⟩`, `V = [[Y,X],X]`,
/// with the coefficients given explicitly.
pub fn prop22_inequality(
    d: &ReductiveDecomposition,
    x1: &Affine<Rational>,
    x2: &Affine<Rational>,
    x: &MatF<Rational>,
    y: &MatF<Rational>,
) -> Result<Inequality> {
    if d.project(x, Part::P1)? != *x {
        return Err(Error::Precondition("X is not in 𝔭₁".into()));
    }
    let py = part_of(d, y)?;
    if py == Part::P1 {
        return Err(Error::Precondition("Y is not in 𝔭₂".into()));
    }
    let v = y.bracket(x)?.bracket(x)?;
    let vh = d.project(&v, Part::H)?;
    let vp = d.project(&v, py)?;
    let residue = v.sub(&vh)?.sub(&vp)?;
    if !residue.is_zero() {
        return Err(Error::Precondition(format!(
            "[[Y,X],X] has a component outside 𝔥 ⊕ {py} of norm {:e}",
            residue.frob_norm()
        )));
    }
    Ok(Inequality {
        name: format!("prop22[{}]", d.family().name()),
        anchor: "x1<[[Y,X],X]_h,[[Y,X],X]_h> >= (x2-x1)<[[Y,X],X]_p2,[[Y,X],X]_p2>".into(),
        lhs: x1.scale(&vh.inner(&vh)?),
        rhs: x2.sub(x1).scale(&vp.inner(&vp)?),
    })
}

/// `prop22` evaluated under `m`, with `x₁, x₂` the family's coefficients on
/// `𝔭₁` and on the part containing `Y`.
pub fn prop22_check(
    d: &ReductiveDecomposition,
    m: &DiagonalMetric,
    x: &MatF<Rational>,
    y: &MatF<Rational>,
) -> Result<InequalityRecord> {
    let f = d.family();
    let ineq = prop22_inequality(d, &f.coefficient(Part::P1)?, &f.coefficient(part_of(d, y)?)?, x, y)?;
    Ok(ineq.record(m.t(), m.s()))
}

/// `f(W) = (X, [U,[U,W]]_𝔭) + ([U,W]_𝔭, [U,W]_𝔭)` as an affine form.
fn deltal2_form(
    d: &ReductiveDecomposition,
    x: &MatF<Rational>,
    w: &MatF<Rational>,
    u: &MatF<Rational>,
) -> Result<Affine<Rational>> {
    let uw = d.project_p(&u.bracket(w)?)?;
    let uuw = d.project_p(&u.bracket(&u.bracket(w)?)?)?;
    Ok(metric_inner_affine(d, x, &uuw)?.add(&metric_inner_affine(d, &uw, &uw)?))
}

/// `0 ≥ (X,[U,[U,X]]_𝔭) + ([U,X]_𝔭,[U,X]_𝔭)`, i.e. `lhs = 0`, `rhs = f`.
pub fn deltal2_inequality(d: &ReductiveDecomposition, x: &MatF<Rational>, u: &MatF<Rational>) -> Result<Inequality> {
    if d.project_p(x)? != *x {
        return Err(Error::Precondition("X is not in 𝔭".into()));
    }
    Ok(Inequality {
        name: format!("deltal2[{}]", d.family().name()),
        anchor: "(X,[U,[U,X]]_p) + ([U,X]_p,[U,X]_p) <= 0".into(),
        lhs: Affine::constant(qi(0)),
        rhs: deltal2_form(d, x, x, u)?,
    })
}

/// As [`deltal2_inequality`] for `W = X + c·H`, `H ∈ 𝔥` the only direction
/// `w(X)` may take, minimized over `c`. The minimum must be attained at
/// `c = 0` with a constant positive curvature, otherwise the bound is not
/// affine and an error is returned.
pub fn deltal2_centralizer_inequality(
    d: &ReductiveDecomposition,
    x: &MatF<Rational>,
    u: &MatF<Rational>,
    h: &MatF<Rational>,
) -> Result<Inequality> {
    if d.project(h, Part::H)? != *h {
        return Err(Error::Precondition("centralizer direction is not in 𝔥".into()));
    }
    let at = |c: i64| -> Result<Affine<Rational>> {
        let mut w = x.clone();
        w.axpy(&qi(c), h)?;
        deltal2_form(d, x, &w, u)
    };
    let (f0, fp, fm) = (at(0)?, at(1)?, at(-1)?);
    let half = Rational::new(1.into(), 2.into());
    let lin = fp.sub(&fm).scale(&half);
    let quad = fp.add(&fm).scale(&half).sub(&f0);
    if !lin.is_zero() || !quad.ct.is_zero() || !quad.cs.is_zero() || quad.c0 <= Rational::zero() {
        return Err(Error::Precondition(format!(
            "minimum over the centralizer is not affine (linear {lin}, quadratic {quad})"
        )));
    }
    Ok(Inequality {
        name: format!("deltal2-centralizer[{}]", d.family().name()),
        anchor: "min_c (X,[U,[U,X+cH]]_p) + ([U,X+cH]_p,[U,X+cH]_p) <= 0".into(),
        lhs: Affine::constant(qi(0)),
        rhs: f0,
    })
}

pub fn deltal2_check(
    d: &ReductiveDecomposition,
    m: &DiagonalMetric,
    x: &MatF<Rational>,
    u: &MatF<Rational>,
) -> Result<InequalityRecord> {
    Ok(deltal2_inequality(d, x, u)?.record(m.t(), m.s()))
}

fn e_unit(tag: FieldTag, size: usize, entries: &[(usize, usize, usize, i64)]) -> MatF<Rational> {
    let mut m = MatF::zeros(tag, size).expect("associative");
    for &(i, j, c, v) in entries {
        m.set_coeff(i, j, c, qi(v));
    }
    m
}

/// The `u(n+1)` witnesses `(X, Y, Z)`: `X = [[0,i],[i,0]] ⊕ 0`,
/// `Y = diag(i,0,…)`, `Z = diag(0,i,0,…)`, with `[[Y,X],X] = -2Y + 2Z`.
pub fn u_witness(tag: FieldTag, n: usize) -> (MatF<Rational>, MatF<Rational>, MatF<Rational>) {
    let s = n + 1;
    (
        e_unit(tag, s, &[(0, 1, 1, 1), (1, 0, 1, 1)]),
        e_unit(tag, s, &[(0, 0, 1, 1)]),
        e_unit(tag, s, &[(1, 1, 1, 1)]),
    )
}

/// The `Sp(n+1)×Sp(1)` witnesses `(X, Y)` and `(U₁, U₂, U₃)` with
/// `[[Y,X],X] = -U₁ - U₂ + 2U₃`.
pub fn sp_sp1_witness(n: usize) -> (MatF<Rational>, MatF<Rational>, [MatF<Rational>; 3]) {
    let (h, s, e) = (FieldTag::H, n + 2, n + 1);
    let x = e_unit(h, s, &[(0, 1, 0, 1), (1, 0, 0, -1)]);
    let y = e_unit(h, s, &[(0, 0, 1, 1), (e, e, 1, -1)]);
    let u1 = y.clone();
    let u2 = e_unit(h, s, &[(0, 0, 1, 1), (e, e, 1, 1)]);
    let u3 = e_unit(h, s, &[(1, 1, 1, 1)]);
    (x, y, [u1, u2, u3])
}

fn to_theta(w: &crate::clifford::Bivector<Rational>) -> Result<MatF<Rational>> {
    spin9::embedding().theta(w)
}

/// All symbolic necessary conditions used for a family.
pub fn family_inequalities(family: Family) -> Result<Vec<Inequality>> {
    let d = ReductiveDecomposition::<Rational>::build(family)?;
    let one = Affine::constant(qi(1));
    let mut out = Vec::new();
    match family {
        Family::Unitary { field: FieldTag::R, .. } => {}
        Family::Unitary { field, n } => {
            let (x, y, _) = u_witness(field, n);
            out.push(prop22_inequality(&d, &one, &Affine::t(qi(2)), &x, &y)?);
            if field == FieldTag::H {
                let xx = e_unit(field, n + 1, &[(0, 0, 1, 1)]);
                let u = e_unit(field, n + 1, &[(1, 0, 0, 1), (0, 1, 0, -1)]);
                out.push(deltal2_inequality(&d, &xx, &u)?);
            }
        }
        Family::SpecialUnitary { n } => {
            // every SU(n+1)-GNH metric is U(n+1)-GNH
            let du = ReductiveDecomposition::<Rational>::build(Family::Unitary { field: FieldTag::C, n })?;
            let (x, y, _) = u_witness(FieldTag::C, n);
            let mut up = prop22_inequality(&du, &one, &Affine::t(qi(2)), &x, &y)?;
            up.name = "prop22[u via su]".into();
            out.push(up);
            let xx = d.basis(Part::P2)[0].clone();
            let u = e_unit(FieldTag::C, n + 1, &[(1, 0, 0, 1), (0, 1, 0, -1)]);
            out.push(deltal2_inequality(&d, &xx, &u)?);
        }
        Family::SpSp1 { n } => {
            let (x, y, _) = sp_sp1_witness(n);
            out.push(prop22_inequality(&d, &one, &Affine::t(qi(4)), &x, &y)?);
        }
        Family::SpSplit { n } => {
            let (h, s, e) = (FieldTag::H, n + 2, n + 1);
            let x = e_unit(h, s, &[(0, 1, 0, 1), (1, 0, 0, -1)]);
            let y = e_unit(h, s, &[(0, 0, 2, 1)]);
            out.push(prop22_inequality(&d, &one, &Affine::t(qi(2)), &x, &y)?);
            let u = e_unit(h, s, &[(1, 0, 0, 1), (0, 1, 0, -1)]);
            let hc = e_unit(h, s, &[(0, 0, 1, 1), (e, e, 1, 1)]);
            out.push(deltal2_centralizer_inequality(&d, &y, &u, &hc)?);
            // totally geodesic U(2)/U(1) with t⟨·,·⟩|𝔭₁ + 2s⟨·,·⟩|𝔭₂
            let d2 = ReductiveDecomposition::<Rational>::build(Family::Unitary { field: FieldTag::C, n: 1 })?;
            let (x2, y2, _) = u_witness(FieldTag::C, 1);
            let mut st = prop22_inequality(&d2, &Affine::t(qi(1)), &Affine::s(qi(2)), &x2, &y2)?;
            st.name = "prop22[u(2) orbit]".into();
            out.push(st);
        }
        Family::Spin9 => {
            let x = to_theta(&spin9::x_witness())?;
            let y = to_theta(&spin9::y_witness())?;
            let c = |p: Part| family.coefficient(p);
            out.push(prop22_inequality(&d, &c(Part::P1)?, &c(Part::P2)?, &x, &y)?);
            let xx = to_theta(&spin9::x1())?;
            let u = d
                .basis(Part::P1)
                .into_iter()
                .find(|b| !b.bracket(&xx).map(|m| m.is_zero()).unwrap_or(true))
                .cloned()
                .ok_or_else(|| Error::Precondition("𝔭₁ commutes with X₁".into()))?;
            out.push(deltal2_inequality(&d, &xx, &u)?);
        }
    }
    Ok(out)
}

/// The parameter region classified as admissible for a family.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedRange {
    /// `None` means `t > 0` (open at zero).
    pub t_min: Option<Rational>,
    pub t_max: Rational,
    /// `s ∈ (0, t]` when set.
    pub s_up_to_t: bool,
}

impl ClassifiedRange {
    pub fn of(family: Family) -> Result<Self> {
        let half = Rational::new(1.into(), 2.into());
        let (t_min, s_up_to_t) = match family {
            Family::Unitary { field: FieldTag::R, .. } => {
                return Err(Error::Precondition("SO(n+1)/SO(n) carries a single invariant metric".into()))
            }
            Family::Unitary { field: FieldTag::C, .. } | Family::SpSp1 { .. } => (None, false),
            Family::Unitary { .. } => (Some(half), false),
            Family::SpecialUnitary { n } => (Some(Rational::new((n as i64 + 1).into(), (2 * n as i64).into())), false),
            Family::SpSplit { .. } => (Some(half), true),
            Family::Spin9 => (Some(Rational::new(1.into(), 4.into())), false),
        };
        Ok(ClassifiedRange {
            t_min,
            t_max: qi(1),
            s_up_to_t,
        })
    }

    pub fn contains(&self, t: &Rational, s: &Rational) -> bool {
        let z = Rational::zero();
        let t_ok = match &self.t_min {
            Some(lo) => t >= lo,
            None => *t > z,
        } && *t <= self.t_max;
        let s_ok = !self.s_up_to_t || (*s > z && s <= t);
        t_ok && s_ok
    }
}

impl fmt::Display for ClassifiedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.t_min {
            Some(lo) => write!(f, "t ∈ [{lo}, {}]", self.t_max)?,
            None => write!(f, "t ∈ (0, {}]", self.t_max)?,
        }
        if self.s_up_to_t {
            f.write_str(", s ∈ (0, t]")?;
        }
        Ok(())
    }
}

/// `(5 + 3k)/100`, `k = 0..40`: 41 points on `[0.05, 1.25]`.
pub fn default_axis() -> Vec<Rational> {
    (0..41).map(|k| Rational::new((5 + 3 * k).into(), 100.into())).collect()
}

/// Default grid: the axis plus the range's endpoints in `t`; in `s` (for
/// the split family) the axis plus `s = t`.
pub fn default_grid(family: Family) -> Result<Vec<(Rational, Rational)>> {
    let range = ClassifiedRange::of(family)?;
    let mut ts = default_axis();
    ts.extend(range.t_min.iter().cloned());
    ts.push(range.t_max.clone());
    ts.sort();
    ts.dedup();
    let mut grid = Vec::new();
    for t in &ts {
        if family.has_s() {
            let mut ss = default_axis();
            ss.push(t.clone());
            ss.sort();
            ss.dedup();
            grid.extend(ss.into_iter().map(|s| (t.clone(), s)));
        } else {
            grid.push((t.clone(), t.clone()));
        }
    }
    Ok(grid)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointVerdict {
    pub t: String,
    pub s: Option<String>,
    pub inside: bool,
    pub passed_all: bool,
    pub failing: Vec<String>,
    /// Inside points pass everything; outside points fail something.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table2Report {
    pub family: String,
    pub n: usize,
    pub range: String,
    pub thresholds: Vec<(String, String)>,
    pub points: Vec<PointVerdict>,
    #[serde(skip)]
    pub records: Vec<CheckRecord>,
    pub consistent: bool,
}

/// Runs every necessary condition of the family on each grid point and
/// compares the verdicts with the classified range.
pub fn table2_report(family: Family, grid: &[(Rational, Rational)]) -> Result<Table2Report> {
    let ineqs = family_inequalities(family)?;
    let range = ClassifiedRange::of(family)?;
    let has_s = family.has_s();
    let rows: Vec<(PointVerdict, Vec<CheckRecord>)> = grid
        .par_iter()
        .map(|(t, s)| {
            let inside = range.contains(t, s);
            let mut failing = Vec::new();
            let mut recs = Vec::new();
            for q in &ineqs {
                let r = q.record(t, s);
                if !r.holds {
                    failing.push(q.name.clone());
                }
                recs.push(
                    CheckRecord::new("table2", q.name.clone(), q.anchor.clone(), r.holds)
                        .family(family.name(), Some(family.n()))
                        .params(t, has_s.then_some(s))
                        .sides(&r.lhs_exact, &r.rhs_exact)
                        .detail(format!("implies {}", r.threshold_implied)),
                );
            }
            let passed_all = failing.is_empty();
            let v = PointVerdict {
                t: t.to_string(),
                s: has_s.then(|| s.to_string()),
                inside,
                passed_all,
                consistent: inside == passed_all,
                failing,
            };
            (v, recs)
        })
        .collect();
    let consistent = rows.iter().all(|(v, _)| v.consistent);
    let (points, records): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    Ok(Table2Report {
        family: family.name().to_string(),
        n: family.n(),
        range: range.to_string(),
        thresholds: ineqs.iter().map(|q| (q.name.clone(), q.threshold().to_string())).collect(),
        points,
        records: records.into_iter().flatten().collect(),
        consistent,
    })
}

/// Verdict of the Monte-Carlo δ-vector check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledDelta {
    pub samples: usize,
    /// `max_a (Ad(a)W)_𝔭² - (W_𝔭)²` under the metric.
    pub worst_margin: f64,
    pub verdict: Verdict,
}

/// Samples `a = exp(Z)`, `Z` Gaussian in 𝔤, and looks for
/// `(Ad(a)W_𝔭, Ad(a)W_𝔭) > (W_𝔭, W_𝔭)`. A violation certifies that `W` is
/// not a δ-vector.
pub fn sampled_delta_test<R: Rng>(
    w: &MatF<f64>,
    m: &DiagonalMetric<f64>,
    d: &ReductiveDecomposition<f64>,
    samples: usize,
    rng: &mut R,
) -> Result<SampledDelta> {
    let norm = |v: &MatF<f64>| -> Result<f64> {
        let p = d.project_p(v)?;
        crate::homspace::metric_inner(m, d, &p, &p)
    };
    let base = norm(w)?;
    let basis: Vec<&MatF<f64>> = d.parts().iter().flat_map(|(_, b)| b.iter()).collect();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let (tag, size) = d.family().ambient();
        let mut z = MatF::zeros(tag, size)?;
        for b in &basis {
            let g: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng);
            z.axpy(&(g / b.inner_unchecked(b).sqrt()), b)?;
        }
        let a = expm(&z)?;
        worst = worst.max(norm(&w.conjugate_by(&a)?)? - base);
    }
    let scale = base.abs().max(1.0);
    Ok(SampledDelta {
        samples,
        worst_margin: worst,
        verdict: Verdict::from_bool(worst <= SAMPLED_TOL * scale),
    })
}

/// `diag(i, 2i, 0, …)`, whose mass sits off the corner: not a δ-vector.
pub fn off_corner_field(n: usize) -> MatF<f64> {
    let mut d = vec![HyperComplex::zero(FieldTag::C); n + 1];
    d[0] = HyperComplex::new(FieldTag::C, vec![0.0, 1.0]).expect("width");
    d[1] = HyperComplex::new(FieldTag::C, vec![0.0, 2.0]).expect("width");
    MatF::diagonal(FieldTag::C, &d).expect("associative")
}
