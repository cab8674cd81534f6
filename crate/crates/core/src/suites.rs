//! The verification suites behind `verify-paper`: Clifford identities, the
//! spin(9) identities, Killing constructions, Firey interpolation and the
//! Table-2 necessary-condition grid.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::random::{dyadic, dyadic_vec, gaussian_vec, seeded};
use crate::algebra::{pythagorean_tangent, qi, FieldTag, HyperComplex, MatF, Rational, Scalar, NUMERIC_TOL};
use crate::clifford::{spin9_inner, spin_to_so, Bivector, CliffordElement};
use crate::deltacheck::{
    default_grid, family_inequalities, off_corner_field, sampled_delta_test, table2_report, u_witness,
    ClassifiedRange, Threshold,
};
use crate::error::{Error, Result};
use crate::firey::{
    combine_metrics, dual_2_mean_ellipsoid, dual_p_mean_support, dual_params, s1_for_target, support,
    theta_for_linear, theta_for_sp_target, Ellipsoid, MetricParams,
};
use crate::homspace::{expected_dims, DiagonalMetric, Family, ReductiveDecomposition};
use crate::killing::{cw_field_for_vector, orbit_label_u, round_delta_test, su_delta_field, DeltaOutcome};
use crate::report::{CheckRecord, RunReport};
use crate::spin9::{self, Part as SpinPart};

/// Arithmetic of a run. `Exact` keeps to the rational checks; `Numeric`
/// adds the floating-point ones and samples Gaussian inputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    #[default]
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            o => Err(Error::Parse(format!("unknown mode `{o}` (exact|numeric)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Clifford,
    Identities,
    Killing,
    Firey,
    Table2,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Clifford, Suite::Identities, Suite::Killing, Suite::Firey, Suite::Table2];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Identities => "identities",
            Suite::Killing => "killing",
            Suite::Firey => "firey",
            Suite::Table2 => "table2",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub mode: Mode,
    pub seed: u64,
    /// Random tangent vectors per family in the Killing suite.
    pub samples: usize,
    /// Keep only records of this family (by CLI name).
    pub family: Option<String>,
    pub only: Option<Suite>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            mode: Mode::Numeric,
            seed: 0,
            samples: 50,
            family: None,
            only: None,
        }
    }
}

/// Runs the selected suites in order and collects one report.
pub fn verify_paper(opts: &SuiteOptions) -> Result<RunReport> {
    let mut report = RunReport::new(&opts.mode.to_string(), opts.seed);
    for suite in Suite::ALL {
        if opts.only.is_some_and(|o| o != suite) {
            continue;
        }
        let recs = match suite {
            Suite::Clifford => clifford_suite(opts.seed)?,
            Suite::Identities => identities_suite(opts.mode)?,
            Suite::Killing => killing_suite(opts.mode, opts.seed, opts.samples)?,
            Suite::Firey => firey_suite(opts.mode, opts.seed)?,
            Suite::Table2 => table2_suite()?,
        };
        report.extend(
            recs.into_iter()
                .filter(|r| opts.family.as_deref().is_none_or(|f| r.family.as_deref() == Some(f))),
        );
    }
    Ok(report)
}

fn basis_vec(n: usize, k: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[k] = Rational::one();
    v
}

/// Orthonormal basis of ℚⁿ from two layers of (3/5, 4/5) plane rotations,
/// on the planes (0,1), (2,3), … and then (1,2), (3,4), …. Each vector has
/// at most four nonzero coordinates, which keeps products cheap.
pub fn rotated_basis(n: usize) -> Vec<Vec<Rational>> {
    let (c, s) = (Rational::ratio(3, 5), Rational::ratio(4, 5));
    let mut f: Vec<Vec<Rational>> = (0..n).map(|k| basis_vec(n, k)).collect();
    for start in [0, 1] {
        for p in (start..n.saturating_sub(1)).step_by(2) {
            for v in f.iter_mut() {
                let (a, b) = (v[p].clone(), v[p + 1].clone());
                v[p] = c.clone() * a.clone() - s.clone() * b.clone();
                v[p + 1] = s.clone() * a + c.clone() * b;
            }
        }
    }
    f
}

fn product(f: &[Rational], g: &[Rational]) -> Result<Bivector<Rational>> {
    let p = CliffordElement::vector(9, f)?.mul(&CliffordElement::vector(9, g)?)?;
    Bivector::from_clifford(&p)
}

/// Exact Clifford identities: orthonormal products, brackets, associativity,
/// `L` as a homomorphism and the u(n+1) double bracket.
pub fn clifford_suite(seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let bases = [
        ("standard", (0..9).map(|k| basis_vec(9, k)).collect::<Vec<_>>()),
        ("rotated", rotated_basis(9)),
    ];
    for (label, f) in &bases {
        let mut norms_ok = true;
        let mut brackets_ok = true;
        for i in 0..9 {
            for j in 0..9 {
                if i == j {
                    continue;
                }
                let fij = product(&f[i], &f[j])?;
                norms_ok &= spin9_inner(&fij, &fij)? == qi(8);
                for k in 0..9 {
                    if k == i || k == j {
                        continue;
                    }
                    let lhs = fij.bracket(&product(&f[i], &f[k])?)?;
                    brackets_ok &= lhs == product(&f[j], &f[k])?.scale(&qi(2));
                }
            }
        }
        out.push(
            CheckRecord::new("clifford", format!("norm f_i f_j ({label} basis)"), "<f_i f_j, f_i f_j> = 8", norms_ok)
                .sides("8", if norms_ok { "8" } else { "mismatch" }),
        );
        out.push(CheckRecord::new(
            "clifford",
            format!("bracket f_i f_j ({label} basis)"),
            "[f_i f_j, f_i f_k] = 2 f_j f_k for distinct i, j, k",
            brackets_ok,
        ));
    }

    let mut gen_ok = true;
    for i in 1..=9 {
        let ei = CliffordElement::<Rational>::generator(9, i)?;
        gen_ok &= ei.mul(&ei)? == CliffordElement::scalar(9, qi(-1))?;
        for j in (i + 1)..=9 {
            let ej = CliffordElement::generator(9, j)?;
            gen_ok &= ei.mul(&ej)?.add(&ej.mul(&ei)?)?.is_zero();
        }
    }
    out.push(CheckRecord::new("clifford", "generator relations", "e_i² = -1, e_i e_j = -e_j e_i", gen_ok));

    let random_element = |rng: &mut crate::algebra::random::SeededRng| -> Result<CliffordElement> {
        let mut x = CliffordElement::zero(5)?;
        for _ in 0..6 {
            let mask = rng.random_range(0..32u16);
            x = x.add(&CliffordElement::blade(5, mask, dyadic(rng, 2, 2))?)?;
        }
        Ok(x)
    };
    let mut assoc = true;
    for _ in 0..50 {
        let (a, b, c) = (random_element(&mut rng)?, random_element(&mut rng)?, random_element(&mut rng)?);
        assoc &= a.mul(&b)?.mul(&c)? == a.mul(&b.mul(&c)?)?;
    }
    out.push(CheckRecord::new("clifford", "associativity in Cl^5", "(xy)z = x(yz)", assoc));

    let mut hom = true;
    for _ in 0..20 {
        let a = Bivector::<Rational>::from_coords(9, dyadic_vec(&mut rng, 36, 2, 2))?;
        let b = Bivector::<Rational>::from_coords(9, dyadic_vec(&mut rng, 36, 2, 2))?;
        hom &= spin_to_so(&a.bracket(&b)?) == spin_to_so(&a).bracket(&spin_to_so(&b))?;
    }
    out.push(CheckRecord::new(
        "clifford",
        "spin(9) to so(9) homomorphism",
        "L([a, b]) = [L a, L b], e_i e_j -> 2(E_ji - E_ij)",
        hom,
    ));

    for n in 1..=4 {
        let f = Family::parse("u", n)?;
        let (x, y, z) = u_witness(FieldTag::C, n);
        let v = y.bracket(&x)?.bracket(&x)?;
        let want = y.scale(&qi(-2)).add(&z.scale(&qi(2)))?;
        let (a, b) = (y.scale(&qi(-2)), z.scale(&qi(2)));
        let (na, nb) = (a.inner(&a)?, b.inner(&b)?);
        out.push(
            CheckRecord::new(
                "clifford",
                "u(n+1) double bracket",
                "[[Y,X],X] = -2Y + 2Z with <-2Y,-2Y> = <2Z,2Z>",
                v == want && na == nb,
            )
            .family(f.name(), Some(n))
            .sides(&na, &nb)
            .detail("half-trace inner product"),
        );
    }
    Ok(out)
}

/// The spin(9) identities plus exact structure checks of θ and the parts.
pub fn identities_suite(mode: Mode) -> Result<Vec<CheckRecord>> {
    let mut out: Vec<CheckRecord> = spin9::verify_spin9_identities()
        .into_iter()
        .map(|c| {
            CheckRecord::new("identities", c.name, c.anchor, c.holds)
                .family("spin9", Some(7))
                .detail(c.detail)
        })
        .collect();
    let emb = spin9::embedding();
    let skew = emb.basis_matrices().iter().all(|m| m.is_skew_hermitian(0.0) && m.inner(m).ok() == Some(qi(8)));
    out.push(
        CheckRecord::new("identities", "theta basis", "36 skew matrices θ(e_i e_j) of norm 8", skew)
            .family("spin9", Some(7))
            .sides(emb.basis_matrices().len(), 36),
    );
    let parts = spin9::parts();
    let dims = [SpinPart::H, SpinPart::P2, SpinPart::P1].map(|p| parts.basis(p).len());
    out.push(
        CheckRecord::new("identities", "decomposition dims", "dim h, p2, p1 = 21, 7, 8", dims == [21, 7, 8])
            .family("spin9", Some(7))
            .sides(format!("{dims:?}"), "[21, 7, 8]"),
    );
    let inside = |w: &Bivector<Rational>, target: &[SpinPart]| {
        let mut rest = w.clone();
        for &p in target {
            rest = rest.sub(&parts.project(w, p)).expect("n = 9");
        }
        rest.is_zero()
    };
    let mut p2p1 = true;
    let mut p2p2 = true;
    for a in parts.basis(SpinPart::P2) {
        for b in parts.basis(SpinPart::P1) {
            p2p1 &= inside(&a.bracket(b)?, &[SpinPart::P1]);
        }
        for b in parts.basis(SpinPart::P2) {
            p2p2 &= inside(&a.bracket(b)?, &[SpinPart::H]);
        }
    }
    out.push(CheckRecord::new("identities", "[p2, p1] in p1", "[p2, p1] ⊆ p1", p2p1).family("spin9", Some(7)));
    out.push(CheckRecord::new("identities", "[p2, p2] in h", "[p2, p2] ⊆ h", p2p2).family("spin9", Some(7)));
    let x1 = spin9::theta(&spin9::x1())?;
    let metric = crate::homspace::metric_inner_affine(&ReductiveDecomposition::<Rational>::build(Family::Spin9)?, &x1, &x1)?;
    out.push(
        CheckRecord::new("identities", "metric on theta(X1)", "(X1, X1)_t = 16t", metric == crate::algebra::Affine::t(qi(16)))
            .family("spin9", Some(7))
            .sides(&metric, "16t"),
    );
    if mode == Mode::Numeric {
        let d = ReductiveDecomposition::<Rational>::build(Family::Spin9)?.to_f64();
        let res = d.ad_invariance_residual(&mut seeded(0), 20)?;
        out.push(
            CheckRecord::new("identities", "Ad(H)-invariance of parts", "Ad(h) maps each part into itself", res < 1e-9)
                .family("spin9", Some(7))
                .sides(format!("{res:.2e}"), "1e-9"),
        );
    }
    Ok(out)
}

/// Families whose matrix Clifford–Wolf construction is exercised.
pub fn killing_families() -> Vec<Family> {
    let mut fs = Vec::new();
    for (name, ns) in [("so", &[1usize, 3][..]), ("u", &[1, 2, 3]), ("sp", &[1, 2]), ("su", &[1, 3])] {
        for &n in ns {
            fs.push(Family::parse(name, n).expect("valid"));
        }
    }
    fs
}

/// Worst residual over the samples: `Ux0 - v` and `U² + ‖v‖² Id`. In
/// rational mode any nonzero residual is reported as infinite.
pub fn construction_residual<T: Scalar>(family: Family, vs: &[Vec<HyperComplex<T>>]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in vs {
        let u = cw_field_for_vector(family, v)?;
        let r2 = v.iter().fold(T::zero(), |a, x| a + x.norm_sqr());
        let id = MatF::identity(u.tag(), u.n())?.scale(&r2);
        let sq = u.mul(&u)?.add(&id)?;
        let mut res = sq.frob_norm();
        for (j, x) in v.iter().enumerate() {
            let d = u.get(j, 0).sub(x)?;
            res = res.max(d.norm_sqr().to_f64().sqrt());
        }
        if matches!(family, Family::SpecialUnitary { .. }) {
            res = res.max(u.trace().norm_sqr().to_f64().sqrt());
        }
        if T::EXACT && res != 0.0 {
            res = f64::INFINITY;
        }
        worst = worst.max(res);
    }
    Ok(worst)
}

fn gaussian_tangent<R: Rng>(rng: &mut R, tag: FieldTag, n: usize) -> Vec<HyperComplex<f64>> {
    let d = tag.dim();
    let g = gaussian_vec(rng, d * (n + 1));
    g.chunks(d)
        .enumerate()
        .map(|(k, c)| {
            let mut c = c.to_vec();
            if k == 0 {
                c[0] = 0.0;
                if tag == FieldTag::R {
                    c[0] = 0.0;
                }
            }
            HyperComplex::new(tag, c).expect("width")
        })
        .collect()
}

/// Spin(9) construction: `θ(W)x0 = u` and all 119 scalar equations.
pub fn spin9_construction_check<T: Scalar>(us: &[Vec<T>]) -> Result<(bool, f64)> {
    let emb = spin9::embedding();
    let tol: f64 = if T::EXACT { 0.0 } else { 1e-9 };
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for u in us {
        let w = spin9::cw_field_spin9(u)?;
        let img = emb.theta_x0(&w)?;
        let diff = img.iter().zip(u).map(|(a, b)| (a.clone() - b.clone()).to_f64().abs()).fold(0.0, f64::max);
        let eq = spin9::constant_length_equations(&emb.theta(&w)?, tol.max(1e-12))?;
        ok &= eq.equations == 119 && eq.satisfied == 119 && diff <= tol;
        worst = worst.max(diff).max(eq.max_residual);
    }
    Ok((ok, worst))
}

pub fn killing_suite(mode: Mode, seed: u64, samples: usize) -> Result<Vec<CheckRecord>> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let anchor = "U x0 = v and U² = -‖v‖² Id";
    for f in killing_families() {
        let (tag, n) = (f.vector_field(), f.n());
        let res = match mode {
            Mode::Exact => {
                let vs: Vec<_> = (0..samples).map(|_| pythagorean_tangent::<Rational, _>(&mut rng, tag, n)).collect();
                construction_residual(f, &vs)?
            }
            Mode::Numeric => {
                let vs: Vec<_> = (0..samples).map(|_| gaussian_tangent(&mut rng, tag, n)).collect();
                construction_residual(f, &vs)?
            }
        };
        let tol = if mode == Mode::Exact { 0.0 } else { 1e-9 };
        out.push(
            CheckRecord::new("killing", format!("Clifford-Wolf field, {samples} vectors"), anchor, res <= tol)
                .family(f.name(), Some(n))
                .sides(format!("{res:.2e}"), format!("{tol:.0e}")),
        );
    }
    let (ok, worst) = match mode {
        Mode::Exact => {
            let us: Vec<Vec<Rational>> = (0..samples)
                .map(|_| {
                    let mut u = dyadic_vec(&mut rng, 16, 2, 3);
                    u[0] = qi(0);
                    u
                })
                .collect();
            spin9_construction_check(&us)?
        }
        Mode::Numeric => {
            let us: Vec<Vec<f64>> = (0..samples)
                .map(|_| {
                    let mut u = gaussian_vec(&mut rng, 16);
                    u[0] = 0.0;
                    u
                })
                .collect();
            spin9_construction_check(&us)?
        }
    };
    out.push(
        CheckRecord::new(
            "killing",
            format!("spin(9) field, {samples} vectors"),
            "θ(W) x0 = u and the 119 constant-length equations hold",
            ok,
        )
        .family("spin9", Some(7))
        .sides(format!("{worst:.2e}"), if mode == Mode::Exact { "0" } else { "1e-9" }),
    );

    // δ-vector criterion at x0
    for n in [2usize, 3] {
        let mut all = true;
        for _ in 0..samples.min(20) {
            let v = pythagorean_tangent::<Rational, _>(&mut rng, FieldTag::C, n);
            all &= round_delta_test(&su_delta_field(&v, n)?)?.is_accepted();
        }
        out.push(
            CheckRecord::new("killing", "su delta field accepted", "-U² = diag(λ², B), λ² Id - B ⪰ 0", all)
                .family("su", Some(n)),
        );
    }
    let ci = |v: i64| HyperComplex::new(FieldTag::C, vec![qi(0), qi(v)]).expect("width");
    let accept = MatF::diagonal(FieldTag::C, &[ci(2), ci(1), ci(0)])?;
    let reject = MatF::diagonal(FieldTag::C, &[ci(1), ci(2), ci(0)])?;
    let margin = match round_delta_test(&accept)? {
        DeltaOutcome::Accepted(c) => Some((c.lambda, c.psd_margin)),
        _ => None,
    };
    let ok = margin.is_some_and(|(l, m)| (l - 2.0).abs() < 1e-12 && (m - 3.0).abs() < 1e-9);
    out.push(
        CheckRecord::new("killing", "delta test diag(2i, i, 0)", "accepted with λ = 2, margin 3", ok)
            .family("u", Some(2))
            .sides(format!("{margin:?}"), "(2, 3)"),
    );
    out.push(
        CheckRecord::new(
            "killing",
            "delta test diag(i, 2i, 0)",
            "rejected: the off-corner entry dominates",
            !round_delta_test(&reject)?.is_accepted(),
        )
        .family("u", Some(2)),
    );
    for n1 in [2usize, 4] {
        let half: Vec<_> = (0..n1).map(|k| ci(if k < n1 / 2 { 1 } else { -1 })).collect();
        let lab = orbit_label_u(&MatF::diagonal(FieldTag::C, &half)?)?;
        let ok = lab.l == n1 / 2 && lab.alpha == "0";
        out.push(
            CheckRecord::new("killing", "orbit label of diag(i,..,-i,..)", "l = (n+1)/2, α = 2l/(n+1) - 1 = 0", ok)
                .family("u", Some(n1 - 1))
                .sides(format!("l = {}, α = {}", lab.l, lab.alpha), format!("l = {}, α = 0", n1 / 2)),
        );
    }

    if mode == Mode::Numeric {
        let f = Family::parse("u", 2)?;
        let d = ReductiveDecomposition::<Rational>::build(f)?.to_f64();
        let m = DiagonalMetric::<f64>::round(f);
        let v = pythagorean_tangent::<Rational, _>(&mut rng, FieldTag::C, 2);
        let w = su_delta_field(&v, 2)?.to_f64();
        let good = sampled_delta_test(&w, &m, &d, 500, &mut rng)?;
        out.push(
            CheckRecord::new(
                "killing",
                "sampled delta test, su delta field",
                "(W_p, W_p) >= (Ad(a)W_p, Ad(a)W_p)",
                good.verdict.is_pass(),
            )
            .family("u", Some(2))
            .sides(format!("{:.2e}", good.worst_margin), "1e-8"),
        );
        let bad = sampled_delta_test(&off_corner_field(2), &m, &d, 500, &mut rng)?;
        out.push(
            CheckRecord::new(
                "killing",
                "sampled delta test, diag(i, 2i, 0)",
                "some Ad(a) increases the p-norm",
                !bad.verdict.is_pass(),
            )
            .family("u", Some(2))
            .sides(format!("{:.2e}", bad.worst_margin), "1e-8"),
        );
    }
    Ok(out)
}

fn parse_q(s: &str) -> Rational {
    Rational::parse_token(s).expect("literal")
}

/// Families and sizes covered by the Table-2 grid.
pub fn table2_families() -> Vec<Family> {
    let mut fs = Vec::new();
    for (name, ns) in [
        ("u", &[1usize, 2, 3][..]),
        ("su", &[2, 3, 4]),
        ("sp", &[1, 2]),
        ("sp-split", &[1, 2]),
        ("sp-sp1", &[1, 2]),
        ("spin9", &[7]),
    ] {
        for &n in ns {
            fs.push(Family::parse(name, n).expect("valid"));
        }
    }
    fs
}

/// Exact parameter-level consequences of the Firey combination, plus
/// ellipsoid checks in numeric mode.
pub fn firey_suite(mode: Mode, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let split = Family::SpSplit { n: 1 };
    for t in ["3/5", "2/3", "3/4", "4/5", "9/10"].map(parse_q) {
        let mut ok = true;
        for k in 1..4 {
            let s = t.clone() * Rational::ratio(k, 4);
            let s1 = s1_for_target(&t, &s)?;
            let theta = theta_for_sp_target(&t);
            let x = MetricParams::for_family(split, &Rational::ratio(1, 2), &s1)?;
            let y = MetricParams::for_family(split, &qi(1), &qi(1))?;
            ok &= combine_metrics(&x, &y, &theta)?.family_ts(split)? == (t.clone(), s);
        }
        out.push(
            CheckRecord::new(
                "firey",
                "interpolation round trip",
                "combine((1/2, s1), (1, 1), θ = (2t-1)/t) = (t, s)",
                ok,
            )
            .family("sp-split", Some(1))
            .params(&t, Some("t/4, t/2, 3t/4")),
        );
    }

    let mut ok = true;
    for (b, g, r) in [("1", "2", "1/3"), ("1/2", "3", "3/4"), ("5", "1/7", "1/2")] {
        let (b, g, r) = (parse_q(b), parse_q(g), parse_q(r));
        let th = theta_for_linear(&b, &g, &r)?;
        let x = MetricParams::new(vec![b.clone()])?;
        let y = MetricParams::new(vec![g.clone()])?;
        let want = (qi(1) - r.clone()) * b + r * g;
        ok &= combine_metrics(&x, &y, &th)?.values()[0] == want;
    }
    out.push(CheckRecord::new(
        "firey",
        "linear interpolation weight",
        "θ = rγ/((1-r)β + rγ) combines β, γ to (1-r)β + rγ",
        ok,
    ));

    let x = MetricParams::new(vec![qi(1), qi(2), parse_q("3/5")])?;
    let dual = dual_params(&x)?;
    let ok = dual_params(&dual)? == x
        && dual.values()[1] == parse_q("1/2")
        && dual_params(&x.scale(&qi(3))?)? == dual.scale(&parse_q("1/3"))?;
    out.push(CheckRecord::new("firey", "dual parameters", "dual∘dual = id, dual(αx) = α⁻¹ dual(x)", ok));

    // admissible ⊕ admissible stays admissible
    for f in table2_families().into_iter().filter(|f| f.n() <= 2 || *f == Family::Spin9) {
        let range = ClassifiedRange::of(f)?;
        let ineqs = family_inequalities(f)?;
        let pts: Vec<(Rational, Rational)> =
            default_grid(f)?.into_iter().filter(|(t, s)| range.contains(t, s)).step_by(7).collect();
        let mut ok = true;
        for (i, (t1, s1)) in pts.iter().enumerate() {
            let (t2, s2) = &pts[(i * 5 + 3) % pts.len()];
            for th in ["1/4", "1/2", "5/6"].map(parse_q) {
                let c = combine_metrics(
                    &MetricParams::for_family(f, t1, s1)?,
                    &MetricParams::for_family(f, t2, s2)?,
                    &th,
                )?;
                let (t, s) = c.family_ts(f)?;
                ok &= ineqs.iter().all(|q| q.holds_exact(&t, &s)) && range.contains(&t, &s);
            }
        }
        out.push(
            CheckRecord::new(
                "firey",
                "combination of admissible metrics",
                "dual 2-mean of admissible metrics passes every necessary condition",
                ok,
            )
            .family(f.name(), Some(f.n()))
            .sides(pts.len(), "pairs"),
        );
    }

    if mode == Mode::Numeric {
        let mut rng = seeded(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let e1 = random_ellipsoid(&mut rng, 4)?;
            let e2 = random_ellipsoid(&mut rng, 4)?;
            let th: f64 = rng.random_range(0.0..1.0);
            let e = dual_2_mean_ellipsoid(&e1, &e2, th)?;
            let u = gaussian_vec(&mut rng, 4);
            let want = dual_p_mean_support(support(&e1, &u)?, support(&e2, &u)?, 2.0, th)?;
            worst = worst.max((support(&e, &u)? - want).abs() / want.max(1.0));
        }
        out.push(
            CheckRecord::new(
                "firey",
                "dual 2-mean of ellipsoids",
                "h² = ((1-θ)h₁⁻² + θh₂⁻²)⁻¹ pointwise",
                worst < NUMERIC_TOL,
            )
            .sides(format!("{worst:.2e}"), "1e-9"),
        );
    }
    Ok(out)
}

fn random_ellipsoid<R: Rng>(rng: &mut R, m: usize) -> Result<Ellipsoid> {
    let g = nalgebra::DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    Ellipsoid::new(&g * g.transpose() + nalgebra::DMatrix::identity(m, m))
}

/// Bounds implied by the inequalities: `(max lower t, min upper t, s ≤ t)`.
pub fn implied_range(thresholds: &[Threshold]) -> (Option<Rational>, Option<Rational>, bool) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut st = false;
    for th in thresholds {
        match th {
            Threshold::TAtLeast(v) => lo = Some(lo.map_or(v.clone(), |l| l.max(v.clone()))),
            Threshold::TAtMost(v) => hi = Some(hi.map_or(v.clone(), |h| h.min(v.clone()))),
            Threshold::SAtMostT => st = true,
            _ => {}
        }
    }
    (lo, hi, st)
}

pub fn table2_suite() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for f in table2_families() {
        let ineqs = family_inequalities(f)?;
        let range = ClassifiedRange::of(f)?;
        let ths: Vec<Threshold> = ineqs.iter().map(|q| q.threshold()).collect();
        let (lo, hi, st) = implied_range(&ths);
        let ok = lo == range.t_min && hi.as_ref() == Some(&range.t_max) && st == range.s_up_to_t;
        let shown: Vec<String> = ths.iter().map(|t| t.to_string()).collect();
        out.push(
            CheckRecord::new("table2", "thresholds", format!("necessary conditions cut out {range}"), ok)
                .family(f.name(), Some(f.n()))
                .sides(shown.join(" and "), range.to_string()),
        );
        let rep = table2_report(f, &default_grid(f)?)?;
        let bad = rep.points.iter().filter(|p| !p.consistent).count();
        out.push(
            CheckRecord::new(
                "table2",
                "grid verdicts",
                "inside the range every check passes, outside some check fails",
                rep.consistent,
            )
            .family(f.name(), Some(f.n()))
            .sides(format!("{} points", rep.points.len()), format!("{bad} inconsistent")),
        );
    }
    for f in [Family::parse("u", 2)?, Family::SpecialUnitary { n: 2 }, Family::Spin9] {
        let dims = ReductiveDecomposition::<Rational>::build(f)?;
        let ok = expected_dims(f).iter().all(|&(p, d)| dims.dim(p) == d);
        out.push(
            CheckRecord::new("table2", "decomposition", "orthogonal, isotropic, dimensions as expected", ok)
                .family(f.name(), Some(f.n())),
        );
    }
    Ok(out)
}
