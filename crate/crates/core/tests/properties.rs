//! Property suites over sampled inputs. Each case draws a seed and builds
//! its inputs from a seeded generator.

use proptest::prelude::*;
use rand::Rng;

use spherekit::algebra::random::{
    dyadic_vec, gaussian_vec, random_skew_hermitian_dyadic, rational_unit_vector, seeded,
};
use spherekit::algebra::{expm, Zero, hc_mul, pythagorean_tangent, qi, FieldTag, HyperComplex, MatF, Rational, Scalar};
use spherekit::clifford::{bivector_from_vectors, is_simple, Bivector, CliffordElement};
use spherekit::deltacheck::{default_grid, family_inequalities, sampled_delta_test, ClassifiedRange};
use spherekit::firey::{
    combine_metrics, dual_2_mean_ellipsoid, dual_params, support, Ellipsoid, MetricParams,
};
use spherekit::homspace::{metric_inner, DiagonalMetric, Family, ReductiveDecomposition};
use spherekit::killing::{constant_length_test, cw_field_for_vector, orbit_label_u, round_delta_test, su_delta_field};
use spherekit::spin9;
use spherekit::suites::table2_families;

fn families() -> Vec<Family> {
    ["so", "u", "su", "sp", "sp-split", "sp-sp1", "spin9"]
        .iter()
        .map(|n| Family::parse(n, if *n == "so" { 3 } else { 2 }).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(seed in any::<u64>(), field in 0usize..3, n in 1usize..4) {
        let tag = [FieldTag::R, FieldTag::C, FieldTag::H][field];
        let mut rng = seeded(seed);
        let [a, b, c]: [MatF<Rational>; 3] =
            std::array::from_fn(|_| random_skew_hermitian_dyadic(&mut rng, tag, n).unwrap());
        let j = a.bracket(&b.bracket(&c).unwrap()).unwrap()
            .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap()).unwrap()
            .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn realify_is_a_homomorphism(seed in any::<u64>(), field in 0usize..3, n in 1usize..4) {
        let tag = [FieldTag::R, FieldTag::C, FieldTag::H][field];
        let mut rng = seeded(seed);
        let a: MatF<Rational> = random_skew_hermitian_dyadic(&mut rng, tag, n).unwrap();
        let b: MatF<Rational> = random_skew_hermitian_dyadic(&mut rng, tag, n).unwrap();
        prop_assert_eq!(a.mul(&b).unwrap().realify(), a.realify().mul(&b.realify()).unwrap());
    }

    #[test]
    fn clifford_product_is_associative(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = seeded(seed);
        let mut el = || {
            let mut x = CliffordElement::<Rational>::zero(n).unwrap();
            for _ in 0..4 {
                let mask: u16 = rng.random_range(0..(1u16 << n));
                let c: Vec<Rational> = dyadic_vec(&mut rng, 1, 2, 2);
                x = x.add(&CliffordElement::blade(n, mask, c[0].clone()).unwrap()).unwrap();
            }
            x
        };
        let (a, b, c) = (el(), el(), el());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn ad_invariance_of_parts(seed in any::<u64>(), k in 0usize..7) {
        let f = families()[k];
        let d = ReductiveDecomposition::<Rational>::build(f).unwrap().to_f64();
        prop_assert!(d.ad_invariance_residual(&mut seeded(seed), 2).unwrap() < 1e-9);
    }

    #[test]
    fn metric_is_ad_h_invariant(seed in any::<u64>(), k in 0usize..7) {
        let f = families()[k];
        let d = ReductiveDecomposition::<Rational>::build(f).unwrap().to_f64();
        let mut rng = seeded(seed);
        let t = rng.random_range(0.2..1.5);
        let m = DiagonalMetric::<f64>::new(f, t, Some(rng.random_range(0.2..1.5))).unwrap();
        let random_p = |rng: &mut spherekit::algebra::random::SeededRng| {
            let (tag, size) = f.ambient();
            let mut z = MatF::zeros(tag, size).unwrap();
            for &p in f.p_parts() {
                for b in d.basis(p) {
                    z.axpy(&gaussian_vec(rng, 1)[0], b).unwrap();
                }
            }
            z
        };
        let (x, y) = (random_p(&mut rng), random_p(&mut rng));
        let a = expm(&d.random_h(&mut rng)).unwrap();
        let before = metric_inner(&m, &d, &x, &y).unwrap();
        let after = metric_inner(&m, &d, &x.conjugate_by(&a).unwrap(), &y.conjugate_by(&a).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-9 * (1.0 + before.abs()));
    }

    #[test]
    fn cw_fields_have_constant_length(seed in any::<u64>(), k in 0usize..4, n in 1usize..4) {
        let tag = [FieldTag::R, FieldTag::C, FieldTag::H, FieldTag::C][k];
        let n = if tag == FieldTag::R || k == 3 { 2 * n - 1 } else { n };
        let f = match k {
            3 => Family::SpecialUnitary { n },
            _ => Family::Unitary { field: tag, n },
        };
        let v = pythagorean_tangent::<Rational, _>(&mut seeded(seed), tag, n);
        let u = cw_field_for_vector(f, &v).unwrap();
        let cert = constant_length_test(&u).unwrap().unwrap();
        let r2 = v.iter().fold(qi(0), |a, x| a + x.norm_sqr());
        prop_assert_eq!(cert.c_squared, r2.to_string());
        prop_assert_eq!(cert.residual, 0.0);
        for (j, x) in v.iter().enumerate() {
            prop_assert_eq!(&u.get(j, 0), x);
        }
    }

    #[test]
    fn orbit_label_survives_conjugation(seed in any::<u64>(), n1 in 2usize..6) {
        let mut rng = seeded(seed);
        let l = rng.random_range(0..=n1);
        let i = |s: f64| HyperComplex::new(FieldTag::C, vec![0.0, s]).unwrap();
        let d: Vec<_> = (0..n1).map(|k| i(if k < l { 1.0 } else { -1.0 })).collect();
        let v = MatF::diagonal(FieldTag::C, &d).unwrap();
        let a = spherekit::algebra::random::random_unitary(&mut rng, FieldTag::C, n1).unwrap();
        let lab = orbit_label_u(&v.conjugate_by(&a).unwrap()).unwrap();
        prop_assert_eq!(lab.l, l);
    }

    #[test]
    fn spin9_bracket_inclusions(seed in any::<u64>()) {
        let parts = spin9::parts();
        let mut rng = seeded(seed);
        let mut combo = |p: spin9::Part| {
            let basis = parts.basis(p);
            let c: Vec<Rational> = dyadic_vec(&mut rng, basis.len(), 2, 2);
            basis.iter().zip(&c).fold(Bivector::zero(9).unwrap(), |acc, (b, x)| acc.add(&b.scale(x)).unwrap())
        };
        let (a, b, c) = (combo(spin9::Part::P2), combo(spin9::Part::P1), combo(spin9::Part::P2));
        let ab = a.bracket(&b).unwrap();
        prop_assert_eq!(parts.project(&ab, spin9::Part::P1), ab);
        let ac = a.bracket(&c).unwrap();
        prop_assert_eq!(parts.project(&ac, spin9::Part::H), ac);
    }

    #[test]
    fn projection_kernel_is_trivial(seed in any::<u64>()) {
        let v: Vec<Rational> = dyadic_vec(&mut seeded(seed), 8, 2, 3);
        prop_assume!(v.iter().any(|x| !x.is_zero()));
        prop_assert_eq!(spin9::pv_kernel_dim(&v, spin9::parts(), 0.0), 0);
    }

    #[test]
    fn p1_is_a_clifford_killing_space(seed in any::<u64>()) {
        let w: Vec<Rational> = rational_unit_vector(&mut seeded(seed), 8);
        let emb = spin9::embedding();
        let mut b = Bivector::zero(9).unwrap();
        for (i, c) in w.iter().enumerate() {
            b.set(i + 1, 9, c.clone()).unwrap();
        }
        let u = emb.theta(&b).unwrap();
        let cert = constant_length_test(&u).unwrap().unwrap();
        let unit = emb.theta(&Bivector::<Rational>::basis(9, 1, 9).unwrap()).unwrap();
        let reference = constant_length_test(&unit).unwrap().unwrap();
        prop_assert_eq!(cert.c_squared, reference.c_squared);
    }

    #[test]
    fn non_simple_bivectors_fail(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let g: Vec<Rational> = dyadic_vec(&mut rng, 36, 2, 2);
        let b = Bivector::from_coords(9, g).unwrap();
        let simple = is_simple(&b).is_some();
        let u = spin9::theta(&b).unwrap();
        prop_assert_eq!(constant_length_test(&u).unwrap().is_some(), simple);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn admissible_combinations_stay_admissible(seed in any::<u64>(), k in 0usize..13, th in 1i64..10) {
        let f = table2_families()[k];
        let range = ClassifiedRange::of(f).unwrap();
        let pts: Vec<_> = default_grid(f).unwrap().into_iter().filter(|(t, s)| range.contains(t, s)).collect();
        let mut rng = seeded(seed);
        let (t1, s1) = &pts[rng.random_range(0..pts.len())];
        let (t2, s2) = &pts[rng.random_range(0..pts.len())];
        let theta = Rational::ratio(th, 10);
        let x = MetricParams::for_family(f, t1, s1).unwrap();
        let y = MetricParams::for_family(f, t2, s2).unwrap();
        let (t, s) = combine_metrics(&x, &y, &theta).unwrap().family_ts(f).unwrap();
        prop_assert!(family_inequalities(f).unwrap().iter().all(|q| q.holds_exact(&t, &s)));
        prop_assert!(range.contains(&t, &s));

        // convex combinations of duals are duals of admissible metrics
        let lam = Rational::ratio(10 - th, 10);
        let dx = dual_params(&x).unwrap();
        let dy = dual_params(&y).unwrap();
        let mix: Vec<Rational> = dx.values().iter().zip(dy.values())
            .map(|(a, b)| (qi(1) - lam.clone()) * a.clone() + lam.clone() * b.clone()).collect();
        let back = dual_params(&MetricParams::new(mix).unwrap()).unwrap();
        let (t, s) = back.family_ts(f).unwrap();
        prop_assert!(range.contains(&t, &s));
    }

    #[test]
    fn dual_2_mean_commutes_with_projection(seed in any::<u64>(), m in 2usize..5) {
        let mut rng = seeded(seed);
        let mut ell = || {
            let g = nalgebra::DMatrix::from_fn(m + 1, m + 1, |_, _| gaussian_vec(&mut rng, 1)[0]);
            Ellipsoid::new(&g * g.transpose() + nalgebra::DMatrix::identity(m + 1, m + 1)).unwrap()
        };
        let (a, b) = (ell(), ell());
        let theta = 0.3;
        let p = nalgebra::DMatrix::<f64>::identity(m + 1, m);
        let lhs = dual_2_mean_ellipsoid(&a.project(&p).unwrap(), &b.project(&p).unwrap(), theta).unwrap();
        let rhs = dual_2_mean_ellipsoid(&a, &b, theta).unwrap().project(&p).unwrap();
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-9 * rhs.matrix().amax());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dual_is_an_involution(xs in proptest::collection::vec((1i64..50, 1i64..50), 1..5)) {
        let x = MetricParams::new(xs.iter().map(|&(a, b)| Rational::ratio(a, b)).collect()).unwrap();
        prop_assert_eq!(dual_params(&dual_params(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn accepted_delta_fields_survive_orbit_sampling(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = seeded(seed);
        let v = pythagorean_tangent::<Rational, _>(&mut rng, FieldTag::C, n);
        let u = su_delta_field(&v, n).unwrap();
        prop_assert!(round_delta_test(&u).unwrap().is_accepted());
        let f = Family::SpecialUnitary { n };
        let d = ReductiveDecomposition::<Rational>::build(f).unwrap().to_f64();
        let m = DiagonalMetric::<f64>::round(f);
        let sampled = sampled_delta_test(&u.to_f64(), &m, &d, 200, &mut rng).unwrap();
        prop_assert!(sampled.verdict.is_pass(), "growth {}", sampled.worst_margin);
    }
}

#[test]
fn octonion_norm_is_multiplicative() {
    let mut rng = seeded(11);
    for _ in 0..1000 {
        let a = HyperComplex::new(FieldTag::O, dyadic_vec::<Rational, _>(&mut rng, 8, 3, 2)).unwrap();
        let b = HyperComplex::new(FieldTag::O, dyadic_vec::<Rational, _>(&mut rng, 8, 3, 2)).unwrap();
        assert_eq!(hc_mul(&a, &b).unwrap().norm_sqr(), a.norm_sqr() * b.norm_sqr());
    }
}

#[test]
fn simple_bivectors_square_to_minus_identity() {
    let mut rng = seeded(12);
    let emb = spin9::embedding();
    let id = MatF::<f64>::identity(FieldTag::R, 16).unwrap();
    for _ in 0..1000 {
        let v = gaussian_vec(&mut rng, 9);
        let w0 = gaussian_vec(&mut rng, 9);
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / nv).collect();
        let dot: f64 = v.iter().zip(&w0).map(|(a, b)| a * b).sum();
        let w: Vec<f64> = w0.iter().zip(&v).map(|(a, b)| a - dot * b).collect();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let w: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let b = bivector_from_vectors(9, &v, &w).unwrap();
        let u = emb.theta(&b).unwrap();
        assert!(u.mul(&u).unwrap().add(&id).unwrap().frob_norm() < 1e-9);
    }
}

#[test]
fn support_function_is_convex() {
    let mut rng = seeded(13);
    for _ in 0..1000 {
        let g = nalgebra::DMatrix::from_fn(3, 3, |_, _| gaussian_vec(&mut rng, 1)[0]);
        let e = Ellipsoid::new(&g * g.transpose() + nalgebra::DMatrix::identity(3, 3) * 0.1).unwrap();
        let (u1, u2) = (gaussian_vec(&mut rng, 3), gaussian_vec(&mut rng, 3));
        let th: f64 = rng.random_range(0.0..1.0);
        let mid: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| (1.0 - th) * a + th * b).collect();
        let lhs = support(&e, &mid).unwrap();
        let rhs = (1.0 - th) * support(&e, &u1).unwrap() + th * support(&e, &u2).unwrap();
        assert!(lhs <= rhs + 1e-12 * rhs.abs().max(1.0));
    }
}

#[test]
fn passing_sets_are_intervals() {
    for f in table2_families() {
        let ineqs = family_inequalities(f).unwrap();
        let grid = default_grid(f).unwrap();
        let pass = |t: &Rational, s: &Rational| ineqs.iter().all(|q| q.holds_exact(t, s));
        // in t along s = t, and in s for each fixed t
        let diag: Vec<bool> = grid.iter().filter(|(t, s)| t == s).map(|(t, s)| pass(t, s)).collect();
        let runs = diag.windows(2).filter(|w| w[0] != w[1]).count();
        assert!(runs <= 2, "{f}: {diag:?}");
        if f.has_s() {
            let mut ts: Vec<&Rational> = grid.iter().map(|(t, _)| t).collect();
            ts.dedup();
            for t in ts {
                let col: Vec<bool> = grid.iter().filter(|(u, _)| u == t).map(|(t, s)| pass(t, s)).collect();
                // an order ideal: passing s values come first
                assert!(col.windows(2).all(|w| w[0] || !w[1]), "{f} at t = {t}");
            }
        }
    }
}
