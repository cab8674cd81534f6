//! The spinor embedding θ: spin(9) → so(16) on 𝕆 ⊕ 𝕆, the splitting
//! spin(9) = 𝔥 ⊕ 𝔭₂ ⊕ 𝔭₁ at `x0 = (1, 0, …, 0)`, and constant-length fields
//! through any tangent vector of S¹⁵.
//!
//! Generator `e_i` (i ≤ 8) of Cl⁸ acts through `φ(x)(a, b) = (x·b, -x̄·a)` for
//! the octonion `x = o_{m(i)}`, where `m = [2, 5, 3, 4, 6, 1, 7, 0]`. With
//! that labeling `e1e2 + e7e8`, `e3e4 + e7e8`, `e5e6 + e7e8` fix `x0`.
//! θ sends `e_i·e9` to `φ(e_i)` and `e_i·e_j` (j ≤ 8) to `φ(e_i)φ(e_j)`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::linalg::{dot, gram_schmidt, nullspace, rank, solve};
use crate::algebra::{octonion_table, qi, Affine, FieldTag, MatF, Rational, Scalar, Zero};
use crate::clifford::{bivector_from_vectors, is_simple, pair_index, pairs, spin9_inner, Bivector, CliffordElement};
use crate::error::{Error, Result};

/// Octonion unit assigned to each Clifford generator `e1..e8`.
pub const OCTONION_OF_GENERATOR: [usize; 8] = [2, 5, 3, 4, 6, 1, 7, 0];

/// Number of basis bivectors of spin(9).
pub const DIM: usize = 36;

type SparseSigned = Vec<(usize, usize, i8)>;

#[derive(Debug)]
pub struct SpinEmbedding {
    phi: Vec<MatF<Rational>>,
    theta_basis: Vec<MatF<Rational>>,
    sparse: Vec<SparseSigned>,
}

/// Left multiplication by the octonion unit `o_m` on ℝ⁸.
fn left_mult(m: usize) -> [[i8; 8]; 8] {
    let table = octonion_table();
    let mut l = [[0i8; 8]; 8];
    for (b, row) in table[m].iter().enumerate() {
        let c = (row.unsigned_abs() - 1) as usize;
        l[c][b] = row.signum();
    }
    l
}

fn phi_unit(m: usize) -> MatF<Rational> {
    let l = left_mult(m);
    let mut out = MatF::zeros(FieldTag::R, 16).expect("real");
    for (r, row) in l.iter().enumerate() {
        for (c, &lrc) in row.iter().enumerate() {
            if lrc == 0 {
                continue;
            }
            // upper right block: a' = x·b
            out.set_coeff(r, 8 + c, 0, qi(i64::from(lrc)));
            // lower left: b' = -x̄·a, and -x̄ = x for imaginary units, -1 for x = 1
            let lower = if m == 0 { -l[r][c] } else { l[r][c] };
            out.set_coeff(8 + r, c, 0, qi(i64::from(lower)));
        }
    }
    out
}

fn sparsify(m: &MatF<Rational>) -> SparseSigned {
    let mut out = Vec::new();
    for i in 0..16 {
        for j in 0..16 {
            let v = &m.entry(i, j)[0];
            if !v.is_zero() {
                let s = if *v == qi(1) {
                    1
                } else if *v == qi(-1) {
                    -1
                } else {
                    panic!("θ basis entries are signs")
                };
                out.push((i, j, s));
            }
        }
    }
    out
}

impl SpinEmbedding {
    /// Builds φ and the 36 θ-images and checks the defining identities.
    ///
    /// Panics if any of them fails; they are properties of the fixed tables,
    /// not of user input.
    pub fn build() -> SpinEmbedding {
        let phi: Vec<MatF<Rational>> = OCTONION_OF_GENERATOR.iter().map(|&m| phi_unit(m)).collect();
        let id = MatF::<Rational>::identity(FieldTag::R, 16).expect("real");
        let minus_id = id.neg();
        for (i, p) in phi.iter().enumerate() {
            assert_eq!(p.mul(p).unwrap(), minus_id, "φ(e{})² ≠ -Id", i + 1);
            for (j, q) in phi.iter().enumerate().skip(i + 1) {
                let anti = p.mul(q).unwrap().add(&q.mul(p).unwrap()).unwrap();
                assert!(anti.is_zero(), "φ(e{}) and φ(e{}) do not anticommute", i + 1, j + 1);
            }
        }
        let mut theta_basis = Vec::with_capacity(DIM);
        for (i, j) in pairs(9) {
            let m = if j == 9 {
                phi[i - 1].clone()
            } else {
                phi[i - 1].mul(&phi[j - 1]).unwrap()
            };
            assert!(m.is_skew_hermitian(0.0), "θ(e{i}e{j}) is not skew-symmetric");
            assert_eq!(m.mul(&m).unwrap(), minus_id, "θ(e{i}e{j})² ≠ -Id");
            theta_basis.push(m);
        }
        let rows: Vec<Vec<Rational>> = theta_basis.iter().map(|m| m.data().to_vec()).collect();
        assert_eq!(rank(&rows, 0.0), DIM, "θ-images are dependent");
        let sparse = theta_basis.iter().map(sparsify).collect();
        SpinEmbedding {
            phi,
            theta_basis,
            sparse,
        }
    }

    pub fn phi(&self) -> &[MatF<Rational>] {
        &self.phi
    }

    /// θ(e_i·e_j) for `1 <= i < j <= 9`.
    pub fn basis_matrix(&self, i: usize, j: usize) -> &MatF<Rational> {
        &self.theta_basis[pair_index(9, i, j)]
    }

    pub fn basis_matrices(&self) -> &[MatF<Rational>] {
        &self.theta_basis
    }

    /// Linear extension of θ.
    pub fn theta<T: Scalar>(&self, w: &Bivector<T>) -> Result<MatF<T>> {
        check_n9(w)?;
        let mut out = MatF::<T>::zeros(FieldTag::R, 16)?;
        for (p, c) in w.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, j, s) in &self.sparse[p] {
                let cur = out.entry(i, j)[0].clone();
                let v = if s > 0 { cur + c.clone() } else { cur - c.clone() };
                out.set_coeff(i, j, 0, v);
            }
        }
        Ok(out)
    }

    /// `θ(W)·x0`, the first column of θ(W).
    pub fn theta_x0<T: Scalar>(&self, w: &Bivector<T>) -> Result<Vec<T>> {
        check_n9(w)?;
        let mut out = vec![T::zero(); 16];
        for (p, c) in w.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(i, j, s) in &self.sparse[p] {
                if j == 0 {
                    if s > 0 {
                        out[i] += c.clone();
                    } else {
                        out[i] -= c.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of θ on its image: `γ_ij = ⟨U, θ(e_ie_j)⟩ / 8`. Errors if `U`
    /// is not in θ(spin(9)).
    pub fn theta_inverse<T: Scalar>(&self, u: &MatF<T>) -> Result<Bivector<T>> {
        if u.tag() != FieldTag::R || u.n() != 16 {
            return Err(Error::Dimension("θ-preimage needs a real 16×16 matrix".into()));
        }
        let eight = T::from_i64(8);
        let coords: Vec<T> = self
            .sparse
            .iter()
            .map(|sp| {
                let s = sp.iter().fold(T::zero(), |acc, &(i, j, s)| {
                    let v = u.entry(i, j)[0].clone();
                    if s > 0 {
                        acc + v
                    } else {
                        acc - v
                    }
                });
                // ½ Σ entrywise products, divided by ⟨θ_p, θ_p⟩ = 8
                s * T::ratio(1, 2) / eight.clone()
            })
            .collect();
        let w = Bivector::from_coords(9, coords)?;
        let back = self.theta(&w)?;
        if !back.sub(u)?.is_negligible(1e-9) {
            return Err(Error::Precondition("matrix is not in θ(spin(9))".into()));
        }
        Ok(w)
    }
}

fn check_n9<T: Scalar>(w: &Bivector<T>) -> Result<()> {
    if w.n() != 9 {
        return Err(Error::Dimension(format!("θ is defined on spin(9), got spin({})", w.n())));
    }
    Ok(())
}

/// The cached embedding.
pub fn embedding() -> &'static SpinEmbedding {
    static CELL: OnceLock<SpinEmbedding> = OnceLock::new();
    CELL.get_or_init(SpinEmbedding::build)
}

pub fn theta<T: Scalar>(w: &Bivector<T>) -> Result<MatF<T>> {
    embedding().theta(w)
}

/// Orthogonal bases (in γ-coordinates) of 𝔥 = spin(7), 𝔭₂ and 𝔭₁.
#[derive(Clone, Debug)]
pub struct Spin9Parts<T = Rational> {
    pub h: Vec<Bivector<T>>,
    pub p2: Vec<Bivector<T>>,
    pub p1: Vec<Bivector<T>>,
}

/// Computes the splitting: 𝔥 is the kernel of `W ↦ θ(W)x0`, 𝔭₂ its
/// orthocomplement in spin(8), 𝔭₁ = span{e_i·e9}. Runs in either arithmetic
/// mode; `tol` is the rank threshold for floats.
pub fn compute_parts<T: Scalar>(tol: f64) -> Result<Spin9Parts<T>> {
    let emb = embedding();
    // 16 × 36 matrix of W ↦ θ(W)x0
    let mut rows = vec![vec![T::zero(); DIM]; 16];
    for (p, sp) in emb.sparse.iter().enumerate() {
        for &(i, j, s) in sp {
            if j == 0 {
                rows[i][p] = T::from_i64(i64::from(s));
            }
        }
    }
    let h_raw = nullspace(&rows, DIM, tol);
    let h = gram_schmidt(&h_raw, tol);
    // 𝔭₂: x in spin(8) coordinates with x ⊥ 𝔥
    let spin8: Vec<usize> = pairs(9)
        .iter()
        .enumerate()
        .filter(|(_, (_, j))| *j <= 8)
        .map(|(p, _)| p)
        .collect();
    let mut cons: Vec<Vec<T>> = h.clone();
    for (p, (_, j)) in pairs(9).iter().enumerate() {
        if *j == 9 {
            let mut e = vec![T::zero(); DIM];
            e[p] = T::one();
            cons.push(e);
        }
    }
    let p2_raw = nullspace(&cons, DIM, tol);
    let p2 = gram_schmidt(&p2_raw, tol);
    debug_assert!(p2.iter().all(|v| (0..DIM).all(|p| spin8.contains(&p) || v[p].is_zero())));
    let p1: Vec<Vec<T>> = (1..=8)
        .map(|i| {
            let mut e = vec![T::zero(); DIM];
            e[pair_index(9, i, 9)] = T::one();
            e
        })
        .collect();
    let wrap = |vs: Vec<Vec<T>>| -> Result<Vec<Bivector<T>>> {
        vs.into_iter().map(|v| Bivector::from_coords(9, v)).collect()
    };
    let parts = Spin9Parts {
        h: wrap(h)?,
        p2: wrap(p2)?,
        p1: wrap(p1)?,
    };
    if parts.h.len() != 21 || parts.p2.len() != 7 {
        return Err(Error::Numeric(format!(
            "spin(9) splitting has dims ({}, {}, 8), expected (21, 7, 8)",
            parts.h.len(),
            parts.p2.len()
        )));
    }
    Ok(parts)
}

/// Exact splitting, computed once.
pub fn parts() -> &'static Spin9Parts<Rational> {
    static CELL: OnceLock<Spin9Parts<Rational>> = OnceLock::new();
    CELL.get_or_init(|| compute_parts(0.0).expect("exact splitting"))
}

/// Which summand of spin(9) = 𝔥 ⊕ 𝔭₂ ⊕ 𝔭₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    H,
    P1,
    P2,
}

fn project_onto<T: Scalar>(w: &Bivector<T>, basis: &[Bivector<T>]) -> Bivector<T> {
    let mut out = Bivector::zero(9).expect("n = 9");
    for b in basis {
        let c = dot(w.coords(), b.coords()) / b.norm_sqr();
        if !c.is_zero() {
            out = out.add(&b.scale(&c)).expect("same n");
        }
    }
    out
}

impl<T: Scalar> Spin9Parts<T> {
    pub fn basis(&self, part: Part) -> &[Bivector<T>] {
        match part {
            Part::H => &self.h,
            Part::P1 => &self.p1,
            Part::P2 => &self.p2,
        }
    }

    /// Orthogonal projection (the spin(9) inner product is a multiple of
    /// the Euclidean one on γ-coordinates).
    pub fn project(&self, w: &Bivector<T>, part: Part) -> Bivector<T> {
        project_onto(w, self.basis(part))
    }
}

/// Exact parts converted to another scalar type.
pub fn parts_as<T: Scalar>() -> Spin9Parts<T> {
    let p = parts();
    let conv = |v: &Vec<Bivector<Rational>>| v.iter().map(|b| b.map(T::from_rational)).collect();
    Spin9Parts {
        h: conv(&p.h),
        p2: conv(&p.p2),
        p1: conv(&p.p1),
    }
}

fn parse(s: &str) -> Bivector<Rational> {
    Bivector::from_clifford(&CliffordElement::parse(9, s).expect("literal")).expect("bivector literal")
}

/// `X1 = e7e8 - e1e2 - e3e4 - e5e6`, a vector of 𝔭₂.
pub fn x1() -> Bivector<Rational> {
    parse("e7e8 - e1e2 - e3e4 - e5e6")
}

/// `(e1e2 + e7e8) + (e3e4 + e7e8) + (e5e6 + e7e8)`, a vector of 𝔥 with
/// `X1 + x1_completion() = 4e7e8`.
pub fn x1_completion() -> Bivector<Rational> {
    parse("e1e2 + e3e4 + e5e6 + 3*e7e8")
}

/// `Y = e1e2 + e3e4 + e5e6 - e7e8 = -X1` in 𝔭₂.
pub fn y_witness() -> Bivector<Rational> {
    parse("e1e2 + e3e4 + e5e6 - e7e8")
}

/// `X = e2·e9` in 𝔭₁.
pub fn x_witness() -> Bivector<Rational> {
    Bivector::basis(9, 2, 9).expect("n = 9")
}

/// `Z = -3e1e2 + e3e4 + e5e6 - e7e8` in 𝔥.
pub fn z_witness() -> Bivector<Rational> {
    parse("-3*e1e2 + e3e4 + e5e6 - e7e8")
}

/// Spanning vectors `e1e2 + e7e8`, `e3e4 + e7e8`, `e5e6 + e7e8` of part of 𝔥.
pub fn h_summands() -> [Bivector<Rational>; 3] {
    [parse("e1e2 + e7e8"), parse("e3e4 + e7e8"), parse("e5e6 + e7e8")]
}

/// One exactly checked identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub anchor: String,
    pub holds: bool,
    pub detail: String,
}

fn check(name: &str, anchor: &str, holds: bool, detail: String) -> IdentityCheck {
    IdentityCheck {
        name: name.into(),
        anchor: anchor.into(),
        holds,
        detail,
    }
}

/// Metric `(1/8)⟨·,·⟩|𝔭₁ + (t/2)⟨·,·⟩|𝔭₂` of a spin(9) vector, as an affine
/// function of `t`. Errors if `w` has an 𝔥-component.
pub fn psi_norm(w: &Bivector<Rational>) -> Result<Affine<Rational>> {
    let p = parts();
    if !p.project(w, Part::H).is_zero() {
        return Err(Error::Precondition("vector has a component in 𝔥".into()));
    }
    let w1 = p.project(w, Part::P1);
    let w2 = p.project(w, Part::P2);
    let n1 = spin9_inner(&w1, &w1)?;
    let n2 = spin9_inner(&w2, &w2)?;
    Ok(Affine::constant(n1 * Rational::ratio(1, 8)).add(&Affine::t(n2 * Rational::ratio(1, 2))))
}

/// Runs the exact spin(9) identity checks.
pub fn verify_spin9_identities() -> Vec<IdentityCheck> {
    let emb = embedding();
    let mut out = Vec::new();
    let inner16 = |w: &Bivector<Rational>| {
        let m = emb.theta(w).expect("n = 9");
        m.inner(&m).expect("same shape")
    };

    let x1 = x1();
    let n_x1 = spin9_inner(&x1, &x1).expect("n = 9");
    let n_x1_16 = inner16(&x1);
    out.push(check(
        "norm of X1",
        "<X1, X1> = 32 for X1 = e7e8 - e1e2 - e3e4 - e5e6",
        n_x1 == qi(32) && n_x1_16 == qi(32),
        format!("8·Σγ² = {n_x1}, ½tr θθ* = {n_x1_16}"),
    ));

    let v = x1.add(&x1_completion()).expect("n = 9");
    let target = parse("4*e7e8");
    let c = is_simple(&v).and_then(|s| s.c_exact());
    let same_x0 = emb.theta_x0(&x1).unwrap() == emb.theta_x0(&v).unwrap();
    let completion_in_h = emb.theta_x0(&x1_completion()).unwrap().iter().all(|x| x.is_zero());
    out.push(check(
        "X1 plus an h-vector is simple",
        "X1 + (e1e2+e7e8) + (e3e4+e7e8) + (e5e6+e7e8) = 4e7e8 with C = 4",
        v == target && c == Some(qi(4)) && same_x0 && completion_in_h,
        format!("sum = {v}, C = {c:?}, same image of x0: {same_x0}"),
    ));

    let (x, y, z) = (x_witness(), y_witness(), z_witness());
    let yx = y.bracket(&x).expect("n = 9");
    let yxx = yx.bracket(&x).expect("n = 9");
    let want = parse("-4*e1e2");
    let z_minus_y = z.sub(&y).expect("n = 9");
    let lhs16 = emb.theta(&yxx).unwrap();
    let (ty, tx) = (emb.theta(&y).unwrap(), emb.theta(&x).unwrap());
    let rhs16 = ty.bracket(&tx).unwrap().bracket(&tx).unwrap();
    out.push(check(
        "double bracket in spin(9)",
        "[[Y, X], X] = -4e1e2 = Z - Y for X = e2e9, Y = e1e2 + e3e4 + e5e6 - e7e8",
        yxx == want && z_minus_y == want && lhs16 == rhs16,
        format!("[[Y,X],X] = {yxx}; θ commutes with brackets: {}", lhs16 == rhs16),
    ));

    let ny = spin9_inner(&y.neg(), &y.neg()).unwrap();
    let nz = spin9_inner(&z, &z).unwrap();
    out.push(check(
        "norms of Y and Z",
        "<-Y, -Y> = 32 and <Z, Z> = 96",
        ny == qi(32) && nz == qi(96) && inner16(&z) == qi(96),
        format!("<-Y,-Y> = {ny}, <Z,Z> = {nz}"),
    ));

    let kills: Vec<bool> = h_summands()
        .iter()
        .map(|h| emb.theta_x0(h).unwrap().iter().all(|c| c.is_zero()))
        .collect();
    let z_in_h = parts().project(&z, Part::H) == z;
    let y_in_p2 = parts().project(&y, Part::P2) == y;
    out.push(check(
        "isotropy vectors",
        "e1e2 + e7e8, e3e4 + e7e8, e5e6 + e7e8 and Z annihilate x0; Y lies in p2",
        kills.iter().all(|&k| k) && z_in_h && y_in_p2,
        format!("annihilate x0: {kills:?}, Z in h: {z_in_h}, Y in p2: {y_in_p2}"),
    ));

    let metric = psi_norm(&x1);
    let ok = matches!(&metric, Ok(a) if *a == Affine::t(qi(16)));
    out.push(check(
        "metric norm of X1",
        "(X1, X1)_t = 16t under (1/8)<,>|p1 + (t/2)<,>|p2",
        ok,
        match metric {
            Ok(a) => format!("(X1, X1)_t = {a}"),
            Err(e) => e.to_string(),
        },
    ));
    out
}

/// Counts for the constant-length equations of a 16×16 skew matrix: in the
/// 15×15 block orthogonal to `x0`, the 105 off-diagonal entries of `U²`
/// vanish and the 14 later diagonal entries equal the first.
#[derive(Clone, Debug, Serialize)]
pub struct EquationCount {
    pub equations: usize,
    pub satisfied: usize,
    pub max_residual: f64,
}

pub fn constant_length_equations<T: Scalar>(u: &MatF<T>, tol: f64) -> Result<EquationCount> {
    if u.tag() != FieldTag::R || u.n() != 16 {
        return Err(Error::Dimension("expected a real 16×16 matrix".into()));
    }
    let sq = u.mul(u)?;
    let mut count = EquationCount {
        equations: 0,
        satisfied: 0,
        max_residual: 0.0,
    };
    let mut record = |r: T| {
        let a = r.to_f64().abs();
        count.equations += 1;
        if r.is_negligible(tol) {
            count.satisfied += 1;
        }
        count.max_residual = count.max_residual.max(a);
    };
    for i in 1..16 {
        for j in (i + 1)..16 {
            record(sq.entry(i, j)[0].clone());
        }
    }
    let d0 = sq.entry(1, 1)[0].clone();
    for i in 2..16 {
        record(sq.entry(i, i)[0].clone() - d0.clone());
    }
    Ok(count)
}

/// Constant-length field of spin(9) through a tangent vector `u ∈ ℝ¹⁶` at
/// `x0` (so `u[0] = 0`).
///
/// Writes `u = θ(W1)x0 + θ(W2)x0` with `W1 = v·e9 ∈ 𝔭₁`, `W2 ∈ 𝔭₂`, then
/// solves for `x ⊥ v` in ℝ⁸ with `p₂(v·x) = W2` and returns the simple
/// bivector `v·(x + e9) = v·x + W1`. When `W1 = 0` the field is `v·x` for
/// `v = e8`.
pub fn cw_field_spin9<T: Scalar>(u: &[T]) -> Result<Bivector<T>> {
    cw_field_spin9_with(u, &parts_as::<T>(), 1e-12)
}

pub fn cw_field_spin9_with<T: Scalar>(u: &[T], parts: &Spin9Parts<T>, tol: f64) -> Result<Bivector<T>> {
    if u.len() != 16 {
        return Err(Error::Dimension(format!("tangent vector of length {}", u.len())));
    }
    if !u[0].is_negligible(tol) {
        return Err(Error::Precondition("vector is not tangent at x0 (u[0] ≠ 0)".into()));
    }
    if u.iter().all(|c| c.is_negligible(tol)) {
        return Bivector::zero(9);
    }
    let emb = embedding();
    // coordinates of u in θ(𝔭₁)x0 ⊕ θ(𝔭₂)x0
    let images: Vec<Vec<T>> = parts
        .p1
        .iter()
        .chain(&parts.p2)
        .map(|b| emb.theta_x0(b))
        .collect::<Result<_>>()?;
    let a: Vec<Vec<T>> = (0..16)
        .map(|r| images.iter().map(|col| col[r].clone()).collect())
        .collect();
    let coef = solve(&a, u, tol)?;
    let mut w1 = Bivector::zero(9)?;
    for (b, c) in parts.p1.iter().zip(&coef[..8]) {
        w1 = w1.add(&b.scale(c))?;
    }
    let mut w2 = Bivector::zero(9)?;
    for (b, c) in parts.p2.iter().zip(&coef[8..]) {
        w2 = w2.add(&b.scale(c))?;
    }
    // W1 = Σ v_i e_i e9
    let mut v: Vec<T> = (1..=8).map(|i| w1.get(i, 9)).collect();
    let w1_zero = v.iter().all(|c| c.is_negligible(tol));
    if w1_zero {
        v = vec![T::zero(); 8];
        v[7] = T::one();
    }
    if w2.coords().iter().all(|c| c.is_negligible(tol)) {
        return Ok(w1);
    }
    let x = solve_pv(&v, &w2, parts, tol)?;
    let vx = bivector_from_vectors(9, &v, &x)?;
    if w1_zero {
        Ok(vx)
    } else {
        vx.add(&w1)
    }
}

/// Solves `p₂(v·x) = target`, `(x, v) = 0` for `x ∈ ℝ⁸`. The map
/// `x ↦ p₂(v·x)` on `v^⊥` is an isomorphism onto 𝔭₂ for `v ≠ 0`.
pub fn solve_pv<T: Scalar>(v: &[T], target: &Bivector<T>, parts: &Spin9Parts<T>, tol: f64) -> Result<Vec<T>> {
    let mut a = Vec::with_capacity(8);
    let mut b = Vec::with_capacity(8);
    for c in &parts.p2 {
        // Σ_{i<j} (v_i x_j - x_i v_j) c_ij, as a row in x
        let mut row = vec![T::zero(); 8];
        for (i, j, cij) in c.iter() {
            if j == 9 || cij.is_zero() {
                continue;
            }
            row[j - 1] += v[i - 1].clone() * cij.clone();
            row[i - 1] -= v[j - 1].clone() * cij.clone();
        }
        a.push(row);
        b.push(dot(target.coords(), c.coords()));
    }
    a.push(v.to_vec());
    b.push(T::zero());
    solve(&a, &b, tol)
}

/// Dimension of the kernel of `x ↦ p₂(v·x)` on `v^⊥` (zero for `v ≠ 0`).
pub fn pv_kernel_dim<T: Scalar>(v: &[T], parts: &Spin9Parts<T>, tol: f64) -> usize {
    let mut a = Vec::with_capacity(8);
    for c in &parts.p2 {
        let mut row = vec![T::zero(); 8];
        for (i, j, cij) in c.iter() {
            if j == 9 || cij.is_zero() {
                continue;
            }
            row[j - 1] += v[i - 1].clone() * cij.clone();
            row[i - 1] -= v[j - 1].clone() * cij.clone();
        }
        a.push(row);
    }
    a.push(v.to_vec());
    8 - rank(&a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{dyadic_vec, seeded};

    #[test]
    fn embedding_builds_and_basis_has_norm_8() {
        let emb = embedding();
        for m in emb.basis_matrices() {
            assert_eq!(m.inner(m).unwrap(), qi(8));
        }
        let a = emb.basis_matrix(1, 2);
        let b = emb.basis_matrix(3, 4);
        assert_eq!(a.inner(b).unwrap(), qi(0));
        let id = MatF::<Rational>::identity(FieldTag::R, 16).unwrap();
        let e89 = emb.basis_matrix(8, 9);
        assert_eq!(e89.mul(e89).unwrap(), id.neg());
    }

    #[test]
    fn theta_is_bracket_preserving_on_basis_pairs() {
        // entries are small integers, so f64 arithmetic here is exact
        let emb = embedding();
        let all = pairs(9);
        for &(i, j) in &all {
            for &(k, l) in &all {
                let a = Bivector::<f64>::basis(9, i, j).unwrap();
                let b = Bivector::<f64>::basis(9, k, l).unwrap();
                let lhs = emb.theta(&a.bracket(&b).unwrap()).unwrap();
                let rhs = emb.theta(&a).unwrap().bracket(&emb.theta(&b).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "e{i}e{j}, e{k}e{l}");
            }
        }
    }

    #[test]
    fn theta_of_zero_and_inverse() {
        let emb = embedding();
        assert!(emb.theta(&Bivector::<Rational>::zero(9).unwrap()).unwrap().is_zero());
        let z = z_witness();
        assert_eq!(emb.theta_inverse(&emb.theta(&z).unwrap()).unwrap(), z);
        assert!(emb.theta(&Bivector::<Rational>::zero(8).unwrap()).is_err());
    }

    #[test]
    fn parts_have_expected_dims_and_float_agrees() {
        let p = parts();
        assert_eq!((p.h.len(), p.p2.len(), p.p1.len()), (21, 7, 8));
        let pf = compute_parts::<f64>(1e-10).unwrap();
        assert_eq!((pf.h.len(), pf.p2.len(), pf.p1.len()), (21, 7, 8));
        // X1 ⊥ 𝔥 and lies in spin(8), so it projects to itself in 𝔭₂
        assert_eq!(p.project(&x1(), Part::P2), x1());
    }

    #[test]
    fn identities_all_hold() {
        for c in verify_spin9_identities() {
            assert!(c.holds, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn field_through_x1_image_is_4e7e8() {
        let u = embedding().theta_x0(&x1()).unwrap();
        let w = cw_field_spin9(&u).unwrap();
        assert_eq!(w, parse("4*e7e8"));
    }

    #[test]
    fn field_through_p1_vector_is_itself() {
        let e89 = Bivector::<Rational>::basis(9, 8, 9).unwrap();
        let u = embedding().theta_x0(&e89).unwrap();
        assert_eq!(cw_field_spin9(&u).unwrap(), e89);
    }

    #[test]
    fn random_fields_have_constant_length() {
        let mut rng = seeded(11);
        let emb = embedding();
        for _ in 0..20 {
            let mut u: Vec<Rational> = dyadic_vec(&mut rng, 16, 2, 2);
            u[0] = qi(0);
            let w = cw_field_spin9(&u).unwrap();
            let m = emb.theta(&w).unwrap();
            assert_eq!(m.first_column(), u);
            let norm: Rational = dot(&u, &u);
            let id = MatF::<Rational>::identity(FieldTag::R, 16).unwrap();
            assert_eq!(m.mul(&m).unwrap(), id.scale(&-norm));
            let eq = constant_length_equations(&m, 0.0).unwrap();
            assert_eq!((eq.equations, eq.satisfied), (119, 119));
        }
    }

    #[test]
    fn zero_tangent_gives_zero_field() {
        let u = vec![qi(0); 16];
        assert!(cw_field_spin9(&u).unwrap().is_zero());
        let mut bad = vec![qi(0); 16];
        bad[0] = qi(1);
        assert!(cw_field_spin9(&bad).is_err());
    }
}
