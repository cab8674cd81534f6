//! Linear algebra helpers: symmetric spectra and the matrix exponential
//! (floating point, via nalgebra), plus row reduction and Gram–Schmidt that
//! run in either arithmetic mode.

use nalgebra::DMatrix;

use super::hypercomplex::FieldTag;
use super::matrix::MatF;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Symmetry tolerance accepted by [`sym_eigvals`].
pub const SYMMETRY_TOL: f64 = 1e-10;

fn to_dmatrix(m: &MatF<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.n(), m.n(), m.data())
}

fn from_dmatrix(m: &DMatrix<f64>) -> MatF<f64> {
    let n = m.nrows();
    let mut vals = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            vals.push(m[(i, j)]);
        }
    }
    MatF::from_real(n, &vals).expect("square")
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn sym_eigvals(s: &MatF<f64>) -> Result<Vec<f64>> {
    if s.tag() != FieldTag::R {
        return Err(Error::UnsupportedField(
            s.tag(),
            "sym_eigvals needs a real matrix".into(),
        ));
    }
    let n = s.n();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (s.entry(i, j)[0], s.entry(j, i)[0]);
            if (a - b).abs() > SYMMETRY_TOL {
                return Err(Error::Precondition(format!(
                    "matrix is not symmetric: |S[{i},{j}] - S[{j},{i}]| = {:e}",
                    (a - b).abs()
                )));
            }
        }
    }
    let eig = to_dmatrix(s).symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}


/// Matrix exponential of a matrix over ℝ, ℂ or ℍ.
///
/// Works on the realification with nalgebra's Padé scaling-and-squaring.
pub fn expm(u: &MatF<f64>) -> Result<MatF<f64>> {
    let r = to_dmatrix(&u.realify()).exp();
    MatF::derealify(u.tag(), &from_dmatrix(&r))
}

/// Reduced row echelon form in place; returns pivot columns.
///
/// Pivots are chosen by largest magnitude, and entries at or below `tol` count
/// as zero (exact zero in rational mode).
pub fn rref<T: Scalar>(rows: &mut [Vec<T>], tol: f64) -> Vec<usize> {
    let m = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let pick = if T::EXACT {
            (r..m).find(|&i| !rows[i][c].is_zero())
        } else {
            (r..m)
                .filter(|&i| !rows[i][c].is_negligible(tol))
                .max_by(|&a, &b| rows[a][c].to_f64().abs().total_cmp(&rows[b][c].to_f64().abs()))
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v *= inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= f.clone() * pv.clone();
                }
            }
            if !T::EXACT {
                row[c] = T::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>], tol: f64) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, tol).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], ncols: usize, tol: f64) -> Vec<Vec<T>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); ncols];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -work[r][f].clone();
            }
            x
        })
        .collect()
}

/// Unique solution of `A x = b`; errors when `A` is rank deficient or the
/// system is inconsistent.
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T], tol: f64) -> Result<Vec<T>> {
    let ncols = a.first().map_or(0, Vec::len);
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "{} equations but {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, tol);
    if pivots.contains(&ncols) {
        return Err(Error::Precondition("inconsistent linear system".into()));
    }
    if pivots.len() < ncols {
        return Err(Error::Precondition(format!(
            "singular linear system (rank {} < {ncols})",
            pivots.len()
        )));
    }
    Ok((0..ncols).map(|r| aug[r][ncols].clone()).collect())
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Orthogonal (not normalized) basis for the span of `vecs`, by modified
/// Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual norm falls below `tol` (relative to their
/// original norm) are dropped. In exact mode only exact zeros are dropped.
pub fn gram_schmidt<T: Scalar>(vecs: &[Vec<T>], tol: f64) -> Vec<Vec<T>> {
    let mut basis: Vec<(Vec<T>, T)> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        let passes = if T::EXACT { 1 } else { 2 };
        for _ in 0..passes {
            for (b, bb) in &basis {
                let c = dot(&w, b) / bb.clone();
                if c.is_zero() {
                    continue;
                }
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c.clone() * bi.clone();
                }
            }
        }
        let ww = dot(&w, &w);
        let keep = if T::EXACT {
            !ww.is_zero()
        } else {
            let vv = dot(v, v).to_f64();
            ww.to_f64().sqrt() > tol * vv.sqrt().max(1.0)
        };
        if keep {
            basis.push((w, ww));
        }
    }
    basis.into_iter().map(|(b, _)| b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, qi, Rational};
    use num_traits::Zero;

    #[test]
    fn eigvals_of_identity_and_diag() {
        let id = MatF::<f64>::identity(FieldTag::R, 3).unwrap();
        assert_eq!(sym_eigvals(&id).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = MatF::from_real(2, &[2.0, 0.0, 0.0, -1.0]).unwrap();
        assert_eq!(sym_eigvals(&d).unwrap(), vec![-1.0, 2.0]);
    }

    #[test]
    fn non_symmetric_is_rejected() {
        let m = MatF::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(sym_eigvals(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn expm_of_rotation_generator() {
        let t = 0.7_f64;
        let z = MatF::from_real(2, &[0.0, -t, t, 0.0]).unwrap();
        let e = expm(&z).unwrap();
        let want = MatF::from_real(2, &[t.cos(), -t.sin(), t.sin(), t.cos()]).unwrap();
        assert!(e.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn nullspace_and_solve_exact() {
        let a = vec![vec![qi(1), qi(2), qi(3)], vec![qi(2), qi(4), qi(6)]];
        let ns = nullspace(&a, 3, 0.0);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert!(dot(&a[0], x).is_zero());
        }
        let m = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let x = solve(&m, &[qi(1), qi(2)], 0.0).unwrap();
        assert_eq!(x, vec![q(1, 5), q(3, 5)]);
        assert!(solve(&a[..1], &[qi(1)], 0.0).is_err());
    }

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let vs: Vec<Vec<Rational>> = vec![
            vec![qi(1), qi(1), qi(0)],
            vec![qi(2), qi(2), qi(0)],
            vec![qi(1), qi(0), qi(1)],
        ];
        let b = gram_schmidt(&vs, 0.0);
        assert_eq!(b.len(), 2);
        assert!(dot(&b[0], &b[1]).is_zero());
    }
}
