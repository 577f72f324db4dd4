// SPDX-License-Identifier: Apache-2.0

//! Real symmetric eigensolvers: implicit QL on tridiagonal matrices and
//! Householder reduction for dense ones.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and eigenvector rows.
///
/// `rows[r][k]` is component `row_ids[r]` of eigenvector `k`.
#[derive(Debug, Clone)]
pub struct TridiagEigen<T> {
    pub values: Vec<T>,
    pub row_ids: Vec<usize>,
    pub rows: Vec<Vec<T>>,
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `diag` has length `n`, `off` length `n−1` (`off[i]` couples `i` and `i+1`).
/// `z` holds the rows of the transformation being accumulated; it is
/// rotated in place and each row is independent of the others, so passing
/// only a few rows of the identity yields those rows of the eigenvector
/// matrix at `O(n)` cost per row and sweep.
pub fn tql_rows<T: Real>(diag: &mut [T], off: &[T], z: &mut [Vec<T>]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    let d = diag;
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        iterations: MAX_SWEEPS,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in z.iter_mut() {
                        let hz = row[i + 1];
                        row[i + 1] = s * row[i] + c * hz;
                        row[i] = c * row[i] - s * hz;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Sort eigenpairs ascending, permuting the accumulated rows alongside.
fn sort_pairs<T: Real>(values: &mut Vec<T>, rows: &mut [Vec<T>]) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(std::cmp::Ordering::Equal));
    *values = order.iter().map(|&i| values[i]).collect();
    for row in rows.iter_mut() {
        let permuted: Vec<T> = order.iter().map(|&i| row[i]).collect();
        *row = permuted;
    }
}

/// Eigen-decomposition of a symmetric tridiagonal matrix tracking only the
/// requested rows of the eigenvector matrix.
pub fn tridiag_eigen_rows<T: Real>(diag: &[T], off: &[T], row_ids: &[usize]) -> Result<TridiagEigen<T>> {
    let n = diag.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(Error::InvalidArgument(format!(
            "tridiagonal sizes {n} and {}",
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut rows: Vec<Vec<T>> = row_ids
        .iter()
        .map(|&r| {
            let mut v = vec![T::zero(); n];
            v[r] = T::one();
            v
        })
        .collect();
    tql_rows(&mut d, off, &mut rows)?;
    sort_pairs(&mut d, &mut rows);
    Ok(TridiagEigen {
        values: d,
        row_ids: row_ids.to_vec(),
        rows,
    })
}

/// Full eigen-decomposition of a symmetric tridiagonal matrix.
/// Returns eigenvalues and the row-major eigenvector matrix (columns = vectors).
pub fn tridiag_eigen_full<T: Real>(diag: &[T], off: &[T]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let ids: Vec<usize> = (0..diag.len()).collect();
    let te = tridiag_eigen_rows(diag, off, &ids)?;
    Ok((te.values, te.rows))
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form.
/// Returns `(diag, off, q)` with `A = Q T Qᵀ`; `q` is row-major.
pub fn householder_tridiagonalize<T: Real>(a: &[Vec<T>]) -> (Vec<T>, Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut v: Vec<Vec<T>> = a.to_vec();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    if n == 0 {
        return (d, vec![], v);
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
                v[j][i] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = T::zero();
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    v[k][j] -= upd;
                }
                d[j] = v[i - 1][j];
                v[i][j] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    v[k][j] -= upd;
                }
            }
        }
        for k in 0..=i {
            v[k][i + 1] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = T::zero();
    }
    v[n - 1][n - 1] = T::one();
    let off = e[1..].to_vec();
    (d, off, v)
}

/// Dense symmetric eigen-decomposition. Returns ascending eigenvalues and the
/// row-major eigenvector matrix (columns = vectors), sign-normalized.
pub fn symmetric_eigen<T: Real>(a: &[Vec<T>]) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let (mut d, off, mut q) = householder_tridiagonalize(a);
    tql_rows(&mut d, &off, &mut q)?;
    sort_pairs(&mut d, &mut q);
    fix_signs(&mut q);
    Ok((d, q))
}

/// Make the first non-negligible component of every column positive.
pub fn fix_signs<T: Real>(rows: &mut [Vec<T>]) {
    let n = rows.first().map_or(0, Vec::len);
    let tiny = T::epsilon().sqrt() * T::lit(1e-3);
    for k in 0..n {
        let lead = rows.iter().map(|r| r[k]).find(|x| x.abs() > tiny);
        if let Some(x) = lead {
            if x < T::zero() {
                for r in rows.iter_mut() {
                    r[k] = -r[k];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &[Vec<f64>], vals: &[f64], vecs: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i][j] * vecs[j][k]).sum();
                worst = worst.max((av - vals[k] * vecs[i][k]).abs());
            }
        }
        worst
    }

    #[test]
    fn tridiagonal_uniform_chain() {
        let n = 9;
        let d = vec![0.0; n];
        let e = vec![-0.5; n - 1];
        let (vals, vecs) = tridiag_eigen_full(&d, &e).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let q = (k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            assert!((v + q.cos()).abs() < 1e-14);
        }
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n - 1 {
            a[i][i + 1] = -0.5;
            a[i + 1][i] = -0.5;
        }
        assert!(residual(&a, &vals, &vecs) < 1e-13);
    }

    #[test]
    fn selected_rows_match_full() {
        let d = vec![0.1, -0.3, 0.7, 0.2, 0.0, 1.1];
        let e = vec![-0.5, -0.4, -0.6, -0.5, -0.3];
        let (vals, full) = tridiag_eigen_full(&d, &e).unwrap();
        let part = tridiag_eigen_rows(&d, &e, &[0, 5]).unwrap();
        assert_eq!(vals, part.values);
        assert_eq!(full[0], part.rows[0]);
        assert_eq!(full[5], part.rows[1]);
    }

    #[test]
    fn dense_random_symmetric() {
        let n = 12;
        let mut a = vec![vec![0.0; n]; n];
        let mut seed = 12345u64;
        for i in 0..n {
            for j in 0..=i {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let x = ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                a[i][j] = x;
                a[j][i] = x;
            }
        }
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(residual(&a, &vals, &vecs) < 1e-13);
        for p in 0..n {
            for q in 0..n {
                let dot: f64 = (0..n).map(|i| vecs[i][p] * vecs[i][q]).sum();
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn degenerate_and_trivial_sizes() {
        let (v, q) = symmetric_eigen(&[vec![2.0f64]]).unwrap();
        assert_eq!(v, vec![2.0]);
        assert_eq!(q, vec![vec![1.0]]);
        let a = vec![vec![1.0f64, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 3.0]];
        let (v, q) = symmetric_eigen(&a).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[2] - 3.0).abs() < 1e-15);
        assert!(residual(&a, &v, &q) < 1e-15);
    }
}
