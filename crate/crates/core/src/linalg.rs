//! Small dense linear-algebra helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

/// Orthonormal basis of the (numerical) kernel of `m`, one column per basis
/// vector. Singular values at or below `tol` relative to the largest one are
/// treated as zero; a zero matrix has a full kernel.
pub fn nullspace(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let ncols = m.ncols();
    if m.nrows() == 0 {
        return (0..ncols)
            .map(|i| DVector::from_fn(ncols, |r, _| if r == i { 1.0 } else { 0.0 }))
            .collect();
    }
    // pad wide matrices with zero rows so the thin SVD carries a full v_t
    let work = if m.nrows() < ncols {
        let mut p = DMatrix::zeros(ncols, ncols);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = smax * tol;
    let mut basis = Vec::new();
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            basis.push(v_t.row(idx).transpose());
        }
    }
    basis
}

/// Rank of the column space of `m` with the same relative threshold.
pub fn column_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > smax * tol).count()
}

/// Orthonormal basis (columns) of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd requested u");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    // singular values come back unsorted; pick columns by threshold
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > smax * tol)
        .map(|(i, _)| i)
        .collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        out.column_mut(c).copy_from(&u.column(i));
    }
    out
}

/// Condition number estimate from the extreme singular values;
/// `f64::INFINITY` for a numerically singular matrix.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if smin <= 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
/// The series is summed until the term drops below 1e-16 relative to the
/// partial sum, well past the 1e-14 accuracy the callers rely on.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=40 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.norm() < 1e-16 * result.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Eigenvalues of a symmetric matrix, ascending. The input is symmetrized
/// first so tiny asymmetries from upstream arithmetic cannot leak in.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Trace inner product tr(a b^T).
pub fn trace_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Minimum-norm least-squares solution of a x = b through the pseudo
/// inverse, with singular values cut at `rel_tol` relative to the largest.
pub fn min_norm_solve(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd requested u");
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut x = DVector::zeros(a.ncols());
    if smax == 0.0 {
        return x;
    }
    for (idx, &s) in svd.singular_values.iter().enumerate() {
        if s > smax * rel_tol {
            let coef = u.column(idx).dot(b) / s;
            x += v_t.row(idx).transpose() * coef;
        }
    }
    x
}
