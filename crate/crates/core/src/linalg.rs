//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Thin singular value decomposition `a = u diag(s) v^T`, `s` descending.
///
/// One-sided Jacobi: every singular value is computed to high relative
/// accuracy, including on rank-deficient input.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

const JACOBI_SWEEPS: usize = 80;

pub fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    if m < n {
        let t = svd(&a.transpose());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let mut u = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dot(&u.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut u, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let mut uo = DMatrix::zeros(m, n);
    let mut vo = DMatrix::zeros(n, n);
    let mut so = Vec::with_capacity(n);
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    for (k, &j) in order.iter().enumerate() {
        so.push(sigma[j]);
        vo.set_column(k, &v.column(j));
        if sigma[j] > smax * f64::EPSILON * (m as f64) && sigma[j] > 0.0 {
            uo.set_column(k, &(u.column(j) / sigma[j]));
        }
    }
    fill_orthonormal(&mut uo, &so, smax * f64::EPSILON * (m as f64));
    Svd { u: uo, s: so, v: vo }
}

fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

/// Replaces the columns of `u` belonging to negligible singular values by
/// unit vectors orthogonal to all other columns.
fn fill_orthonormal(u: &mut DMatrix<f64>, s: &[f64], cutoff: f64) {
    let m = u.nrows();
    for k in 0..s.len() {
        if s[k] > cutoff && s[k] > 0.0 {
            continue;
        }
        let mut best: Option<DVector<f64>> = None;
        for e in 0..m {
            let mut c = DVector::zeros(m);
            c[e] = 1.0;
            for _ in 0..2 {
                for j in 0..s.len() {
                    if j == k || (j > k && !(s[j] > cutoff && s[j] > 0.0)) {
                        continue;
                    }
                    let col = u.column(j).into_owned();
                    c -= &col * col.dot(&c);
                }
            }
            if best.as_ref().is_none_or(|b| c.norm() > b.norm()) {
                best = Some(c);
            }
        }
        let c = best.expect("m >= 1");
        u.set_column(k, &(&c / c.norm()));
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd(m).s
}

pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    let s = singular_values(m);
    if s.len() < m.ncols() {
        // more columns than rows: rank deficient
        return 0.0;
    }
    s.last().copied().unwrap_or(0.0)
}

/// Orthonormal basis (as columns) of the column space of `m`. Singular
/// values at or below `rel_tol * sigma_max` are treated as zero.
pub fn column_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = svd(m);
    let u = svd.u;
    let sigma = &svd.s;
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    if smax <= f64::MIN_POSITIVE {
        return DMatrix::zeros(n, 0);
    }
    let mut keep: Vec<usize> = (0..sigma.len()).filter(|&i| sigma[i] > rel_tol * smax).collect();
    keep.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let cols: Vec<DVector<f64>> = keep.iter().map(|&i| u.column(i).into_owned()).collect();
    from_columns(n, &cols)
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis`.
pub fn complement(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let n = basis.nrows();
    let k = basis.ncols();
    if k == 0 {
        return DMatrix::identity(n, n);
    }
    if k >= n {
        return DMatrix::zeros(n, 0);
    }
    let q = DMatrix::identity(n, n) - basis * basis.transpose();
    let d = svd(&q);
    let cols: Vec<DVector<f64>> = (0..n - k).map(|i| d.u.column(i).into_owned()).collect();
    // one Gram-Schmidt sweep against the input and each other
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(cols.len());
    for mut c in cols {
        for j in 0..k {
            let b = basis.column(j);
            c -= b * b.dot(&c);
        }
        for o in &out {
            c -= o * o.dot(&c);
        }
        let norm = c.norm();
        out.push(c / norm);
    }
    from_columns(n, &out)
}

/// Orthonormal basis of `span(a) ∩ span(b)` for orthonormal column sets;
/// directions whose residual off `span(b)` is at most `tol` count as shared.
pub fn intersection(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return DMatrix::zeros(n, 0);
    }
    let off = a - b * b.tr_mul(a);
    let svd = svd(&off);
    let mut cols = Vec::new();
    for (i, s) in svd.s.iter().enumerate() {
        if *s <= tol {
            cols.push(a * svd.v.column(i));
        }
    }
    // columns of `off` beyond its rank have no singular value listed
    for i in svd.s.len()..a.ncols() {
        cols.push(a * svd.v.column(i));
    }
    column_space(&from_columns(n, &cols), 1e-12)
}

pub fn from_columns(nrows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(nrows, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}

/// max |B^T B - I| entrywise.
pub fn orthonormality_residual(basis: &DMatrix<f64>) -> f64 {
    let k = basis.ncols();
    let g = basis.transpose() * basis - DMatrix::identity(k, k);
    g.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Least-squares solve `m x = b` via SVD; `None` if `m` is numerically singular.
pub fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>, eps: f64) -> Option<DVector<f64>> {
    if m.ncols() == 0 {
        return Some(DVector::zeros(0));
    }
    if eps < 0.0 {
        return None;
    }
    let d = svd(m);
    let ub = d.u.tr_mul(b);
    let mut coeffs = DVector::zeros(d.s.len());
    for (i, s) in d.s.iter().enumerate() {
        if *s > eps {
            coeffs[i] = ub[i] / s;
        }
    }
    Some(d.v.columns(0, d.s.len()) * coeffs)
}
