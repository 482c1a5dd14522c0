//! Wolfe's minimum-norm-point method for the convex hull of finitely many
//! points.
//!
//! The active set ("corral") is kept affinely independent; each major
//! step adds the point minimizing `<x, q>`, each minor step moves to the
//! affine minimizer of the corral or, when that leaves the hull, to the
//! last feasible point on the segment and drops the vanishing weights.

use nalgebra::{DMatrix, DVector};

use crate::error::{HyperError, Result};
use crate::linalg;

#[derive(Clone, Debug)]
pub struct MinNorm {
    pub point: DVector<f64>,
    /// Convex weights on the input points (index, weight); weights sum to one.
    pub weights: Vec<(usize, f64)>,
    /// `|x|^2 - min_i <x, q_i>`; bounds `|x - x*|^2`.
    pub gap: f64,
    pub iterations: usize,
}

/// Minimum-norm point of `conv(points)`.
///
/// Stops when the duality gap is at most `gap_tol` (floored at a
/// rounding-level multiple of the largest squared norm) or when the
/// entering point is already in the corral.
pub fn min_norm_point(points: &[DVector<f64>], gap_tol: f64, max_iter: usize) -> Result<MinNorm> {
    if points.is_empty() {
        return Err(HyperError::EmptyGenerators);
    }
    let scale = points.iter().map(|q| q.norm_squared()).fold(0.0, f64::max);
    let tol = gap_tol.max(16.0 * f64::EPSILON * scale);

    let start = (0..points.len())
        .min_by(|&a, &b| points[a].norm_squared().total_cmp(&points[b].norm_squared()))
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();
    let mut iterations = 0usize;

    loop {
        let xx = x.norm_squared();
        let (j, best) = argmin_dot(points, &x);
        let gap = (xx - best).max(0.0);
        if xx == 0.0 || gap <= tol || corral.contains(&j) {
            return Ok(MinNorm {
                point: x,
                weights: corral.into_iter().zip(lambda).collect(),
                gap,
                iterations,
            });
        }
        corral.push(j);
        lambda.push(0.0);

        // minor cycle
        loop {
            iterations += 1;
            if iterations > max_iter {
                return Err(HyperError::NonConvergence {
                    iterations,
                    best: x,
                    residual: gap.sqrt(),
                });
            }
            let alpha = affine_minimizer(points, &corral);
            if alpha.iter().all(|&a| a > 0.0) {
                lambda = alpha;
                x = combine(points, &corral, &lambda);
                break;
            }
            // largest step toward alpha that keeps all weights nonnegative
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= 0.0 && l - a > 0.0 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            // drop the point(s) whose weight hit zero; always drop at least one
            let drop_at = lambda
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap();
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_l = Vec::with_capacity(corral.len());
            for (i, (&c, &l)) in corral.iter().zip(&lambda).enumerate() {
                if i != drop_at && l > 1e-15 {
                    keep_c.push(c);
                    keep_l.push(l);
                }
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            corral = keep_c;
            lambda = keep_l;
            x = combine(points, &corral, &lambda);
            if corral.len() == 1 {
                break;
            }
        }
    }
}

fn argmin_dot(points: &[DVector<f64>], x: &DVector<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, q) in points.iter().enumerate() {
        let d = x.dot(q);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

fn combine(points: &[DVector<f64>], idx: &[usize], w: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(points[idx[0]].len());
    for (&i, &l) in idx.iter().zip(w) {
        x.axpy(l, &points[i], 1.0);
    }
    x
}

/// Weights (summing to one) of the minimum-norm point of the affine hull
/// of the corral, from a least-squares solve in difference coordinates.
fn affine_minimizer(points: &[DVector<f64>], corral: &[usize]) -> Vec<f64> {
    let s = corral.len();
    if s == 1 {
        return vec![1.0];
    }
    let q0 = &points[corral[0]];
    let n = q0.len();
    let mut d = DMatrix::zeros(n, s - 1);
    for (c, &i) in corral[1..].iter().enumerate() {
        d.set_column(c, &(&points[i] - q0));
    }
    let rhs = -q0;
    let beta =
        linalg::lstsq(&d, &rhs, 1e-13 * d.norm().max(f64::MIN_POSITIVE)).unwrap_or_else(|| DVector::zeros(s - 1));
    let mut alpha = Vec::with_capacity(s);
    alpha.push(1.0 - beta.sum());
    alpha.extend(beta.iter().copied());
    alpha
}
