//! Linear and affine Grassmannians: the gap metric, the neighbourhoods
//! `W~ = {V : pi_W(V) = W}`, the point lift `Phi_W`, and the vector-bundle
//! chart of the affine Grassmannian over `W~`.

use nalgebra::{DMatrix, DVector};

use crate::certify::{maximize_over_ball, BoxBound, Interval, SearchParams};
use crate::convex::{Flat, Subspace, Vector};
use crate::error::{check_dim, HyperError, Result};
use crate::linalg;
use crate::tolerance::ToleranceConfig;

/// Lifts that can amplify norms by more than this are refused.
pub const LIFT_CONDITION_CAP: f64 = 1e12;

/// Explicit matrix of an orthogonal projection `pi_V`.
#[derive(Clone, Debug)]
pub struct ProjectionOperator {
    matrix: DMatrix<f64>,
}

/// Residuals of the projection laws for one operator.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionResiduals {
    pub symmetry: f64,
    pub idempotence: f64,
    /// `|trace P - dim V|`
    pub trace: f64,
}

impl ProjectionOperator {
    pub fn new(v: &Subspace) -> Self {
        Self { matrix: v.projector() }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.matrix * x
    }

    pub fn residuals(&self, dim: usize) -> ProjectionResiduals {
        let p = &self.matrix;
        let max_abs = |m: DMatrix<f64>| m.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        ProjectionResiduals {
            symmetry: max_abs(p - p.transpose()),
            idempotence: max_abs(p * p - p),
            trace: (p.trace() - dim as f64).abs(),
        }
    }
}

/// Orthonormal basis of `span(vectors)` with rank decided by `tol.rank`.
pub fn orthonormal_basis(vectors: &[Vector], tol: &ToleranceConfig) -> Result<Subspace> {
    let n = vectors.first().ok_or(HyperError::EmptyGenerators)?.len();
    let s = Subspace::span(vectors, n, tol)?;
    if s.dim() == 0 {
        return Err(HyperError::ZeroSpan);
    }
    Ok(s)
}

pub fn orthogonal_complement(v: &Subspace) -> Subspace {
    v.complement()
}

/// `theta(V, W) = max(|pi_{V-perp} pi_W|, |pi_{W-perp} pi_V|)` (spectral norms).
pub fn gap(v: &Subspace, w: &Subspace) -> Result<f64> {
    check_dim(v.ambient_dim(), w.ambient_dim())?;
    let n = v.ambient_dim();
    let id = DMatrix::<f64>::identity(n, n);
    let pv = v.projector();
    let pw = w.projector();
    let a = linalg::spectral_norm(&((&id - &pv) * &pw));
    let b = linalg::spectral_norm(&((&id - &pw) * &pv));
    Ok(a.max(b).clamp(0.0, 1.0))
}

/// Subspace equality in the sense of the gap metric.
pub fn same_subspace(v: &Subspace, w: &Subspace, within: f64) -> Result<bool> {
    Ok(v.dim() == w.dim() && gap(v, w)? <= within)
}

/// `y -> d(V y, W ∩ rB)` on the coordinate ball of `V`.
///
/// For `|y| <= r` the projection of `V y` onto `W` already lies in `rB`,
/// so the objective is `|(I - P_W) V y|`. That formula is convex on all of
/// `R^k`, hence on a box it is bounded by its largest vertex value even
/// when the box sticks out of the ball. Subtracting `lambda * l(y)` for the
/// tangent plane `l(y) = |c|^2 + 2<c, y - c> - r^2 <= |y|^2 - r^2 <= 0`
/// keeps it convex and still above the objective on the ball.
struct OneSided<'a> {
    v: &'a Subspace,
    w: &'a Subspace,
    r: f64,
}

impl OneSided<'_> {
    fn residual(&self, y: &DVector<f64>) -> Vector {
        let x = self.v.basis() * y;
        let p = self.w.project(&x);
        x - p
    }
}

impl BoxBound for OneSided<'_> {
    fn bound(&self, c: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64)> {
        let k = c.len();
        let res = self.residual(c);
        let fc = res.norm();
        let lipschitz = fc + w.norm();
        if w.iter().all(|&x| x == 0.0) {
            return Ok((fc, fc));
        }
        let cc = c.norm_squared();
        let mut lambdas = vec![0.0, 0.5 / self.r, 0.25 / self.r];
        if fc > 0.0 && cc > 0.0 {
            let g = self.v.basis().tr_mul(&res) / fc;
            lambdas.push((g.dot(c) / (2.0 * cc)).max(0.0));
        }
        let mut best = vec![f64::NEG_INFINITY; lambdas.len()];
        let mut vert = c.clone();
        for mask in 0..(1usize << k) {
            for i in 0..k {
                vert[i] = c[i] + if mask >> i & 1 == 1 { w[i] } else { -w[i] };
            }
            let fv = self.residual(&vert).norm();
            let tangent = cc + 2.0 * c.dot(&(&vert - c)) - self.r * self.r;
            for (b, l) in best.iter_mut().zip(&lambdas) {
                *b = b.max(fv - l * tangent);
            }
        }
        let ub = best.into_iter().fold(lipschitz, f64::min);
        Ok((fc, ub))
    }
}

fn one_sided(v: &Subspace, w: &Subspace, r: f64, params: &SearchParams) -> Result<Interval> {
    let k = v.dim();
    let obj = OneSided { v, w, r };
    let mut seeds = Vec::with_capacity(2 * k);
    for i in 0..k {
        let mut e = DVector::zeros(k);
        e[i] = r;
        seeds.push(e.clone());
        seeds.push(-e);
    }
    maximize_over_ball(&obj, k, r, &seeds, params)
}

/// Certified `d_H(V ∩ rB, W ∩ rB)` from its definition as the larger of
/// the two one-sided maximal distances.
pub fn truncated_ball_hausdorff(
    v: &Subspace,
    w: &Subspace,
    r: f64,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<Interval> {
    check_dim(v.ambient_dim(), w.ambient_dim())?;
    if !(r > 0.0 && eps > 0.0) {
        return Err(HyperError::InvalidArgument(format!(
            "need r > 0 and eps > 0, got {r} and {eps}"
        )));
    }
    let params = SearchParams {
        // every point of V ∩ rB is within r of 0 ∈ W ∩ rB
        ceiling: r + 2.0 * tol.geom,
        ..SearchParams::new(eps)
    };
    let a = one_sided(v, w, r, &params)?;
    // the second side only matters where it can beat the first
    let params_b = SearchParams { floor: a.lo, ..params };
    let b = one_sided(w, v, r, &params_b)?;
    let out = a.max(b);
    if out.width() > eps {
        return Err(HyperError::Uncertified { best: out, target: eps });
    }
    Ok(out)
}

/// Certified `theta(V, W) = d_H(B_V, B_W)` straight from the definition;
/// independent of the operator-norm formula used by [`gap`].
pub fn gap_direct(v: &Subspace, w: &Subspace, eps: f64, tol: &ToleranceConfig) -> Result<Interval> {
    truncated_ball_hausdorff(v, w, 1.0, eps, tol)
}

fn cross_gram(w: &Subspace, v: &Subspace) -> Result<DMatrix<f64>> {
    check_dim(w.ambient_dim(), v.ambient_dim())?;
    check_dim(w.dim(), v.dim())?;
    Ok(w.basis().tr_mul(v.basis()))
}

/// Whether `V` lies in `W~`, i.e. `pi_W` maps `V` onto `W`.
pub fn in_tilde(w: &Subspace, v: &Subspace, tol: &ToleranceConfig) -> Result<bool> {
    let g = cross_gram(w, v)?;
    Ok(linalg::smallest_singular_value(&g) > tol.rank)
}

fn require_tilde(w: &Subspace, v: &Subspace, tol: &ToleranceConfig) -> Result<DMatrix<f64>> {
    let g = cross_gram(w, v)?;
    let smin = linalg::smallest_singular_value(&g);
    if smin <= tol.rank {
        return Err(HyperError::OutsideNeighbourhood(smin));
    }
    Ok(g)
}

/// `Phi_W(V, w)`: the unique point of `V` whose projection onto `W` is `w`.
pub fn lift_point(w: &Subspace, v: &Subspace, point: &Vector, tol: &ToleranceConfig) -> Result<Vector> {
    check_dim(w.ambient_dim(), point.len())?;
    let g = require_tilde(w, v, tol)?;
    let off = w.reject(point).norm();
    if off > tol.geom * point.norm().max(1.0) {
        return Err(HyperError::OffSubspace(off));
    }
    if v.dim() == 0 {
        return Ok(DVector::zeros(point.len()));
    }
    // |Phi_W(V, w)| <= |w| / sigma_min, and sigma_max <= 1
    let cond = 1.0 / linalg::smallest_singular_value(&g);
    if cond > LIFT_CONDITION_CAP {
        return Err(HyperError::IllConditioned(cond));
    }
    let coeffs = g
        .lu()
        .solve(&w.coords(point))
        .ok_or(HyperError::IllConditioned(f64::INFINITY))?;
    Ok(v.basis() * coeffs)
}

/// `q(F) = F - p(F)` together with `p(F)`.
pub fn parallel_subspace(f: &Flat) -> (Subspace, Vector) {
    (f.direction().clone(), f.nearest_to_origin())
}

/// `phi_W(V, omega) = V + omega` for `V` in `W~` and `omega` in `W-perp`.
pub fn chart_flat(w: &Subspace, v: &Subspace, omega: &Vector, tol: &ToleranceConfig) -> Result<Flat> {
    check_dim(w.ambient_dim(), omega.len())?;
    require_tilde(w, v, tol)?;
    let along = w.project(omega).norm();
    if along > tol.geom * omega.norm().max(1.0) {
        return Err(HyperError::OffSubspace(along));
    }
    Flat::new(omega.clone(), v.clone())
}

/// `phi_W^{-1}(F) = (q(F), p(F) - Phi_W(q(F), pi_W(p(F))))`, with the
/// second coordinate re-projected onto `W-perp`.
pub fn chart_flat_inv(w: &Subspace, f: &Flat, tol: &ToleranceConfig) -> Result<(Subspace, Vector)> {
    check_dim(w.ambient_dim(), f.ambient_dim())?;
    let (v, p) = parallel_subspace(f);
    require_tilde(w, &v, tol)?;
    let lifted = lift_point(w, &v, &w.project(&p), tol)?;
    let omega = w.reject(&(p - lifted));
    Ok((v, omega))
}
