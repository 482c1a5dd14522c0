//! Hausdorff distance between polytopes and certified enclosures of the
//! Attouch-Wets metric.
//!
//! Suprema of `|d(x, A) - d(x, B)|` over balls are found by branch and
//! bound (see [`crate::certify`]). The search runs in the smallest
//! subspace that carries the supremum: components orthogonal to
//! `span A + span B` only shrink the gap, and directions along which both
//! sets are invariant do not change it.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::certify::{maximize_over_ball, BoxBound, Interval, SearchParams, DEFAULT_BUDGET};
use crate::convex::{
    contains, metric_projection, nearest_point, truncated_projection, ConvexSet, Polytope, Subspace, Vector,
};
use crate::error::{check_dim, HyperError, Result};
use crate::linalg;
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AWParams {
    /// Certification width.
    pub eps: f64,
    /// Last truncation index evaluated.
    pub j_cap: usize,
    /// Cell budget per supremum.
    pub budget: usize,
}

impl Default for AWParams {
    fn default() -> Self {
        Self {
            eps: 1e-3,
            j_cap: 64,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl AWParams {
    pub fn new(eps: f64) -> Self {
        Self { eps, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) || self.j_cap == 0 {
            return Err(HyperError::InvalidArgument(format!(
                "need eps > 0 and j_cap >= 1, got {} and {}",
                self.eps, self.j_cap
            )));
        }
        Ok(())
    }
}

/// Exact Hausdorff distance between two polytopes. `d(., B)` is convex, so
/// its maximum over `conv A` sits at a generator of `A`.
pub fn hausdorff(a: &Polytope, b: &Polytope, tol: &ToleranceConfig) -> Result<f64> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let sa = ConvexSet::Polytope(a.clone());
    let sb = ConvexSet::Polytope(b.clone());
    let mut h = 0.0f64;
    for p in a.points() {
        h = h.max(metric_projection(&sb, p, tol)?.dist);
    }
    for p in b.points() {
        h = h.max(metric_projection(&sa, p, tol)?.dist);
    }
    Ok(h)
}

type Projector<'a> = Box<dyn Fn(&Vector) -> Result<Vector> + 'a>;

/// `y -> |d(Ey, A) - d(Ey, B)|` with first- and second-order box bounds.
///
/// With `u = x - c`, `g` the unit gradient of a distance function at `c`:
/// `d_A(x) <= d_A(c) + <g_A, u> + |u|^2 / (2 d_A(c))` and
/// `d_B(x) >= d_B(c) + <g_B, u>`. Where `d_A(c) = 0` the plain 1-Lipschitz
/// bound replaces the quadratic one.
struct DistanceGap<'a> {
    basis: DMatrix<f64>,
    proj_a: Projector<'a>,
    proj_b: Projector<'a>,
    slack: f64,
}

impl DistanceGap<'_> {
    fn side(&self, proj: &Projector<'_>, x: &Vector) -> Result<(f64, DVector<f64>)> {
        let r = x - proj(x)?;
        let d = r.norm();
        let g = if d > 0.0 {
            self.basis.tr_mul(&r) / d
        } else {
            DVector::zeros(self.basis.ncols())
        };
        Ok((d, g))
    }
}

fn one_sided(da: f64, ga: &DVector<f64>, db: f64, gb: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let wn = w.norm();
    let lin_b: f64 = gb.iter().zip(w.iter()).map(|(g, wi)| g.abs() * wi).sum();
    let lipschitz = da - db + wn + lin_b;
    if da > 0.0 {
        let cross: f64 = ga
            .iter()
            .zip(gb.iter())
            .zip(w.iter())
            .map(|((a, b), wi)| (a - b).abs() * wi)
            .sum();
        lipschitz.min(da - db + cross + wn * wn / (2.0 * da))
    } else {
        lipschitz
    }
}

impl BoxBound for DistanceGap<'_> {
    fn bound(&self, y: &DVector<f64>, w: &DVector<f64>) -> Result<(f64, f64)> {
        let x = &self.basis * y;
        let (da, ga) = self.side(&self.proj_a, &x)?;
        let (db, gb) = self.side(&self.proj_b, &x)?;
        let ub = one_sided(da, &ga, db, &gb, w).max(one_sided(db, &gb, da, &ga, w));
        Ok(((da - db).abs(), ub + self.slack))
    }
}

/// Orthonormal basis of `(span A + span B) ⊖ (lin A ∩ lin B)`.
fn search_space(a: &ConvexSet, b: &ConvexSet, quotient: bool, tol: &ToleranceConfig) -> DMatrix<f64> {
    let n = a.ambient_dim();
    let mut vs = a.linear_span(tol).basis_vectors();
    vs.extend(b.linear_span(tol).basis_vectors());
    let span = Subspace::span(&vs, n, tol).expect("dimensions checked");
    if !quotient {
        return span.basis().clone();
    }
    let common = linalg::intersection(a.lineality().basis(), b.lineality().basis(), tol.rank);
    if common.ncols() == 0 {
        return span.basis().clone();
    }
    let reduced = span.basis() - &common * common.tr_mul(span.basis());
    linalg::column_space(&reduced, tol.rank)
}

/// Points likely to sit near the maximizer, in the coordinates of `basis`.
fn seeds(a: &ConvexSet, b: &ConvexSet, basis: &DMatrix<f64>, tol: &ToleranceConfig) -> Vec<DVector<f64>> {
    let mut pts: Vec<Vector> = Vec::new();
    for s in [a, b] {
        if let ConvexSet::Polytope(p) = s {
            pts.extend(p.points().iter().cloned());
        }
        if let Ok((p, _)) = nearest_point(s, tol) {
            pts.push(p);
        }
    }
    let mut out: Vec<DVector<f64>> = pts.iter().map(|p| basis.tr_mul(p)).collect();
    let d = basis.ncols();
    for i in 0..d {
        let mut e = DVector::zeros(d);
        e[i] = 1e12;
        out.push(e.clone());
        out.push(-e);
    }
    out
}

/// A priori bound on `sup_{|x| <= r} |d(x, A) - d(x, B)|`.
fn ceiling(a: &ConvexSet, b: &ConvexSet, r: f64, tol: &ToleranceConfig) -> Result<f64> {
    let (_, nu_a) = nearest_point(a, tol)?;
    let (_, nu_b) = nearest_point(b, tol)?;
    // both distances lie in [0, r + nu]
    let mut bound = r + nu_a.max(nu_b);
    match (a, b) {
        (ConvexSet::Polytope(p), ConvexSet::Polytope(q)) => {
            bound = bound.min(hausdorff(p, q, tol)?);
        }
        (ConvexSet::Polytope(_), _) | (_, ConvexSet::Polytope(_)) => {}
        _ => {
            let f = a.as_flat().expect("flat-like");
            let g = b.as_flat().expect("flat-like");
            let dp = f.direction().projector() - g.direction().projector();
            let offset = (f.nearest_to_origin() - g.nearest_to_origin()).norm();
            bound = bound.min(r * linalg::spectral_norm(&dp) + offset);
        }
    }
    Ok(bound)
}

fn check_radius(r: f64, eps: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite() && eps > 0.0) {
        return Err(HyperError::InvalidArgument(format!(
            "need r > 0 and eps > 0, got {r} and {eps}"
        )));
    }
    Ok(())
}

/// Enclosure of `sup_{|x| <= r} |d(x, A) - d(x, B)|` of width at most `eps`.
pub fn sup_distance_gap(a: &ConvexSet, b: &ConvexSet, r: f64, eps: f64, tol: &ToleranceConfig) -> Result<Interval> {
    check_radius(r, eps)?;
    sup_distance_gap_with(a, b, r, &SearchParams::new(eps), tol)
}

/// `sup_distance_gap` with explicit search controls (floor, cap, budget).
pub fn sup_distance_gap_with(
    a: &ConvexSet,
    b: &ConvexSet,
    r: f64,
    params: &SearchParams,
    tol: &ToleranceConfig,
) -> Result<Interval> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    check_radius(r, params.eps)?;
    let basis = search_space(a, b, true, tol);
    let params = SearchParams {
        ceiling: params.ceiling.min(ceiling(a, b, r, tol)?),
        ..*params
    };
    let seeds = seeds(a, b, &basis, tol);
    let d = basis.ncols();
    let obj = DistanceGap {
        basis,
        proj_a: Box::new(move |x| Ok(metric_projection(a, x, tol)?.point)),
        proj_b: Box::new(move |x| Ok(metric_projection(b, x, tol)?.point)),
        slack: 2.0 * tol.geom,
    };
    maximize_over_ball(&obj, d, r, &seeds, &params)
}

/// `sup_j min(1/j, s_j)` evaluated in passes of decreasing width; each
/// pass starts from the lower bound of the previous one so that terms
/// already dominated are pruned early.
fn sweep<T>(params: &AWParams, mut term: T) -> Result<Interval>
where
    T: FnMut(usize, &SearchParams) -> Result<Interval>,
{
    params.validate()?;
    let mut lo = 0.0f64;
    let mut passes: Vec<f64> = [0.05, 0.005].into_iter().filter(|&e| e > params.eps).collect();
    passes.push(params.eps);
    let last = passes.len() - 1;
    let mut result = Interval::point(0.0);
    for (k, &eps) in passes.iter().enumerate() {
        let mut hi = lo;
        let mut certified = true;
        let mut exhausted = true;
        for j in 1..=params.j_cap {
            let inv = 1.0 / j as f64;
            if inv <= lo {
                exhausted = false;
                break;
            }
            let sp = SearchParams {
                eps,
                floor: lo,
                cap: inv,
                ceiling: f64::INFINITY,
                budget: params.budget,
            };
            let s = match term(j, &sp) {
                Ok(iv) => iv,
                Err(HyperError::Uncertified { best, .. }) => {
                    certified = false;
                    best
                }
                Err(e) => return Err(e),
            };
            let t = s.min_scalar(inv);
            lo = lo.max(t.lo);
            hi = hi.max(t.hi);
        }
        if exhausted {
            hi = hi.max(1.0 / (params.j_cap + 1) as f64);
        }
        result = Interval::new(lo, hi.max(lo));
        if k == last && !certified {
            return Err(HyperError::Uncertified {
                best: result,
                target: params.eps,
            });
        }
    }
    Ok(result)
}

/// Enclosure of `d_AW(A, B) = sup_j min(1/j, sup_{|x| <= j} |d(x,A) - d(x,B)|)`.
///
/// The sweep stops once `1/j` falls below the certified lower bound. If it
/// runs to `j_cap`, the tail adds `1/(j_cap + 1)` to the upper end.
pub fn attouch_wets(a: &ConvexSet, b: &ConvexSet, params: &AWParams, tol: &ToleranceConfig) -> Result<Interval> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    // identical sets: every term vanishes
    if ceiling(a, b, 1.0, tol)? == 0.0 && ceiling(a, b, 2.0, tol)? == 0.0 {
        return Ok(Interval::point(0.0));
    }
    let iv = sweep(params, |j, sp| {
        let r = j as f64;
        if ceiling(a, b, r, tol)? <= sp.floor {
            return Ok(Interval::new(0.0, sp.floor.max(0.0)));
        }
        sup_distance_gap_with(a, b, r, sp, tol)
    })?;
    // a global bound on every term trims the upper end
    let global = match (a, b) {
        (ConvexSet::Polytope(p), ConvexSet::Polytope(q)) => hausdorff(p, q, tol)?,
        (ConvexSet::Polytope(_), _) | (_, ConvexSet::Polytope(_)) => f64::INFINITY,
        _ => {
            // parallel flats: |d(x, F) - d(x, G)| <= |p(F) - p(G)| everywhere
            let f = a.as_flat().expect("flat-like");
            let g = b.as_flat().expect("flat-like");
            if linalg::spectral_norm(&(f.direction().projector() - g.direction().projector())) == 0.0 {
                (f.nearest_to_origin() - g.nearest_to_origin()).norm() + 2.0 * tol.geom
            } else {
                f64::INFINITY
            }
        }
    };
    Ok(Interval::new(iv.lo.min(global), iv.hi.min(global)))
}

fn require_origin(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<()> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let origin = DVector::zeros(a.ambient_dim());
    for s in [a, b] {
        if !contains(s, &origin, tol.geom, tol)? {
            return Err(HyperError::MissingOrigin);
        }
    }
    Ok(())
}

/// `sup_{|x| <= r} |d(x, A ∩ rB) - d(x, B ∩ rB)|` over the coordinates of
/// `basis`.
fn truncated_term(
    a: &ConvexSet,
    b: &ConvexSet,
    r: f64,
    basis: &DMatrix<f64>,
    seeds: &[DVector<f64>],
    sp: &SearchParams,
    tol: &ToleranceConfig,
) -> Result<Interval> {
    let mut sp = *sp;
    // truncations of subspaces: d_H(V ∩ rB, W ∩ rB) <= r |P_V - P_W|
    if let (ConvexSet::Subspace(v), ConvexSet::Subspace(w)) = (a, b) {
        sp.ceiling = r * linalg::spectral_norm(&(v.projector() - w.projector())) + 2.0 * tol.geom;
    }
    sp.ceiling = sp.ceiling.min(r);
    let obj = DistanceGap {
        basis: basis.clone(),
        proj_a: Box::new(move |x| truncated_projection(a, x, r, tol)),
        proj_b: Box::new(move |x| truncated_projection(b, x, r, tol)),
        slack: 2.0 * tol.geom,
    };
    maximize_over_ball(&obj, basis.ncols(), r, seeds, &sp)
}

/// Enclosure of `d_H(A ∩ rB, B ∩ rB)` for sets containing the origin,
/// evaluated as `sup_{|x| <= r} |d(x, A ∩ rB) - d(x, B ∩ rB)|` (the two
/// agree because both truncations lie in `rB`).
pub fn truncated_hausdorff(a: &ConvexSet, b: &ConvexSet, r: f64, eps: f64, tol: &ToleranceConfig) -> Result<Interval> {
    check_radius(r, eps)?;
    require_origin(a, b, tol)?;
    let basis = search_space(a, b, false, tol);
    let seeds = seeds(a, b, &basis, tol);
    truncated_term(a, b, r, &basis, &seeds, &SearchParams::new(eps), tol)
}

/// Enclosure of `d_AW` for sets containing the origin, from the Hausdorff
/// distances of the ball truncations: `sup_j min(1/j, d_H(A ∩ jB, B ∩ jB))`.
pub fn aw_origin(a: &ConvexSet, b: &ConvexSet, params: &AWParams, tol: &ToleranceConfig) -> Result<Interval> {
    require_origin(a, b, tol)?;
    if ceiling(a, b, 1.0, tol)? == 0.0 && ceiling(a, b, 2.0, tol)? == 0.0 {
        return Ok(Interval::point(0.0));
    }
    let basis = search_space(a, b, false, tol);
    let seeds = seeds(a, b, &basis, tol);
    sweep(params, |j, sp| truncated_term(a, b, j as f64, &basis, &seeds, sp, tol))
}
