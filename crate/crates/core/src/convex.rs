//! Convex set representations and pointwise operations on them.
//!
//! Three representations cover every construction in the crate:
//! polytopes given by generators (V-representation), flats `base + V`, and
//! linear subspaces. Projections onto all three are exact up to the
//! solver tolerance.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, HyperError, Result};
use crate::linalg;
use crate::mnp;
use crate::tolerance::ToleranceConfig;

pub type Vector = DVector<f64>;

pub fn vector(xs: &[f64]) -> Vector {
    DVector::from_column_slice(xs)
}

fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(HyperError::NonFinite)
    }
}

/// Convex hull of a nonempty finite point list.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    points: Vec<Vector>,
}

impl Polytope {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let dim = points.first().ok_or(HyperError::EmptyGenerators)?.len();
        for p in &points {
            check_dim(dim, p.len())?;
            check_finite(p)?;
        }
        Ok(Self { dim, points })
    }

    pub fn from_slices(points: &[&[f64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| vector(p)).collect())
    }

    pub fn singleton(p: Vector) -> Result<Self> {
        Self::new(vec![p])
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn translate(&self, v: &Vector) -> Polytope {
        Polytope {
            dim: self.dim,
            points: self.points.iter().map(|p| p + v).collect(),
        }
    }

    /// Image under a map applied generator-wise.
    pub fn map<F: FnMut(&Vector) -> Vector>(&self, f: F) -> Result<Polytope> {
        Polytope::new(self.points.iter().map(f).collect())
    }

    /// True when every generator coincides with the first within `tol`.
    pub fn is_singleton(&self, tol: f64) -> bool {
        let p0 = &self.points[0];
        self.points.iter().all(|p| (p - p0).norm() <= tol)
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Projection of `x` together with the solver's duality gap.
    pub fn project_with_gap(&self, x: &Vector, tol: &ToleranceConfig) -> Result<(Vector, f64)> {
        check_dim(self.dim, x.len())?;
        let shifted: Vec<Vector> = self.points.iter().map(|p| p - x).collect();
        let cap = (10 * self.points.len() * self.dim.max(1)).max(32);
        match mnp::min_norm_point(&shifted, tol.geom * tol.geom, cap) {
            Ok(r) => Ok((r.point + x, r.gap)),
            Err(HyperError::NonConvergence {
                iterations,
                best,
                residual,
            }) => Err(HyperError::NonConvergence {
                iterations,
                best: best + x,
                residual,
            }),
            Err(e) => Err(e),
        }
    }
}

/// Linear subspace stored by an orthonormal basis (columns).
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// From columns already orthonormal within `tol.orth`.
    pub fn new(basis: DMatrix<f64>, tol: &ToleranceConfig) -> Result<Self> {
        if basis.iter().any(|c| !c.is_finite()) {
            return Err(HyperError::NonFinite);
        }
        if basis.ncols() > basis.nrows() {
            return Err(HyperError::InvalidArgument(format!(
                "{} basis vectors in dimension {}",
                basis.ncols(),
                basis.nrows()
            )));
        }
        let res = linalg::orthonormality_residual(&basis);
        if res > tol.orth {
            return Err(HyperError::NotOrthonormal(res));
        }
        Ok(Self { basis })
    }

    pub fn from_vectors(vectors: &[Vector], tol: &ToleranceConfig) -> Result<Self> {
        let n = vectors.first().ok_or(HyperError::EmptyGenerators)?.len();
        for v in vectors {
            check_dim(n, v.len())?;
        }
        Self::new(linalg::from_columns(n, vectors), tol)
    }

    /// Span of arbitrary vectors; rank decided by `tol.rank`. May be zero-dimensional.
    pub fn span(vectors: &[Vector], ambient_dim: usize, tol: &ToleranceConfig) -> Result<Self> {
        for v in vectors {
            check_dim(ambient_dim, v.len())?;
            check_finite(v)?;
        }
        let m = linalg::from_columns(ambient_dim, vectors);
        Ok(Self {
            basis: linalg::column_space(&m, tol.rank),
        })
    }

    pub(crate) fn from_basis_unchecked(basis: DMatrix<f64>) -> Self {
        Self { basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: DMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Coordinates of the orthogonal projection of `x` in this basis.
    pub fn coords(&self, x: &Vector) -> Vector {
        self.basis.tr_mul(x)
    }

    pub fn project(&self, x: &Vector) -> Vector {
        &self.basis * self.basis.tr_mul(x)
    }

    /// `x - P x`, the component orthogonal to the subspace.
    pub fn reject(&self, x: &Vector) -> Vector {
        x - self.project(x)
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    pub fn complement(&self) -> Subspace {
        Subspace {
            basis: linalg::complement(&self.basis),
        }
    }
}

/// Flat `base + direction`.
#[derive(Clone, Debug)]
pub struct Flat {
    base: Vector,
    direction: Subspace,
}

impl Flat {
    pub fn new(base: Vector, direction: Subspace) -> Result<Self> {
        check_dim(direction.ambient_dim(), base.len())?;
        check_finite(&base)?;
        Ok(Self { base, direction })
    }

    pub fn from_basis(base: Vector, basis: &[Vector], tol: &ToleranceConfig) -> Result<Self> {
        let n = base.len();
        let direction = if basis.is_empty() {
            Subspace::zero(n)
        } else {
            Subspace::from_vectors(basis, tol)?
        };
        Self::new(base, direction)
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn base(&self) -> &Vector {
        &self.base
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    /// `pi_F(x) = pi_V(x - a) + a`.
    pub fn project(&self, x: &Vector) -> Vector {
        self.direction.project(&(x - &self.base)) + &self.base
    }

    /// Point of the flat nearest to the origin.
    pub fn nearest_to_origin(&self) -> Vector {
        self.direction.reject(&self.base)
    }
}

impl From<Subspace> for Flat {
    fn from(s: Subspace) -> Self {
        Flat {
            base: DVector::zeros(s.ambient_dim()),
            direction: s,
        }
    }
}

/// The computable fragment of the hyperspace of closed convex sets.
#[derive(Clone, Debug)]
pub enum ConvexSet {
    Polytope(Polytope),
    Flat(Flat),
    Subspace(Subspace),
}

impl From<Polytope> for ConvexSet {
    fn from(p: Polytope) -> Self {
        ConvexSet::Polytope(p)
    }
}

impl From<Flat> for ConvexSet {
    fn from(f: Flat) -> Self {
        ConvexSet::Flat(f)
    }
}

impl From<Subspace> for ConvexSet {
    fn from(s: Subspace) -> Self {
        ConvexSet::Subspace(s)
    }
}

impl ConvexSet {
    pub fn ambient_dim(&self) -> usize {
        match self {
            ConvexSet::Polytope(p) => p.ambient_dim(),
            ConvexSet::Flat(f) => f.ambient_dim(),
            ConvexSet::Subspace(s) => s.ambient_dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConvexSet::Polytope(_) => "polytope",
            ConvexSet::Flat(_) => "flat",
            ConvexSet::Subspace(_) => "subspace",
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            ConvexSet::Polytope(_) => true,
            ConvexSet::Flat(f) => f.dim() == 0,
            ConvexSet::Subspace(s) => s.dim() == 0,
        }
    }

    /// Flat or subspace viewed as a flat; `None` for polytopes.
    pub fn as_flat(&self) -> Option<Flat> {
        match self {
            ConvexSet::Polytope(_) => None,
            ConvexSet::Flat(f) => Some(f.clone()),
            ConvexSet::Subspace(s) => Some(Flat::from(s.clone())),
        }
    }

    pub fn translate(&self, v: &Vector) -> Result<ConvexSet> {
        check_dim(self.ambient_dim(), v.len())?;
        Ok(match self {
            ConvexSet::Polytope(p) => ConvexSet::Polytope(p.translate(v)),
            ConvexSet::Flat(f) => ConvexSet::Flat(Flat::new(f.base() + v, f.direction().clone())?),
            ConvexSet::Subspace(s) => ConvexSet::Flat(Flat::new(v.clone(), s.clone())?),
        })
    }

    /// Smallest linear subspace containing the set.
    pub fn linear_span(&self, tol: &ToleranceConfig) -> Subspace {
        let n = self.ambient_dim();
        match self {
            ConvexSet::Polytope(p) => Subspace::span(p.points(), n, tol).expect("dimensions checked"),
            ConvexSet::Flat(f) => {
                let mut vs = f.direction().basis_vectors();
                vs.push(f.base().clone());
                Subspace::span(&vs, n, tol).expect("dimensions checked")
            }
            ConvexSet::Subspace(s) => s.clone(),
        }
    }

    /// Largest subspace `L` with `set + L = set`.
    pub fn lineality(&self) -> Subspace {
        match self {
            ConvexSet::Polytope(p) => Subspace::zero(p.ambient_dim()),
            ConvexSet::Flat(f) => f.direction().clone(),
            ConvexSet::Subspace(s) => s.clone(),
        }
    }
}

/// Result of a metric projection.
#[derive(Clone, Debug)]
pub struct Projection {
    pub point: Vector,
    pub dist: f64,
}

/// Nearest point of `set` to `x` and the distance.
pub fn metric_projection(set: &ConvexSet, x: &Vector, tol: &ToleranceConfig) -> Result<Projection> {
    check_dim(set.ambient_dim(), x.len())?;
    check_finite(x)?;
    let point = match set {
        ConvexSet::Polytope(p) => p.project_with_gap(x, tol)?.0,
        ConvexSet::Flat(f) => f.project(x),
        ConvexSet::Subspace(s) => s.project(x),
    };
    let dist = (x - &point).norm();
    Ok(Projection { point, dist })
}

pub fn distance(set: &ConvexSet, x: &Vector, tol: &ToleranceConfig) -> Result<f64> {
    Ok(metric_projection(set, x, tol)?.dist)
}

/// `p(A) = pi_A(0)` and `nu(A) = |p(A)|`.
pub fn nearest_point(set: &ConvexSet, tol: &ToleranceConfig) -> Result<(Vector, f64)> {
    let origin = DVector::zeros(set.ambient_dim());
    let Projection { point, dist } = metric_projection(set, &origin, tol)?;
    Ok((point, dist))
}

/// `d(x, set ∩ L·B)` where `B` is the closed unit ball.
///
/// Flats meet the ball in a round ball of the flat, which gives a closed
/// form. For polytopes the nearest point is `pi_P(s x)` for the scale
/// `s` in `[0, 1]` at which its norm equals `L`; `s` is found by
/// bracketing, keeping the feasible end of the bracket.
pub fn truncated_distance(set: &ConvexSet, x: &Vector, radius: f64, tol: &ToleranceConfig) -> Result<f64> {
    Ok((x - truncated_projection(set, x, radius, tol)?).norm())
}

/// Nearest point of `set ∩ radius·B` to `x`.
pub fn truncated_projection(set: &ConvexSet, x: &Vector, radius: f64, tol: &ToleranceConfig) -> Result<Vector> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HyperError::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    check_dim(set.ambient_dim(), x.len())?;
    let (p0, nu) = nearest_point(set, tol)?;
    if nu > radius + tol.geom {
        return Err(HyperError::EmptyIntersection { radius, distance: nu });
    }
    let direct = metric_projection(set, x, tol)?.point;
    if direct.norm() <= radius {
        return Ok(direct);
    }
    match set {
        ConvexSet::Polytope(p) => Ok(scaled_ball_projection(p, x, radius, tol)?),
        ConvexSet::Flat(_) | ConvexSet::Subspace(_) => {
            // |z|^2 = nu^2 + |z - p0|^2 for z in the flat
            let rho = (radius * radius - nu * nu).max(0.0).sqrt();
            let offset = &direct - &p0;
            let len = offset.norm();
            Ok(if len > rho { p0 + offset * (rho / len) } else { direct })
        }
    }
}

fn ball_project(y: &Vector, radius: f64) -> Vector {
    let n = y.norm();
    if n <= radius {
        y.clone()
    } else {
        y * (radius / n)
    }
}

fn scaled_ball_projection(p: &Polytope, x: &Vector, radius: f64, tol: &ToleranceConfig) -> Result<Vector> {
    let at = |s: f64| -> Result<Vector> { Ok(p.project_with_gap(&(x * s), tol)?.0) };
    let (mut s_lo, mut s_hi) = (0.0f64, 1.0f64);
    let mut y_lo = at(0.0)?;
    let (mut f_lo, mut f_hi) = (y_lo.norm() - radius, at(1.0)?.norm() - radius);
    let xn = x.norm();
    // y(s) is xn-Lipschitz in s, so the bracket width bounds the error
    for it in 0..200 {
        if xn * (s_hi - s_lo) <= 0.1 * tol.geom || f_lo == 0.0 {
            break;
        }
        // regula falsi, with plain bisection every third step
        let mid = 0.5 * (s_lo + s_hi);
        if mid <= s_lo || mid >= s_hi {
            break;
        }
        let mut s = s_lo - f_lo * (s_hi - s_lo) / (f_hi - f_lo);
        if it % 3 == 2 || !(s > s_lo && s < s_hi) {
            s = mid;
        }
        let y = at(s)?;
        let f = y.norm() - radius;
        if f <= 0.0 {
            s_lo = s;
            f_lo = f;
            y_lo = y;
        } else {
            s_hi = s;
            f_hi = f;
        }
    }
    Ok(ball_project(&y_lo, radius))
}

/// Same quantity as `truncated_projection` by Dykstra's alternating
/// projections between the set and the ball. Stops once consecutive
/// iterates move less than `tol.geom` and the two projections agree
/// within `tol.geom`.
pub fn truncated_projection_dykstra(
    set: &ConvexSet,
    x: &Vector,
    radius: f64,
    tol: &ToleranceConfig,
    max_iter: usize,
) -> Result<Vector> {
    check_dim(set.ambient_dim(), x.len())?;
    let (_, nu) = nearest_point(set, tol)?;
    if nu > radius + tol.geom {
        return Err(HyperError::EmptyIntersection { radius, distance: nu });
    }
    let n = x.len();
    let mut xk = x.clone();
    let mut p = DVector::zeros(n);
    let mut q = DVector::zeros(n);
    let mut last_gap = f64::INFINITY;
    for _ in 0..max_iter {
        let y = metric_projection(set, &(&xk + &p), tol)?.point;
        p = &xk + &p - &y;
        let next = ball_project(&(&y + &q), radius);
        q = &y + &q - &next;
        let step = (&next - &xk).norm();
        last_gap = (&next - &y).norm();
        xk = next;
        if step < tol.geom && last_gap < tol.geom {
            return Ok(xk);
        }
    }
    Err(HyperError::NonConvergence {
        iterations: max_iter,
        best: xk,
        residual: last_gap,
    })
}

/// `Aff(P)`: base at the first generator, direction from the numerical
/// column space of the differences `p_i - p_0`.
pub fn affine_hull(p: &Polytope, tol: &ToleranceConfig) -> Flat {
    let p0 = p.points()[0].clone();
    let diffs: Vec<Vector> = p.points()[1..].iter().map(|q| q - &p0).collect();
    let n = p.ambient_dim();
    let direction = Subspace::from_basis_unchecked(linalg::column_space(&linalg::from_columns(n, &diffs), tol.rank));
    Flat { base: p0, direction }
}

pub fn dimension(set: &ConvexSet, tol: &ToleranceConfig) -> usize {
    match set {
        ConvexSet::Polytope(p) => affine_hull(p, tol).dim(),
        ConvexSet::Flat(f) => f.dim(),
        ConvexSet::Subspace(s) => s.dim(),
    }
}

/// `A + B`. Exact for polytope pairs, translations by a singleton, and
/// pairs of flats.
pub fn minkowski_sum(a: &ConvexSet, b: &ConvexSet, tol: &ToleranceConfig) -> Result<ConvexSet> {
    check_dim(a.ambient_dim(), b.ambient_dim())?;
    let singleton = |s: &ConvexSet| match s {
        ConvexSet::Polytope(p) if p.is_singleton(tol.geom) => Some(p.points()[0].clone()),
        _ => None,
    };
    if let Some(v) = singleton(b) {
        return a.translate(&v);
    }
    if let Some(v) = singleton(a) {
        return b.translate(&v);
    }
    match (a, b) {
        (ConvexSet::Polytope(p), ConvexSet::Polytope(q)) => {
            let mut pts = Vec::with_capacity(p.points().len() * q.points().len());
            for x in p.points() {
                for y in q.points() {
                    pts.push(x + y);
                }
            }
            Ok(ConvexSet::Polytope(Polytope::new(pts)?))
        }
        (ConvexSet::Polytope(_), other) | (other, ConvexSet::Polytope(_)) => {
            Err(HyperError::UnsupportedSum("polytope", other.kind()))
        }
        _ => {
            let f = a.as_flat().expect("flat-like");
            let g = b.as_flat().expect("flat-like");
            let mut dirs = f.direction().basis_vectors();
            dirs.extend(g.direction().basis_vectors());
            let direction = Subspace::span(&dirs, a.ambient_dim(), tol)?;
            Ok(ConvexSet::Flat(Flat::new(f.base() + g.base(), direction)?))
        }
    }
}

/// Projection onto `H_a = {x : <x - a, a> = 0}`.
pub fn project_hyperplane(a: &Vector, x: &Vector) -> Result<Vector> {
    check_dim(a.len(), x.len())?;
    let aa = a.norm_squared();
    if aa == 0.0 {
        return Err(HyperError::ZeroNormal);
    }
    Ok(x + a - a * (x.dot(a) / aa))
}

pub fn contains(set: &ConvexSet, x: &Vector, within: f64, tol: &ToleranceConfig) -> Result<bool> {
    Ok(distance(set, x, tol)? <= within)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn poly(pts: &[&[f64]]) -> ConvexSet {
        Polytope::from_slices(pts).unwrap().into()
    }

    fn line(base: &[f64], dir: &[f64]) -> ConvexSet {
        let d = vector(dir).normalize();
        Flat::from_basis(vector(base), &[d], &tol()).unwrap().into()
    }

    fn span(dirs: &[&[f64]]) -> ConvexSet {
        let vs: Vec<Vector> = dirs.iter().map(|d| vector(d)).collect();
        let n = vs[0].len();
        Subspace::span(&vs, n, &tol()).unwrap().into()
    }

    /// Dense-grid brute force of d(x, conv P) in the plane: sample convex
    /// combinations on a barycentric lattice. For a triangle the lattice of
    /// step 1/m has covering radius at most diam/m.
    fn grid_distance_triangle(pts: [[f64; 2]; 3], x: [f64; 2], m: usize) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..=m {
            for j in 0..=(m - i) {
                let l0 = i as f64 / m as f64;
                let l1 = j as f64 / m as f64;
                let l2 = 1.0 - l0 - l1;
                let px = l0 * pts[0][0] + l1 * pts[1][0] + l2 * pts[2][0];
                let py = l0 * pts[0][1] + l1 * pts[1][1] + l2 * pts[2][1];
                best = best.min(((px - x[0]).powi(2) + (py - x[1]).powi(2)).sqrt());
            }
        }
        best
    }

    #[test]
    fn polytope_projection_example() {
        let tri = poly(&[&[1.0, 1.0], &[2.0, 1.0], &[1.0, 2.0]]);
        let pr = metric_projection(&tri, &vector(&[0.0, 0.0]), &tol()).unwrap();
        assert_relative_eq!(pr.point[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(pr.point[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(pr.dist, 2f64.sqrt(), epsilon = 1e-12);
        // variational inequality on all generators
        if let ConvexSet::Polytope(p) = &tri {
            for a in p.points() {
                let lhs = (vector(&[0.0, 0.0]) - &pr.point).dot(&(a - &pr.point));
                assert!(lhs <= 1e-12);
            }
        }
        // dense-grid oracle: m = 400 gives covering radius below 1.5/400
        let g = grid_distance_triangle([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]], [0.0, 0.0], 400);
        assert!((g - pr.dist).abs() <= 1.5 / 400.0);
    }

    #[test]
    fn grid_oracle_agrees_on_scattered_points() {
        let pts = [[0.3, -0.2], [1.7, 0.4], [0.6, 1.9]];
        let tri = poly(&[&pts[0], &pts[1], &pts[2]]);
        for x in [[-1.0, -1.0], [2.5, 2.5], [0.8, 0.6], [3.0, -2.0], [0.0, 1.5]] {
            let d = distance(&tri, &vector(&x), &tol()).unwrap();
            let g = grid_distance_triangle(pts, x, 300);
            let diam = 2.5;
            assert!(g >= d - 1e-12, "grid below exact: {g} < {d}");
            assert!(g - d <= diam / 300.0, "x={x:?}: grid {g} vs {d}");
        }
    }

    #[test]
    fn flat_projection_example() {
        let f = line(&[0.0, 1.0], &[1.0, 0.0]);
        let pr = metric_projection(&f, &vector(&[5.0, 7.0]), &tol()).unwrap();
        assert_relative_eq!(pr.point[0], 5.0, epsilon = 1e-14);
        assert_relative_eq!(pr.point[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(pr.dist, 6.0, epsilon = 1e-14);
    }

    #[test]
    fn subspace_projection_example() {
        let s = span(&[&[1.0, 1.0]]);
        let x = vector(&[2.0, 0.0]);
        let pr = metric_projection(&s, &x, &tol()).unwrap();
        // closed form <x,u>u with u = (1,1)/sqrt2
        let u = vector(&[1.0, 1.0]) / 2f64.sqrt();
        let expect = &u * x.dot(&u);
        assert_relative_eq!((pr.point - expect).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(pr.dist, 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn projection_rejects_dimension_mismatch() {
        let s = span(&[&[1.0, 0.0]]);
        assert!(matches!(
            metric_projection(&s, &vector(&[1.0, 2.0, 3.0]), &tol()),
            Err(HyperError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn nearest_point_examples() {
        let (p, nu) = nearest_point(&span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]), &tol()).unwrap();
        assert_eq!(p.norm(), 0.0);
        assert_eq!(nu, 0.0);
        let (p, nu) = nearest_point(&poly(&[&[1.0, 1.0], &[2.0, 1.0], &[1.0, 2.0]]), &tol()).unwrap();
        assert_relative_eq!((p - vector(&[1.0, 1.0])).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(nu, 2f64.sqrt(), epsilon = 1e-12);
        let (p, nu) = nearest_point(&line(&[0.0, 3.0], &[1.0, 0.0]), &tol()).unwrap();
        assert_relative_eq!((p - vector(&[0.0, 3.0])).norm(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(nu, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn truncated_distance_examples() {
        let f = line(&[0.0, 5.0], &[1.0, 0.0]);
        let d = truncated_distance(&f, &vector(&[0.5, 0.0]), 8.0, &tol()).unwrap();
        assert_relative_eq!(d, 5.0, epsilon = 1e-12);

        let seg = poly(&[&[0.0, 0.0], &[10.0, 0.0]]);
        let d = truncated_distance(&seg, &vector(&[11.0, 0.0]), 4.0, &tol()).unwrap();
        assert!((d - 7.0).abs() <= 1e-8, "{d}");
        // grid oracle over the truncated segment conv{(0,0),(4,0)}
        let g = (0..=4000)
            .map(|i| (11.0 - 4.0 * i as f64 / 4000.0).abs())
            .fold(f64::INFINITY, f64::min);
        assert!((g - d).abs() <= 1e-3);

        let s = span(&[&[1.0, 0.0]]);
        assert_eq!(truncated_distance(&s, &vector(&[0.0, 0.0]), 1.0, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn truncated_distance_polytope_on_sphere() {
        // square [-2,2]^2 cut by the unit disc is the disc itself
        let sq = poly(&[&[-2.0, -2.0], &[2.0, -2.0], &[2.0, 2.0], &[-2.0, 2.0]]);
        let x = vector(&[3.0, 1.0]);
        let d = truncated_distance(&sq, &x, 1.0, &tol()).unwrap();
        assert!((d - (x.norm() - 1.0)).abs() <= 1e-7, "{d}");
    }

    #[test]
    fn truncation_agrees_with_dykstra() {
        let tri = poly(&[&[1.0, -2.0], &[3.0, 0.5], &[0.5, 2.5]]);
        for x in [[4.0, 4.0], [-3.0, 0.0], [2.0, -3.0], [0.0, 0.0]] {
            let x = vector(&x);
            let a = truncated_projection(&tri, &x, 1.8, &tol()).unwrap();
            let b = truncated_projection_dykstra(&tri, &x, 1.8, &tol(), 200_000).unwrap();
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn truncated_flat_clips_inside_flat() {
        // line y = 3, radius 5: chord x in [-4, 4]
        let f = line(&[0.0, 3.0], &[1.0, 0.0]);
        let d = truncated_distance(&f, &vector(&[10.0, 3.0]), 5.0, &tol()).unwrap();
        assert_relative_eq!(d, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn truncated_distance_empty_intersection() {
        let f = line(&[0.0, 5.0], &[1.0, 0.0]);
        assert!(matches!(
            truncated_distance(&f, &vector(&[0.0, 0.0]), 2.0, &tol()),
            Err(HyperError::EmptyIntersection { .. })
        ));
        assert!(truncated_distance(&f, &vector(&[0.0, 0.0]), -1.0, &tol()).is_err());
    }

    #[test]
    fn affine_hull_examples() {
        let seg = Polytope::from_slices(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let f = affine_hull(&seg, &tol());
        assert_eq!(f.dim(), 1);
        assert_relative_eq!(f.direction().basis()[(0, 0)].abs(), 1.0, epsilon = 1e-14);

        let pt = Polytope::from_slices(&[&[3.0, 4.0]]).unwrap();
        assert_eq!(affine_hull(&pt, &tol()).dim(), 0);

        let tri = Polytope::from_slices(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]).unwrap();
        let f = affine_hull(&tri, &tol());
        assert_eq!(f.dim(), 2);
        // direction is span{e1, e2}: e3 is orthogonal to it
        let e3 = vector(&[0.0, 0.0, 1.0]);
        assert!(f.direction().project(&e3).norm() < 1e-14);
        for p in tri.points() {
            assert!((f.project(p) - p).norm() < 1e-14);
            assert_relative_eq!(p[2], 1.0);
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&poly(&[&[1.0, 2.0]]), &tol()), 0);
        assert_eq!(dimension(&poly(&[&[0.0, 0.0], &[1.0, 0.0]]), &tol()), 1);
        assert_eq!(dimension(&poly(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]), &tol()), 2);
        assert_eq!(dimension(&poly(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]]), &tol()), 1);
    }

    #[test]
    fn minkowski_examples() {
        let a = poly(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = poly(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let s = minkowski_sum(&a, &b, &tol()).unwrap();
        // membership sampling against the unit square
        for i in 0..=10 {
            for j in 0..=10 {
                let x = vector(&[i as f64 / 10.0, j as f64 / 10.0]);
                assert!(contains(&s, &x, 1e-9, &tol()).unwrap());
            }
        }
        assert!(!contains(&s, &vector(&[1.1, 0.5]), 1e-9, &tol()).unwrap());
        assert!(!contains(&s, &vector(&[0.5, -0.1]), 1e-9, &tol()).unwrap());

        let c = poly(&[&[1.0, 1.0], &[2.0, 1.0]]);
        let z = poly(&[&[0.0, 0.0]]);
        match minkowski_sum(&c, &z, &tol()).unwrap() {
            ConvexSet::Polytope(p) => assert_eq!(p.points(), &[vector(&[1.0, 1.0]), vector(&[2.0, 1.0])]),
            other => panic!("unexpected {other:?}"),
        }

        let f = line(&[0.0, 1.0], &[1.0, 0.0]);
        match minkowski_sum(&f, &poly(&[&[0.0, 2.0]]), &tol()).unwrap() {
            ConvexSet::Flat(g) => {
                assert_relative_eq!((g.base() - vector(&[0.0, 3.0])).norm(), 0.0);
                assert_eq!(g.dim(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }

        assert!(matches!(
            minkowski_sum(&f, &a, &tol()),
            Err(HyperError::UnsupportedSum(..))
        ));
    }

    #[test]
    fn hyperplane_examples() {
        let w = project_hyperplane(&vector(&[0.0, 1.0]), &vector(&[2.0, 3.0])).unwrap();
        assert_relative_eq!((&w - vector(&[2.0, 1.0])).norm(), 0.0, epsilon = 1e-14);
        // orthogonality: <w - a, a> = 0 and <x - w, z - w> = 0 for z on H_a
        let a = vector(&[0.0, 1.0]);
        assert!((&w - &a).dot(&a).abs() < 1e-14);
        let z = vector(&[-7.0, 1.0]);
        assert!((vector(&[2.0, 3.0]) - &w).dot(&(z - &w)).abs() < 1e-14);

        let w = project_hyperplane(&vector(&[1.0, 0.0]), &vector(&[1.0, 5.0])).unwrap();
        assert_relative_eq!((w - vector(&[1.0, 5.0])).norm(), 0.0);
        let w = project_hyperplane(&vector(&[0.0, 2.0]), &vector(&[0.0, 0.0])).unwrap();
        assert_relative_eq!((w - vector(&[0.0, 2.0])).norm(), 0.0);
        assert!(matches!(
            project_hyperplane(&vector(&[0.0, 0.0]), &vector(&[1.0, 1.0])),
            Err(HyperError::ZeroNormal)
        ));
    }

    #[test]
    fn contains_examples() {
        let seg = poly(&[&[0.0, 0.0], &[2.0, 0.0]]);
        assert!(contains(&seg, &vector(&[1.0, 0.0]), 1e-9, &tol()).unwrap());
        assert!(!contains(&seg, &vector(&[1.0, 1.0]), 1e-9, &tol()).unwrap());
        assert!(contains(&span(&[&[1.0, 0.0]]), &vector(&[5.0, 0.0]), 1e-9, &tol()).unwrap());
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(Polytope::new(vec![]), Err(HyperError::EmptyGenerators)));
        assert!(matches!(
            Polytope::from_slices(&[&[0.0, 1.0], &[1.0]]),
            Err(HyperError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            Polytope::from_slices(&[&[f64::NAN, 1.0]]),
            Err(HyperError::NonFinite)
        ));
        let skew = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        assert!(matches!(
            Subspace::new(skew, &tol()),
            Err(HyperError::NotOrthonormal(_))
        ));
    }
}
