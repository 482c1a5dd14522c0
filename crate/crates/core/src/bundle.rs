//! Local trivializations of the hyperspace of k-dimensional convex sets
//! over the neighbourhoods `W~` of the Grassmannian.
//!
//! A polytope `B` whose affine hull is parallel to some `V` in `W~` is
//! described by the triple `(V, omega, A)`: the direction `V`, the offset
//! `omega` in `W-perp`, and the shape `A = pi_W(B - omega)` inside `W`.

use serde::{Deserialize, Serialize};

use crate::convex::{affine_hull, ConvexSet, Polytope, Subspace, Vector};
use crate::error::{check_dim, HyperError, Result};
use crate::grassmann::{chart_flat_inv, in_tilde, lift_point, parallel_subspace};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug)]
pub struct ChartTriple {
    pub v: Subspace,
    pub omega: Vector,
    pub a: Polytope,
}

/// Componentwise distances between two triples.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TripleResidual {
    pub gap: f64,
    pub omega: f64,
    pub hausdorff: f64,
}

impl ChartTriple {
    /// Checks the chart invariants against `w`.
    pub fn validate(&self, w: &Subspace, tol: &ToleranceConfig) -> Result<()> {
        check_dim(w.ambient_dim(), self.omega.len())?;
        check_dim(w.ambient_dim(), self.a.ambient_dim())?;
        if !in_tilde(w, &self.v, tol)? {
            return Err(HyperError::OutsideNeighbourhood(
                crate::linalg::smallest_singular_value(&w.basis().tr_mul(self.v.basis())),
            ));
        }
        let along = w.project(&self.omega).norm();
        if along > tol.geom * self.omega.norm().max(1.0) {
            return Err(HyperError::OffSubspace(along));
        }
        for p in self.a.points() {
            let off = w.reject(p).norm();
            if off > tol.geom * p.norm().max(1.0) {
                return Err(HyperError::OffSubspace(off));
            }
        }
        Ok(())
    }

    pub fn residual(&self, other: &ChartTriple, tol: &ToleranceConfig) -> Result<TripleResidual> {
        Ok(TripleResidual {
            gap: crate::grassmann::gap(&self.v, &other.v)?,
            omega: (&self.omega - &other.omega).norm(),
            hausdorff: crate::hypermetrics::hausdorff(&self.a, &other.a, tol)?,
        })
    }
}

/// `Lambda_W(V, A) = Phi_W({V} x A)`. The lift is linear, so lifting the
/// generators lifts the hull.
pub fn lift_set(w: &Subspace, v: &Subspace, a: &Polytope, tol: &ToleranceConfig) -> Result<Polytope> {
    check_dim(w.ambient_dim(), a.ambient_dim())?;
    let lifted = Polytope::new(
        a.points()
            .iter()
            .map(|p| lift_point(w, v, p, tol))
            .collect::<Result<Vec<_>>>()?,
    )?;
    if cfg!(debug_assertions) {
        for (p, q) in a.points().iter().zip(lifted.points()) {
            let err = (w.project(q) - p).norm();
            debug_assert!(
                err <= 1e3 * tol.geom * p.norm().max(1.0),
                "section property violated by {err:e}"
            );
        }
    }
    Ok(lifted)
}

/// `Lambda(A) = q(Aff A)`: the direction of the affine hull.
pub fn base_map(a: &ConvexSet, tol: &ToleranceConfig) -> Subspace {
    match a {
        ConvexSet::Polytope(p) => parallel_subspace(&affine_hull(p, tol)).0,
        ConvexSet::Flat(f) => f.direction().clone(),
        ConvexSet::Subspace(s) => s.clone(),
    }
}

/// `psi_W(V, omega, A) = Lambda_W(V, A) + omega`.
pub fn chart_convex(w: &Subspace, t: &ChartTriple, tol: &ToleranceConfig) -> Result<Polytope> {
    t.validate(w, tol)?;
    Ok(lift_set(w, &t.v, &t.a, tol)?.translate(&t.omega))
}

/// `psi_W^{-1}(B) = (q(Phi B), f(Phi B), pi_W(B - f(Phi B)))` where `f` is
/// the offset coordinate of the flat chart.
pub fn chart_convex_inv(w: &Subspace, b: &Polytope, tol: &ToleranceConfig) -> Result<ChartTriple> {
    check_dim(w.ambient_dim(), b.ambient_dim())?;
    let hull = affine_hull(b, tol);
    check_dim(w.dim(), hull.dim())?;
    let (v, omega) = chart_flat_inv(w, &hull, tol)?;
    let a = b.map(|p| w.project(&(p - &omega)))?;
    Ok(ChartTriple { v, omega, a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{dimension, vector, Flat};
    use crate::grassmann::{orthonormal_basis, same_subspace};
    use crate::hypermetrics::hausdorff;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn e1() -> Subspace {
        orthonormal_basis(&[vector(&[1.0, 0.0])], &tol()).unwrap()
    }

    fn diag() -> Subspace {
        orthonormal_basis(&[vector(&[1.0, 1.0])], &tol()).unwrap()
    }

    fn poly(pts: &[&[f64]]) -> Polytope {
        Polytope::from_slices(pts).unwrap()
    }

    #[test]
    fn lift_set_examples() {
        let l = lift_set(&e1(), &diag(), &poly(&[&[0.0, 0.0], &[2.0, 0.0]]), &tol()).unwrap();
        assert!(hausdorff(&l, &poly(&[&[0.0, 0.0], &[2.0, 2.0]]), &tol()).unwrap() < 1e-12);
        let a = poly(&[&[-1.0, 0.0], &[4.0, 0.0]]);
        assert!(hausdorff(&lift_set(&e1(), &e1(), &a, &tol()).unwrap(), &a, &tol()).unwrap() < 1e-15);
        let l = lift_set(&e1(), &diag(), &poly(&[&[3.0, 0.0]]), &tol()).unwrap();
        assert!((l.points()[0].clone() - vector(&[3.0, 3.0])).norm() < 1e-12);
    }

    #[test]
    fn base_map_examples() {
        let s = base_map(&poly(&[&[1.0, 1.0], &[2.0, 2.0]]).into(), &tol());
        assert!(same_subspace(&s, &diag(), 1e-12).unwrap());
        let s = base_map(&poly(&[&[0.0, 1.0], &[1.0, 1.0]]).into(), &tol());
        assert!(same_subspace(&s, &e1(), 1e-12).unwrap());
        let s = base_map(&e1().into(), &tol());
        assert!(same_subspace(&s, &e1(), 0.0).unwrap());
        let f = Flat::from_basis(vector(&[0.0, 2.0]), &[vector(&[1.0, 0.0])], &tol()).unwrap();
        assert!(same_subspace(&base_map(&f.into(), &tol()), &e1(), 1e-12).unwrap());
    }

    #[test]
    fn chart_convex_examples() {
        let t = ChartTriple {
            v: diag(),
            omega: vector(&[0.0, 3.0]),
            a: poly(&[&[0.0, 0.0], &[1.0, 0.0]]),
        };
        let b = chart_convex(&e1(), &t, &tol()).unwrap();
        assert!(hausdorff(&b, &poly(&[&[0.0, 3.0], &[1.0, 4.0]]), &tol()).unwrap() < 1e-12);

        let a = poly(&[&[0.5, 0.0], &[2.0, 0.0]]);
        let t = ChartTriple {
            v: e1(),
            omega: vector(&[0.0, 0.0]),
            a: a.clone(),
        };
        assert!(hausdorff(&chart_convex(&e1(), &t, &tol()).unwrap(), &a, &tol()).unwrap() < 1e-15);

        let t = ChartTriple {
            v: diag(),
            omega: vector(&[0.0, 3.0]),
            a: poly(&[&[0.0, 0.0]]),
        };
        let b = chart_convex(&e1(), &t, &tol()).unwrap();
        assert!((b.points()[0].clone() - vector(&[0.0, 3.0])).norm() < 1e-15);
        assert_eq!(dimension(&b.into(), &tol()), 0);
    }

    #[test]
    fn chart_convex_rejects_bad_triples() {
        let t = ChartTriple {
            v: diag(),
            omega: vector(&[1.0, 3.0]),
            a: poly(&[&[0.0, 0.0]]),
        };
        assert!(matches!(
            chart_convex(&e1(), &t, &tol()),
            Err(HyperError::OffSubspace(_))
        ));
        let t = ChartTriple {
            v: diag(),
            omega: vector(&[0.0, 3.0]),
            a: poly(&[&[0.0, 1.0]]),
        };
        assert!(matches!(
            chart_convex(&e1(), &t, &tol()),
            Err(HyperError::OffSubspace(_))
        ));
    }

    #[test]
    fn chart_convex_inverse_examples() {
        let b = poly(&[&[0.0, 3.0], &[1.0, 4.0]]);
        let t = chart_convex_inv(&e1(), &b, &tol()).unwrap();
        assert!(same_subspace(&t.v, &diag(), 1e-12).unwrap());
        assert!((&t.omega - vector(&[0.0, 3.0])).norm() < 1e-12);
        assert!(hausdorff(&t.a, &poly(&[&[0.0, 0.0], &[1.0, 0.0]]), &tol()).unwrap() < 1e-12);

        let a = poly(&[&[-1.0, 0.0], &[2.0, 0.0]]);
        let t = chart_convex_inv(&e1(), &a, &tol()).unwrap();
        assert!(same_subspace(&t.v, &e1(), 1e-12).unwrap());
        assert!(t.omega.norm() < 1e-15);
        assert!(hausdorff(&t.a, &a, &tol()).unwrap() < 1e-15);
    }

    #[test]
    fn singleton_needs_the_zero_dimensional_chart() {
        let b = poly(&[&[2.0, 5.0]]);
        assert!(matches!(
            chart_convex_inv(&e1(), &b, &tol()),
            Err(HyperError::DimensionMismatch { .. })
        ));
        // over W = {0} the whole point is offset and the fiber is {0}
        let zero = Subspace::zero(2);
        let t = chart_convex_inv(&zero, &b, &tol()).unwrap();
        assert_eq!(t.v.dim(), 0);
        assert!((&t.omega - vector(&[2.0, 5.0])).norm() < 1e-15);
        assert_eq!(t.a.points()[0].norm(), 0.0);
        let back = chart_convex(&zero, &t, &tol()).unwrap();
        assert!(hausdorff(&back, &b, &tol()).unwrap() < 1e-15);
    }
}
