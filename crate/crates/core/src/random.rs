//! Seeded random instances.
//!
//! Every stream is a ChaCha8 generator keyed by `(seed, stream)`, so trial
//! `i` of a run draws the same numbers regardless of scheduling.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::convex::{dimension, ConvexSet, Flat, Polytope, Subspace, Vector};
use crate::error::{HyperError, Result};
use crate::tolerance::ToleranceConfig;

/// Points beyond the `k + 1` needed to span a `k`-dimensional polytope.
pub const EXTRA_POINTS: usize = 3;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, k, |_, _| rng.sample(StandardNormal))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Uniform point of the closed ball of radius `r` centred at the origin.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, n: usize, r: f64) -> Vector {
    if n == 0 {
        return DVector::zeros(0);
    }
    let u: f64 = rng.random();
    unit_vector(rng, n) * (r * u.powf(1.0 / n as f64))
}

/// Haar-distributed `k`-dimensional subspace of `R^n`.
pub fn random_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    assert!(k <= n, "subspace dimension {k} exceeds {n}");
    if k == 0 {
        return Subspace::zero(n);
    }
    let tol = ToleranceConfig::default();
    loop {
        let qr = gaussian_matrix(rng, n, k).qr();
        let r = qr.r();
        if r.diagonal().iter().any(|d| d.abs() < 1e-8) {
            continue;
        }
        // fixing the signs of diag(R) makes Q Haar distributed
        let mut q = qr.q();
        for (j, d) in r.diagonal().iter().enumerate() {
            if *d < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        return Subspace::new(q, &tol).expect("orthonormal by construction");
    }
}

pub fn random_flat<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Flat {
    let dir = random_subspace(rng, n, k);
    Flat::new(gaussian_vector(rng, n), dir).expect("dimensions agree")
}

/// Hull of `k + 1 + extra` Gaussian points of a random `k`-flat, redrawn
/// until the hull really is `k`-dimensional.
pub fn gaussian_polytope<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, extra: usize) -> Polytope {
    assert!(k <= n, "polytope dimension {k} exceeds {n}");
    let tol = ToleranceConfig::default();
    loop {
        let flat = random_flat(rng, n, k);
        let pts: Vec<Vector> = (0..k + 1 + extra)
            .map(|_| flat.base() + flat.direction().basis() * gaussian_vector(rng, k))
            .collect();
        let p = Polytope::new(pts).expect("non-empty");
        if dimension(&ConvexSet::Polytope(p.clone()), &tol) == k {
            return p;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    GaussianPolytope,
    UniformSubspace,
    RandomFlat,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] = [
        GeneratorKind::GaussianPolytope,
        GeneratorKind::UniformSubspace,
        GeneratorKind::RandomFlat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::GaussianPolytope => "gaussian-polytope",
            GeneratorKind::UniformSubspace => "uniform-subspace",
            GeneratorKind::RandomFlat => "random-flat",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = HyperError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HyperError::InvalidArgument(format!("unknown generator kind {s:?}")))
    }
}

pub fn random_instance(kind: GeneratorKind, n: usize, k: usize, seed: u64) -> Result<ConvexSet> {
    if n == 0 || k > n {
        return Err(HyperError::InvalidArgument(format!(
            "need 0 <= k <= n and n >= 1, got n = {n}, k = {k}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    Ok(match kind {
        GeneratorKind::GaussianPolytope => gaussian_polytope(&mut rng, n, k, EXTRA_POINTS).into(),
        GeneratorKind::UniformSubspace => random_subspace(&mut rng, n, k).into(),
        GeneratorKind::RandomFlat => random_flat(&mut rng, n, k).into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::parallel_subspace;
    use crate::linalg::orthonormality_residual;

    #[test]
    fn deterministic_per_seed() {
        let a = random_instance(GeneratorKind::UniformSubspace, 3, 1, 5).unwrap();
        let b = random_instance(GeneratorKind::UniformSubspace, 3, 1, 5).unwrap();
        match (a, b) {
            (ConvexSet::Subspace(a), ConvexSet::Subspace(b)) => assert_eq!(a.basis(), b.basis()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generated_dimensions() {
        let tol = ToleranceConfig::default();
        for seed in 0..20 {
            let p = random_instance(GeneratorKind::GaussianPolytope, 2, 2, seed).unwrap();
            assert_eq!(dimension(&p, &tol), 2);
            let p = random_instance(GeneratorKind::GaussianPolytope, 4, 1, seed).unwrap();
            assert_eq!(dimension(&p, &tol), 1);
            if let ConvexSet::Flat(f) = random_instance(GeneratorKind::RandomFlat, 2, 1, seed).unwrap() {
                assert_eq!(parallel_subspace(&f).0.dim(), 1);
            } else {
                panic!("not a flat");
            }
            if let ConvexSet::Subspace(s) = random_instance(GeneratorKind::UniformSubspace, 5, 3, seed).unwrap() {
                assert!(orthonormality_residual(s.basis()) < 1e-12);
            }
        }
    }

    #[test]
    fn kinds_parse_and_reject() {
        for k in GeneratorKind::ALL {
            assert_eq!(k.name().parse::<GeneratorKind>().unwrap(), k);
        }
        assert!("cube".parse::<GeneratorKind>().is_err());
        assert!(random_instance(GeneratorKind::RandomFlat, 2, 3, 0).is_err());
    }

    #[test]
    fn streams_differ() {
        let a: f64 = stream_rng(1, 0).random();
        let b: f64 = stream_rng(1, 1).random();
        assert_ne!(a, b);
    }

    #[test]
    fn ball_samples_stay_inside() {
        let mut rng = stream_rng(3, 0);
        for _ in 0..200 {
            assert!(uniform_in_ball(&mut rng, 3, 0.5).norm() <= 0.5 + 1e-15);
        }
    }
}
