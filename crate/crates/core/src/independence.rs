//! Affine independence, its stability radius, and simplex interiors.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{Polytope, Vector};
use crate::document::SetDocument;
use crate::error::{check_dim, HyperError, Result};
use crate::linalg::{self, from_columns, singular_values};
use crate::random::{stream_rng, uniform_in_ball, unit_vector};
use crate::report::{Check, Report, SeriesPoint, Verdict};
use crate::tolerance::ToleranceConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct PointFamily {
    points: Vec<Vector>,
}

impl PointFamily {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let first = points.first().ok_or(HyperError::EmptyGenerators)?;
        let n = first.len();
        for p in &points {
            check_dim(n, p.len())?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(HyperError::NonFinite);
            }
        }
        Ok(Self { points })
    }

    pub fn from_slices(points: &[&[f64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| crate::convex::vector(p)).collect())
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    /// Number of points minus one.
    pub fn k(&self) -> usize {
        self.points.len() - 1
    }

    /// `[a_1 - a_0, ..., a_k - a_0]`, an `n x k` matrix.
    pub fn difference_matrix(&self) -> DMatrix<f64> {
        let a0 = &self.points[0];
        let cols: Vec<Vector> = self.points[1..].iter().map(|p| p - a0).collect();
        from_columns(self.ambient_dim(), &cols)
    }

    pub fn scale(&self, c: f64) -> PointFamily {
        Self {
            points: self.points.iter().map(|p| p * c).collect(),
        }
    }

    pub fn to_document(&self) -> SetDocument {
        SetDocument::from_set(&Polytope::new(self.points.clone()).expect("non-empty").into())
    }
}

fn extreme_singular_values(d: &DMatrix<f64>) -> (f64, f64) {
    if d.ncols() == 0 {
        return (f64::INFINITY, 0.0);
    }
    if d.ncols() > d.nrows() {
        return (0.0, linalg::spectral_norm(d));
    }
    let s = singular_values(d);
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    (min, max)
}

pub fn is_affinely_independent(fam: &PointFamily, tol: f64) -> bool {
    let (min, max) = extreme_singular_values(&fam.difference_matrix());
    min > tol * max.max(1.0)
}

/// Radius `delta` such that every selection `u_i` in `B(a_i, delta)` is
/// affinely independent: `sigma_min(D) / (4 sqrt k)`. Infinite for a single
/// point.
pub fn independence_radius(fam: &PointFamily, tol: &ToleranceConfig) -> Result<f64> {
    if fam.k() == 0 {
        return Ok(f64::INFINITY);
    }
    if !is_affinely_independent(fam, tol.rank) {
        return Err(HyperError::AffinelyDependent);
    }
    let (min, _) = extreme_singular_values(&fam.difference_matrix());
    Ok(min / (4.0 * (fam.k() as f64).sqrt()))
}

/// Serializable certified radius; an infinite radius is written as `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRecord {
    pub k: usize,
    #[serde(with = "crate::report::extended_float")]
    pub radius: f64,
}

impl RadiusRecord {
    pub fn certify(fam: &PointFamily, tol: &ToleranceConfig) -> Result<Self> {
        Ok(Self {
            k: fam.k(),
            radius: independence_radius(fam, tol)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionMode {
    Uniform,
    Boundary,
    RankOneAttack,
}

impl SelectionMode {
    fn for_trial(trial: u64) -> Self {
        match trial % 3 {
            0 => SelectionMode::Uniform,
            1 => SelectionMode::Boundary,
            _ => SelectionMode::RankOneAttack,
        }
    }
}

/// Shifts every point along the left singular vector of the smallest
/// singular value so that the difference matrix loses `t sigma_min u v^T`,
/// with `t` as large as the radius allows (Eckart-Young).
fn rank_one_shifts<R: Rng + ?Sized>(fam: &PointFamily, delta: f64, rng: &mut R) -> Vec<Vector> {
    let d = fam.difference_matrix();
    let n = fam.ambient_dim();
    let k = fam.k();
    if k == 0 {
        return vec![Vector::zeros(n)];
    }
    let svd = linalg::svd(&d);
    let (dir, coeffs): (Vector, Vec<f64>) = if k > n {
        // more differences than dimensions: already dependent, any shift works
        (unit_vector(rng, n), vec![0.0; k])
    } else {
        let j = k - 1;
        let sigma = svd.s[j];
        (
            svd.u.column(j).into_owned(),
            (0..k).map(|i| sigma * svd.v[(i, j)]).collect(),
        )
    };
    let lo = coeffs.iter().cloned().fold(0.0, f64::min);
    let hi = coeffs.iter().cloned().fold(0.0, f64::max);
    let range = hi - lo;
    let t = if range <= 2.0 * delta { 1.0 } else { 2.0 * delta / range };
    // point i moves by (c - t coeff_i) dir, point 0 by c dir; any c keeping
    // all moves within delta is admissible
    let (c_lo, c_hi) = (t * hi - delta, t * lo + delta);
    let c = if c_hi > c_lo {
        rng.random_range(c_lo..=c_hi)
    } else {
        0.5 * (c_lo + c_hi)
    };
    let mut shifts = vec![&dir * c];
    shifts.extend(coeffs.iter().map(|a| &dir * (c - t * a)));
    shifts
}

fn selection<R: Rng + ?Sized>(fam: &PointFamily, delta: f64, mode: SelectionMode, rng: &mut R) -> Vec<Vector> {
    let n = fam.ambient_dim();
    let shifts: Vec<Vector> = match mode {
        SelectionMode::Uniform => (0..=fam.k()).map(|_| uniform_in_ball(rng, n, delta)).collect(),
        SelectionMode::Boundary => (0..=fam.k())
            .map(|_| {
                let u: f64 = rng.random();
                unit_vector(rng, n) * (delta * (1.0 - 1e-6 * u))
            })
            .collect(),
        SelectionMode::RankOneAttack => rank_one_shifts(fam, delta, rng),
    };
    fam.points.iter().zip(shifts).map(|(p, s)| p + s).collect()
}

/// Draws `trials` selections `u_i` in `B(a_i, delta)`, cycling uniform,
/// boundary-biased and rank-one adversarial draws, and reports every
/// selection whose difference matrix has `sigma_min < tol.rank * max(sigma_max, 1)`.
///
/// Residuals are `tol.rank * max(sigma_max, 1) / sigma_min` with threshold 1.
/// The series records the smallest `sigma_min` seen.
pub fn adversarial_independence_check(
    fam: &PointFamily,
    delta: f64,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<Report> {
    if !(delta > 0.0) {
        return Err(HyperError::InvalidArgument(format!(
            "radius must be positive, got {delta}"
        )));
    }
    let start = std::time::Instant::now();
    // an infinite radius only arises for a single point, where any draw works
    let delta = if delta.is_finite() { delta } else { 1.0 };
    let outcomes: Vec<(Check, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial);
            let pts = selection(fam, delta, SelectionMode::for_trial(trial), &mut rng);
            let sel = PointFamily { points: pts };
            let (min, max) = extreme_singular_values(&sel.difference_matrix());
            let floor = tol.rank * max.max(1.0);
            let ratio = if min > 0.0 { floor / min } else { f64::MAX };
            let mut check = Check::at_most(ratio, 1.0);
            if min >= floor {
                check.verdict = Verdict::Pass;
            } else {
                check = check.with_inputs(vec![sel.to_document()]);
            }
            (check, min)
        })
        .collect();
    let smallest = outcomes.iter().map(|o| o.1).fold(f64::INFINITY, f64::min);
    let mut report = Report::from_trials(
        "independence",
        fam.ambient_dim(),
        seed,
        outcomes.into_iter().map(|(c, _)| vec![c]).collect(),
    );
    if trials > 0 && smallest.is_finite() {
        report.series.push(SeriesPoint {
            label: "smallest_sigma_min".into(),
            value: smallest,
        });
    }
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Barycentric coordinates of `x` with respect to the simplex.
pub fn barycentric(simplex: &PointFamily, x: &Vector, tol: f64) -> Result<Vec<f64>> {
    check_dim(simplex.ambient_dim(), x.len())?;
    if !is_affinely_independent(simplex, tol.max(ToleranceConfig::RANK_FLOOR)) && simplex.k() > 0 {
        return Err(HyperError::AffinelyDependent);
    }
    let a0 = &simplex.points[0];
    let rhs = x - a0;
    let scale = simplex
        .points
        .iter()
        .map(|p| p.norm())
        .fold(x.norm(), f64::max)
        .max(1.0);
    if simplex.k() == 0 {
        let off = rhs.norm();
        if off > tol * scale {
            return Err(HyperError::OffAffineHull(off));
        }
        return Ok(vec![1.0]);
    }
    let d = simplex.difference_matrix();
    let mu = linalg::lstsq(&d, &rhs, 0.0).ok_or(HyperError::AffinelyDependent)?;
    let off = (&d * &mu - &rhs).norm();
    if off > tol * scale {
        return Err(HyperError::OffAffineHull(off));
    }
    let mut lambda = vec![1.0 - mu.sum()];
    lambda.extend(mu.iter());
    Ok(lambda)
}

/// Whether every barycentric coordinate of `x` lies in `(tol, 1 - tol)`.
/// A single point is its own relative interior.
pub fn in_relative_interior(simplex: &PointFamily, x: &Vector, tol: f64) -> Result<bool> {
    let lambda = barycentric(simplex, x, tol)?;
    if simplex.k() == 0 {
        return Ok(true);
    }
    Ok(lambda.iter().all(|l| *l > tol && *l < 1.0 - tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::vector;

    fn fam(pts: &[&[f64]]) -> PointFamily {
        PointFamily::from_slices(pts).unwrap()
    }

    fn tri() -> PointFamily {
        fam(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])
    }

    #[test]
    fn single_point_radius_is_a_token() {
        let r = RadiusRecord::certify(&fam(&[&[1.0, 2.0]]), &ToleranceConfig::default()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(text, r#"{"k":0,"radius":"inf"}"#);
        assert_eq!(serde_json::from_str::<RadiusRecord>(&text).unwrap(), r);
    }

    #[test]
    fn independence_examples() {
        assert!(is_affinely_independent(&tri(), 1e-8));
        assert!(!is_affinely_independent(
            &fam(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]),
            1e-8
        ));
        assert!(!is_affinely_independent(
            &fam(&[&[1.0, 1.0], &[2.0, 2.0], &[3.0, 3.0]]),
            1e-8
        ));
        assert!(!is_affinely_independent(&fam(&[&[0.0], &[1.0], &[2.0]]), 1e-8));
        assert!(is_affinely_independent(&fam(&[&[3.0, 3.0]]), 1e-8));
    }

    #[test]
    fn radius_examples() {
        let tol = ToleranceConfig::default();
        let r = independence_radius(&tri(), &tol).unwrap();
        assert!((r - 1.0 / (4.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((independence_radius(&fam(&[&[0.0, 0.0], &[1.0, 0.0]]), &tol).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(
            independence_radius(&fam(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]]), &tol),
            Err(HyperError::AffinelyDependent)
        ));
        assert_eq!(independence_radius(&fam(&[&[1.0, 2.0]]), &tol).unwrap(), f64::INFINITY);
    }

    #[test]
    fn adversarial_examples() {
        let tol = ToleranceConfig::default();
        let r = independence_radius(&tri(), &tol).unwrap();
        let rep = adversarial_independence_check(&tri(), r, 3000, 42, &tol).unwrap();
        assert!(rep.passed, "{rep:?}");
        let rep = adversarial_independence_check(&tri(), 0.6, 3000, 42, &tol).unwrap();
        assert!(rep.failure_count > 0);
        let rep = adversarial_independence_check(&tri(), 0.6, 0, 42, &tol).unwrap();
        assert!(rep.passed && rep.trials == 0 && rep.failures.is_empty());
        assert!(adversarial_independence_check(&tri(), 0.0, 1, 42, &tol).is_err());
    }

    #[test]
    fn adversarial_is_deterministic() {
        let tol = ToleranceConfig::default();
        let a = adversarial_independence_check(&tri(), 0.5, 300, 9, &tol).unwrap();
        let b = adversarial_independence_check(&tri(), 0.5, 300, 9, &tol).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn relative_interior_examples() {
        let t = tri();
        assert!(in_relative_interior(&t, &vector(&[1.0 / 3.0, 1.0 / 3.0]), 1e-9).unwrap());
        assert!(!in_relative_interior(&t, &vector(&[0.0, 0.0]), 1e-9).unwrap());
        assert!(!in_relative_interior(&t, &vector(&[0.5, 0.0]), 1e-9).unwrap());
        let seg = fam(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]]);
        assert!(in_relative_interior(&seg, &vector(&[0.5, 0.0, 0.0]), 1e-9).unwrap());
        assert!(matches!(
            in_relative_interior(&seg, &vector(&[0.5, 1.0, 0.0]), 1e-9),
            Err(HyperError::OffAffineHull(_))
        ));
        assert!(in_relative_interior(&fam(&[&[1.0, 1.0]]), &vector(&[1.0, 1.0]), 1e-9).unwrap());
    }

    #[test]
    fn barycentric_reconstructs() {
        let t = fam(&[&[1.0, 0.0, 2.0], &[0.0, 3.0, 1.0], &[2.0, 2.0, 2.0]]);
        let x = vector(&[1.0, 5.0 / 3.0, 5.0 / 3.0]);
        let l = barycentric(&t, &x, 1e-9).unwrap();
        let back = t
            .points()
            .iter()
            .zip(&l)
            .fold(Vector::zeros(3), |acc, (p, w)| acc + p * *w);
        assert!((back - x).norm() < 1e-12);
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
