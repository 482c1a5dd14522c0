use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use hyperconvex::convex::{distance, metric_projection, truncated_distance, vector, Flat};
use hyperconvex::grassmann::{chart_flat, chart_flat_inv, gap, lift_point, orthogonal_complement, same_subspace};
use hyperconvex::independence::{independence_radius, PointFamily};
use hyperconvex::random::{random_subspace, stream_rng};
use hyperconvex::{parse_set, serialize, ConvexSet, Polytope, Subspace, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, n)
}

fn points(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(coords(n), 1..=max)
}

fn polytope(pts: &[Vec<f64>]) -> ConvexSet {
    Polytope::new(pts.iter().map(|p| vector(p)).collect()).unwrap().into()
}

fn subspace(n: usize, k: usize, seed: u64) -> Subspace {
    random_subspace(&mut stream_rng(seed, 0), n, k)
}

/// Exact planar distance to a convex hull: zero inside, otherwise the
/// distance to the nearest segment between two generators.
fn planar_hull_distance(pts: &[Vec<f64>], x: &[f64]) -> f64 {
    let seg = |a: &[f64], b: &[f64]| {
        let d = [b[0] - a[0], b[1] - a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
        };
        ((x[0] - a[0] - t * d[0]).powi(2) + (x[1] - a[1] - t * d[1]).powi(2)).sqrt()
    };
    let cross = |a: &[f64], b: &[f64], c: &[f64]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let mut best = f64::INFINITY;
    for a in pts {
        for b in pts {
            best = best.min(seg(a, b));
        }
    }
    // inside some triangle of generators means inside the hull
    for a in pts {
        for b in pts {
            for c in pts {
                let (s1, s2, s3) = (cross(a, b, x), cross(b, c, x), cross(c, a, x));
                let area = cross(a, b, c).abs();
                if area > 1e-9 && ((s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0) || (s1 <= 0.0 && s2 <= 0.0 && s3 <= 0.0)) {
                    return 0.0;
                }
            }
        }
    }
    best
}

/// `|P_V - P_W|` from a symmetric eigendecomposition.
fn projector_gap(v: &Subspace, w: &Subspace) -> f64 {
    let d: DMatrix<f64> = v.projector() - w.projector();
    d.symmetric_eigen().eigenvalues.iter().fold(0.0, |m, e| m.max(e.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn projection_is_non_expansive(pts in points(3, 6), x in coords(3), y in coords(3)) {
        let set = polytope(&pts);
        let (x, y) = (vector(&x), vector(&y));
        let px = metric_projection(&set, &x, &tol()).unwrap().point;
        let py = metric_projection(&set, &y, &tol()).unwrap().point;
        prop_assert!((px - py).norm() <= (x - y).norm() + tol().geom);
    }

    #[test]
    fn variational_inequality(pts in points(4, 7), x in coords(4)) {
        let x = vector(&x);
        let p = metric_projection(&polytope(&pts), &x, &tol()).unwrap().point;
        for a in &pts {
            prop_assert!((&x - &p).dot(&(vector(a) - &p)) <= 1e-8);
        }
    }

    #[test]
    fn planar_distance_matches_exact_geometry(pts in points(2, 6), x in coords(2)) {
        let d = distance(&polytope(&pts), &vector(&x), &tol()).unwrap();
        prop_assert!((d - planar_hull_distance(&pts, &x)).abs() <= 1e-8, "{d} vs {}", planar_hull_distance(&pts, &x));
    }

    #[test]
    fn flat_residual_is_orthogonal(base in coords(4), x in coords(4), k in 0usize..=4, seed in any::<u64>()) {
        let dir = subspace(4, k, seed);
        let f: ConvexSet = Flat::new(vector(&base), dir.clone()).unwrap().into();
        let x = vector(&x);
        let p = metric_projection(&f, &x, &tol()).unwrap().point;
        for b in dir.basis_vectors() {
            prop_assert!((&x - &p).dot(&b).abs() <= tol().geom * 10.0);
        }
        let again = metric_projection(&f, &p, &tol()).unwrap().point;
        prop_assert!((again - &p).norm() <= tol().geom);
    }

    #[test]
    fn truncation_identity(pts in points(3, 5), dir in coords(3), j in 1usize..=3, frac in 0.0..0.999f64) {
        let set = polytope(&pts);
        let d0 = distance(&set, &DVector::zeros(3), &tol()).unwrap();
        let big = 2.0 * j as f64 + d0 + 1.0;
        let u = vector(&dir);
        prop_assume!(u.norm() > 1e-6);
        let x = u.normalize() * (frac * j as f64);
        let exact = distance(&set, &x, &tol()).unwrap();
        let truncated = truncated_distance(&set, &x, big, &tol()).unwrap();
        prop_assert!((exact - truncated).abs() <= 1e-7);
    }

    #[test]
    fn convex_combination_bound(a in points(3, 4), shifts in points(3, 4), w in prop::collection::vec(0.0..1.0f64, 4)) {
        let m = a.len().min(shifts.len());
        let total: f64 = w[..m].iter().sum();
        prop_assume!(total > 1e-6);
        let r = shifts[..m].iter().map(|s| vector(s).norm()).fold(0.0, f64::max) + 1e-12;
        let (mut ca, mut cb) = (DVector::zeros(3), DVector::zeros(3));
        for i in 0..m {
            let l = w[i] / total;
            ca += vector(&a[i]) * l;
            cb += (vector(&a[i]) + vector(&shifts[i])) * l;
        }
        prop_assert!((ca - cb).norm() < r);
    }

    #[test]
    fn gap_matches_projector_difference(n in 1usize..=6, kv in 0usize..=6, kw in 0usize..=6, s in any::<u64>()) {
        let (v, w) = (subspace(n, kv.min(n), s), subspace(n, kw.min(n), s ^ 0x5bd1));
        let g = gap(&v, &w).unwrap();
        prop_assert!((g - projector_gap(&v, &w)).abs() <= 1e-9);
        prop_assert_eq!(g, gap(&w, &v).unwrap());
        let gc = gap(&orthogonal_complement(&v), &orthogonal_complement(&w)).unwrap();
        prop_assert!((g - gc).abs() <= 1e-9);
    }

    #[test]
    fn gap_triangle(n in 2usize..=5, k in 1usize..=2, s in any::<u64>()) {
        let k = k.min(n);
        let (u, v, w) = (subspace(n, k, s), subspace(n, k, s.wrapping_add(1)), subspace(n, k, s.wrapping_add(2)));
        prop_assert!(gap(&u, &w).unwrap() <= gap(&u, &v).unwrap() + gap(&v, &w).unwrap() + 1e-9);
    }

    #[test]
    fn lift_is_a_linear_section(x in coords(4), y in coords(4), c in -3.0..3.0f64, s in any::<u64>(), tilt in -0.5..0.5f64) {
        let w = subspace(4, 2, s);
        let perp = orthogonal_complement(&w);
        // V is the graph of a small map W -> W^perp, so it lies in the chart domain
        let map = perp.basis() * DMatrix::from_fn(2, 2, |i, j| if i == j { tilt } else { 0.3 * tilt });
        let v = Subspace::span(&[
            w.basis().column(0) + map.column(0),
            w.basis().column(1) + map.column(1),
        ], 4, &tol()).unwrap();
        let (x, y) = (w.project(&vector(&x)), w.project(&vector(&y)));
        let lx = lift_point(&w, &v, &x, &tol()).unwrap();
        let ly = lift_point(&w, &v, &y, &tol()).unwrap();
        prop_assert!((w.project(&lx) - &x).norm() <= 1e-9);
        prop_assert!(v.reject(&lx).norm() <= 1e-9);
        let lsum = lift_point(&w, &v, &(&x * c + &y), &tol()).unwrap();
        prop_assert!((lsum - (lx * c + ly)).norm() <= 1e-8);

        let omega = perp.project(&vector(&[1.0, -2.0, 0.5, 3.0]));
        let f = chart_flat(&w, &v, &omega, &tol()).unwrap();
        let (v2, omega2) = chart_flat_inv(&w, &f, &tol()).unwrap();
        prop_assert!(same_subspace(&v, &v2, 1e-9).unwrap());
        prop_assert!((omega - omega2).norm() <= 1e-9);
    }

    #[test]
    fn documents_round_trip(pts in points(3, 5), base in coords(3), k in 0usize..=3, s in any::<u64>()) {
        let sets: Vec<ConvexSet> = vec![
            polytope(&pts),
            Flat::new(vector(&base), subspace(3, k, s)).unwrap().into(),
            subspace(3, k, s).into(),
        ];
        for set in sets {
            let once = parse_set(&serialize(&set), &tol()).unwrap();
            let twice = parse_set(&serialize(&once), &tol()).unwrap();
            prop_assert_eq!(serialize(&once), serialize(&twice));
        }
    }

    #[test]
    fn independence_radius_scales(pts in points(4, 4), c in 0.1..10.0f64) {
        let fam = PointFamily::new(pts.iter().map(|p| vector(p)).collect()).unwrap();
        if let Ok(d) = independence_radius(&fam, &tol()) {
            prop_assume!(d.is_finite() && d > 1e-6);
            let dc = independence_radius(&fam.scale(c), &tol()).unwrap();
            prop_assert!((dc - c * d).abs() <= 1e-9 * c.max(1.0) * d.max(1.0));
        }
    }
}
