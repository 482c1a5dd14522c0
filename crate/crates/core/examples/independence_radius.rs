//! Stability radius of affine independence, probed adversarially.

use hyperconvex::convex::vector;
use hyperconvex::independence::{
    adversarial_independence_check, barycentric, in_relative_interior, independence_radius, PointFamily, RadiusRecord,
};
use hyperconvex::ToleranceConfig;

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let simplex = PointFamily::from_slices(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])?;
    let delta = independence_radius(&simplex, &tol)?;
    println!("every selection within {delta:.6} of the vertices stays independent");
    let single = PointFamily::from_slices(&[&[4.0, 4.0]])?;
    println!(
        "a single point: {}",
        serde_json::to_string(&RadiusRecord::certify(&single, &tol)?).unwrap()
    );

    let report = adversarial_independence_check(&simplex, delta, 10_000, 3, &tol)?;
    println!(
        "{} trials at delta: {} dependent selections",
        report.trials, report.failure_count
    );
    let report = adversarial_independence_check(&simplex, 0.6, 10_000, 3, &tol)?;
    println!(
        "{} trials at 0.6: {} dependent selections",
        report.trials, report.failure_count
    );

    let x = vector(&[0.2, 0.3]);
    println!(
        "barycentric coordinates of {:?}: {:?}",
        x.as_slice(),
        barycentric(&simplex, &x, tol.rank)?
    );
    println!(
        "in the relative interior: {}",
        in_relative_interior(&simplex, &x, tol.geom)?
    );
    Ok(())
}
