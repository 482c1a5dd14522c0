//! Nearest points, distances and truncated projections.

use hyperconvex::convex::{metric_projection, nearest_point, truncated_distance, vector, Flat};
use hyperconvex::grassmann::orthonormal_basis;
use hyperconvex::{ConvexSet, Polytope, ToleranceConfig};

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let square: ConvexSet = Polytope::from_slices(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]])?.into();
    let x = vector(&[2.0, 0.5]);
    let p = metric_projection(&square, &x, &tol)?;
    println!(
        "pi_square({:?}) = {:?}, distance {}",
        x.as_slice(),
        p.point.as_slice(),
        p.dist
    );

    let line: ConvexSet = Flat::new(vector(&[0.0, 1.0]), orthonormal_basis(&[vector(&[1.0, 1.0])], &tol)?)?.into();
    let (p0, nu) = nearest_point(&line, &tol)?;
    println!("nearest point of the line to the origin: {:?} at {nu}", p0.as_slice());

    // distance to the part of the line inside the ball of radius 1
    let far = vector(&[5.0, 6.0]);
    for r in [1.0, 2.0, 10.0] {
        println!("d(x, line ∩ {r}B) = {:.6}", truncated_distance(&line, &far, r, &tol)?);
    }
    Ok(())
}
