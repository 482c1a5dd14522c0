//! Charts of the space of k-flats over the Grassmannian.

use hyperconvex::convex::vector;
use hyperconvex::grassmann::orthonormal_basis;
use hyperconvex::grassmann::{chart_flat, chart_flat_inv, in_tilde, lift_point};
use hyperconvex::ToleranceConfig;

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let w = orthonormal_basis(&[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])], &tol)?;
    let v = orthonormal_basis(&[vector(&[1.0, 0.0, 0.3]), vector(&[0.0, 1.0, -0.2])], &tol)?;
    println!("V is in the chart domain of W: {}", in_tilde(&w, &v, &tol)?);

    let x = vector(&[0.5, -1.0, 0.0]);
    println!(
        "lift of {:?} into V: {:?}",
        x.as_slice(),
        lift_point(&w, &v, &x, &tol)?.as_slice()
    );

    let omega = vector(&[0.0, 0.0, 2.0]);
    let flat = chart_flat(&w, &v, &omega, &tol)?;
    println!("flat through {:?}", flat.base().as_slice());
    let (v2, omega2) = chart_flat_inv(&w, &flat, &tol)?;
    println!(
        "round trip: gap {:.2e}, offset error {:.2e}",
        hyperconvex::grassmann::gap(&v, &v2)?,
        (omega - omega2).norm()
    );
    Ok(())
}
