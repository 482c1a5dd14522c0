//! Hausdorff distance between polytopes and certified Attouch-Wets
//! enclosures for unbounded sets.

use hyperconvex::convex::{vector, Flat};
use hyperconvex::hypermetrics::{attouch_wets, aw_origin, hausdorff, AWParams};
use hyperconvex::{ConvexSet, Polytope, Subspace, ToleranceConfig};

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let short = Polytope::from_slices(&[&[0.0, 0.0], &[10.0, 0.0]])?;
    let long = Polytope::from_slices(&[&[0.0, 0.0], &[20.0, 0.0]])?;
    println!("d_H = {}", hausdorff(&short, &long, &tol)?);

    let params = AWParams::new(1e-3);
    let (a, b): (ConvexSet, ConvexSet) = (short.into(), long.into());
    let aw = attouch_wets(&a, &b, &params, &tol)?;
    println!("d_AW in [{:.9}, {:.9}] (1/11 = {:.9})", aw.lo, aw.hi, 1.0 / 11.0);
    let origin = aw_origin(&a, &b, &params, &tol)?;
    println!("origin-based variant in [{:.9}, {:.9}]", origin.lo, origin.hi);

    // two parallel lines at distance 0.5: bounded AW distance, infinite Hausdorff
    let x_axis = Subspace::from_vectors(&[vector(&[1.0, 0.0])], &tol)?;
    let l0: ConvexSet = x_axis.clone().into();
    let l1: ConvexSet = Flat::new(vector(&[0.0, 0.5]), x_axis)?.into();
    let aw = attouch_wets(&l0, &l1, &params, &tol)?;
    println!("parallel lines: d_AW in [{:.6}, {:.6}]", aw.lo, aw.hi);
    Ok(())
}
