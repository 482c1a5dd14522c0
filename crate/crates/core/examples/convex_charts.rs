//! Charts of the space of k-dimensional compact convex sets.

use hyperconvex::bundle::{base_map, chart_convex, chart_convex_inv, ChartTriple};
use hyperconvex::convex::vector;
use hyperconvex::grassmann::gap;
use hyperconvex::grassmann::orthonormal_basis;
use hyperconvex::hypermetrics::hausdorff;
use hyperconvex::{Polytope, ToleranceConfig};

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let w = orthonormal_basis(&[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])], &tol)?;
    let v = orthonormal_basis(&[vector(&[1.0, 0.0, 0.5]), vector(&[0.0, 1.0, 0.5])], &tol)?;
    let triangle = Polytope::from_slices(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]])?;
    let t = ChartTriple {
        v,
        omega: vector(&[0.0, 0.0, -1.0]),
        a: triangle,
    };
    let b = chart_convex(&w, &t, &tol)?;
    for p in b.points() {
        println!("vertex {:?}", p.as_slice());
    }
    let base = base_map(&b.clone().into(), &tol);
    println!("parallel subspace of the image is V: gap {:.2e}", gap(&base, &t.v)?);

    let back = chart_convex_inv(&w, &b, &tol)?;
    println!(
        "inverse recovers the fiber within {:.2e} and omega within {:.2e}",
        hausdorff(&back.a, &t.a, &tol)?,
        (back.omega - &t.omega).norm()
    );
    Ok(())
}
