//! The gap metric on the Grassmannian, computed two independent ways.

use hyperconvex::convex::vector;
use hyperconvex::grassmann::orthonormal_basis;
use hyperconvex::grassmann::{gap, gap_direct, orthogonal_complement, truncated_ball_hausdorff};
use hyperconvex::random::{random_subspace, stream_rng};
use hyperconvex::ToleranceConfig;

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let e1 = orthonormal_basis(&[vector(&[1.0, 0.0, 0.0])], &tol)?;
    let diag = orthonormal_basis(&[vector(&[1.0, 1.0, 0.0])], &tol)?;
    println!("gap(e1, diag) = {} (sin 45° = {})", gap(&e1, &diag)?, 0.5f64.sqrt());

    let mut rng = stream_rng(11, 0);
    let v = random_subspace(&mut rng, 5, 2);
    let w = random_subspace(&mut rng, 5, 2);
    let theta = gap(&v, &w)?;
    let direct = gap_direct(&v, &w, 1e-4, &tol)?;
    println!(
        "operator norm: {theta:.6}, from the definition: [{:.6}, {:.6}]",
        direct.lo, direct.hi
    );
    println!(
        "complements: {:.6}",
        gap(&orthogonal_complement(&v), &orthogonal_complement(&w))?
    );
    for j in 1..=3 {
        let h = truncated_ball_hausdorff(&v, &w, j as f64, 1e-4, &tol)?;
        println!(
            "j = {j}: d_H(V∩jB, W∩jB) in [{:.6}, {:.6}], between {theta:.6} and {:.6}",
            h.lo,
            h.hi,
            j as f64 * theta
        );
    }
    Ok(())
}
