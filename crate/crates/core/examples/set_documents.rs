//! JSON set documents and seeded random instances.

use hyperconvex::convex::dimension;
use hyperconvex::document::same_set;
use hyperconvex::random::{random_instance, GeneratorKind};
use hyperconvex::{parse_set, serialize, ToleranceConfig};

fn main() -> hyperconvex::Result<()> {
    let tol = ToleranceConfig::default();
    let docs = [
        r#"{"type":"polytope","ambient_dim":2,"points":[[0,0],[1,0]]}"#,
        r#"{"type":"subspace","ambient_dim":2,"basis":[[2,0]]}"#,
        r#"{"type":"flat","ambient_dim":2,"base":[0,1],"basis":[[1,0]]}"#,
    ];
    for text in docs {
        let set = parse_set(text, &tol)?;
        let again = parse_set(&serialize(&set), &tol)?;
        println!(
            "{} of dimension {}: {} (round trip ok: {})",
            set.kind(),
            dimension(&set, &tol),
            serialize(&set),
            same_set(&set, &again, tol.geom, &tol)?
        );
    }
    match parse_set(r#"{"type":"polytope","ambient_dim":2,"points":[[0,0],[1]]}"#, &tol) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    for kind in GeneratorKind::ALL {
        println!("{kind}: {}", serialize(&random_instance(kind, 3, 2, 42)?));
    }
    Ok(())
}
