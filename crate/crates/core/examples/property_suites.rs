//! Runs randomized property suites and prints their reports.
//!
//! ```text
//! cargo run --release --example property_suites -- gap-sandwich 3 200 7
//! ```

use hyperconvex::suites::{run_suite, Suite};
use hyperconvex::ToleranceConfig;

fn main() -> hyperconvex::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let tol = ToleranceConfig::from_env()?;
    let arg = |i: usize, default: u64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let (n, trials, seed) = (arg(1, 3) as usize, arg(2, 50) as usize, arg(3, 7));
    let names: Vec<String> = match args.first() {
        Some(name) => vec![name.clone()],
        None => Suite::ALL.iter().map(|s| s.name().to_string()).collect(),
    };
    for name in names {
        let r = run_suite(&name, n, trials, seed, &tol)?;
        println!(
            "{:<24} trials {:>5}  failures {:>3}  inconclusive {:>3}  worst ratio {:.2e}  {} ms",
            r.suite, r.trials, r.failure_count, r.inconclusive, r.worst_ratio, r.runtime_ms
        );
        for p in &r.series {
            println!("    {:<24} {:.3e}", p.label, p.value);
        }
    }
    Ok(())
}
