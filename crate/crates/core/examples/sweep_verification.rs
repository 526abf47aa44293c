//! Brute-force r₃ sweeps of both qubit scenarios at fixed purity.

use seqentropy::verify::{sweep, SweepConfig, SweepKind};

fn main() -> seqentropy::Result<()> {
    let config = SweepConfig::new(0.75, vec![-0.5, 0.0, 0.5, 1.0], vec![0.5, 1.0, 2.0]);
    for kind in [SweepKind::ScenarioOne, SweepKind::ScenarioTwo] {
        let result = sweep(kind, &config)?;
        println!("{kind:?}");
        for c in &result.cells {
            println!(
                "  alpha {:>3} mu {:>4}: min {:.6} at {:+.3} (bound {:.6}), max {:.6} at {:+.3} (bound {:.6})",
                c.alpha, c.mu, c.min, c.argmin_r3, c.lower, c.max, c.argmax_r3, c.upper
            );
        }
        println!("  violations at 1e-9: {}", result.violations(1e-9).len());
    }
    Ok(())
}
