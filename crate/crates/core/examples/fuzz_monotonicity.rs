//! Seeded fuzzing: entropy never drops under a measurement, the qubit
//! scenario-1 sandwich holds, and all three evaluation routes agree.

use seqentropy::verify::{cross_check_pipelines, fuzz_monotonicity, fuzz_scenario1_sandwich};

fn main() -> seqentropy::Result<()> {
    let seed = 42;
    let mono = fuzz_monotonicity(500, &[2, 3, 4], &[0.5, 1.0, 2.0, 3.0], seed)?;
    println!("monotonicity: {} checks, {} violations, worst margin {:.3e}", mono.checks, mono.violations.len(), mono.worst_margin);

    let sandwich = fuzz_scenario1_sandwich(1000, &[0.5, 1.0, 2.0], seed)?;
    println!(
        "sandwich: {} checks, {} violations, {} saturation mismatches",
        sandwich.checks,
        sandwich.violations.len(),
        sandwich.saturation_mismatches
    );

    let cross = cross_check_pipelines(1000, seed)?;
    println!(
        "cross-check: closed form {:.2e}, matrix {:.2e}",
        cross.max_closed_form_discrepancy, cross.max_matrix_discrepancy
    );
    Ok(())
}
