//! Dephasing a qubit by a measurement and the conditional outcome table of
//! a second measurement.

use seqentropy::qubit::{self, BlochVector, QubitObservable, QubitState};

fn main() -> seqentropy::Result<()> {
    let state = QubitState::new(BlochVector::new(0.3, 0.4, 0.5))?;
    let z = QubitObservable::spin(BlochVector::E3)?;
    let x = QubitObservable::spin_normalized(BlochVector::new(1.0, 0.0, 1.0))?;

    let after = qubit::dephase_channel(&state, &z);
    println!("r before = {:?}", state.bloch().to_array());
    println!("r after  = {:?}", after.bloch().to_array());
    println!("purity {:.4} -> {:.4}", state.purity(), after.purity());
    println!("p(m)  = {:?}", qubit::measurement_probabilities(&state, &z).probs());
    println!("p(n)  = {:?}", qubit::second_measurement_probabilities(&state, &z, &x).probs());
    println!("mu    = {:.6}", qubit::overlap_mu(&z, &x));
    for (m, row) in [1, -1].iter().zip(qubit::conditional_probabilities(&z, &x)) {
        println!("p(n | m = {m:+}) = {:?}", row.probs());
    }
    Ok(())
}
