//! Entropy sum of two successive qubit measurements as the state rotates
//! from the first axis to its equator, against the fixed-purity bounds.

use seqentropy::bounds::prop1_report;
use seqentropy::qubit::{BlochVector, QubitObservable, QubitState};
use seqentropy::EntropyOrder;

fn main() -> seqentropy::Result<()> {
    let order = EntropyOrder::new(2.0)?;
    let z = QubitObservable::spin(BlochVector::E3)?;
    let x = QubitObservable::spin_normalized(BlochVector::new(3f64.sqrt(), 0.0, 1.0))?;
    let radius = 0.8;
    println!("{:>7} {:>10} {:>10} {:>10}  equality", "theta", "total", "lower", "upper");
    for step in 0..=8 {
        let theta = std::f64::consts::FRAC_PI_2 * step as f64 / 8.0;
        let state = QubitState::new(BlochVector::new(radius * theta.sin(), 0.0, radius * theta.cos()))?;
        let r = prop1_report(&state, &z, &x, order)?;
        let tag = match (r.lower_saturated, r.upper_saturated) {
            (true, _) => "lower (commutes)",
            (_, true) => "upper (zero mean)",
            _ => "",
        };
        println!("{theta:>7.4} {:>10.6} {:>10.6} {:>10.6}  {tag}", r.quantity, r.lower, r.upper);
    }
    Ok(())
}
