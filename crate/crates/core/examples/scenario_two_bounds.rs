//! Form-1 conditional entropy on both sides of α = 1: which geometry gives
//! the minimum flips.

use seqentropy::bounds::prop2_report;
use seqentropy::qubit::{BlochVector, QubitObservable, QubitState};
use seqentropy::EntropyOrder;

fn main() -> seqentropy::Result<()> {
    let z = QubitObservable::spin(BlochVector::E3)?;
    let x = QubitObservable::spin_normalized(BlochVector::new(1.0, 0.0, 1.0))?;
    let along = QubitState::new(BlochVector::new(0.0, 0.0, 0.9))?;
    let across = QubitState::new(BlochVector::new(0.9, 0.0, 0.0))?;
    for alpha in [0.5, 1.0, 2.0] {
        let order = EntropyOrder::new(alpha)?;
        let a = prop2_report(&along, &z, &x, order)?;
        let b = prop2_report(&across, &z, &x, order)?;
        println!("alpha = {alpha}: bounds [{:.6}, {:.6}]", a.lower, a.upper);
        println!("  r along z : {:.6}  lower hit {}  upper hit {}", a.quantity, a.lower_saturated, a.upper_saturated);
        println!("  r across z: {:.6}  lower hit {}  upper hit {}", b.quantity, b.lower_saturated, b.upper_saturated);
    }
    Ok(())
}
