//! Certainty bounds in dimension d: the Fourier pair attains them for every
//! state, a random pair stays strictly below.

use seqentropy::bounds::prop3_report;
use seqentropy::qudit::fourier_mub_pair;
use seqentropy::verify::sampling::{haar_observable, positive_ginibre_state, rng_for};
use seqentropy::EntropyOrder;

fn main() -> seqentropy::Result<()> {
    let order = EntropyOrder::new(2.0)?;
    let mut rng = rng_for(7, 0);
    for d in 2..=5 {
        let rho = positive_ginibre_state(d, 1e-3, &mut rng);
        let (z, x) = fourier_mub_pair(d)?;
        let mub = prop3_report(&rho, &z, &x, order)?;
        let (a, b) = (haar_observable(d, &mut rng), haar_observable(d, &mut rng));
        let random = prop3_report(&rho, &a, &b, order)?;
        println!(
            "d = {d}: Fourier form2 {:.6} / {:.6} (saturated {}), random form2 {:.6} / {:.6}",
            mub.form2.quantity,
            mub.form2.upper,
            mub.both_saturated(),
            random.form2.quantity,
            random.form2.upper
        );
    }
    Ok(())
}
