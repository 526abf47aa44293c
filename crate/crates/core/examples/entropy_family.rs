//! Tsallis entropies of one distribution across orders, with the Rényi
//! value recovered from each.

use seqentropy::entropy::{alpha_log, eta, renyi_from_tsallis, tsallis, EntropyOrder, ProbabilityDistribution};

fn main() -> seqentropy::Result<()> {
    let p = ProbabilityDistribution::new(vec![0.5, 0.25, 0.125, 0.125])?;
    println!("{:>6} {:>14} {:>14} {:>14}", "alpha", "H_alpha", "sum eta", "Renyi");
    for alpha in [0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0] {
        let order = EntropyOrder::new(alpha)?;
        let h = tsallis(&p, order);
        let via_eta: f64 = p.probs().iter().map(|&x| eta(x, order)).sum::<seqentropy::Result<f64>>()?;
        println!("{alpha:>6} {h:>14.10} {via_eta:>14.10} {:>14.10}", renyi_from_tsallis(h, order)?);
    }
    // The uniform distribution attains ln_α(n).
    let u = ProbabilityDistribution::uniform(4)?;
    let order = EntropyOrder::new(2.0)?;
    println!("uniform, alpha = 2: H = {} = ln_2(4) = {}", tsallis(&u, order), alpha_log(4.0, order)?);
    Ok(())
}
