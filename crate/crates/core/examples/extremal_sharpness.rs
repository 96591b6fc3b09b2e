// Lower bounds from the extremal sequences P_k and Q_k: the derivative at a
// cusp against the grid sup norm.

use markov_lab::analysis::{fit_extremal, sweep_extremal, ExtremalSweep};
use markov_lab::norms::NormOptions;
use markov_lab::{FamilyKind, PNorm};

fn main() -> markov_lab::Result<()> {
    let opts = NormOptions::default();
    for kind in [FamilyKind::Pk, FamilyKind::Qk] {
        let rows = sweep_extremal(&ExtremalSweep::new(kind, (1..=12).collect(), PNorm::Infinity), &opts)?;
        println!("{kind:?}");
        println!("{:>4} {:>6} {:>14} {:>10} {:>14} {:>8}", "k", "deg", "|dP|(cusp)", "sup", "ratio", "/k^4/4");
        for r in &rows {
            println!(
                "{:>4} {:>6} {:>14.6} {:>10.6} {:>14.4} {:>8.3}",
                r.index, r.degree, r.cusp_derivative, r.norm, r.ratio, r.ratio_over_expected()
            );
        }
        let fit = fit_extremal(&rows[3..])?;
        println!("slope vs degree over k = 4..12: {:.3}\n", fit.slope);
    }
    Ok(())
}
