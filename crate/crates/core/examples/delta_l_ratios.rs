// W_n = y P_n^(alpha, alpha)(x) on the curvilinear squares Delta_l: the
// L^p ratio grows like n^(2l).

use markov_lab::analysis::{fit_extremal, sweep_extremal, ExtremalSweep};
use markov_lab::norms::{bernoulli_sandwich, NormOptions};
use markov_lab::{FamilyKind, PNorm};

fn main() -> markov_lab::Result<()> {
    let (alpha, p) = (14.0, 2.0);
    for l in [1, 3] {
        let sweep = ExtremalSweep::new(FamilyKind::Wn, (8..=40).step_by(4).collect(), PNorm::Finite(p)).with_wn(alpha, l);
        let rows = sweep_extremal(&sweep, &NormOptions::default())?;
        for r in &rows {
            println!("l={l} n={:>2} ratio {:>14.6e}  ratio/(n+1)^(2l) {:.4e}", r.index, r.ratio, r.ratio_over_expected());
        }
        println!("l={l}: slope vs log(n+1) = {:.3} (2l = {})\n", fit_extremal(&rows)?.slope, 2 * l);
    }

    let x = 0.3;
    for l in [1, 3, 5] {
        let (lo, mid, hi) = bernoulli_sandwich(x, l);
        println!("l={l}: {lo:.6} <= {mid:.6} <= {hi:.6}");
    }
    Ok(())
}
