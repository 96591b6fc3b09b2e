// Exact L2 Markov factors on Omega and on the weighted simplex, the Schur
// factor, and a maximizing polynomial.

use markov_lab::analysis::{fit_factors, sweep_factor, sweep_schur, SweepConfig};
use markov_lab::norms::{markov_ratio, NormSpec};
use markov_lab::spectral::l2_markov_solution;
use markov_lab::{Axis, Domain, PNorm};

fn main() -> markov_lab::Result<()> {
    for (domain, axis) in [(Domain::Koornwinder, Axis::Y), (Domain::SimplexWeighted, Axis::X)] {
        let pts = sweep_factor(&SweepConfig::new(domain, axis, (1..=12).collect())?)?;
        print!("{domain} d/d{axis}:");
        for p in &pts {
            print!(" {:.3}", p.value);
        }
        println!("\n  slope over n = 4..12: {:.3}", fit_factors(&pts[3..])?.slope);
    }

    let schur = sweep_schur(&(0..=12).collect::<Vec<_>>())?;
    println!("Schur factors: {:?}", schur.iter().map(|p| (p.value * 1e4).round() / 1e4).collect::<Vec<_>>());

    let sol = l2_markov_solution(4, Axis::Y, Domain::Koornwinder, None)?;
    let witness = sol.witness();
    let check = markov_ratio(&witness, Axis::Y, NormSpec::new(PNorm::Finite(2.0), Domain::Koornwinder))?;
    println!("n = 4 factor {:.10}, ratio of its maximizer {:.10}", sol.point.value, check);
    Ok(())
}
