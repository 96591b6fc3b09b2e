// Measures of the three domains and a few exact moments, straight from the
// quadrature rules.

use markov_lab::domains::{quad_rule, Domain};

fn main() -> markov_lab::Result<()> {
    let domains = [Domain::Koornwinder, Domain::SimplexWeighted, Domain::delta_l(1)?, Domain::delta_l(3)?];
    for d in domains {
        let rule = quad_rule(d, 0)?;
        println!("{d:<18} area {:.12}  ({} nodes)", rule.total_weight(), rule.len());
    }

    // second moments of Omega: int x^2 = 8/15, int y^2 = 4/21
    let omega = quad_rule(Domain::Koornwinder, 4)?;
    println!("int_Omega x^2 = {:.15} (8/15 = {:.15})", omega.integrate(|x, _| x * x), 8.0 / 15.0);
    println!("int_Omega y^2 = {:.15} (4/21 = {:.15})", omega.integrate(|_, y| y * y), 4.0 / 21.0);
    Ok(())
}
