// The symmetric pullback `Q(u, v) = P(u + v, uv)` and the two derivative
// identities behind the simplex reduction.

use markov_lab::poly2d::{simplex_weight, Axis, BivariatePoly};

fn main() {
    // P = x^2 - 4y vanishes on the parabolic edge of Omega; Q = (v - u)^2.
    let p = BivariatePoly::from_rows(&[vec![0.0, -4.0], vec![0.0], vec![1.0]]);
    let q = p.pullback_symmetric();
    println!("Q(0.2, 0.7) = {} (expected {})", q.eval(0.2, 0.7), 0.5f64 * 0.5);

    let p = BivariatePoly::from_rows(&[vec![1.0, 2.0, -1.0], vec![0.5, 3.0], vec![-2.0]]);
    let w = simplex_weight();
    let lhs_y = p.pullback_derivative_y();
    let rhs_y = w.multiply(&p.partial(Axis::Y).pullback_symmetric());
    let lhs_x = p.pullback_derivative_x();
    let rhs_x = w.multiply(&p.partial(Axis::X).pullback_symmetric());
    println!("(v-u) dP/dy identity: max coefficient gap {:e}", lhs_y.max_coeff_diff(&rhs_y));
    println!("(v-u) dP/dx identity: max coefficient gap {:e}", lhs_x.max_coeff_diff(&rhs_x));
}
