//! `L^p` and sup norms on the three domains, Markov ratios, and the
//! one-dimensional reduction of the `W_n` ratio on `Delta_l`.

use serde::{Deserialize, Serialize};

use crate::classical::{jacobi_p, ExtremalFamily};
use crate::domains::{
    composite_rule, gauss_on, quad_rule_capped, sup_grid_with_density, triangle_rule, Domain,
    DEFAULT_MAX_NODES,
};
use crate::error::{LabError, Result};
use crate::poly2d::{Axis, BivariatePoly};

/// Anything that can be evaluated pointwise and has a known total degree.
pub trait Surface {
    fn value(&self, x: f64, y: f64) -> f64;
    fn degree(&self) -> usize;
}

impl Surface for BivariatePoly {
    fn value(&self, x: f64, y: f64) -> f64 {
        self.eval(x, y)
    }
    fn degree(&self) -> usize {
        self.total_degree().or_zero()
    }
}

impl Surface for ExtremalFamily {
    fn value(&self, x: f64, y: f64) -> f64 {
        ExtremalFamily::value(self, x, y)
    }
    fn degree(&self) -> usize {
        ExtremalFamily::degree(self)
    }
}

/// Norm index: finite `p >= 1` or the supremum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    /// Even integer exponent, if any.
    pub fn even_integer(&self) -> Option<u32> {
        match *self {
            PNorm::Finite(p) if p.fract() == 0.0 && p >= 2.0 && (p as u32).is_multiple_of(2) => Some(p as u32),
            _ => None,
        }
    }
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(PNorm::Infinity);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| LabError::domain(format!("cannot parse norm index '{s}'")))?;
        Ok(PNorm::Finite(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    pub p: PNorm,
    pub domain: Domain,
    /// Applies `w = v - u` on the triangle; ignored elsewhere.
    pub weighted: bool,
}

impl NormSpec {
    pub fn new(p: PNorm, domain: Domain) -> Self {
        Self { p, domain, weighted: true }
    }

    fn validate(&self) -> Result<()> {
        if let PNorm::Finite(p) = self.p {
            if !(p >= 1.0) {
                return Err(LabError::domain(format!("norm index p = {p} < 1")));
            }
        }
        Ok(())
    }
}

/// Numerical knobs shared by the norm routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Sup-grid density multiplier (grid side `max(8d, d * degree)`).
    pub grid_density: usize,
    /// Extra exactness degrees added to polynomial rules.
    pub exactness_margin: usize,
    pub max_nodes: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            grid_density: 8,
            exactness_margin: 0,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

pub fn lp_norm<S: Surface + ?Sized>(f: &S, spec: NormSpec) -> Result<f64> {
    lp_norm_with(f, spec, &NormOptions::default())
}

/// Even `p`: exact quadrature of `f^p`. `p = inf`: max over the sup grid (a
/// lower bound). Other finite `p`: composite panels, not certified.
pub fn lp_norm_with<S: Surface + ?Sized>(f: &S, spec: NormSpec, opts: &NormOptions) -> Result<f64> {
    spec.validate()?;
    let deg = f.degree();
    match spec.p {
        PNorm::Infinity => Ok(sup_grid_with_density(spec.domain, deg, opts.grid_density)
            .into_iter()
            .fold(0.0f64, |m, (x, y)| m.max(f.value(x, y).abs()))),
        PNorm::Finite(p) => {
            let rule = if let Some(e) = spec.even_integer_rule_degree(deg) {
                let d = e + opts.exactness_margin;
                if spec.domain == Domain::SimplexWeighted && !spec.weighted {
                    triangle_rule(d, false, opts.max_nodes)?
                } else {
                    quad_rule_capped(spec.domain, d, opts.max_nodes)?
                }
            } else {
                composite_rule(spec.domain, 4 * deg.max(1), 6, spec.weighted, opts.max_nodes)?
            };
            let s = rule.integrate(|x, y| f.value(x, y).abs().powf(p));
            Ok(s.powf(1.0 / p))
        }
    }
}

impl NormSpec {
    fn even_integer_rule_degree(&self, deg: usize) -> Option<usize> {
        self.p.even_integer().map(|p| p as usize * deg)
    }
}

/// `||dP/d axis|| / ||P||` in the norm `spec`.
pub fn markov_ratio(p: &BivariatePoly, axis: Axis, spec: NormSpec) -> Result<f64> {
    markov_ratio_with(p, axis, spec, &NormOptions::default())
}

pub fn markov_ratio_with(p: &BivariatePoly, axis: Axis, spec: NormSpec, opts: &NormOptions) -> Result<f64> {
    let den = lp_norm_with(p, spec, opts)?;
    if !(den > 0.0) {
        return Err(LabError::domain("Markov ratio of a polynomial with zero norm"));
    }
    let d = p.partial(axis);
    if d.is_zero() {
        return Ok(0.0);
    }
    Ok(lp_norm_with(&d, spec, opts)? / den)
}

/// Zeros of `P_n^{(alpha, alpha)}` in `(0, 1)`, ascending, by sign-change scan
/// in the angle variable and bisection.
pub fn jacobi_zeros_unit(n: usize, alpha: f64) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let samples = 64 * (n + 2);
    let f = |x: f64| jacobi_p(n, alpha, alpha, x);
    let mut zeros = Vec::new();
    let mut prev_x = 0.0;
    let mut prev_f = f(0.0);
    if prev_f == 0.0 {
        // odd n vanishes at the origin; it is a panel endpoint already
        prev_f = f(1e-300);
    }
    for i in (0..samples).rev() {
        let theta = std::f64::consts::FRAC_PI_2 * i as f64 / samples as f64;
        let x = theta.cos();
        let fx = f(x);
        if fx == 0.0 {
            zeros.push(x);
        } else if fx.signum() != prev_f.signum() && prev_f != 0.0 {
            let (mut a, mut b, mut fa) = (prev_x, x, prev_f);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m);
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            zeros.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    zeros.retain(|&z| z > 0.0 && z < 1.0);
    zeros
}

/// `int_0^1 |P_n^{(alpha,alpha)}(x)|^p (1 - x^(1/l))^beta dx`.
///
/// Substituting `x = t^l` gives `|P_n(t^l)|^p (1 - t)^beta l t^(l-1)`, which is
/// integrated panel by panel between the zeros of `P_n(t^l)`. For even integer
/// `p` and integer `beta` each panel rule is exact.
pub fn wn_1d_integral(n: usize, alpha: f64, p: f64, beta: f64, l: u32) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(LabError::domain("alpha must exceed -1"));
    }
    if !(p >= 1.0) {
        return Err(LabError::domain(format!("p = {p} < 1")));
    }
    if l == 0 || l.is_multiple_of(2) {
        return Err(LabError::domain("l must be odd"));
    }
    let lf = l as f64;
    let mut breaks = vec![0.0];
    breaks.extend(jacobi_zeros_unit(n, alpha).into_iter().map(|x| x.powf(1.0 / lf)));
    breaks.push(1.0);
    let exact = p.fract() == 0.0 && (p as u64).is_multiple_of(2) && beta.fract() == 0.0;
    let m = if exact {
        let deg = p as usize * n * l as usize + beta as usize + l as usize - 1;
        (deg / 2 + 1).max(8)
    } else {
        32
    };
    let integrand = |t: f64| {
        jacobi_p(n, alpha, alpha, t.powi(l as i32)).abs().powf(p)
            * (1.0 - t).powf(beta)
            * lf
            * t.powi(l as i32 - 1)
    };
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (xs, ws) = gauss_on(m, lo, hi)?;
            total += xs.iter().zip(&ws).map(|(&t, &w)| w * integrand(t)).sum::<f64>();
        }
    }
    Ok(total)
}

/// `(||dW_n/dy||_p, ||W_n||_p)` on `Delta_l` through the 1-D reduction.
pub fn wn_norms(n: usize, alpha: f64, l: u32, p: f64) -> Result<(f64, f64)> {
    let lf = l as f64;
    let num = 4.0 * wn_1d_integral(n, alpha, p, lf, l)?;
    let den = 4.0 / (p + 1.0) * wn_1d_integral(n, alpha, p, (p + 1.0) * lf, l)?;
    Ok((num.powf(1.0 / p), den.powf(1.0 / p)))
}

/// Exact `L^p(Delta_l)` ratio `||dW_n/dy|| / ||W_n||`.
pub fn wn_ratio(n: usize, alpha: f64, l: u32, p: f64) -> Result<f64> {
    let (num, den) = wn_norms(n, alpha, l, p)?;
    Ok(num / den)
}

/// `(((1-x)/l)^l, (1 - x^(1/l))^l, (1-x)^l)`; the middle term is sandwiched
/// by the outer two on `[0, 1]`.
pub fn bernoulli_sandwich(x: f64, l: u32) -> (f64, f64, f64) {
    let li = l as i32;
    let lf = l as f64;
    (
        ((1.0 - x) / lf).powi(li),
        (1.0 - x.powf(1.0 / lf)).powi(li),
        (1.0 - x).powi(li),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::build_wn;

    fn omega(p: PNorm) -> NormSpec {
        NormSpec::new(p, Domain::Koornwinder)
    }

    #[test]
    fn lp_norm_examples() {
        let one = BivariatePoly::constant(1.0);
        let a = lp_norm(&one, omega(PNorm::Finite(2.0))).unwrap();
        assert!((a - (4.0f64 / 3.0).sqrt()).abs() < 1e-13);
        let s = lp_norm(&one, NormSpec::new(PNorm::Finite(2.0), Domain::SimplexWeighted)).unwrap();
        assert!((s - (4.0f64 / 3.0).sqrt()).abs() < 1e-13);
        let x = lp_norm(&BivariatePoly::x(), omega(PNorm::Infinity)).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
        // unweighted triangle has area 2
        let mut spec = NormSpec::new(PNorm::Finite(2.0), Domain::SimplexWeighted);
        spec.weighted = false;
        assert!((lp_norm(&one, spec).unwrap() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn p_below_one_rejected() {
        let err = lp_norm(&BivariatePoly::x(), omega(PNorm::Finite(0.5))).unwrap_err();
        assert!(matches!(err, LabError::Domain(_)));
    }

    #[test]
    fn general_p_close_to_even_path() {
        // p = 2 through the composite path vs the exact rule
        let p = BivariatePoly::from_rows(&[vec![0.5, -1.0], vec![1.0, 0.3], vec![-0.4]]);
        let exact = lp_norm(&p, omega(PNorm::Finite(2.0))).unwrap();
        let rule = composite_rule(Domain::Koornwinder, 8, 6, true, DEFAULT_MAX_NODES).unwrap();
        let c = rule.integrate(|x, y| p.eval(x, y).powi(2)).sqrt();
        assert!((exact - c).abs() < 1e-12 * exact);
        let p3 = lp_norm(&p, omega(PNorm::Finite(3.0))).unwrap();
        let p4 = lp_norm(&p, omega(PNorm::Finite(4.0))).unwrap();
        // normalised L^p means are monotone in p
        let m = 4.0f64 / 3.0;
        assert!(exact / m.sqrt() <= p3 / m.cbrt() + 1e-12);
        assert!(p3 / m.cbrt() <= p4 / m.powf(0.25) + 1e-12);
    }

    #[test]
    fn even_p_stable_under_doubled_order() {
        let p = BivariatePoly::from_rows(&[vec![0.5, -1.0, 0.2], vec![1.0, 0.3], vec![-0.4]]);
        for domain in [Domain::Koornwinder, Domain::SimplexWeighted, Domain::DeltaL { l: 3 }] {
            for e in [2.0, 4.0] {
                let spec = NormSpec::new(PNorm::Finite(e), domain);
                let a = lp_norm(&p, spec).unwrap();
                let opts = NormOptions { exactness_margin: 2 * e as usize * 2, ..Default::default() };
                let b = lp_norm_with(&p, spec, &opts).unwrap();
                assert!((a - b).abs() < 1e-12 * a, "{domain} p={e}");
            }
        }
    }

    #[test]
    fn markov_ratio_examples() {
        let c = BivariatePoly::constant(2.0);
        assert_eq!(markov_ratio(&c, Axis::Y, omega(PNorm::Finite(2.0))).unwrap(), 0.0);
        let r = markov_ratio(&BivariatePoly::x(), Axis::X, omega(PNorm::Finite(2.0))).unwrap();
        assert!((r - 2.5f64.sqrt()).abs() < 1e-12);
        let err = markov_ratio(&BivariatePoly::zero(), Axis::X, omega(PNorm::Finite(2.0)));
        assert!(err.is_err());
    }

    #[test]
    fn extremal_sup_ratio_lower_bound() {
        for k in 1..=6 {
            let f = ExtremalFamily::pk(k).unwrap();
            let sup = lp_norm(&f, omega(PNorm::Infinity)).unwrap();
            assert!(sup <= k as f64 * (1.0 + 1e-9));
            assert!(f.cusp_derivative() / sup >= (k as f64).powi(4) / 4.0);
        }
        let p1 = ExtremalFamily::pk(1).unwrap();
        assert!((lp_norm(&p1, omega(PNorm::Infinity)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wn_integral_examples() {
        assert!((wn_1d_integral(0, 3.0, 2.0, 1.0, 1).unwrap() - 0.5).abs() < 1e-14);
        assert!((wn_1d_integral(0, 3.0, 2.0, 3.0, 1).unwrap() - 0.25).abs() < 1e-14);
        assert!((wn_ratio(0, 5.0, 1, 2.0).unwrap() - 6f64.sqrt()).abs() < 1e-13);
        assert!((wn_ratio(0, 5.0, 1, 1.0).unwrap() - 3.0).abs() < 1e-13);
    }

    /// Uniform panels, halved until successive values agree to `tol`.
    fn refinement_oracle(n: usize, alpha: f64, p: f64, beta: f64, l: u32, tol: f64) -> f64 {
        let f = |x: f64| jacobi_p(n, alpha, alpha, x).abs().powf(p) * (1.0 - x.powf(1.0 / l as f64)).powf(beta);
        let (g, gw) = crate::domains::gauss_legendre_1d(10).unwrap();
        let eval = |panels: usize| {
            let h = 1.0 / panels as f64;
            let mut s = 0.0;
            for i in 0..panels {
                for (&t, &w) in g.iter().zip(&gw) {
                    s += 0.5 * h * w * f(i as f64 * h + 0.5 * h * (t + 1.0));
                }
            }
            s
        };
        let mut panels = 4;
        let mut prev = eval(panels);
        loop {
            panels *= 2;
            let cur = eval(panels);
            if (cur - prev).abs() <= tol * cur.abs() {
                return cur;
            }
            prev = cur;
            assert!(panels < 1 << 20, "oracle did not settle");
        }
    }

    #[test]
    fn wn_integral_matches_refinement_oracle() {
        let oracle = refinement_oracle(6, 14.0, 2.0, 3.0, 3, 1e-12);
        let v = wn_1d_integral(6, 14.0, 2.0, 3.0, 3).unwrap();
        assert!((v - oracle).abs() < 1e-8 * oracle, "{v} vs {oracle}");
        // non-smooth |P|^p
        let oracle = refinement_oracle(7, 2.0, 1.5, 4.5, 3, 1e-11);
        let v = wn_1d_integral(7, 2.0, 1.5, 4.5, 3).unwrap();
        assert!((v - oracle).abs() < 1e-7 * oracle, "{v} vs {oracle}");
    }

    #[test]
    fn wn_ratio_matches_planar_path() {
        let domain = Domain::DeltaL { l: 1 };
        let spec = NormSpec::new(PNorm::Finite(2.0), domain);
        for n in 0..=10 {
            let w = build_wn(n, 14.0);
            let planar = markov_ratio(&w, Axis::Y, spec).unwrap();
            let reduced = wn_ratio(n, 14.0, 1, 2.0).unwrap();
            assert!((planar - reduced).abs() < 1e-6 * reduced, "n={n}: {planar} vs {reduced}");
        }
    }

    #[test]
    fn jacobi_zeros_found() {
        // P_n^(a,a) has floor(n/2) zeros in (0, 1)
        for n in [1usize, 2, 5, 12, 40] {
            let z = jacobi_zeros_unit(n, 14.0);
            assert_eq!(z.len(), n / 2, "n={n}");
            for &x in &z {
                assert!(jacobi_p(n, 14.0, 14.0, x).abs() < 1e-6 * jacobi_p(n, 14.0, 14.0, 1.0));
            }
        }
    }

    #[test]
    fn bernoulli_sandwich_holds() {
        for l in [1u32, 3, 5] {
            for i in 0..1000 {
                let x = i as f64 / 999.0;
                let (lo, mid, hi) = bernoulli_sandwich(x, l);
                assert!(lo <= mid + 1e-15 && mid <= hi + 1e-15, "l={l} x={x}");
            }
        }
    }
}
