//! Geometry, polynomial-exact quadrature and sup-norm sampling grids for
//! Koornwinder's domain, the weighted triangle and the `Delta_l` sets.
//!
//! All three rules are tensor Gauss–Legendre rules pushed through a
//! polynomial change of variables:
//!
//! * triangle `-1 < u < v < 1`: `v = u + (1 - u) t`, so `du dv = (1 - u) du dt`
//!   and the weight `v - u = (1 - u) t`;
//! * Koornwinder: the triangle rule composed with `(u, v) -> (u + v, uv)`,
//!   whose Jacobian is `v - u`;
//! * `Delta_l`: per quadrant `x = ±s^l`, `y = ±(1 - s)^l r`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Node cap used by [`quad_rule`].
pub const DEFAULT_MAX_NODES: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    /// `{ |x| < y + 1, x^2 > 4y }`
    Koornwinder,
    /// `{ -1 < u < v < 1 }` with weight `v - u`.
    SimplexWeighted,
    /// `{ |x|^(1/l) + |y|^(1/l) <= 1 }`, `l` odd.
    DeltaL { l: u32 },
}

impl Domain {
    pub fn delta_l(l: u32) -> Result<Self> {
        if l == 0 || l.is_multiple_of(2) {
            return Err(LabError::domain(format!("Delta_l needs odd l >= 1, got {l}")));
        }
        Ok(Domain::DeltaL { l })
    }

    /// Open-set membership.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Domain::Koornwinder => x.abs() < y + 1.0 && x * x > 4.0 * y,
            Domain::SimplexWeighted => -1.0 < x && x < y && y < 1.0,
            Domain::DeltaL { l } => {
                let e = 1.0 / l as f64;
                x.abs().powf(e) + y.abs().powf(e) <= 1.0
            }
        }
    }

    /// Closure membership with slack `tol`.
    pub fn contains_closure(&self, x: f64, y: f64, tol: f64) -> bool {
        match *self {
            Domain::Koornwinder => x.abs() <= y + 1.0 + tol && x * x >= 4.0 * y - tol,
            Domain::SimplexWeighted => -1.0 - tol <= x && x <= y + tol && y <= 1.0 + tol,
            Domain::DeltaL { l } => {
                let e = 1.0 / l as f64;
                x.abs().powf(e) + y.abs().powf(e) <= 1.0 + tol
            }
        }
    }

    /// Bounding box `((xmin, xmax), (ymin, ymax))`.
    pub fn bounding_box(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            Domain::Koornwinder => ((-2.0, 2.0), (-1.0, 1.0)),
            Domain::SimplexWeighted | Domain::DeltaL { .. } => ((-1.0, 1.0), (-1.0, 1.0)),
        }
    }

    /// Measure of the domain (weighted by `v - u` on the triangle).
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Koornwinder | Domain::SimplexWeighted => 4.0 / 3.0,
            Domain::DeltaL { l } => {
                // 4 l B(l, l+1) = 4 l (l-1)! l! / (2l)!
                let l = l as usize;
                let mut b = 1.0 / l as f64;
                for i in 1..=l {
                    b *= i as f64 / (l + i) as f64;
                }
                4.0 * l as f64 * b
            }
        }
    }

    /// Maps a pulled-back coordinate pair to the domain. Identity except on
    /// Koornwinder's domain where `(u, v) -> (u + v, uv)`.
    pub fn from_triangle(&self, u: f64, v: f64) -> (f64, f64) {
        match self {
            Domain::Koornwinder => (u + v, u * v),
            _ => (u, v),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Koornwinder => f.write_str("omega"),
            Domain::SimplexWeighted => f.write_str("simplex-weighted"),
            Domain::DeltaL { l } => write!(f, "delta-l({l})"),
        }
    }
}

/// Nodes and positive weights integrating polynomials of total degree up to
/// `exactness_degree` against the domain's measure.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Weighted sum in node order.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&(x, y), &w)| w * f(x, y))
            .sum()
    }
}

/// `m`-point Gauss–Legendre rule on `[-1, 1]`, Newton iteration on the
/// Legendre three-term recurrence.
pub fn gauss_legendre_1d(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(LabError::domain("Gauss-Legendre needs m >= 1"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                dp = legendre_with_derivative(m, x).1;
                break;
            }
        }
        if !converged {
            return Err(LabError::Convergence {
                what: format!("Gauss-Legendre node {i} of {m}"),
                iterations: 100,
            });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub(crate) fn gauss_on(m: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (x, w) = gauss_legendre_1d(m)?;
    let h = 0.5 * (b - a);
    Ok((
        x.iter().map(|t| a + h * (t + 1.0)).collect(),
        w.iter().map(|w| w * h).collect(),
    ))
}

fn points_for(degree: usize) -> usize {
    degree / 2 + 1
}

fn check_cap(what: &str, requested: usize, cap: usize) -> Result<()> {
    if requested > cap {
        return Err(LabError::Capacity {
            what: what.to_string(),
            requested,
            cap,
        });
    }
    Ok(())
}

/// Rule on the triangle, exact for polynomials of total degree `d` in
/// `(u, v)`. With `weighted` the measure carries `v - u`.
pub fn triangle_rule(d: usize, weighted: bool, cap: usize) -> Result<QuadratureRule> {
    // integrand f(u, u + (1-u)t) (1-u)^(1+w) t^w: degree <= d + 1 + w in u, d + w in t
    let extra = usize::from(weighted);
    let mu = points_for(d + 1 + extra);
    let mt = points_for(d + extra);
    check_cap("triangle rule", mu * mt, cap)?;
    let (us, wu) = gauss_legendre_1d(mu)?;
    let (ts, wt) = gauss_on(mt, 0.0, 1.0)?;
    let mut nodes = Vec::with_capacity(mu * mt);
    let mut weights = Vec::with_capacity(mu * mt);
    for (&u, &a) in us.iter().zip(&wu) {
        for (&t, &b) in ts.iter().zip(&wt) {
            let jac = 1.0 - u;
            let w = if weighted { jac * jac * t } else { jac };
            nodes.push((u, u + jac * t));
            weights.push(a * b * w);
        }
    }
    Ok(QuadratureRule { nodes, weights, exactness_degree: d })
}

/// Polynomial-exact rule for `domain`, capped at [`DEFAULT_MAX_NODES`].
pub fn quad_rule(domain: Domain, exactness_degree: usize) -> Result<QuadratureRule> {
    quad_rule_capped(domain, exactness_degree, DEFAULT_MAX_NODES)
}

pub fn quad_rule_capped(domain: Domain, exactness_degree: usize, cap: usize) -> Result<QuadratureRule> {
    match domain {
        Domain::SimplexWeighted => triangle_rule(exactness_degree, true, cap),
        Domain::Koornwinder => {
            // degree d in (x, y) pulls back to degree 2d in (u, v)
            let mut rule = triangle_rule(2 * exactness_degree, true, cap)?;
            for node in rule.nodes.iter_mut() {
                *node = (node.0 + node.1, node.0 * node.1);
            }
            rule.exactness_degree = exactness_degree;
            Ok(rule)
        }
        Domain::DeltaL { l } => delta_l_rule(l, exactness_degree, cap),
    }
}

fn delta_l_rule(l: u32, d: usize, cap: usize) -> Result<QuadratureRule> {
    if l.is_multiple_of(2) {
        return Err(LabError::domain("Delta_l quadrature needs odd l"));
    }
    let l = l as usize;
    // x^i y^j l s^(l-1) (1-s)^l with x = s^l, y = (1-s)^l r:
    // degree in s <= l d + 2l - 1, in r <= d
    let ms = points_for(l * d + 2 * l - 1);
    let mr = points_for(d);
    check_cap("Delta_l rule", 4 * ms * mr, cap)?;
    let (ss, ws) = gauss_on(ms, 0.0, 1.0)?;
    let (rs, wr) = gauss_on(mr, 0.0, 1.0)?;
    let lf = l as f64;
    let mut nodes = Vec::with_capacity(4 * ms * mr);
    let mut weights = Vec::with_capacity(4 * ms * mr);
    for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        for (&s, &a) in ss.iter().zip(&ws) {
            let xs = s.powi(l as i32);
            let h = (1.0 - s).powi(l as i32);
            let jac = lf * s.powi(l as i32 - 1) * h;
            for (&r, &b) in rs.iter().zip(&wr) {
                nodes.push((sx * xs, sy * h * r));
                weights.push(a * b * jac);
            }
        }
    }
    Ok(QuadratureRule { nodes, weights, exactness_degree: d })
}

/// Composite rule for non-polynomial integrands: the parameter square of
/// each chart is cut into `panels x panels` cells, each carrying an
/// `m x m` Gauss rule.
/// `weighted = false` drops the `v - u` factor on the triangle; it is ignored
/// for the other domains.
pub fn composite_rule(
    domain: Domain,
    panels: usize,
    m: usize,
    weighted: bool,
    cap: usize,
) -> Result<QuadratureRule> {
    let panels = panels.max(1);
    let charts = if matches!(domain, Domain::DeltaL { .. }) { 4 } else { 1 };
    check_cap("composite rule", charts * panels * panels * m * m, cap)?;
    let (g, gw) = gauss_legendre_1d(m)?;
    let h = 1.0 / panels as f64;
    let mut ax = Vec::with_capacity(panels * m);
    let mut aw = Vec::with_capacity(panels * m);
    for p in 0..panels {
        let a = p as f64 * h;
        for (&t, &w) in g.iter().zip(&gw) {
            ax.push(a + 0.5 * h * (t + 1.0));
            aw.push(0.5 * h * w);
        }
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    match domain {
        Domain::SimplexWeighted | Domain::Koornwinder => {
            for (&su, &wu) in ax.iter().zip(&aw) {
                let u = -1.0 + 2.0 * su;
                let jac = 1.0 - u;
                for (&t, &wt) in ax.iter().zip(&aw) {
                    let v = u + jac * t;
                    let w = if weighted || domain == Domain::Koornwinder {
                        jac * jac * t
                    } else {
                        jac
                    };
                    nodes.push(domain.from_triangle(u, v));
                    weights.push(2.0 * wu * wt * w);
                }
            }
        }
        Domain::DeltaL { l } => {
            let li = l as i32;
            for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                for (&s, &ws) in ax.iter().zip(&aw) {
                    let h = (1.0 - s).powi(li);
                    let jac = l as f64 * s.powi(li - 1) * h;
                    for (&r, &wr) in ax.iter().zip(&aw) {
                        nodes.push((sx * s.powi(li), sy * h * r));
                        weights.push(ws * wr * jac);
                    }
                }
            }
        }
    }
    Ok(QuadratureRule { nodes, weights, exactness_degree: 2 * m - 1 })
}

/// Chebyshev–Lobatto points on `[-1, 1]`, ascending.
fn lobatto(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| -(PI * i as f64 / (n - 1) as f64).cos())
        .collect()
}

/// Grid side length for a polynomial of `degree` at density multiplier
/// `density`: `max(8 density, density * degree)`.
pub fn grid_side(degree: usize, density: usize) -> usize {
    (8 * density).max(density * degree).max(2)
}

/// Sup-norm sampling cloud with the default density 8.
pub fn sup_grid(domain: Domain, degree: usize) -> Vec<(f64, f64)> {
    sup_grid_with_density(domain, degree, 8)
}

/// Deterministic point cloud covering the closure of `domain`, boundary
/// curves and corners included.
pub fn sup_grid_with_density(domain: Domain, degree: usize, density: usize) -> Vec<(f64, f64)> {
    let side = grid_side(degree, density);
    let t = lobatto(side);
    let mut pts = Vec::new();
    match domain {
        Domain::Koornwinder | Domain::SimplexWeighted => {
            for (i, &u) in t.iter().enumerate() {
                for &v in &t[i..] {
                    pts.push(domain.from_triangle(u, v));
                }
            }
            if domain == Domain::Koornwinder {
                pts.extend([(-2.0, 1.0), (2.0, 1.0), (0.0, -1.0)]);
            } else {
                pts.extend([(-1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]);
            }
        }
        Domain::DeltaL { l } => {
            let li = l as i32;
            let half: Vec<f64> = t.iter().map(|v| 0.5 * (v + 1.0)).collect();
            for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                for &s in &half {
                    let h = (1.0 - s).powi(li);
                    for &r in &half {
                        pts.push((sx * s.powi(li), sy * h * r));
                    }
                }
            }
            pts.extend([(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]);
        }
    }
    pts
}
