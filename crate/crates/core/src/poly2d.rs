//! Dense bivariate polynomials in the monomial basis.
//!
//! `coeffs[i][j]` multiplies `x^i y^j`. Arithmetic never drops small
//! coefficients; only rows and columns that are exactly zero are trimmed.
//!
//! The symmetric pullback `Q(u, v) = P(u + v, uv)` maps Koornwinder's domain
//! onto the triangle `-1 < u < v < 1`. Pulled-back polynomials reuse the same
//! type with `u` in the `x` slot and `v` in the `y` slot.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Coordinate direction for partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

/// Total degree of a polynomial. The zero polynomial has its own variant so
/// that no `-1` sentinel ever enters degree arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    Zero,
    Finite(usize),
}

impl Degree {
    /// Degree as a number, with the zero polynomial mapped to 0.
    pub fn or_zero(self) -> usize {
        match self {
            Degree::Zero => 0,
            Degree::Finite(d) => d,
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct BivariatePoly {
    /// Row-major, `nx * ny` entries.
    coeffs: Vec<f64>,
    nx: usize,
    ny: usize,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: vec![c],
            nx: 1,
            ny: 1,
        }
    }

    /// `c * x^i * y^j`
    pub fn monomial(c: f64, i: usize, j: usize) -> Self {
        let mut p = Self::with_shape(i + 1, j + 1);
        p.coeffs[i * (j + 1) + j] = c;
        p.trimmed()
    }

    pub fn x() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    /// Builds from nested rows, `rows[i][j]` multiplying `x^i y^j`. Ragged
    /// rows are padded with zeros.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let nx = rows.len().max(1);
        let ny = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let mut p = Self::with_shape(nx, ny);
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                p.coeffs[i * ny + j] = c;
            }
        }
        p.trimmed()
    }

    /// Polynomial in `x` alone from ascending coefficients.
    pub fn from_x_coeffs(c: &[f64]) -> Self {
        let rows: Vec<Vec<f64>> = c.iter().map(|&v| vec![v]).collect();
        Self::from_rows(&rows)
    }

    /// Polynomial in `y` alone from ascending coefficients.
    pub fn from_y_coeffs(c: &[f64]) -> Self {
        Self::from_rows(&[c.to_vec()])
    }

    fn with_shape(nx: usize, ny: usize) -> Self {
        Self {
            coeffs: vec![0.0; nx * ny],
            nx,
            ny,
        }
    }

    /// Drops trailing rows and columns that are exactly zero.
    fn trimmed(mut self) -> Self {
        let mut nx = 1;
        let mut ny = 1;
        for i in 0..self.nx {
            for j in 0..self.ny {
                if self.coeffs[i * self.ny + j] != 0.0 {
                    nx = nx.max(i + 1);
                    ny = ny.max(j + 1);
                }
            }
        }
        if nx == self.nx && ny == self.ny {
            return self;
        }
        let mut out = Self::with_shape(nx, ny);
        for i in 0..nx {
            for j in 0..ny {
                out.coeffs[i * ny + j] = self.coeffs[i * self.ny + j];
            }
        }
        self.coeffs = out.coeffs;
        self.nx = nx;
        self.ny = ny;
        self
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i < self.nx && j < self.ny {
            self.coeffs[i * self.ny + j]
        } else {
            0.0
        }
    }

    pub fn max_degree_x(&self) -> usize {
        self.nx - 1
    }

    pub fn max_degree_y(&self) -> usize {
        self.ny - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn total_degree(&self) -> Degree {
        let mut best = None;
        for i in 0..self.nx {
            for j in 0..self.ny {
                if self.coeffs[i * self.ny + j] != 0.0 {
                    best = Some(best.map_or(i + j, |b: usize| b.max(i + j)));
                }
            }
        }
        best.map_or(Degree::Zero, Degree::Finite)
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Iterates `(i, j, c)` over the stored (possibly zero) coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nx).flat_map(move |i| (0..self.ny).map(move |j| (i, j, self.coeffs[i * self.ny + j])))
    }

    /// Nested Horner: inner pass in `y` per row, outer pass in `x`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for i in (0..self.nx).rev() {
            let row = &self.coeffs[i * self.ny..(i + 1) * self.ny];
            let r = row.iter().rev().fold(0.0, |a, &c| a * y + c);
            acc = acc * x + r;
        }
        acc
    }

    pub fn partial(&self, axis: Axis) -> Self {
        match axis {
            Axis::X => {
                if self.nx == 1 {
                    return Self::zero();
                }
                let mut out = Self::with_shape(self.nx - 1, self.ny);
                for i in 1..self.nx {
                    for j in 0..self.ny {
                        out.coeffs[(i - 1) * self.ny + j] = i as f64 * self.coeffs[i * self.ny + j];
                    }
                }
                out.trimmed()
            }
            Axis::Y => {
                if self.ny == 1 {
                    return Self::zero();
                }
                let ny = self.ny - 1;
                let mut out = Self::with_shape(self.nx, ny);
                for i in 0..self.nx {
                    for j in 1..self.ny {
                        out.coeffs[i * ny + j - 1] = j as f64 * self.coeffs[i * self.ny + j];
                    }
                }
                out.trimmed()
            }
        }
    }

    /// Exact convolution of coefficient arrays.
    pub fn multiply(&self, other: &Self) -> Self {
        let nx = self.nx + other.nx - 1;
        let ny = self.ny + other.ny - 1;
        let mut out = Self::with_shape(nx, ny);
        for i in 0..self.nx {
            for j in 0..self.ny {
                let a = self.coeffs[i * self.ny + j];
                if a == 0.0 {
                    continue;
                }
                for k in 0..other.nx {
                    let dst = (i + k) * ny + j;
                    let src = &other.coeffs[k * other.ny..(k + 1) * other.ny];
                    for (l, &b) in src.iter().enumerate() {
                        out.coeffs[dst + l] += a * b;
                    }
                }
            }
        }
        out.trimmed()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(1.0);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.multiply(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base);
            }
        }
        result
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            nx: self.nx,
            ny: self.ny,
        }
        .trimmed()
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let nx = self.nx.max(other.nx);
        let ny = self.ny.max(other.ny);
        let mut out = Self::with_shape(nx, ny);
        for i in 0..nx {
            for j in 0..ny {
                out.coeffs[i * ny + j] = self.coeff(i, j) + sign * other.coeff(i, j);
            }
        }
        out.trimmed()
    }

    /// Substitutes `x = p(s)` into a polynomial in `x` alone, where `p` is a
    /// polynomial in `x` standing for the new variable. Used to compose
    /// univariate factors with affine maps.
    pub fn compose_x(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for i in (0..self.nx).rev() {
            let row: Vec<f64> = (0..self.ny).map(|j| self.coeff(i, j)).collect();
            acc = acc.multiply(inner).add(&Self::from_y_coeffs(&row));
        }
        acc
    }

    /// `Q(u, v) = P(u + v, uv)`, with `u` stored in the `x` slot.
    pub fn pullback_symmetric(&self) -> Self {
        let deg = self.total_degree().or_zero();
        let n = deg + 1;
        let mut out = Self::with_shape(n, n);
        let binom = binomial_rows(self.nx);
        for i in 0..self.nx {
            for j in 0..self.ny {
                let c = self.coeffs[i * self.ny + j];
                if c == 0.0 {
                    continue;
                }
                // (u+v)^i (uv)^j = sum_a C(i,a) u^(a+j) v^(i-a+j)
                for a in 0..=i {
                    out.coeffs[(a + j) * n + (i - a + j)] += c * binom[i][a];
                }
            }
        }
        out.trimmed()
    }

    /// `dQ/du - dQ/dv` for `Q = pullback_symmetric(P)`; equals
    /// `(v - u) * (dP/dy)(u + v, uv)`.
    pub fn pullback_derivative_y(&self) -> Self {
        let q = self.pullback_symmetric();
        q.partial(Axis::X).sub(&q.partial(Axis::Y))
    }

    /// `d(vQ)/dv - d(uQ)/du`; equals `(v - u) * (dP/dx)(u + v, uv)`.
    pub fn pullback_derivative_x(&self) -> Self {
        let q = self.pullback_symmetric();
        let vq = Self::y().multiply(&q);
        let uq = Self::x().multiply(&q);
        vq.partial(Axis::Y).sub(&uq.partial(Axis::X))
    }

    /// Coefficientwise comparison with absolute tolerance `tol` scaled by the
    /// largest coefficient magnitude of either operand (at least 1).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_coeff_diff(other) <= tol * self.max_abs_coeff().max(other.max_abs_coeff()).max(1.0)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let nx = self.nx.max(other.nx);
        let ny = self.ny.max(other.ny);
        let mut m: f64 = 0.0;
        for i in 0..nx {
            for j in 0..ny {
                m = m.max((self.coeff(i, j) - other.coeff(i, j)).abs());
            }
        }
        m
    }
}

/// The weight `v - u` as a polynomial in the `(u, v)` slots.
pub fn simplex_weight() -> BivariatePoly {
    BivariatePoly::y().sub(&BivariatePoly::x())
}

fn binomial_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![1.0; i + 1];
        for a in 1..i {
            row[a] = rows[i - 1][a - 1] + rows[i - 1][a];
        }
        rows.push(row);
    }
    rows
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
            match j {
                0 => {}
                1 => f.write_str("y")?,
                _ => write!(f, "y^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: Self) -> BivariatePoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: Self) -> BivariatePoly {
        self.combine(rhs, -1.0)
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: Self) -> BivariatePoly {
        self.multiply(rhs)
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        self.scale(-1.0)
    }
}

impl BivariatePoly {
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut impl Rng, deg: usize) -> BivariatePoly {
        let mut rows = vec![vec![0.0; deg + 1]; deg + 1];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                if i + j <= deg {
                    *c = rng.gen_range(-1.0..1.0);
                }
            }
        }
        BivariatePoly::from_rows(&rows)
    }

    #[test]
    fn eval_examples() {
        let p = BivariatePoly::from_rows(&[vec![1.0, 1.0], vec![1.0]]);
        assert_eq!(p.eval(-2.0, 1.0), 0.0);
        let cusp = BivariatePoly::from_rows(&[vec![0.0, -4.0], vec![0.0], vec![1.0]]);
        assert_eq!(cusp.eval(2.0, 1.0), 0.0);
        assert_eq!(BivariatePoly::monomial(1.0, 3, 1).eval(2.0, 3.0), 24.0);
    }

    #[test]
    fn partial_examples() {
        let p = BivariatePoly::monomial(1.0, 2, 1);
        assert_eq!(p.partial(Axis::X), BivariatePoly::monomial(2.0, 1, 1));
        let c = BivariatePoly::constant(3.5);
        assert!(c.partial(Axis::Y).is_zero());
        assert_eq!(c.partial(Axis::Y).total_degree(), Degree::Zero);
        let p1 = BivariatePoly::from_rows(&[vec![0.25, 0.25], vec![0.25]]);
        assert_eq!(p1.partial(Axis::Y), BivariatePoly::constant(0.25));
    }

    #[test]
    fn multiply_examples() {
        let s = BivariatePoly::x().add(&BivariatePoly::y());
        let d = BivariatePoly::x().sub(&BivariatePoly::y());
        let expect = BivariatePoly::from_rows(&[vec![0.0, 0.0, -1.0], vec![0.0], vec![1.0]]);
        assert_eq!(s.multiply(&d), expect);
        let p = BivariatePoly::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(BivariatePoly::constant(1.0).multiply(&p), p);
        let w = simplex_weight();
        let expect = BivariatePoly::from_rows(&[vec![0.0, 0.0, 1.0], vec![0.0, -2.0], vec![1.0]]);
        assert_eq!(w.multiply(&w), expect);
    }

    #[test]
    fn degree_tracking() {
        assert_eq!(BivariatePoly::zero().total_degree(), Degree::Zero);
        let p = BivariatePoly::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 5.0]]);
        assert_eq!(p.total_degree(), Degree::Finite(2));
        let q = p.multiply(&BivariatePoly::monomial(1.0, 3, 1));
        assert_eq!(q.total_degree(), Degree::Finite(6));
        assert!(BivariatePoly::zero().multiply(&p).is_zero());
    }

    #[test]
    fn pullback_examples() {
        let sum = BivariatePoly::x().add(&BivariatePoly::y());
        assert_eq!(BivariatePoly::x().pullback_symmetric(), sum);
        assert_eq!(BivariatePoly::y().pullback_symmetric(), BivariatePoly::monomial(1.0, 1, 1));
        // x^2 - 4y  ->  (v - u)^2
        let cusp = BivariatePoly::from_rows(&[vec![0.0, -4.0], vec![0.0], vec![1.0]]);
        let w = simplex_weight();
        assert_eq!(cusp.pullback_symmetric(), w.multiply(&w));
    }

    #[test]
    fn pullback_derivative_examples() {
        let w = simplex_weight();
        assert_eq!(BivariatePoly::y().pullback_derivative_y(), w);
        assert!(BivariatePoly::x().pullback_derivative_y().is_zero());
        assert_eq!(BivariatePoly::x().pullback_derivative_x(), w);
        assert!(BivariatePoly::y().pullback_derivative_x().is_zero());

        // y^2: (v-u) * 2uv
        let y2 = BivariatePoly::monomial(1.0, 0, 2);
        let expect = BivariatePoly::from_rows(&[vec![0.0], vec![0.0, 0.0, 2.0], vec![0.0, -2.0]]);
        assert_eq!(y2.pullback_derivative_y(), expect);
        // x^2: (v-u) * 2(u+v) = 2v^2 - 2u^2
        let x2 = BivariatePoly::monomial(1.0, 2, 0);
        let expect = BivariatePoly::from_rows(&[vec![0.0, 0.0, 2.0], vec![0.0], vec![-2.0]]);
        assert_eq!(x2.pullback_derivative_x(), expect);
    }

    #[test]
    fn pullback_matches_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let deg = rng.gen_range(0..=8);
            let p = random_poly(&mut rng, deg);
            let q = p.pullback_symmetric();
            if let Degree::Finite(d) = p.total_degree() {
                assert!(q.total_degree().or_zero() <= 2 * d);
            }
            for _ in 0..50 {
                let u: f64 = rng.gen_range(-1.0..1.0);
                let v: f64 = rng.gen_range(-1.0..1.0);
                let a = q.eval(u, v);
                let b = p.eval(u + v, u * v);
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pullback_derivatives_match_weighted_pullback() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = simplex_weight();
        for _ in 0..200 {
            let deg = rng.gen_range(0..=8);
            let p = random_poly(&mut rng, deg);
            let rhs_y = w.multiply(&p.partial(Axis::Y).pullback_symmetric());
            assert!(p.pullback_derivative_y().approx_eq(&rhs_y, 1e-12));
            let rhs_x = w.multiply(&p.partial(Axis::X).pullback_symmetric());
            assert!(p.pullback_derivative_x().approx_eq(&rhs_x, 1e-12));
        }
    }

    proptest! {
        #[test]
        fn product_rule(a in prop::collection::vec(-1.0f64..1.0, 16),
                        b in prop::collection::vec(-1.0f64..1.0, 16),
                        axis_x in any::<bool>()) {
            let p = BivariatePoly::from_rows(&a.chunks(4).map(<[f64]>::to_vec).collect::<Vec<_>>());
            let q = BivariatePoly::from_rows(&b.chunks(4).map(<[f64]>::to_vec).collect::<Vec<_>>());
            let axis = if axis_x { Axis::X } else { Axis::Y };
            let lhs = p.multiply(&q).partial(axis);
            let rhs = p.partial(axis).multiply(&q).add(&p.multiply(&q.partial(axis)));
            prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        }

        #[test]
        fn multiply_evaluates_pointwise(a in prop::collection::vec(-1.0f64..1.0, 9),
                                        b in prop::collection::vec(-1.0f64..1.0, 9),
                                        x in -2.0f64..2.0, y in -1.0f64..1.0) {
            let p = BivariatePoly::from_rows(&a.chunks(3).map(<[f64]>::to_vec).collect::<Vec<_>>());
            let q = BivariatePoly::from_rows(&b.chunks(3).map(<[f64]>::to_vec).collect::<Vec<_>>());
            let lhs = p.multiply(&q).eval(x, y);
            let rhs = p.eval(x, y) * q.eval(x, y);
            prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1.0));
        }
    }
}
