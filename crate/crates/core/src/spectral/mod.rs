//! Exact `L^2` best constants as generalized symmetric eigenproblems over
//! `P_n`, the polynomials of total degree at most `n`.
//!
//! The Markov factor is `sqrt(lambda_max(A, G))` where `G` is the Gram
//! matrix of a basis and `A` the Gram matrix of its partial derivatives.
//! The main path never forms `G`: it takes a QR factorization of the
//! weighted evaluation matrix `B = diag(sqrt(w)) V`, so `G = R^T R`, and runs
//! power iteration on `R^{-T} A R^{-1}`. [`dense`] holds an independent
//! Cholesky + Jacobi-rotation path used as the oracle for small `n`.

pub mod dense;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::classical::chebyshev_t;
use crate::domains::{quad_rule, Domain, QuadratureRule};
use crate::error::{LabError, Result};
use crate::poly2d::{Axis, BivariatePoly};

pub use dense::SymMatrix;

/// Ratio `min |R_ii| / max |R_ii|` below which the basis is declared
/// numerically dependent.
const CONDITIONING_FLOOR: f64 = 1e-13;

/// Largest degree accepted by the eigen solvers; beyond it the dense
/// squaring step dominates run time.
pub const MAX_FACTOR_DEGREE: usize = 40;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 500;
/// The iteration runs on `A^(2^SQUARINGS)`, which shrinks the gap ratio
/// `lambda_2 / lambda_1` by the same power.
const SQUARINGS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Eigen,
    ExtremalSequence,
    RatioSample,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Eigen => "eigen",
            Method::ExtremalSequence => "extremal-sequence",
            Method::RatioSample => "ratio-sample",
        })
    }
}

/// One computed best constant (or lower-bound ratio) at degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorPoint {
    pub n: usize,
    pub value: f64,
    pub method: Method,
}

/// Products `T_i(x/sx) T_j(y/sy)`, `i + j <= n`, in graded order
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevBasis {
    pub n: usize,
    pub sx: f64,
    pub sy: f64,
    indices: Vec<(usize, usize)>,
}

impl ChebyshevBasis {
    pub fn new(n: usize, domain: Domain) -> Self {
        let ((x0, x1), (y0, y1)) = domain.bounding_box();
        // boxes are centred at the origin
        let sx = x0.abs().max(x1.abs());
        let sy = y0.abs().max(y1.abs());
        let mut indices = Vec::with_capacity((n + 1) * (n + 2) / 2);
        for d in 0..=n {
            for i in (0..=d).rev() {
                indices.push((i, d - i));
            }
        }
        Self { n, sx, sy, indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[(usize, usize)] {
        &self.indices
    }

    fn tables(&self, x: f64, y: f64) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        let tx = (0..=self.n).map(|k| chebyshev_t(k, x / self.sx)).collect();
        let ty = (0..=self.n).map(|k| chebyshev_t(k, y / self.sy)).collect();
        (tx, ty)
    }

    /// Values at `(x, y)`, and the partial derivative along `axis` if given.
    pub fn eval(&self, x: f64, y: f64, axis: Option<Axis>) -> Vec<f64> {
        let (tx, ty) = self.tables(x, y);
        self.indices
            .iter()
            .map(|&(i, j)| match axis {
                None => tx[i].0 * ty[j].0,
                Some(Axis::X) => tx[i].1 / self.sx * ty[j].0,
                Some(Axis::Y) => tx[i].0 * ty[j].1 / self.sy,
            })
            .collect()
    }

    /// Basis elements expanded into monomials.
    pub fn polynomials(&self) -> Vec<BivariatePoly> {
        let cheb: Vec<Vec<f64>> = chebyshev_monomials(self.n);
        self.indices
            .iter()
            .map(|&(i, j)| {
                let px: Vec<f64> = cheb[i].iter().enumerate().map(|(k, c)| c / self.sx.powi(k as i32)).collect();
                let py: Vec<f64> = cheb[j].iter().enumerate().map(|(k, c)| c / self.sy.powi(k as i32)).collect();
                BivariatePoly::from_x_coeffs(&px).multiply(&BivariatePoly::from_y_coeffs(&py))
            })
            .collect()
    }

    /// `sum_a c_a phi_a` as a polynomial.
    pub fn combine(&self, coeffs: &[f64]) -> BivariatePoly {
        self.polynomials()
            .iter()
            .zip(coeffs)
            .fold(BivariatePoly::zero(), |acc, (p, &c)| acc.add(&p.scale(c)))
    }
}

fn chebyshev_monomials(n: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 1.0]];
    for k in 2..=n {
        let mut next = vec![0.0; k + 1];
        for (i, &c) in out[k - 1].iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in out[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

/// Extra weight multiplying the domain measure in a Gram matrix.
fn extra_weight(domain: Domain, power: u32, x: f64, y: f64) -> Result<f64> {
    match power {
        0 => Ok(1.0),
        2 => match domain {
            Domain::SimplexWeighted => Ok((y - x) * (y - x)),
            // (v - u)^2 = x^2 - 4y under the pullback
            Domain::Koornwinder => Ok(x * x - 4.0 * y),
            Domain::DeltaL { .. } => Err(LabError::domain("no (v - u) weight on Delta_l")),
        },
        p => Err(LabError::domain(format!("extra weight power must be 0 or 2, got {p}"))),
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_FACTOR_DEGREE {
        return Err(LabError::Capacity {
            what: format!("eigenproblem of degree {n}"),
            requested: n,
            cap: MAX_FACTOR_DEGREE,
        });
    }
    Ok(())
}

/// Weighted evaluation matrix `diag(sqrt(w_q * extra)) [scale_a * phi_a(q)]`.
fn weighted_vandermonde(
    rule: &QuadratureRule,
    basis: &ChebyshevBasis,
    scales: &[f64],
    axis: Option<Axis>,
    domain: Domain,
    power: u32,
) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(rule.len(), basis.len());
    for (q, (&(x, y), &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let sw = (w * extra_weight(domain, power, x, y)?).sqrt();
        for (a, v) in basis.eval(x, y, axis).into_iter().enumerate() {
            m[(q, a)] = sw * scales[a] * v;
        }
    }
    Ok(m)
}

/// Gram matrix `G_ab = int phi_a phi_b dmu`, with the extra factor
/// `(v - u)^2` when `extra_weight_power == 2`.
pub fn gram(basis: &ChebyshevBasis, domain: Domain, extra_weight_power: u32) -> Result<SymMatrix> {
    gram_of(basis, domain, extra_weight_power, None)
}

/// Gram matrix of the partial derivatives of the basis.
pub fn derivative_gram(basis: &ChebyshevBasis, domain: Domain, axis: Axis) -> Result<SymMatrix> {
    gram_of(basis, domain, 0, Some(axis))
}

fn gram_of(basis: &ChebyshevBasis, domain: Domain, power: u32, axis: Option<Axis>) -> Result<SymMatrix> {
    let rule = quad_rule(domain, 2 * basis.n + power as usize)?;
    let ones = vec![1.0; basis.len()];
    let b = weighted_vandermonde(&rule, basis, &ones, axis, domain, power)?;
    let g = b.transpose() * &b;
    let dim = basis.len();
    let sym = SymMatrix::from_row_major(dim, (0..dim * dim).map(|k| g[(k / dim, k % dim)]).collect());
    if axis.is_none() && dense::cholesky(&sym).is_none() {
        return Err(LabError::Conditioning {
            n: basis.n,
            detail: "Gram matrix is not numerically positive definite".into(),
        });
    }
    Ok(sym)
}

/// Outcome of power iteration.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: DVector<f64>,
    pub iterations: usize,
}

/// Largest eigenpair of a symmetric positive semidefinite matrix.
///
/// Starts from the all-ones vector, iterates on the normalized matrix power
/// `A^(2^10)` and stops when the Rayleigh quotient of `A` changes by less than
/// `1e-10` relative, with a cap of 500 iterations.
pub fn power_iteration(a: &DMatrix<f64>) -> Result<Eigenpair> {
    let n = a.nrows();
    let norm = a.norm();
    if n == 0 || norm == 0.0 {
        return Ok(Eigenpair { value: 0.0, vector: DVector::zeros(n), iterations: 0 });
    }
    let mut s = a / norm;
    for _ in 0..SQUARINGS {
        s = &s * &s;
        let sn = s.norm();
        if sn == 0.0 {
            break;
        }
        s /= sn;
    }
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut prev = f64::NAN;
    for it in 1..=POWER_MAX_ITER {
        let mut y = &s * &x;
        let yn = y.norm();
        if yn == 0.0 {
            // start vector annihilated; fall back to plain iteration on A
            y = a * &x;
        }
        let yn = y.norm();
        x = y / yn;
        let lambda = x.dot(&(a * &x));
        if (lambda - prev).abs() <= POWER_TOL * lambda.abs() {
            return Ok(Eigenpair { value: lambda, vector: x, iterations: it });
        }
        prev = lambda;
    }
    Err(LabError::Convergence { what: "power iteration".into(), iterations: POWER_MAX_ITER })
}

/// Upper-triangular factor of `B = QR` with a conditioning check.
fn triangular_factor(b: DMatrix<f64>, n: usize) -> Result<DMatrix<f64>> {
    let r = b.qr().r();
    let diag: Vec<f64> = (0..r.ncols()).map(|i| r[(i, i)].abs()).collect();
    let hi = diag.iter().cloned().fold(0.0, f64::max);
    let lo = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(lo > CONDITIONING_FLOOR * hi) {
        return Err(LabError::Conditioning {
            n,
            detail: format!("triangular factor diagonal ratio {:.3e}", lo / hi),
        });
    }
    Ok(r)
}

/// `lambda_max(T^T T, R^T R)` where `T` and `B = QR` are evaluation matrices
/// on the same nodes; returns the eigenvalue and the maximizing coefficients.
fn ratio_eigen(numer: &DMatrix<f64>, denom: DMatrix<f64>, n: usize) -> Result<(f64, DVector<f64>)> {
    let r = triangular_factor(denom, n)?;
    // X = R^{-T} T^T, so T R^{-1} = X^T and the operator is X X^T
    let x = r
        .transpose()
        .solve_lower_triangular(&numer.transpose())
        .ok_or_else(|| LabError::Conditioning { n, detail: "singular triangular factor".into() })?;
    let op = &x * x.transpose();
    let pair = power_iteration(&op)?;
    let coeffs = r
        .solve_upper_triangular(&pair.vector)
        .ok_or_else(|| LabError::Conditioning { n, detail: "singular triangular factor".into() })?;
    Ok((pair.value.max(0.0), coeffs))
}

/// A best constant together with its maximizing polynomial.
#[derive(Debug, Clone)]
pub struct FactorSolution {
    pub point: FactorPoint,
    pub basis: ChebyshevBasis,
    /// Coefficients of the maximizer in the (unscaled) basis.
    pub coefficients: Vec<f64>,
}

impl FactorSolution {
    pub fn witness(&self) -> BivariatePoly {
        self.basis.combine(&self.coefficients)
    }
}

/// `sup_{P in P_n} ||dP/d axis||_2 / ||P||_2` on `domain`.
pub fn l2_markov_factor(n: usize, axis: Axis, domain: Domain) -> Result<FactorPoint> {
    Ok(l2_markov_solution(n, axis, domain, None)?.point)
}

/// Same as [`l2_markov_factor`] but keeps the maximizer. `scales`
/// optionally rescales each basis element; the factor does not depend on it.
pub fn l2_markov_solution(n: usize, axis: Axis, domain: Domain, scales: Option<&[f64]>) -> Result<FactorSolution> {
    check_degree(n)?;
    let basis = ChebyshevBasis::new(n, domain);
    let ones = vec![1.0; basis.len()];
    let scales = scales.unwrap_or(&ones);
    if scales.len() != basis.len() || scales.iter().any(|&s| !(s > 0.0)) {
        return Err(LabError::domain("basis scaling must be positive with one entry per element"));
    }
    if n == 0 {
        return Ok(FactorSolution {
            point: FactorPoint { n, value: 0.0, method: Method::Eigen },
            basis,
            coefficients: vec![1.0],
        });
    }
    let rule = quad_rule(domain, 2 * n)?;
    let b = weighted_vandermonde(&rule, &basis, scales, None, domain, 0)?;
    let d = weighted_vandermonde(&rule, &basis, scales, Some(axis), domain, 0)?;
    let (lambda, c) = ratio_eigen(&d, b, n)?;
    let coefficients = c.iter().zip(scales).map(|(c, s)| c * s).collect();
    Ok(FactorSolution {
        point: FactorPoint { n, value: lambda.sqrt(), method: Method::Eigen },
        basis,
        coefficients,
    })
}

/// `sup_{P in P_n} ||P||_{L^2(S,w)} / ||(v - u) P||_{L^2(S,w)}`.
pub fn l2_schur_factor(n: usize) -> Result<FactorPoint> {
    check_degree(n)?;
    let domain = Domain::SimplexWeighted;
    let basis = ChebyshevBasis::new(n, domain);
    let ones = vec![1.0; basis.len()];
    let rule = quad_rule(domain, 2 * n + 2)?;
    let plain = weighted_vandermonde(&rule, &basis, &ones, None, domain, 0)?;
    let damped = weighted_vandermonde(&rule, &basis, &ones, None, domain, 2)?;
    let (lambda, _) = ratio_eigen(&plain, damped, n)?;
    Ok(FactorPoint { n, value: lambda.sqrt(), method: Method::Eigen })
}

/// Oracle path: assembled Gram matrices, Cholesky, Jacobi rotations.
pub fn l2_markov_factor_dense(n: usize, axis: Axis, domain: Domain) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let basis = ChebyshevBasis::new(n, domain);
    let g = gram(&basis, domain, 0)?;
    let a = derivative_gram(&basis, domain, axis)?;
    dense::generalized_max_eigenvalue(&a, &g)
        .map(|l| l.max(0.0).sqrt())
        .ok_or_else(|| LabError::Conditioning { n, detail: "Cholesky failed".into() })
}

/// Oracle path for the Schur factor.
pub fn l2_schur_factor_dense(n: usize) -> Result<f64> {
    let basis = ChebyshevBasis::new(n, Domain::SimplexWeighted);
    let g0 = gram(&basis, Domain::SimplexWeighted, 0)?;
    let g2 = gram(&basis, Domain::SimplexWeighted, 2)?;
    dense::generalized_max_eigenvalue(&g0, &g2)
        .map(f64::sqrt)
        .ok_or_else(|| LabError::Conditioning { n, detail: "Cholesky failed".into() })
}
