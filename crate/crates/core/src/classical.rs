//! Chebyshev and Jacobi evaluators and the three extremal families
//! `P_k`, `Q_k` (Koornwinder's domain) and `W_n` (the `Delta_l` sets).
//!
//! Expanded coefficient arrays lose accuracy quickly: `P_k` at `k = 20` has
//! monomial coefficients whose magnitudes exceed its sup norm by ~1e22 near
//! the cusps. Everything numerical in this crate that touches a family member
//! goes through [`ExtremalFamily::value`] and [`ExtremalFamily::cusp_derivative`],
//! which evaluate the closed forms by recurrence. The expansions exist for
//! exact-algebra checks at small index.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::poly2d::BivariatePoly;

/// Largest index for which `P_k`/`Q_k` are expanded into coefficients
/// (degree `5k - 4 <= 116`).
pub const MAX_EXPANDED_INDEX: usize = 24;

/// `(T_k(t), T_k'(t))` by the joint three-term recurrence.
pub fn chebyshev_t(k: usize, t: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut t0, mut d0) = (1.0, 0.0);
    let (mut t1, mut d1) = (t, 1.0);
    for _ in 1..k {
        let t2 = 2.0 * t * t1 - t0;
        let d2 = 2.0 * t1 + 2.0 * t * d1 - d0;
        t0 = t1;
        d0 = d1;
        t1 = t2;
        d1 = d2;
    }
    (t1, d1)
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(t)` in Szegő's normalization,
/// `P_n(1) = binom(n + alpha, n)`.
pub fn jacobi_p(n: usize, alpha: f64, beta: f64, t: f64) -> f64 {
    debug_assert!(alpha > -1.0 && beta > -1.0);
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut p0 = 1.0;
    let mut p1 = (alpha + 1.0) + (ab + 2.0) * (t - 1.0) / 2.0;
    for m in 2..=n {
        let m = m as f64;
        let c = 2.0 * m + ab;
        let a1 = 2.0 * m * (m + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * c;
        let p2 = ((a2 + a3 * t) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Monomial coefficients (ascending) of `T_k'(a + b s)` as a polynomial in `s`.
fn chebyshev_derivative_affine(k: usize, a: f64, b: f64) -> Vec<f64> {
    // T_k' = k U_{k-1}, U_{j+1} = 2t U_j - U_{j-1}
    if k == 0 {
        return vec![0.0];
    }
    let t = [a, b];
    let mut u0 = vec![1.0];
    let mut u1 = vec![2.0 * a, 2.0 * b];
    if k == 1 {
        return vec![1.0];
    }
    for _ in 2..k {
        let mut u2 = vec![0.0; u1.len() + 1];
        for (i, &c) in u1.iter().enumerate() {
            u2[i] += 2.0 * t[0] * c;
            u2[i + 1] += 2.0 * t[1] * c;
        }
        for (i, &c) in u0.iter().enumerate() {
            u2[i] -= c;
        }
        u0 = u1;
        u1 = u2;
    }
    u1.iter().map(|c| c * k as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Pk,
    Qk,
    Wn,
}

impl std::str::FromStr for FamilyKind {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pk" => Ok(FamilyKind::Pk),
            "qk" => Ok(FamilyKind::Qk),
            "wn" => Ok(FamilyKind::Wn),
            other => Err(LabError::domain(format!("unknown family '{other}'"))),
        }
    }
}

/// One member of an extremal sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalFamily {
    pub kind: FamilyKind,
    /// `k` for `P_k`/`Q_k`, `n` for `W_n`.
    pub index: usize,
    /// Jacobi parameter; `W_n` only.
    pub alpha: f64,
    /// Odd exponent of `Delta_l`; `W_n` only.
    pub l: u32,
}

impl ExtremalFamily {
    pub fn pk(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(LabError::domain("P_k needs k >= 1"));
        }
        Ok(Self { kind: FamilyKind::Pk, index: k, alpha: 0.0, l: 1 })
    }

    pub fn qk(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(LabError::domain("Q_k needs k >= 1"));
        }
        Ok(Self { kind: FamilyKind::Qk, index: k, alpha: 0.0, l: 1 })
    }

    pub fn wn(n: usize, alpha: f64, l: u32) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(LabError::domain("W_n needs alpha > 0"));
        }
        if l == 0 || l.is_multiple_of(2) {
            return Err(LabError::domain("W_n needs an odd l >= 1"));
        }
        Ok(Self { kind: FamilyKind::Wn, index: n, alpha, l })
    }

    pub fn new(kind: FamilyKind, index: usize, alpha: f64, l: u32) -> Result<Self> {
        match kind {
            FamilyKind::Pk => Self::pk(index),
            FamilyKind::Qk => Self::qk(index),
            FamilyKind::Wn => Self::wn(index, alpha, l),
        }
    }

    /// Total degree of the polynomial.
    pub fn degree(&self) -> usize {
        match self.kind {
            FamilyKind::Pk => 5 * self.index - 4,
            FamilyKind::Qk => 5 * (self.index - 1) + 2,
            FamilyKind::Wn => self.index + 1,
        }
    }

    /// Closed-form value at `(x, y)`.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let k = self.index as f64;
        match self.kind {
            FamilyKind::Pk => {
                let g = chebyshev_t(self.index, (2.0 - x) / 4.0).1 / k;
                g.powi(5) * (1.0 + x + y) / 4.0
            }
            FamilyKind::Qk => {
                let g = chebyshev_t(self.index, (1.0 + y) / 2.0).1 / k;
                g.powi(5) * (x * x / 4.0 - y)
            }
            FamilyKind::Wn => y * jacobi_p(self.index, self.alpha, self.alpha, x),
        }
    }

    /// Closed-form partial derivative along the family's extremal axis:
    /// `dP_k/dy`, `dQ_k/dx`, `dW_n/dy`.
    pub fn extremal_partial(&self, x: f64, y: f64) -> f64 {
        let k = self.index as f64;
        match self.kind {
            FamilyKind::Pk => {
                let g = chebyshev_t(self.index, (2.0 - x) / 4.0).1 / k;
                g.powi(5) / 4.0
            }
            FamilyKind::Qk => {
                let g = chebyshev_t(self.index, (1.0 + y) / 2.0).1 / k;
                g.powi(5) * x / 2.0
            }
            FamilyKind::Wn => jacobi_p(self.index, self.alpha, self.alpha, x),
        }
    }

    /// Point where the extremal derivative is read off: `(-2, 1)` for `P_k`,
    /// `(2, 1)` for `Q_k`, `(1, 0)` for `W_n`.
    pub fn cusp(&self) -> (f64, f64) {
        match self.kind {
            FamilyKind::Pk => (-2.0, 1.0),
            FamilyKind::Qk => (2.0, 1.0),
            FamilyKind::Wn => (1.0, 0.0),
        }
    }

    /// `|extremal_partial|` at the cusp: `k^5/4` for `P_k`, `k^5` for `Q_k`.
    pub fn cusp_derivative(&self) -> f64 {
        let (x, y) = self.cusp();
        self.extremal_partial(x, y).abs()
    }

    /// Coefficient expansion; `P_k`/`Q_k` are limited to `k <= MAX_EXPANDED_INDEX`.
    pub fn expand(&self) -> Result<BivariatePoly> {
        match self.kind {
            FamilyKind::Pk => build_pk(self.index),
            FamilyKind::Qk => build_qk(self.index),
            FamilyKind::Wn => Ok(build_wn(self.index, self.alpha)),
        }
    }
}

fn check_expandable(k: usize) -> Result<()> {
    if k == 0 {
        return Err(LabError::domain("index must be >= 1"));
    }
    if k > MAX_EXPANDED_INDEX {
        return Err(LabError::domain(format!(
            "index {k} exceeds the expansion cap {MAX_EXPANDED_INDEX}; use closed-form evaluation"
        )));
    }
    Ok(())
}

/// `P_k = [T_k'((2-x)/4)/k]^5 (1+x+y)/4`, total degree `5k - 4`.
pub fn build_pk(k: usize) -> Result<BivariatePoly> {
    check_expandable(k)?;
    let g: Vec<f64> = chebyshev_derivative_affine(k, 0.5, -0.25)
        .into_iter()
        .map(|c| c / k as f64)
        .collect();
    let g5 = BivariatePoly::from_x_coeffs(&g).pow(5);
    let lin = BivariatePoly::from_rows(&[vec![0.25, 0.25], vec![0.25]]);
    Ok(g5.multiply(&lin))
}

/// `Q_k = [T_k'((1+y)/2)/k]^5 (x^2/4 - y)`.
pub fn build_qk(k: usize) -> Result<BivariatePoly> {
    check_expandable(k)?;
    let g: Vec<f64> = chebyshev_derivative_affine(k, 0.5, 0.5)
        .into_iter()
        .map(|c| c / k as f64)
        .collect();
    let g5 = BivariatePoly::from_y_coeffs(&g).pow(5);
    let quad = BivariatePoly::from_rows(&[vec![0.0, -1.0], vec![0.0], vec![0.25]]);
    Ok(g5.multiply(&quad))
}

/// `W_n = y P_n^{(alpha, alpha)}(x)`, total degree `n + 1`.
pub fn build_wn(n: usize, alpha: f64) -> BivariatePoly {
    // Same recurrence as `jacobi_p`, carried out on coefficient vectors.
    let ab = 2.0 * alpha;
    let mut p0 = vec![1.0];
    let mut p1 = vec![(alpha + 1.0) - (ab + 2.0) / 2.0, (ab + 2.0) / 2.0];
    let jac = if n == 0 {
        p0
    } else {
        for m in 2..=n {
            let m = m as f64;
            let c = 2.0 * m + ab;
            let a1 = 2.0 * m * (m + ab) * (c - 2.0);
            let a3 = (c - 2.0) * (c - 1.0) * c;
            let a4 = 2.0 * (m + alpha - 1.0) * (m + alpha - 1.0) * c;
            let mut p2 = vec![0.0; p1.len() + 1];
            for (i, &v) in p1.iter().enumerate() {
                p2[i + 1] += a3 * v / a1;
            }
            for (i, &v) in p0.iter().enumerate() {
                p2[i] -= a4 * v / a1;
            }
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    let rows: Vec<Vec<f64>> = jac.iter().map(|&c| vec![0.0, c]).collect();
    BivariatePoly::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly2d::{Axis, Degree};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn binom(n: f64, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_t(0, 0.3), (1.0, 0.0));
        let (v, d) = chebyshev_t(3, 0.5);
        assert!((v + 1.0).abs() < 1e-15 && d.abs() < 1e-15);
        for k in 0..60 {
            assert_eq!(chebyshev_t(k, 1.0).1, (k * k) as f64);
        }
    }

    #[test]
    fn chebyshev_bounded_on_interval() {
        for k in 0..=200 {
            for i in 0..=400 {
                let t = -1.0 + i as f64 / 200.0;
                assert!(chebyshev_t(k, t).0.abs() <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_p(0, 2.0, 3.0, 0.4), 1.0);
        assert!((jacobi_p(1, 1.5, 1.5, 0.3) - 2.5 * 0.3).abs() < 1e-15);
        let a = jacobi_p(5, 2.0, 3.0, 0.3);
        let b = -jacobi_p(5, 3.0, 2.0, -0.3);
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        for n in 0..30 {
            let v = jacobi_p(n, 14.0, 14.0, 1.0);
            assert!((v - binom(n as f64 + 14.0, n)).abs() < 1e-10 * v);
        }
    }

    #[test]
    fn pk_examples() {
        let p1 = build_pk(1).unwrap();
        assert_eq!(p1, BivariatePoly::from_rows(&[vec![0.25, 0.25], vec![0.25]]));
        for k in 1..=MAX_EXPANDED_INDEX {
            assert_eq!(build_pk(k).unwrap().total_degree(), Degree::Finite(5 * k - 4));
            assert_eq!(ExtremalFamily::pk(k).unwrap().degree(), 5 * k - 4);
        }
        let d = build_pk(2).unwrap().partial(Axis::Y).eval(-2.0, 1.0);
        assert!((d - 8.0).abs() < 1e-12);
        for k in 1..=20 {
            let f = ExtremalFamily::pk(k).unwrap();
            assert_eq!(f.value(-2.0, 1.0), 0.0);
            let expect = (k as f64).powi(5) / 4.0;
            assert!((f.cusp_derivative() - expect).abs() <= 1e-12 * expect);
        }
        assert!(build_pk(25).is_err());
        assert!(ExtremalFamily::pk(0).is_err());
    }

    #[test]
    fn qk_examples() {
        let q1 = build_qk(1).unwrap();
        assert_eq!(q1, BivariatePoly::from_rows(&[vec![0.0, -1.0], vec![0.0], vec![0.25]]));
        assert!((q1.partial(Axis::X).eval(2.0, 1.0).abs() - 1.0).abs() < 1e-15);
        let q3 = build_qk(3).unwrap();
        assert!((q3.partial(Axis::X).eval(2.0, 1.0).abs() - 243.0).abs() < 1e-9);
        for k in 1..=20 {
            let f = ExtremalFamily::qk(k).unwrap();
            let expect = (k as f64).powi(5);
            assert!((f.cusp_derivative() - expect).abs() <= 1e-12 * expect);
        }
    }

    #[test]
    fn wn_examples() {
        assert_eq!(build_wn(0, 3.0), BivariatePoly::y());
        let w1 = build_wn(1, 2.5);
        assert!(w1.approx_eq(&BivariatePoly::monomial(3.5, 1, 1), 1e-15));
        let w4 = build_wn(4, 14.0);
        assert_eq!(w4.total_degree(), Degree::Finite(5));
        assert!((w4.eval(1.0, 0.5) - 1530.0).abs() < 1e-9);
        assert!(ExtremalFamily::wn(3, 0.0, 3).is_err());
        assert!(ExtremalFamily::wn(3, 1.0, 2).is_err());
    }

    #[test]
    fn cusp_derivatives_agree_with_expansion() {
        for k in 1..=10 {
            let p = build_pk(k).unwrap().partial(Axis::Y).eval(-2.0, 1.0).abs();
            let f = ExtremalFamily::pk(k).unwrap().cusp_derivative();
            assert!((p - f).abs() <= 1e-9 * f, "P_{k}: {p} vs {f}");
            let q = build_qk(k).unwrap().partial(Axis::X).eval(2.0, 1.0).abs();
            let g = ExtremalFamily::qk(k).unwrap().cusp_derivative();
            assert!((q - g).abs() <= 1e-9 * g, "Q_{k}: {q} vs {g}");
        }
    }

    fn random_omega_point(rng: &mut impl Rng) -> (f64, f64) {
        // rejection sampling in the bounding box
        loop {
            let x: f64 = rng.gen_range(-2.0..2.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            if x.abs() < y + 1.0 && x * x > 4.0 * y {
                return (x, y);
            }
        }
    }

    #[test]
    fn expansion_matches_closed_form() {
        // Tolerance is relative to the sup bound k; the expansion is only
        // representable in f64 up to about k = 10 for P_k and k = 8 for Q_k,
        // whose `((1+y)/2)` powers cancel harder near y = -1.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 1..=10 {
            let pe = build_pk(k).unwrap();
            let qe = build_qk(k).unwrap();
            let pf = ExtremalFamily::pk(k).unwrap();
            let qf = ExtremalFamily::qk(k).unwrap();
            for _ in 0..100 {
                let (x, y) = random_omega_point(&mut rng);
                let scale = pf.value(x, y).abs().max(k as f64);
                assert!((pe.eval(x, y) - pf.value(x, y)).abs() <= 1e-9 * scale);
                if k > 8 {
                    continue;
                }
                let scale = qf.value(x, y).abs().max(k as f64);
                assert!((qe.eval(x, y) - qf.value(x, y)).abs() <= 1e-9 * scale, "k={k} ({x},{y}) {} vs {}", qe.eval(x, y), qf.value(x, y));
            }
        }
    }

    #[test]
    fn closed_forms_bounded_by_k_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pts: Vec<_> = (0..2000).map(|_| random_omega_point(&mut rng)).collect();
        for k in 1..=24 {
            let pf = ExtremalFamily::pk(k).unwrap();
            let qf = ExtremalFamily::qk(k).unwrap();
            for &(x, y) in &pts {
                assert!(pf.value(x, y).abs() <= k as f64 * (1.0 + 1e-12));
                assert!(qf.value(x, y).abs() <= k as f64 * (1.0 + 1e-12));
            }
        }
    }
}
