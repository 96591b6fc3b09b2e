//! Degree sweeps, scaling-exponent fits and the claim-by-claim verification
//! suite.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classical::{jacobi_p, ExtremalFamily, FamilyKind};
use crate::config::{FitWindow, LabConfig};
use crate::domains::{grid_side, quad_rule_capped, Domain};
use crate::error::{LabError, Result};
use crate::norms::{bernoulli_sandwich, lp_norm_with, markov_ratio_with, wn_norms, NormOptions, NormSpec, PNorm, Surface};
use crate::output::{extremal_csv, factor_csv};
use crate::poly2d::{Axis, BivariatePoly};
use crate::spectral::{
    l2_markov_factor, l2_markov_factor_dense, l2_markov_solution, l2_schur_factor, l2_schur_factor_dense,
    FactorPoint, Method,
};

/// Largest total degree accepted by extremal sweeps.
pub const MAX_FAMILY_DEGREE: usize = 1000;

/// Least-squares fit of `log value = slope * log n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub max_abs_residual: f64,
    pub n_range: (usize, usize),
}

pub fn fit_exponent(points: &[(usize, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(LabError::domain(format!("exponent fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| n == 0 || !(v > 0.0) || !v.is_finite()) {
        return Err(LabError::domain(format!("exponent fit needs n >= 1 and finite positive values, got ({n}, {v})")));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(LabError::domain("exponent fit needs at least two distinct n"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_abs_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    let lo = points.iter().map(|p| p.0).min().unwrap_or(0);
    let hi = points.iter().map(|p| p.0).max().unwrap_or(0);
    Ok(FitResult { slope, intercept, max_abs_residual, n_range: (lo, hi) })
}

/// A degree sweep of `L^2` Markov factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub domain: Domain,
    pub axis: Axis,
    pub degrees: Vec<usize>,
}

impl SweepConfig {
    pub fn new(domain: Domain, axis: Axis, degrees: Vec<usize>) -> Result<Self> {
        if degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::domain("degree list must be strictly increasing"));
        }
        Ok(Self { domain, axis, degrees })
    }
}

/// Factors for every degree, computed in parallel and returned in input
/// order. A failure aborts with every point before it.
pub fn sweep_factor(cfg: &SweepConfig) -> Result<Vec<FactorPoint>> {
    let results: Vec<Result<FactorPoint>> =
        cfg.degrees.par_iter().map(|&n| l2_markov_factor(n, cfg.axis, cfg.domain)).collect();
    collect_prefix(results)
}

fn collect_prefix(results: Vec<Result<FactorPoint>>) -> Result<Vec<FactorPoint>> {
    let mut done = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(p) => done.push(p),
            Err(e) => return Err(LabError::SweepAborted { completed: done, source: Box::new(e) }),
        }
    }
    Ok(done)
}

/// Schur factors for every degree, parallel, in input order.
pub fn sweep_schur(degrees: &[usize]) -> Result<Vec<FactorPoint>> {
    collect_prefix(degrees.par_iter().map(|&n| l2_schur_factor(n)).collect())
}

/// An extremal-sequence sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSweep {
    pub kind: FamilyKind,
    pub indices: Vec<usize>,
    pub p: PNorm,
    /// `W_n` parameters.
    pub alpha: f64,
    pub l: u32,
}

impl ExtremalSweep {
    pub fn new(kind: FamilyKind, indices: Vec<usize>, p: PNorm) -> Self {
        Self { kind, indices, p, alpha: 14.0, l: 3 }
    }

    pub fn with_wn(mut self, alpha: f64, l: u32) -> Self {
        self.alpha = alpha;
        self.l = l;
        self
    }
}

/// One row of an extremal sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRow {
    pub index: usize,
    pub degree: usize,
    pub cusp_derivative: f64,
    pub norm: f64,
    pub ratio: f64,
    /// `k^4/4` for `P_k`, `Q_k`; `(n+1)^(2l)` for `W_n`.
    pub expected: f64,
}

impl ExtremalRow {
    pub fn ratio_over_expected(&self) -> f64 {
        self.ratio / self.expected
    }

    /// The ratio as a point on the degree axis.
    pub fn point(&self) -> FactorPoint {
        FactorPoint { n: self.degree, value: self.ratio, method: Method::ExtremalSequence }
    }
}

/// `dW_n/dy = P_n^{(alpha, alpha)}(x)` as a surface, for sup norms.
struct JacobiSlice {
    n: usize,
    alpha: f64,
}

impl Surface for JacobiSlice {
    fn value(&self, x: f64, _y: f64) -> f64 {
        jacobi_p(self.n, self.alpha, self.alpha, x)
    }
    fn degree(&self) -> usize {
        self.n
    }
}

fn family_domain(kind: FamilyKind, l: u32) -> Domain {
    match kind {
        FamilyKind::Pk | FamilyKind::Qk => Domain::Koornwinder,
        FamilyKind::Wn => Domain::DeltaL { l },
    }
}

fn check_capacity(f: &ExtremalFamily, p: PNorm, opts: &NormOptions) -> Result<()> {
    let deg = f.degree();
    if deg > MAX_FAMILY_DEGREE {
        return Err(LabError::Capacity { what: format!("family member of degree {deg}"), requested: deg, cap: MAX_FAMILY_DEGREE });
    }
    if p == PNorm::Infinity {
        let side = grid_side(deg, opts.grid_density);
        let nodes = side.saturating_mul(side);
        if nodes > opts.max_nodes {
            return Err(LabError::Capacity { what: format!("sup grid for degree {deg}"), requested: nodes, cap: opts.max_nodes });
        }
    }
    Ok(())
}

fn extremal_row(sweep: &ExtremalSweep, index: usize, opts: &NormOptions) -> Result<ExtremalRow> {
    let f = ExtremalFamily::new(sweep.kind, index, sweep.alpha, sweep.l)?;
    check_capacity(&f, sweep.p, opts)?;
    let spec = NormSpec::new(sweep.p, family_domain(sweep.kind, sweep.l));
    let cusp_derivative = f.cusp_derivative();
    let k = index as f64;
    let (norm, ratio, expected) = match sweep.kind {
        FamilyKind::Pk | FamilyKind::Qk => {
            let norm = lp_norm_with(&f, spec, opts)?;
            (norm, cusp_derivative / norm, k.powi(4) / 4.0)
        }
        FamilyKind::Wn => {
            let expected = (k + 1.0).powi(2 * sweep.l as i32);
            match sweep.p {
                PNorm::Finite(p) => {
                    let (num, den) = wn_norms(index, sweep.alpha, sweep.l, p)?;
                    (den, num / den, expected)
                }
                PNorm::Infinity => {
                    let den = lp_norm_with(&f, spec, opts)?;
                    let num = lp_norm_with(&JacobiSlice { n: index, alpha: sweep.alpha }, spec, opts)?;
                    (den, num / den, expected)
                }
            }
        }
    };
    Ok(ExtremalRow { index, degree: f.degree(), cusp_derivative, norm, ratio, expected })
}

/// Lower-bound ratios along an extremal sequence, parallel, in input order.
pub fn sweep_extremal(sweep: &ExtremalSweep, opts: &NormOptions) -> Result<Vec<ExtremalRow>> {
    sweep.indices.par_iter().map(|&i| extremal_row(sweep, i, opts)).collect()
}

/// Fit of ratio against polynomial degree.
pub fn fit_extremal(rows: &[ExtremalRow]) -> Result<FitResult> {
    fit_exponent(&rows.iter().map(|r| (r.degree, r.ratio)).collect::<Vec<_>>())
}

pub fn fit_factors(points: &[FactorPoint]) -> Result<FitResult> {
    fit_exponent(&points.iter().map(|p| (p.n, p.value)).collect::<Vec<_>>())
}

/// One entry of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub measured: BTreeMap<String, Value>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub all_pass: bool,
    pub criteria: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub const CRITERIA: [(u32, &str); 11] = [
    (1, "geometry exactness"),
    (2, "pullback derivative identities"),
    (3, "extremal sequences, sup-norm lower bound"),
    (4, "extremal sequences, exponent fit"),
    (5, "Koornwinder L2 Markov exponent"),
    (6, "weighted simplex L2 Markov exponent"),
    (7, "Schur factor"),
    (8, "Delta_l exponent"),
    (9, "Bernoulli sandwich"),
    (10, "eigen oracle equivalence"),
    (11, "sweep determinism across thread counts"),
];

/// Runs the selected criteria in order. Failures, including numerical
/// errors, become report entries; the report holds no timings, so equal
/// configs give byte-identical reports.
pub fn verify_all(config: &LabConfig) -> VerifyReport {
    let ids: Vec<u32> = config.criteria.clone().unwrap_or_else(|| CRITERIA.iter().map(|c| c.0).collect());
    let criteria: Vec<CriterionResult> = ids.iter().map(|&id| run_criterion(id, config)).collect();
    VerifyReport { all_pass: criteria.iter().all(|c| c.pass), criteria }
}

pub fn run_criterion(id: u32, config: &LabConfig) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown").to_string();
    let mut m = Measured::default();
    let outcome = match id {
        1 => geometry(config, &mut m),
        2 => identities(config, &mut m),
        3 => sharpness_bound(config, &mut m),
        4 => sharpness_fit(config, &mut m),
        5 => koornwinder_exponent(config, &mut m),
        6 => simplex_exponent(config, &mut m),
        7 => schur(config, &mut m),
        8 => delta_l(config, &mut m),
        9 => bernoulli(config, &mut m),
        10 => oracle(config, &mut m),
        11 => determinism(config, &mut m),
        _ => Err(LabError::Config(format!("unknown criterion {id}"))),
    };
    let (pass, detail) = match outcome {
        Ok(()) => (m.failures.is_empty(), m.failures.join("; ")),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name, pass, measured: m.values, detail }
}

#[derive(Default)]
struct Measured {
    values: BTreeMap<String, Value>,
    failures: Vec<String>,
}

impl Measured {
    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    /// Records a fit and checks its window plus the drop-the-smallest rule.
    fn check_fit(&mut self, key: &str, points: &[(usize, f64)], window: &FitWindow, drop_tol: f64) -> Result<()> {
        let fit = fit_exponent(points)?;
        let dropped = fit_exponent(&points[1..])?;
        let drift = (fit.slope - dropped.slope).abs();
        self.put(&format!("{key}_slope"), fit.slope);
        self.put(&format!("{key}_slope_without_smallest"), dropped.slope);
        self.check(window.contains(fit.slope), || {
            format!("{key} slope {:.4} outside [{}, {}]", fit.slope, fmt_bound(window.slope_min), fmt_bound(window.slope_max))
        });
        self.check(drift < drop_tol, || format!("{key} slope moves {drift:.4} when the smallest point is dropped"));
        Ok(())
    }
}

fn fmt_bound(b: Option<f64>) -> String {
    b.map_or("-".into(), |v| v.to_string())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn random_poly(rng: &mut impl Rng, deg: usize) -> BivariatePoly {
    let rows: Vec<Vec<f64>> = (0..=deg).map(|i| (0..=deg - i).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    BivariatePoly::from_rows(&rows)
}

fn geometry(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let q = &cfg.quadrature;
    let area = quad_rule_capped(Domain::Koornwinder, q.exactness_margin, q.max_nodes)?.total_weight();
    m.put("omega_area", area);
    m.check(rel(area, 4.0 / 3.0) <= cfg.tolerances.area_rel, || format!("area {area} != 4/3"));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples.pullback_polys {
        let d = rng.gen_range(0..=cfg.samples.pullback_max_degree);
        let p = random_poly(&mut rng, d);
        let omega = quad_rule_capped(Domain::Koornwinder, d + q.exactness_margin, q.max_nodes)?.integrate(|x, y| p.eval(x, y));
        let pulled = p.pullback_symmetric();
        let simplex = quad_rule_capped(Domain::SimplexWeighted, 2 * d + q.exactness_margin, q.max_nodes)?
            .integrate(|u, v| pulled.eval(u, v));
        worst = worst.max((omega - simplex).abs() / simplex.abs().max(1.0));
    }
    m.put("pullback_max_rel_diff", worst);
    m.check(worst <= cfg.tolerances.pullback_rel, || format!("pullback integrals differ by {worst:e}"));
    Ok(())
}

fn identities(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x2);
    let w = crate::poly2d::simplex_weight();
    let (mut wy, mut wx): (f64, f64) = (0.0, 0.0);
    for _ in 0..cfg.samples.identity_polys {
        let d = rng.gen_range(0..=cfg.samples.identity_max_degree);
        let p = random_poly(&mut rng, d);
        let scale = |q: &BivariatePoly| q.max_abs_coeff().max(1.0);
        let ry = w.multiply(&p.partial(Axis::Y).pullback_symmetric());
        let ly = p.pullback_derivative_y();
        wy = wy.max(ly.max_coeff_diff(&ry) / scale(&ry));
        let rx = w.multiply(&p.partial(Axis::X).pullback_symmetric());
        let lx = p.pullback_derivative_x();
        wx = wx.max(lx.max_coeff_diff(&rx) / scale(&rx));
    }
    m.put("y_identity_max_coeff_diff", wy);
    m.put("x_identity_max_coeff_diff", wx);
    let tol = cfg.tolerances.identity_coeff;
    m.check(wy <= tol, || format!("y identity off by {wy:e}"));
    m.check(wx <= tol, || format!("x identity off by {wx:e}"));
    Ok(())
}

fn sharpness_bound(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let opts = cfg.norm_options();
    let indices: Vec<usize> = (1..=cfg.samples.sharpness_max_index).collect();
    let t = cfg.tolerances;
    for (kind, label, cusp_scale, bound_scale) in [(FamilyKind::Pk, "pk", 0.25, 0.25), (FamilyKind::Qk, "qk", 1.0, 1.0)] {
        let rows = sweep_extremal(&ExtremalSweep::new(kind, indices.clone(), PNorm::Infinity), &opts)?;
        let mut cusp_err: f64 = 0.0;
        let mut sup_excess = f64::NEG_INFINITY;
        let mut min_ratio_over_bound = f64::INFINITY;
        for r in &rows {
            let k = r.index as f64;
            cusp_err = cusp_err.max(rel(r.cusp_derivative, cusp_scale * k.powi(5)));
            sup_excess = sup_excess.max(r.norm / k - 1.0);
            min_ratio_over_bound = min_ratio_over_bound.min(r.ratio / (bound_scale * k.powi(4)));
        }
        m.put(&format!("{label}_cusp_max_rel_err"), cusp_err);
        m.put(&format!("{label}_max_sup_over_k_minus_1"), sup_excess);
        m.put(&format!("{label}_min_ratio_over_bound"), min_ratio_over_bound);
        m.check(cusp_err <= t.cusp_rel, || format!("{label} cusp derivative off by {cusp_err:e}"));
        m.check(sup_excess <= t.sup_slack, || format!("{label} grid sup exceeds k by {sup_excess:e}"));
        m.check(min_ratio_over_bound >= 1.0 / (1.0 + t.sup_slack), || {
            format!("{label} ratio falls below its bound: {min_ratio_over_bound}")
        });
    }
    Ok(())
}

fn sharpness_fit(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let w = cfg.fits.sharpness;
    let sweep = ExtremalSweep::new(FamilyKind::Pk, w.indices(), PNorm::Infinity);
    let opts = cfg.norm_options();
    let rows = sweep_extremal(&sweep, &opts)?;
    let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.degree, r.ratio)).collect();
    m.check_fit("pk", &pts, &w, cfg.tolerances.fit_drop_delta)?;
    // the same sweep on a grid of twice the density
    let fine = NormOptions { grid_density: 2 * opts.grid_density, ..opts };
    let fine_rows = sweep_extremal(&sweep, &fine)?;
    let coarse_slope = fit_extremal(&rows)?.slope;
    let fine_slope = fit_extremal(&fine_rows)?.slope;
    let slope_delta = (coarse_slope - fine_slope).abs();
    let point_delta = rows.iter().zip(&fine_rows).map(|(a, b)| rel(a.ratio, b.ratio)).fold(0.0, f64::max);
    m.put("pk_slope_doubled_density", fine_slope);
    m.put("grid_slope_delta", slope_delta);
    m.put("grid_max_ratio_rel_change", point_delta);
    m.check(slope_delta < cfg.tolerances.grid_slope_delta, || format!("slope moves {slope_delta:.4} when grid density doubles"));
    m.check(point_delta <= cfg.tolerances.grid_point_rel, || {
        format!("sup-norm ratios move by {point_delta:.3e} when grid density doubles")
    });
    Ok(())
}

fn factor_values(points: &[FactorPoint]) -> Vec<(usize, f64)> {
    points.iter().map(|p| (p.n, p.value)).collect()
}

fn nondecreasing(points: &[FactorPoint]) -> bool {
    points.windows(2).all(|w| w[1].value >= w[0].value * (1.0 - 1e-12))
}

fn koornwinder_exponent(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let w = cfg.fits.koornwinder;
    let pts = sweep_factor(&SweepConfig::new(Domain::Koornwinder, Axis::Y, w.indices())?)?;
    m.put("factors", pts.iter().map(|p| p.value).collect::<Vec<_>>());
    m.check_fit("omega_y", &factor_values(&pts), &w, cfg.tolerances.fit_drop_delta)?;
    m.check(nondecreasing(&pts), || "factors are not nondecreasing in n".into());
    Ok(())
}

fn simplex_exponent(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let w = cfg.fits.simplex;
    for (axis, key) in [(Axis::X, "simplex_u"), (Axis::Y, "simplex_v")] {
        let pts = sweep_factor(&SweepConfig::new(Domain::SimplexWeighted, axis, w.indices())?)?;
        m.check_fit(key, &factor_values(&pts), &w, cfg.tolerances.fit_drop_delta)?;
    }
    Ok(())
}

fn schur(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let s0 = l2_schur_factor(0)?.value;
    m.put("schur_0", s0);
    let err = (s0 - (5.0f64 / 6.0).sqrt()).abs();
    m.check(err <= cfg.tolerances.schur_zero_abs, || format!("schur(0) off by {err:e}"));
    let w = cfg.fits.schur;
    let pts = sweep_schur(&w.indices())?;
    m.check_fit("schur", &factor_values(&pts), &w, cfg.tolerances.fit_drop_delta)?;
    Ok(())
}

fn delta_l(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let d = cfg.delta_l;
    let w = cfg.fits.delta_l;
    let sweep = ExtremalSweep::new(FamilyKind::Wn, w.indices(), PNorm::Finite(d.p)).with_wn(d.alpha, d.l);
    let rows = sweep_extremal(&sweep, &cfg.norm_options())?;
    let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.degree, r.ratio)).collect();
    m.check_fit("wn", &pts, &w, cfg.tolerances.fit_drop_delta)?;
    Ok(())
}

fn bernoulli(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9);
    let mut violations = 0usize;
    for l in [1, 3, 5] {
        for _ in 0..cfg.samples.bernoulli_points {
            let x: f64 = rng.gen_range(0.0..=1.0);
            let (lo, mid, hi) = bernoulli_sandwich(x, l);
            // one ulp of slack for the l = 1 case where all three coincide
            let slack = 4.0 * f64::EPSILON * hi.abs().max(1e-300);
            if lo > mid + slack || mid > hi + slack {
                violations += 1;
            }
        }
    }
    m.put("violations", violations as u64);
    m.check(violations == 0, || format!("{violations} sandwich violations"));
    Ok(())
}

fn oracle(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let tol = cfg.tolerances.oracle_rel;
    let opts = cfg.norm_options();
    let domains = [Domain::Koornwinder, Domain::SimplexWeighted, Domain::DeltaL { l: cfg.delta_l.l }];
    let (mut eig, mut wit): (f64, f64) = (0.0, 0.0);
    for domain in domains {
        for axis in [Axis::X, Axis::Y] {
            for n in 1..=cfg.samples.oracle_max_degree {
                let a = l2_markov_factor(n, axis, domain)?.value;
                let b = l2_markov_factor_dense(n, axis, domain)?;
                eig = eig.max(rel(a, b));
                let sol = l2_markov_solution(n, axis, domain, None)?;
                let r = markov_ratio_with(&sol.witness(), axis, NormSpec::new(PNorm::Finite(2.0), domain), &opts)?;
                wit = wit.max(rel(r, sol.point.value));
            }
        }
    }
    for n in 0..=cfg.samples.oracle_max_degree {
        eig = eig.max(rel(l2_schur_factor(n)?.value, l2_schur_factor_dense(n)?));
    }
    m.put("eigen_max_rel_diff", eig);
    m.put("witness_max_rel_diff", wit);
    m.check(eig <= tol, || format!("power iteration vs dense oracle differ by {eig:e}"));
    m.check(wit <= tol, || format!("witness ratio differs by {wit:e}"));
    Ok(())
}

/// CSV bytes of a fixed factor sweep and extremal sweep.
fn determinism_probe(cfg: &LabConfig) -> Result<String> {
    let pts = sweep_factor(&SweepConfig::new(Domain::Koornwinder, Axis::Y, (1..=10).collect())?)?;
    let rows = sweep_extremal(&ExtremalSweep::new(FamilyKind::Pk, (1..=10).collect(), PNorm::Infinity), &cfg.norm_options())?;
    Ok(factor_csv(&pts, Some(&fit_factors(&pts[3..])?)) + &extremal_csv(&rows, Some(&fit_extremal(&rows)?)))
}

fn determinism(cfg: &LabConfig, m: &mut Measured) -> Result<()> {
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
        pool.install(|| determinism_probe(cfg))
    };
    let one = run(1)?;
    let eight = run(8)?;
    m.put("bytes", one.len() as u64);
    m.put("identical", json!(one == eight));
    m.check(one == eight, || "1-thread and 8-thread sweeps differ".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_examples() {
        let pts: Vec<(usize, f64)> = [2usize, 4, 8, 16].iter().map(|&n| (n, (n as f64).powi(4))).collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 4.0).abs() < 1e-12);
        assert_eq!(f.n_range, (2, 16));
        let flat: Vec<(usize, f64)> = (1..6).map(|n| (n, 7.0)).collect();
        assert!(fit_exponent(&flat).unwrap().slope.abs() < 1e-12);
        let wobble: Vec<(usize, f64)> =
            (2..=30).map(|n| (n, (n as f64).powi(4) * (1.0 + 0.01 * (n as f64).sin()))).collect();
        assert!((fit_exponent(&wobble).unwrap().slope - 4.0).abs() < 0.05);
        assert!(fit_exponent(&pts[..2]).is_err());
        assert!(fit_exponent(&[(1, 1.0), (2, 0.0), (3, 1.0)]).is_err());
    }

    #[test]
    fn sweep_rejects_unsorted_degrees() {
        assert!(SweepConfig::new(Domain::Koornwinder, Axis::Y, vec![3, 2, 4]).is_err());
        assert!(SweepConfig::new(Domain::Koornwinder, Axis::Y, vec![2, 2]).is_err());
    }

    #[test]
    fn single_point_sweep_cannot_be_fitted() {
        let pts = sweep_factor(&SweepConfig::new(Domain::Koornwinder, Axis::Y, vec![3]).unwrap()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(fit_factors(&pts).is_err());
    }

    #[test]
    fn extremal_examples() {
        let opts = NormOptions::default();
        let pk1 = sweep_extremal(&ExtremalSweep::new(FamilyKind::Pk, vec![1], PNorm::Infinity), &opts).unwrap();
        assert!((pk1[0].ratio - 0.25).abs() < 1e-12);
        let qk2 = sweep_extremal(&ExtremalSweep::new(FamilyKind::Qk, vec![2], PNorm::Infinity), &opts).unwrap();
        assert!(qk2[0].ratio >= 16.0);
        for r in sweep_extremal(&ExtremalSweep::new(FamilyKind::Pk, (1..=8).collect(), PNorm::Infinity), &opts).unwrap() {
            assert!(r.ratio >= r.expected * (1.0 - 1e-9));
            assert_eq!(r.point().method, Method::ExtremalSequence);
        }
    }

    #[test]
    fn capacity_errors() {
        let opts = NormOptions { max_nodes: 1000, ..NormOptions::default() };
        let err = sweep_extremal(&ExtremalSweep::new(FamilyKind::Pk, vec![20], PNorm::Infinity), &opts).unwrap_err();
        assert!(matches!(err, LabError::Capacity { .. }));
        let err = sweep_extremal(&ExtremalSweep::new(FamilyKind::Pk, vec![400], PNorm::Infinity), &NormOptions::default())
            .unwrap_err();
        assert!(err.is_numerical_limit());
    }

    #[test]
    fn empty_and_subset_reports() {
        let cfg = LabConfig { criteria: Some(vec![]), ..LabConfig::default() };
        let r = verify_all(&cfg);
        assert!(r.all_pass && r.criteria.is_empty());
        let cfg = LabConfig { criteria: Some(vec![9, 1]), ..LabConfig::default() };
        let r = verify_all(&cfg);
        assert_eq!(r.criteria.iter().map(|c| c.id).collect::<Vec<_>>(), vec![9, 1]);
        assert!(r.all_pass, "{}", r.to_json());
    }
}
