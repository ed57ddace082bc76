//! Error budgets for the truncated-correlogram pipeline: truncation order,
//! sample-size requirement, and the perturbation bound on the inverse.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Error;

/// Smallest p ≥ 0 with 2·C₁·ρ^{p+1}/(1−ρ) ≤ eps_t, under the decaying
/// mixing convention ‖R(k)‖_∞ ≤ C₁·ρ^{|k|}.
pub fn truncation_order(rho: f64, c1: f64, eps_t: f64) -> Result<usize, Error> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::Parameter(format!("rho must lie in (0,1), got {rho}")));
    }
    if !(c1 > 0.0) || !(eps_t > 0.0) {
        return Err(Error::Parameter("C1 and eps must be positive".into()));
    }
    let tail = |p: usize| 2.0 * c1 * rho.powi(p as i32 + 1) / (1.0 - rho);
    if tail(0) <= eps_t {
        return Ok(0);
    }
    // closed form, then a local scan to absorb rounding
    let target = (1.0 - rho) * eps_t / (2.0 * c1);
    let mut p = (target.ln() / rho.ln() - 1.0).ceil().max(0.0) as usize;
    while tail(p) > eps_t {
        p += 1;
    }
    while p > 0 && tail(p - 1) <= eps_t {
        p -= 1;
    }
    Ok(p)
}

/// Truncation-tail bound 2·C₁·ρ^{p+1}/(1−ρ) for a given order.
pub fn truncation_bound(rho: f64, c1: f64, p: usize) -> Result<f64, Error> {
    if !(rho > 0.0 && rho < 1.0) || !(c1 > 0.0) {
        return Err(Error::Parameter("need 0 < rho < 1 and C1 > 0".into()));
    }
    Ok(2.0 * c1 * rho.powi(p as i32 + 1) / (1.0 - rho))
}

/// Failure probability min(1, n²·exp(−(N−p)·m)) of the entrywise deviation
/// event at level eps1, truncation order p, dimension n.
pub fn failure_probability(n_samples: usize, eps1: f64, p: usize, n: usize, c1: f64) -> f64 {
    let m = concentration_rate(eps1, p, n, c1);
    if n_samples <= p {
        return 1.0;
    }
    ((n * n) as f64 * (-((n_samples - p) as f64) * m).exp()).min(1.0)
}

fn concentration_rate(eps1: f64, p: usize, n: usize, c1: f64) -> f64 {
    let w = (2 * p + 1) as f64;
    let quad = eps1 * eps1 / (32.0 * w * w * (n * n) as f64 * c1 * c1);
    let lin = eps1 / (8.0 * w * n as f64 * c1);
    quad.min(lin)
}

/// Smallest N with failure probability ≤ delta.
pub fn sample_bound(eps1: f64, p: usize, n: usize, c1: f64, delta: f64) -> Result<usize, Error> {
    if !(eps1 > 0.0) || !(c1 > 0.0) || n == 0 {
        return Err(Error::Parameter("eps1, C1, n must be positive".into()));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Parameter(format!("delta must lie in (0,1], got {delta}")));
    }
    // the probability clamps at 1, so delta = 1 is met by any admissible N
    if delta >= 1.0 {
        return Ok(p + 1);
    }
    let m = concentration_rate(eps1, p, n, c1);
    let need = (((n * n) as f64 / delta).ln() / m).ceil().max(1.0) as usize;
    let mut n_min = p + need;
    while failure_probability(n_min, eps1, p, n, c1) > delta {
        n_min += 1;
    }
    while n_min > p + 1 && failure_probability(n_min - 1, eps1, p, n, c1) <= delta {
        n_min -= 1;
    }
    Ok(n_min)
}

/// Eigenvalue box for the admissible model class: 0 < l ≤ |λ| ≤ L on the
/// circle, with extreme noise singular values sigma_max ≥ sigma_min > 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClassBounds {
    pub l: f64,
    pub big_l: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

/// Perturbation bound on the inverse:
/// (√n·L²σ_max²/(l⁴σ_min⁴)) · √n·eps/(l²σ_min² − √n·eps);
/// None when √n·eps ≥ l²σ_min² (vacuous).
pub fn ipsdm_error_bound(eps: f64, n: usize, class: &ClassBounds) -> Result<Option<f64>, Error> {
    if !(eps >= 0.0) || n == 0 {
        return Err(Error::Parameter("need eps ≥ 0 and n > 0".into()));
    }
    if !(class.l > 0.0 && class.big_l >= class.l && class.sigma_min > 0.0
        && class.sigma_max >= class.sigma_min)
    {
        return Err(Error::Parameter("inconsistent class bounds".into()));
    }
    let root_n = (n as f64).sqrt();
    let floor = class.l * class.l * class.sigma_min * class.sigma_min;
    let shift = root_n * eps;
    if shift >= floor {
        return Ok(None);
    }
    let lead = root_n * class.big_l * class.big_l * class.sigma_max * class.sigma_max
        / (class.l.powi(4) * class.sigma_min.powi(4));
    Ok(Some(lead * shift / (floor - shift)))
}

/// Fit ‖R(k)‖_∞ ≈ C₁·ρ^k by least squares on log-norms (lags 1..), then
/// inflate C₁ so the bound holds at every provided lag.
pub fn fit_mixing(lag_norms: &[f64]) -> Result<(f64, f64), Error> {
    let usable: Vec<(f64, f64)> = lag_norms
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| **v > 0.0)
        .map(|(k, v)| (k as f64, v.ln()))
        .collect();
    if usable.len() < 2 {
        return Err(Error::Parameter("need at least two positive lag norms beyond lag 0".into()));
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|(x, _)| x).sum();
    let sy: f64 = usable.iter().map(|(_, y)| y).sum();
    let sxx: f64 = usable.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = usable.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::Parameter("degenerate lag design".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let rho = slope.exp().clamp(1e-6, 1.0 - 1e-6);
    let mut c1 = ((sy - slope * sx) / n).exp();
    for (k, &v) in lag_norms.iter().enumerate() {
        let needed = v / rho.powi(k as i32);
        if needed > c1 {
            c1 = needed;
        }
    }
    Ok((rho, c1))
}

/// Combined budget: split eps into truncation and estimation shares, then
/// derive the required truncation order and sample count.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBudget {
    pub rho: f64,
    pub c1: f64,
    pub eps: f64,
    pub eps1: f64,
    pub p_min: usize,
    pub n_min: usize,
    pub confidence: f64,
    pub class_bounds: ClassBounds,
}

impl ErrorBudget {
    pub fn build(
        rho: f64,
        c1: f64,
        eps: f64,
        eps1: Option<f64>,
        n: usize,
        delta: f64,
        class_bounds: ClassBounds,
    ) -> Result<Self, Error> {
        let eps1 = eps1.unwrap_or(eps / 2.0);
        if !(eps1 > 0.0 && eps1 < eps) {
            return Err(Error::Parameter(format!("need 0 < eps1 < eps, got {eps1} vs {eps}")));
        }
        let p_min = truncation_order(rho, c1, eps - eps1)?;
        let n_min = sample_bound(eps1, p_min, n, c1, delta)?;
        Ok(ErrorBudget { rho, c1, eps, eps1, p_min, n_min, confidence: 1.0 - delta, class_bounds })
    }
}

/// Convenience: infinity norms of a lag sequence.
pub fn lag_norms(r: &[DMatrix<f64>]) -> Vec<f64> {
    r.iter().map(|m| m.amax()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_order_textbook_case() {
        // ρ = 0.5, C₁ = 1, ε = 0.1 → 0.5^{p+1} ≤ 0.025 → p = 5
        assert_eq!(truncation_order(0.5, 1.0, 0.1).unwrap(), 5);
    }

    #[test]
    fn loose_target_needs_no_truncation() {
        // tail at p = 0 is 2·C₁·ρ/(1−ρ) = 2
        assert_eq!(truncation_order(0.5, 1.0, 2.0).unwrap(), 0);
        assert_eq!(truncation_order(1e-9, 1.0, 0.5).unwrap(), 0);
    }

    #[test]
    fn truncation_order_is_tight() {
        let p = truncation_order(0.8, 3.0, 0.01).unwrap();
        assert!(truncation_bound(0.8, 3.0, p).unwrap() <= 0.01);
        assert!(truncation_bound(0.8, 3.0, p - 1).unwrap() > 0.01);
    }

    #[test]
    fn sample_bound_meets_delta_and_is_minimal() {
        let n_min = sample_bound(0.5, 5, 10, 1.0, 0.05).unwrap();
        assert!(failure_probability(n_min, 0.5, 5, 10, 1.0) <= 0.05);
        assert!(failure_probability(n_min - 1, 0.5, 5, 10, 1.0) > 0.05);
    }

    #[test]
    fn delta_one_is_vacuous() {
        assert_eq!(sample_bound(0.5, 5, 10, 1.0, 1.0).unwrap(), 6);
    }

    #[test]
    fn doubling_eps1_quarters_the_excess() {
        // pick a regime where the quadratic branch is active
        let p = 5;
        let (n1, n2) = (
            sample_bound(0.05, p, 10, 1.0, 0.05).unwrap(),
            sample_bound(0.1, p, 10, 1.0, 0.05).unwrap(),
        );
        let ratio = (n1 - p) as f64 / (n2 - p) as f64;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn error_bound_limits() {
        let class = ClassBounds { l: 1.0, big_l: 2.0, sigma_max: 1.5, sigma_min: 1.0 };
        assert_eq!(ipsdm_error_bound(0.0, 4, &class).unwrap(), Some(0.0));
        // √n·eps = floor/2 → bound = √n L² σ_max² / (l⁴ σ_min⁴)
        let n = 4;
        let eps = 0.5 * 1.0 / (n as f64).sqrt();
        let b = ipsdm_error_bound(eps, n, &class).unwrap().unwrap();
        let expect = (n as f64).sqrt() * 4.0 * 2.25;
        assert!((b - expect).abs() < 1e-12, "{b} vs {expect}");
        // at or past the floor: vacuous
        assert_eq!(ipsdm_error_bound(0.51, n, &class).unwrap(), None);
    }

    #[test]
    fn fit_recovers_exact_decay() {
        let rho: f64 = 0.6;
        let c1 = 2.5;
        let norms: Vec<f64> = (0..8).map(|k| c1 * rho.powi(k)).collect();
        let (r, c) = fit_mixing(&norms).unwrap();
        assert!((r - rho).abs() < 1e-9);
        assert!((c - c1).abs() / c1 < 1e-9);
    }

    #[test]
    fn fitted_bound_dominates_all_lags() {
        let norms = vec![3.0, 1.0, 0.7, 0.2, 0.18, 0.02];
        let (rho, c1) = fit_mixing(&norms).unwrap();
        for (k, &v) in norms.iter().enumerate() {
            assert!(v <= c1 * rho.powi(k as i32) * (1.0 + 1e-12), "lag {k}");
        }
    }

    #[test]
    fn budget_combines_consistently() {
        let class = ClassBounds { l: 0.5, big_l: 3.0, sigma_max: 1.2, sigma_min: 0.8 };
        let b = ErrorBudget::build(0.5, 1.0, 0.2, None, 10, 0.05, class).unwrap();
        assert_eq!(b.eps1, 0.1);
        assert!(truncation_bound(b.rho, b.c1, b.p_min).unwrap() <= b.eps - b.eps1);
        assert!(failure_probability(b.n_min, b.eps1, b.p_min, 10, b.c1) <= 0.05);
        assert!((b.confidence - 0.95).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(truncation_order(1.0, 1.0, 0.1).is_err());
        assert!(truncation_order(0.5, -1.0, 0.1).is_err());
        assert!(sample_bound(0.5, 5, 10, 1.0, 0.0).is_err());
        let class = ClassBounds { l: 0.0, big_l: 1.0, sigma_max: 1.0, sigma_min: 1.0 };
        assert!(ipsdm_error_bound(0.1, 4, &class).is_err());
    }
}
