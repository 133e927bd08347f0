//! Saddle point and singular series of the ternary friable asymptotic for
//! `X1 X2 (X1 + X2)`, and Mertens-type sums over sifted squarefree
//! integers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{floor_power, gauss_integrate, gauss_legendre, snapped_power, NeumaierSum};
use crate::sieve::{enumerate_sifted_squarefree, primes_up_to, psi_count};

/// Width of the bisection bracket before the Newton polish.
const BISECTION_WIDTH: f64 = 1e-12;
const SADDLE_BRACKET: (f64, f64) = (1e-6, 8.0);
/// Exclusion radius around the pole `alpha = 1/3` of the local factors.
pub const SINGULAR_RADIUS: f64 = 1e-6;
pub const DEFAULT_P_MAX: u64 = 1_000_000;
/// Most terms a Möbius sum may enumerate.
pub const MAX_MOBIUS_TERMS: usize = 100_000_000;

/// Root `alpha(N, y)` of `sum_{p <= y} log p / (p^alpha - 1) = log N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddlePoint {
    pub n: u64,
    pub y: f64,
    pub alpha: f64,
    /// `|LHS(alpha) - log N|`.
    pub residual: f64,
}

struct SaddleEquation {
    logs: Vec<f64>,
    target: f64,
}

impl SaddleEquation {
    fn new(n: u64, y: f64) -> Self {
        let logs = primes_up_to(y.floor() as u64)
            .into_iter()
            .map(|p| (p as f64).ln())
            .collect();
        SaddleEquation {
            logs,
            target: (n as f64).ln(),
        }
    }

    /// `LHS(alpha) - log N`.
    fn value(&self, alpha: f64) -> f64 {
        let mut s: NeumaierSum = self
            .logs
            .iter()
            .map(|&l| l / (alpha * l).exp_m1())
            .collect();
        s.add(-self.target);
        s.value()
    }

    fn derivative(&self, alpha: f64) -> f64 {
        self.logs
            .iter()
            .map(|&l| {
                let e = (alpha * l).exp_m1();
                -l * l * (e + 1.0) / (e * e)
            })
            .collect::<NeumaierSum>()
            .value()
    }
}

/// Solves the saddle-point equation by bisection on `(1e-6, 8]` followed by
/// one Newton step.
pub fn solve_saddle_alpha(n: u64, y: f64) -> Result<SaddlePoint> {
    if n < 2 {
        return Err(Error::arg("saddle point requires N >= 2"));
    }
    if !(y >= 2.0) {
        return Err(Error::arg(format!("saddle point requires y >= 2, got {y}")));
    }
    let eq = SaddleEquation::new(n, y);
    let (mut lo, mut hi) = SADDLE_BRACKET;
    let (g_lo, g_hi) = (eq.value(lo), eq.value(hi));
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::numeric(format!(
            "no sign change on ({lo}, {hi}]: LHS - log N = {g_lo:e} .. {g_hi:e}"
        )));
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if eq.value(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut alpha = 0.5 * (lo + hi);
    let mut residual = eq.value(alpha).abs();
    let polished = alpha - eq.value(alpha) / eq.derivative(alpha);
    if polished.is_finite() && (lo - BISECTION_WIDTH..=hi + BISECTION_WIDTH).contains(&polished) {
        let r = eq.value(polished).abs();
        if r <= residual {
            alpha = polished;
            residual = r;
        }
    }
    Ok(SaddlePoint {
        n,
        y,
        alpha,
        residual,
    })
}

/// `LHS(alpha) = sum_{p <= y} log p / (p^alpha - 1)`.
pub fn saddle_lhs(alpha: f64, y: f64) -> f64 {
    SaddleEquation::new(1, y).value(alpha)
}

/// Truncated Euler product with a bracket for the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSeries {
    /// Product over primes up to `p_max`.
    pub value: f64,
    /// Bound on `sum_{p > p_max} 1/(p-1)^2`.
    pub tail_bound: f64,
    /// `value * (1 - tail_bound)`.
    pub lower: f64,
    /// `value`.
    pub upper: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::arg(format!("alpha = {alpha} outside (0, 2]")));
    }
    Ok(())
}

/// Local factor of the first product at the prime `p`.
fn local_factor(p: f64, alpha: f64) -> f64 {
    let pa = p.powf(alpha);
    let num = (p - pa).powi(3);
    let den = p * (p - 1.0) * (p - 1.0) * ((3.0 * alpha - 1.0) * p.ln()).exp_m1();
    1.0 + num / den
}

/// `S0(alpha, y)` truncated at `p_max`.
pub fn singular_series_s0(alpha: f64, y: f64, p_max: u64) -> Result<SingularSeries> {
    check_alpha(alpha)?;
    if !(y >= 2.0) {
        return Err(Error::arg(format!("y = {y} must be at least 2")));
    }
    if (p_max as f64) < y {
        return Err(Error::arg(format!("p_max = {p_max} below y = {y}")));
    }
    if (alpha - 1.0 / 3.0).abs() < SINGULAR_RADIUS {
        return Err(Error::Singularity(format!(
            "alpha = {alpha} within {SINGULAR_RADIUS} of the pole at 1/3"
        )));
    }
    let mut log_abs = NeumaierSum::new();
    let mut negative = false;
    for p in primes_up_to(p_max) {
        let pf = p as f64;
        let factor = if pf <= y {
            local_factor(pf, alpha)
        } else {
            1.0 - 1.0 / ((pf - 1.0) * (pf - 1.0))
        };
        if factor == 0.0 {
            return Ok(SingularSeries {
                value: 0.0,
                tail_bound: 2.0 / p_max as f64,
                lower: 0.0,
                upper: 0.0,
            });
        }
        negative ^= factor < 0.0;
        log_abs.add(factor.abs().ln());
    }
    let magnitude = log_abs.value().exp();
    let value = if negative { -magnitude } else { magnitude };
    let tail_bound = 2.0 / p_max as f64;
    let other = value * (1.0 - tail_bound);
    Ok(SingularSeries {
        value,
        tail_bound,
        lower: other.min(value),
        upper: other.max(value),
    })
}

/// Terms of `(1 - w)^(alpha - 1)` subtracted before quadrature.
const SUBTRACTED_TERMS: usize = 12;
const S1_MIN_NODES: usize = 64;
const S1_MAX_NODES: usize = 1 << 14;

/// `S1(alpha) = int_0^1 int_0^(1-t1) alpha^3 (t1 t2 (t1 + t2))^(alpha-1) dt2 dt1`.
///
/// The substitution `t1 = r w, t2 = r (1 - w)` maps the simplex onto the
/// unit square and separates the integrand into
/// `alpha^3 r^(3 alpha - 2) (w (1 - w))^(alpha - 1)`. The radial factor is a
/// pure power and integrates exactly; the angular factor is symmetric about
/// `1/2`, and its endpoint singularity `w^(alpha - 1)` is handled by
/// subtracting the leading binomial terms of `(1 - w)^(alpha - 1)` and
/// integrating them in closed form. The remainder is smooth enough for
/// Gauss-Legendre, doubled from 64 nodes until the change is below `tol`.
/// Diverges for `alpha <= 1/3`.
pub fn singular_series_s1(alpha: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(tol >= 1e-12) {
        return Err(Error::arg(format!("tol = {tol} below 1e-12")));
    }
    if alpha <= 1.0 / 3.0 {
        return Err(Error::numeric(format!(
            "S1 diverges for alpha = {alpha} <= 1/3"
        )));
    }
    let a = alpha - 1.0;
    let mut c = [0.0; SUBTRACTED_TERMS + 1];
    c[0] = 1.0;
    for j in 0..SUBTRACTED_TERMS {
        c[j + 1] = c[j] * (j as f64 - a) / (j as f64 + 1.0);
    }
    let closed: f64 = c
        .iter()
        .enumerate()
        .map(|(j, &cj)| cj * 0.5f64.powf(alpha + j as f64) / (alpha + j as f64))
        .sum();
    let remainder = |w: f64| {
        let poly = c.iter().rev().fold(0.0, |acc, &cj| acc * w + cj);
        w.powf(a) * ((1.0 - w).powf(a) - poly)
    };
    let scale = alpha.powi(3) / (3.0 * alpha - 1.0);
    let angular = |nodes: usize| {
        let (x, w) = gauss_legendre(nodes);
        2.0 * (closed + gauss_integrate(remainder, 0.0, 0.5, &x, &w))
    };
    let mut nodes = S1_MIN_NODES;
    let mut prev = scale * angular(nodes);
    while nodes < S1_MAX_NODES {
        nodes *= 2;
        let next = scale * angular(nodes);
        if (next - prev).abs() <= tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::numeric(format!(
        "S1({alpha}) did not converge to {tol:e} with {S1_MAX_NODES} nodes"
    )))
}

/// Prediction `S0(alpha, y) S1(alpha) Psi(N, y)^3 / N` for the number of
/// `(n1, n2)` with `n1, n2 >= 1`, `n1 + n2 <= N` and `n1 n2 (n1 + n2)`
/// `y`-friable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarperPrediction {
    pub saddle: SaddlePoint,
    pub s0: SingularSeries,
    pub s1: f64,
    pub psi: u64,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn harper_prediction(n: u64, y: f64) -> Result<HarperPrediction> {
    if n < 2 {
        return Err(Error::arg("N must be at least 2"));
    }
    if !(y >= 2.0 && y <= n as f64) {
        return Err(Error::arg(format!("y = {y} outside [2, N]")));
    }
    let saddle = solve_saddle_alpha(n, y)?;
    let p_max = (y.floor() as u64).max(DEFAULT_P_MAX);
    let s0 = singular_series_s0(saddle.alpha, y, p_max)?;
    let s1 = singular_series_s1(saddle.alpha, 1e-12)?;
    let psi = psi_count(n, y)?;
    let base = s1 * (psi as f64).powi(3) / n as f64;
    Ok(HarperPrediction {
        saddle,
        s0,
        s1,
        psi,
        value: s0.value * base,
        lower: s0.lower * base,
        upper: s0.upper * base,
    })
}

pub(crate) fn sifted_terms(limit: u64, y: f64) -> Result<Vec<(u64, i8)>> {
    if limit as u128 > 64 * MAX_MOBIUS_TERMS as u128 {
        return Err(Error::resource(format!(
            "Möbius enumeration up to {limit} is beyond the work budget"
        )));
    }
    let terms = enumerate_sifted_squarefree(limit, y)?;
    if terms.len() > MAX_MOBIUS_TERMS {
        return Err(Error::resource(format!(
            "{} sifted terms exceed the budget of {MAX_MOBIUS_TERMS}",
            terms.len()
        )));
    }
    Ok(terms)
}

/// `sum_{k <= N, P-(k) > N^(1/u)} mu(k) / k`.
pub fn sifted_mobius_sum(n: u64, u: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg("N must be at least 2"));
    }
    if !(u >= 1.0 && u.is_finite()) {
        return Err(Error::arg(format!("u = {u} must be at least 1")));
    }
    let y = snapped_power(n as f64, 1.0 / u);
    let terms = sifted_terms(n, y)?;
    Ok(terms
        .iter()
        .rev()
        .map(|&(k, m)| m as f64 / k as f64)
        .collect::<NeumaierSum>()
        .value())
}

fn check_tau(n: u64, tau: f64) -> Result<()> {
    let lo = 1.0 / (n as f64).ln();
    if !(tau > lo && tau < 1.0) {
        return Err(Error::arg(format!("tau = {tau} outside (1/log N, 1) = ({lo}, 1)")));
    }
    Ok(())
}

/// `sum mu(k)^2 / k` over `N^(1-tau) < k <= N` with `P-(k) > N^(1/u)`.
pub fn sifted_mu2_tail(n: u64, u: f64, tau: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg("N must be at least 2"));
    }
    check_tau(n, tau)?;
    if !(u >= 1.0) || tau * u >= 1.0 {
        return Err(Error::arg(format!("need u >= 1 and tau * u < 1, got u = {u}, tau = {tau}")));
    }
    let y = snapped_power(n as f64, 1.0 / u);
    let cut = floor_power(n as f64, 1.0 - tau);
    let terms = sifted_terms(n, y)?;
    Ok(terms
        .iter()
        .rev()
        .filter(|&&(k, _)| k > cut)
        .map(|&(k, _)| 1.0 / k as f64)
        .collect::<NeumaierSum>()
        .value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saddle_closed_form_root() {
        let s = solve_saddle_alpha(2, 2.0).unwrap();
        assert!((s.alpha - 1.0).abs() < 1e-12);
        assert!(s.residual <= 1e-10 * 2f64.ln());
    }

    #[test]
    fn saddle_residual_small() {
        for (n, y) in [(10_000u64, 100.0), (1_000_000, 50.0), (1 << 40, 1000.0)] {
            let s = solve_saddle_alpha(n, y).unwrap();
            let log_n = (n as f64).ln();
            assert!((saddle_lhs(s.alpha, y) - log_n).abs() <= 1e-10 * log_n);
            assert!(s.residual <= 1e-10 * log_n);
        }
    }

    #[test]
    fn saddle_errors() {
        assert!(solve_saddle_alpha(1, 10.0).is_err());
        assert!(solve_saddle_alpha(100, 1.5).is_err());
        // LHS(1e-6) ~ 1e6 * pi(y) bounds log N from above
        assert!(matches!(solve_saddle_alpha(u64::MAX, 2.0), Ok(_)));
    }

    #[test]
    fn s0_unit_alpha() {
        let s = singular_series_s0(1.0, 100.0, 100).unwrap();
        assert_eq!(s.value, 1.0);
        let s = singular_series_s0(1.0, 10.0, 1000).unwrap();
        let direct: f64 = primes_up_to(1000)
            .into_iter()
            .filter(|&p| p > 10)
            .map(|p| 1.0 - 1.0 / ((p - 1) as f64).powi(2))
            .product();
        assert!((s.value - direct).abs() < 1e-14);
        assert!(s.lower < s.upper);
    }

    #[test]
    fn s0_singularity_and_ranges() {
        assert!(matches!(
            singular_series_s0(1.0 / 3.0, 10.0, 100),
            Err(Error::Singularity(_))
        ));
        assert!(singular_series_s0(0.0, 10.0, 100).is_err());
        assert!(singular_series_s0(2.5, 10.0, 100).is_err());
        assert!(singular_series_s0(1.0, 10.0, 5).is_err());
    }

    #[test]
    fn s1_exact_points() {
        assert!((singular_series_s1(1.0, 1e-12).unwrap() - 0.5).abs() <= 1e-12);
        assert!((singular_series_s1(2.0, 1e-12).unwrap() - 4.0 / 15.0).abs() <= 1e-12);
        assert!(singular_series_s1(0.3, 1e-10).is_err());
        assert!(singular_series_s1(1.0, 1e-14).is_err());
    }

    #[test]
    fn mobius_sum_edge_cases() {
        assert_eq!(sifted_mobius_sum(1000, 1.0).unwrap(), 1.0);
        // N = 100, u = 2: k = 1 and the primes in (10, 100]
        let s = sifted_mobius_sum(100, 2.0).unwrap();
        let primes: f64 = primes_up_to(100)
            .into_iter()
            .filter(|&p| p > 10)
            .map(|p| 1.0 / p as f64)
            .sum();
        assert!((s - (1.0 - primes)).abs() < 1e-15);
        assert!(sifted_mobius_sum(1, 2.0).is_err());
        assert!(sifted_mobius_sum(100, 0.5).is_err());
    }

    #[test]
    fn mu2_tail_edge_cases() {
        assert_eq!(sifted_mu2_tail(10_000, 1.0, 0.2).unwrap(), 0.0);
        assert!(sifted_mu2_tail(10_000, 2.0, 0.05).is_err());
        assert!(sifted_mu2_tail(10_000, 2.0, 0.6).is_err());
    }
}
