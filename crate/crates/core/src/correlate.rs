//! Balanced friable functions, the truncated Möbius decomposition
//! `h = h_tau + (rest)`, and correlations with explicit phase sequences.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::sifted_terms;
use crate::dickman::rho;
use crate::error::{Error, Result};
use crate::forms::{validate_domain, ConvexBody, FormSystem};
use crate::gowers::SequenceFn;
use crate::numeric::{floor_power, frac_mul, par_sum_complex, snapped_power, unit_phase, NeumaierSum};
use crate::sieve::FactorSieve;

pub const MAX_U: f64 = 20.0;
pub const DEFAULT_EPSILON: f64 = 0.5;
/// Lattice points a subset decomposition may visit.
pub const MAX_DECOMPOSITION_POINTS: u64 = 10_000_000;
pub const MAX_DECOMPOSITION_FORMS: usize = 12;
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;
pub const SILVER: f64 = std::f64::consts::SQRT_2 - 1.0;

fn check_n_u(n: u64, u: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::arg("N must be at least 2"));
    }
    if !(1.0..=MAX_U).contains(&u) {
        return Err(Error::arg(format!("u = {u} outside [1, {MAX_U}]")));
    }
    Ok(())
}

/// `h(n) = 1_{S(N^(1/u))}(n) - rho(u)` for `1 <= n <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedFriable {
    n: u64,
    u: f64,
    y: f64,
    rho: f64,
    friable: Vec<bool>,
}

pub fn balanced_friable(n: u64, u: f64) -> Result<BalancedFriable> {
    check_n_u(n, u)?;
    let y = snapped_power(n as f64, 1.0 / u);
    let sieve = FactorSieve::new(1, n)?;
    let friable = sieve.lpf_table().iter().map(|&p| p as f64 <= y).collect();
    Ok(BalancedFriable {
        n,
        u,
        y,
        rho: rho(u)?,
        friable,
    })
}

impl BalancedFriable {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn is_friable(&self, n: u64) -> bool {
        self.friable[(n - 1) as usize]
    }

    pub fn value(&self, n: u64) -> f64 {
        f64::from(u8::from(self.is_friable(n))) - self.rho
    }

    /// Values at `n = 1, ..., N`.
    pub fn values(&self) -> Vec<f64> {
        (1..=self.n).map(|n| self.value(n)).collect()
    }

    /// `Psi(N, N^(1/u))`.
    pub fn friable_count(&self) -> u64 {
        self.friable.iter().filter(|&&b| b).count() as u64
    }

    /// `Psi(N, N^(1/u)) - N rho(u)`.
    pub fn sum(&self) -> f64 {
        self.friable_count() as f64 - self.n as f64 * self.rho
    }

    /// The sequence on `{0, ..., N}` with `h(0) = 0`.
    pub fn to_sequence(&self) -> Result<SequenceFn> {
        let mut v = Vec::with_capacity(self.n as usize + 1);
        v.push(0.0);
        v.extend(self.values());
        SequenceFn::from_real(&v, format!("balanced-friable N={} u={}", self.n, self.u))
    }
}

/// Explicit polynomial and bracket phases `n -> e(P(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseSequence {
    Constant,
    /// `e(theta n + beta)`
    Linear { theta: f64, beta: f64 },
    /// `e(theta2 n^2 + theta1 n + theta0)`
    Quadratic { theta2: f64, theta1: f64, theta0: f64 },
    /// `e(theta n floor(phi n))`
    Bracket { theta: f64, phi: f64 },
}

impl PhaseSequence {
    pub fn golden() -> Self {
        PhaseSequence::Linear {
            theta: GOLDEN,
            beta: 0.0,
        }
    }

    pub fn silver() -> Self {
        PhaseSequence::Linear {
            theta: SILVER,
            beta: 0.0,
        }
    }

    pub fn golden_quadratic() -> Self {
        PhaseSequence::Quadratic {
            theta2: GOLDEN,
            theta1: 0.0,
            theta0: 0.0,
        }
    }

    pub fn golden_bracket() -> Self {
        PhaseSequence::Bracket {
            theta: GOLDEN,
            phi: GOLDEN,
        }
    }

    /// Nilpotency step of the phase.
    pub fn step(&self) -> u32 {
        match self {
            PhaseSequence::Constant => 0,
            PhaseSequence::Linear { .. } => 1,
            PhaseSequence::Quadratic { .. } | PhaseSequence::Bracket { .. } => 2,
        }
    }

    /// Lipschitz constant of `x -> e(x)` on the circle.
    pub fn lipschitz(&self) -> f64 {
        std::f64::consts::TAU
    }

    /// Phase `P(n)` reduced mod 1.
    pub fn phase(&self, n: u64) -> f64 {
        let m = n as f64;
        match *self {
            PhaseSequence::Constant => 0.0,
            PhaseSequence::Linear { theta, beta } => frac_mul(theta, m) + beta,
            PhaseSequence::Quadratic {
                theta2,
                theta1,
                theta0,
            } => frac_mul(frac_mul(theta2, m), m) + frac_mul(theta1, m) + theta0,
            PhaseSequence::Bracket { theta, phi } => frac_mul(theta, m * (phi * m).floor()),
        }
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        match self {
            PhaseSequence::Constant => Complex64::new(1.0, 0.0),
            _ => unit_phase(self.phase(n)),
        }
    }
}

impl fmt::Display for PhaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseSequence::Constant => write!(f, "constant"),
            PhaseSequence::Linear { theta, beta } => write!(f, "linear:{theta},{beta}"),
            PhaseSequence::Quadratic {
                theta2,
                theta1,
                theta0,
            } => write!(f, "quadratic:{theta2},{theta1},{theta0}"),
            PhaseSequence::Bracket { theta, phi } => write!(f, "bracket:{theta},{phi}"),
        }
    }
}

impl FromStr for PhaseSequence {
    type Err = Error;

    /// Presets `constant`, `golden`, `silver`, `golden-quadratic`,
    /// `golden-bracket`, or `linear:t,b`, `quadratic:a,b,c`, `bracket:t,p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "constant" => return Ok(PhaseSequence::Constant),
            "golden" => return Ok(Self::golden()),
            "silver" | "sqrt2" => return Ok(Self::silver()),
            "golden-quadratic" => return Ok(Self::golden_quadratic()),
            "golden-bracket" => return Ok(Self::golden_bracket()),
            _ => {}
        }
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::arg(format!("unknown phase preset {s:?}")))?;
        let p: Vec<f64> = params
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::arg(format!("bad phase parameter {x:?}")))
            })
            .collect::<Result<_>>()?;
        let want = match kind {
            "linear" | "bracket" => 2,
            "quadratic" => 3,
            _ => return Err(Error::arg(format!("unknown phase kind {kind:?}"))),
        };
        if p.len() != want {
            return Err(Error::arg(format!("{kind} takes {want} parameters")));
        }
        Ok(match kind {
            "linear" => PhaseSequence::Linear {
                theta: p[0],
                beta: p[1],
            },
            "quadratic" => PhaseSequence::Quadratic {
                theta2: p[0],
                theta1: p[1],
                theta0: p[2],
            },
            _ => PhaseSequence::Bracket {
                theta: p[0],
                phi: p[1],
            },
        })
    }
}

/// `N^-1 sum_{n <= N} f(n) conj(g(n))` for `f` given at `n = 1, ..., N`.
pub fn correlation(f: &[f64], g: &PhaseSequence) -> Complex64 {
    if f.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    correlation_sum(f, g) / f.len() as f64
}

fn correlation_sum(f: &[f64], g: &PhaseSequence) -> Complex64 {
    par_sum_complex(f.len(), |i| f[i] * g.eval(i as u64 + 1).conj())
}

fn check_tau(n: u64, tau: f64) -> Result<()> {
    let lo = 1.0 / (n as f64).ln();
    if !(tau > lo && tau < 1.0) {
        return Err(Error::arg(format!("tau = {tau} outside (1/log N, 1) = ({lo}, 1)")));
    }
    Ok(())
}

/// Divisor-style pass: `out[n - 1] = sum_{k | n} mu(k)` over the given `k`.
fn divisor_pass(n: u64, terms: &[(u64, i8)]) -> Vec<i32> {
    let mut out = vec![0i32; n as usize];
    for &(k, m) in terms {
        for j in (k..=n).step_by(k as usize) {
            out[(j - 1) as usize] += i32::from(m);
        }
    }
    out
}

/// The truncated Möbius sum at `n = 1, ..., N`.
#[derive(Debug, Clone, PartialEq)]
pub struct HTau {
    pub n: u64,
    pub u: f64,
    pub tau: f64,
    pub y: f64,
    /// `floor(N^(1-tau))`.
    pub cut: u64,
    /// Admissible `k <= cut` with `mu(k)`.
    pub moduli: Vec<(u64, i8)>,
    /// `sum_{k} mu(k) / k` over the admissible `k`.
    pub mean: f64,
    pub values: Vec<f64>,
}

/// `h_tau(n) = sum mu(k) (1_{k | n} - 1/k)` over squarefree
/// `k <= N^(1-tau)` with `P-(k) > N^(1/u)`.
pub fn h_tau(n: u64, u: f64, tau: f64) -> Result<HTau> {
    check_n_u(n, u)?;
    check_tau(n, tau)?;
    let y = snapped_power(n as f64, 1.0 / u);
    let cut = floor_power(n as f64, 1.0 - tau).min(n);
    let moduli = sifted_terms(cut, y)?;
    let mean = moduli
        .iter()
        .rev()
        .map(|&(k, m)| f64::from(m) / k as f64)
        .collect::<NeumaierSum>()
        .value();
    let values = divisor_pass(n, &moduli)
        .into_iter()
        .map(|c| f64::from(c) - mean)
        .collect();
    Ok(HTau {
        n,
        u,
        tau,
        y,
        cut,
        moduli,
        mean,
        values,
    })
}

/// `sum_n h(n) conj(g(n)) = Sigma1 + Sigma2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaSplit {
    pub n: u64,
    pub u: f64,
    pub tau: f64,
    pub sigma1: Complex64,
    pub sigma2: Complex64,
    /// `sum_n h(n) conj(g(n))` from the friable indicator directly.
    pub total: Complex64,
    /// `|Sigma1 + Sigma2 - total| / max(|total|, |Sigma1|, |Sigma2|, 1)`.
    pub identity_error: f64,
    /// `u N (tau u + rho(u) log(u + 1) / log N)`.
    pub sigma2_scale: f64,
}

pub fn sigma_split(n: u64, u: f64, tau: f64, g: &PhaseSequence) -> Result<SigmaSplit> {
    let ht = h_tau(n, u, tau)?;
    let all = sifted_terms(n, ht.y)?;
    let tail: Vec<(u64, i8)> = all.into_iter().filter(|&(k, _)| k > ht.cut).collect();
    let tail_counts = divisor_pass(n, &tail);
    let r = rho(u)?;
    let rest: Vec<f64> = tail_counts
        .iter()
        .map(|&c| f64::from(c) + ht.mean - r)
        .collect();
    let sigma1 = correlation_sum(&ht.values, g);
    let sigma2 = correlation_sum(&rest, g);
    let total = correlation_sum(&balanced_friable(n, u)?.values(), g);
    let scale = total.norm().max(sigma1.norm()).max(sigma2.norm()).max(1.0);
    let nf = n as f64;
    Ok(SigmaSplit {
        n,
        u,
        tau,
        sigma1,
        sigma2,
        total,
        identity_error: (sigma1 + sigma2 - total).norm() / scale,
        sigma2_scale: u * nf * (tau * u + r * (u + 1.0).ln() / nf.ln()),
    })
}

/// `(log log N)^(1+eps) / log N`, kept inside `(1/log N, 1/2)`.
pub fn default_tau(n: u64, epsilon: f64) -> Result<f64> {
    if n < 16 {
        return Err(Error::arg("default tau requires N >= 16"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::arg(format!("epsilon = {epsilon} outside (0, 1]")));
    }
    let log_n = (n as f64).ln();
    let tau = log_n.ln().powf(1.0 + epsilon) / log_n;
    Ok(tau.clamp((1.0 / log_n) * (1.0 + 1e-12), 0.5 * (1.0 - 1e-12)))
}

/// One term `sum_n prod_{i in I} h_i(F_i(n))` of the expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetSum {
    pub subset: Vec<usize>,
    pub value: f64,
}

/// `|Psi_F(K) - Vol(K) prod rho(u_i)| <= sum_I |S_I| + |#K - Vol(K)| prod rho(u_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub count: u64,
    pub lattice_points: u64,
    pub volume: f64,
    pub volume_exact: bool,
    pub rho_product: f64,
    pub lhs: f64,
    pub subset_sums: Vec<SubsetSum>,
    pub boundary: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

pub fn subset_decomposition_bound(
    system: &FormSystem,
    body: &ConvexBody,
    n: u64,
    u: &[f64],
) -> Result<DecompositionReport> {
    let t = system.len();
    if u.len() != t {
        return Err(Error::arg(format!("{} exponents for {t} forms", u.len())));
    }
    if t > MAX_DECOMPOSITION_FORMS {
        return Err(Error::resource(format!("{t} forms exceed {MAX_DECOMPOSITION_FORMS}")));
    }
    if system.dim() != body.dim() {
        return Err(Error::arg("forms and body differ in dimension"));
    }
    if !validate_domain(system, body, n)? {
        return Err(Error::Precondition(format!("some form leaves [0, {n}] on the body")));
    }
    let lattice_points = body.lattice_point_count();
    if lattice_points > MAX_DECOMPOSITION_POINTS {
        return Err(Error::resource(format!(
            "{lattice_points} lattice points exceed {MAX_DECOMPOSITION_POINTS}"
        )));
    }
    let rhos: Vec<f64> = u.iter().map(|&ui| rho(ui)).collect::<Result<_>>()?;
    let ys: Vec<f64> = u.iter().map(|&ui| snapped_power(n as f64, 1.0 / ui)).collect();
    let sieve_hi = (system.dim() as u64 * system.coefficient_bound() + 1)
        .checked_mul(n)
        .ok_or_else(|| Error::resource("sieve bound overflows"))?;
    let sieve = FactorSieve::new(0, sieve_hi)?;
    let lpf = sieve.lpf_table();
    let subsets = (1usize << t) - 1;
    let forms = system.forms();

    let slabs: Vec<(u64, Vec<f64>)> = match body.integer_bounding_box() {
        None => Vec::new(),
        Some(bb) => (bb[0].0..=bb[0].1)
            .into_par_iter()
            .map(|x0| {
                let mut count = 0u64;
                let mut sums = vec![NeumaierSum::new(); subsets];
                let mut h = vec![0.0; t];
                for p in body.slab_points(x0) {
                    let mut all = true;
                    for (i, f) in forms.iter().enumerate() {
                        let friable = lpf[f.evaluate_wide(&p) as usize] as f64 <= ys[i];
                        all &= friable;
                        h[i] = f64::from(u8::from(friable)) - rhos[i];
                    }
                    count += u64::from(all);
                    for (s, acc) in sums.iter_mut().enumerate() {
                        let mask = s + 1;
                        let prod: f64 = (0..t).filter(|i| mask >> i & 1 == 1).map(|i| h[i]).product();
                        acc.add(prod);
                    }
                }
                (count, sums.iter().map(NeumaierSum::value).collect())
            })
            .collect(),
    };
    let count: u64 = slabs.iter().map(|s| s.0).sum();
    let subset_sums: Vec<SubsetSum> = (0..subsets)
        .map(|s| SubsetSum {
            subset: (0..t).filter(|i| (s + 1) >> i & 1 == 1).collect(),
            value: slabs.iter().map(|sl| sl.1[s]).collect::<NeumaierSum>().value(),
        })
        .collect();
    let volume = body.volume();
    let rho_product: f64 = rhos.iter().product();
    let lhs = (count as f64 - volume.value * rho_product).abs();
    let boundary = (lattice_points as f64 - volume.value).abs() * rho_product;
    let rhs = subset_sums
        .iter()
        .map(|s| s.value.abs())
        .collect::<NeumaierSum>()
        .value()
        + boundary;
    let slack = rhs - lhs;
    Ok(DecompositionReport {
        count,
        lattice_points,
        volume: volume.value,
        volume_exact: volume.exact,
        rho_product,
        lhs,
        subset_sums,
        boundary,
        rhs,
        slack,
        holds: lhs <= rhs * (1.0 + 1e-12) + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_exponent_is_zero() {
        let h = balanced_friable(500, 1.0).unwrap();
        assert!(h.values().iter().all(|&v| v == 0.0));
        assert_eq!(correlation(&h.values(), &PhaseSequence::golden()), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn power_of_two_is_friable() {
        let u = 10f64.log2();
        let h = balanced_friable(10, u).unwrap();
        assert_eq!(h.y(), 2.0);
        assert_eq!(h.value(8), 1.0 - rho(u).unwrap());
        assert_eq!(h.value(6), -rho(u).unwrap());
    }

    #[test]
    fn phases_have_unit_modulus() {
        let presets = [
            PhaseSequence::Constant,
            PhaseSequence::golden(),
            PhaseSequence::silver(),
            PhaseSequence::golden_quadratic(),
            PhaseSequence::golden_bracket(),
        ];
        for g in presets {
            for n in [1u64, 7, 1000, 99_999, 10_000_000] {
                assert!((g.eval(n).norm() - 1.0).abs() < 1e-14);
            }
            assert_eq!(g.to_string().parse::<PhaseSequence>().unwrap(), g);
        }
        assert_eq!(PhaseSequence::golden_bracket().step(), 2);
        assert!("spiral:1".parse::<PhaseSequence>().is_err());
        assert!("linear:1".parse::<PhaseSequence>().is_err());
    }

    #[test]
    fn bracket_phase_definition() {
        let g = PhaseSequence::Bracket { theta: 0.25, phi: 0.5 };
        // n = 6: floor(3) = 3, phase = 0.25 * 18 = 4.5
        assert!((g.phase(6).rem_euclid(1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn h_tau_small_moduli() {
        let ht = h_tau(100, 2.0, 0.3).unwrap();
        let ks: Vec<u64> = ht.moduli.iter().map(|m| m.0).collect();
        assert_eq!(ks, vec![1, 11, 13, 17, 19, 23]);
    }

    #[test]
    fn h_tau_vanishes_when_only_k_one() {
        let ht = h_tau(1000, 1.2, 0.5).unwrap();
        assert_eq!(ht.moduli, vec![(1, 1)]);
        assert!(ht.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn default_tau_values() {
        let t = default_tau(1_000_000, 0.5).unwrap();
        assert!((t - 0.308).abs() < 1e-3);
        let t16 = default_tau(16, 0.5).unwrap();
        let log16 = 16f64.ln();
        assert!((t16 - log16.ln().powf(1.5) / log16).abs() < 1e-15);
        assert!(default_tau(15, 0.5).is_err());
        assert!(default_tau(100, 0.0).is_err());
    }

    #[test]
    fn argument_errors() {
        assert!(balanced_friable(1, 2.0).is_err());
        assert!(balanced_friable(100, 0.5).is_err());
        assert!(balanced_friable(100, 21.0).is_err());
        assert!(h_tau(100, 2.0, 0.2).is_err());
        assert!(h_tau(100, 2.0, 1.0).is_err());
    }
}
