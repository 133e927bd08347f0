//! Gowers uniformity norms `U^k` on cyclic groups and on intervals.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::numeric::{par_sum_blocked, ComplexSum, NeumaierSum};

/// Slack allowed above modulus 1 for sequence values.
pub const VALUE_SLACK: f64 = 1e-12;
/// Negative `2^k`-th powers above this are clipped to zero.
pub const CLIP_TOLERANCE: f64 = 1e-12;
pub const MAX_MODULUS_U3: usize = 1 << 14;
pub const MAX_MODULUS_U4: usize = 1 << 9;
pub const MAX_BRUTEFORCE_WORK: f64 = 1e9;
/// Derivative shells per reduction block.
const SHELL_BLOCK: usize = 16;

/// A complex sequence bounded by 1 in modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFn {
    values: Vec<Complex64>,
    label: String,
}

impl SequenceFn {
    pub fn new(values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::arg("sequence must be nonempty"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.norm() <= 1.0 + VALUE_SLACK))
        {
            return Err(Error::arg(format!("|f({i})| = {} exceeds 1", v.norm())));
        }
        Ok(SequenceFn {
            values,
            label: label.into(),
        })
    }

    pub fn from_real(values: &[f64], label: impl Into<String>) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect(), label)
    }

    pub fn constant(len: usize, c: Complex64) -> Result<Self> {
        Self::new(vec![c; len], "constant")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

fn check_order(k: u32, m: usize) -> Result<()> {
    if !(2..=4).contains(&k) {
        return Err(Error::arg(format!("k = {k} outside 2..=4")));
    }
    let limit = match k {
        3 => MAX_MODULUS_U3,
        4 => MAX_MODULUS_U4,
        _ => usize::MAX,
    };
    if m > limit {
        return Err(Error::resource(format!(
            "U^{k} on size {m} exceeds the limit {limit}"
        )));
    }
    Ok(())
}

struct CyclicNorm {
    fft: Arc<dyn Fft<f64>>,
    m: usize,
}

impl CyclicNorm {
    fn new(m: usize) -> Self {
        CyclicNorm {
            fft: FftPlanner::new().plan_fft_forward(m),
            m,
        }
    }

    /// `sum_xi |f^(xi)|^4` with `f^(xi) = E_x f(x) e(-x xi / M)`.
    fn u2_power(&self, f: &[Complex64]) -> f64 {
        let mut buf = f.to_vec();
        self.fft.process(&mut buf);
        let scale = (self.m as f64).powi(4);
        buf.iter()
            .map(|z| z.norm_sqr() * z.norm_sqr())
            .collect::<NeumaierSum>()
            .value()
            / scale
    }

    /// `||f||_{U^k}^{2^k}`, before clipping.
    fn power(&self, f: &[Complex64], k: u32) -> f64 {
        if k == 2 {
            return self.u2_power(f);
        }
        let m = self.m;
        let total = par_sum_blocked(m, SHELL_BLOCK, |h| {
            let d: Vec<Complex64> = (0..m).map(|n| f[(n + h) % m] * f[n].conj()).collect();
            if d.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                0.0
            } else {
                self.power(&d, k - 1)
            }
        });
        total / m as f64
    }
}

fn root(power: f64, k: u32) -> Result<f64> {
    let p = if power < 0.0 {
        if power < -CLIP_TOLERANCE {
            return Err(Error::numeric(format!(
                "U^{k} power {power:e} is negative beyond rounding"
            )));
        }
        0.0
    } else {
        power
    };
    Ok(p.powf(1.0 / f64::from(1u32 << k)))
}

/// `||f||_{U^k(Z_M)}` with `M = f.len()`.
pub fn gowers_norm_cyclic(f: &SequenceFn, k: u32) -> Result<f64> {
    check_order(k, f.len())?;
    let engine = CyclicNorm::new(f.len());
    root(engine.power(f.values(), k), k)
}

/// `||f||_{U^k[N]}` for `f` on `{0, ..., N}`, computed in `Z_{M'}` with
/// `M' = 2^k (N + 1)` and normalised by the norm of the interval indicator.
pub fn gowers_norm_interval(f: &SequenceFn, k: u32) -> Result<f64> {
    let modulus = (1usize << k.min(4)) * f.len();
    gowers_norm_interval_in(f, k, modulus)
}

/// [`gowers_norm_interval`] with an explicit ambient modulus of at least
/// `2^k (N + 1)`.
pub fn gowers_norm_interval_in(f: &SequenceFn, k: u32, modulus: usize) -> Result<f64> {
    check_order(k, f.len() - 1)?;
    if modulus < (1usize << k) * f.len() {
        return Err(Error::arg(format!(
            "modulus {modulus} below 2^{k} (N + 1) = {}",
            (1usize << k) * f.len()
        )));
    }
    let engine = CyclicNorm::new(modulus);
    let mut padded = vec![Complex64::new(0.0, 0.0); modulus];
    padded[..f.len()].copy_from_slice(f.values());
    let num = root(engine.power(&padded, k), k)?;
    padded[..f.len()].fill(Complex64::new(1.0, 0.0));
    let den = root(engine.power(&padded, k), k)?;
    Ok(num / den)
}

/// `||f||_{U^k(Z_M)}` by direct `(k+1)`-fold summation.
pub fn gowers_norm_bruteforce(f: &SequenceFn, k: u32) -> Result<f64> {
    if !(1..=4).contains(&k) {
        return Err(Error::arg(format!("k = {k} outside 1..=4")));
    }
    let m = f.len();
    if (m as f64).powi(k as i32 + 1) > MAX_BRUTEFORCE_WORK {
        return Err(Error::resource(format!("M^(k+1) for M = {m} exceeds 1e9")));
    }
    let v = f.values();
    let cube = 1usize << k;
    let points = m.pow(k);
    let total = par_sum_blocked(m, 1, |x| {
        let mut acc = ComplexSum::new();
        let mut h = vec![0usize; k as usize];
        let mut shift = vec![0usize; cube];
        for idx in 0..points {
            let mut r = idx;
            for hj in h.iter_mut() {
                *hj = r % m;
                r /= m;
            }
            for omega in 1..cube {
                let j = omega.trailing_zeros() as usize;
                shift[omega] = shift[omega & (omega - 1)] + h[j];
            }
            let mut prod = Complex64::new(1.0, 0.0);
            for (omega, &s) in shift.iter().enumerate() {
                let z = v[(x + s) % m];
                prod *= if omega.count_ones() % 2 == 1 { z.conj() } else { z };
            }
            acc.add(prod);
        }
        acc.value().re
    });
    root(total / (m as f64).powi(k as i32 + 1), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::unit_phase;

    fn seq(values: Vec<Complex64>) -> SequenceFn {
        SequenceFn::new(values, "test").unwrap()
    }

    #[test]
    fn constant_one_has_unit_norm() {
        let f = SequenceFn::constant(32, Complex64::new(1.0, 0.0)).unwrap();
        for k in 2..=4 {
            assert!((gowers_norm_cyclic(&f, k).unwrap() - 1.0).abs() < 1e-14);
        }
        let g = SequenceFn::constant(16, Complex64::new(1.0, 0.0)).unwrap();
        assert!((gowers_norm_bruteforce(&g, 3).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_character() {
        let m = 40;
        let f = seq((0..m).map(|n| unit_phase(n as f64 / m as f64)).collect());
        assert!((gowers_norm_cyclic(&f, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass() {
        let m = 50;
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        v[0] = Complex64::new(1.0, 0.0);
        let got = gowers_norm_cyclic(&seq(v), 2).unwrap();
        assert!((got - (m as f64).powf(-0.75)).abs() < 1e-14);
    }

    #[test]
    fn alternating_sign_bruteforce() {
        let f = SequenceFn::from_real(
            &(0..16).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>(),
            "alternating",
        )
        .unwrap();
        assert!((gowers_norm_bruteforce(&f, 2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interval_trivial_cases() {
        let one = SequenceFn::constant(100, Complex64::new(1.0, 0.0)).unwrap();
        let zero = SequenceFn::constant(100, Complex64::new(0.0, 0.0)).unwrap();
        for k in 2..=3 {
            assert_eq!(gowers_norm_interval(&one, k).unwrap(), 1.0);
            assert_eq!(gowers_norm_interval(&zero, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn guardrails() {
        let f = SequenceFn::constant(MAX_MODULUS_U4 + 1, Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(gowers_norm_cyclic(&f, 4), Err(Error::Resource(_))));
        assert!(matches!(gowers_norm_cyclic(&f, 1), Err(Error::Argument(_))));
        assert!(matches!(gowers_norm_cyclic(&f, 5), Err(Error::Argument(_))));
        assert!(matches!(gowers_norm_bruteforce(&f, 3), Err(Error::Resource(_))));
        assert!(SequenceFn::from_real(&[1.5], "big").is_err());
        assert!(SequenceFn::from_real(&[], "empty").is_err());
    }
}
