//! Floating-point helpers shared by the analytic modules: compensated
//! summation, thread-count-independent parallel reductions, Gauss-Legendre
//! rules and robust evaluation of real powers that land on integers.

use num_complex::Complex64;
use rayon::prelude::*;

/// Block length of every parallel reduction. Partial sums are formed per
/// block and combined in block order, so results do not depend on the
/// number of worker threads.
pub const REDUCTION_BLOCK: usize = 1 << 12;

/// Relative slack used when a real power such as `N^(1/u)` is meant to hit
/// an integer exactly.
pub const SNAP_RELATIVE: f64 = 1e-12;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<NeumaierSum>().value()
}

/// Compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Deterministic parallel sum of `f(i)` for `i` in `0..len`.
pub fn par_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    par_sum_blocked(len, REDUCTION_BLOCK, f)
}

/// As [`par_sum`] with a caller-chosen block size, for expensive terms.
/// The result depends on `block` but never on the thread count.
pub fn par_sum_blocked<F>(len: usize, block: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let block = block.max(1);
    let partials: Vec<f64> = (0..len.div_ceil(block))
        .into_par_iter()
        .map(|b| {
            let start = b * block;
            let end = (start + block).min(len);
            (start..end).map(&f).collect::<NeumaierSum>().value()
        })
        .collect();
    compensated_sum(&partials)
}

/// Deterministic parallel complex sum of `f(i)` for `i` in `0..len`.
pub fn par_sum_complex<F>(len: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let partials: Vec<Complex64> = (0..len.div_ceil(REDUCTION_BLOCK))
        .into_par_iter()
        .map(|b| {
            let start = b * REDUCTION_BLOCK;
            let end = (start + REDUCTION_BLOCK).min(len);
            let mut acc = ComplexSum::new();
            for i in start..end {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    let mut acc = ComplexSum::new();
    for z in partials {
        acc.add(z);
    }
    acc.value()
}

/// `base^exponent`, snapped to the nearest integer when it lies within
/// [`SNAP_RELATIVE`] of one. `1000^(1/3)` evaluates to `9.999999999999998`
/// in plain floating point, which would wrongly exclude 10 from the
/// friable range.
pub fn snapped_power(base: f64, exponent: f64) -> f64 {
    let v = base.powf(exponent);
    let r = v.round();
    if r > 0.0 && ((v - r) / r).abs() <= SNAP_RELATIVE {
        r
    } else {
        v
    }
}

/// `floor(base^exponent)` with the same snapping as [`snapped_power`].
pub fn floor_power(base: f64, exponent: f64) -> u64 {
    let v = snapped_power(base, exponent);
    if v <= 0.0 {
        0
    } else {
        v.floor() as u64
    }
}

/// Fractional part of `theta * m` keeping the rounding error of the product.
#[inline]
pub fn frac_mul(theta: f64, m: f64) -> f64 {
    let p = theta * m;
    let e = theta.mul_add(m, -p);
    let f = (p - p.floor()) + e;
    f - f.floor()
}

/// `e(x) = exp(2 pi i x)`.
#[inline]
pub fn unit_phase(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let (p, pm1) = if n == 0 { (1.0, 0.0) } else if n == 1 { (x, 1.0) } else { (p1, p0) };
    let d = n as f64 * (x * p - pm1) / (x * x - 1.0);
    (p, d)
}

/// Integral of `f` over `[a, b]` with an `n`-point Gauss-Legendre rule.
pub fn gauss_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .collect::<NeumaierSum>()
        .value()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(&xs), 2.0);
    }

    #[test]
    fn par_sum_matches_sequential_order_independent() {
        let n = 100_000;
        let s = par_sum(n, |i| 1.0 / (i as f64 + 1.0));
        let direct: f64 = (0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect::<NeumaierSum>().value();
        assert!((s - direct).abs() < 1e-12);
    }

    #[test]
    fn snapped_power_hits_integers() {
        assert_eq!(snapped_power(1000.0, 1.0 / 3.0), 10.0);
        assert_eq!(snapped_power(1e6, 1.0 / 1.5), 10000.0);
        assert_eq!(floor_power(1e4, 0.5), 100);
        assert!((snapped_power(2.0, 0.5) - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 19 is the limit of exactness for 10 points
        let v = gauss_integrate(|t| t.powi(18), 0.0, 1.0, &x, &w);
        assert!((v - 1.0 / 19.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(7);
        let v = gauss_integrate(|t| t.exp(), 0.0, 1.0, &x, &w);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn frac_mul_stays_in_unit_interval() {
        for m in [0.0, 1.0, 12345.0, 1e10] {
            let f = frac_mul(0.6180339887498949, m);
            assert!((0.0..1.0).contains(&f));
        }
    }
}
