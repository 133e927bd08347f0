//! Oracles shared by several test targets.

#![allow(dead_code)]

/// Taylor coefficients of `rho` about `k + 1/2` on each unit interval.
pub struct SeriesOracle {
    coeffs: Vec<Vec<f64>>,
}

impl SeriesOracle {
    const TERMS: usize = 90;

    pub fn new(intervals: usize) -> Self {
        let mut coeffs = vec![{
            let mut c = vec![0.0; Self::TERMS];
            c[0] = 1.0;
            c
        }];
        for k in 1..intervals {
            let prev = &coeffs[k - 1];
            let center = k as f64 + 0.5;
            let mut a = vec![0.0; Self::TERMS];
            // (c + x) rho'(c + x) = -rho(c - 1 + x)
            for j in 0..Self::TERMS - 1 {
                a[j + 1] = -(prev[j] + j as f64 * a[j]) / (center * (j + 1) as f64);
            }
            let right_of_prev = horner(prev, 0.5);
            let rest = horner(&a, -0.5);
            a[0] = right_of_prev - rest;
            coeffs.push(a);
        }
        SeriesOracle { coeffs }
    }

    pub fn rho(&self, u: f64) -> f64 {
        let k = (u.floor() as usize).min(self.coeffs.len() - 1);
        horner(&self.coeffs[k], u - (k as f64 + 0.5))
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `rho(3) = rho(2) - int_2^3 (1 - log(t - 1)) / t dt` with 30 panels of
/// the 5-point Gauss-Legendre rule.
pub fn rho3_composite_gauss() -> f64 {
    const X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683_1,
        0.0,
        0.538_469_310_105_683_1,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.236_926_885_056_189_1,
        0.478_628_670_499_366_5,
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
    ];
    let panels = 30;
    let h = 1.0 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = 2.0 + (p as f64 + 0.5) * h;
        for (x, w) in X.iter().zip(W) {
            let t = mid + 0.5 * h * x;
            total += 0.5 * h * w * (1.0 - (t - 1.0).ln()) / t;
        }
    }
    (1.0 - 2f64.ln()) - total
}

