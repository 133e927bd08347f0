use friable_core::correlate::{
    balanced_friable, correlation, default_tau, h_tau, sigma_split, subset_decomposition_bound,
    PhaseSequence,
};
use friable_core::dickman::rho;
use friable_core::forms::{parse_forms, ConvexBody};
use friable_core::numeric::{floor_power, snapped_power};
use friable_core::sieve::psi_count;
use num_complex::Complex64;

/// Squarefree `k` with every prime factor above `y`, by trial division.
fn admissible(k: u64, y: f64) -> Option<i8> {
    let mut m = k;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 || p as f64 <= y {
                return None;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        if m as f64 <= y {
            return None;
        }
        sign = -sign;
    }
    Some(sign)
}

#[test]
fn h_tau_matches_direct_evaluation() {
    for (n, u, tau) in [(100u64, 2.0, 0.3), (2000, 2.5, 0.25), (10_000, 2.0, 0.2), (10_000, 3.0, 0.15)] {
        let ht = h_tau(n, u, tau).unwrap();
        let y = snapped_power(n as f64, 1.0 / u);
        let cut = floor_power(n as f64, 1.0 - tau);
        let ks: Vec<(u64, i8)> = (1..=cut).filter_map(|k| admissible(k, y).map(|m| (k, m))).collect();
        assert_eq!(ht.moduli, ks);
        for m in 1..=n {
            let direct: f64 = ks
                .iter()
                .map(|&(k, mu)| f64::from(mu) * (f64::from(u8::from(m % k == 0)) - 1.0 / k as f64))
                .sum();
            assert!((ht.values[(m - 1) as usize] - direct).abs() < 1e-9, "n={m}");
        }
    }
}

#[test]
fn h_tau_sup_bound() {
    let ht = h_tau(10_000, 2.0, 0.2).unwrap();
    let harmonic: f64 = ht.moduli.iter().map(|&(k, _)| 1.0 / k as f64).sum();
    let sup = ht.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert!(sup <= 4.0 + harmonic, "{sup}");
}

#[test]
fn admissible_divisor_count_bound() {
    for (n, u) in [(10_000u64, 2.0), (10_000, 2.5), (50_000, 3.0), (20_000, 1.5)] {
        let y = snapped_power(n as f64, 1.0 / u);
        let mut counts = vec![0u32; n as usize + 1];
        for k in 1..=n {
            if admissible(k, y).is_some() {
                for m in (k..=n).step_by(k as usize) {
                    counts[m as usize] += 1;
                }
            }
        }
        let max = *counts.iter().max().unwrap();
        assert!(max <= 1 << (u.ceil() as u32), "N={n} u={u}: {max}");
    }
}

#[test]
fn balanced_function_sums_to_psi_defect() {
    for (n, u) in [(1000u64, 2.0), (30_000, 3.0), (12_345, 1.7)] {
        let h = balanced_friable(n, u).unwrap();
        let psi = psi_count(n, h.y()).unwrap();
        assert_eq!(h.friable_count(), psi);
        let r = rho(u).unwrap();
        assert_eq!(h.sum(), psi as f64 - n as f64 * r);
        let summed: f64 = h.values().iter().sum();
        assert!((summed - h.sum()).abs() < 1e-8 * n as f64);
        assert!(h.values().iter().all(|v| v.abs() <= 1.0));
        let c = correlation(&h.values(), &PhaseSequence::Constant);
        assert!((c.re - h.sum() / n as f64).abs() < 1e-12 && c.im == 0.0);
    }
}

#[test]
fn sequence_embedding_sets_origin_to_zero() {
    let h = balanced_friable(50, 2.0).unwrap();
    let s = h.to_sequence().unwrap();
    assert_eq!(s.len(), 51);
    assert_eq!(s.values()[0], Complex64::new(0.0, 0.0));
    assert_eq!(s.values()[7].re, h.value(7));
}

#[test]
fn correlation_decays_for_irrational_phases() {
    let presets = [
        PhaseSequence::golden(),
        PhaseSequence::silver(),
        PhaseSequence::golden_quadratic(),
        PhaseSequence::golden_bracket(),
    ];
    let small = balanced_friable(1000, 2.0).unwrap().values();
    let mid = balanced_friable(10_000, 2.0).unwrap().values();
    let large = balanced_friable(100_000, 2.0).unwrap().values();
    for g in presets {
        let (a, b) = (correlation(&small, &g).norm(), correlation(&large, &g).norm());
        assert!(b < a, "{g}: {a} -> {b}");
    }
    let g = PhaseSequence::golden();
    assert!(correlation(&large, &g).norm() < correlation(&mid, &g).norm());
}

#[test]
fn sigma_split_identity() {
    let phases = [
        PhaseSequence::Constant,
        PhaseSequence::golden(),
        PhaseSequence::golden_bracket(),
        PhaseSequence::Quadratic { theta2: 0.1, theta1: 0.3, theta0: 0.7 },
    ];
    for (n, u, tau) in [(1000u64, 2.0, 0.2), (20_000, 2.5, 0.25), (50_000, 3.0, 0.1)] {
        for g in &phases {
            let s = sigma_split(n, u, tau, g).unwrap();
            assert!(s.identity_error <= 1e-8, "{n} {u} {tau} {g}: {}", s.identity_error);
            let via_corr = correlation(&balanced_friable(n, u).unwrap().values(), g) * n as f64;
            let err = (s.sigma1 + s.sigma2 - via_corr).norm();
            assert!(err <= 1e-8 * via_corr.norm().max(s.sigma1.norm()).max(1.0));
        }
    }
}

#[test]
fn sigma_split_trivial_exponent() {
    let s = sigma_split(5000, 1.0, 0.3, &PhaseSequence::Constant).unwrap();
    assert!(s.sigma1.norm() < 1e-9 && s.sigma2.norm() < 1e-9);
}

#[test]
fn sigma2_constant_is_moderate() {
    let mut worst = 0.0f64;
    for n in [10_000u64, 100_000] {
        for u in [1.5, 2.0, 3.0] {
            for tau in [0.15, 0.25] {
                if tau * u >= 1.0 {
                    continue;
                }
                let s = sigma_split(n, u, tau, &PhaseSequence::golden()).unwrap();
                worst = worst.max(s.sigma2.norm() / s.sigma2_scale);
            }
        }
    }
    assert!(worst <= 50.0, "{worst}");
}

#[test]
fn default_tau_decreasing() {
    let mut prev = f64::INFINITY;
    for e in 2..=15 {
        let t = default_tau(10u64.pow(e), 0.5).unwrap();
        assert!(t < prev);
        assert!(t > 1.0 / (10f64.powi(e as i32)).ln() && t < 0.5);
        prev = t;
    }
}

#[test]
fn decomposition_single_form() {
    let n = 3000u64;
    let s = parse_forms("x1", n as i64).unwrap();
    let k = ConvexBody::boxed(vec![1], vec![n as i64]).unwrap();
    let r = subset_decomposition_bound(&s, &k, n, &[2.0]).unwrap();
    let psi = psi_count(n, snapped_power(n as f64, 0.5)).unwrap();
    assert_eq!(r.count, psi);
    assert_eq!(r.subset_sums.len(), 1);
    let expect = psi as f64 - n as f64 * rho(2.0).unwrap();
    assert!((r.subset_sums[0].value - expect).abs() < 1e-8);
    assert!(r.holds);
}

#[test]
fn decomposition_unit_exponents() {
    let n = 300u64;
    let s = parse_forms("x1; x2; x1+x2", n as i64).unwrap();
    let k = ConvexBody::simplex(2, 1, n as i64).unwrap();
    let r = subset_decomposition_bound(&s, &k, n, &[1.0, 1.0, 1.0]).unwrap();
    assert!(r.subset_sums.iter().all(|s| s.value == 0.0));
    assert!(r.lhs <= r.boundary + 1e-9);
    assert!(r.holds);
}

#[test]
fn decomposition_harper_system() {
    let n = 2000u64;
    let s = parse_forms("x1; x2; x1+x2", n as i64).unwrap();
    let k = ConvexBody::simplex(2, 1, n as i64).unwrap();
    let u = [2.0, 2.0, 2.0];
    let r = subset_decomposition_bound(&s, &k, n, &u).unwrap();
    assert_eq!(r.subset_sums.len(), 7);
    assert!(r.holds, "{r:?}");
    // Psi - #K prod rho = sum_I prod_{i not in I} rho_i S_I
    let rho2 = rho(2.0).unwrap();
    let expansion: f64 = r
        .subset_sums
        .iter()
        .map(|s| rho2.powi(3 - s.subset.len() as i32) * s.value)
        .sum();
    let direct = r.count as f64 - r.lattice_points as f64 * rho2.powi(3);
    assert!((expansion - direct).abs() < 1e-6 * direct.abs(), "{expansion} vs {direct}");
}
