use friable_core::forms::{
    count_friable_values, main_term, parse_body, parse_forms, ConvexBody, FormSystem, HPolytope,
};
use friable_core::numeric::snapped_power;
use friable_core::sieve::psi_count;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_form_reduces_to_psi_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let system = parse_forms("x1", 1).unwrap();
    for _ in 0..20 {
        let n: u64 = rng.gen_range(2..=100_000);
        let u: f64 = rng.gen_range(1.0..6.0);
        let body = ConvexBody::boxed(vec![1], vec![n as i64]).unwrap();
        let y = snapped_power(n as f64, 1.0 / u);
        assert_eq!(count_friable_values(&system, &body, n, &[u]).unwrap(), psi_count(n, y).unwrap());
    }
}

fn hexagon(n: i64) -> ConvexBody {
    let rows = vec![
        (vec![1, 0], n),
        (vec![-1, 0], 0),
        (vec![0, 1], n),
        (vec![0, -1], 0),
        (vec![1, 1], 3 * n / 2),
        (vec![-1, -1], -n / 3),
    ];
    ConvexBody::Polytope(HPolytope::from_integer_rows(2, rows).unwrap())
}

fn tetra_cut(n: i64) -> ConvexBody {
    let rows = vec![
        (vec![-1, 0, 0], 0),
        (vec![0, -1, 0], 0),
        (vec![0, 0, -1], 0),
        (vec![1, 1, 1], n),
        (vec![2, -1, 0], n),
        (vec![0, 1, -2], n / 2),
    ];
    ConvexBody::Polytope(HPolytope::from_integer_rows(3, rows).unwrap())
}

#[test]
fn enumeration_matches_inclusion_test() {
    for body in [hexagon(120), tetra_cut(40), ConvexBody::simplex(3, 1, 45).unwrap()] {
        let bb = body.integer_bounding_box().unwrap();
        let mut inside = 0u64;
        let mut p = bb.iter().map(|r| r.0).collect::<Vec<_>>();
        'outer: loop {
            inside += u64::from(body.contains(&p));
            for i in (0..p.len()).rev() {
                if p[i] < bb[i].1 {
                    p[i] += 1;
                    continue 'outer;
                }
                p[i] = bb[i].0;
            }
            break;
        }
        assert!(inside <= 100_000);
        assert_eq!(body.lattice_point_count(), inside);
        assert_eq!(body.lattice_points().count() as u64, inside);
    }
}

fn monte_carlo_volume(body: &ConvexBody, samples: usize, seed: u64) -> f64 {
    let bb = body.integer_bounding_box().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; bb.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for (xi, &(lo, hi)) in x.iter_mut().zip(&bb) {
            *xi = rng.gen_range(lo as f64..=hi as f64);
        }
        hits += usize::from(body.contains_real(&x));
    }
    let box_volume: f64 = bb.iter().map(|&(lo, hi)| (hi - lo) as f64).product();
    box_volume * hits as f64 / samples as f64
}

#[test]
fn surrogate_volume_matches_monte_carlo() {
    for (body, seed) in [(hexagon(120), 1), (tetra_cut(40), 2)] {
        let v = body.volume();
        assert!(!v.exact);
        let mc = monte_carlo_volume(&body, 10_000_000, seed);
        assert!((v.value / mc - 1.0).abs() <= 0.01, "{} vs {mc}", v.value);
    }
}

#[test]
fn main_term_closed_forms() {
    let n = 500u64;
    let l = 1.0 - 2f64.ln();
    let s2 = parse_forms("x1; x2", n as i64).unwrap();
    let b = ConvexBody::boxed(vec![0, 0], vec![n as i64, n as i64]).unwrap();
    let m = main_term(&s2, &b, n, &[2.0, 2.0]).unwrap();
    assert!((m.value - (n * n) as f64 * l * l).abs() < 1e-9 * m.value);
    let s3 = parse_forms("x1; x2; x1+x2", n as i64).unwrap();
    let k = parse_body("simplex:0,N", 2, n as i64).unwrap();
    let m = main_term(&s3, &k, n, &[2.0, 2.0, 2.0]).unwrap();
    assert!(m.volume.exact);
    assert!((m.value - (n * n) as f64 / 2.0 * l.powi(3)).abs() < 1e-9 * m.value);
    let m = main_term(&s3, &k, n, &[1.0, 1.0, 1.0]).unwrap();
    assert_eq!(m.value, m.volume.value);
}

fn harper(n: i64) -> FormSystem {
    parse_forms("x1; x2; x1+x2", n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_covariance(vx in -60i64..=60, vy in -60i64..=60, c in 0i64..=20, u in 1.0f64..3.5) {
        let n = 200i64;
        let system = parse_forms(&format!("x1 + {c}; x2; x1+x2"), n).unwrap();
        let body = ConvexBody::boxed(vec![3, 5], vec![70, 90]).unwrap();
        let base = count_friable_values(&system, &body, n as u64, &[u, u, u]).unwrap();
        let moved = count_friable_values(
            &system.shifted(&[vx, vy]).unwrap(),
            &body.translated(&[vx, vy]),
            n as u64,
            &[u, u, u],
        )
        .unwrap();
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn count_monotone_in_each_exponent(i in 0usize..3, u in 1.2f64..3.0, du in 0.05f64..1.0) {
        let n = 400u64;
        let body = ConvexBody::simplex(2, 1, n as i64).unwrap();
        let mut us = [2.0, 2.5, 1.5];
        us[i] = u + du;
        let smaller_threshold = count_friable_values(&harper(n as i64), &body, n, &us).unwrap();
        us[i] = u;
        let larger_threshold = count_friable_values(&harper(n as i64), &body, n, &us).unwrap();
        prop_assert!(larger_threshold >= smaller_threshold);
    }
}
