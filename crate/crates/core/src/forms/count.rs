use rayon::prelude::*;
use serde::Serialize;

use super::{ConvexBody, FormSystem, Volume};
use crate::dickman::rho;
use crate::error::{Error, Result};
use crate::numeric::snapped_power;
use crate::sieve::FactorSieve;

use num_rational::BigRational;

fn big(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn check_dims(system: &FormSystem, body: &ConvexBody) -> Result<()> {
    if system.dim() != body.dim() {
        return Err(Error::arg(format!(
            "forms in {} variables but body of dimension {}",
            system.dim(),
            body.dim()
        )));
    }
    Ok(())
}

/// `true` iff every form maps the body into `[0, N]`.
///
/// Fails with a precondition error when the body is not contained in
/// `[-N, N]^d`.
pub fn validate_domain(system: &FormSystem, body: &ConvexBody, n: u64) -> Result<bool> {
    check_dims(system, body)?;
    let Some(bb) = body.bounding_box() else {
        return Ok(true);
    };
    let (lo, hi) = (-big(n), big(n));
    if bb.iter().any(|(a, b)| a < &lo || b > &hi) {
        return Err(Error::Precondition(format!("body is not contained in [-{n}, {n}]^d")));
    }
    for form in system.forms() {
        let (min, max) = body
            .linear_range(form.coeffs())
            .expect("nonempty body has a range");
        let c = BigRational::from_integer(form.constant().into());
        if min + &c < BigRational::from_integer(0.into()) || max + &c > hi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of lattice points `n` of the body with `P+(F_i(n)) <= N^(1/u_i)`
/// for every `i`.
pub fn count_friable_values(system: &FormSystem, body: &ConvexBody, n: u64, u: &[f64]) -> Result<u64> {
    if u.len() != system.len() {
        return Err(Error::arg(format!(
            "{} friability exponents for {} forms",
            u.len(),
            system.len()
        )));
    }
    if let Some(bad) = u.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::arg(format!("friability exponent u = {bad} must be positive")));
    }
    let bounds: Vec<f64> = u.iter().map(|&ui| snapped_power(n as f64, 1.0 / ui)).collect();
    count_friable_values_with_bounds(system, body, n, &bounds)
}

/// As [`count_friable_values`] with explicit friability bounds `y_i`.
pub fn count_friable_values_with_bounds(
    system: &FormSystem,
    body: &ConvexBody,
    n: u64,
    bounds: &[f64],
) -> Result<u64> {
    if bounds.len() != system.len() {
        return Err(Error::arg("one friability bound per form is required"));
    }
    if !system.check_pairwise_affine_independence() {
        return Err(Error::arg("two forms of the system are affinely related"));
    }
    if !validate_domain(system, body, n)? {
        return Err(Error::Precondition(format!(
            "some form leaves [0, {n}] on the body"
        )));
    }
    let d = system.dim() as u64;
    let sieve_hi = d
        .checked_mul(system.coefficient_bound())
        .and_then(|x| x.checked_add(1))
        .and_then(|x| x.checked_mul(n))
        .ok_or_else(|| Error::resource("sieve bound (dL+1)N overflows"))?;
    let sieve = FactorSieve::new(0, sieve_hi)?;
    let lpf = sieve.lpf_table();
    let Some(bb) = body.integer_bounding_box() else {
        return Ok(0);
    };
    let forms = system.forms();
    Ok((bb[0].0..=bb[0].1)
        .into_par_iter()
        .map(|x0| {
            body.slab_points(x0)
                .filter(|p| {
                    forms.iter().zip(bounds).all(|(f, &y)| {
                        let v = f.evaluate_wide(p) as usize;
                        lpf[v] as f64 <= y
                    })
                })
                .count() as u64
        })
        .sum())
}

/// `Vol(K) * prod rho(u_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTerm {
    pub value: f64,
    pub volume: Volume,
    pub rho_product: f64,
}

pub fn main_term(system: &FormSystem, body: &ConvexBody, _n: u64, u: &[f64]) -> Result<MainTerm> {
    check_dims(system, body)?;
    if u.len() != system.len() {
        return Err(Error::arg("one friability exponent per form is required"));
    }
    let rho_product = u.iter().map(|&ui| rho(ui)).product::<Result<f64>>()?;
    let volume = body.volume();
    Ok(MainTerm {
        value: volume.value * rho_product,
        volume,
        rho_product,
    })
}

/// `N^d * prod rho(d_i u)` for forms of degrees `d_1 >= ... >= d_t >= 1`.
pub fn conjecture_prediction(degrees: &[u32], u: f64, n: u64, d: u32) -> Result<f64> {
    if degrees.is_empty() || degrees.iter().any(|&k| k == 0) {
        return Err(Error::arg("degrees must be at least 1"));
    }
    if degrees.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::arg("degrees must be nonincreasing"));
    }
    let product = degrees.iter().map(|&k| rho(k as f64 * u)).product::<Result<f64>>()?;
    Ok((n as f64).powi(d as i32) * product)
}
